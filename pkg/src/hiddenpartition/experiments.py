"""Seeded Monte-Carlo trial runner and result records.

Every trial gets three named randomness streams derived from the one
experiment seed: "instance" (hidden bit, x, sigma), "protocol" (the
sender/decider), and "tiebreak" (zero-statistic coin flips).  Records are
written in trial order, so identical configurations produce byte-identical
output.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from typing import Callable, Optional

from .boolfn import BooleanFunction
from .classical import (
    ProtocolOutcome,
    UnsupportedFunctionError,
    level_one_slots,
    run_classical,
    run_uniform_phd1,
)
from .instances import PartitionParams, generate_instance
from .quantum import run_quantum
from .rng import coin, stream
from .signpoly import BelowSignDegreeError, best_sign_polynomial, sign_degree

PROTOCOLS = ("classical", "quantum", "uniform")

TRIAL_FIELDS = ("record", "trial", "b", "guess", "correct", "statistic", "cost_bits")
SUMMARY_FIELDS = (
    "record",
    "protocol",
    "function",
    "n",
    "t",
    "alpha",
    "epsilon",
    "per_run_guarantee",
    "m",
    "samples",
    "trials",
    "successes",
    "success_rate",
    "wilson_low",
    "wilson_high",
    "mean_cost_bits",
    "seed",
)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    b: int
    guess: int
    correct: bool
    statistic: float
    cost_bits: int


@dataclass(frozen=True)
class RunSummary:
    protocol: str
    function: str
    n: int
    t: int
    alpha: str
    epsilon: Optional[float]
    per_run_guarantee: Optional[float]  # 1 - 2*epsilon: both Chernoff tails
    m: Optional[int]
    samples: Optional[int]
    trials: int
    successes: int
    success_rate: float
    wilson_low: float
    wilson_high: float
    mean_cost_bits: float
    seed: int


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials == 0:
        return 0.0, 1.0
    phat = successes / trials
    denom = 1 + z**2 / trials
    centre = phat + z**2 / (2 * trials)
    spread = z * math.sqrt(phat * (1 - phat) / trials + z**2 / (4 * trials**2))
    return (centre - spread) / denom, (centre + spread) / denom


def run_protocol_trials(
    protocol: str,
    f: BooleanFunction,
    f_label: str,
    params: PartitionParams,
    trials: int,
    seed: int,
    epsilon: Optional[float] = None,
    sample_count: Optional[int] = None,
) -> tuple[list[TrialRecord], RunSummary]:
    """Run independent seeded trials of one protocol on fresh instances.

    Guard failures (wrong sign-degree / pure high degree) surface from the
    first call before any trial randomness is consumed.
    """
    if protocol not in PROTOCOLS:
        raise ValueError(f"unknown protocol {protocol!r}")
    runner = _make_runner(protocol, f, epsilon, sample_count)

    records: list[TrialRecord] = []
    successes = 0
    total_cost = 0
    m_used: Optional[int] = None
    for trial in range(trials):
        inst_rng = stream(seed, "instance", trial)
        b = coin(inst_rng)
        instance = generate_instance(f, params, b, inst_rng)
        outcome = runner(
            instance, stream(seed, "protocol", trial), stream(seed, "tiebreak", trial)
        )
        correct = outcome.guess == b
        successes += int(correct)
        total_cost += outcome.message_bits
        if m_used is None and epsilon is not None:
            m_used = _message_count(protocol, outcome, params)
        records.append(
            TrialRecord(trial, b, outcome.guess, correct, outcome.statistic, outcome.message_bits)
        )

    low, high = wilson_interval(successes, trials)
    summary = RunSummary(
        protocol=protocol,
        function=f_label,
        n=params.n,
        t=params.t,
        alpha=str(params.alpha),
        epsilon=epsilon,
        per_run_guarantee=None if epsilon is None else 1 - 2 * epsilon,
        m=m_used,
        samples=sample_count,
        trials=trials,
        successes=successes,
        success_rate=successes / trials if trials else 0.0,
        wilson_low=low,
        wilson_high=high,
        mean_cost_bits=total_cost / trials if trials else 0.0,
        seed=seed,
    )
    return records, summary


def _make_runner(
    protocol: str,
    f: BooleanFunction,
    epsilon: Optional[float],
    sample_count: Optional[int],
) -> Callable:
    if protocol == "uniform":
        if sample_count is None:
            raise ValueError("uniform protocol needs a sample count")
        level_one_slots(f)  # reject disqualified functions before any trial
        return lambda inst, rng, tie: run_uniform_phd1(f, inst, sample_count, rng, tie)
    if epsilon is None:
        raise ValueError(f"{protocol} protocol needs epsilon")
    budget = 1 if protocol == "classical" else min(2, f.t)
    try:
        poly = best_sign_polynomial(f, budget)
    except BelowSignDegreeError as exc:
        actual, _ = sign_degree(f)
        raise UnsupportedFunctionError(f"sdeg(f) = {actual} > {budget}") from exc
    if protocol == "classical":
        return lambda inst, rng, tie: run_classical(f, inst, epsilon, rng, tie, poly)
    return lambda inst, rng, tie: run_quantum(f, inst, epsilon, rng, tie, poly)


def _message_count(protocol: str, outcome: ProtocolOutcome, params: PartitionParams) -> int:
    from .quantum import qubits_per_copy

    if protocol == "quantum":
        return outcome.message_bits // qubits_per_copy(params)
    return outcome.message_bits // (math.ceil(math.log2(params.n)) + 1)


# ---------------------------------------------------------------------------
# Record output (CSV and JSON lines)
# ---------------------------------------------------------------------------


def _trial_row(record: TrialRecord) -> dict:
    row = {"record": "trial"}
    row.update(asdict(record))
    return row


def _summary_row(summary: RunSummary) -> dict:
    row = {"record": "summary"}
    row.update(asdict(summary))
    return row


def write_jsonl(out: io.TextIOBase, records: list[TrialRecord], summary: RunSummary) -> None:
    for record in records:
        out.write(json.dumps(_trial_row(record), sort_keys=True) + "\n")
    out.write(json.dumps(_summary_row(summary), sort_keys=True) + "\n")


def write_csv(out: io.TextIOBase, records: list[TrialRecord], summary: RunSummary) -> None:
    fields = list(dict.fromkeys(TRIAL_FIELDS + SUMMARY_FIELDS))
    writer = csv.DictWriter(out, fieldnames=fields, restval="", lineterminator="\n")
    writer.writeheader()
    for record in records:
        writer.writerow(_trial_row(record))
    writer.writerow(_summary_row(summary))
