"""Sign-representing polynomials via linear programming.

A multilinear polynomial p sign-represents f when f(x) = sgn(p(x)) on all
of {-1,+1}^t; normalised means |p(x)| <= 1 everywhere, and the bias is
min_x |p(x)|.  Two dense LPs over all 2^t points are used:

  * degree search: feasibility of  f(x) p(x) >= 1  for all x (scale-free,
    so feasible exactly when the degree suffices);
  * best bias:  maximise beta  s.t.  f(x) p(x) >= beta  and
    -1 <= p(x) <= 1  for all x.

The solver runs in floating point with a feasibility margin; every witness
is then normalised and certified by exhaustive exact re-evaluation of the
sign conditions, so a returned polynomial is correct independent of solver
tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from .boolfn import BooleanFunction

FEASIBILITY_MARGIN = 1e-8
COEFF_PRUNE_TOL = 1e-12


class BelowSignDegreeError(ValueError):
    """Requested degree cannot sign-represent the function."""


class LpSolverError(RuntimeError):
    """The LP solver failed numerically (distinct from infeasibility)."""


@dataclass(frozen=True)
class SignPolynomial:
    """Normalised multilinear polynomial with certified bias.

    ``coeffs`` maps subset bitmasks to real coefficients; ``bias`` is the
    exhaustively re-evaluated min_x |p(x)| for the function it represents.
    """

    t: int
    coeffs: dict[int, float]
    degree: int
    bias: float

    def coefficient(self, mask: int) -> float:
        return self.coeffs.get(mask, 0.0)

    def evaluate(self, x: Sequence[int]) -> float:
        if len(x) != self.t:
            raise ValueError(f"expected {self.t} coordinates")
        total = 0.0
        for mask, c in self.coeffs.items():
            term = c
            m = mask
            while m:
                i = (m & -m).bit_length() - 1
                term *= x[i]
                m &= m - 1
            total += term
        return total

    def evaluate_all(self) -> np.ndarray:
        """Values on every row of the cube, in row-encoding order."""
        masks = sorted(self.coeffs)
        if not masks:
            return np.zeros(2**self.t)
        chi = _chi_matrix(self.t, masks)
        c = np.array([self.coeffs[m] for m in masks])
        return chi @ c


def monomial_masks(t: int, degree: int) -> list[int]:
    """All subset bitmasks of [t] with |S| <= degree, sorted."""
    return [m for m in range(2**t) if int(m).bit_count() <= degree]


def _chi_matrix(t: int, masks: Sequence[int]) -> np.ndarray:
    """(2^t, len(masks)) matrix of character values chi_S(row)."""
    rows = np.arange(2**t, dtype=np.uint64)
    inter = np.bitwise_count(rows[:, None] & np.asarray(masks, dtype=np.uint64))
    return 1.0 - 2.0 * (inter.astype(np.int64) % 2)


def best_sign_polynomial(
    f: BooleanFunction, degree: int, margin: float = FEASIBILITY_MARGIN
) -> SignPolynomial:
    """Maximum-bias normalised sign-representation of f with the given
    degree budget.

    Raises BelowSignDegreeError when the degree cannot represent f and
    LpSolverError on solver breakdown or failed certification.
    """
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    t = f.t
    masks = monomial_masks(t, degree)
    chi = _chi_matrix(t, masks)
    fvals = np.asarray(f.table, dtype=np.float64)
    npoints, nmono = chi.shape

    # Variables: monomial coefficients, then beta.
    cost = np.zeros(nmono + 1)
    cost[-1] = -1.0
    sign_rows = np.hstack([-fvals[:, None] * chi, np.ones((npoints, 1))])
    upper_rows = np.hstack([chi, np.zeros((npoints, 1))])
    a_ub = np.vstack([sign_rows, upper_rows, -upper_rows])
    b_ub = np.concatenate([np.zeros(npoints), np.ones(2 * npoints)])
    bounds = [(None, None)] * nmono + [(0.0, 1.0)]

    result = linprog(cost, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if result.status != 0:
        raise LpSolverError(f"LP solver status {result.status}: {result.message}")
    beta_lp = float(result.x[-1])
    if beta_lp < margin:
        raise BelowSignDegreeError(
            f"no degree-{degree} sign representation (LP bias {beta_lp:.2e})"
        )
    return _certified(t, masks, result.x[:-1], fvals, chi)


def sign_degree(f: BooleanFunction) -> tuple[int, SignPolynomial]:
    """Minimum representing degree with a certified normalised witness.

    Iterates degree 0, 1, 2, ... until the feasibility LP
    "f(x) p(x) >= 1 for all x" admits a solution; the witness is rescaled
    to the normalised form (its bias need not be optimal; see
    best_sign_polynomial for that).  Constant functions return degree 0
    with p = f.
    """
    if f.is_constant:
        value = float(f.table[0])
        return 0, SignPolynomial(f.t, {0: value}, 0, 1.0)
    fvals = np.asarray(f.table, dtype=np.float64)
    for d in range(f.t + 1):
        masks = monomial_masks(f.t, d)
        chi = _chi_matrix(f.t, masks)
        result = linprog(
            np.zeros(len(masks)),
            A_ub=-fvals[:, None] * chi,
            b_ub=-np.ones(chi.shape[0]),
            bounds=[(None, None)] * len(masks),
            method="highs",
        )
        if result.status == 2:  # infeasible: degree too low
            continue
        if result.status == 0:
            raw_margins = fvals * (chi @ result.x)
            if raw_margins.min() >= 1 - FEASIBILITY_MARGIN:
                return d, _certified(f.t, masks, result.x, fvals, chi)
        # Inconclusive probe (free variables can leave HiGHS without a
        # certificate): decide with the bounded maximum-bias LP instead.
        try:
            witness = best_sign_polynomial(f, d)
        except BelowSignDegreeError:
            continue
        return d, witness
    raise LpSolverError("no representation found up to full degree")  # pragma: no cover


def _certified(
    t: int, masks: list[int], coeff: np.ndarray, fvals: np.ndarray, chi: np.ndarray
) -> SignPolynomial:
    """Normalise a witness and certify its sign conditions exhaustively."""
    values = chi @ coeff
    scale = max(1.0, float(np.abs(values).max()))
    values = values / scale
    coeff = coeff / scale
    margins = fvals * values
    if not np.all(margins > 0):
        raise LpSolverError("witness failed exhaustive sign certification")
    coeffs = {
        int(m): float(c) for m, c in zip(masks, coeff) if abs(c) > COEFF_PRUNE_TOL
    }
    degree = max((int(m).bit_count() for m in coeffs), default=0)
    return SignPolynomial(t, coeffs, degree, float(margins.min()))
