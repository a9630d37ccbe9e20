#!/usr/bin/env python3
"""Sweep the instance size n for one protocol and record success rate and
communication cost per n.  The cost column grows logarithmically in n for
fixed (t, alpha, beta, epsilon).

Example:
    python scripts/protocol_sweep.py --protocol quantum --named parity --t 2 \
        --alpha 1/2 --epsilon 0.1 --trials 500 --sizes 40 80 160 320 640
"""

import argparse
import csv
import sys
from fractions import Fraction

from hiddenpartition import boolfn
from hiddenpartition.experiments import run_protocol_trials
from hiddenpartition.instances import PartitionParams


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--protocol", choices=("classical", "quantum", "uniform"), required=True)
    parser.add_argument("--named", required=True, choices=boolfn.NAMED_FUNCTIONS)
    parser.add_argument("--t", type=int, required=True)
    parser.add_argument("--alpha", type=Fraction, default=Fraction(1))
    parser.add_argument("--epsilon", type=float, default=0.1)
    parser.add_argument("--samples", type=int, default=32, help="|I| for the uniform protocol")
    parser.add_argument("--trials", type=int, default=500)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--sizes", type=int, nargs="+", required=True)
    parser.add_argument("--out", default=None)
    args = parser.parse_args()

    f = boolfn.named_function(args.named, args.t)
    kwargs = (
        {"sample_count": args.samples}
        if args.protocol == "uniform"
        else {"epsilon": args.epsilon}
    )

    out = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["n", "trials", "success_rate", "wilson_low", "wilson_high", "mean_cost_bits"])
    for n in args.sizes:
        params = PartitionParams(n, args.t, args.alpha)
        _, summary = run_protocol_trials(
            args.protocol, f, f"{args.named}:{args.t}", params,
            trials=args.trials, seed=args.seed, **kwargs,
        )
        writer.writerow([
            n, summary.trials, f"{summary.success_rate:.4f}",
            f"{summary.wilson_low:.4f}", f"{summary.wilson_high:.4f}",
            f"{summary.mean_cost_bits:.1f}",
        ])
    if args.out:
        out.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
