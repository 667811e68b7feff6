"""Survey converged-state counts over a coupling comb and report where each
slice collapses.

Typical runs:
    python scripts/collapse_survey.py --omega0 0 --omega 0.45 --out degenerate.csv
    python scripts/collapse_survey.py --omega0 0.95 1.0 1.05 --omega 0.5 --steps 200
"""

import argparse
import sys

from tprabi import (
    RelativeComb,
    SubspaceLabel,
    SweepConfig,
    detect_collapse,
    run_sweep,
)
from tprabi.cli import sweep_csv


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--omega0", type=float, nargs="+", default=[1.0])
    parser.add_argument("--omega", type=float, nargs="+", default=[0.5])
    parser.add_argument("--subspace", default="q14+", help="q14+/q14-/q34+/q34-")
    parser.add_argument("--cutoff", type=int, default=2**10)
    parser.add_argument("--steps", type=int, default=200, help="comb intervals over [0, 2] g_c")
    parser.add_argument("--eigenpairs", type=int, default=25)
    parser.add_argument("--out", default=None, help="write the row table as CSV")
    return parser.parse_args(argv)


def main(argv=None):
    args = parse_args(argv)
    config = SweepConfig(
        omega0_grid=tuple(args.omega0),
        omega_grid=tuple(args.omega),
        coupling_spec=RelativeComb(steps=args.steps, lo=0.0, hi=2.0),
        subspaces=(SubspaceLabel.from_name(args.subspace),),
        cutoff=args.cutoff,
        requested_eigenpairs=args.eigenpairs,
    )
    result = run_sweep(config)

    if args.out is not None:
        with open(args.out, "w", newline="") as handle:
            handle.write(sweep_csv(result))
        print(f"wrote {len(result.rows)} rows to {args.out}")

    for omega0 in config.omega0_grid:
        for omega in config.omega_grid:
            estimate = detect_collapse(result, omega0, omega)
            label = f"omega0={omega0:g} omega={omega:g}"
            if estimate.found:
                print(
                    f"{label}: collapse at g2 = {estimate.coupling:.6g}"
                    f" +- {estimate.step:.2g} (g_c/omega = {estimate.coupling / omega:.4f})"
                )
            else:
                print(f"{label}: no collapse inside the comb")
    return 0


if __name__ == "__main__":
    sys.exit(main())
