"""Track the lone filter survivor exactly at the critical coupling across
basis sizes: its energy, tail norm, and overlap with the near-critical
ground state.

    python scripts/exceptional_overlap.py --omega0 1 --omega 0.5
"""

import argparse
import sys

import numpy as np

from tprabi import (
    ModelParams,
    SubspaceLabel,
    build_subspace_tridiagonal,
    convergence_filter,
    critical_coupling,
    solve_tridiagonal,
)


def survivors(params, label, cutoff, k=25):
    tridiag = build_subspace_tridiagonal(label, params, cutoff)
    return convergence_filter(solve_tridiagonal(tridiag, k))


def parse_args(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--omega0", type=float, default=1.0)
    parser.add_argument("--omega", type=float, default=0.5)
    parser.add_argument("--subspace", default="q14+")
    parser.add_argument(
        "--cutoffs", type=int, nargs="+", default=[2**11, 2**12, 2**13]
    )
    return parser.parse_args(argv)


def main(argv=None):
    args = parse_args(argv)
    label = SubspaceLabel.from_name(args.subspace)
    gc = critical_coupling(args.omega)
    at_gc = ModelParams(args.omega0, args.omega, gc)
    near_gc = ModelParams(args.omega0, args.omega, 0.98 * gc)

    print(f"g_c = {gc:g}; filter: tail fraction 0.2, tolerance 1e-6")
    print("cutoff  count  energy          tail_norm   overlap(0.98 g_c ground)")
    for cutoff in args.cutoffs:
        filtered = survivors(at_gc, label, cutoff)
        if filtered.converged_count != 1:
            print(f"{cutoff:6d}  {filtered.converged_count:5d}  (no lone survivor)")
            continue
        lone = filtered.converged_pairs[0]
        ground = solve_tridiagonal(
            build_subspace_tridiagonal(label, near_gc, cutoff), 1
        )[0]
        overlap = float(abs(np.vdot(lone.vector, ground.vector)))
        print(
            f"{cutoff:6d}  {filtered.converged_count:5d}  {lone.value:+.8e}"
            f"  {lone.tail_norm:.2e}  {overlap:.6f}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
