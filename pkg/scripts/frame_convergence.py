"""Convergence of the frame uncertainty products toward their limits.

Prints, per level j, the relative errors of UP_L(phi_j) and UP_L(psi_j) and
their product with j; a roughly constant product indicates O(1/j) decay.

  python3 scripts/frame_convergence.py --A 2 --L 1 --levels 25,50,100,200,400,800
  python3 scripts/frame_convergence.py --A quincunx --L 1,2 --levels 50,100,200,400
"""

from __future__ import annotations

import argparse
import sys

from torus_uncertainty.cli import _int_list, _matrix
from torus_uncertainty.periodic_frames import as_frame, up_limit_sweep


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--A", default="2")
    ap.add_argument("--L", default="1")
    ap.add_argument("--levels", default="25,50,100,200,400")
    ap.add_argument("--eps", type=float, default=1e-10)
    args = ap.parse_args(argv)
    frame = as_frame(_matrix(args.A), _int_list(args.L))
    print(f"{'j':>5} {'up_phi':>12} {'err_phi':>10} {'j*err':>8} {'up_psi':>12} {'err_psi':>10} {'j*err':>8}")
    for row in up_limit_sweep(frame, _int_list(args.levels), args.eps):
        j = row["j"]
        e_phi = abs(row["up_phi"] / row["target_phi"] - 1)
        e_psi = abs(row["up_psi"] / row["target_psi"] - 1)
        print(f"{j:5d} {row['up_phi']:12.8f} {e_phi:10.3e} {j * e_phi:8.3f} "
              f"{row['up_psi']:12.8f} {e_psi:10.3e} {j * e_psi:8.3f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
