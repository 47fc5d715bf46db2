"""Write every experiment table to an output directory.

Usage:
  python3 scripts/reproduce_tables.py --outdir results
  python3 scripts/reproduce_tables.py --outdir results --quick

Each table is the CSV the ``torus-up`` CLI would print for the same spec, so
two runs can be compared with ``torus-up diff-tables``.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from torus_uncertainty.cli import run_experiment

FULL = [
    ("powered_cos", "kernel-sweep", {"kernel": "powered-cos", "n": "1,2,4,8,16,32,64", "L": "2,-1"}),
    ("dirichlet_rect", "kernel-sweep", {"kernel": "dirichlet", "n": "1,2,4,8,16,32", "d": 2, "L": "1,2"}),
    ("fejer_d1", "kernel-sweep", {"kernel": "fejer", "d": 1, "n": "32,64,128,256", "L": "1"}),
    ("fejer_d2", "kernel-sweep", {"kernel": "fejer", "d": 2, "n": "32,64,128,256", "L": "1,1"}),
    ("fejer_d3", "kernel-sweep", {"kernel": "fejer", "d": 3, "n": "16,32,64", "L": "1,1,1"}),
    ("fejer_along", "kernel-sweep", {"kernel": "fejer-along", "n": "4,16,64,256", "L": "1,2"}),
    ("dirichlet_along", "kernel-sweep", {"kernel": "dirichlet-along", "n": "4,16,64,256", "L": "1,2"}),
    ("perturbed_p", "compare-gg", {"kernel": "perturbed-p", "n": "10,20,40", "L": "1,2"}),
    ("perturbed_t", "compare-gg", {"kernel": "perturbed-t", "n": "10,20,40", "L": "2,3"}),
    ("min_var_box", "min-var", {"support": "box", "N": "3,3", "L": "1,0", "restarts": 2000}),
    ("min_var_random", "min-var", {"support": "random", "d": 2, "size": 40, "radius": 5, "trials": 20,
                                   "restarts": 2000}),
    ("uep_quincunx", "frame-uep", {"A": "quincunx", "L": "1,1", "j": "1,2,3,4,5,6,7,8,9,10"}),
    ("cascade_dyadic", "frame-cascade", {"A": "2", "L": "1", "J": 14, "trials": 3}),
    ("limits_d1", "frame-limits", {"A": "2", "L": "1", "j": "50,100,200,400", "eps": 1e-10}),
    ("limits_d2", "frame-limits", {"A": "quincunx", "L": "1,0", "j": "50,100,200,400", "eps": 1e-10}),
    ("reference_d2", "reference-limits", {"L": "1,0", "j": "50,100,200,400,500", "eps": 1e-10}),
]


def quick(params: dict) -> dict:
    """Shrink sweeps to their first two points."""
    out = dict(params)
    for key in ("n", "j"):
        if isinstance(out.get(key), str) and "," in out[key]:
            out[key] = ",".join(out[key].split(",")[:2])
    if "restarts" in out:
        out["restarts"] = 100
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--outdir", default="results")
    ap.add_argument("--quick", action="store_true", help="first two sweep points only")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--only", nargs="*", help="table names to run")
    args = ap.parse_args(argv)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    for name, experiment, params in FULL:
        if args.only and name not in args.only:
            continue
        t0 = time.perf_counter()
        text, table = run_experiment(experiment, quick(params) if args.quick else params, seed=args.seed)
        (outdir / f"{name}.csv").write_text(text)
        print(f"{name:16s} {len(table.rows):3d} rows  {time.perf_counter() - t0:6.1f}s  {table.summary}",
              file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
