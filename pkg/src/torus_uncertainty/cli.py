"""Command-line experiments producing self-describing CSV/JSON tables.

Examples
--------
  torus-up up --kernel powered-cos --n 5 --L 1,1
  torus-up kernel-sweep --kernel fejer --d 2 --n 16,32,64,128,256 --L 1,1
  torus-up min-var --support box --N 3,3 --L 1,0
  torus-up frame-uep --A quincunx --L 1,0 --j 1,2,3,4,5,6,7,8,9,10
  torus-up frame-limits --A 2 --L 1 --j 50,100,200,400 --eps 1e-10
  torus-up diff-tables a.csv b.csv --rtol 1e-10

Exit codes: 0 success, 1 table difference above rtol, 2 validation error,
3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path

import numpy as np

from . import __version__
from . import kernels as K
from . import optimal_localization as OL
from . import periodic_frames as PF
from .lattice_fourier import CoeffMap
from .uncertainty import closed_form_up, fejer_limit, up_directional, up_gg

THREADS_ENV = "TORUS_UP_THREADS"
EXIT_OK, EXIT_DIFF, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3


class ValidationError(ValueError):
    pass


# parameter parsing -----------------------------------------------------------


def _int(x) -> int:
    if isinstance(x, bool):
        raise ValidationError(f"expected an integer, got {x!r}")
    try:
        v = float(x)
    except (TypeError, ValueError):
        raise ValidationError(f"expected an integer, got {x!r}") from None
    if not v.is_integer():
        raise ValidationError(f"expected an integer, got {x!r}")
    return int(v)


def _float(x) -> float:
    try:
        return float(x)
    except (TypeError, ValueError):
        raise ValidationError(f"expected a number, got {x!r}") from None


def _int_list(x) -> list[int]:
    if isinstance(x, str):
        parts = [p for p in x.replace(" ", "").split(",") if p]
    elif isinstance(x, (list, tuple)):
        parts = list(x)
    else:
        parts = [x]
    if not parts:
        raise ValidationError("empty integer list")
    return [_int(p) for p in parts]


def _matrix(x) -> list[list[int]]:
    if isinstance(x, str):
        if x.lower() == "quincunx":
            return [list(r) for r in PF.QUINCUNX]
        rows = [r for r in x.replace(" ", "").split(";") if r]
        return [_int_list(r) for r in rows]
    if isinstance(x, (int, float)):
        return [[_int(x)]]
    return [_int_list(r) for r in x]


def _choice(*options):
    def parse(x):
        if x not in options:
            raise ValidationError(f"expected one of {options}, got {x!r}")
        return x

    return parse


@dataclass(frozen=True)
class Param:
    parse: object
    default: object = None
    required: bool = False
    help: str = ""


KERNEL_NAMES = ("dirichlet", "fejer", "powered-cos", "perturbed-p", "perturbed-t", "dirichlet-along", "fejer-along")
KERNEL_FAMILY = dict(zip(KERNEL_NAMES, K.FAMILIES))

SCHEMAS: dict[str, dict[str, Param]] = {
    "up": {
        "kernel": Param(_choice(*KERNEL_NAMES), required=True),
        "n": Param(_int),
        "N": Param(_int_list),
        "d": Param(_int),
        "L": Param(_int_list),
        "k0": Param(_int_list),
        "budget": Param(_int, PF.DEFAULT_BUDGET),
    },
    "kernel-sweep": {
        "kernel": Param(_choice(*KERNEL_NAMES), required=True),
        "n": Param(_int_list, required=True, help="sizes; for dirichlet each n is used as N=(n,...,n)"),
        "d": Param(_int),
        "L": Param(_int_list),
        "k0": Param(_int_list),
        "budget": Param(_int, PF.DEFAULT_BUDGET),
    },
    "compare-gg": {
        "kernel": Param(_choice("perturbed-p", "perturbed-t"), required=True),
        "n": Param(_int_list, required=True),
        "L": Param(_int_list, required=True),
    },
    "min-var": {
        "support": Param(_choice("box", "line", "cross", "random"), required=True),
        "N": Param(_int_list),
        "L": Param(_int_list),
        "k0": Param(_int_list),
        "m": Param(_int),
        "n": Param(_int),
        "d": Param(_int),
        "size": Param(_int, 30),
        "radius": Param(_int, 3),
        "trials": Param(_int, 1),
        "restarts": Param(_int, 0, help="Rayleigh oracle restarts; 0 disables the oracle"),
    },
    "frame-uep": {
        "A": Param(_matrix, required=True),
        "L": Param(_int_list, required=True),
        "j": Param(_int_list, required=True),
        "level_one": Param(_choice(*PF.LEVEL_ONE_CONVENTIONS), "limit"),
    },
    "frame-cascade": {
        "A": Param(_matrix, required=True),
        "L": Param(_int_list, required=True),
        "J": Param(_int, required=True),
        "radius": Param(_int, 4),
        "terms": Param(_int, 12),
        "trials": Param(_int, 1),
        "level_one": Param(_choice(*PF.LEVEL_ONE_CONVENTIONS), "limit"),
        "budget": Param(_int, PF.DEFAULT_BUDGET),
    },
    "frame-limits": {
        "A": Param(_matrix, required=True),
        "L": Param(_int_list, required=True),
        "j": Param(_int_list, required=True),
        "eps": Param(_float, 1e-8),
        "budget": Param(_int, PF.DEFAULT_BUDGET),
    },
    "reference-limits": {
        "L": Param(_int_list, required=True),
        "j": Param(_int_list, required=True),
        "eps": Param(_float, 1e-8),
        "A": Param(_matrix),
    },
}


def validate(name: str, raw: dict) -> dict:
    if name not in SCHEMAS:
        raise ValidationError(f"unknown experiment {name!r}")
    schema = SCHEMAS[name]
    unknown = set(raw) - set(schema)
    if unknown:
        raise ValidationError(f"unknown parameters for {name}: {sorted(unknown)}")
    out = {}
    for key, p in schema.items():
        val = raw.get(key)
        if val is None:
            if p.required:
                raise ValidationError(f"{name} needs --{key.replace('_', '-')}")
            out[key] = p.default
        else:
            out[key] = p.parse(val)
    return out


# experiments -----------------------------------------------------------------


@dataclass
class Table:
    columns: list[str]
    rows: list[dict]
    summary: str = ""
    extra: dict = field(default_factory=dict)


def _pmap(fn, items, threads: int):
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def _kernel_size(kernel: str, p: dict) -> int:
    if kernel == "dirichlet":
        return math.prod(2 * x + 1 for x in p["N"])
    if kernel == "fejer":
        return (2 * p["n"] - 1) ** (p["d"] or 1)
    return 2 * p["n"] + 3


def _build_kernel(kernel: str, p: dict) -> CoeffMap:
    try:
        params = K.KernelParams(
            KERNEL_FAMILY[kernel],
            n=p.get("n"),
            N=tuple(p["N"]) if p.get("N") else None,
            d=p.get("d"),
            L=tuple(p["L"]) if p.get("L") else None,
            k0=tuple(p["k0"]) if p.get("k0") else None,
        )
        if _kernel_size(kernel, p) > p.get("budget", PF.DEFAULT_BUDGET):
            raise PF.BudgetExceeded(f"{kernel} kernel has {_kernel_size(kernel, p)} coefficients")
        return params.build()
    except (TypeError, ValueError) as exc:
        raise ValidationError(str(exc)) from None


def _default_L(f: CoeffMap, p: dict) -> list[int]:
    return p["L"] if p.get("L") else [1] + [0] * (f.dim - 1)


def _closed_form(kernel: str, p: dict, L) -> float | None:
    if kernel == "powered-cos":
        return closed_form_up("PoweredCos", n=p["n"])
    if kernel == "dirichlet":
        return closed_form_up("DirichletRect", N=p["N"], L=L)
    if kernel == "fejer":
        return fejer_limit(p["d"] or 1)
    if kernel == "fejer-along":
        return closed_form_up("DirectionalFejerLimit")
    return None


def _up_row(kernel: str, p: dict) -> dict:
    f = _build_kernel(kernel, p)
    L = _default_L(f, p)
    rd = up_directional(f, L)
    rg = up_gg(f)
    return {
        "kernel": kernel,
        "n": p.get("n"),
        "N": p.get("N"),
        "d": f.dim,
        "L": L,
        "support": len(f),
        "up_directional": rd.up,
        "var_angular": rd.var_angular,
        "var_frequency": rd.var_frequency,
        "status": rd.status.value,
        "up_gg": rg.up,
        "status_gg": rg.status.value,
        "closed_form": _closed_form(kernel, p, L),
    }


UP_COLUMNS = [
    "kernel", "n", "N", "d", "L", "support", "up_directional", "var_angular",
    "var_frequency", "status", "up_gg", "status_gg", "closed_form",
]


def run_up(p: dict, seed: int, threads: int) -> Table:
    row = _up_row(p["kernel"], p)
    return Table(UP_COLUMNS, [row], f"up={_fmt(row['up_directional'])} up_gg={_fmt(row['up_gg'])}")


def _sweep_point(kernel: str, p: dict, n: int) -> dict:
    q = dict(p)
    if kernel == "dirichlet":
        d = p["d"] or (len(p["L"]) if p.get("L") else 1)
        q["N"] = [n] * d
        q["n"] = None
    else:
        q["n"] = n
    return _up_row(kernel, q)


def run_kernel_sweep(p: dict, seed: int, threads: int) -> Table:
    rows = _pmap(partial(_sweep_point, p["kernel"], p), p["n"], threads)
    last = rows[-1]
    return Table(UP_COLUMNS, rows, f"{len(rows)} points, last up={_fmt(last['up_directional'])}")


def _compare_point(kernel: str, L, n: int) -> dict:
    fam = K.perturbed_p if kernel == "perturbed-p" else K.perturbed_t
    try:
        f = fam(n, L)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    a = up_directional(f, L).up
    b = up_gg(f).up
    scale = n * 4.0**n
    return {
        "kernel": kernel,
        "n": n,
        "L": L,
        "up_directional": a,
        "up_gg": b,
        "up_directional_per_n4n": a / scale,
        "up_gg_per_n4n": b / scale,
        "up_directional_per_n": a / n,
        "up_gg_per_n": b / n,
    }


def run_compare_gg(p: dict, seed: int, threads: int) -> Table:
    rows = _pmap(partial(_compare_point, p["kernel"], p["L"]), p["n"], threads)
    cols = list(rows[0])
    return Table(cols, rows, f"{len(rows)} points")


def random_support(rng: np.random.Generator, size: int, radius: int, d: int) -> OL.SupportSet:
    box = (2 * radius + 1) ** d
    size = min(size, box)
    flat = rng.choice(box, size=size, replace=False)
    pts = np.stack(np.unravel_index(flat, (2 * radius + 1,) * d), axis=1) - radius
    return OL.SupportSet.from_points(map(tuple, pts.tolist()))


def random_direction(rng: np.random.Generator, d: int, bound: int = 2) -> list[int]:
    while True:
        L = rng.integers(-bound, bound + 1, size=d)
        if np.any(L):
            return L.tolist()


def _support(p: dict, rng) -> tuple[OL.SupportSet, list[int]]:
    kind = p["support"]
    try:
        if kind == "box":
            S = OL.SupportSet.box(p["N"])
        elif kind == "line":
            S = OL.SupportSet.line(p["k0"] or [0] * len(p["L"]), p["L"], p["m"])
        elif kind == "cross":
            S = OL.SupportSet.cross(p["n"], p["d"])
        else:
            d = p["d"] or (len(p["L"]) if p["L"] else 2)
            S = random_support(rng, p["size"], p["radius"], d)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad support parameters: {exc}") from None
    L = p["L"] or random_direction(rng, S.dim)
    if len(L) != S.dim:
        raise ValidationError("L and support dimensions differ")
    return S, L


def run_min_var(p: dict, seed: int, threads: int) -> Table:
    rng = np.random.default_rng(seed)
    rows = []
    for trial in range(p["trials"]):
        S, L = _support(p, rng)
        try:
            sol = OL.min_var_directional(S, L)
        except OL.InfiniteVarianceError:
            rows.append({"trial": trial, "size": len(S), "L": L, "m0": 0, "var_angular": math.inf,
                         "var_closed": math.inf, "var_measured": math.inf, "up": math.inf, "oracle_var": None})
            continue
        measured = up_directional(sol.polynomial, L)
        oracle = None
        if p["restarts"] > 0:
            q = OL.rayleigh_oracle(S, L, restarts=p["restarts"], seed=seed + trial)
            oracle = 1.0 / q**2 - 1.0 if q > 0 else math.inf
        rows.append({
            "trial": trial,
            "size": len(S),
            "L": L,
            "m0": sol.m0,
            "var_angular": sol.var_angular,
            "var_closed": math.tan(math.pi / (sol.m0 + 2)) ** 2,
            "var_measured": measured.var_angular,
            "up": measured.up,
            "oracle_var": oracle,
        })
    gap = max((abs(r["var_measured"] - r["var_closed"]) for r in rows if math.isfinite(r["var_closed"])), default=0.0)
    return Table(list(rows[0]), rows, f"{len(rows)} supports, max |var - tan^2| = {gap:.3g}")


def _frame(p: dict) -> PF.PeriodicFrame:
    try:
        return PF.as_frame(p["A"], p["L"], p.get("level_one", "limit"))
    except (ValueError, PF.DilationError) as exc:
        raise ValidationError(str(exc)) from None


def run_frame_uep(p: dict, seed: int, threads: int) -> Table:
    F = _frame(p)
    if min(p["j"]) < 1:
        raise ValidationError("mask levels start at 1")
    rows = [PF.uep_identity_check(F, j) for j in p["j"]]
    worst = max(max(r["residual_i"], r["residual_ii"]) for r in rows)
    return Table(list(rows[0]), rows, f"max UEP residual {worst:.3g}")


def random_trig_poly(rng: np.random.Generator, d: int, radius: int, terms: int) -> CoeffMap:
    box = (2 * radius + 1) ** d
    flat = rng.choice(box, size=min(terms, box), replace=False)
    pts = np.stack(np.unravel_index(flat, (2 * radius + 1,) * d), axis=1) - radius
    vals = rng.standard_normal(len(pts)) + 1j * rng.standard_normal(len(pts))
    return CoeffMap.from_arrays(pts, vals, d)


def run_frame_cascade(p: dict, seed: int, threads: int) -> Table:
    F = _frame(p)
    rng = np.random.default_rng(seed)
    rows = []
    worst = 0.0
    for trial in range(p["trials"]):
        f = random_trig_poly(rng, F.dim, p["radius"], p["terms"])
        res = PF.parseval_cascade_check(F, f, p["J"], p["budget"])
        worst = max(worst, res["max_cascade_residual"])
        for j in range(p["J"] + 1):
            rows.append({
                "trial": trial,
                "j": j,
                "E": res["E"][j],
                "W": res["W"][j] if j < p["J"] else None,
                "cascade_residual": res["cascade_residuals"][j] if j < p["J"] else None,
                "norm2": res["norm2"],
                "tail": res["norm2"] - res["E"][j],
            })
    return Table(list(rows[0]), rows, f"max cascade residual {worst:.3g}")


def run_frame_limits(p: dict, seed: int, threads: int) -> Table:
    F = _frame(p)
    rows = _pmap(partial(_limit_point, F, p["eps"], p["budget"]), p["j"], threads)
    for r in rows:
        r["rel_err_phi"] = abs(r["up_phi"] / r["target_phi"] - 1)
        r["rel_err_psi"] = abs(r["up_psi"] / r["target_psi"] - 1)
    last = rows[-1]
    return Table(list(rows[0]), rows,
                 f"j={last['j']} rel err phi {last['rel_err_phi']:.3g} psi {last['rel_err_psi']:.3g}")


def _limit_point(F, eps, budget, j):
    return PF.up_limit_sweep(F, [j], eps, budget)[0]


def _reference_point(L, eps, D, j):
    x, e = PF.reference_limits_check(L, j, eps, D)
    return {"j": j, "up_xi0": x, "up_eta": e, "target_xi0": 0.25, "target_eta": PF.psi_limit(len(L))}


def run_reference_limits(p: dict, seed: int, threads: int) -> Table:
    if min(p["j"]) < 2:
        raise ValidationError("reference functions need j >= 2")
    D = None
    if p["A"] is not None:
        try:
            D = PF.validate_dilation(p["A"])
        except PF.DilationError as exc:
            raise ValidationError(str(exc)) from None
    rows = _pmap(partial(_reference_point, p["L"], p["eps"], D), p["j"], threads)
    return Table(list(rows[0]), rows, f"{len(rows)} levels")


RUNNERS = {
    "up": run_up,
    "kernel-sweep": run_kernel_sweep,
    "compare-gg": run_compare_gg,
    "min-var": run_min_var,
    "frame-uep": run_frame_uep,
    "frame-cascade": run_frame_cascade,
    "frame-limits": run_frame_limits,
    "reference-limits": run_reference_limits,
}


# output ----------------------------------------------------------------------


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{float(x):.17g}"
    if isinstance(x, (list, tuple)):
        return " ".join(_fmt(v) for v in x)
    return str(x)


def _json_value(x):
    if isinstance(x, (float, np.floating)):
        return "inf" if math.isinf(x) else float(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (list, tuple)):
        return [_json_value(v) for v in x]
    return x


def render(table: Table, echo: dict, fmt: str) -> str:
    if fmt == "json":
        doc = {
            "version": __version__,
            "spec": echo,
            "columns": table.columns,
            "rows": [{c: _json_value(r.get(c)) for c in table.columns} for r in table.rows],
        }
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    buf.write(f"# torus_uncertainty {__version__}\n")
    buf.write("# spec " + json.dumps(echo, sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(table.columns)
    for r in table.rows:
        w.writerow([_fmt(r.get(c)) for c in table.columns])
    return buf.getvalue()


def read_table(path: str) -> tuple[list[str], list[list[str]]]:
    text = Path(path).read_text()
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        cols = doc["columns"]
        return cols, [[_fmt(r.get(c)) for c in cols] for r in doc["rows"]]
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    rows = list(csv.reader(lines))
    return rows[0], rows[1:]


def _cell_diff(a: str, b: str) -> float:
    if a == b:
        return 0.0
    try:
        x, y = float(a), float(b)
    except ValueError:
        try:
            xs, ys = [float(v) for v in a.split()], [float(v) for v in b.split()]
        except ValueError:
            return math.inf
        if len(xs) != len(ys):
            return math.inf
        return max((_cell_diff(str(u), str(v)) for u, v in zip(xs, ys)), default=0.0)
    if x == y:
        return 0.0
    if math.isinf(x) or math.isinf(y) or math.isnan(x) or math.isnan(y):
        return math.inf
    return abs(x - y) / max(abs(x), abs(y))


def diff_tables(a: str, b: str, rtol: float) -> dict:
    """Per-cell relative differences of two tables with the same schema."""
    ca, ra = read_table(a)
    cb, rb = read_table(b)
    if ca != cb or len(ra) != len(rb):
        raise ValidationError(f"schema mismatch: {ca} x {len(ra)} vs {cb} x {len(rb)}")
    failures = []
    worst = 0.0
    for i, (x, y) in enumerate(zip(ra, rb)):
        for col, u, v in zip(ca, x, y):
            diff = _cell_diff(u, v)
            worst = max(worst, diff)
            if diff > rtol:
                failures.append((i, col, u, v, diff))
    return {"max_rel_diff": worst, "failures": failures, "cells": sum(len(r) for r in ra)}


# entry point -----------------------------------------------------------------


def _threads(arg) -> int:
    if arg is not None:
        return max(1, int(arg))
    env = os.environ.get(THREADS_ENV)
    return max(1, int(env)) if env else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="torus-up", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name, schema in SCHEMAS.items():
        sp = sub.add_parser(name)
        for key, prm in schema.items():
            sp.add_argument("--" + key.replace("_", "-"), dest=key, default=None, help=prm.help or None)
        sp.add_argument("--config", help="JSON experiment spec; flags override its params")
        sp.add_argument("--output", "-o", help="output file (default stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--threads", type=int, default=None, help=f"worker processes (env {THREADS_ENV})")
    dp = sub.add_parser("diff-tables")
    dp.add_argument("a")
    dp.add_argument("b")
    dp.add_argument("--rtol", type=float, default=1e-12)
    return ap


def _load_config(path: str | None, name: str) -> dict:
    if not path:
        return {}
    try:
        cfg = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from None
    if cfg.get("name", name) != name:
        raise ValidationError(f"config is for {cfg['name']!r}, not {name!r}")
    return cfg


def run_experiment(name: str, params: dict, seed: int = 0, threads: int = 1, fmt: str = "csv") -> tuple[str, Table]:
    p = validate(name, params)
    table = RUNNERS[name](p, seed, threads)
    echo = {"name": name, "params": _json_value_tree(p), "seed": seed, "threads": threads}
    return render(table, echo, fmt), table


def _json_value_tree(p: dict) -> dict:
    return {k: _json_value(v) if not isinstance(v, list) else [_json_value(x) for x in v] for k, v in p.items()}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    name = args.command
    try:
        if name == "diff-tables":
            rep = diff_tables(args.a, args.b, args.rtol)
            for i, col, u, v, diff in rep["failures"][:20]:
                print(f"row {i} {col}: {u} vs {v} (rel {diff:.3g})", file=sys.stderr)
            print(f"diff-tables: {rep['cells']} cells, max rel diff {rep['max_rel_diff']:.3g}, "
                  f"{len(rep['failures'])} above rtol {args.rtol:g}", file=sys.stderr)
            return EXIT_DIFF if rep["failures"] else EXIT_OK
        cfg = _load_config(args.config, name)
        params = dict(cfg.get("params", {}))
        params.update({k: getattr(args, k) for k in SCHEMAS[name] if getattr(args, k) is not None})
        seed = args.seed if args.seed is not None else int(cfg.get("seed") or 0)
        threads = _threads(args.threads if args.threads is not None else cfg.get("threads"))
        fmt = args.format or cfg.get("format") or "csv"
        output = args.output or cfg.get("output")
        text, table = run_experiment(name, params, seed, threads, fmt)
    except ValidationError as exc:
        print(f"{name}: invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except PF.BudgetExceeded as exc:
        print(f"{name}: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    if output:
        try:
            Path(output).write_text(text)
        except OSError as exc:
            print(f"{name}: cannot write {output}: {exc}", file=sys.stderr)
            return EXIT_INVALID
    else:
        sys.stdout.write(text)
    print(f"{name}: {table.summary}", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
