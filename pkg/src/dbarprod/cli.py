"""Command line entry point: ``dbarprod <subcommand>``.

JSON goes to stdout; ``--out`` writes CSV instead.  Exit status is 0 when
every asserted property holds, 1 on an assertion failure, 2 on bad usage.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys

import numpy as np

from . import experiments as ex
from .errors import DbarError
from .forms import FormExpr, OneForm, banach_norm, lp_norm
from .geometry import HartogsDomain, ProductDomain
from .hartogs import (HartogsForm, canonical_pair_exprs, hartogs_report,
                      pullback)
from .product_solver import SolutionField, dbar_residual, solve_T

log = logging.getLogger("dbarprod")


class UsageError(Exception):
    pass


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _domain(path) -> ProductDomain:
    return ProductDomain.bidisc() if path is None else ProductDomain.from_json(_load_json(path))


def _form(path, domain) -> OneForm:
    if path is None:
        return ex.f_k(1)
    return OneForm.from_json(_load_json(path), domain)


def _point(s: str) -> tuple[complex, complex]:
    try:
        a, b, c, d = (float(v) for v in s.split(","))
    except ValueError as exc:
        raise UsageError(f"--point expects re,im,re,im; got {s!r}") from exc
    return complex(a, b), complex(c, d)


def _c(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _write_grid_csv(path, pts1, pts2, values) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["re1", "im1", "re2", "im2", "value"])
        for i, a in enumerate(pts1):
            for j, b in enumerate(pts2):
                w.writerow([a.real, a.imag, b.real, b.imag, values[i, j]])


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, default=_jsonable)
    sys.stdout.write("\n")


def _jsonable(o):
    if isinstance(o, complex):
        return _c(o)
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(type(o))


def _grid(domain: ProductDomain, n: int):
    from .product_solver import default_grid
    return default_grid(domain, n)


# ----------------------------------------------------------------------------

def cmd_solve(args) -> int:
    domain = _domain(args.domain)
    f = _form(args.form, domain)
    res = tuple(args.resolution)
    if args.out:
        pts1, pts2 = _grid(domain, args.grid)
        u = SolutionField(f, domain, args.method, res)
        vals = np.abs(np.array([[u.at(a, b) for b in pts2] for a in pts1]))
        _write_grid_csv(args.out, pts1, pts2, vals)
        return 0
    if not args.point:
        raise UsageError("solve needs --point (or --out for a grid)")
    rows = []
    for s in args.point:
        z = _point(s)
        rows.append({"point": [_c(z[0]), _c(z[1])],
                     "value": _c(solve_T(f, domain, z, args.method, res))})
    _emit({"method": args.method, "values": rows})
    return 0


def cmd_residual(args) -> int:
    domain = _domain(args.domain)
    f = _form(args.form, domain)
    rep = dbar_residual(f, domain, n=args.grid, h=args.step, method=args.method)
    ok = rep.max_err <= args.tol
    if args.out:
        _write_grid_csv(args.out, rep.points1, rep.points2, rep.pointwise)
    else:
        _emit({"grid": args.grid, "h": rep.h, "max_err": rep.max_err, "l2_err": rep.l2_err,
               "max_err_z1": rep.max_err_z1, "max_err_z2": rep.max_err_z2,
               "tol": args.tol, "passed": ok})
    return 0 if ok else 1


def cmd_norms(args) -> int:
    if args.hartogs:
        H = HartogsDomain(args.epsilon if args.epsilon is not None else 0.0)
        alpha = HartogsForm.from_json(_load_json(args.form)) if args.form else HartogsForm(
            FormExpr.zero(), FormExpr.const(1))
        out = {"p": args.p, "weight": args.weight, "epsilon": H.epsilon}
        for name, g in (("alpha1", alpha.alpha1), ("alpha2", alpha.alpha2)):
            r = lp_norm(g, args.p, H, args.weight)
            out[name] = {"value": r.value, "est_error": r.est_error}
        _emit(out)
        return 0
    domain = _domain(args.domain)
    f = _form(args.form, domain)
    out = {"p": args.p, "weight": args.weight}
    for name, g in (("f1", f.f1), ("f2", f.f2)):
        r = lp_norm(g, args.p, domain, args.weight, epsilon=args.epsilon)
        out[name] = {"value": r.value, "est_error": r.est_error}
    if args.weight == 0:
        out["B_norm"] = banach_norm(f, args.p, domain).value
        rep = ex.lp_bound_report(f, domain, args.p)
        out["Tf_norm"], out["ratio"] = rep.Tf_norm, None if rep.undefined_ratio else rep.ratio
    _emit(out)
    return 0


def cmd_counterexample(args) -> int:
    quad = [L for L in (1, 2, 4, 8, 16, 32, 64) if L <= args.lmax] if args.quadrature else False
    rows = ex.counterexample_table(args.lmax, quad)
    ok = True
    for r in rows:
        if r.g_norm_quad is not None:
            ok &= abs(r.g_norm_quad - r.g_norm_L1) <= 1e-4 * r.g_norm_L1
            ok &= abs(r.Tg_norm_quad - r.Tg_norm_L1) <= 1e-4 * r.Tg_norm_L1
    ratios = [r.ratio for r in rows]
    ok &= all(b > a for a, b in zip(ratios[1:], ratios[2:]))
    ok &= all(r.ratio >= 0.05 * r.harmonic_HL for r in rows if r.L in (8, 16, 32, 64))
    ok &= all(r.g_norm_L1 <= ex.gL_norm_L1_limit() for r in rows)
    if args.out:
        ex.write_csv(args.out, rows)
    else:
        _emit({"passed": bool(ok), "rows": [r.__dict__ for r in rows]})
    return 0 if ok else 1


def cmd_hartogs(args) -> int:
    alpha = (HartogsForm.from_json(_load_json(args.alpha)) if args.alpha
             else HartogsForm(FormExpr.zero(), FormExpr.const(1)))
    f = pullback(alpha)
    rep = hartogs_report(alpha, args.p, args.epsilon)
    out = rep.as_dict()
    out["pullback"] = f.to_json()
    if args.point:
        from .hartogs import solve_hartogs
        out["values"] = [{"point": [_c(z[0]), _c(z[1])], "value": _c(solve_hartogs(alpha, z))}
                         for z in map(_point, args.point)]
    _emit(out)
    return 0


def cmd_compare_canonical(args) -> int:
    rep = ex.canonical_orthogonality(args.k)
    worst = max(abs(v) for v in rep["u_can"].values())
    gap = abs(rep["u"][(0, 0)])
    ok = worst <= 1e-6 and gap > 1e-6
    u, u_can = canonical_pair_exprs(args.k)
    _emit({"k": args.k, "u": str(u), "u_can": str(u_can),
           "max_abs_u_can_inner": worst, "abs_u_inner_1": gap,
           "inner_u_can": {f"{m},{n}": _c(v) for (m, n), v in rep["u_can"].items()},
           "inner_u": {f"{m},{n}": _c(v) for (m, n), v in rep["u"].items()},
           "passed": ok})
    return 0 if ok else 1


def cmd_oracle_suite(args) -> int:
    rep = ex.oracle_suite()
    _emit(rep)
    return 0 if rep["passed"] else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dbarprod", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("solve", help="evaluate T f at points, or |T f| on a grid")
    s.add_argument("--domain")
    s.add_argument("--form")
    s.add_argument("--point", action="append", help="re1,im1,re2,im2 (repeatable)")
    s.add_argument("--method", choices=["auto", "exact", "quadrature"], default="auto")
    s.add_argument("--resolution", type=int, nargs=2, default=[128, 256])
    s.add_argument("--grid", type=int, default=8)
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("residual", help="finite-difference dbar(T f) - f")
    s.add_argument("--grid", type=int, default=8)
    s.add_argument("--step", type=float, default=1e-3)
    s.add_argument("--tol", type=float, default=5e-3)
    s.add_argument("--domain")
    s.add_argument("--form")
    s.add_argument("--method", choices=["auto", "exact", "quadrature"], default="auto")
    s.add_argument("--out")
    s.set_defaults(func=cmd_residual)

    s = sub.add_parser("norms", help="L^p norms of a form and of T f")
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--weight", type=float, default=0.0)
    s.add_argument("--epsilon", type=float)
    s.add_argument("--hartogs", action="store_true", help="norms of alpha on the triangle")
    s.add_argument("--domain")
    s.add_argument("--form")
    s.set_defaults(func=cmd_norms)

    s = sub.add_parser("counterexample", help="the L^1 divergence table")
    s.add_argument("--lmax", type=int, default=64)
    s.add_argument("--quadrature", action="store_true")
    s.add_argument("--out")
    s.set_defaults(func=cmd_counterexample)

    s = sub.add_parser("hartogs", help="pullback, weighted data norms and ||v||_p")
    s.add_argument("--alpha")
    s.add_argument("--p", type=float, default=2.0)
    s.add_argument("--epsilon", type=float, default=1e-4)
    s.add_argument("--point", action="append")
    s.set_defaults(func=cmd_hartogs)

    s = sub.add_parser("compare-canonical", help="T f against the L^2-minimal solution")
    s.add_argument("--k", type=int, default=1)
    s.set_defaults(func=cmd_compare_canonical)

    s = sub.add_parser("oracle-suite", help="Cauchy transform against closed forms")
    s.set_defaults(func=cmd_oracle_suite)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, DbarError, ValueError, KeyError) as exc:
        print(f"dbarprod {args.cmd}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
