"""Drivers that regenerate the numerical evidence: the L^1 counterexample
table, L^p / B-norm ratio sweeps, the Cauchy-transform oracle suite and the
canonical-solution comparisons.  Everything returns plain dataclasses or
dicts; :func:`write_csv` handles tabular output.
"""
from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import cauchy
from .forms import FormExpr, OneForm, banach_norm, inner_product, lp_norm
from .geometry import PlanarDomain, ProductDomain
from .hartogs import (CANONICAL_C, HartogsForm, canonical_pair_exprs,
                      extra_condition_form)
from .product_solver import SolutionField, solve_T_exact

BIDISC = ProductDomain.bidisc()


def f_k(k: int) -> OneForm:
    """The closed form zb1^(k-1) z1^k |z2|^(2k) dzb1 + |z1|^(2k) zb2^(k-1) z2^k dzb2."""
    return OneForm(FormExpr.monomial(1, k, k - 1, k, k),
                   FormExpr.monomial(1, k, k, k, k - 1))


def g_L(L: int) -> OneForm:
    f1 = FormExpr(t for k in range(1, L + 1) for t in f_k(k).f1.terms)
    f2 = FormExpr(t for k in range(1, L + 1) for t in f_k(k).f2.terms)
    return OneForm(f1, f2)


def T_f_k_closed(k: int, z1: complex, z2: complex) -> float:
    return abs(z1 * z2) ** (2 * k) / k - 1 / k


def harmonic(L: int) -> float:
    return math.fsum(1 / k for k in range(1, L + 1))


def fk_component_L1(k: int) -> float:
    """||f1^k||_L1 = ||f2^k||_L1 over the bidisc."""
    return 4 * math.pi ** 2 / ((2 * k + 1) * (2 * k + 2))


def gL_norm_L1_closed(L: int) -> float:
    return 2 * math.fsum(fk_component_L1(k) for k in range(1, L + 1))


def gL_norm_L1_limit() -> float:
    # 2 * sum 4 pi^2 / ((2k+1)(2k+2)) = 8 pi^2 (1 - ln 2)
    return 8 * math.pi ** 2 * (1 - math.log(2))


def TgL_norm_L1_closed(L: int) -> float:
    # T(g^L) <= 0, and int |z1 z2|^(2k) dV = pi^2 / (k+1)^2
    return math.pi ** 2 * (harmonic(L) - math.fsum(1 / (k * (k + 1) ** 2)
                                                   for k in range(1, L + 1)))


@dataclass
class CounterexampleRow:
    L: int
    g_norm_L1: float
    Tg_norm_L1: float
    ratio: float
    harmonic_HL: float
    g_norm_quad: float | None = None
    Tg_norm_quad: float | None = None


def _radial_resolution(L: int) -> tuple[int, int]:
    # integrands are radial polynomials of degree <= 2L + 1 per factor
    return (L + 8, 4)


def counterexample_table(L_max: int, quadrature: bool | Iterable[int] = False
                         ) -> list[CounterexampleRow]:
    """Rows L = 1..L_max; ``quadrature`` adds cross-checks (all rows or a subset)."""
    if L_max < 1:
        raise ValueError("L_max must be >= 1")
    if quadrature is True:
        check = set(range(1, L_max + 1))
    elif quadrature is False:
        check = set()
    else:
        check = set(quadrature)
    rows = []
    for L in range(1, L_max + 1):
        g, tg = gL_norm_L1_closed(L), TgL_norm_L1_closed(L)
        row = CounterexampleRow(L, g, tg, tg / g, harmonic(L))
        if L in check:
            form = g_L(L)
            res = _radial_resolution(L)
            row.g_norm_quad = (lp_norm(form.f1, 1, BIDISC, resolution=res).value
                               + lp_norm(form.f2, 1, BIDISC, resolution=res).value)
            u = solve_T_exact(form, BIDISC)
            row.Tg_norm_quad = lp_norm(u, 1, BIDISC, resolution=res).value
        rows.append(row)
    return rows


def T_gL_at(L: int, z1: complex, z2: complex) -> float:
    """Term-by-term sum of T f^k, k <= L."""
    return math.fsum(T_f_k_closed(k, z1, z2) for k in range(1, L + 1))


def gL_component_lp(L: int, p: float, n: int = 24, decades: int = 10) -> float:
    """||g1^L||_p over the bidisc (equal to ||g2^L||_p by symmetry).

    |g1^L| depends on the radii only; the radial double integral uses Gauss
    panels graded geometrically toward r = 1 where the partial sums pile up.
    """
    x, w = np.polynomial.legendre.leggauss(n)
    edges = 1 - np.concatenate([[1.0], np.geomspace(0.5, 0.5 * 10.0 ** (-decades), 2 * decades + 1), [0.0]])
    left, right = edges[:-1], edges[1:]
    half = (right - left)[:, None] / 2
    r = (left[:, None] + half * (x + 1)).ravel()
    wr = (half * w).ravel()
    R1, R2 = r[:, None], r[None, :]
    # |g1| = sum_k r1^(2k-1) r2^(2k) = r1 r2^2 (1 - s^L) / (1 - s), s = (r1 r2)^2
    ls = 2 * (np.log(R1) + np.log(R2))
    with np.errstate(invalid="ignore"):
        geo = np.where(ls < 0, np.expm1(L * ls) / np.expm1(ls), float(L))
    mag = R1 * R2 ** 2 * geo
    total = (2 * np.pi) ** 2 * (wr * r) @ (mag ** p) @ (wr * r)
    return float(total ** (1 / p))


def gL_lp_contrast(ps: Sequence[float] = (1.5, 2.0),
                   Ls: Sequence[int] = (8, 16, 32, 64, 128)) -> dict:
    """||g^L||_p = ||g1^L||_p + ||g2^L||_p for a range of truncations."""
    return {p: {L: 2 * gL_component_lp(L, p) for L in Ls} for p in ps}


# ----------------------------------------------------------------------------
# bound sweeps

@dataclass
class BoundReport:
    Tf_norm: float
    Tf_err: float
    B_norm: float
    ratio: float
    undefined_ratio: bool


def lp_bound_report(f: OneForm, domain: ProductDomain, p: float,
                    resolution: tuple[int, int] = (32, 32)) -> BoundReport:
    """||T f||_p against ||f||_B; the norm of T f samples the solution field."""
    u = SolutionField(f, domain)
    tf = lp_norm(u, p, domain, resolution=resolution)
    b = banach_norm(f, p, domain, resolution=resolution)
    undefined = b.value == 0
    ratio = math.nan if undefined else tf.value / b.value
    return BoundReport(tf.value, tf.est_error, b.value, ratio, undefined)


def _coef(rng: np.random.Generator, integer: bool) -> complex:
    # Gaussian integers keep all coefficient arithmetic exact
    if integer:
        a, b = rng.integers(-8, 9, size=2)
        return complex(int(a), int(b)) if a or b else 1.0
    return complex(rng.normal(), rng.normal())


def random_monomial(rng: np.random.Generator, max_deg: int = 3,
                    integer_coefs: bool = False) -> FormExpr:
    e = rng.integers(0, max_deg + 1, size=4)
    return FormExpr.monomial(_coef(rng, integer_coefs), *map(int, e))


def random_closed_monomial_form(rng: np.random.Generator, max_deg: int = 3,
                                integer_coefs: bool = False) -> OneForm:
    """dbar of a random monomial potential (at least one antiholomorphic power)."""
    while True:
        U = random_monomial(rng, max_deg, integer_coefs)
        t = U.terms[0]
        if t.q1 + t.q2 > 0:
            break
    return OneForm(U.dbar("z1"), U.dbar("z2"))


def random_closed_hartogs_form(rng: np.random.Generator, max_deg: int = 3,
                               integer_coefs: bool = False) -> HartogsForm:
    """Closed alpha on the triangle: half the time a generic dbar-potential,
    otherwise a form with zb1 a1 + zb2 a2 = 0."""
    if rng.random() < 0.5:
        return extra_condition_form(int(rng.integers(0, max_deg + 1)),
                                    int(rng.integers(-2, max_deg + 1)),
                                    _coef(rng, integer_coefs))
    while True:
        p1, q1, q2 = (int(v) for v in rng.integers(0, max_deg + 1, size=3))
        p2 = int(rng.integers(-2, max_deg + 1))
        if q1 + q2 > 0:
            break
    V = FormExpr.monomial(_coef(rng, integer_coefs), p1, q1, p2, q2)
    return HartogsForm(V.dbar("z1"), V.dbar("z2"))


def bound_sweep(trials: int = 20, ps: Sequence[float] = (1, 2, 4), seed: int = 0,
                resolutions: Sequence[tuple[int, int]] = ((16, 16), (24, 24))) -> dict:
    """Max ratio ||T f||_p / ||f||_B over random closed monomial forms, per p
    and per grid resolution."""
    rng = np.random.default_rng(seed)
    forms = [random_closed_monomial_form(rng) for _ in range(trials)]
    out: dict = {}
    for p in ps:
        out[p] = {}
        for res in resolutions:
            ratios = [lp_bound_report(f, BIDISC, p, res).ratio for f in forms]
            out[p][res] = {"max_ratio": float(np.nanmax(ratios)), "ratios": ratios}
    return out


def cauchy_lp_property(p: float, trials: int, seed: int = 0, max_deg: int = 3,
                       resolution: tuple[int, int] = (24, 24)) -> dict:
    """Max over random monomials g of ||K_1[g(., z2)]||_p / ||g||_p on the bidisc."""
    rng = np.random.default_rng(seed)
    D1 = BIDISC.factor1
    ratios = []
    for _ in range(trials):
        g = random_monomial(rng, max_deg)
        Kg = cauchy.transform_expr(g, "z1", D1)
        ng = lp_norm(g, p, BIDISC, resolution=resolution).value
        ratios.append(lp_norm(Kg, p, BIDISC, resolution=resolution).value / ng
                      if ng > 0 else math.nan)
    finite = [r for r in ratios if not math.isnan(r)]
    return {"p": p, "max_ratio": max(finite) if finite else math.nan,
            "ratios": ratios, "undefined": len(finite) < len(ratios)}


def cauchy_ratio(g: FormExpr, p: float, resolution=(24, 24)) -> float:
    ng = lp_norm(g, p, BIDISC, resolution=resolution).value
    if ng == 0:
        return math.nan
    Kg = cauchy.transform_expr(g, "z1", BIDISC.factor1)
    return lp_norm(Kg, p, BIDISC, resolution=resolution).value / ng


# ----------------------------------------------------------------------------
# oracle suite

ORACLE_POINTS = (0.3, 0.6 + 0.2j, -0.4 + 0.5j, 0.1 - 0.7j, -0.55 - 0.25j)
ORACLE_RESOLUTIONS = (32, 64, 128, 256)
NOISE_FLOOR = 1e-12


def fit_order(ns: Sequence[int], errs: Sequence[float],
              floor: float = NOISE_FLOOR) -> float:
    """Least-squares slope of -log(err) against log(n), ignoring rounding noise.

    Returns inf when fewer than two errors rise above ``floor`` (the rule is
    exact for that integrand).
    """
    pts = [(n, e) for n, e in zip(ns, errs) if e > floor]
    if len(pts) < 2:
        return math.inf
    x = np.log([n for n, _ in pts])
    y = np.log([e for _, e in pts])
    return float(-np.polyfit(x, y, 1)[0])


@dataclass
class OracleCheck:
    name: str
    k: int
    z: complex
    exact: complex
    errors: list[float]
    order: float
    final_error: float
    passed: bool

    def as_dict(self) -> dict:
        d = asdict(self)
        d["z"] = [self.z.real, self.z.imag]
        d["exact"] = [self.exact.real, self.exact.imag]
        return d


def oracle_check(kind: str, k: int, z: complex,
                 resolutions: Sequence[int] = ORACLE_RESOLUTIONS,
                 min_order: float = 1.9, tol: float = 1e-4) -> OracleCheck:
    D = PlanarDomain.disc()
    if kind == "antiholo":
        exact, g = cauchy.exact_antiholo(k, z), cauchy.univariate(k, k - 1)
    else:
        exact, g = cauchy.exact_holo(k, z), cauchy.univariate(k, 0)
    scale = max(abs(exact), 1e-300)
    errs = [abs(cauchy.cauchy_transform(g, D, z, (n, 2 * n)) - exact) / scale
            for n in resolutions]
    order = fit_order(resolutions, errs)
    final = errs[resolutions.index(128)] if 128 in resolutions else errs[-1]
    return OracleCheck(kind, k, complex(z), exact, errs, order, final,
                       bool(order >= min_order and final <= tol))


def oracle_suite(ks: Sequence[int] = (1, 2, 5), points: Sequence[complex] = ORACLE_POINTS,
                 seed: int = 0) -> dict:
    checks = [oracle_check(kind, k, z) for kind in ("antiholo", "holo")
              for k in ks for z in points]
    rng = np.random.default_rng(seed)
    zs = 0.9 * np.sqrt(rng.random(10)) * np.exp(2j * np.pi * rng.random(10))
    identity_gap = max(abs(cauchy.exact_antiholo(1, z) - cauchy.exact_holo(1, z)) for z in zs)
    passed = all(c.passed for c in checks) and identity_gap <= 1e-14
    return {"passed": passed, "identity_gap_k1": identity_gap,
            "checks": [c.as_dict() for c in checks]}


# ----------------------------------------------------------------------------
# canonical comparisons

def canonical_orthogonality(k: int = 1, max_mn: int = 2,
                            resolution: tuple[int, int] = (24, 48)) -> dict:
    """Inner products of u = T f and u_can with z1^m z2^n on the bidisc."""
    u, u_can = canonical_pair_exprs(k)
    out = {"k": k, "u_can": {}, "u": {}}
    for m in range(max_mn + 1):
        for n in range(max_mn + 1):
            mono = FormExpr.monomial(1, p1=m, p2=n)
            out["u_can"][(m, n)] = inner_product(u_can, mono, BIDISC, resolution)
            out["u"][(m, n)] = inner_product(u, mono, BIDISC, resolution)
    return out


def hartogs_contrast(epsilons: Sequence[float] = (1e-2, 1e-3, 1e-4), p: float = 4,
                     c: float = CANONICAL_C) -> list[dict]:
    """||v||_p and ||v_can||_p^p on the truncated triangle for alpha = dzb2."""
    from .geometry import HartogsDomain
    from .hartogs import V_EXAMPLE, v_canonical_expr
    rows = []
    for eps in epsilons:
        H = HartogsDomain(eps)
        v = lp_norm(V_EXAMPLE, p, H)
        vc = lp_norm(v_canonical_expr(c), p, H)
        rows.append({"epsilon": eps, "v_norm": v.value, "v_norm_err": v.est_error,
                     "v_can_pow": vc.value ** p, "v_can_pow_err": p * vc.value ** (p - 1) * vc.est_error,
                     "log_term": c ** 4 * 2 * math.pi ** 2 * math.log(1 / eps)
                     if p == 4 else math.nan})
    return rows


def write_csv(path, rows: list, fieldnames: list[str] | None = None) -> None:
    rows = [asdict(r) if hasattr(r, "__dataclass_fields__") else dict(r) for r in rows]
    if fieldnames is None:
        fieldnames = list(rows[0]) if rows else []
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fieldnames, extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow(r)
