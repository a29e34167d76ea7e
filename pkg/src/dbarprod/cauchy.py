"""The planar solid Cauchy transform

    K[g](z) = -(1/pi) * int_D g(zeta) / (zeta - z) dA(zeta),

which inverts d/dzbar on a planar domain, by polar quadrature and in closed
form for Laurent monomials on domains centred at the origin.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import DivergentIntegral, OutOfDomain
from .forms import FormExpr, MonomialTerm, Var
from .geometry import PlanarDomain, SingularQuadRule, build_singular_rule

DEFAULT_RESOLUTION = (128, 256)


def apply_rule(values: np.ndarray, rule: SingularQuadRule) -> complex:
    return complex(-np.dot(rule.weights, values / (rule.nodes - rule.center)) / np.pi)


def cauchy_transform(g: Callable, domain: PlanarDomain, z: complex,
                     resolution: tuple[int, int] = DEFAULT_RESOLUTION,
                     order: int = 2) -> complex:
    """Quadrature value of K[g](z); ``g`` maps an array of zeta to values."""
    rule = singular_rule(domain, complex(z), *resolution, order)
    return apply_rule(np.asarray(g(rule.nodes), dtype=complex), rule)


@lru_cache(maxsize=512)
def singular_rule(domain: PlanarDomain, z: complex, n_r: int, n_theta: int,
                  order: int = 2) -> SingularQuadRule:
    return build_singular_rule(domain, z, n_r, n_theta, order)


def exact_antiholo(k: int, z: complex) -> complex:
    """K[zetabar^(k-1) zeta^k](z) on the unit disc: (|z|^(2k) - 1)/k."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    if abs(z) >= 1:
        raise OutOfDomain(f"|z| = {abs(z)} >= 1")
    return complex((abs(z) ** (2 * k) - 1) / k)


def exact_holo(k: int, z: complex) -> complex:
    """K[zeta^k](z) on the unit disc: z^k zbar - z^(k-1)."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    if abs(z) >= 1:
        raise OutOfDomain(f"|z| = {abs(z)} >= 1")
    z = complex(z)
    return z ** k * z.conjugate() - z ** (k - 1)


def monomial_transform(a: int, b: int, domain: PlanarDomain) -> list[tuple[complex, int, int]]:
    """K[zeta^a zetabar^b] as a list of (coef, m, n) meaning coef z^m zbar^n.

    From Cauchy-Pompeiu with the particular solution z^a zbar^(b+1)/(b+1) and
    zbar = r^2/z on each boundary circle.  Only origin-centred domains and
    b != -1 (whose primitive is logarithmic) are covered.
    """
    if not domain.is_centered:
        raise ValueError("closed form needs a domain centred at 0")
    if b == -1:
        raise ValueError("zetabar^-1 has no monomial primitive")
    if domain.kind != "annulus" and a + b <= -2:
        raise DivergentIntegral(f"|zeta|^{a + b} is not integrable at 0")
    c = 1.0 / (b + 1)
    m = a - b - 1
    out = [(c, a, b + 1)]
    if m >= 0:
        out.append((-c * domain.r_outer ** (2 * (b + 1)), m, 0))
    elif domain.kind == "annulus":
        out.append((-c * domain.r_inner ** (2 * (b + 1)), m, 0))
    return out


def has_closed_form(e: FormExpr, var: Var, domain: PlanarDomain) -> bool:
    if not domain.is_centered:
        return False
    for t in e.terms:
        a, b = t.factor(var)
        if b == -1 or (domain.kind != "annulus" and a + b <= -2):
            return False
    return True


def transform_expr(e: FormExpr, var: Var, domain: PlanarDomain) -> FormExpr:
    """Apply K in one variable to every term of ``e``; the other variable rides along."""
    out = []
    for t in e.terms:
        a, b = t.factor(var)
        for c, m, n in monomial_transform(a, b, domain):
            if var == "z1":
                out.append(MonomialTerm(m, n, t.p2, t.q2, t.coef * c))
            else:
                out.append(MonomialTerm(t.p1, t.q1, m, n, t.coef * c))
    return FormExpr(out)


def univariate(a: int, b: int) -> Callable:
    return lambda zeta: zeta ** a * np.conj(zeta) ** b if a >= 0 and b >= 0 else (
        _laurent(zeta, a) * _laurent(np.conj(zeta), b))


def _laurent(z, k):
    return z ** k if k >= 0 else 1.0 / z ** (-k)
