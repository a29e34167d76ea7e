"""dbar on the Hartogs triangle by pulling back to disc x punctured disc.

Under phi(z) = (z1/z2, z2) = (w1, w2) the equation dbar v = alpha becomes
dbar u = f with f1 = wb2 * a1, f2 = wb1 * a1 + a2, where aj = alpha_j o phi^-1,
and v = (T f) o phi.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NotClosed, OutOfDomain, SymbolicRequired
from .forms import FormExpr, MonomialTerm, NormReport, OneForm, lp_norm, wirtinger_dbar
from .geometry import HartogsDomain, ProductDomain, phi
from .product_solver import SolutionField

DXDP = ProductDomain.disc_times_punctured()
# <zb2, 1/z2> / ||1/z2||^2 over the triangle = (pi^2/2) / pi^2
CANONICAL_C = 0.5


@dataclass(frozen=True)
class HartogsForm:
    alpha1: FormExpr
    alpha2: FormExpr

    @classmethod
    def from_json(cls, d: dict) -> "HartogsForm":
        # negative z2 powers are fine on the triangle; z1 = 0 is inside it
        return cls(FormExpr.from_json(d.get("alpha1", []), False, True),
                   FormExpr.from_json(d.get("alpha2", []), False, True))

    def to_json(self) -> dict:
        return {"alpha1": self.alpha1.to_json(), "alpha2": self.alpha2.to_json()}

    def defect(self) -> FormExpr:
        return wirtinger_dbar(self.alpha1, "z2") - wirtinger_dbar(self.alpha2, "z1")

    def is_closed(self, rtol: float = 1e-12) -> bool:
        scale = max(wirtinger_dbar(self.alpha1, "z2").max_coef(),
                    wirtinger_dbar(self.alpha2, "z1").max_coef())
        return self.defect().negligible(scale, rtol)

    def __call__(self, z1, z2):
        return self.alpha1(z1, z2), self.alpha2(z1, z2)


def _compose_phi_inv(e: FormExpr) -> FormExpr:
    # z1^p zb1^q z2^r zb2^s  ->  w1^p wb1^q w2^(p+r) wb2^(q+s)
    return FormExpr(MonomialTerm(t.p1, t.q1, t.p1 + t.p2, t.q1 + t.q2, t.coef)
                    for t in e.terms)


def pullback(alpha: HartogsForm) -> OneForm:
    """The transformed form f on disc x punctured disc."""
    if not isinstance(alpha.alpha1, FormExpr) or not isinstance(alpha.alpha2, FormExpr):
        raise SymbolicRequired("pullback needs symbolic components")
    if not alpha.is_closed():
        raise NotClosed(f"alpha is not dbar-closed, defect = {alpha.defect()}")
    a1, a2 = _compose_phi_inv(alpha.alpha1), _compose_phi_inv(alpha.alpha2)
    wb1 = FormExpr.monomial(1, q1=1)
    wb2 = FormExpr.monomial(1, q2=1)
    return OneForm(wb2 * a1, wb1 * a1 + a2)


def extra_condition_holds(alpha: HartogsForm) -> bool:
    """zb1 * alpha1 + zb2 * alpha2 == 0 identically."""
    if not isinstance(alpha.alpha1, FormExpr) or not isinstance(alpha.alpha2, FormExpr):
        raise SymbolicRequired("the identity is checked symbolically")
    zb1 = FormExpr.monomial(1, q1=1)
    zb2 = FormExpr.monomial(1, q2=1)
    return (zb1 * alpha.alpha1 + zb2 * alpha.alpha2).is_zero()


class HartogsSolution:
    """v = (T f) o phi for f the pullback of alpha."""

    def __init__(self, alpha: HartogsForm, **solver_kw):
        self.alpha = alpha
        self.form = pullback(alpha)
        self.field = SolutionField(self.form, DXDP, **solver_kw)

    def at(self, z1: complex, z2: complex) -> complex:
        HartogsDomain().check_interior(z1, z2)
        w1, w2 = phi(complex(z1), complex(z2))
        return self.field.at(complex(w1), complex(w2))

    def __call__(self, z1, z2):
        w1, w2 = phi(z1, z2)
        return self.field(w1, w2)


def solve_hartogs(alpha: HartogsForm, z: tuple[complex, complex], **solver_kw) -> complex:
    HartogsDomain().check_interior(*z)
    return HartogsSolution(alpha, **solver_kw).at(*z)


@dataclass(frozen=True)
class HartogsReport:
    p: float
    epsilon: float
    alpha1_m2: NormReport
    alpha2_m2: NormReport
    d1alpha1_m1: NormReport
    d2alpha1_m1: NormReport
    d1alpha2_m1: NormReport
    solution: NormReport

    @property
    def data_sum(self) -> float:
        return (self.alpha1_m2.value + self.alpha2_m2.value
                + self.d1alpha1_m1.value + self.d2alpha1_m1.value)

    @property
    def ratio(self) -> float:
        s = self.data_sum
        return self.solution.value / s if s > 0 else math.nan

    def as_dict(self) -> dict:
        return {"p": self.p, "epsilon": self.epsilon,
                "alpha1_Lp_-2": self.alpha1_m2.value, "alpha2_Lp_-2": self.alpha2_m2.value,
                "dalpha1_dzb1_Lp_-1": self.d1alpha1_m1.value,
                "dalpha1_dzb2_Lp_-1": self.d2alpha1_m1.value,
                "dalpha2_dzb1_Lp_-1": self.d1alpha2_m1.value,
                "v_Lp": self.solution.value, "v_Lp_err": self.solution.est_error,
                "ratio": self.ratio}


def hartogs_report(alpha: HartogsForm, p: float, epsilon: float = 1e-4,
                   resolution: tuple[int, int, int] | None = None) -> HartogsReport:
    """Weighted data norms on the triangle and the L^p norm of v, truncated at epsilon."""
    H = HartogsDomain(epsilon)
    sol = HartogsSolution(alpha)
    norms = [lp_norm(alpha.alpha1, p, H, -2, resolution),
             lp_norm(alpha.alpha2, p, H, -2, resolution),
             lp_norm(wirtinger_dbar(alpha.alpha1, "z1"), p, H, -1, resolution),
             lp_norm(wirtinger_dbar(alpha.alpha1, "z2"), p, H, -1, resolution),
             lp_norm(wirtinger_dbar(alpha.alpha2, "z1"), p, H, -1, resolution)]
    v_norm = lp_norm(sol, p, H, 0, resolution)
    return HartogsReport(p, epsilon, *norms, v_norm)


def hartogs_canonical(z: tuple[complex, complex], c: float = CANONICAL_C) -> complex:
    """L^2-minimal solution of dbar v = dzb2 on the triangle: zb2 - c/z2."""
    HartogsDomain().check_interior(*z)
    z2 = complex(z[1])
    return z2.conjugate() - c / z2


V_EXAMPLE = FormExpr.monomial(1, q2=1)


def v_canonical_expr(c: float = CANONICAL_C) -> FormExpr:
    return V_EXAMPLE - FormExpr.monomial(c, p2=-1)


def canonical_pair(k: int, z: tuple[complex, complex]) -> tuple[complex, complex]:
    """(T f, canonical solution) for f = z1^k dzb1 on the bidisc."""
    if k < 1:
        raise ValueError("k must be positive")
    z1, z2 = complex(z[0]), complex(z[1])
    if abs(z1) >= 1 or abs(z2) >= 1:
        raise OutOfDomain(f"{z} is not in the bidisc")
    base = z1 ** k * z1.conjugate()
    return base - z1 ** (k - 1), base - k / (k + 1) * z1 ** (k - 1)


def canonical_pair_exprs(k: int) -> tuple[FormExpr, FormExpr]:
    base = FormExpr.monomial(1, p1=k, q1=1)
    hol = FormExpr.monomial(1, p1=k - 1)
    return base - hol, base - hol * (k / (k + 1))


def extra_condition_form(m: int, n: int, coef: complex = 1.0) -> HartogsForm:
    """h * (dzb1 / zb2 - zb1 dzb2 / zb2^2) with h = coef z1^m z2^n.

    Closed, and satisfies zb1 a1 + zb2 a2 = 0; it is dbar of h * zb1 / zb2.
    """
    return HartogsForm(FormExpr.monomial(coef, m, 0, n, -1),
                       FormExpr.monomial(-coef, m, 1, n, -2))


__all__ = ["HartogsForm", "HartogsReport", "HartogsSolution", "pullback",
           "extra_condition_holds", "solve_hartogs", "hartogs_report",
           "hartogs_canonical", "canonical_pair", "v_canonical_expr", "CANONICAL_C"]
