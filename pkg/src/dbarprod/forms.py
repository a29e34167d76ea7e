"""Laurent-monomial algebra for functions and (0,1)-forms in two variables.

A ``FormExpr`` is a finite sum of terms ``c * z1^p1 zb1^q1 z2^p2 zb2^q2``.  The
set is closed under the Wirtinger derivatives, so closedness of a form and its
mixed derivative can be decided exactly.  Negative exponents are legal in a
variable only where the relevant domain factor excludes 0; the checks live in
:func:`check_powers` and in the JSON parser, not in the algebra itself.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Literal, Union

import numpy as np

from .errors import (DivergentWeight, LaurentPole, MissingDerivativeData,
                     OutOfDomain, SymbolicRequired)
from .geometry import HartogsDomain, PlanarDomain, ProductDomain, area_rule, radial_rule

PRUNE = 1e-15

Var = Literal["z1", "z2"]
Exponents = tuple[int, int, int, int]


@dataclass(frozen=True, order=True)
class MonomialTerm:
    p1: int
    q1: int
    p2: int
    q2: int
    coef: complex = 1.0

    @property
    def exponents(self) -> Exponents:
        return (self.p1, self.q1, self.p2, self.q2)

    def factor(self, var: Var) -> tuple[int, int]:
        """(holomorphic, antiholomorphic) exponents in one variable."""
        return (self.p1, self.q1) if var == "z1" else (self.p2, self.q2)


class FormExpr:
    """Immutable canonical sum of Laurent monomials."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[MonomialTerm] = ()):
        acc: dict[Exponents, complex] = {}
        for t in terms:
            acc[t.exponents] = acc.get(t.exponents, 0j) + complex(t.coef)
        self._terms = tuple(MonomialTerm(*e, coef=c) for e, c in sorted(acc.items())
                            if abs(c) >= PRUNE)

    @classmethod
    def from_dict(cls, d: dict[Exponents, complex]) -> "FormExpr":
        return cls(MonomialTerm(*e, coef=c) for e, c in d.items())

    @classmethod
    def monomial(cls, coef: complex = 1.0, p1: int = 0, q1: int = 0,
                 p2: int = 0, q2: int = 0) -> "FormExpr":
        return cls([MonomialTerm(p1, q1, p2, q2, complex(coef))])

    @classmethod
    def const(cls, c: complex) -> "FormExpr":
        return cls.monomial(c)

    @classmethod
    def zero(cls) -> "FormExpr":
        return cls()

    @property
    def terms(self) -> tuple[MonomialTerm, ...]:
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def max_coef(self) -> float:
        return max((abs(t.coef) for t in self._terms), default=0.0)

    def negligible(self, scale: float, rtol: float = 1e-12) -> bool:
        """All coefficients below rtol * scale (rounding left by arithmetic)."""
        return self.max_coef() <= rtol * scale

    def as_dict(self) -> dict[Exponents, complex]:
        return {t.exponents: t.coef for t in self._terms}

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def __eq__(self, other):
        if isinstance(other, (int, float, complex)):
            other = FormExpr.const(other)
        if not isinstance(other, FormExpr):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def __repr__(self):
        if not self._terms:
            return "FormExpr(0)"
        parts = []
        for t in self._terms:
            mono = "".join(f"*{s}^{e}" for s, e in zip(("z1", "zb1", "z2", "zb2"),
                                                        t.exponents) if e)
            parts.append(f"({t.coef:.6g}){mono}")
        return "FormExpr(" + " + ".join(parts) + ")"

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = FormExpr.const(other)
        if not isinstance(other, FormExpr):
            return NotImplemented
        return FormExpr(self._terms + other._terms)

    __radd__ = __add__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            other = FormExpr.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return FormExpr(replace(t, coef=t.coef * complex(other)) for t in self._terms)
        if not isinstance(other, FormExpr):
            return NotImplemented
        return FormExpr(
            MonomialTerm(a.p1 + b.p1, a.q1 + b.q1, a.p2 + b.p2, a.q2 + b.q2,
                         a.coef * b.coef)
            for a in self._terms for b in other._terms)

    __rmul__ = __mul__

    def dbar(self, var: Var) -> "FormExpr":
        return wirtinger_dbar(self, var)

    def d(self, var: Var) -> "FormExpr":
        """Holomorphic Wirtinger derivative."""
        if var == "z1":
            return FormExpr(replace(t, p1=t.p1 - 1, coef=t.coef * t.p1)
                            for t in self._terms if t.p1)
        return FormExpr(replace(t, p2=t.p2 - 1, coef=t.coef * t.p2)
                        for t in self._terms if t.p2)

    def swap(self) -> "FormExpr":
        return FormExpr(MonomialTerm(t.p2, t.q2, t.p1, t.q1, t.coef) for t in self._terms)

    def min_power(self, var: Var) -> int:
        """Smallest exponent (holomorphic or not) appearing in ``var``."""
        if not self._terms:
            return 0
        return min(min(t.factor(var)) for t in self._terms)

    def __call__(self, z1, z2):
        return evaluate(self, z1, z2)

    def to_json(self) -> list[dict]:
        return [{"coef": [t.coef.real, t.coef.imag], "p1": t.p1, "q1": t.q1,
                 "p2": t.p2, "q2": t.q2} for t in self._terms]

    @classmethod
    def from_json(cls, items: list[dict], laurent_z1: bool = False,
                  laurent_z2: bool = False) -> "FormExpr":
        terms = []
        for it in items:
            c = it.get("coef", 1.0)
            coef = complex(c[0], c[1]) if isinstance(c, (list, tuple)) else complex(c)
            e = [int(it.get(k, 0)) for k in ("p1", "q1", "p2", "q2")]
            if not laurent_z1 and (e[0] < 0 or e[1] < 0):
                raise ValueError(f"negative z1 exponent in {it}")
            if not laurent_z2 and (e[2] < 0 or e[3] < 0):
                raise ValueError(f"negative z2 exponent in {it} on a domain containing z2 = 0")
            terms.append(MonomialTerm(*e, coef=coef))
        return cls(terms)


Z1 = FormExpr.monomial(1, p1=1)
ZB1 = FormExpr.monomial(1, q1=1)
Z2 = FormExpr.monomial(1, p2=1)
ZB2 = FormExpr.monomial(1, q2=1)
ONE = FormExpr.const(1)


def wirtinger_dbar(e: FormExpr, var: Var) -> FormExpr:
    """Exact d/d(zbar_j), term by term."""
    if var == "z1":
        return FormExpr(replace(t, q1=t.q1 - 1, coef=t.coef * t.q1)
                        for t in e.terms if t.q1)
    if var == "z2":
        return FormExpr(replace(t, q2=t.q2 - 1, coef=t.coef * t.q2)
                        for t in e.terms if t.q2)
    raise ValueError(f"unknown variable {var!r}")


def _power(z: np.ndarray, k: int) -> np.ndarray:
    return z ** k if k >= 0 else 1.0 / z ** (-k)


def evaluate(e: FormExpr, z1, z2):
    """Evaluate ``e`` at broadcastable arrays (or scalars) z1, z2."""
    z1 = np.asarray(z1, dtype=complex)
    z2 = np.asarray(z2, dtype=complex)
    shape = np.broadcast_shapes(z1.shape, z2.shape)
    if e.min_power("z1") < 0 and np.any(z1 == 0):
        raise LaurentPole("negative z1 power evaluated at z1 = 0")
    if e.min_power("z2") < 0 and np.any(z2 == 0):
        raise LaurentPole("negative z2 power evaluated at z2 = 0")
    out = np.zeros(shape, dtype=complex)
    cache: dict[tuple[int, int], np.ndarray] = {}

    def pw(var: int, k: int, conj: bool):
        key = (var * 2 + conj, k)
        if key not in cache:
            base = z1 if var == 1 else z2
            cache[key] = _power(np.conj(base) if conj else base, k)
        return cache[key]

    for t in e.terms:
        val = t.coef
        if t.p1:
            val = val * pw(1, t.p1, False)
        if t.q1:
            val = val * pw(1, t.q1, True)
        if t.p2:
            val = val * pw(2, t.p2, False)
        if t.q2:
            val = val * pw(2, t.q2, True)
        out = out + val
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class SampledFunction:
    """Black-box function of (z1, z2); must accept broadcastable arrays."""

    evaluator: Callable
    smoothness: Literal["C0", "C1"] = "C1"

    def __call__(self, z1, z2):
        out = np.asarray(self.evaluator(np.asarray(z1, dtype=complex),
                                        np.asarray(z2, dtype=complex)), dtype=complex)
        return np.broadcast_to(out, np.broadcast_shapes(np.shape(z1), np.shape(z2)))


Func = Union[FormExpr, SampledFunction]


def as_callable(g: Func | Callable) -> Callable:
    return g if callable(g) else (lambda z1, z2: evaluate(g, z1, z2))


@dataclass(frozen=True)
class OneForm:
    """A (0,1)-form f1 dzb1 + f2 dzb2."""

    f1: Func
    f2: Func
    explicit_D: Func | None = None

    def __post_init__(self):
        if self.is_symbolic and isinstance(self.explicit_D, FormExpr):
            if self.explicit_D != _symbolic_D(self):
                raise ValueError("explicit_D disagrees with the exact mixed derivative")

    @classmethod
    def zero(cls) -> "OneForm":
        return cls(FormExpr(), FormExpr())

    @property
    def is_symbolic(self) -> bool:
        return isinstance(self.f1, FormExpr) and isinstance(self.f2, FormExpr)

    def swap(self) -> "OneForm":
        """Pull back under (z1, z2) -> (z2, z1)."""
        if not self.is_symbolic:
            f1, f2 = self.f1, self.f2
            d = self.explicit_D
            return OneForm(SampledFunction(lambda a, b: f2(b, a)),
                           SampledFunction(lambda a, b: f1(b, a)),
                           None if d is None else SampledFunction(lambda a, b: d(b, a)))
        return OneForm(self.f2.swap(), self.f1.swap())

    def __add__(self, other: "OneForm") -> "OneForm":
        if not (self.is_symbolic and other.is_symbolic):
            raise SymbolicRequired("form arithmetic needs symbolic components")
        return OneForm(self.f1 + other.f1, self.f2 + other.f2)

    def __mul__(self, c: complex) -> "OneForm":
        if not self.is_symbolic:
            raise SymbolicRequired("form arithmetic needs symbolic components")
        return OneForm(self.f1 * c, self.f2 * c)

    __rmul__ = __mul__

    def to_json(self) -> dict:
        if not self.is_symbolic:
            raise SymbolicRequired("only symbolic forms serialise")
        return {"f1": self.f1.to_json(), "f2": self.f2.to_json()}

    @classmethod
    def from_json(cls, d: dict, domain: ProductDomain | None = None) -> "OneForm":
        lz1 = domain is not None and not domain.factor1.contains(0j)
        lz2 = domain is not None and not domain.factor2.contains(0j)
        return cls(FormExpr.from_json(d.get("f1", []), lz1, lz2),
                   FormExpr.from_json(d.get("f2", []), lz1, lz2))


def dbar_defect(f: OneForm) -> FormExpr:
    """d f1/d zb2 - d f2/d zb1; zero iff the form is dbar-closed."""
    if not f.is_symbolic:
        raise SymbolicRequired("closedness is decided only for symbolic forms")
    return wirtinger_dbar(f.f1, "z2") - wirtinger_dbar(f.f2, "z1")


def is_closed(f: OneForm, rtol: float = 1e-12) -> bool:
    # exponents are exact; coefficients may carry rounding from arithmetic
    scale = max(wirtinger_dbar(f.f1, "z2").max_coef(), wirtinger_dbar(f.f2, "z1").max_coef())
    return dbar_defect(f).negligible(scale, rtol)


def _symbolic_D(f: OneForm) -> FormExpr:
    return (wirtinger_dbar(f.f1, "z2") + wirtinger_dbar(f.f2, "z1")) * 0.5


def script_D(f: OneForm, fd_step: float | None = None) -> Func:
    """The symmetrised mixed derivative (d f1/d zb2 + d f2/d zb1) / 2.

    Sampled forms need ``explicit_D``; passing ``fd_step`` instead falls back
    to central differences, which costs roughly fd_step**2 in accuracy.
    """
    if f.explicit_D is not None:
        return f.explicit_D
    if f.is_symbolic:
        return _symbolic_D(f)
    if fd_step is None:
        raise MissingDerivativeData("sampled form without explicit_D")
    g1, g2, h = as_callable(f.f1), as_callable(f.f2), fd_step

    def D(z1, z2):
        d1 = (g1(z1, z2 + h) - g1(z1, z2 - h)
              + 1j * (g1(z1, z2 + 1j * h) - g1(z1, z2 - 1j * h))) / (4 * h)
        d2 = (g2(z1 + h, z2) - g2(z1 - h, z2)
              + 1j * (g2(z1 + 1j * h, z2) - g2(z1 - 1j * h, z2))) / (4 * h)
        return 0.5 * (d1 + d2)

    return SampledFunction(D)


def check_powers(e: FormExpr, domain: ProductDomain | HartogsDomain) -> None:
    """Reject negative exponents in a variable whose factor contains 0."""
    if isinstance(domain, HartogsDomain):
        bad1, bad2 = True, False
    else:
        bad1, bad2 = bool(domain.factor1.contains(0j)), bool(domain.factor2.contains(0j))
    if bad1 and e.min_power("z1") < 0:
        raise OutOfDomain("negative z1 power on a domain containing z1 = 0")
    if bad2 and e.min_power("z2") < 0:
        raise OutOfDomain("negative z2 power on a domain containing z2 = 0")


# ----------------------------------------------------------------------------
# norms

@dataclass(frozen=True)
class NormReport:
    kind: Literal["Lp", "Lp_weighted", "Banach_B"]
    p: float
    weight_exp: float
    value: float
    est_error: float
    nodes_used: int
    epsilon: float = 0.0


DEFAULT_NORM_RES = (24, 48)
DEFAULT_HARTOGS_RES = (12, 16, 24)


def _product_power_integral(h: Callable, domain: ProductDomain, p: float, s: float,
                            n_r: int, n_theta: int, epsilon: float, graded: bool,
                            decades: int) -> tuple[float, int]:
    f1, f2 = domain.factors
    n1, w1 = area_rule(f1, n_r, n_theta)
    if graded:
        n2, w2 = area_rule(f2, max(6, n_r // 2), n_theta, graded=True,
                           epsilon=epsilon, decades=decades)
    else:
        n2, w2 = area_rule(f2, n_r, n_theta, epsilon=epsilon)
    weight2 = w2 * np.abs(n2) ** s if s else w2
    total = 0.0
    chunk = max(1, 400_000 // len(n2))
    for i in range(0, len(n1), chunk):
        vals = np.abs(h(n1[i:i + chunk, None], n2[None, :])) ** p
        total += float(w1[i:i + chunk] @ (vals @ weight2))
    return total, len(n1) * len(n2)


def _hartogs_power_integral(h: Callable, p: float, s: float, n_rho: int, n_t: int,
                            n_theta: int, epsilon: float, graded: bool,
                            decades: int) -> tuple[float, int]:
    rho, wrho = radial_rule(epsilon, 1.0, n_rho, graded=True, decades=decades)
    x, wt = np.polynomial.legendre.leggauss(n_t)
    t, wt = (x + 1) / 2, wt / 2
    th = 2 * np.pi * np.arange(n_theta) / n_theta
    e = np.exp(1j * th)
    dth = 2 * np.pi / n_theta
    # z2 = rho e^{i th2}, z1 = rho t e^{i th1}; dV = rho^3 t drho dt dth1 dth2
    z2 = (rho[:, None] * e[None, :]).ravel()
    w2 = np.repeat(wrho * rho ** (3 + s), n_theta) * dth
    u1 = (t[:, None] * e[None, :]).ravel()
    w1 = np.repeat(wt * t, n_theta) * dth
    total = 0.0
    chunk = max(1, 400_000 // len(u1))
    for i in range(0, len(z2), chunk):
        zz2 = z2[i:i + chunk, None]
        vals = np.abs(h(zz2 * u1[None, :], zz2)) ** p
        total += float(w2[i:i + chunk] @ (vals @ w1))
    return total, len(z2) * len(u1)


def _singular_at_z2_zero(g, s: float) -> bool:
    return s < 0 or (isinstance(g, FormExpr) and g.min_power("z2") < 0)


def lp_norm(g: Func, p: float, domain: ProductDomain | HartogsDomain,
            weight_exp: float = 0.0, resolution: tuple[int, ...] | None = None,
            epsilon: float | None = None, refine: float = 1.5) -> NormReport:
    """(int |g|^p |z2|^weight_exp dV)^(1/p) by tensor or iterated quadrature.

    On an untruncated domain where the integrand may blow up at z2 = 0 the
    value is computed with the graded grid stopped at two depths; growth
    between them raises :class:`DivergentWeight`.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    hartogs = isinstance(domain, HartogsDomain)
    if epsilon is None:
        epsilon = domain.epsilon if hartogs else 0.0
    if weight_exp < 0 and not hartogs and domain.factor2.contains(0j):
        raise OutOfDomain("negative weight needs a domain excluding z2 = 0")
    h = as_callable(g)
    singular = _singular_at_z2_zero(g, weight_exp)
    if hartogs:
        res = resolution or DEFAULT_HARTOGS_RES

        def integral(scale, decades):
            n = [max(2, int(round(r * scale))) for r in res]
            return _hartogs_power_integral(h, p, weight_exp, n[0], n[1], n[2],
                                           epsilon, True, decades)
    else:
        res = resolution or DEFAULT_NORM_RES

        def integral(scale, decades):
            n = [max(2, int(round(r * scale))) for r in res]
            return _product_power_integral(h, domain, p, weight_exp, n[0], n[1],
                                           epsilon, singular, decades)

    base, nodes = integral(1.0, 10)
    fine, nodes_f = integral(refine, 10)
    if epsilon == 0 and singular:
        deep, nodes_d = integral(refine, 20)
        nodes_f += nodes_d
        if abs(deep - fine) > 1e-3 * max(abs(fine), 1e-300):
            raise DivergentWeight(
                f"|z2|^{weight_exp} weighted L^{p} integral grows as the cutoff shrinks "
                f"({fine:.6g} -> {deep:.6g})")
        fine = deep
    value = max(fine, 0.0) ** (1 / p)
    err = abs(value - max(base, 0.0) ** (1 / p))
    kind = "Lp_weighted" if weight_exp else "Lp"
    return NormReport(kind, p, weight_exp, value, err, nodes + nodes_f, epsilon)


def banach_norm(f: OneForm, p: float, domain: ProductDomain,
                resolution: tuple[int, int] | None = None) -> NormReport:
    """||f1||_p + ||f2||_p + ||D f||_p."""
    D = script_D(f)
    parts = [lp_norm(g, p, domain, 0.0, resolution) for g in (f.f1, f.f2, D)]
    return NormReport("Banach_B", p, 0.0, sum(r.value for r in parts),
                      sum(r.est_error for r in parts), sum(r.nodes_used for r in parts))


def inner_product(a: Func, b: Func, domain: ProductDomain | HartogsDomain,
                  resolution: tuple[int, ...] | None = None,
                  epsilon: float = 0.0) -> complex:
    """<a, b> = int a * conj(b) dV."""
    fa, fb = as_callable(a), as_callable(b)
    if isinstance(domain, HartogsDomain):
        n_rho, n_t, n_th = resolution or (16, 16, 32)
        rho, wrho = radial_rule(epsilon or domain.epsilon, 1.0, n_rho, graded=True)
        x, wt = np.polynomial.legendre.leggauss(n_t)
        t, wt = (x + 1) / 2, wt / 2
        e = np.exp(2j * np.pi * np.arange(n_th) / n_th)
        dth = 2 * np.pi / n_th
        z2 = (rho[:, None] * e[None, :]).ravel()
        w2 = np.repeat(wrho * rho ** 3, n_th) * dth
        u1 = (t[:, None] * e[None, :]).ravel()
        w1 = np.repeat(wt * t, n_th) * dth
        z1 = z2[:, None] * u1[None, :]
        vals = fa(z1, z2[:, None]) * np.conj(fb(z1, z2[:, None]))
        return complex(w2 @ vals @ w1)
    n_r, n_th = resolution or (24, 48)
    n1, w1 = area_rule(domain.factor1, n_r, n_th)
    n2, w2 = area_rule(domain.factor2, n_r, n_th, graded=domain.factor2.kind == "punctured_disc")
    vals = fa(n1[:, None], n2[None, :]) * np.conj(fb(n1[:, None], n2[None, :]))
    return complex(w1 @ vals @ w2)


def disc_radial_moment(s: float, r: float = 1.0) -> float:
    """int_{|z|<r} |z|^s dA, used as a closed-form cross-check."""
    return 2 * math.pi * r ** (s + 2) / (s + 2)


__all__ = [
    "MonomialTerm", "FormExpr", "OneForm", "SampledFunction", "NormReport",
    "wirtinger_dbar", "dbar_defect", "is_closed", "script_D", "evaluate", "lp_norm",
    "banach_norm", "inner_product", "check_powers", "Z1", "ZB1", "Z2", "ZB2", "ONE",
]
