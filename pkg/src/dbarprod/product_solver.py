"""Integral solution operator for dbar u = f on a product of planar domains.

With K_j the solid Cauchy transform in the j-th variable,

    T f = K_2[f_2(z_1, .)](z_2) + K_1[f_1(., z_2)](z_1) - (K_1 x K_2)[D f],

where D f is the mixed derivative of a closed form.  Monomial forms on
origin-centred factors are solved exactly (the output is again a ``FormExpr``);
everything else goes through the polar quadrature of :mod:`cauchy`.
"""
from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from . import cauchy
from .errors import DivergentIntegral, GridTooCloseToBoundary, NotClosed, SymbolicRequired
from .forms import (FormExpr, Func, OneForm, as_callable, check_powers, dbar_defect, is_closed,
                    script_D)
from .geometry import (PlanarDomain, ProductDomain, _exit_radius, _gauss_disc_rule,
                       interior_sample)

log = logging.getLogger(__name__)

Method = Literal["auto", "exact", "quadrature"]

DEFAULT_RESOLUTION = cauchy.DEFAULT_RESOLUTION
TENSOR_RESOLUTION = (16, 32)


def require_closed(f: OneForm) -> None:
    if f.is_symbolic:
        if not is_closed(f):
            raise NotClosed(f"form is not dbar-closed, defect = {dbar_defect(f)}")
    else:
        log.warning("closedness of a sampled form is assumed, not checked")


def exact_available(f: OneForm, domain: ProductDomain) -> bool:
    if not f.is_symbolic or f.explicit_D is not None and not isinstance(f.explicit_D, FormExpr):
        return False
    D1, D2 = domain.factors
    D = script_D(f)
    return (cauchy.has_closed_form(f.f2, "z2", D2)
            and cauchy.has_closed_form(f.f1, "z1", D1)
            and cauchy.has_closed_form(D, "z1", D1)
            and cauchy.has_closed_form(D, "z2", D2))


def solve_T_exact_terms(f: OneForm, domain: ProductDomain) -> tuple[FormExpr, FormExpr, FormExpr]:
    """The three terms of T f as exact expressions in (z1, z2)."""
    if not f.is_symbolic:
        raise SymbolicRequired("exact solve needs symbolic components")
    require_closed(f)
    D1, D2 = domain.factors
    for g in (f.f1, f.f2):
        check_powers(g, domain)
    D = script_D(f)
    first = cauchy.transform_expr(f.f2, "z2", D2)
    second = cauchy.transform_expr(f.f1, "z1", D1)
    third = -cauchy.transform_expr(cauchy.transform_expr(D, "z1", D1), "z2", D2)
    return first, second, third


def solve_T_exact(f: OneForm, domain: ProductDomain) -> FormExpr:
    a, b, c = solve_T_exact_terms(f, domain)
    return a + b + c


def _slice_z1(g: Func, z1: complex):
    h = as_callable(g)
    return lambda zeta: h(z1, zeta)


def _slice_z2(g: Func, z2: complex):
    h = as_callable(g)
    return lambda zeta: h(zeta, z2)


def solve_T_quadrature_terms(f: OneForm, domain: ProductDomain, z1: complex, z2: complex,
                             resolution=DEFAULT_RESOLUTION,
                             tensor_resolution=TENSOR_RESOLUTION,
                             fd_step: float | None = None) -> tuple[complex, complex, complex]:
    D1, D2 = domain.factors
    z1, z2 = complex(z1), complex(z2)
    first = cauchy.cauchy_transform(_slice_z1(f.f2, z1), D2, z2, resolution)
    second = cauchy.cauchy_transform(_slice_z2(f.f1, z2), D1, z1, resolution)
    D = script_D(f, fd_step)
    if isinstance(D, FormExpr):
        # separable: each term is a product of one-variable transforms
        third = 0j
        r1 = cauchy.singular_rule(D1, z1, *resolution)
        r2 = cauchy.singular_rule(D2, z2, *resolution)
        k1: dict[tuple[int, int], complex] = {}
        k2: dict[tuple[int, int], complex] = {}
        for t in D.terms:
            e1, e2 = t.factor("z1"), t.factor("z2")
            if e1 not in k1:
                k1[e1] = cauchy.apply_rule(cauchy.univariate(*e1)(r1.nodes), r1)
            if e2 not in k2:
                k2[e2] = cauchy.apply_rule(cauchy.univariate(*e2)(r2.nodes), r2)
            third += t.coef * k1[e1] * k2[e2]
    else:
        r1 = cauchy.singular_rule(D1, z1, *tensor_resolution)
        r2 = cauchy.singular_rule(D2, z2, *tensor_resolution)
        a1 = r1.weights / (r1.nodes - z1)
        a2 = r2.weights / (r2.nodes - z2)
        vals = as_callable(D)(r1.nodes[:, None], r2.nodes[None, :])
        third = complex(a1 @ vals @ a2) / np.pi ** 2
    return first, second, -third


def solve_T_terms(f: OneForm, domain: ProductDomain, z1: complex, z2: complex,
                  method: Method = "auto", resolution=DEFAULT_RESOLUTION,
                  **kw) -> tuple[complex, complex, complex]:
    domain.check_interior(z1, z2)
    require_closed(f)
    if method == "exact" or (method == "auto" and exact_available(f, domain)):
        return tuple(complex(e(z1, z2)) for e in solve_T_exact_terms(f, domain))
    return solve_T_quadrature_terms(f, domain, z1, z2, resolution, **kw)


def solve_T(f: OneForm, domain: ProductDomain, z: tuple[complex, complex],
            method: Method = "auto", resolution=DEFAULT_RESOLUTION, **kw) -> complex:
    """T f at the point z = (z1, z2)."""
    return sum(solve_T_terms(f, domain, z[0], z[1], method, resolution, **kw))


@dataclass
class SolutionField:
    """u = T f as a function on the product domain, memoised per point."""

    form: OneForm
    domain: ProductDomain
    method: Method = "auto"
    resolution: tuple[int, int] = DEFAULT_RESOLUTION
    tensor_resolution: tuple[int, int] = TENSOR_RESOLUTION
    expr: FormExpr | None = field(init=False, default=None)

    def __post_init__(self):
        require_closed(self.form)
        if self.method == "exact" or (self.method == "auto"
                                      and exact_available(self.form, self.domain)):
            self.expr = solve_T_exact(self.form, self.domain)
        self._cache: dict[tuple[complex, complex], complex] = {}
        self._lock = threading.Lock()

    @property
    def is_exact(self) -> bool:
        return self.expr is not None

    def at(self, z1: complex, z2: complex) -> complex:
        key = (complex(z1), complex(z2))
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        self.domain.check_interior(*key)
        if self.expr is not None:
            val = complex(self.expr(*key))
        else:
            val = sum(solve_T_quadrature_terms(self.form, self.domain, *key,
                                               self.resolution, self.tensor_resolution))
        with self._lock:
            self._cache[key] = val
        return val

    def __call__(self, z1, z2):
        """Vectorised evaluation; quadrature fields fall back to a point loop."""
        if self.expr is not None:
            return self.expr(z1, z2)
        z1, z2 = np.broadcast_arrays(np.asarray(z1, complex), np.asarray(z2, complex))
        out = np.empty(z1.shape, dtype=complex)
        for idx in np.ndindex(z1.shape):
            out[idx] = self.at(z1[idx], z2[idx])
        return out[()] if out.ndim == 0 else out


# ----------------------------------------------------------------------------
# five-term boundary expression

def _circle_nodes(domain: PlanarDomain, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and d(zeta) weights of the positively oriented boundary."""
    nodes, dz = [], []
    phi = 2 * np.pi * np.arange(n) / n
    for c, R, orient in domain.boundary_circles():
        e = np.exp(1j * phi)
        nodes.append(c + R * e)
        dz.append(orient * 1j * R * e * (2 * np.pi / n))
    return np.concatenate(nodes), np.concatenate(dz)


def _outer_disc(d: PlanarDomain) -> PlanarDomain:
    return PlanarDomain.disc(d.r_outer, d.center)


def _bm_disc_pair(F1, F2, c1, R1, c2, R2, z1, z2, n_theta, n_psi, n_rad) -> complex:
    """int over disc x disc of (F1 (zb1 - wb1) + F2 (zb2 - wb2)) / |zeta - z|^4 dV.

    Hopf-polar coordinates about z: zeta_1 = z1 + r cos(psi) e^{i t1},
    zeta_2 = z2 + r sin(psi) e^{i t2}; the Jacobian r^3 cos sin cancels the
    kernel.  The psi range splits where the ray leaves the first factor.
    """
    t = 2 * np.pi * np.arange(n_theta) / n_theta
    rho1 = _exit_radius(z1 - c1, R1, t)
    rho2 = _exit_radius(z2 - c2, R2, t)
    T1, T2 = np.meshgrid(t, t, indexing="ij")
    P1, P2 = np.meshgrid(rho1, rho2, indexing="ij")
    psi_star = np.arctan2(P2, P1)
    xg, wg = np.polynomial.legendre.leggauss(n_psi)
    xr, wr = np.polynomial.legendre.leggauss(n_rad)
    xr, wr = (xr + 1) / 2, wr / 2
    total = 0j
    for lo, hi, first in ((np.zeros_like(psi_star), psi_star, True),
                          (psi_star, np.full_like(psi_star, np.pi / 2), False)):
        half = (hi - lo) / 2
        psi = lo[..., None] + half[..., None] * (xg + 1)
        wpsi = half[..., None] * wg
        c, s = np.cos(psi), np.sin(psi)
        rmax = (P1[..., None] / c) if first else (P2[..., None] / s)
        r = rmax[..., None] * xr
        wrad = rmax[..., None] * wr
        e1 = np.exp(1j * T1)[..., None, None]
        e2 = np.exp(1j * T2)[..., None, None]
        c4, s4 = c[..., None], s[..., None]
        zeta1 = z1 + r * c4 * e1
        zeta2 = z2 + r * s4 * e2
        integrand = (F1(zeta1, zeta2) * c4 ** 2 * s4 * np.conj(e1)
                     + F2(zeta1, zeta2) * c4 * s4 ** 2 * np.conj(e2))
        total += np.sum(integrand * wrad * wpsi[..., None])
    return complex(total * (2 * np.pi / n_theta) ** 2)


def _bm_regular(F1, F2, nodes1, w1, nodes2, w2, z1, z2) -> complex:
    Z1, Z2 = nodes1[:, None], nodes2[None, :]
    d1, d2 = np.conj(Z1 - z1), np.conj(Z2 - z2)
    dist4 = (np.abs(Z1 - z1) ** 2 + np.abs(Z2 - z2) ** 2) ** 2
    vals = (F1(Z1, Z2) * d1 + F2(Z1, Z2) * d2) / dist4
    return complex(w1 @ vals @ w2)


def _bm_volume(F1, F2, D1: PlanarDomain, D2: PlanarDomain, z1, z2,
               n_theta: int, n_psi: int, n_rad: int, hole_res: tuple[int, int]) -> complex:
    total = _bm_disc_pair(F1, F2, D1.center, D1.r_outer, D2.center, D2.r_outer,
                          z1, z2, n_theta, n_psi, n_rad)
    # annuli: inclusion-exclusion with the holes, where the kernel is regular
    holes1 = [_gauss_disc_rule(D1.center, D1.r_inner, *hole_res)] if D1.kind == "annulus" else []
    holes2 = [_gauss_disc_rule(D2.center, D2.r_inner, *hole_res)] if D2.kind == "annulus" else []
    full1 = _gauss_disc_rule(D1.center, D1.r_outer, *hole_res)
    full2 = _gauss_disc_rule(D2.center, D2.r_outer, *hole_res)
    for h1 in holes1:
        total -= _bm_regular(F1, F2, *h1, *full2, z1, z2)
    for h2 in holes2:
        total -= _bm_regular(F1, F2, *full1, *h2, z1, z2)
    for h1 in holes1:
        for h2 in holes2:
            total += _bm_regular(F1, F2, *h1, *h2, z1, z2)
    return total


def solve_T_boundary(f: OneForm, domain: ProductDomain, z: tuple[complex, complex],
                     n_bdry: int = 64, resolution: tuple[int, int] = (48, 96),
                     hopf: tuple[int, int, int] = (32, 12, 12)) -> complex:
    """T f through the five-term expression with boundary integrals.

    Two area Cauchy terms, two mixed boundary/area terms over D1 x bD2 and
    bD1 x D2, and a volume term with the kernel conj(zeta - z)/|zeta - z|^4.
    """
    z1, z2 = complex(z[0]), complex(z[1])
    domain.check_interior(z1, z2)
    require_closed(f)
    D1, D2 = domain.factors
    if f.is_symbolic:
        for var, d in (("z1", D1), ("z2", D2)):
            if d.kind == "annulus" and min(f.f1.min_power(var), f.f2.min_power(var)) < 0:
                # the volume term integrates over the holes, where f blows up
                raise DivergentIntegral(f"Laurent powers of {var} on an annulus factor")
    F1, F2 = as_callable(f.f1), as_callable(f.f2)

    first = cauchy.cauchy_transform(lambda s: F2(z1, s), D2, z2, resolution)
    third = cauchy.cauchy_transform(lambda s: F1(s, z2), D1, z1, resolution)

    r1 = cauchy.singular_rule(D1, z1, *resolution)
    b2, dz2 = _circle_nodes(D2, n_bdry)
    Z1, Z2 = r1.nodes[:, None], b2[None, :]
    dist2 = np.abs(Z1 - z1) ** 2 + np.abs(Z2 - z2) ** 2
    vals = F1(Z1, Z2) * np.conj(Z2 - z2) / ((Z1 - z1) * dist2)
    second = 1j / (2 * np.pi ** 2) * complex(r1.weights @ vals @ dz2)

    r2 = cauchy.singular_rule(D2, z2, *resolution)
    b1, dz1 = _circle_nodes(D1, n_bdry)
    Z1, Z2 = b1[:, None], r2.nodes[None, :]
    dist2 = np.abs(Z1 - z1) ** 2 + np.abs(Z2 - z2) ** 2
    vals = F2(Z1, Z2) * np.conj(Z1 - z1) / ((Z2 - z2) * dist2)
    fourth = 1j / (2 * np.pi ** 2) * complex(dz1 @ vals @ r2.weights)

    n_theta, n_psi, n_rad = hopf
    fifth = _bm_volume(F1, F2, D1, D2, z1, z2, n_theta, n_psi, n_rad,
                       hole_res=(16, 32)) / np.pi ** 2
    return first + second + third + fourth + fifth


# ----------------------------------------------------------------------------
# residual check

@dataclass(frozen=True)
class ResidualReport:
    points1: np.ndarray
    points2: np.ndarray
    h: float
    max_err: float
    l2_err: float
    max_err_z1: float
    max_err_z2: float
    pointwise: np.ndarray  # shape (n1, n2), max over the two components

    @property
    def grid_size(self) -> int:
        return self.pointwise.size


def fd_dbar(u, z1: complex, z2: complex, h: float) -> tuple[complex, complex]:
    """Central-difference (du/dzb1, du/dzb2) at one point."""
    d1 = ((u(z1 + h, z2) - u(z1 - h, z2)) + 1j * (u(z1 + 1j * h, z2) - u(z1 - 1j * h, z2))) / (4 * h)
    d2 = ((u(z1, z2 + h) - u(z1, z2 - h)) + 1j * (u(z1, z2 + 1j * h) - u(z1, z2 - 1j * h))) / (4 * h)
    return d1, d2


def default_grid(domain: ProductDomain, n: int, margin: float = 0.1):
    return tuple(interior_sample(d, n, margin, avoid_center=margin) for d in domain.factors)


def dbar_residual(f: OneForm, domain: ProductDomain, n: int = 8, h: float | None = None,
                  grid: tuple[np.ndarray, np.ndarray] | None = None,
                  method: Method = "auto", resolution=DEFAULT_RESOLUTION) -> ResidualReport:
    """Compare finite-difference dbar(T f) with f on an n x n tensor grid."""
    if h is None:
        h = 1e-3 * min(d.r_outer for d in domain.factors)
    if h <= 0:
        raise ValueError("h must be positive")
    pts1, pts2 = grid if grid is not None else default_grid(domain, n)
    pts1, pts2 = np.asarray(pts1, complex), np.asarray(pts2, complex)
    for pts, d in ((pts1, domain.factor1), (pts2, domain.factor2)):
        for p in pts:
            if not d.contains(p) or d.boundary_distance(p) < 5 * h or (
                    d.kind == "punctured_disc" and abs(p - d.center) < 5 * h):
                raise GridTooCloseToBoundary(f"{p} is within 5h of the boundary of {d}")
    field_ = SolutionField(f, domain, method, resolution)
    F1, F2 = as_callable(f.f1), as_callable(f.f2)
    e1 = np.zeros((len(pts1), len(pts2)))
    e2 = np.zeros_like(e1)
    for i, a in enumerate(pts1):
        for j, b in enumerate(pts2):
            d1, d2 = fd_dbar(field_.at, a, b, h)
            e1[i, j] = abs(d1 - complex(F1(a, b)))
            e2[i, j] = abs(d2 - complex(F2(a, b)))
    pointwise = np.maximum(e1, e2)
    return ResidualReport(pts1, pts2, h, float(pointwise.max()),
                          float(np.sqrt(np.sum(pointwise ** 2))),
                          float(e1.max()), float(e2.max()), pointwise)
