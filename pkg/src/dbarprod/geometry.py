"""Planar domains, product domains, the Hartogs triangle and quadrature rules.

Two families of area rules live here.  ``build_singular_rule`` is centred at
an evaluation point ``z`` and integrates ``g(zeta)/(zeta - z)`` with the polar
Jacobian absorbing the kernel; ``area_rule`` is a regular polar rule about the
domain centre used for norms and inner products.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import OutOfDomain, PointAtPuncture, PointOnOrOutsideBoundary

Kind = Literal["disc", "annulus", "punctured_disc"]

MIN_INTERIOR_DISTANCE = 1e-6


@dataclass(frozen=True)
class PlanarDomain:
    kind: Kind
    center: complex = 0j
    r_outer: float = 1.0
    r_inner: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "center", complex(self.center))
        if self.kind not in ("disc", "annulus", "punctured_disc"):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if not self.r_outer > 0:
            raise ValueError("r_outer must be positive")
        if self.kind == "annulus":
            if not 0 < self.r_inner < self.r_outer:
                raise ValueError("annulus needs 0 < r_inner < r_outer")
        elif self.r_inner != 0:
            raise ValueError(f"{self.kind} must have r_inner = 0")

    @classmethod
    def disc(cls, r: float = 1.0, center: complex = 0j) -> "PlanarDomain":
        return cls("disc", center, r, 0.0)

    @classmethod
    def punctured_disc(cls, r: float = 1.0, center: complex = 0j) -> "PlanarDomain":
        return cls("punctured_disc", center, r, 0.0)

    @classmethod
    def annulus(cls, r_inner: float, r_outer: float = 1.0,
                center: complex = 0j) -> "PlanarDomain":
        return cls("annulus", center, r_outer, r_inner)

    @classmethod
    def from_json(cls, d: dict) -> "PlanarDomain":
        c = d.get("center", [0.0, 0.0])
        return cls(d["kind"], complex(c[0], c[1]), float(d.get("r_outer", 1.0)),
                   float(d.get("r_inner", 0.0)))

    def to_json(self) -> dict:
        return {"kind": self.kind, "center": [self.center.real, self.center.imag],
                "r_outer": self.r_outer, "r_inner": self.r_inner}

    @property
    def excludes_center(self) -> bool:
        return self.kind != "disc"

    @property
    def is_centered(self) -> bool:
        return self.center == 0

    def area(self) -> float:
        return math.pi * (self.r_outer ** 2 - self.r_inner ** 2)

    def contains(self, z):
        r = np.abs(np.asarray(z) - self.center)
        inside = r < self.r_outer
        if self.kind == "annulus":
            inside &= r > self.r_inner
        elif self.kind == "punctured_disc":
            inside &= r > 0
        return inside

    def boundary_distance(self, z) -> float:
        """Distance from ``z`` to the boundary circles (the puncture excluded)."""
        r = abs(complex(z) - self.center)
        d = self.r_outer - r
        if self.kind == "annulus":
            d = min(d, r - self.r_inner)
        return d

    def check_interior(self, z: complex) -> None:
        z = complex(z)
        if self.kind == "punctured_disc" and z == self.center:
            raise PointAtPuncture(f"{z} is the puncture of {self}")
        if not (self.contains(z)
                and self.boundary_distance(z) >= MIN_INTERIOR_DISTANCE * self.r_outer):
            raise PointOnOrOutsideBoundary(f"{z} is not interior to {self}")

    def boundary_circles(self) -> list[tuple[complex, float, int]]:
        """(centre, radius, orientation) of each boundary circle, +1 = ccw."""
        circles = [(self.center, self.r_outer, 1)]
        if self.kind == "annulus":
            circles.append((self.center, self.r_inner, -1))
        return circles


@dataclass(frozen=True)
class ProductDomain:
    factor1: PlanarDomain
    factor2: PlanarDomain

    @classmethod
    def bidisc(cls) -> "ProductDomain":
        return cls(PlanarDomain.disc(), PlanarDomain.disc())

    @classmethod
    def disc_times_punctured(cls) -> "ProductDomain":
        return cls(PlanarDomain.disc(), PlanarDomain.punctured_disc())

    @classmethod
    def from_json(cls, d) -> "ProductDomain":
        if isinstance(d, list):
            return cls(PlanarDomain.from_json(d[0]), PlanarDomain.from_json(d[1]))
        if "factor1" in d:
            return cls(PlanarDomain.from_json(d["factor1"]),
                       PlanarDomain.from_json(d["factor2"]))
        # a single planar domain means its square
        dom = PlanarDomain.from_json(d)
        return cls(dom, dom)

    def to_json(self) -> dict:
        return {"factor1": self.factor1.to_json(), "factor2": self.factor2.to_json()}

    @property
    def factors(self) -> tuple[PlanarDomain, PlanarDomain]:
        return self.factor1, self.factor2

    def volume(self) -> float:
        return self.factor1.area() * self.factor2.area()

    def contains(self, z1, z2):
        return self.factor1.contains(z1) & self.factor2.contains(z2)

    def check_interior(self, z1: complex, z2: complex) -> None:
        self.factor1.check_interior(z1)
        self.factor2.check_interior(z2)

    def swapped(self) -> "ProductDomain":
        return ProductDomain(self.factor2, self.factor1)


@dataclass(frozen=True)
class HartogsDomain:
    """The Hartogs triangle {|z1| < |z2| < 1}, optionally cut at |z2| > epsilon."""

    epsilon: float = 0.0

    def contains(self, z1, z2):
        a1, a2 = np.abs(z1), np.abs(z2)
        return (a1 < a2) & (a2 < 1) & (a2 > self.epsilon)

    def check_interior(self, z1: complex, z2: complex) -> None:
        if not self.contains(z1, z2):
            raise OutOfDomain(f"({z1}, {z2}) is not in the Hartogs triangle")

    def volume(self) -> float:
        return math.pi ** 2 / 2 * (1 - self.epsilon ** 4)


def phi(z1, z2):
    """Biholomorphism from the Hartogs triangle onto disc x punctured disc."""
    return np.asarray(z1) / np.asarray(z2), z2


def phi_inv(w1, w2):
    return np.asarray(w1) * np.asarray(w2), w2


@dataclass(frozen=True)
class SingularQuadRule:
    nodes: np.ndarray
    weights: np.ndarray
    center: complex | None
    resolution: tuple[int, int]

    def integrate(self, values) -> complex:
        return complex(np.dot(self.weights, values))

    @property
    def size(self) -> int:
        return len(self.nodes)


def _exit_radius(d: complex, radius: float, theta: np.ndarray) -> np.ndarray:
    """Distance along e^{i theta} from offset ``d`` to the circle |w| = radius."""
    b = (d * np.exp(-1j * theta)).real
    return -b + np.sqrt(b * b + radius ** 2 - abs(d) ** 2)


# per-panel radial nodes/weights on [0, 1]: midpoint, or two-point Gauss
_PANEL = {
    1: (np.array([0.5]), np.array([1.0])),
    2: (np.array([0.5 - 0.5 / np.sqrt(3), 0.5 + 0.5 / np.sqrt(3)]), np.array([0.5, 0.5])),
}


def _disc_rule_about(z: complex, center: complex, radius: float, n_r: int,
                     n_theta: int, order: int = 2) -> tuple[np.ndarray, np.ndarray]:
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    rmax = _exit_radius(z - center, radius, theta)
    x, w = _PANEL[order]
    s = ((np.arange(n_r)[:, None] + x[None, :]) / n_r).ravel()
    ws = np.tile(w, n_r) / n_r
    r = rmax[:, None] * s[None, :]
    nodes = z + r * np.exp(1j * theta)[:, None]
    weights = r * (rmax[:, None] * ws[None, :]) * (2 * np.pi / n_theta)
    return nodes.ravel(), weights.ravel()


def _gauss_disc_rule(center: complex, radius: float, n_r: int,
                     n_theta: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n_r)
    r = (x + 1) * radius / 2
    wr = w * radius / 2 * r
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    nodes = center + r[None, :] * np.exp(1j * theta)[:, None]
    weights = np.broadcast_to(wr[None, :] * (2 * np.pi / n_theta), nodes.shape)
    return nodes.ravel(), weights.ravel().copy()


def _panels(a: np.ndarray, b: np.ndarray, n: int, order: int):
    """n equal panels on each [a, b] row; returns radii and radial weights."""
    x, w = _PANEL[order]
    s = ((np.arange(n)[:, None] + x[None, :]) / n).ravel()
    ws = np.tile(w, n) / n
    L = (b - a)[:, None]
    return a[:, None] + L * s[None, :], L * ws[None, :]


def _arc_nodes(lo: float, hi: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    # Gauss in phi with theta = mid + half sin(phi): smooths sqrt endpoint behaviour
    x, w = np.polynomial.legendre.leggauss(n)
    phi_ = x * np.pi / 2
    mid, half = (hi + lo) / 2, (hi - lo) / 2
    return mid + half * np.sin(phi_), w * np.pi / 2 * half * np.cos(phi_)


def _annulus_rule_about(z: complex, center: complex, r_in: float, r_out: float,
                        n_r: int, n_theta: int, order: int = 2):
    d = z - center
    beta = np.arcsin(r_in / abs(d))
    theta0 = np.angle(-d)
    n_sh = max(4, int(round(n_theta * beta / np.pi)))
    n_lit = max(4, n_theta - n_sh)
    nodes, weights = [], []
    # rays missing the hole
    th, wt = _arc_nodes(theta0 + beta, theta0 + 2 * np.pi - beta, n_lit)
    rmax = _exit_radius(d, r_out, th)
    r, wr = _panels(np.zeros_like(rmax), rmax, n_r, order)
    nodes.append(z + r * np.exp(1j * th)[:, None])
    weights.append(r * wr * wt[:, None])
    # rays crossing it: [0, r_a] and [r_b, r_exit]
    th, wt = _arc_nodes(theta0 - beta, theta0 + beta, n_sh)
    b = (d * np.exp(-1j * th)).real
    disc = np.sqrt(np.maximum(b * b - abs(d) ** 2 + r_in ** 2, 0.0))
    rmax = _exit_radius(d, r_out, th)
    for a_, b_ in ((np.zeros_like(th), -b - disc), (-b + disc, rmax)):
        r, wr = _panels(a_, b_, n_r, order)
        nodes.append(z + r * np.exp(1j * th)[:, None])
        weights.append(r * wr * wt[:, None])
    return (np.concatenate([v.ravel() for v in nodes]),
            np.concatenate([v.ravel() for v in weights]))


def build_singular_rule(domain: PlanarDomain, z: complex, n_r: int = 128,
                        n_theta: int = 256, order: int = 2) -> SingularQuadRule:
    """Polar rule centred at ``z`` for integrands with a 1/(zeta - z) kernel.

    ``n_r`` radial panels per ray, each with one (midpoint, ``order=1``) or two
    (Gauss, ``order=2``) nodes; trapezoid in angle.  On an annulus the rays
    skip the hole: the angle range splits at the two tangent directions and
    each arc gets Gauss nodes, so no node ever lands inside the hole.
    """
    z = complex(z)
    domain.check_interior(z)
    if domain.kind == "annulus":
        nodes, weights = _annulus_rule_about(z, domain.center, domain.r_inner,
                                             domain.r_outer, n_r, n_theta, order)
    else:
        nodes, weights = _disc_rule_about(z, domain.center, domain.r_outer, n_r,
                                          n_theta, order)
    return SingularQuadRule(nodes, weights, z, (n_r, n_theta))


def radial_rule(a: float, b: float, n: int, graded: bool = False,
                decades: int = 12) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights for integrals over r in [a, b].

    With ``graded`` the interval is split into geometric panels clustering
    toward ``a`` (toward 0 when a == 0, stopping ``decades`` decades below b).
    """
    x, w = np.polynomial.legendre.leggauss(n)
    if not graded:
        return (x + 1) * (b - a) / 2 + a, w * (b - a) / 2
    lo = a if a > 0 else b * 10.0 ** (-decades)
    edges = np.geomspace(lo, b, max(2, int(np.ceil(np.log10(b / lo))) + 1))
    if a == 0:
        edges = np.concatenate([[0.0], edges])
    left, right = edges[:-1], edges[1:]
    half = (right - left)[:, None] / 2
    nodes = (left[:, None] + half * (x + 1)[None, :]).ravel()
    weights = (half * w[None, :]).ravel()
    return nodes, weights


def area_rule(domain: PlanarDomain, n_r: int = 32, n_theta: int = 64,
              graded: bool = False, epsilon: float = 0.0,
              decades: int = 12) -> tuple[np.ndarray, np.ndarray]:
    """Regular polar area rule about the domain centre.

    ``epsilon`` removes the disc |zeta - center| <= epsilon (truncation of a
    punctured disc); ``graded`` clusters radial nodes toward the centre.
    """
    a = domain.r_inner if domain.kind == "annulus" else epsilon
    r, wr = radial_rule(a, domain.r_outer, n_r, graded=graded, decades=decades)
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    nodes = domain.center + r[None, :] * np.exp(1j * theta)[:, None]
    weights = np.broadcast_to((wr * r)[None, :] * (2 * np.pi / n_theta), nodes.shape)
    return nodes.ravel(), weights.ravel().copy()


def interior_sample(domain: PlanarDomain, n: int, margin: float = 0.1,
                    avoid_center: float = 0.0) -> np.ndarray:
    """``n`` deterministic interior points spread over radii and angles."""
    lo = domain.r_inner + margin if domain.kind == "annulus" else max(avoid_center, 0.0)
    if domain.kind != "disc":
        lo = max(lo, margin)
    hi = domain.r_outer - margin
    if hi <= lo:
        raise OutOfDomain("margin leaves no interior points")
    k = np.arange(n)
    r = lo + (hi - lo) * (k + 0.5) / n
    theta = k * np.pi * (3 - np.sqrt(5)) + 0.3
    return domain.center + r * np.exp(1j * theta)
