import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dbarprod import cauchy
from dbarprod.errors import DivergentIntegral, OutOfDomain
from dbarprod.experiments import fit_order
from dbarprod.forms import FormExpr
from dbarprod.geometry import PlanarDomain

D = PlanarDomain.disc()
inner = st.tuples(st.floats(0, 0.85), st.floats(0, 2 * math.pi)).map(
    lambda t: t[0] * complex(math.cos(t[1]), math.sin(t[1])))


@pytest.mark.parametrize("k", [1, 2, 5])
@pytest.mark.parametrize("z", [0.3, 0.6 + 0.2j, -0.4 + 0.5j])
def test_against_closed_forms(k, z):
    got = cauchy.cauchy_transform(cauchy.univariate(k, k - 1), D, z)
    assert got == pytest.approx(cauchy.exact_antiholo(k, z), rel=1e-8)
    got = cauchy.cauchy_transform(cauchy.univariate(k, 0), D, z)
    assert got == pytest.approx(cauchy.exact_holo(k, z), rel=1e-8)


def test_k1_identity():
    for z in (0.1, 0.5j, -0.3 + 0.3j):
        assert abs(cauchy.exact_antiholo(1, z) - cauchy.exact_holo(1, z)) < 1e-15


def test_closed_form_domain_errors():
    with pytest.raises(OutOfDomain):
        cauchy.exact_holo(2, 1.0)
    with pytest.raises(ValueError):
        cauchy.exact_antiholo(0, 0.1)


def test_midpoint_rule_is_second_order():
    ns = (32, 64, 128)
    errs = []
    for n in ns:
        v = cauchy.cauchy_transform(cauchy.univariate(3, 0), D, 0.3, (n, 2 * n), order=1)
        errs.append(abs(v - cauchy.exact_holo(3, 0.3)))
    assert 1.8 < fit_order(ns, errs) < 2.3


def test_gauss_rule_converges_fast():
    ns = (32, 64, 128)
    errs = [abs(cauchy.cauchy_transform(cauchy.univariate(5, 0), D, 0.6 + 0.2j, (n, 2 * n))
                - cauchy.exact_holo(5, 0.6 + 0.2j)) for n in ns]
    assert fit_order(ns, errs) >= 3.5


def test_fit_order_noise_floor():
    assert fit_order((32, 64), (1e-16, 2e-16)) == math.inf
    assert fit_order((32, 64, 128), (1e-2, 2.5e-3, 6.25e-4)) == pytest.approx(2.0)


@given(inner)
def test_transform_of_one_is_zbar(z):
    # K[1] = zbar - conj(center) on any disc
    assert cauchy.cauchy_transform(lambda t: np.ones_like(t), D, z, (32, 64)) == pytest.approx(
        np.conj(z), abs=1e-12)


def test_off_center_disc():
    c = 0.5 - 0.25j
    Dc = PlanarDomain.disc(2.0, center=c)
    z = 1.1 + 0.4j
    got = cauchy.cauchy_transform(lambda t: np.ones_like(t), Dc, z, (32, 64))
    assert got == pytest.approx(np.conj(z - c), abs=1e-12)


@pytest.mark.parametrize("dom", [PlanarDomain.disc(), PlanarDomain.punctured_disc(),
                                 PlanarDomain.annulus(0.35)], ids=lambda d: d.kind)
@pytest.mark.parametrize("ab", [(0, 0), (2, 1), (1, 3), (3, 0), (-1, 0), (0, -2)])
def test_monomial_transform_matches_quadrature(dom, ab):
    a, b = ab
    if dom.kind != "annulus" and a + b < 0:
        pytest.skip("Laurent powers only on the annulus")
    z = 0.55 + 0.2j
    exact = sum(c * z ** m * np.conj(z) ** n if m >= 0 else c * z ** m * np.conj(z) ** n
                for c, m, n in cauchy.monomial_transform(a, b, dom))
    num = cauchy.cauchy_transform(cauchy.univariate(a, b), dom, z, (96, 192))
    assert num == pytest.approx(exact, rel=1e-7, abs=1e-10)


def test_monomial_transform_errors():
    with pytest.raises(ValueError):
        cauchy.monomial_transform(0, -1, PlanarDomain.annulus(0.5))
    with pytest.raises(DivergentIntegral):
        cauchy.monomial_transform(-2, 0, PlanarDomain.punctured_disc())
    with pytest.raises(ValueError):
        cauchy.monomial_transform(0, 0, PlanarDomain.disc(center=0.1))


@given(st.integers(0, 4), st.integers(0, 4))
def test_transform_inverts_dbar(a, b):
    # d/dzbar K[g] = g
    g = FormExpr.monomial(1, a, b)
    Kg = cauchy.transform_expr(g, "z1", D)
    assert Kg.dbar("z1") == g
