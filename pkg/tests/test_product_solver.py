import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dbarprod.errors import (DivergentIntegral, GridTooCloseToBoundary, NotClosed,
                             PointOnOrOutsideBoundary)
from dbarprod.experiments import T_f_k_closed, f_k
from dbarprod.forms import FormExpr, MonomialTerm, OneForm, SampledFunction
from dbarprod.geometry import PlanarDomain, ProductDomain
from dbarprod.product_solver import (SolutionField, dbar_residual, solve_T, solve_T_boundary,
                                     solve_T_exact, solve_T_terms)

BIDISC = ProductDomain.bidisc()
DXDP = ProductDomain.disc_times_punctured()
ANN = ProductDomain(PlanarDomain.annulus(0.4), PlanarDomain.disc())

small = st.integers(0, 3)
coef = st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False)
potentials = st.lists(st.builds(MonomialTerm, small, small, small, small, coef),
                      min_size=1, max_size=3).map(FormExpr)


def closed_from(U):
    return OneForm(U.dbar("z1"), U.dbar("z2"))


def assert_solves(u, f):
    scale = max(f.f1.max_coef(), f.f2.max_coef(), 1.0)
    assert (u.dbar("z1") - f.f1).negligible(scale)
    assert (u.dbar("z2") - f.f2).negligible(scale)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_fk_closed_form(k):
    u = solve_T_exact(f_k(k), BIDISC)
    for z1, z2 in [(0.5, 0.5), (0.2 + 0.3j, -0.6j), (-0.7, 0.1 + 0.1j)]:
        assert complex(u(z1, z2)) == pytest.approx(T_f_k_closed(k, z1, z2), abs=1e-13)


def test_holomorphic_example():
    u = solve_T_exact(OneForm(FormExpr.monomial(1, p1=2), FormExpr()), BIDISC)
    want = FormExpr.monomial(1, p1=2, q1=1) - FormExpr.monomial(1, p1=1)
    assert u == want


def test_quadrature_matches_exact():
    f = f_k(2)
    for z in [(0.5, 0.5), (0.1 - 0.4j, 0.6 + 0.1j)]:
        a = solve_T(f, BIDISC, z, method="exact")
        b = solve_T(f, BIDISC, z, method="quadrature", resolution=(64, 128))
        assert b == pytest.approx(a, abs=1e-8)


@given(potentials)
def test_dbar_of_T_is_f(U):
    f = closed_from(U)
    assert_solves(solve_T_exact(f, BIDISC), f)


@given(potentials)
def test_dbar_of_T_is_f_annulus_laurent(U):
    U = U * FormExpr.monomial(1, p1=-2)
    f = closed_from(U)
    assert_solves(solve_T_exact(f, ANN), f)


@given(potentials, potentials, coef)
def test_linear(U, V, c):
    f, g = closed_from(U), closed_from(V)
    z = (0.3 + 0.1j, -0.2 + 0.5j)
    lhs = solve_T(f + g * c, BIDISC, z)
    rhs = solve_T(f, BIDISC, z) + c * solve_T(g, BIDISC, z)
    assert lhs == pytest.approx(rhs, abs=1e-10)


@given(potentials)
def test_swap_symmetry(U):
    f = closed_from(U)
    z1, z2 = 0.3 + 0.2j, -0.5j
    assert solve_T(f.swap(), BIDISC, (z2, z1)) == pytest.approx(solve_T(f, BIDISC, (z1, z2)),
                                                               abs=1e-10)


def test_not_closed():
    with pytest.raises(NotClosed):
        solve_T(OneForm(FormExpr.monomial(1, q2=1), FormExpr()), BIDISC, (0.1, 0.1))


def test_point_checks():
    with pytest.raises(PointOnOrOutsideBoundary):
        solve_T(f_k(1), BIDISC, (1.0, 0.1))


def test_terms_sum():
    z = (0.4, 0.4j)
    assert sum(solve_T_terms(f_k(1), BIDISC, *z)) == pytest.approx(solve_T(f_k(1), BIDISC, z))


def test_sampled_form_uses_quadrature():
    sym = f_k(1)
    f = OneForm(SampledFunction(sym.f1), SampledFunction(sym.f2),
                explicit_D=SampledFunction(lambda a, b: 2 * a * b * np.conj(b) * 0 + a * b * 1.0))
    # D f^1 = z1 z2
    u = SolutionField(f, BIDISC, resolution=(48, 96), tensor_resolution=(24, 48))
    assert not u.is_exact
    assert u.at(0.5, 0.5) == pytest.approx(-0.9375, abs=1e-6)


def test_solution_field_vectorised():
    u = SolutionField(f_k(1), BIDISC)
    z1 = np.array([0.1, 0.5])
    z2 = np.array([0.2j, 0.5])
    assert np.allclose(u(z1, z2), [T_f_k_closed(1, a, b) for a, b in zip(z1, z2)])


@pytest.mark.parametrize("f,dom", [
    (f_k(1), BIDISC),
    (closed_from(FormExpr.monomial(1, 1, 1, 1, 2)), BIDISC),
    (OneForm(FormExpr(), FormExpr.const(1)), DXDP),
    (OneForm(FormExpr.monomial(1, p1=2), FormExpr()), ANN),
])
def test_boundary_expression_agrees(f, dom):
    for z in [(0.55 + 0.1j, 0.3), (-0.6j, -0.2 + 0.4j)]:
        a = solve_T(f, dom, z)
        b = solve_T_boundary(f, dom, z)
        assert b == pytest.approx(a, abs=1e-6)


def test_boundary_expression_rejects_laurent_on_annulus():
    f = OneForm(FormExpr.monomial(1, p1=-1), FormExpr())
    with pytest.raises(DivergentIntegral):
        solve_T_boundary(f, ANN, (0.6, 0.1))


def test_residual():
    rep = dbar_residual(f_k(1), BIDISC, n=3, h=1e-3)
    assert rep.max_err < 1e-5
    assert rep.pointwise.shape == (3, 3)
    assert rep.l2_err == pytest.approx(math.sqrt(np.sum(rep.pointwise ** 2)))
    with pytest.raises(GridTooCloseToBoundary):
        dbar_residual(f_k(1), BIDISC, grid=(np.array([0.999]), np.array([0.1])), h=1e-3)
