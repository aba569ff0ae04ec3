import math

import numpy as np
import pytest
import sympy as sp

from hypervekua.catalog import T, X, sym_field
from hypervekua.duplex import E1, E2, J, Hyperbolic
from hypervekua.errors import BoundaryProximity, CompatibilityViolated, QuadratureNonConvergence
from hypervekua.hfield import (
    Domain,
    HField,
    Path,
    QuadratureSettings,
    antiderivative,
    antiderivative_A,
    antiderivative_Abar,
    compatibility_residual,
    d_holomorphy_residual,
    dz,
    dzbar,
    holomorphic_from_components,
    path_integral,
)

RECT = Domain.rectangle(-3.0, 3.0, -3.0, 3.0, base_point=(0.0, 0.0))
Z = (X, T)


def zpow(n):
    re, im = sp.Integer(1), sp.Integer(0)
    for _ in range(n):
        re, im = sp.expand(re * X + im * T), sp.expand(re * T + im * X)
    return sym_field(re, im, RECT)


def fn_field(func, domain=RECT, fd_step=1e-4):
    return HField(func, domain=domain, fd_step=fd_step)


PROBES = RECT.lattice(6, 6)


def test_dzbar_of_z_squared_vanishes():
    assert np.max(dzbar(zpow(2), PROBES).maxabs()) == 0.0
    assert np.max(dzbar(zpow(2).numeric(), PROBES).maxabs()) < 1e-9


def test_dz_of_exp_xt():
    f = sym_field(sp.exp(X * T), 0, RECT)
    v = dz(f, (1.0, 2.0))
    # (f_x + j f_t)/2 = e^2 (t + j x)/2 at (1, 2)
    assert v.isclose(Hyperbolic(math.e ** 2, 0.5 * math.e ** 2), rtol=1e-14)
    vn = dz(f.numeric(), (1.0, 2.0))
    assert vn.isclose(v, rtol=1e-10)


def test_conj_z_operators():
    c = sym_field(X, -T, RECT)
    assert dz(c, (0.3, 0.2)) == Hyperbolic(0.0, 0.0)
    assert dzbar(c, (0.3, 0.2)) == Hyperbolic(1.0, 0.0)
    assert float(d_holomorphy_residual(c, (0.3, 0.2))) == pytest.approx(1.0)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_polynomials_in_z_are_holomorphic(n):
    f = zpow(n)
    assert np.max(d_holomorphy_residual(f, PROBES)) <= 1e-7
    assert np.max(d_holomorphy_residual(f.numeric(), PROBES)) <= 1e-7


def test_components_identity_and_square():
    ident = holomorphic_from_components(lambda w: w, lambda w: w)
    sq = holomorphic_from_components(lambda w: w * w, lambda w: w * w)
    x, t = np.array([0.3, -1.2, 2.0]), np.array([0.7, 0.1, -0.4])
    assert ident.at(x, t).isclose(Hyperbolic(x, t), rtol=1e-15)
    assert sq.at(x, t).isclose(Hyperbolic(x, t) * Hyperbolic(x, t), rtol=1e-14)


def test_components_exp_is_holomorphic_by_fd_oracle():
    f = holomorphic_from_components(np.exp, lambda w: 1.0 + 0.0 * w, dfe1=np.exp,
                                    dfe2=lambda w: 0.0 * w)
    x, t = np.linspace(-1, 1, 7), np.linspace(-0.5, 0.8, 7)
    assert np.max(d_holomorphy_residual(f, (x, t))) <= 1e-10
    # difference oracle on the values alone
    g = HField(f.func, fd_step=1e-3)
    assert np.max(d_holomorphy_residual(g, (x, t))) <= 1e-10
    # analytic derivative fe1' e1 + fe2' e2
    assert dz(f, (0.2, 0.3)).isclose(math.exp(0.5) * E1, rtol=1e-14)


def test_fd_order_at_least_two():
    f = sym_field(sp.exp(X) * sp.sin(T), sp.cos(X * T), RECT)
    p = (0.4, 0.9)
    exact = dzbar(f, p)
    errs = []
    for h in (0.04, 0.02, 0.01):
        errs.append(float((dzbar(f.numeric(h), p) - exact).maxabs()))
    orders = [math.log2(a / b) for a, b in zip(errs, errs[1:])]
    assert min(orders) >= 1.9, orders


def test_operators_are_real_linear():
    f, g = zpow(3), sym_field(sp.sin(X), X * T, RECT)
    lhs = dzbar(2.5 * f + (-1.5) * g, PROBES)
    rhs = 2.5 * dzbar(f, PROBES) - 1.5 * dzbar(g, PROBES)
    assert np.max((lhs - rhs).maxabs()) < 1e-13


def test_boundary_proximity():
    dom = Domain.rectangle(0.0, 1.0, 0.0, 1.0)
    f = fn_field(lambda x, t: Hyperbolic(x * t, x), domain=dom)
    with pytest.raises(BoundaryProximity):
        dz(f, (1e-5, 0.5))
    # f_x = t + j, f_t = x, so dz f = (t + j (1 + x)) / 2
    assert dz(f, (0.5, 0.5)).isclose(Hyperbolic(0.25, 0.75), rtol=1e-9)


# -- path integrals -----------------------------------------------------------------

def identity(x, t):
    return Hyperbolic(x, t)


def test_path_integral_of_zeta():
    v = path_integral(identity, Path.straight(0.0, Hyperbolic(1.0, 2.0)))
    assert float(v.re) == pytest.approx((1 + 4) / 2, rel=1e-14)


def test_path_integral_exponential_weight():
    def w(x, t):
        return J * Hyperbolic(np.exp(2 * x * t), 0 * x) * Hyperbolic(x, t)

    v = path_integral(w, Path.straight(0.0, Hyperbolic(1.0, 2.0)))
    assert float(v.re) == pytest.approx(math.e ** 2 * math.sinh(2.0), rel=1e-12)


def test_degenerate_path_is_zero():
    p = Hyperbolic(0.4, 0.9)
    assert path_integral(identity, Path.straight(p, p)) == Hyperbolic(0.0, 0.0)


def test_additivity_and_reversal():
    def w(x, t):
        return Hyperbolic(np.cos(x) * t, np.exp(-x * t))

    a, b, c = Hyperbolic(0.1, 0.2), Hyperbolic(1.0, 0.5), Hyperbolic(0.3, 1.4)
    whole = path_integral(w, Path.straight(a, b) + Path.straight(b, c))
    parts = path_integral(w, Path.straight(a, b)) + path_integral(w, Path.straight(b, c))
    assert whole.isclose(parts, rtol=1e-14)
    back = path_integral(w, (Path.straight(a, b) + Path.straight(b, c)).reversed())
    assert back.isclose(-whole, rtol=1e-14)


def test_quadrature_non_convergence():
    def spiky(x, t):
        return Hyperbolic(np.cos(400 * x), 0 * x)

    with pytest.raises(QuadratureNonConvergence):
        path_integral(spiky, Path.straight(0.0, Hyperbolic(1.0, 0.0)))
    # without refinement nothing is checked
    path_integral(spiky, Path.straight(0.0, Hyperbolic(1.0, 0.0)),
                  QuadratureSettings(refine=False))


def test_quadrature_is_deterministic():
    def w(x, t):
        return Hyperbolic(np.sin(x + t), x * x)

    p = Path.through([(0.0, 0.0), (0.5, 0.2), (0.8, 1.1)])
    assert path_integral(w, p) == path_integral(w, p)


# -- A and Abar ---------------------------------------------------------------------

def test_A_of_constant_half():
    half = HField.constant(0.5, RECT)
    v = antiderivative_A(half, (np.array([0.7, -1.0]), np.array([0.2, 1.5])))
    assert np.allclose(v, [0.7, -1.0], atol=1e-15)


def test_Abar_recovers_xt():
    phi = sym_field(X * T, 0, RECT)
    Phi = phi.dzbar_field()
    p = RECT.lattice(5, 5)
    got = antiderivative_Abar(Phi, p)
    x, t = p.re, p.im
    assert np.max(np.abs(got - x * t)) < 1e-13  # base (0, 0): x0 t0 = 0


def test_A_inverts_dz_on_compatible_fields():
    phi = sym_field(sp.exp(X) * sp.cos(T) + X ** 2 * T, 0, RECT)
    Phi = phi.dz_field()
    p = RECT.lattice(4, 4)
    got = antiderivative_A(Phi, p)
    ref = phi.at(p.re, p.im).re - phi.at(0.0, 0.0).re
    assert np.max(np.abs(got - ref)) < 1e-12


def test_compatibility_violation():
    Phi = sym_field(X * T, 0, RECT)
    assert np.allclose(compatibility_residual(Phi, "A", PROBES), PROBES.re)
    with pytest.raises(CompatibilityViolated):
        antiderivative(Phi, "A", (0.5, 0.5))


def test_compatibility_residual_examples():
    assert np.max(np.abs(compatibility_residual(sym_field(X ** 2, 0, RECT).dz_field(), "A",
                                                PROBES))) <= 1e-9
    jconst = HField.constant(J, RECT)
    for v in ("A", "Abar"):
        assert np.max(np.abs(compatibility_residual(jconst, v, PROBES))) == 0.0


def test_L_path_falls_back_inside_wedge():
    wedge = Domain.time_like_wedge(0.0, 2.5, 0.0, 2.5, base_point=(0.2, 2.0))
    Phi = sym_field(X * T, 0, wedge).dz_field()
    # for t < x0 the corner (x0, t) lies outside the wedge
    res = antiderivative(Phi, "A", (np.array([0.1, 0.6]), np.array([0.15, 1.0])))
    assert list(res.fallback) == [True, False]
    ref = np.array([0.1 * 0.15, 0.6 * 1.0]) - 0.2 * 2.0
    assert np.allclose(res.value, ref, atol=1e-12)
