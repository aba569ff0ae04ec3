import numpy as np
import pytest
import sympy as sp

from hypervekua.catalog import EXAMPLES, T, X, sym_field, sym_potential
from hypervekua.duplex import Hyperbolic
from hypervekua.errors import CompatibilityViolated, NonPositiveSolution
from hypervekua.kleingordon import (
    KGProblem,
    Potential,
    apply_P,
    apply_S,
    coefficient_identities,
    eta_potential,
    factorization_defect,
    kg_residual,
    u_from_v,
    v_from_u,
)


@pytest.fixture(scope="module")
def wave():
    return EXAMPLES["wave"].problem()


def test_kg_residual_of_catalog_solutions(saddle, rational, xt_eta):
    for _, prob, _ in (saddle, rational, xt_eta):
        p = prob.probes()
        scale = np.max(np.abs(prob.f.at(p.re, p.im).re))
        assert np.max(np.abs(kg_residual(prob.f, prob.potential, p))) <= 1e-12 * scale


def test_kg_residual_of_non_solution(wave):
    p = wave.probes()
    r = kg_residual(sym_field(X ** 2 - 3 * T ** 2, 0, wave.domain), Potential.zero(), p)
    assert np.allclose(r, 8.0, rtol=0, atol=1e-13)
    r = kg_residual(sym_field(X * T, 0, wave.domain), sym_potential(sp.Integer(2)), p)
    assert np.allclose(r, -2.0 * p.re * p.im, rtol=0, atol=1e-13)


def test_apply_P_of_one(xt_eta):
    _, prob, _ = xt_eta
    p = prob.probes()
    got = apply_P(sym_field(sp.Integer(1), 0, prob.domain), prob)(p)
    x, t = p.re, p.im
    ref = Hyperbolic(-t / (2 * x * t), -x / (2 * x * t))
    assert got.isclose(ref, rtol=1e-14, atol=1e-15)


def test_P_annihilates_f(saddle):
    _, prob, _ = saddle
    p = prob.probes()
    assert np.max(apply_P(prob.f, prob)(p).maxabs()) <= 1e-13


PROBE_EXPRS = [X ** 3 * T, sp.sin(X) * sp.exp(T / 2), sp.log(1 + X * T), 1 / (1 + X + T ** 2)]


@pytest.mark.parametrize("k", range(len(PROBE_EXPRS)))
@pytest.mark.parametrize("name", ["saddle", "rational", "xt-eta"])
def test_factorization(name, k):
    prob = EXAMPLES[name].problem()
    p = prob.probes()
    phi = sym_field(PROBE_EXPRS[k], 0, prob.domain)
    scale = np.maximum(1.0, np.abs(kg_residual(phi, Potential.zero(), p)))
    for swapped in (False, True):
        d = factorization_defect(phi, prob, p, swapped=swapped)
        assert np.max(d / scale) <= 1e-12


def test_apply_S_wave(wave):
    # f = 1: S[z] = x^2 + t^2 minus its value at the base point (0.5, 1.5)
    p = wave.probes()
    g = apply_S(sym_field(X, T, wave.domain), wave)(p)
    assert np.allclose(g.re, p.re ** 2 + p.im ** 2 - 2.5, rtol=0, atol=1e-13)
    assert np.all(g.im == 0.0)


def test_apply_S_inverts_P(saddle):
    ex, prob, _ = saddle
    phi = ex.oracle(1, "1", ex.center, ex.base).re_part()
    p = prob.probes()
    bx, bt = prob.domain.base_point
    c = phi.at(bx, bt).re / prob.f.at(bx, bt).re
    g = apply_S(apply_P(phi, prob), prob)(p)
    ref = phi(p).re - c * prob.f(p).re
    assert np.max(np.abs(g.re - ref)) <= 1e-10 * np.max(np.abs(ref))
    assert np.max(np.abs(kg_residual(apply_S(apply_P(phi, prob), prob), prob.potential, p))) <= 1e-4


def test_non_positive_solution(wave):
    with pytest.raises(NonPositiveSolution):
        KGProblem.build(sym_potential(T ** 2 - X ** 2), sym_field(-sp.exp(X * T), 0, wave.domain),
                        wave.domain)


def test_not_a_solution(wave):
    with pytest.raises(ValueError):
        KGProblem.build(Potential.zero(), sym_field(sp.exp(X * T), 0, wave.domain), wave.domain)


def test_eta_xt(xt_eta):
    _, prob, _ = xt_eta
    p = prob.probes()
    x, t = p.re, p.im
    ref = 2 * (t ** 2 - x ** 2) / (x ** 2 * t ** 2)
    assert np.allclose(eta_potential(prob, p), ref, rtol=1e-13, atol=0)


def test_eta_of_constant_f(wave):
    p = wave.probes()
    assert np.all(eta_potential(wave, p) == 0.0)


def test_eta_matches_symbolic(saddle, rational):
    for ex, prob, _ in (saddle, rational):
        p = prob.probes()
        ref = ex.eta_oracle()(p).re
        assert np.allclose(eta_potential(prob, p), ref, rtol=1e-12, atol=1e-12)


def test_coefficient_identities(saddle, rational, xt_eta):
    for _, prob, _ in (saddle, rational, xt_eta):
        p = prob.probes()
        res = coefficient_identities(prob, p)
        scale = np.maximum(1.0, np.abs(prob.potential(p.re, p.im)) + np.abs(eta_potential(prob, p)))
        assert np.max(res["nu"] / scale) <= 1e-12
        assert np.max(res["eta"] / scale) <= 1e-12
        assert np.max(res["bz_imag"]) <= 1e-12


def test_trivial_transfers(saddle):
    _, prob, _ = saddle
    p = prob.probes()
    assert np.max(np.abs(v_from_u(prob.f, prob)(p).re)) <= 1e-15
    inv = sym_field(sp.exp(-X * T), 0, prob.domain)
    assert np.max(np.abs(u_from_v(inv, prob)(p).re)) <= 1e-15


def test_transfer_recovers_conjugate(saddle):
    # v_from_u(Re W) = Im W up to a multiple of 1/f fixed at the base point
    ex, prob, _ = saddle
    w = ex.oracle(1, "1", ex.center, ex.base)
    p = prob.probes()
    bx, bt = prob.domain.base_point
    c = w.at(bx, bt).im * prob.f.at(bx, bt).re
    v = v_from_u(w.re_part(), prob)(p).re
    ref = w(p).im - c / prob.f(p).re
    assert np.max(np.abs(v - ref)) <= 1e-10 * np.max(np.abs(ref))
    c2 = w.at(bx, bt).re / prob.f.at(bx, bt).re
    u = u_from_v(w.im_part(), prob)(p).re
    assert np.max(np.abs(u - (w(p).re - c2 * prob.f(p).re))) <= 1e-10 * np.max(np.abs(w(p).re))


def test_compatibility_violated(saddle):
    _, prob, _ = saddle
    p = prob.probes()
    with pytest.raises(CompatibilityViolated):
        v_from_u(sym_field(X ** 2, 0, prob.domain), prob)(p)
    with pytest.raises(CompatibilityViolated):
        u_from_v(sym_field(X ** 2, 0, prob.domain), prob)(p)
