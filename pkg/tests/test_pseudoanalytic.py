import math

import numpy as np
import pytest
import sympy as sp

from hypervekua.catalog import T, X, sym_field
from hypervekua.duplex import ONE, J, Hyperbolic
from hypervekua.errors import DegeneratePair
from hypervekua.hfield import Domain, HField, Path
from hypervekua.kleingordon import main_pair
from hypervekua.pseudoanalytic import (
    adjoint_pair,
    char_coeffs,
    classical_pair,
    decompose,
    fg_derivative,
    fg_integral,
    fg_integral_from,
    is_successor,
    validate_pair,
    vekua_residual,
)

RECT = Domain.rectangle(-2.0, 2.0, -2.0, 2.0, base_point=(0.0, 0.0))
PROBES = RECT.lattice(5, 5)


def test_classical_pair():
    pair = validate_pair(HField.constant(1.0, RECT), HField.constant(J, RECT), PROBES)
    assert pair.margin == 1.0
    c = char_coeffs(pair, PROBES)
    for v in c:
        assert np.max(v.maxabs()) == 0.0


def test_degenerate_pair():
    with pytest.raises(DegeneratePair):
        validate_pair(HField.constant(1.0, RECT), HField.constant(1.0, RECT), PROBES)


def test_main_pair_margin(saddle):
    _, prob, _ = saddle
    pair = main_pair(prob)
    p = prob.probes()
    assert np.allclose(pair.im_fbar_g(p), 1.0, rtol=1e-14)


def test_decompose_classical():
    pair = classical_pair(RECT)
    d = decompose(Hyperbolic(0.3, -1.7), pair, (0.1, 0.2))
    assert (float(d.phi), float(d.psi)) == (0.3, -1.7)
    assert d.omega == Hyperbolic(0.3, -1.7)


def test_decompose_basis_vector(saddle):
    _, prob, seq = saddle
    pair = seq.pair(1)
    p = (0.6, 1.3)
    d = decompose(pair.F.at(*p), pair, p)
    assert float(d.phi) == pytest.approx(1.0, abs=1e-14)
    assert float(d.psi) == pytest.approx(0.0, abs=1e-14)


def test_decompose_formal_power_at_1_2(saddle):
    # Z^(1)(1, 4j) = (sinh(xt) + j (x^2 + t^2)/2 e^{-xt}) / 4 against (e^{xt}, j e^{-xt})
    ex, prob, seq = saddle
    z = ex.oracle(1, "1", (0, 4), (0, 0))
    d = decompose(z.at(1.0, 2.0), main_pair(prob), (1.0, 2.0))
    assert float(d.phi) == pytest.approx(0.25 * math.sinh(2) * math.exp(-2), rel=1e-14)
    assert float(d.psi) == pytest.approx(5 / 8, rel=1e-14)


def test_reconstruction_random(saddle):
    _, prob, seq = saddle
    rng = np.random.default_rng(7)
    p = prob.probes()
    for m in (-1, 0, 2):
        pair = seq.pair(m)
        w = Hyperbolic(rng.normal(size=p.re.shape), rng.normal(size=p.re.shape))
        d = decompose(w, pair, p)
        rec = d.phi * pair.F(p) + d.psi * pair.G(p)
        assert np.max((rec - w).maxabs() / w.norm()) <= 1e-12


def test_main_pair_coefficients(rational):
    _, prob, _ = rational
    p = prob.probes()
    c = char_coeffs(main_pair(prob), p)
    fj = prob.f.jet_at(p.re, p.im, 1)
    finv = fj.v.inverse()
    assert np.max(c.a.maxabs()) <= 1e-15 and np.max(c.A.maxabs()) <= 1e-15
    assert np.max((c.b - fj.dzbar().v * finv).maxabs()) <= 1e-15
    assert np.max((c.B - fj.dz().v * finv).maxabs()) <= 1e-15


def test_adjoint_of_main_pair(saddle):
    _, prob, _ = saddle
    p = prob.probes()
    adj = adjoint_pair(main_pair(prob))
    f = prob.f.at(p.re, p.im)
    assert adj.F(p).isclose(J * f, rtol=1e-14)
    assert adj.G(p).isclose(f.inverse(), rtol=1e-14)
    c, cs = char_coeffs(main_pair(prob), p), char_coeffs(adj, p)
    assert np.max((cs.a + c.a).maxabs()) <= 1e-15
    assert np.max((cs.b + c.B.conj()).maxabs()) <= 1e-14
    assert np.max((cs.B + c.b.conj()).maxabs()) <= 1e-14
    assert np.max((cs.A + c.A).maxabs()) <= 1e-14


def test_adjoint_of_classical_pair():
    adj = adjoint_pair(classical_pair(RECT))
    assert adj.F((0.3, 0.4)) == J and adj.G((0.3, 0.4)) == ONE


def test_double_adjoint_coefficients(rational):
    _, prob, _ = rational
    p = prob.probes()
    pair = main_pair(prob)
    c, cc = char_coeffs(pair, p), char_coeffs(adjoint_pair(adjoint_pair(pair)), p)
    for u, v in zip(c, cc):
        assert np.max((u - v).maxabs()) <= 1e-13


def test_generators_have_zero_derivative(saddle):
    _, prob, seq = saddle
    p = prob.probes()
    for m in (-2, 0, 1, 2):
        pair = seq.pair(m)
        for w in (pair.F, pair.G):
            scale = np.maximum(1.0, w(p).maxabs())
            assert np.max(fg_derivative(w, pair, p).maxabs() / scale) <= 1e-12
            assert np.max(vekua_residual(w, pair, p) / scale) <= 1e-12


def test_derivative_reduces_to_ordinary():
    z2 = sym_field(X ** 2 + T ** 2, 2 * X * T, RECT)
    got = fg_derivative(z2, classical_pair(RECT), PROBES)
    assert got.isclose(2.0 * PROBES, rtol=1e-15)
    assert np.allclose(vekua_residual(sym_field(X, -T, RECT), classical_pair(RECT), PROBES), 1.0)


def test_derivative_of_first_power(saddle):
    # derivative of Z^(1)(1, 4j) is Z_1^(0)(1, 4j) = (j/4) z e^{-xt}
    ex, prob, seq = saddle
    z = ex.oracle(1, "1", (0, 4), (0, 0))
    p = prob.probes()
    x, t = p.re, p.im
    ref = J * 0.25 * Hyperbolic(x, t) * np.exp(-x * t)
    assert np.max((fg_derivative(z, seq.pair(0), p) - ref).maxabs()) <= 1e-14
    zj = ex.oracle(1, "j", (0, 4), (0, 0))
    assert np.max(vekua_residual(zj, seq.pair(0), p) / zj(p).maxabs()) <= 1e-14


def test_successor(saddle):
    _, prob, seq = saddle
    p = prob.probes()
    assert is_successor(seq.pair(1), seq.pair(0), p)
    assert is_successor(classical_pair(RECT), classical_pair(RECT), PROBES)
    own = is_successor(seq.pair(0), seq.pair(0), p)
    assert not own
    # b + B = f_x / f = t for f = e^{xt}
    assert own.b_residual == pytest.approx(float(np.max(p.im)), rel=1e-12)


def test_zero_length_integral(saddle):
    _, prob, seq = saddle
    z = Hyperbolic(0.7, 1.4)
    v = fg_integral(seq.pair(1).F, seq.pair(0), Path.straight(z, z))
    assert v == Hyperbolic(0.0, 0.0)


def test_antiderivative_identity(saddle):
    ex, prob, seq = saddle
    w = ex.oracle(1, "1", (0, 4), (0, 0))
    dw = ex.oracle(0, "1", (0, 4), (0, 0), m=1)
    pair = seq.pair(0)
    z0 = (0.4, 1.2)
    p = prob.probes()
    d0 = decompose(w.at(*z0), pair, z0)
    lhs = fg_integral_from(dw, pair, Hyperbolic(*z0), p)
    rhs = w(p) - float(d0.phi) * pair.F(p) - float(d0.psi) * pair.G(p)
    assert np.max((lhs - rhs).maxabs()) <= 1e-12


def test_closed_loop_and_path_independence(rational):
    ex, prob, seq = rational
    w = seq.power(1, 0, ONE, ex.center, ex.base).field
    pair = seq.pair(0)
    loop = Path.through([(0.3, 1.0), (0.8, 1.0), (0.8, 1.6), (0.3, 1.6), (0.3, 1.0)])
    assert float(fg_integral(w, pair, loop).maxabs()) <= 1e-8
    a = fg_integral(w, pair, Path.through([(0.4, 1.2), (1.0, 1.2), (1.0, 1.8)]))
    b = fg_integral(w, pair, Path.through([(0.4, 1.2), (0.4, 1.8), (1.0, 1.8)]))
    assert float((a - b).maxabs()) <= 1e-8


def test_non_integrable_loop_is_detected(saddle):
    # conj(z) is not (F, G)-integrable for the main pair: the loop integral is O(1)
    ex, prob, seq = saddle
    w = sym_field(X, -T, prob.domain)
    loop = Path.through([(0.3, 1.0), (0.8, 1.0), (0.8, 1.6), (0.3, 1.6), (0.3, 1.0)])
    assert float(fg_integral(w, seq.pair(0), loop).maxabs()) > 1e-3
