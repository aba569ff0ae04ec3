import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hypervekua.duplex import (
    E1,
    E2,
    J,
    ONE,
    Hyperbolic,
    IdempotentPair,
    from_idempotent,
    inverse,
    is_null,
    modulus_sq,
    to_idempotent,
)
from hypervekua.errors import NullConeError

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
hyp = st.builds(Hyperbolic, finite, finite)
EPS = np.finfo(float).eps


def test_product_formula():
    z, w = Hyperbolic(2.0, 3.0), Hyperbolic(-1.0, 5.0)
    assert z * w == Hyperbolic(2 * -1 + 3 * 5, 2 * 5 + 3 * -1)


def test_zero_divisors():
    assert (ONE + J) * (ONE - J) == Hyperbolic(0.0, 0.0)


def test_conj_and_modulus():
    assert Hyperbolic(3.0, 2.0).conj() == Hyperbolic(3.0, -2.0)
    assert modulus_sq(Hyperbolic(2.0, 1.0)) == 3.0
    m = Hyperbolic(2.0, 1.0) * Hyperbolic(2.0, 1.0).conj()
    assert m.im == 0.0 and m.re == 3.0


def test_inverse_examples():
    assert inverse(Hyperbolic(2.0, 1.0)).isclose(Hyperbolic(2 / 3, -1 / 3), rtol=1e-15)
    assert inverse(J) == J
    with pytest.raises(NullConeError):
        inverse(ONE + J)
    with pytest.raises(ZeroDivisionError):
        Hyperbolic(0.0, 0.0).inverse()


def test_no_division_operator():
    with pytest.raises(TypeError):
        Hyperbolic(1.0, 0.0) / Hyperbolic(2.0, 0.0)


def test_is_null_examples():
    assert is_null(ONE + J)
    assert is_null(Hyperbolic(0.0, 0.0))
    assert not is_null(Hyperbolic(2.0, 1.0))
    # band is relative to max(1, |re|, |im|)
    assert is_null(Hyperbolic(1e6, 1e6 + 1e-7))
    assert not is_null(Hyperbolic(1e6, 1e6 + 1e-3))


def test_idempotent_examples():
    assert to_idempotent(Hyperbolic(3.0, 1.0)) == IdempotentPair(4.0, 2.0)
    assert to_idempotent(E1) == IdempotentPair(1.0, 0.0)
    assert to_idempotent(E2) == IdempotentPair(0.0, 1.0)
    z, w = Hyperbolic(1.0, 2.0), Hyperbolic(2.0, 1.0)
    pz, pw = to_idempotent(z), to_idempotent(w)
    assert (pz, pw) == ((3.0, -1.0), (3.0, 1.0))
    assert from_idempotent((pz.p1 * pw.p1, pz.p2 * pw.p2)) == Hyperbolic(4.0, 5.0) == z * w


def test_e1_e2_orthogonal_idempotents():
    assert E1 * E1 == E1 and E2 * E2 == E2
    assert E1 * E2 == Hyperbolic(0.0, 0.0)
    assert E1 + E2 == ONE


@pytest.mark.parametrize("text,value", [
    ("0+4j", Hyperbolic(0.0, 4.0)),
    ("1.5-2j", Hyperbolic(1.5, -2.0)),
    ("-3", Hyperbolic(-3.0, 0.0)),
    ("j", Hyperbolic(0.0, 1.0)),
    ("-j", Hyperbolic(0.0, -1.0)),
    ("1e-3+2.5e2j", Hyperbolic(1e-3, 250.0)),
])
def test_parse(text, value):
    assert Hyperbolic.parse(text) == value


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        Hyperbolic.parse("abc")
    with pytest.raises(ValueError):
        Hyperbolic.parse("")


@given(hyp)
def test_text_round_trip(z):
    assert Hyperbolic.parse(str(z)) == z


@given(hyp, hyp, hyp)
def test_ring_laws(a, b, c):
    assert a * b == b * a
    lhs, rhs = (a * b) * c, a * (b * c)
    scale = max(1.0, float(a.norm() * b.norm() * c.norm()))
    assert float((lhs - rhs).maxabs()) <= 8 * EPS * scale
    d = a * (b + c) - (a * b + a * c)
    assert float(d.maxabs()) <= 8 * EPS * max(1.0, float(a.norm() * (b.norm() + c.norm())))


@given(hyp, hyp)
def test_conj_is_multiplicative_involution(z, w):
    assert z.conj().conj() == z
    d = (z * w).conj() - z.conj() * w.conj()
    assert float(d.maxabs()) <= 4 * EPS * max(1.0, float(z.norm() * w.norm()))


@given(hyp, hyp)
def test_modulus_multiplicative(z, w):
    lhs, rhs = modulus_sq(z * w), modulus_sq(z) * modulus_sq(w)
    assert abs(lhs - rhs) <= 32 * EPS * max(1.0, float(z.norm() * w.norm()) ** 2)


@given(hyp, hyp)
def test_idempotent_homomorphism(z, w):
    pz, pw = to_idempotent(z), to_idempotent(w)
    prod, s = to_idempotent(z * w), to_idempotent(z + w)
    scale = max(1.0, float(z.norm() * w.norm()))
    assert abs(prod.p1 - pz.p1 * pw.p1) <= 8 * EPS * scale
    assert abs(prod.p2 - pz.p2 * pw.p2) <= 8 * EPS * scale
    assert abs(s.p1 - (pz.p1 + pw.p1)) <= 4 * EPS * max(1.0, float(z.norm() + w.norm()))
    back = from_idempotent(pz)
    assert float((back - z).maxabs()) <= 2 * EPS * max(1.0, float(z.norm()))


@given(hyp)
def test_inverse_round_trip(z):
    m = float(modulus_sq(z))
    if is_null(z):
        with pytest.raises(NullConeError):
            z.inverse()
        return
    err = float((z * z.inverse() - 1.0).maxabs())
    # conditioning of z / |z|^2 grows like |z|^2 / |modulus_sq|
    assert err <= 8 * EPS * (1.0 + float(z.norm()) ** 2 / abs(m))


@given(hyp)
def test_null_iff_idempotent_product_vanishes(z):
    p = to_idempotent(z)
    band = 1e-12 * max(1.0, abs(z.re), abs(z.im))
    assert is_null(z) == (min(abs(p.p1), abs(p.p2)) <= band)


def test_arrays_act_elementwise():
    z = Hyperbolic(np.array([1.0, 2.0, 3.0]), np.array([0.5, 0.0, -1.0]))
    w = z * z.inverse()
    assert np.allclose(w.re, 1.0) and np.allclose(w.im, 0.0, atol=1e-15)
    assert z[1] == Hyperbolic(2.0, 0.0)
    assert list(z.is_null()) == [False, False, False]


def test_immutable():
    z = Hyperbolic(1.0, 2.0)
    with pytest.raises(AttributeError):
        z.re = 5.0
    assert hash(z) == hash(Hyperbolic(1.0, 2.0))


def test_pow_matches_repeated_product():
    z = Hyperbolic(1.25, -0.5)
    assert (z ** 3).isclose(z * z * z, rtol=1e-15)
    assert (z ** -2 * z ** 2).isclose(ONE, rtol=1e-14, atol=1e-15)
    assert math.isclose(float((z ** 0).re), 1.0)
