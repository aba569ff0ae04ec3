"""Hyperbolic (duplex) numbers x + t j with j**2 = +1.

Components may be Python floats or numpy arrays of a common shape; all
operations act elementwise, so a single :class:`Hyperbolic` can carry the
values of a field on a whole grid.  There is deliberately no division
operator: inversion goes through :meth:`Hyperbolic.inverse`, which raises
:class:`~hypervekua.errors.NullConeError` on zero divisors.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import NullConeError

TAU_NULL = 1e-12


def _is_real(value) -> bool:
    return isinstance(value, (int, float, np.floating, np.integer, np.ndarray))


class IdempotentPair(NamedTuple):
    """Coefficients of e1 = (1+j)/2 and e2 = (1-j)/2."""

    p1: float
    p2: float

    def to_hyperbolic(self) -> "Hyperbolic":
        return from_idempotent(self)


class Hyperbolic:
    __slots__ = ("re", "im")
    __array_ufunc__ = None  # make numpy defer to our reflected operators

    def __init__(self, re=0.0, im=0.0):
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def __setattr__(self, name, value):
        raise AttributeError("Hyperbolic values are immutable")

    def __reduce__(self):
        return (Hyperbolic, (self.re, self.im))

    # -- construction -----------------------------------------------------

    @classmethod
    def coerce(cls, value) -> "Hyperbolic":
        if isinstance(value, Hyperbolic):
            return value
        if _is_real(value):
            return cls(value, 0.0 * value)
        raise TypeError(f"cannot interpret {value!r} as a hyperbolic number")

    @classmethod
    def parse(cls, text: str) -> "Hyperbolic":
        """Parse ``"x+tj"``, ``"x-tj"``, ``"x"``, ``"tj"`` (inverse of ``str``)."""
        s = text.strip().replace(" ", "")
        if not s:
            raise ValueError("empty hyperbolic literal")
        if not s.endswith("j"):
            return cls(float(s), 0.0)
        body = s[:-1]
        split = None
        for i in range(len(body) - 1, 0, -1):
            if body[i] in "+-" and body[i - 1] not in "eE":
                split = i
                break
        if split is None:
            re_txt, im_txt = "0", body
        else:
            re_txt, im_txt = body[:split], body[split:]
        if im_txt in ("", "+"):
            im_txt = "1"
        elif im_txt == "-":
            im_txt = "-1"
        try:
            return cls(float(re_txt), float(im_txt))
        except ValueError as exc:
            raise ValueError(f"malformed hyperbolic literal {text!r}") from exc

    # -- rendering --------------------------------------------------------

    def __str__(self) -> str:
        if np.ndim(self.re) or np.ndim(self.im):
            return f"Hyperbolic(re={self.re}, im={self.im})"
        re, im = float(self.re), float(self.im)
        if math.copysign(1.0, im) < 0:
            return f"{re!r}-{-im!r}j"
        return f"{re!r}+{im!r}j"

    def __repr__(self) -> str:
        return f"Hyperbolic({self.re!r}, {self.im!r})"

    # -- algebra ----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Hyperbolic):
            return Hyperbolic(self.re + other.re, self.im + other.im)
        if _is_real(other):
            return Hyperbolic(self.re + other, self.im + 0.0 * other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Hyperbolic):
            return Hyperbolic(self.re - other.re, self.im - other.im)
        if _is_real(other):
            return Hyperbolic(self.re - other, self.im + 0.0 * other)
        return NotImplemented

    def __rsub__(self, other):
        if _is_real(other):
            return Hyperbolic(other - self.re, 0.0 * other - self.im)
        return NotImplemented

    def __neg__(self):
        return Hyperbolic(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, Hyperbolic):
            a, b, c, d = self.re, self.im, other.re, other.im
            return Hyperbolic(a * c + b * d, a * d + b * c)
        if _is_real(other):
            return Hyperbolic(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, (int, np.integer)):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        n = abs(int(n))
        result = Hyperbolic(np.ones_like(self.re, dtype=float) if np.ndim(self.re) else 1.0,
                            np.zeros_like(self.im, dtype=float) if np.ndim(self.im) else 0.0)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> "Hyperbolic":
        return Hyperbolic(self.re, -self.im)

    def modulus_sq(self):
        """z * conj(z) = x**2 - t**2, computed as (x - t)(x + t)."""
        return (self.re - self.im) * (self.re + self.im)

    def is_null(self, tau: float = TAU_NULL, scale: float = 1.0):
        """| |re| - |im| | <= tau * max(scale, |re|, |im|).

        ``scale = 1`` gives the default mixed absolute/relative band;
        ``scale = 0`` makes the test purely relative.
        """
        re, im = np.abs(self.re), np.abs(self.im)
        band = np.maximum(scale, np.maximum(re, im))
        out = np.abs(re - im) <= tau * band
        return bool(out) if np.ndim(out) == 0 else out

    def inverse(self, tau: float = TAU_NULL, scale: float = 1.0) -> "Hyperbolic":
        if np.any(self.is_null(tau, scale)):
            raise NullConeError(f"{self} lies on the null-cone |x| = |t|")
        m = self.modulus_sq()
        return Hyperbolic(self.re / m, -self.im / m)

    # -- idempotent coordinates ------------------------------------------

    def to_idempotent(self) -> IdempotentPair:
        return IdempotentPair(self.re + self.im, self.re - self.im)

    # -- comparison / utilities ------------------------------------------

    def __eq__(self, other):
        if _is_real(other):
            other = Hyperbolic.coerce(other)
        if not isinstance(other, Hyperbolic):
            return NotImplemented
        return bool(np.all(self.re == other.re) and np.all(self.im == other.im))

    def __hash__(self):
        return hash((float(self.re), float(self.im)))

    def maxabs(self):
        """Largest component magnitude (elementwise for arrays)."""
        return np.maximum(np.abs(self.re), np.abs(self.im))

    def norm(self):
        """Euclidean size sqrt(x**2 + t**2); not the hyperbolic modulus."""
        return np.hypot(self.re, self.im)

    def isclose(self, other, rtol: float = 1e-12, atol: float = 0.0) -> bool:
        other = Hyperbolic.coerce(other)
        return bool(np.allclose(self.re, other.re, rtol=rtol, atol=atol)
                    and np.allclose(self.im, other.im, rtol=rtol, atol=atol))

    def __getitem__(self, idx):
        return Hyperbolic(np.asarray(self.re)[idx], np.asarray(self.im)[idx])

    @property
    def shape(self):
        return np.broadcast(self.re, self.im).shape


def from_idempotent(p) -> Hyperbolic:
    p1, p2 = p
    return Hyperbolic(0.5 * (p1 + p2), 0.5 * (p1 - p2))


def mul(z: Hyperbolic, w: Hyperbolic) -> Hyperbolic:
    return z * w


def conj(z: Hyperbolic) -> Hyperbolic:
    return z.conj()


def modulus_sq(z: Hyperbolic):
    return z.modulus_sq()


def inverse(z: Hyperbolic, tau: float = TAU_NULL) -> Hyperbolic:
    return z.inverse(tau)


def is_null(z: Hyperbolic, tau: float = TAU_NULL):
    return z.is_null(tau)


def to_idempotent(z: Hyperbolic) -> IdempotentPair:
    return z.to_idempotent()


def exp_real(z: Hyperbolic) -> Hyperbolic:
    """exp(x + tj) = e^x (cosh t + j sinh t)."""
    ex = np.exp(z.re)
    return Hyperbolic(ex * np.cosh(z.im), ex * np.sinh(z.im))


ZERO = Hyperbolic(0.0, 0.0)
ONE = Hyperbolic(1.0, 0.0)
J = Hyperbolic(0.0, 1.0)
E1 = Hyperbolic(0.5, 0.5)
E2 = Hyperbolic(0.5, -0.5)
