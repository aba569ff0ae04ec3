"""Generating pairs and the calculus of (F, G)-pseudoanalytic functions.

Conjugation of ``w`` always means hyperbolic conjugation of its value.
Coefficients are computed on demand at points, never stored as grids.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .duplex import Hyperbolic, J
from .errors import DegeneratePair, NullConeError
from .hfield import HField, Path, QuadratureSettings, DEFAULT_QUAD, as_xt, segment_integral

TAU_PAIR = 1e-10


class CharCoeffs(NamedTuple):
    a: Hyperbolic
    b: Hyperbolic
    A: Hyperbolic
    B: Hyperbolic


class Decomposition(NamedTuple):
    phi: np.ndarray
    psi: np.ndarray

    @property
    def omega(self) -> Hyperbolic:
        return Hyperbolic(self.phi, self.psi)


@dataclass(frozen=True, eq=False)
class GeneratingPair:
    F: HField
    G: HField
    margin: float | None = None
    label: str = ""
    _adjoint: list = field(default_factory=list, repr=False)

    @property
    def domain(self):
        return self.F.domain or self.G.domain

    def im_fbar_g(self, p):
        x, t = as_xt(p)
        return (self.F.at(x, t).conj() * self.G.at(x, t)).im

    def adjoint(self) -> "GeneratingPair":
        if not self._adjoint:
            self._adjoint.append(adjoint_pair(self))
        return self._adjoint[0]


def validate_pair(F: HField, G: HField, probes, tau: float = TAU_PAIR,
                  label: str = "") -> GeneratingPair:
    """Check Im(conj(F) G) stays away from zero on the probes."""
    x, t = as_xt(probes)
    fv, gv = F.at(x, t), G.at(x, t)
    im = (fv.conj() * gv).im
    scale = max(1e-300, float(np.max(fv.norm() * gv.norm(), initial=0.0)))
    margin = float(np.min(np.abs(im), initial=np.inf))
    if not margin >= tau * scale:
        raise DegeneratePair(f"min |Im(conj(F)G)| = {margin:.3e} below {tau * scale:.3e}")
    return GeneratingPair(F, G, margin, label)


def decompose(w, pair: GeneratingPair, p, tau: float = TAU_PAIR) -> Decomposition:
    """Real phi, psi with w = phi F + psi G at ``p``."""
    w = Hyperbolic.coerce(w)
    x, t = as_xt(p)
    fv, gv = pair.F.at(x, t), pair.G.at(x, t)
    im = (fv.conj() * gv).im
    if np.any(np.abs(im) <= tau * np.maximum(fv.norm() * gv.norm(), 1e-300)):
        raise DegeneratePair("pair is degenerate at the decomposition point")
    wb = w.conj()
    return Decomposition((wb * gv).im / im, -(wb * fv).im / im)


def _denominator_inverse(fj, gj):
    d = fj * gj.conj() - fj.conj() * gj
    try:
        # relative test: D = 2j Im(F conj(G)) may be small without being degenerate
        return d.inverse(TAU_PAIR, scale=0.0)
    except NullConeError as exc:
        raise DegeneratePair("F conj(G) - conj(F) G is null") from exc


def char_coeffs(pair: GeneratingPair, p) -> CharCoeffs:
    x, t = as_xt(p)
    fj, gj = pair.F.jet_at(x, t, 1), pair.G.jet_at(x, t, 1)
    F, G = fj.v, gj.v
    Fz, Fzb = fj.dz().v, fj.dzbar().v
    Gz, Gzb = gj.dz().v, gj.dzbar().v
    inv = _denominator_inverse(F, G)
    a = -((F.conj() * Gzb - Fzb * G.conj()) * inv)
    b = (F * Gzb - Fzb * G) * inv
    A = -((F.conj() * Gz - Fz * G.conj()) * inv)
    B = (F * Gz - Fz * G) * inv
    return CharCoeffs(a, b, A, B)


def fg_derivative(w: HField, pair: GeneratingPair, p) -> Hyperbolic:
    """w_z - A w - B conj(w)."""
    x, t = as_xt(p)
    c = char_coeffs(pair, (x, t))
    wj = w.jet_at(x, t, 1)
    return wj.dz().v - c.A * wj.v - c.B * wj.v.conj()


def vekua_defect(w: HField, pair: GeneratingPair, p) -> Hyperbolic:
    x, t = as_xt(p)
    c = char_coeffs(pair, (x, t))
    wj = w.jet_at(x, t, 1)
    return wj.dzbar().v - c.a * wj.v - c.b * wj.v.conj()


def vekua_residual(w: HField, pair: GeneratingPair, p):
    """Component-max magnitude of w_zbar - a w - b conj(w)."""
    return vekua_defect(w, pair, p).maxabs()


def adjoint_pair(pair: GeneratingPair) -> GeneratingPair:
    """F* = -2 conj(F) / D and G* = 2 conj(G) / D with D = F conj(G) - conj(F) G."""

    def star(sign, use_f):
        def op(f, g):
            inv = _denominator_inverse(f, g)
            return (f if use_f else g).conj() * inv * sign
        return HField.derived(op, [pair.F, pair.G])

    return GeneratingPair(star(-2.0, True), star(2.0, False), label=f"adjoint {pair.label}")


def _fg_combine(pair, z1x, z1t, int_g, int_f, fstar_sign):
    fv, gv = pair.F.at(z1x, z1t), pair.G.at(z1x, z1t)
    return fv * int_g.re + gv * (fstar_sign * int_f.re)


def fg_integral(w: HField, pair: GeneratingPair, path: Path,
                quad: QuadratureSettings = DEFAULT_QUAD, fstar_sign: float = 1.0) -> Hyperbolic:
    """F(z1) Re int G* w dz + G(z1) Re int F* w dz along ``path``.

    ``fstar_sign = -1`` flips the sign convention of F*.
    """
    adj = pair.adjoint()

    def integrand(x, t):
        wv = w.at(x, t)
        return adj.G.at(x, t) * wv, adj.F.at(x, t) * wv

    ig = if_ = None
    for a, b in path.segments():
        g, f = segment_integral(integrand, a, b, quad)
        ig = g if ig is None else ig + g
        if_ = f if if_ is None else if_ + f
    end = path.end
    return _fg_combine(pair, end.re, end.im, ig, if_, fstar_sign)


def fg_integral_from(w: HField, pair: GeneratingPair, base, z,
                     quad: QuadratureSettings = DEFAULT_QUAD, fstar_sign: float = 1.0) -> Hyperbolic:
    """Vectorised (F, G)-integral along straight segments base -> z (z may be an array)."""
    adj = pair.adjoint()
    base = Hyperbolic.coerce(base)
    z = Hyperbolic.coerce(z) if not isinstance(z, tuple) else Hyperbolic(*z)

    def integrand(x, t):
        wv = w.at(x, t)
        return adj.G.at(x, t) * wv, adj.F.at(x, t) * wv

    ig, if_ = segment_integral(integrand, base, z, quad)
    return _fg_combine(pair, np.asarray(z.re, dtype=float), np.asarray(z.im, dtype=float),
                       ig, if_, fstar_sign)


class SuccessorCheck(NamedTuple):
    ok: bool
    a_residual: float
    b_residual: float

    def __bool__(self):
        return self.ok


def is_successor(pair1: GeneratingPair, pair0: GeneratingPair, probes,
                 tol: float = 1e-7) -> SuccessorCheck:
    """pair1 succeeds pair0 iff a1 = a0 and b1 = -B0 on the probes."""
    c1, c0 = char_coeffs(pair1, probes), char_coeffs(pair0, probes)
    ra = float(np.max((c1.a - c0.a).maxabs(), initial=0.0))
    rb = float(np.max((c1.b + c0.B).maxabs(), initial=0.0))
    scale = max(1.0, float(np.max(c0.B.maxabs(), initial=0.0)),
                float(np.max(c0.a.maxabs(), initial=0.0)))
    return SuccessorCheck(ra <= tol * scale and rb <= tol * scale, ra, rb)


def classical_pair(domain=None) -> GeneratingPair:
    """The pair (1, j); its pseudoanalytic functions are the D-holomorphic ones."""
    return GeneratingPair(HField.constant(1.0, domain), HField.constant(J, domain), 1.0, "(1,j)")
