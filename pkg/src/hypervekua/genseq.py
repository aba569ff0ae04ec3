"""Generating sequences under the ansatz f = f(rho), and formal powers.

With s(rho) = box(rho) / (4 |rho_z|^2) and S' = s, the multiplier
Phi = j exp(-S(rho)) rho_z is D-holomorphic and (Phi^m f, Phi^m j/f) is a
chain of successor pairs.  Formal powers are built by the recursion
Z_m^(n) = n * (F_m, G_m)-integral of Z_{m+1}^(n-1) along the straight
segment from a base point.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .duplex import Hyperbolic, J
from .errors import AnsatzMismatch, NotAFunctionOfRho, NullGradient, NullPhi
from .hfield import DEFAULT_QUAD, HField, QuadratureSettings, as_xt
from .hfield.field import memoized
from .pseudoanalytic import (
    GeneratingPair,
    decompose,
    fg_derivative,
    fg_integral_from,
    validate_pair,
)

TAU_GRAD = 1e-12
CHUNK = 256  # outer points per vectorised block; bounds the nested node arrays
S_TOL = 1e-7


@dataclass(frozen=True, eq=False)
class RhoProfile:
    """rho(x, t), the function s of rho, and optionally its antiderivative S.

    ``S`` is normalised so that S(rho0) = 0; without a closed form it is
    integrated numerically from rho0.
    """

    rho: HField
    s: Callable
    S: Callable | None = None
    ds: Callable | None = None
    rho0: float = 1.0
    label: str = ""

    def S_of(self, r):
        r = np.asarray(r, dtype=float)
        if self.S is not None:
            return self.S(r) - self.S(np.asarray(self.rho0))
        return _integrate_1d(self.s, self.rho0, r)

    def ds_of(self, r):
        if self.ds is not None:
            return self.ds(r)
        h = 1e-4 * max(1.0, float(np.max(np.abs(r), initial=1.0)))
        return (self.s(r - 2 * h) - 8 * self.s(r - h) + 8 * self.s(r + h) - self.s(r + 2 * h)) / (12 * h)


def _integrate_1d(fn, a, b, nodes: int = 32):
    s, w = np.polynomial.legendre.leggauss(nodes)
    b = np.asarray(b, dtype=float)
    mid, half = 0.5 * (b + a), 0.5 * (b - a)
    pts = mid[..., None] + half[..., None] * s
    return half * np.sum(w * fn(pts), axis=-1)


class SValue(NamedTuple):
    value: np.ndarray
    spread: float


def _quotient(profile: RhoProfile, x, t):
    jet = profile.rho.jet_at(x, t, 2)
    rx, rt = jet.x.re, jet.t.re
    grad2 = 0.25 * (rx * rx - rt * rt)
    scale = 0.25 * (rx * rx + rt * rt)
    if np.any(np.abs(grad2) <= TAU_GRAD * np.maximum(scale, 1e-300)):
        raise NullGradient("|rho_z|^2 vanishes at a probe")
    return (jet.xx.re - jet.tt.re) / (4.0 * grad2), jet


def s_of_rho(profile: RhoProfile, p, tol: float = S_TOL, delta: float = 0.02,
             check: bool = True) -> SValue:
    """box(rho) / 4|rho_z|^2 at ``p`` plus its spread along the level set of rho."""
    x, t = np.broadcast_arrays(*as_xt(p))
    x, t = x.astype(float), t.astype(float)
    q, jet = _quotient(profile, x, t)
    if not check:
        return SValue(q, 0.0)
    target = jet.v.re
    steep_t = np.abs(jet.t.re) >= np.abs(jet.x.re)
    spread = 0.0
    scale = np.maximum(1.0, np.abs(q))
    dom = profile.rho.domain
    for d in (-2 * delta, -delta, delta, 2 * delta):
        xs, ts = x + np.where(steep_t, d, 0.0), t + np.where(steep_t, 0.0, d)
        for _ in range(40):
            j1 = profile.rho.jet_at(xs, ts, 1)
            g = j1.v.re - target
            slope = np.where(steep_t, j1.t.re, j1.x.re)
            slope = np.where(np.abs(slope) > 0, slope, 1.0)
            step = g / slope
            ts = np.where(steep_t, ts - step, ts)
            xs = np.where(steep_t, xs, xs - step)
            if np.all(np.abs(step) <= 1e-15 * np.maximum(1.0, np.abs(xs) + np.abs(ts))):
                break
        ok = np.abs(profile.rho.at(xs, ts).re - target) <= 1e-12 * np.maximum(1.0, np.abs(target))
        if dom is not None:
            ok &= dom.interior_mask(xs, ts)
        if not np.any(ok):
            continue
        qs, _ = _quotient(profile, xs[ok], ts[ok])
        spread = max(spread, float(np.max(np.abs(qs - q[ok]) / scale[ok])))
    if spread > tol:
        raise NotAFunctionOfRho(f"box(rho)/4|rho_z|^2 varies by {spread:.3e} along a level set")
    declared = profile.s(target)
    mismatch = float(np.max(np.abs(declared - q) / scale, initial=0.0))
    if mismatch > tol:
        raise NotAFunctionOfRho(f"declared s(rho) differs from the quotient by {mismatch:.3e}")
    return SValue(q, spread)


def build_phi(profile: RhoProfile, probes=None) -> HField:
    """Phi = j exp(-S(rho)) rho_z."""

    def op(rj):
        Sj = rj.map_real(profile.S_of, profile.s, profile.ds_of)
        E = Sj.map_real(lambda u: np.exp(-u), lambda u: -np.exp(-u), lambda u: np.exp(-u))
        return J * E * rj.dz()

    phi = HField.derived(op, [profile.rho], lower=1, label="Phi")
    if probes is not None:
        x, t = as_xt(probes)
        if np.any(phi.at(x, t).is_null()):
            raise NullPhi("Phi lies on the null-cone at a probe")
    return phi


@dataclass(frozen=True, eq=False)
class FormalPower:
    m: int
    n: int
    a: Hyperbolic
    center: Hyperbolic
    base: Hyperbolic
    field: HField
    quad: QuadratureSettings
    fstar_sign: float = 1.0
    lam: float | None = None
    mu: float | None = None

    def __call__(self, p) -> Hyperbolic:
        return self.field(p)

    def at(self, x, t) -> Hyperbolic:
        return self.field.at(x, t)

    def metadata(self) -> dict:
        return {"m": self.m, "n": self.n, "a": str(self.a), "center": str(self.center),
                "base": str(self.base), "quadrature": self.quad.to_json(),
                "adjoint_sign": self.fstar_sign}


class GeneratingSequence:
    """(F_m, G_m) = (Phi^m F, Phi^m G) for integer m, with a formal-power memo."""

    def __init__(self, pair: GeneratingPair, phi: HField, probes=None, label: str = ""):
        self.base_pair = pair
        self.phi = phi
        self.probes = probes
        self.label = label
        self._pairs: dict[int, GeneratingPair] = {0: pair}
        self._powers: dict[tuple, FormalPower] = {}
        self._lock = threading.RLock()

    def pair(self, m: int) -> GeneratingPair:
        with self._lock:
            if m not in self._pairs:
                pm = self.phi ** m
                F, G = pm * self.base_pair.F, pm * self.base_pair.G
                if self.probes is not None:
                    self._pairs[m] = validate_pair(F, G, self.probes, label=f"m={m}")
                else:
                    self._pairs[m] = GeneratingPair(F, G, label=f"m={m}")
            return self._pairs[m]

    def power(self, m: int, n: int, a, z0, base=None,
              quad: QuadratureSettings = DEFAULT_QUAD, fstar_sign: float = 1.0) -> FormalPower:
        a, z0 = _hyp(a), _hyp(z0)
        base = z0 if base is None else _hyp(base)
        if n < 0:
            raise ValueError("exponent must be non-negative")
        key = (m, n, float(a.re), float(a.im), float(z0.re), float(z0.im),
               float(base.re), float(base.im), quad, float(fstar_sign))
        with self._lock:
            hit = self._powers.get(key)
            if hit is not None:
                return hit
        fp = self._build(m, n, a, z0, base, quad, fstar_sign)
        with self._lock:
            return self._powers.setdefault(key, fp)

    def _build(self, m, n, a, z0, base, quad, fstar_sign) -> FormalPower:
        pair = self.pair(m)
        if n == 0:
            d = decompose(a, pair, z0)
            lam, mu = float(np.asarray(d.phi)), float(np.asarray(d.psi))
            field = lam * pair.F + mu * pair.G
            field.label = f"Z_{m}^(0)({a})"
            return FormalPower(m, 0, a, z0, base, field, quad, fstar_sign, lam, mu)
        inner = self.power(m + 1, n - 1, a, z0, base, quad, fstar_sign).field

        def func(x, t):
            x, t = np.broadcast_arrays(x, t)
            shape = x.shape
            xf, tf = x.ravel(), t.ravel()
            parts = [fg_integral_from(inner, pair, base, Hyperbolic(xf[i:i + CHUNK], tf[i:i + CHUNK]),
                                      quad, fstar_sign)
                     for i in range(0, max(xf.size, 1), CHUNK)]
            re = np.concatenate([np.atleast_1d(q.re) for q in parts])[:xf.size].reshape(shape)
            im = np.concatenate([np.atleast_1d(q.im) for q in parts])[:xf.size].reshape(shape)
            return Hyperbolic(n * re, n * im)

        field = HField(memoized(func), domain=pair.domain, fd_step=pair.F.fd_step,
                       label=f"Z_{m}^({n})({a})")
        return FormalPower(m, n, a, z0, base, field, quad, fstar_sign)


def _hyp(v) -> Hyperbolic:
    if isinstance(v, Hyperbolic):
        return v
    if isinstance(v, (tuple, list)):
        return Hyperbolic(float(v[0]), float(v[1]))
    return Hyperbolic.coerce(float(v))


def check_ansatz(prob, profile: RhoProfile, probes, tol: float = 1e-8):
    """f is a function of rho iff grad f is parallel to grad rho."""
    x, t = as_xt(probes)
    fj, rj = prob.f.jet_at(x, t, 1), profile.rho.jet_at(x, t, 1)
    cross = fj.x.re * rj.t.re - fj.t.re * rj.x.re
    size = np.hypot(fj.x.re, fj.t.re) * np.hypot(rj.x.re, rj.t.re)
    worst = float(np.max(np.abs(cross) / np.maximum(size, 1e-300), initial=0.0))
    if worst > tol:
        raise AnsatzMismatch(f"f is not a function of rho (gradient misalignment {worst:.3e})")
    return worst


def generating_sequence(prob, profile: RhoProfile, probes=None, phi: HField | None = None,
                        phi_tol: float = 1e-10) -> GeneratingSequence:
    """Sequence built on the main pair (f, j/f).

    ``phi`` may supply a closed form of the multiplier.  It must agree with
    the profile-derived one on the probes; it is then used everywhere, which
    matters where rho itself is not differentiable (e.g. sqrt(xt) on x = 0)
    although Phi extends smoothly.
    """
    from .kleingordon import main_pair

    probes = prob.probes() if probes is None else probes
    check_ansatz(prob, profile, probes)
    s_of_rho(profile, probes)
    derived = build_phi(profile, probes)
    if phi is not None:
        x, t = as_xt(probes)
        gap = float(np.max((phi.at(x, t) - derived.at(x, t)).maxabs(), initial=0.0))
        if gap > phi_tol:
            raise NullPhi(f"supplied Phi differs from the profile's by {gap:.3e}")
    else:
        phi = derived
    return GeneratingSequence(main_pair(prob, probes), phi, probes, label=prob.label)


def formal_power(seq: GeneratingSequence, m: int, n: int, a, z0, base=None,
                 quad: QuadratureSettings = DEFAULT_QUAD, fstar_sign: float = 1.0) -> FormalPower:
    return seq.power(m, n, a, z0, base, quad, fstar_sign)


def kg_solution_family(prob, profile: RhoProfile, n_max: int, z0, base=None,
                       quad: QuadratureSettings = DEFAULT_QUAD, seq=None) -> list[HField]:
    """Re Z^(n)(1, z0; .) and Re Z^(n)(j, z0; .) for n = 0..n_max."""
    seq = seq or generating_sequence(prob, profile)
    out = []
    for n in range(n_max + 1):
        for a, lab in ((Hyperbolic(1.0, 0.0), "1"), (J, "j")):
            re = seq.power(0, n, a, z0, base, quad).field.re_part()
            re.label = f"Re Z^({n})({lab})"
            out.append(re)
    return out


def power_derivative_check(seq: GeneratingSequence, m: int, n: int, a, z0, base, p,
                           quad: QuadratureSettings = DEFAULT_QUAD):
    """|(F_m, G_m)-derivative of Z_m^(n) - n Z_{m+1}^(n-1)| at ``p``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    z = seq.power(m, n, a, z0, base, quad)
    lower = seq.power(m + 1, n - 1, a, z0, base, quad)
    lhs = fg_derivative(z.field, seq.pair(m), p)
    return (lhs - n * lower(p)).maxabs()


class AsymptoticReport(NamedTuple):
    radii: tuple
    ratios: tuple
    decreasing: bool
    value: float


def asymptotic_check(seq: GeneratingSequence, m: int, n: int, a, z0, direction=(1.0, 2.0),
                     r0: float = 0.1, quad: QuadratureSettings = DEFAULT_QUAD) -> AsymptoticReport:
    """|Z(z) - a (z - z0)^n| / r^n for r = r0, r0/2, r0/4, powers based at z0."""
    a, z0 = _hyp(a), _hyp(z0)
    d = Hyperbolic(*direction)
    if d.is_null():
        raise ValueError("direction must not be on the null-cone")
    d = d * (1.0 / float(d.norm()))
    z = seq.power(m, n, a, z0, z0, quad)
    radii = (r0, r0 / 2, r0 / 4)
    ratios = []
    for r in radii:
        p = z0 + d * r
        ref = a * (d * r) ** n
        ratios.append(float((z(p) - ref).norm()) / r ** n)
    dec = all(b < a_ for a_, b in zip(ratios, ratios[1:]))
    return AsymptoticReport(radii, tuple(ratios), dec, max(ratios))
