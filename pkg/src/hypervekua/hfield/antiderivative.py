"""The antiderivative operators A and Abar.

For a real function phi, ``dz(phi) = Phi`` means ``phi_x = 2 Phi_1`` and
``phi_t = 2 Phi_2``, so ``phi = 2 Re \\int Phi d(zeta)``; likewise
``dzbar(phi) = Phi`` integrates to ``phi = 2 Re \\int conj(Phi) d(zeta)``.
Both are path independent exactly when the matching compatibility
condition holds.  The default path is the L-shape
(x0, t0) -> (x0, t) -> (x, t); where that leaves the domain the straight
segment from the base point is used instead and the point is flagged.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ..duplex import Hyperbolic
from ..errors import CompatibilityViolated, HyperVekuaError
from .field import HField, as_xt
from .quadrature import DEFAULT_QUAD, QuadratureSettings, segment_integral

COMPAT_TOL = 1e-6
VARIANTS = ("A", "Abar")


class AntiderivativeResult(NamedTuple):
    value: np.ndarray
    fallback: np.ndarray   # True where the L-path left the domain
    compat_residual: float


def compatibility_residual(Phi: HField, variant: str, p):
    """d_t Phi_1 - d_x Phi_2 (variant "A") or d_t Phi_1 + d_x Phi_2 ("Abar")."""
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    x, t = as_xt(p)
    jet = Phi.jet_at(x, t, 1)
    sign = -1.0 if variant == "A" else 1.0
    return np.asarray(jet.t.re + sign * jet.x.im)


def _l_path_ok(domain, x0, t0, x, t, k: int = 9):
    if domain is None:
        return np.ones(np.shape(x), dtype=bool)
    s = np.linspace(0.0, 1.0, k).reshape((-1,) + (1,) * np.ndim(x))
    up = domain.contains(x0 + 0.0 * s * x, t0 + s * (t - t0))
    across = domain.contains(x0 + s * (x - x0), t + 0.0 * s)
    return np.all(up, axis=0) & np.all(across, axis=0)


def _segment_ok(domain, x0, t0, x, t, k: int = 17):
    if domain is None:
        return np.ones(np.shape(x), dtype=bool)
    s = np.linspace(0.0, 1.0, k).reshape((-1,) + (1,) * np.ndim(x))
    return np.all(domain.contains(x0 + s * (x - x0), t0 + s * (t - t0)), axis=0)


def antiderivative(Phi: HField, variant: str, p, base=None,
                   quad: QuadratureSettings = DEFAULT_QUAD, check: bool = True,
                   tol: float = COMPAT_TOL) -> AntiderivativeResult:
    """Evaluate A[Phi] or Abar[Phi] at ``p`` (arrays allowed), zero at ``base``."""
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    x, t = np.broadcast_arrays(*as_xt(p))
    if base is None:
        if Phi.domain is None:
            raise HyperVekuaError("no base point: pass one or attach a domain")
        base = Phi.domain.base_point
    x0, t0 = as_xt(base) if isinstance(base, Hyperbolic) else map(float, base)
    x0, t0 = float(x0), float(t0)

    resid = 0.0
    if check:
        r = compatibility_residual(Phi, variant, (x, t))
        scale = max(1.0, float(np.max(Phi.at(x, t).maxabs(), initial=0.0)))
        resid = float(np.max(np.abs(r), initial=0.0))
        if resid > tol * scale:
            raise CompatibilityViolated(
                f"compatibility residual {resid:.3e} exceeds {tol:g} for operator {variant}")

    if variant == "A":
        integrand = Phi.at
    else:
        def integrand(xs, ts):
            return Phi.at(xs, ts).conj()

    ok = _l_path_ok(Phi.domain, x0, t0, x, t)
    corner = Hyperbolic(x0 + 0.0 * x, t)
    start = Hyperbolic(x0 + 0.0 * x, t0 + 0.0 * t)
    end = Hyperbolic(x, t)
    value = np.zeros(x.shape)
    if np.any(ok):
        leg1 = segment_integral(integrand, start[ok], corner[ok], quad)
        leg2 = segment_integral(integrand, corner[ok], end[ok], quad)
        value[ok] = 2.0 * (leg1.re + leg2.re)
    bad = ~ok
    if np.any(bad):
        if not np.all(_segment_ok(Phi.domain, x0, t0, x[bad], t[bad])):
            raise HyperVekuaError("no admissible integration path inside the domain")
        seg = segment_integral(integrand, start[bad], end[bad], quad)
        value[bad] = 2.0 * seg.re
    return AntiderivativeResult(value, bad, resid)


def antiderivative_A(Phi: HField, p, **kw):
    """Real phi with dz(phi) = Phi and phi(base) = 0."""
    return antiderivative(Phi, "A", p, **kw).value


def antiderivative_Abar(Phi: HField, p, **kw):
    """Real phi with dzbar(phi) = Phi and phi(base) = 0."""
    return antiderivative(Phi, "Abar", p, **kw).value


def antiderivative_field(Phi: HField, variant: str, base=None,
                         quad: QuadratureSettings = DEFAULT_QUAD, check: bool = True,
                         tol: float = COMPAT_TOL) -> HField:
    """A[Phi] or Abar[Phi] as a real field (finite-difference derivatives)."""

    def func(x, t):
        v = antiderivative(Phi, variant, (x, t), base=base, quad=quad, check=check,
                           tol=tol).value
        return Hyperbolic(v, 0.0 * v)

    return HField(func, domain=Phi.domain, fd_step=Phi.fd_step, real=True,
                  label=f"{variant}[{Phi.label}]")
