"""Klein-Gordon operator (box - nu), its Vekua-type factorisation and transfer maps.

Here box = d_xx - d_tt.  With a positive particular solution f of
(box - nu) f = 0, the operators P = f d_z f^{-1} and Q = d_zbar + (f_z/f) C
(C is hyperbolic conjugation) factor the equation as 4 Q P = box - nu.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .duplex import Hyperbolic, J
from .errors import NonPositiveSolution
from .hfield import (
    DEFAULT_QUAD,
    Domain,
    HField,
    Jet,
    QuadratureSettings,
    antiderivative,
    as_xt,
)
from .pseudoanalytic import GeneratingPair, validate_pair

KG_TOL = 1e-8


@dataclass(frozen=True)
class Potential:
    func: Callable
    label: str = ""

    def __call__(self, x, t):
        x, t = np.asarray(x, dtype=float), np.asarray(t, dtype=float)
        return np.broadcast_to(np.asarray(self.func(x, t), dtype=float), np.broadcast(x, t).shape)

    @classmethod
    def zero(cls) -> "Potential":
        return cls(lambda x, t: 0.0 * x, "0")


def kg_residual(phi: HField, nu: Potential, p, numeric: bool = False):
    """phi_xx - phi_tt - nu phi (real part of phi) at ``p``."""
    x, t = as_xt(p)
    box = phi.box_at(x, t, numeric=numeric)
    return np.asarray(box.re - nu(x, t) * phi.at(x, t).re)


@dataclass(frozen=True)
class ParticularSolution:
    f: HField
    positive: bool


def particular_solution(f: HField, nu: Potential, probes, tol: float = KG_TOL) -> ParticularSolution:
    x, t = as_xt(probes)
    vals = f.at(x, t).re
    positive = bool(np.all(vals > 0))
    if not positive:
        raise NonPositiveSolution(f"f has minimum {np.min(vals):.3e} on the probes")
    r = np.max(np.abs(kg_residual(f, nu, (x, t))), initial=0.0)
    if r > tol * max(1.0, float(np.max(np.abs(vals)))):
        raise ValueError(f"f does not solve the equation: residual {r:.3e}")
    return ParticularSolution(f, positive)


@dataclass(frozen=True, eq=False)
class KGProblem:
    potential: Potential
    solution: ParticularSolution
    domain: Domain
    label: str = ""

    @classmethod
    def build(cls, potential: Potential, f: HField, domain: Domain, label: str = "",
              tol: float = KG_TOL) -> "KGProblem":
        f = f.with_domain(domain)
        return cls(potential, particular_solution(f, potential, domain.lattice(5, 5), tol),
                   domain, label)

    @property
    def f(self) -> HField:
        return self.solution.f

    def probes(self, n: int = 5) -> Hyperbolic:
        return self.domain.lattice(n, n)

    def b_field(self) -> HField:
        """b = f_zbar / f, the coefficient of the main Vekua equation."""
        return HField.derived(lambda f: f.dzbar() * f.inverse(), [self.f], lower=1, label="b")

    def log_dz_field(self) -> HField:
        """f_z / f."""
        return HField.derived(lambda f: f.dz() * f.inverse(), [self.f], lower=1, label="B")


def apply_P(phi: HField, prob: KGProblem) -> HField:
    """f d_z (phi / f) = phi_z - (f_z / f) phi."""
    return HField.derived(lambda ph, f: ph.dz() - f.dz() * f.inverse() * ph,
                          [phi, prob.f], lower=1, label="P")


def apply_Pbar(phi: HField, prob: KGProblem) -> HField:
    """phi_zbar - (f_zbar / f) phi, the factor with z and zbar swapped."""
    return HField.derived(lambda ph, f: ph.dzbar() - f.dzbar() * f.inverse() * ph,
                          [phi, prob.f], lower=1, label="Pbar")


def apply_Q(w: HField, prob: KGProblem, p) -> Hyperbolic:
    """w_zbar + (f_z / f) conj(w) at ``p``."""
    x, t = as_xt(p)
    wj, fj = w.jet_at(x, t, 1), prob.f.jet_at(x, t, 1)
    return wj.dzbar().v + fj.dz().v * fj.v.inverse() * wj.v.conj()


def apply_Qbar(w: HField, prob: KGProblem, p) -> Hyperbolic:
    """w_z + (f_zbar / f) conj(w) at ``p``."""
    x, t = as_xt(p)
    wj, fj = w.jet_at(x, t, 1), prob.f.jet_at(x, t, 1)
    return wj.dz().v + fj.dzbar().v * fj.v.inverse() * wj.v.conj()


def factorization_defect(phi: HField, prob: KGProblem, p, swapped: bool = False):
    """|4 Q P phi - (box - nu) phi| (or the z <-> zbar swapped line)."""
    lhs = (4.0 * apply_Qbar(apply_Pbar(phi, prob), prob, p) if swapped
           else 4.0 * apply_Q(apply_P(phi, prob), prob, p))
    rhs = kg_residual(phi, prob.potential, p)
    return (lhs - Hyperbolic(rhs, 0.0 * rhs)).maxabs()


def _real_field(func, domain, label):
    def value(x, t):
        v = func(x, t)
        return Hyperbolic(v, 0.0 * v)
    return HField(value, domain=domain, real=True, label=label)


def apply_S(w: HField, prob: KGProblem, quad: QuadratureSettings = DEFAULT_QUAD,
            check: bool = True) -> HField:
    """g = f A[w / f], a real solution of (box - nu) g = 0 when w solves Q w = 0."""
    Phi = HField.derived(lambda w_, f: w_ * f.inverse(), [w, prob.f])

    def value(x, t):
        a = antiderivative(Phi, "A", (x, t), base=prob.domain.base_point, quad=quad,
                           check=check).value
        return prob.f.at(x, t).re * a

    return _real_field(value, prob.domain, "S")


def main_pair(prob: KGProblem, probes=None) -> GeneratingPair:
    """(f, j / f)."""
    probes = prob.probes() if probes is None else probes
    x, t = as_xt(probes)
    if not np.all(prob.f.at(x, t).re > 0):
        raise NonPositiveSolution("f must be positive on the probes")
    G = J * prob.f.inverse()
    return validate_pair(prob.f, G, probes, label="(f, j/f)")


def eta_potential(prob: KGProblem, p):
    """-nu + 8 |f_z|^2 / f^2."""
    x, t = as_xt(p)
    fj = prob.f.jet_at(x, t, 1)
    fz = fj.dz().v
    return np.asarray(-prob.potential(x, t) + 8.0 * fz.modulus_sq() / fj.v.re ** 2)


def eta(prob: KGProblem) -> Potential:
    return Potential(lambda x, t: eta_potential(prob, (x, t)), f"eta[{prob.label}]")


def coefficient_identities(prob: KGProblem, p) -> dict:
    """Residuals of 4(b conj(b) + b_z) = nu, 4(b conj(b) - b_z) = eta, and Im b_z."""
    x, t = as_xt(p)
    bj = prob.b_field().jet_at(x, t, 1)
    b, bz = bj.v, bj.dz().v
    bb = (b * b.conj()).re
    return {
        "nu": np.abs(4.0 * (bb + bz.re) - prob.potential(x, t)),
        "eta": np.abs(4.0 * (bb - bz.re) - eta_potential(prob, (x, t))),
        "bz_imag": np.abs(bz.im),
    }


def v_from_u(u: HField, prob: KGProblem, quad: QuadratureSettings = DEFAULT_QUAD,
             check: bool = True) -> HField:
    """v = -f^{-1} Abar[j f^2 d_zbar(u / f)], vanishing at the base point."""
    Phi = HField.derived(lambda u_, f: J * f * f * (u_ * f.inverse()).dzbar(),
                         [u, prob.f], lower=1, label="Phi_v")

    def value(x, t):
        a = antiderivative(Phi, "Abar", (x, t), base=prob.domain.base_point, quad=quad,
                           check=check).value
        return -a / prob.f.at(x, t).re

    return _real_field(value, prob.domain, "v")


def u_from_v(v: HField, prob: KGProblem, quad: QuadratureSettings = DEFAULT_QUAD,
             check: bool = True) -> HField:
    """u = -f Abar[j f^{-2} d_zbar(f v)], vanishing at the base point."""
    Phi = HField.derived(lambda v_, f: J * f.inverse() * f.inverse() * (f * v_).dzbar(),
                         [v, prob.f], lower=1, label="Phi_u")

    def value(x, t):
        a = antiderivative(Phi, "Abar", (x, t), base=prob.domain.base_point, quad=quad,
                           check=check).value
        return -a * prob.f.at(x, t).re

    return _real_field(value, prob.domain, "u")


def combine_real(u: HField, v: HField) -> HField:
    """W = u + j v from two real fields."""
    return HField.derived(lambda a, b: a + J * b, [u, v], label="W")


def one_point_fit(numeric, reference, weight, p0):
    """Shift ``numeric`` by c * weight so it matches ``reference`` at p0; return c."""
    x0, t0 = as_xt(p0)
    c = (reference(x0, t0) - numeric(x0, t0)) / weight(x0, t0)
    return float(np.asarray(c).ravel()[0])


__all__ = [
    "KGProblem", "ParticularSolution", "Potential", "apply_P", "apply_Pbar", "apply_Q",
    "apply_Qbar", "apply_S", "coefficient_identities", "combine_real", "eta", "eta_potential",
    "factorization_defect", "kg_residual", "main_pair", "one_point_fit", "particular_solution",
    "u_from_v", "v_from_u",
]
