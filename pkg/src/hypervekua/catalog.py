"""Built-in problems: potentials, positive particular solutions, rho-profiles and
closed-form reference values.

Closed forms are written once as sympy expressions; values and exact first
and second partials are generated from them with ``lambdify``.  Nothing is
parsed from user input: JSON problems and CLI flags select entries by name.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
import sympy as sp

from .duplex import Hyperbolic
from .errors import MissingOracle
from .hfield import Domain, HField, Jet
from .kleingordon import KGProblem, Potential
from .genseq import RhoProfile

X, T, R = sp.symbols("x t r", real=True)


def _lam(expr, args=(X, T)):
    fn = sp.lambdify(args, expr, modules="numpy")
    constant = not (sp.sympify(expr).free_symbols & set(args))

    def call(*vals):
        out = fn(*vals)
        if constant:
            shape = np.broadcast(*vals).shape
            return np.full(shape, float(out))
        return np.asarray(out, dtype=float)

    return call


def sym_field(re_expr, im_expr=0, domain: Domain | None = None, label: str = "") -> HField:
    """Field with exact partials up to second order from sympy expressions."""
    re_expr, im_expr = sp.sympify(re_expr), sp.sympify(im_expr)
    parts = []
    for e in (re_expr, im_expr):
        parts.append([_lam(e), _lam(sp.diff(e, X)), _lam(sp.diff(e, T)),
                      _lam(sp.diff(e, X, 2)), _lam(sp.diff(e, X, T)), _lam(sp.diff(e, T, 2))])
    real = im_expr == 0

    def h(k, x, t):
        return Hyperbolic(parts[0][k](x, t), parts[1][k](x, t))

    def func(x, t):
        return h(0, x, t)

    def jet(x, t, order):
        if order <= 1:
            return Jet(h(0, x, t), h(1, x, t), h(2, x, t))
        return Jet(*(h(k, x, t) for k in range(6)))

    return HField(func, jet=jet, max_order=2, domain=domain, label=label or str(re_expr),
                  real=real)


def sym_potential(expr, label: str = "") -> Potential:
    return Potential(_lam(sp.sympify(expr)), label or str(expr))


def sym_profile(rho_expr, s_expr, S_expr=None, rho0: float = 1.0, domain=None,
                label: str = "") -> RhoProfile:
    s_expr = sp.sympify(s_expr)
    S = _lam(S_expr, (R,)) if S_expr is not None else None
    return RhoProfile(sym_field(rho_expr, 0, domain, label=str(rho_expr)),
                      _lam(s_expr, (R,)), S=S, ds=_lam(sp.diff(s_expr, R), (R,)),
                      rho0=rho0, label=label)


def hyp_expr(re, im):
    """Pair of sympy expressions representing re + im j."""
    return (sp.sympify(re), sp.sympify(im))


def hmul(a, b):
    return (a[0] * b[0] + a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def hadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def hscale(c, a):
    return (c * a[0], c * a[1])


Z = hyp_expr(X, T)  # z = x + t j
E1 = hyp_expr(sp.Rational(1, 2), sp.Rational(1, 2))


# -- catalog entries -----------------------------------------------------------


def default_domain(label: str = "") -> Domain:
    return Domain.time_like_wedge(0.0, 2.5, 0.0, 2.5, base_point=(0.5, 1.5), margin=0.05,
                                  label=label)


@dataclass(frozen=True)
class SolutionEntry:
    f: sp.Expr
    rho: sp.Expr
    s: sp.Expr
    S: sp.Expr | None
    rho0: float
    phi: tuple | None          # closed form of the sequence multiplier


POTENTIALS = {
    "zero": sp.Integer(0),
    "saddle": T ** 2 - X ** 2,
    "rational": sp.Rational(1, 4) * (1 / (T + 1) ** 2 - 1 / (X + 1) ** 2),
}

SOLUTIONS = {
    "one": SolutionEntry(sp.Integer(1), X, sp.Integer(0), sp.Integer(0), 1.0,
                         hyp_expr(0, sp.Rational(1, 2))),
    "exp_xt": SolutionEntry(sp.exp(X * T), sp.sqrt(X * T), -1 / R, -sp.log(R), 1.0,
                            hscale(sp.Rational(1, 4), Z)),
    "sqrt_rational": SolutionEntry(sp.sqrt((X + 1) * (T + 1)), (X + 1) * (T + 1),
                                   sp.Integer(0), sp.Integer(0), 1.0,
                                   hadd(hscale(sp.Rational(1, 2), Z), E1)),
    "xt": SolutionEntry(X * T, X * T, sp.Integer(0), sp.Integer(0), 1.0,
                        hscale(sp.Rational(1, 2), Z)),
}


@dataclass(frozen=True)
class ExampleSpec:
    name: str
    potential: str
    solution: str
    center: tuple[float, float]
    base: tuple[float, float]
    description: str = ""
    oracle_fn: Callable | None = field(default=None, repr=False)
    reference_fstar_sign: float = 1.0

    @property
    def nu_expr(self):
        return POTENTIALS[self.potential]

    @property
    def entry(self) -> SolutionEntry:
        return SOLUTIONS[self.solution]

    def domain(self) -> Domain:
        return default_domain(self.name)

    def problem(self, domain: Domain | None = None) -> KGProblem:
        dom = domain or self.domain()
        return KGProblem.build(sym_potential(self.nu_expr, self.potential),
                               sym_field(self.entry.f, 0, dom, label=self.solution),
                               dom, label=self.name)

    def profile(self, domain: Domain | None = None) -> RhoProfile:
        e = self.entry
        return sym_profile(e.rho, e.s, e.S, e.rho0, domain or self.domain(), label=self.name)

    def sequence(self, problem: KGProblem | None = None, profile: RhoProfile | None = None):
        from .genseq import generating_sequence

        problem = problem or cached_problem(self.name)
        profile = profile or self.profile(problem.domain)
        return generating_sequence(problem, profile, phi=self.phi_oracle())

    def phi_oracle(self) -> HField | None:
        phi = self.entry.phi
        return None if phi is None else sym_field(phi[0], phi[1], self.domain(), "Phi")

    def eta_oracle(self) -> HField:
        """eta = -nu + 8 |f_z|^2 / f^2 by symbolic differentiation."""
        f = self.entry.f
        fx, ft = sp.diff(f, X), sp.diff(f, T)
        expr = sp.simplify(-self.nu_expr + 2 * (fx ** 2 - ft ** 2) / f ** 2)
        return sym_field(expr, 0, self.domain(), label="eta")

    def oracle(self, n: int, a_label: str, center, base, m: int = 0) -> HField:
        """Closed form of Z_m^(n)(a, center; .) integrated from ``base``."""
        if self.oracle_fn is None:
            raise MissingOracle(f"no closed forms are catalogued for '{self.name}'")
        center = _pt(center)
        base = _pt(base)
        expr = self.oracle_fn(m, n, a_label, center, base)
        if expr is None:
            raise MissingOracle(
                f"no closed form for m={m}, n={n}, a={a_label} at center {center}, base {base}"
                f" in '{self.name}'")
        return sym_field(expr[0], expr[1], self.domain(), label=f"Z_{m}^({n})({a_label})")

    def has_oracle(self, n, a_label, center, base, m: int = 0) -> bool:
        try:
            self.oracle(n, a_label, center, base, m)
        except MissingOracle:
            return False
        return True


def _pt(p):
    if isinstance(p, Hyperbolic):
        return (float(p.re), float(p.im))
    return (float(p[0]), float(p[1]))


def _wave_oracle(m, n, a_label, center, base):
    # constant pair (1, j) times (j/2)^m: powers are a (z - base)^n for every m
    a = hyp_expr(1, 0) if a_label == "1" else hyp_expr(0, 1)
    d = hyp_expr(X - base[0], T - base[1])
    out = a
    for _ in range(n):
        out = hmul(out, d)
    return tuple(sp.expand(e) for e in out)


def _saddle_oracle(m, n, a_label, center, base):
    if center != (0.0, 4.0):
        return None
    e, einv = sp.exp(X * T), sp.exp(-X * T)
    q = X ** 2 + T ** 2
    sh, ch = sp.sinh(X * T), sp.cosh(X * T)
    z4 = hscale(sp.Rational(1, 4), Z)
    if n == 0:
        if m == 0:
            return hyp_expr(e, 0) if a_label == "1" else hyp_expr(0, einv)
        if m == 1:
            return hmul(hyp_expr(0, einv), z4) if a_label == "1" else hmul(hyp_expr(e, 0), z4)
        if m == 2:
            zz = hmul(z4, z4)
            return hmul(hyp_expr(e, 0), zz) if a_label == "1" else hmul(hyp_expr(0, einv), zz)
        return None
    if base != (0.0, 0.0):
        return None
    if n == 1 and m == 0:
        if a_label == "1":
            return hscale(sp.Rational(1, 4), hyp_expr(sh, q / 2 * einv))
        return hscale(sp.Rational(1, 4), hyp_expr(q / 2 * e, sh))
    if n == 1 and m == 1:
        z16 = hscale(sp.Rational(1, 16), Z)
        if a_label == "1":
            return hmul(z16, hyp_expr(q / 2 * e, sh))
        return hmul(z16, hyp_expr(sh, q / 2 * einv))
    if n == 2 and m == 0:
        s2, c2 = sp.sinh(2 * X * T), sp.cosh(2 * X * T)
        if a_label == "1":
            re = e / 64 * (q ** 2 + 4 * X * T + 2 * (c2 - s2 - 1))
            im = (sp.Rational(1, 64) * q / (X * T)
                  * (e * (4 * X * T * s2 - 1) + 2 * einv * ch * (ch + sh) - 1))
            return (re, im)
        re = -sp.Rational(1, 64) * q / (X * T) * (e * (s2 - c2) - 4 * X * T * sh + einv)
        im = -sp.Rational(1, 64) * einv * (q ** 2 + 4 * ch * (sh + ch) - 4 * (X * T + 1))
        return (re, im)
    return None


def _rational_oracle(m, n, a_label, center, base):
    if center[0] != 0.0 or center[1] <= 0:
        return None
    t0 = sp.nsimplify(center[1])
    alpha = sp.sqrt(t0 + 1)
    f = sp.sqrt((X + 1) * (T + 1))
    k = t0 * (t0 + 2)
    if n == 0 and m == 0:
        return hyp_expr(f / alpha, 0) if a_label == "1" else hyp_expr(0, alpha / f)
    if n == 0 and m == 1:
        w = hadd(Z, hscale(2, E1))  # z + 2 e1
        if a_label == "1":
            return hadd(hscale(-f / (alpha * k), w), hmul(hyp_expr(0, alpha * (t0 + 1) / (k * f)), w))
        return hadd(hscale((t0 + 1) * f / (alpha * k), w), hmul(hyp_expr(0, -alpha / (k * f)), w))
    if base != (0.0, 0.0):
        return None
    if n == 1 and m == 0:
        p = (X ** 2 + T ** 2) / 2 + X + T
        lg = sp.log((X + 1) * (T + 1))
        poly = 2 * (X + T) * (X * T + 1) + (X ** 2 * T ** 2 + 4 * X * T + X ** 2 + T ** 2)
        if a_label == "1":
            re = f * (-p / (alpha * k) + alpha * (t0 + 1) / k * lg)
            im = (poly / (2 * alpha * k) - alpha * (t0 + 1) / k * p) / f
            return (re, im)
        re = f * ((t0 + 1) / (alpha * k) * p - alpha / k * lg)
        im = (-(t0 + 1) / (2 * alpha * k) * poly + alpha / k * p) / f
        return (re, im)
    return None


EXAMPLES = {
    "wave": ExampleSpec("wave", "zero", "one", center=(0.5, 1.5), base=(0.5, 1.5),
                        description="nu = 0, f = 1: D-holomorphic functions",
                        oracle_fn=_wave_oracle),
    "saddle": ExampleSpec("saddle", "saddle", "exp_xt", center=(0.0, 4.0), base=(0.0, 0.0),
                          description="nu = t^2 - x^2, f = exp(xt), rho = sqrt(xt)",
                          oracle_fn=_saddle_oracle),
    "rational": ExampleSpec("rational", "rational", "sqrt_rational", center=(0.0, 4.0),
                            base=(0.0, 0.0),
                            description="nu = (1/(t+1)^2 - 1/(x+1)^2)/4, f = sqrt((x+1)(t+1))",
                            oracle_fn=_rational_oracle, reference_fstar_sign=-1.0),
    "xt-eta": ExampleSpec("xt-eta", "zero", "xt", center=(0.5, 1.5), base=(0.5, 1.5),
                          description="nu = 0, f = xt, eta = 2(t^2 - x^2)/(x^2 t^2)"),
}

# transfer-map reference for xt-eta: u = 1 gives this v (up to c / f)
XT_ETA_V_REFERENCE = (X ** 2 + T ** 2) / (2 * X * T)


def get_example(name: str) -> ExampleSpec:
    try:
        return EXAMPLES[name]
    except KeyError:
        raise KeyError(f"unknown example '{name}'; choose from {sorted(EXAMPLES)}") from None


@lru_cache(maxsize=None)
def cached_problem(name: str) -> KGProblem:
    return get_example(name).problem()


def problem_from_json(doc: dict) -> tuple[ExampleSpec, KGProblem, RhoProfile]:
    """Assemble a problem from catalog names; returns an ad-hoc ExampleSpec too."""
    for key in ("potential", "f"):
        if key not in doc:
            raise ValueError(f"problem document lacks '{key}'")
    pot, sol = doc["potential"], doc["f"]
    if pot in EXAMPLES:
        pot = EXAMPLES[pot].potential
    if sol in EXAMPLES:
        sol = EXAMPLES[sol].solution
    if pot not in POTENTIALS:
        raise ValueError(f"unknown potential '{pot}'; choose from {sorted(POTENTIALS)}")
    if sol not in SOLUTIONS:
        raise ValueError(f"unknown particular solution '{sol}'; choose from {sorted(SOLUTIONS)}")
    d = doc.get("domain", {})
    base = tuple(doc.get("base_point", (0.5, 1.5)))
    if d.get("wedge", True):
        dom = Domain.time_like_wedge(d.get("x_min", 0.0), d.get("x_max", 2.5),
                                     d.get("t_min", 0.0), d.get("t_max", 2.5),
                                     base_point=base, margin=0.05, label="problem")
    else:
        dom = Domain.rectangle(d["x_min"], d["x_max"], d["t_min"], d["t_max"], base_point=base,
                               label="problem")
    match = [e for e in EXAMPLES.values() if e.potential == pot and e.solution == sol]
    template = match[0] if match else None
    example = ExampleSpec(template.name if template else f"{pot}/{sol}", pot, sol,
                          center=template.center if template else base,
                          base=template.base if template else base,
                          oracle_fn=template.oracle_fn if template else None,
                          reference_fstar_sign=template.reference_fstar_sign if template else 1.0)
    return example, example.problem(dom), example.profile(dom)


def self_check(tol: float = 1e-8) -> dict:
    """kg_residual(f, nu) on a 5x5 lattice for every catalog pair."""
    from .kleingordon import kg_residual

    out = {}
    for name, ex in EXAMPLES.items():
        prob = cached_problem(name)
        p = prob.domain.lattice(5, 5)
        out[name] = float(np.max(np.abs(kg_residual(prob.f, prob.potential, p)), initial=0.0))
    return out
