"""Residual suites run by ``hypervekua verify``.

Each suite returns a :class:`SuiteReport`: per-probe residual rows for the
CSV report plus one :class:`Check` (maximum against tolerance) per residual
kind.  Suites are deterministic for a fixed :class:`VerifyContext`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
import sympy as sp

from .catalog import XT_ETA_V_REFERENCE, ExampleSpec, T, X, sym_field
from .duplex import ONE, TAU_NULL, Hyperbolic, J
from .genseq import GeneratingSequence, RhoProfile, build_phi
from .hfield import DEFAULT_QUAD, HField, Path, QuadratureSettings, as_xt
from .kleingordon import (
    KGProblem,
    coefficient_identities,
    combine_real,
    eta,
    eta_potential,
    factorization_defect,
    kg_residual,
    main_pair,
    one_point_fit,
    u_from_v,
    v_from_u,
)
from .pseudoanalytic import (
    adjoint_pair,
    char_coeffs,
    decompose,
    fg_derivative,
    fg_integral,
    fg_integral_from,
    vekua_residual,
)

# tolerances, one per residual kind family
TOL_FACTORIZATION = 1e-7
TOL_IDENTITY = 1e-8
TOL_BZ_IMAG = 1e-9
TOL_TRANSFER = 1e-8
TOL_ROUNDTRIP = 1e-7
TOL_VEKUA_W = 1e-6
TOL_FAMILY = 1e-5
TOL_VEKUA_POWER = 1e-6
TOL_LINEARITY = 1e-10
TOL_RECONSTRUCT = 1e-12
TOL_GENERATOR = 1e-9
TOL_SUCCESSOR = 1e-7
TOL_PHI_DZBAR = 1e-9
TOL_PHI_FORM = 1e-12
TOL_INVERSE = 1e-13
FAMILY_FD_STEP = 1e-5  # second differences use its square root
EPS = float(np.finfo(float).eps)

A_VALUES = (("1", ONE), ("j", J))


class Row(NamedTuple):
    probe_x: float
    probe_t: float
    kind: str
    magnitude: float


@dataclass(frozen=True)
class Check:
    kind: str
    value: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.tol)


@dataclass
class SuiteReport:
    name: str
    rows: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def add(self, kind: str, x, t, magnitudes, tol: float):
        x, t, mags = np.broadcast_arrays(np.ravel(x), np.ravel(t), np.ravel(magnitudes))
        self.rows.extend(Row(float(a), float(b), kind, float(c)) for a, b, c in zip(x, t, mags))
        worst = float(np.max(mags)) if mags.size else 0.0
        if np.isnan(worst):
            worst = float("inf")
        self.checks.append(Check(kind, worst, tol))

    def extend(self, other: "SuiteReport"):
        self.rows.extend(other.rows)
        self.checks.extend(other.checks)
        self.notes.extend(other.notes)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]


@dataclass(eq=False)
class VerifyContext:
    example: ExampleSpec
    problem: KGProblem
    profile: RhoProfile
    grid: Hyperbolic
    center: tuple[float, float]
    base: tuple[float, float]
    n_max: int = 2
    quad: QuadratureSettings = DEFAULT_QUAD
    fstar_sign: float = 1.0
    fd_step: float = FAMILY_FD_STEP
    _seq: list = field(default_factory=list, repr=False)

    @property
    def seq(self) -> GeneratingSequence:
        if not self._seq:
            self._seq.append(self.example.sequence(self.problem, self.profile))
        return self._seq[0]

    def probes(self, n: int = 5) -> Hyperbolic:
        return self.problem.domain.lattice(n, n)


# -- factorization --------------------------------------------------------------

PROBE_FUNCTIONS = (
    X ** 2 * T,
    X ** 3 + T ** 2 * X,
    X * T + 1,
    X - 2 * T,
    (X + 1) ** 2 * (T + 2),
    T ** 4 - 3 * X ** 2 * T,
    sp.exp(X - T),
    sp.exp(sp.Rational(3, 10) * X * T),
    sp.exp(X) * T,
    (X ** 2 + 1) * sp.exp(-T),
)


def suite_factorization(ctx: VerifyContext) -> SuiteReport:
    rep = SuiteReport("factorization")
    x, t = as_xt(ctx.grid)
    for k, expr in enumerate(PROBE_FUNCTIONS):
        phi = sym_field(expr, 0, ctx.problem.domain)
        for swapped, kind in ((False, "factorization"), (True, "factorization_swapped")):
            d = factorization_defect(phi, ctx.problem, (x, t), swapped=swapped)
            rep.add(f"{kind}:{k}", x, t, d, TOL_FACTORIZATION)
    return rep


# -- eta ------------------------------------------------------------------------

def suite_eta(ctx: VerifyContext) -> SuiteReport:
    rep = SuiteReport("eta")
    x, t = as_xt(ctx.grid)
    ref = ctx.example.eta_oracle().at(x, t).re
    got = eta_potential(ctx.problem, (x, t))
    rep.add("eta_closed_form", x, t, np.abs(got - ref) / np.maximum(1.0, np.abs(ref)),
            TOL_IDENTITY)
    ids = coefficient_identities(ctx.problem, (x, t))
    scale_nu = np.maximum(1.0, np.abs(ctx.problem.potential(x, t)))
    rep.add("identity_nu", x, t, ids["nu"] / scale_nu, TOL_IDENTITY)
    rep.add("identity_eta", x, t, ids["eta"] / np.maximum(1.0, np.abs(ref)), TOL_IDENTITY)
    rep.add("bz_imag", x, t, ids["bz_imag"], TOL_BZ_IMAG)
    return rep


# -- transfer maps --------------------------------------------------------------

def _real_sym(expr, domain) -> HField:
    return sym_field(expr, 0, domain)


def suite_transfer(ctx: VerifyContext) -> SuiteReport:
    """u -> v -> u on a probe lattice; quadrature makes this the slow suite."""
    rep = SuiteReport("transfer")
    prob = ctx.problem
    dom = prob.domain
    p = ctx.probes(5)
    x, t = as_xt(p)
    p0 = dom.base_point
    f, finv = prob.f, prob.f.inverse()

    # W = f and W = j / f already solve the main Vekua equation
    rep.add("v_of_f", x, t, np.abs(v_from_u(f, prob, ctx.quad).at(x, t).re), TOL_TRANSFER)
    rep.add("u_of_inverse_f", x, t, np.abs(u_from_v(finv, prob, ctx.quad).at(x, t).re),
            TOL_TRANSFER)

    u, v_ref = _transfer_reference(ctx)
    if u is None:
        rep.notes.append("no transfer reference for this problem; only the trivial cases ran")
        return rep
    v = v_from_u(u, prob, ctx.quad)
    c = one_point_fit(lambda a, b: v.at(a, b).re, v_ref, lambda a, b: finv.at(a, b).re, p0)
    fitted = v.at(x, t).re + c * finv.at(x, t).re
    ref = v_ref(x, t)
    rep.add("v_reference", x, t, np.abs(fitted - ref) / np.maximum(1.0, np.abs(ref)),
            TOL_TRANSFER)
    W = combine_real(u, v)
    rep.add("vekua_W", x, t, _main_vekua(W, prob, (x, t)), TOL_VEKUA_W)
    u2 = u_from_v(v, prob, ctx.quad)
    c2 = one_point_fit(lambda a, b: u2.at(a, b).re, lambda a, b: u.at(a, b).re,
                       lambda a, b: f.at(a, b).re, p0)
    back = u2.at(x, t).re + c2 * f.at(x, t).re
    uv = u.at(x, t).re
    rep.add("roundtrip", x, t, np.abs(back - uv) / np.maximum(1.0, np.abs(uv)), TOL_ROUNDTRIP)
    return rep


def _main_vekua(W: HField, prob: KGProblem, p):
    return vekua_residual(W, main_pair(prob, prob.probes()), p)


def _transfer_reference(ctx: VerifyContext) -> tuple[HField | None, Callable | None]:
    """(u, v) with u + j v a main-Vekua solution, v known independently."""
    ex, dom = ctx.example, ctx.problem.domain
    if ex.solution == "xt" and ex.potential == "zero":
        ref = sp.lambdify((X, T), XT_ETA_V_REFERENCE, "numpy")
        return _real_sym(sp.Integer(1), dom), lambda a, b: np.asarray(ref(a, b), dtype=float)
    if ex.has_oracle(1, "1", ctx.center, ctx.base):
        # Re from the closed form; Im from the formal-power recursion
        oracle = ex.oracle(1, "1", ctx.center, ctx.base)
        power = ctx.seq.power(0, 1, ONE, ctx.center, ctx.base, ctx.quad)
        return oracle.re_part(), lambda a, b: power.at(a, b).im
    return None, None


# -- KG solution family ---------------------------------------------------------

def suite_family(ctx: VerifyContext) -> SuiteReport:
    rep = SuiteReport("family")
    x, t = as_xt(ctx.grid)
    nu, et = ctx.problem.potential, eta(ctx.problem)
    seq = ctx.seq
    for n in range(ctx.n_max + 1):
        for lab, a in A_VALUES:
            z = seq.power(0, n, a, ctx.center, ctx.base, ctx.quad, ctx.fstar_sign).field
            zn = z.numeric(ctx.fd_step)
            vals = z.at(x, t)
            pot_nu, pot_eta = nu(x, t), et(x, t)
            # scale each residual by the size of the terms it balances
            sre = np.maximum.reduce([np.ones_like(x), np.abs(vals.re), np.abs(pot_nu * vals.re)])
            sim = np.maximum.reduce([np.ones_like(x), np.abs(vals.im), np.abs(pot_eta * vals.im)])
            rep.add(f"kg_re:{n}:{lab}", x, t,
                    np.abs(kg_residual(zn.re_part(), nu, (x, t), numeric=True)) / sre,
                    TOL_FAMILY)
            rep.add(f"eta_im:{n}:{lab}", x, t,
                    np.abs(kg_residual(zn.im_part(), et, (x, t), numeric=True)) / sim,
                    TOL_FAMILY)
            rep.add(f"vekua_power:{n}:{lab}", x, t,
                    vekua_residual(zn, seq.pair(0), (x, t)) / np.maximum(1.0, vals.maxabs()),
                    TOL_VEKUA_POWER)
    # linearity in the coefficient, checked on a sub-lattice
    p = ctx.probes(4)
    px, pt = as_xt(p)
    a2 = Hyperbolic(2.0, -3.0)
    for n in range(min(ctx.n_max, 1) + 1):
        z = seq.power(0, n, a2, ctx.center, ctx.base, ctx.quad, ctx.fstar_sign).at(px, pt)
        z1 = seq.power(0, n, ONE, ctx.center, ctx.base, ctx.quad, ctx.fstar_sign).at(px, pt)
        zj = seq.power(0, n, J, ctx.center, ctx.base, ctx.quad, ctx.fstar_sign).at(px, pt)
        lin = z - (2.0 * z1 - 3.0 * zj)
        rep.add(f"linearity:{n}", px, pt, lin.maxabs() / np.maximum(1.0, z.maxabs()),
                TOL_LINEARITY)
    return rep


# coarse enough that truncation stays well above the ~1e-12 quadrature noise,
# which the second difference amplifies by 1/h^2
ORDER_STEPS = (0.08, 0.04, 0.02)


def fd_order_study(field: HField, nu, p, steps=ORDER_STEPS) -> tuple[np.ndarray, np.ndarray]:
    """Max KG residual of ``field`` under pure finite differences with second-difference
    step h, for each h in ``steps``, and the observed orders log2(r_h / r_{h/2}).

    An order is nan where both residuals are exactly zero (the field is exact).
    """
    x, t = as_xt(p)
    res = []
    for h in steps:
        fn = field.numeric(h * h)
        res.append(float(np.max(np.abs(kg_residual(fn, nu, (x, t), numeric=True)))))
    res = np.array(res)
    with np.errstate(divide="ignore", invalid="ignore"):
        orders = np.log(res[:-1] / res[1:]) / np.log(np.array(steps[:-1]) / np.array(steps[1:]))
    return res, orders


# -- pseudoanalytic calculus ----------------------------------------------------

LOOPS = (
    ((0.3, 1.0), (0.8, 1.0), (0.8, 1.6), (0.3, 1.6)),
    ((0.6, 1.2), (1.1, 1.2), (1.1, 1.9), (0.6, 1.9)),
)
PATH_START, PATH_END = (0.4, 1.2), (1.0, 1.8)
PATH_VIAS = (((1.0, 1.2),), ((0.4, 1.8),), ((0.55, 1.6), (0.9, 1.5)))


def _h(p) -> Hyperbolic:
    return Hyperbolic(float(p[0]), float(p[1]))


def suite_pseudoanalytic(ctx: VerifyContext) -> SuiteReport:
    rep = SuiteReport("pseudoanalytic")
    seq, prob = ctx.seq, ctx.problem
    p = ctx.probes(5)
    x, t = as_xt(p)
    loop_tol = 10.0 * ctx.quad.tol
    pair0 = seq.pair(0)

    rng = np.random.default_rng(0)
    w = Hyperbolic(rng.uniform(-2, 2, x.shape), rng.uniform(-2, 2, x.shape))
    d = decompose(w, pair0, (x, t))
    rec = d.phi * pair0.F.at(x, t) + d.psi * pair0.G.at(x, t)
    rep.add("reconstruction", x, t, (rec - w).maxabs() / w.norm(), TOL_RECONSTRUCT)

    for m in range(-2, 3):
        pm = seq.pair(m)
        sc = np.maximum(1.0, pm.F.at(x, t).norm() + pm.G.at(x, t).norm())
        rep.add(f"derivative_F:{m}", x, t, fg_derivative(pm.F, pm, (x, t)).maxabs() / sc,
                TOL_GENERATOR)
        rep.add(f"derivative_G:{m}", x, t, fg_derivative(pm.G, pm, (x, t)).maxabs() / sc,
                TOL_GENERATOR)
        rep.add(f"vekua_F:{m}", x, t, vekua_residual(pm.F, pm, (x, t)) / sc, TOL_GENERATOR)
        rep.add(f"vekua_G:{m}", x, t, vekua_residual(pm.G, pm, (x, t)) / sc, TOL_GENERATOR)
    for m in range(-2, 2):
        c1, c0 = char_coeffs(seq.pair(m + 1), (x, t)), char_coeffs(seq.pair(m), (x, t))
        sc = np.maximum(1.0, np.maximum(c0.B.maxabs(), c0.a.maxabs()))
        rep.add(f"successor_a:{m + 1}<-{m}", x, t, (c1.a - c0.a).maxabs() / sc, TOL_SUCCESSOR)
        rep.add(f"successor_b:{m + 1}<-{m}", x, t, (c1.b + c0.B).maxabs() / sc, TOL_SUCCESSOR)

    c, cs = char_coeffs(pair0, (x, t)), char_coeffs(adjoint_pair(pair0), (x, t))
    sc = np.maximum(1.0, np.maximum(c.b.maxabs(), c.B.maxabs()))
    adj = ((cs.a + c.a).maxabs(), (cs.A + c.A).maxabs(),
           (cs.b + c.B.conj()).maxabs(), (cs.B + c.b.conj()).maxabs())
    rep.add("adjoint_coeffs", x, t, np.maximum.reduce(adj) / sc, TOL_GENERATOR)

    # closed loops and path independence for Z_1^(0)(1, center), (F_1, G_1)-pseudoanalytic
    w1 = seq.power(1, 0, ONE, ctx.center, ctx.base, ctx.quad).field
    for k, loop in enumerate(LOOPS):
        path = Path([_h(v) for v in loop + (loop[0],)])
        val = fg_integral(w1, pair0, path, ctx.quad)
        rep.add(f"closed_loop:{k}", loop[0][0], loop[0][1], float(val.maxabs()), loop_tol)
    vals = [fg_integral(w1, pair0, Path([_h(PATH_START), *map(_h, via), _h(PATH_END)]), ctx.quad)
            for via in PATH_VIAS]
    gap = max(float((v - vals[0]).maxabs()) for v in vals[1:])
    rep.add("path_independence", PATH_END[0], PATH_END[1], gap, loop_tol)

    # antiderivative identity for w = Z^(1)(1, center): its derivative is Z_1^(0)
    z1 = seq.power(0, 1, ONE, ctx.center, ctx.base, ctx.quad).field
    z0 = _h(PATH_START)
    d0 = decompose(z1.at(z0.re, z0.im), pair0, (z0.re, z0.im))
    lhs = fg_integral_from(w1, pair0, z0, Hyperbolic(x, t), ctx.quad)
    rhs = (z1.at(x, t) - float(d0.phi) * pair0.F.at(x, t) - float(d0.psi) * pair0.G.at(x, t))
    rep.add("fg_antiderivative", x, t, (lhs - rhs).maxabs() / np.maximum(1.0, rhs.maxabs()),
            loop_tol)

    sub = ctx.probes(3)
    sx, st = as_xt(sub)
    pd = fg_derivative(z1.numeric(), pair0, (sx, st)) - w1.at(sx, st)
    rep.add("power_derivative", sx, st, pd.maxabs(), TOL_VEKUA_POWER)
    return rep


# -- Phi ------------------------------------------------------------------------

def suite_phi(ctx: VerifyContext) -> SuiteReport:
    rep = SuiteReport("phi")
    x, t = as_xt(ctx.grid)
    phi = build_phi(ctx.profile, ctx.grid)
    rep.add("phi_dzbar", x, t, phi.jet_at(x, t, 1).dzbar().v.maxabs(), TOL_PHI_DZBAR)
    ref = ctx.example.phi_oracle()
    if ref is not None:
        rep.add("phi_closed_form", x, t, (phi.at(x, t) - ref.at(x, t)).maxabs(), TOL_PHI_FORM)
    p = ctx.probes(5)
    px, pt = as_xt(p)
    seq = ctx.seq
    c0 = char_coeffs(seq.pair(0), (px, pt))
    ph = seq.phi.at(px, pt)
    rot = ph * ph.conj().inverse()
    for m in range(-2, 3):
        cm = char_coeffs(seq.pair(m), (px, pt))
        r = rot ** m
        sc = np.maximum(1.0, np.maximum(c0.b.maxabs(), c0.B.maxabs()) * r.maxabs())
        rep.add(f"sequence_a:{m}", px, pt, cm.a.maxabs() / sc, TOL_GENERATOR)
        rep.add(f"sequence_b:{m}", px, pt, (cm.b - r * c0.b).maxabs() / sc, TOL_GENERATOR)
        rep.add(f"sequence_B:{m}", px, pt, (cm.B - r * c0.B).maxabs() / sc, TOL_GENERATOR)
    return rep


# -- duplex algebra -------------------------------------------------------------

def algebra_operands(seed: int = 0, n_random: int = 10_000):
    """Rational grid k/4 (k = -10..10) squared, plus seeded random pairs in the unit box."""
    g = np.arange(-10, 11) / 4.0
    gx, gt = np.meshgrid(g, g, indexing="ij")
    grid = Hyperbolic(gx.ravel(), gt.ravel())
    rng = np.random.default_rng(seed)
    r = rng.uniform(-1.0, 1.0, size=(4, n_random))
    return grid, (Hyperbolic(r[0], r[1]), Hyperbolic(r[2], r[3]))


def algebra_residuals(z: Hyperbolic, w: Hyperbolic) -> dict:
    """Elementwise invariant residuals for operand arrays z, w of equal shape."""
    zi, wi = z.to_idempotent(), w.to_idempotent()
    prod, summ = z * w, z + w
    pi, si = prod.to_idempotent(), summ.to_idempotent()
    sc = np.maximum(1.0, z.norm() * w.norm())
    out = {
        "idempotent_mul": np.maximum(np.abs(pi.p1 - zi.p1 * wi.p1),
                                     np.abs(pi.p2 - zi.p2 * wi.p2)) / sc,
        "idempotent_add": np.maximum(np.abs(si.p1 - (zi.p1 + wi.p1)),
                                     np.abs(si.p2 - (zi.p2 + wi.p2))),
        "conj_mul": (prod.conj() - z.conj() * w.conj()).maxabs() / sc,
        "modulus_mul": np.abs(prod.modulus_sq() - z.modulus_sq() * w.modulus_sq()) / sc ** 2,
        "commutative": (z * w - w * z).maxabs(),
        "idempotent_roundtrip": np.maximum(
            (Hyperbolic(0.5 * (zi.p1 + zi.p2), 0.5 * (zi.p1 - zi.p2)) - z).maxabs(),
            (Hyperbolic(0.5 * (wi.p1 + wi.p2), 0.5 * (wi.p1 - wi.p2)) - w).maxabs()),
    }
    return out


def inverse_residuals(z: Hyperbolic, min_modulus: float = 1e-3):
    """|z inverse(z) - 1| for |modulus_sq| >= min_modulus, and the matching bound."""
    keep = np.abs(z.modulus_sq()) >= min_modulus
    zk = z[keep]
    err = (zk * zk.inverse() - 1.0).maxabs()
    bound = 8 * EPS * (1.0 + 1.0 / np.abs(zk.modulus_sq()))
    return zk, err, bound


def null_mismatch(z: Hyperbolic, tau: float = TAU_NULL):
    """Where is_null(z) disagrees with p1 p2 = 0 (within the same band).

    min(|p1|, |p2|) = | |re| - |im| |, so p1 p2 = 0 within the band is the
    statement that the smaller idempotent coordinate lies inside it.
    """
    p = z.to_idempotent()
    band = tau * np.maximum(1.0, np.maximum(np.abs(z.re), np.abs(z.im)))
    idem_null = np.minimum(np.abs(p.p1), np.abs(p.p2)) <= band
    return np.asarray(z.is_null(tau)) != idem_null


def suite_algebra(ctx: VerifyContext | None = None, seed: int = 0,
                  n_random: int = 10_000) -> SuiteReport:
    rep = SuiteReport("algebra")
    grid, (rz, rw) = algebra_operands(seed, n_random)
    n = grid.re.size
    ii, kk = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    gz, gw = grid[ii.ravel()], grid[kk.ravel()]
    res_grid = algebra_residuals(gz, gw)
    res_rand = algebra_residuals(rz, rw)
    tol = {"idempotent_mul": 4 * EPS, "idempotent_add": 4 * EPS, "conj_mul": 4 * EPS,
           "modulus_mul": 16 * EPS, "commutative": 0.0, "idempotent_roundtrip": 2 * EPS}
    for kind, vals in res_grid.items():
        # aggregate per first operand: the worst over all partners
        per = np.max(vals.reshape(n, n), axis=1)
        rep.add(f"{kind}:grid", grid.re, grid.im, per, tol[kind])
    for kind, vals in res_rand.items():
        rep.add(f"{kind}:random", rz.re, rz.im, vals, tol[kind])
    ops = Hyperbolic(np.concatenate([grid.re, rz.re, rw.re]),
                     np.concatenate([grid.im, rz.im, rw.im]))
    zk, err, bound = inverse_residuals(ops)
    rep.add("inverse_roundtrip", zk.re, zk.im, err, TOL_INVERSE)
    rep.add("inverse_bound", zk.re, zk.im, err / bound, 1.0)
    involution = (zk.inverse().inverse() - zk).maxabs()
    rep.add("inverse_involution", zk.re, zk.im, involution / bound / np.maximum(1.0, zk.norm()),
            4.0)
    mism = null_mismatch(ops)
    rep.add("null_iff_idempotent", ops.re, ops.im, mism.astype(float), 0.0)
    return rep


SUITES = {
    "factorization": suite_factorization,
    "eta": suite_eta,
    "transfer": suite_transfer,
    "family": suite_family,
    "pseudoanalytic": suite_pseudoanalytic,
    "phi": suite_phi,
    "algebra": suite_algebra,
}


def run_suite(name: str, ctx: VerifyContext) -> SuiteReport:
    if name == "all":
        rep = SuiteReport("all")
        for key in SUITES:
            rep.extend(SUITES[key](ctx))
        return rep
    if name not in SUITES:
        raise KeyError(f"unknown suite '{name}'; choose from {sorted(SUITES) + ['all']}")
    return SUITES[name](ctx)
