"""Hyperbolic-valued fields on (x, t) domains and the operators d/dz, d/dzbar.

A field is an evaluation closure ``func(x, t) -> Hyperbolic`` that accepts
numpy arrays.  Fields built from closed forms may also carry an analytic
*jet* closure returning partial derivatives up to second order; algebraic
combinations of fields propagate jets through the product/quotient rules.
Whenever a jet of the requested order is unavailable, derivatives fall back to
fourth-order central differences of the values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

import numpy as np

from ..duplex import TAU_NULL, Hyperbolic, J, E1, E2
from ..errors import BoundaryProximity

FD_STEP = 1e-4

_D1_OFFSETS = (-2, -1, 1, 2)
_D1_WEIGHTS = (1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12)
_D2_OFFSETS = (-2, -1, 0, 1, 2)
_D2_WEIGHTS = (-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12)


def as_xt(p):
    """Split a point given as Hyperbolic or (x, t) into float arrays."""
    if isinstance(p, Hyperbolic):
        return np.asarray(p.re, dtype=float), np.asarray(p.im, dtype=float)
    x, t = p
    return np.asarray(x, dtype=float), np.asarray(t, dtype=float)


class Jet:
    """Value and partial derivatives (x, t, xx, xt, tt) of a hyperbolic field.

    Missing entries are ``None``; the order is the highest complete level.
    Arithmetic mirrors :class:`~hypervekua.duplex.Hyperbolic` so the same
    expression code can run on plain values or on jets.
    """

    __slots__ = ("v", "x", "t", "xx", "xt", "tt")
    __array_ufunc__ = None

    def __init__(self, v, x=None, t=None, xx=None, xt=None, tt=None):
        self.v, self.x, self.t = v, x, t
        self.xx, self.xt, self.tt = xx, xt, tt

    @property
    def order(self) -> int:
        if self.x is None or self.t is None:
            return 0
        if self.xx is None or self.xt is None or self.tt is None:
            return 1
        return 2

    def truncate(self, order: int) -> "Jet":
        if order <= 0:
            return Jet(self.v)
        if order == 1:
            return Jet(self.v, self.x, self.t)
        return self

    @classmethod
    def constant(cls, value, order: int) -> "Jet":
        value = Hyperbolic.coerce(value)
        zero = value * 0.0
        if order <= 0:
            return cls(value)
        if order == 1:
            return cls(value, zero, zero)
        return cls(value, zero, zero, zero, zero, zero)

    # -- arithmetic -------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, Jet):
            return other
        return Jet.constant(other, self.order)

    def __add__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.v + other, self.x, self.t, self.xx, self.xt, self.tt)
        k = min(self.order, other.order)
        a, b = self.truncate(k), other.truncate(k)
        return Jet(*[None if p is None else p + q
                     for p, q in zip(a._parts(), b._parts())])

    __radd__ = __add__

    def __neg__(self):
        return Jet(*[None if p is None else -p for p in self._parts()])

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(*[None if p is None else p * other for p in self._parts()])
        k = min(self.order, other.order)
        a, b = self.truncate(k), other.truncate(k)
        if k == 0:
            return Jet(a.v * b.v)
        x = a.x * b.v + a.v * b.x
        t = a.t * b.v + a.v * b.t
        if k == 1:
            return Jet(a.v * b.v, x, t)
        xx = a.xx * b.v + 2.0 * (a.x * b.x) + a.v * b.xx
        xt = a.xt * b.v + a.x * b.t + a.t * b.x + a.v * b.xt
        tt = a.tt * b.v + 2.0 * (a.t * b.t) + a.v * b.tt
        return Jet(a.v * b.v, x, t, xx, xt, tt)

    __rmul__ = __mul__

    def conj(self) -> "Jet":
        return Jet(*[None if p is None else p.conj() for p in self._parts()])

    def inverse(self, tau: float = TAU_NULL, scale: float = 1.0) -> "Jet":
        u = self.v.inverse(tau, scale)
        k = self.order
        if k == 0:
            return Jet(u)
        u2 = u * u
        x, t = -(self.x * u2), -(self.t * u2)
        if k == 1:
            return Jet(u, x, t)
        u3 = u2 * u
        xx = 2.0 * (self.x * self.x * u3) - self.xx * u2
        xt = 2.0 * (self.x * self.t * u3) - self.xt * u2
        tt = 2.0 * (self.t * self.t * u3) - self.tt * u2
        return Jet(u, x, t, xx, xt, tt)

    def __pow__(self, n: int) -> "Jet":
        base = self if n >= 0 else self.inverse()
        result = Jet.constant(Hyperbolic(1.0, 0.0) + 0.0 * self.v, self.order)
        for _ in range(abs(int(n))):
            result = result * base
        return result

    def map_real(self, g, dg=None, d2g=None) -> "Jet":
        """Compose a real function of one variable with a real-valued jet."""
        r = np.asarray(self.v.re, dtype=float)
        k = self.order
        if dg is None:
            k = 0
        elif d2g is None:
            k = min(k, 1)
        val = Hyperbolic(g(r), 0.0 * r)
        if k == 0:
            return Jet(val)
        g1 = dg(r)
        x = Hyperbolic(g1 * self.x.re, 0.0 * r)
        t = Hyperbolic(g1 * self.t.re, 0.0 * r)
        if k == 1:
            return Jet(val, x, t)
        g2 = d2g(r)
        xx = Hyperbolic(g2 * self.x.re ** 2 + g1 * self.xx.re, 0.0 * r)
        xt = Hyperbolic(g2 * self.x.re * self.t.re + g1 * self.xt.re, 0.0 * r)
        tt = Hyperbolic(g2 * self.t.re ** 2 + g1 * self.tt.re, 0.0 * r)
        return Jet(val, x, t, xx, xt, tt)

    def re_part(self) -> "Jet":
        return Jet(*[None if p is None else Hyperbolic(p.re, 0.0 * p.re)
                     for p in self._parts()])

    def im_part(self) -> "Jet":
        return Jet(*[None if p is None else Hyperbolic(p.im, 0.0 * p.im)
                     for p in self._parts()])

    # -- Wirtinger-type operators -----------------------------------------

    def dz(self) -> "Jet":
        """Apply (d/dx + j d/dt)/2, lowering the order by one."""
        return self._wirtinger(J)

    def dzbar(self) -> "Jet":
        """Apply (d/dx - j d/dt)/2, lowering the order by one."""
        return self._wirtinger(-J)

    def _wirtinger(self, unit):
        k = self.order
        if k == 0:
            raise ValueError("jet carries no derivatives")
        v = 0.5 * (self.x + unit * self.t)
        if k == 1:
            return Jet(v)
        return Jet(v, 0.5 * (self.xx + unit * self.xt), 0.5 * (self.xt + unit * self.tt))

    def _parts(self):
        return (self.v, self.x, self.t, self.xx, self.xt, self.tt)


@dataclass(frozen=True)
class Domain:
    """Bounding rectangle plus a membership predicate and a base point.

    ``margin`` is not part of membership; it is the strip along the
    boundary that interior probe lattices and grids keep clear of, so that
    difference stencils and quadrature stay inside the open region.
    """

    x_min: float
    x_max: float
    t_min: float
    t_max: float
    membership: Callable | None = None
    base_point: tuple[float, float] | None = None
    scale: float = 1.0
    margin: float = 0.0
    wedge: bool = False
    label: str = ""

    def __post_init__(self):
        if self.base_point is None:
            object.__setattr__(self, "base_point", (0.5 * (self.x_min + self.x_max),
                                                    0.5 * (self.t_min + self.t_max)))
        x0, t0 = self.base_point
        if not bool(self.contains(x0, t0)):
            raise ValueError(f"base point {self.base_point} is not inside the domain")

    @classmethod
    def rectangle(cls, x_min, x_max, t_min, t_max, base_point=None, **kw) -> "Domain":
        return cls(x_min, x_max, t_min, t_max, None, base_point, **kw)

    @classmethod
    def time_like_wedge(cls, x_min=0.0, x_max=3.0, t_min=0.0, t_max=3.0,
                        base_point=(0.5, 1.5), margin=0.05, **kw) -> "Domain":
        """The region 0 < x < t clipped to a rectangle."""
        return cls(x_min, x_max, t_min, t_max, _wedge_membership, base_point,
                   margin=margin, wedge=True, **kw)

    def contains(self, x, t):
        x, t = np.asarray(x, dtype=float), np.asarray(t, dtype=float)
        inside = (x >= self.x_min) & (x <= self.x_max) & (t >= self.t_min) & (t <= self.t_max)
        if self.membership is not None:
            inside = inside & np.asarray(self.membership(x, t), dtype=bool)
        return inside

    def interior_mask(self, x, t):
        """Membership with the margin strip removed."""
        x, t = np.asarray(x, dtype=float), np.asarray(t, dtype=float)
        mask = self.contains(x, t)
        if self.margin > 0:
            m = self.margin
            mask &= (x >= self.x_min + m) & (x <= self.x_max - m)
            mask &= (t >= self.t_min + m) & (t <= self.t_max - m)
            if self.wedge:
                mask &= (x >= m) & (x <= t - m)
        return mask

    def lattice(self, nx: int = 5, nt: int = 5, bounds=None) -> Hyperbolic:
        """Interior probe points, row-major in x then t."""
        if bounds is None:
            fx = 0.1 * (self.x_max - self.x_min)
            ft = 0.1 * (self.t_max - self.t_min)
            bounds = (self.x_min + fx, self.x_max - fx, self.t_min + ft, self.t_max - ft)
        xs = np.linspace(bounds[0], bounds[1], nx)
        ts = np.linspace(bounds[2], bounds[3], nt)
        X, T = np.meshgrid(xs, ts, indexing="ij")
        X, T = X.ravel(), T.ravel()
        keep = self.interior_mask(X, T)
        return Hyperbolic(X[keep], T[keep])

    def to_json(self) -> dict:
        return {"x_min": self.x_min, "x_max": self.x_max, "t_min": self.t_min,
                "t_max": self.t_max, "wedge": self.wedge}


def _wedge_membership(x, t):
    return (x > 0) & (x < t)


class HField:
    """A hyperbolic-valued function of (x, t).

    Parameters
    ----------
    func
        ``func(x, t) -> Hyperbolic``, vectorised over numpy arrays.
    jet
        Optional ``jet(x, t, order) -> Jet`` giving exact partials up to
        ``max_order``.
    domain
        Used by the finite-difference fallback to refuse stencils that leave
        the region.
    fd_step
        First-derivative step relative to ``domain.scale``; second
        derivatives use ``sqrt(fd_step)``.
    """

    __slots__ = ("func", "_jet", "max_order", "domain", "fd_step", "label", "real")

    def __init__(self, func, *, jet=None, max_order: int = 0, domain: Domain | None = None,
                 fd_step: float = FD_STEP, label: str = "", real: bool = False):
        self.func = func
        self._jet = jet if max_order > 0 else None
        self.max_order = max_order if jet is not None else 0
        self.domain = domain
        self.fd_step = fd_step
        self.label = label
        self.real = real

    def __repr__(self):
        return f"HField({self.label or self.func!r}, max_order={self.max_order})"

    # -- evaluation -------------------------------------------------------

    def at(self, x, t) -> Hyperbolic:
        x, t = np.asarray(x, dtype=float), np.asarray(t, dtype=float)
        val = self.func(x, t)
        if not isinstance(val, Hyperbolic):
            val = Hyperbolic.coerce(np.asarray(val, dtype=float))
        shape = np.broadcast(x, t).shape
        if val.shape != shape:
            val = Hyperbolic(np.broadcast_to(val.re, shape) + 0.0,
                             np.broadcast_to(val.im, shape) + 0.0)
        return val

    def __call__(self, p) -> Hyperbolic:
        return self.at(*as_xt(p))

    def jet_at(self, x, t, order: int = 1, numeric: bool = False) -> Jet:
        x, t = np.asarray(x, dtype=float), np.asarray(t, dtype=float)
        if order == 0:
            return Jet(self.at(x, t))
        if not numeric and self._jet is not None and order <= self.max_order:
            return self._jet(x, t, order).truncate(order)
        return self._fd_jet(x, t, order, numeric)

    def numeric(self, fd_step: float | None = None) -> "HField":
        """Same values, finite-difference derivatives only."""
        return HField(self.func, domain=self.domain, fd_step=fd_step or self.fd_step,
                      label=self.label, real=self.real)

    def box_at(self, x, t, numeric: bool = False) -> Hyperbolic:
        """d_xx - d_tt of the field; the difference path needs only 9 values."""
        x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
        if not numeric and self._jet is not None and self.max_order >= 2:
            j = self._jet(x, t, 2)
            return j.xx - j.tt
        if not numeric and self._jet is not None and self.max_order == 1:
            j = self.jet_at(x, t, 2)
            return j.xx - j.tt
        _, h2 = self._steps()
        self._check_stencil(x, t, 2 * h2, 2 * h2)
        offs = [(k * h2, 0.0) for k in _D2_OFFSETS] + [(0.0, k * h2) for k in _D2_OFFSETS if k]
        vals = self._stack_eval(self.at, x, t, offs)
        c = _D2_WEIGHTS
        re, im = np.asarray(vals.re), np.asarray(vals.im)
        # t-axis rows skip the shared centre value (index 2)
        t_idx = (5, 6, 2, 7, 8)
        bre = sum(w * (re[i] - re[k]) for w, i, k in zip(c, range(5), t_idx))
        bim = sum(w * (im[i] - im[k]) for w, i, k in zip(c, range(5), t_idx))
        return Hyperbolic(bre / (h2 * h2), bim / (h2 * h2))

    def with_domain(self, domain: Domain | None) -> "HField":
        return HField(self.func, jet=self._jet, max_order=self.max_order, domain=domain,
                      fd_step=self.fd_step, label=self.label, real=self.real)

    # -- finite differences -----------------------------------------------

    def _steps(self):
        scale = self.domain.scale if self.domain is not None else 1.0
        return self.fd_step * scale, math.sqrt(self.fd_step) * scale

    def _check_stencil(self, x, t, hx, ht):
        if self.domain is None:
            return
        for dx in (-hx, hx):
            for dt in (-ht, 0.0, ht):
                if not np.all(self.domain.contains(x + dx, t + dt)):
                    raise BoundaryProximity(
                        f"difference stencil of half-width {max(hx, ht):g} leaves the domain")
        if not np.all(self.domain.contains(x, t + ht)) or not np.all(self.domain.contains(x, t - ht)):
            raise BoundaryProximity("difference stencil leaves the domain")

    def _stack_eval(self, fn, x, t, offsets):
        """Evaluate ``fn`` at x + dx, t + dt for every offset in one call."""
        dx = np.array([o[0] for o in offsets], dtype=float).reshape((-1,) + (1,) * x.ndim)
        dt = np.array([o[1] for o in offsets], dtype=float).reshape((-1,) + (1,) * x.ndim)
        xs, ts = x[None] + dx, t[None] + dt
        return fn(xs, ts)

    def _fd_jet(self, x, t, order: int, numeric: bool) -> Jet:
        x, t = np.broadcast_arrays(x, t)
        h1, h2 = self._steps()
        v = self.at(x, t)
        base_order = 0 if numeric or self._jet is None else min(self.max_order, order)
        if order == 1 or base_order == 0:
            self._check_stencil(x, t, 2 * h1, 2 * h1)
            offs = [(k * h1, 0.0) for k in _D1_OFFSETS] + [(0.0, k * h1) for k in _D1_OFFSETS]
            vals = self._stack_eval(self.at, x, t, offs)
            jx = _combine(vals, _D1_WEIGHTS, 0, h1)
            jt = _combine(vals, _D1_WEIGHTS, 4, h1)
            if order == 1:
                return Jet(v, jx, jt)
            self._check_stencil(x, t, 2 * h2, 2 * h2)
            offs = ([(k * h2, 0.0) for k in _D2_OFFSETS] + [(0.0, k * h2) for k in _D2_OFFSETS]
                    + [(i * h2, k * h2) for i in _D1_OFFSETS for k in _D1_OFFSETS])
            vals = self._stack_eval(self.at, x, t, offs)
            jxx = _combine(vals, _D2_WEIGHTS, 0, h2 * h2)
            jtt = _combine(vals, _D2_WEIGHTS, 5, h2 * h2)
            wts = [wi * wk for wi in _D1_WEIGHTS for wk in _D1_WEIGHTS]
            jxt = _combine(vals, wts, 10, h2 * h2)
            return Jet(v, jx, jt, jxx, jxt, jtt)
        # analytic first derivatives, differentiate them once more
        self._check_stencil(x, t, 2 * h1, 2 * h1)
        j1 = self._jet(x, t, 1)

        def first(xs, ts):
            return self._jet(xs, ts, 1)

        offs = [(k * h1, 0.0) for k in _D1_OFFSETS] + [(0.0, k * h1) for k in _D1_OFFSETS]
        jets = self._stack_eval(first, x, t, offs)
        jxx = _combine(jets.x, _D1_WEIGHTS, 0, h1)
        jxt = 0.5 * (_combine(jets.t, _D1_WEIGHTS, 0, h1) + _combine(jets.x, _D1_WEIGHTS, 4, h1))
        jtt = _combine(jets.t, _D1_WEIGHTS, 4, h1)
        return Jet(j1.v, j1.x, j1.t, jxx, jxt, jtt)

    # -- algebra ----------------------------------------------------------

    @staticmethod
    def derived(op, sources: Sequence["HField"], lower: int = 0, label: str = "",
                real: bool = False) -> "HField":
        """Field whose value is ``op(*jets)`` for jets of the sources.

        ``lower`` is how many derivative levels ``op`` consumes (1 when it
        applies d/dz or d/dzbar).  The result carries analytic jets up to
        ``min(source orders) - lower``.
        """
        sources = list(sources)
        domain = next((s.domain for s in sources if s.domain is not None), None)
        fd_step = sources[0].fd_step if sources else FD_STEP
        if lower == 0:
            def func(x, t):
                return op(*[s.at(x, t) for s in sources])
        else:
            def func(x, t):
                out = op(*[s.jet_at(x, t, lower) for s in sources])
                return out.v if isinstance(out, Jet) else out
        order = min((s.max_order for s in sources), default=2) - lower
        jet = None
        if order > 0:
            def jet(x, t, k):
                out = op(*[s.jet_at(x, t, k + lower) for s in sources])
                if not isinstance(out, Jet):
                    out = Jet.constant(out, k)
                return out
        return HField(func, jet=jet, max_order=max(order, 0), domain=domain, fd_step=fd_step,
                      label=label, real=real)

    @staticmethod
    def constant(value, domain: Domain | None = None, order: int = 2) -> "HField":
        value = Hyperbolic.coerce(value)

        def func(x, t):
            return Hyperbolic(value.re + 0.0 * x, value.im + 0.0 * x)

        def jet(x, t, k):
            return Jet.constant(func(x, t), k)

        return HField(func, jet=jet, max_order=order, domain=domain, label=str(value),
                      real=value.im == 0)

    def _coerce(self, other) -> "HField":
        if isinstance(other, HField):
            return other
        return HField.constant(other, self.domain)

    def __add__(self, other):
        return HField.derived(lambda a, b: a + b, [self, self._coerce(other)])

    __radd__ = __add__

    def __sub__(self, other):
        return HField.derived(lambda a, b: a - b, [self, self._coerce(other)])

    def __rsub__(self, other):
        return HField.derived(lambda a, b: b - a, [self, self._coerce(other)])

    def __neg__(self):
        return HField.derived(lambda a: -a, [self], real=self.real)

    def __mul__(self, other):
        if isinstance(other, HField):
            return HField.derived(lambda a, b: a * b, [self, other],
                                  real=self.real and other.real)
        return HField.derived(lambda a: a * other, [self])

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return HField.derived(lambda a: a ** n, [self], real=self.real)

    def conj(self) -> "HField":
        return HField.derived(lambda a: a.conj(), [self], real=self.real)

    def inverse(self) -> "HField":
        return HField.derived(lambda a: a.inverse(), [self], real=self.real)

    def re_part(self) -> "HField":
        def op(a):
            return a.re_part() if isinstance(a, Jet) else Hyperbolic(a.re, 0.0 * a.re)
        return HField.derived(op, [self], real=True, label=f"Re {self.label}")

    def im_part(self) -> "HField":
        def op(a):
            return a.im_part() if isinstance(a, Jet) else Hyperbolic(a.im, 0.0 * a.im)
        return HField.derived(op, [self], real=True, label=f"Im {self.label}")

    def dz_field(self) -> "HField":
        return HField.derived(lambda a: a.dz(), [self], lower=1)

    def dzbar_field(self) -> "HField":
        return HField.derived(lambda a: a.dzbar(), [self], lower=1)


def memoized(func, maxsize: int = 8):
    """Remember the last few evaluations of ``func`` keyed by the coordinate arrays."""
    import threading
    from collections import OrderedDict

    store: OrderedDict = OrderedDict()
    lock = threading.Lock()

    def wrapper(x, t):
        x, t = np.asarray(x, dtype=float), np.asarray(t, dtype=float)
        key = (x.shape, t.shape, x.tobytes(), t.tobytes())
        with lock:
            if key in store:
                store.move_to_end(key)
                return store[key]
        val = func(x, t)
        with lock:
            store[key] = val
            while len(store) > maxsize:
                store.popitem(last=False)
        return val

    return wrapper


def _combine(vals: Hyperbolic, weights, start: int, h: float) -> Hyperbolic:
    re = np.asarray(vals.re)
    im = np.asarray(vals.im)
    acc_re = sum(w * re[start + i] for i, w in enumerate(weights))
    acc_im = sum(w * im[start + i] for i, w in enumerate(weights))
    return Hyperbolic(acc_re / h, acc_im / h)


# -- public operators --------------------------------------------------------


def dz(f: HField, p) -> Hyperbolic:
    """(df/dx + j df/dt) / 2 at ``p``."""
    x, t = as_xt(p)
    return f.jet_at(x, t, 1).dz().v


def dzbar(f: HField, p) -> Hyperbolic:
    """(df/dx - j df/dt) / 2 at ``p``."""
    x, t = as_xt(p)
    return f.jet_at(x, t, 1).dzbar().v


def d_holomorphy_residual(f: HField, p):
    """Max component magnitude of df/dzbar; zero iff u_x = v_t and v_x = u_t."""
    return dzbar(f, p).maxabs()


def holomorphic_from_components(fe1, fe2, X1=(-np.inf, np.inf), X2=(-np.inf, np.inf),
                                dfe1=None, dfe2=None, d2fe1=None, d2fe2=None,
                                fd_step: float = FD_STEP) -> HField:
    """Assemble f(x + tj) = fe1(x + t) e1 + fe2(x - t) e2.

    The derivative is fe1' e1 + fe2' e2; when ``dfe1``/``dfe2`` are omitted
    they are taken by one-dimensional central differences.
    """
    dfe1 = dfe1 or _diff1(fe1, fd_step)
    dfe2 = dfe2 or _diff1(fe2, fd_step)

    def func(x, t):
        return fe1(x + t) * E1 + fe2(x - t) * E2

    def jet(x, t, order):
        w1, w2 = x + t, x - t
        v = func(x, t)
        g1, g2 = dfe1(w1) * E1, dfe2(w2) * E2
        jx, jt = g1 + g2, g1 - g2
        if order == 1 or d2fe1 is None or d2fe2 is None:
            return Jet(v, jx, jt)
        h1, h2 = d2fe1(w1) * E1, d2fe2(w2) * E2
        return Jet(v, jx, jt, h1 + h2, h1 - h2, h1 + h2)

    order = 2 if (d2fe1 is not None and d2fe2 is not None) else 1

    def membership(x, t):
        w1, w2 = x + t, x - t
        return (w1 > X1[0]) & (w1 < X1[1]) & (w2 > X2[0]) & (w2 < X2[1])

    domain = None
    if all(np.isfinite(v) for v in (*X1, *X2)):
        # image of X1 x X2 under (w1, w2) -> ((w1 + w2)/2, (w1 - w2)/2)
        xs = [0.5 * (a + b) for a in X1 for b in X2]
        ts = [0.5 * (a - b) for a in X1 for b in X2]
        base = (0.25 * (X1[0] + X1[1] + X2[0] + X2[1]), 0.25 * (X1[0] + X1[1] - X2[0] - X2[1]))
        domain = Domain(min(xs), max(xs), min(ts), max(ts), membership, base)
    return HField(func, jet=jet, max_order=order, domain=domain, fd_step=fd_step,
                  label="holomorphic")


def _diff1(g, h):
    def dg(w):
        return (g(w - 2 * h) - 8 * g(w - h) + 8 * g(w + h) - g(w + 2 * h)) / (12 * h)
    return dg
