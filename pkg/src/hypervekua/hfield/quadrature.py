"""Gauss-Legendre line integrals of hyperbolic integrands along polylines.

Every segment is integrated twice, with the base rule and with the same
rule on both halves; the two must agree to the requested tolerance or
:class:`~hypervekua.errors.QuadratureNonConvergence` is raised.  The finer
estimate is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from ..duplex import Hyperbolic
from ..errors import QuadratureNonConvergence


@dataclass(frozen=True)
class QuadratureSettings:
    nodes: int = 16
    tol: float = 1e-9
    refine: bool = True

    def to_json(self) -> dict:
        return {"rule": "gauss-legendre", "nodes": self.nodes, "tol": self.tol,
                "refinement": "halving" if self.refine else "none"}


DEFAULT_QUAD = QuadratureSettings()


@lru_cache(maxsize=None)
def unit_rule(n: int, refine: bool) -> tuple[np.ndarray, np.ndarray, int]:
    """Nodes on [0, 1] for the base rule, followed by the halved rule.

    Returns ``(nodes, weights, n)``; the first ``n`` entries are the coarse
    rule and the remainder the composite rule on [0, 1/2] and [1/2, 1].
    """
    s, w = np.polynomial.legendre.leggauss(n)
    s, w = 0.5 * (s + 1.0), 0.5 * w
    if not refine:
        return s, w, n
    nodes = np.concatenate([s, 0.5 * s, 0.5 + 0.5 * s])
    weights = np.concatenate([w, 0.5 * w, 0.5 * w])
    return nodes, weights, n


def _as_tuple(out):
    if isinstance(out, Hyperbolic):
        return (out,), True
    return tuple(out), False


def segment_integral(integrand: Callable, start: Hyperbolic, end: Hyperbolic,
                     quad: QuadratureSettings = DEFAULT_QUAD):
    """Integrate ``integrand(x, t)`` times d(zeta) along the segment start -> end.

    ``start`` and ``end`` may carry arrays (one segment per element).  The
    integrand may return a Hyperbolic or a tuple of them; the result has the
    same structure.
    """
    start, end = Hyperbolic.coerce(start), Hyperbolic.coerce(end)
    shape = np.broadcast(start.re, start.im, end.re, end.im).shape
    sx = np.broadcast_to(start.re, shape)[..., None]
    st = np.broadcast_to(start.im, shape)[..., None]
    dx = np.broadcast_to(end.re - start.re, shape)[..., None]
    dt = np.broadcast_to(end.im - start.im, shape)[..., None]
    nodes, weights, n = unit_rule(quad.nodes, quad.refine)
    vals, single = _as_tuple(integrand(sx + nodes * dx, st + nodes * dt))
    dzeta = Hyperbolic(dx[..., 0], dt[..., 0])
    results = []
    for v in vals:
        re = np.broadcast_to(v.re, shape + (nodes.size,)) * weights
        im = np.broadcast_to(v.im, shape + (nodes.size,)) * weights
        if quad.refine:
            coarse = Hyperbolic(re[..., :n].sum(-1), im[..., :n].sum(-1)) * dzeta
            fine = Hyperbolic(re[..., n:].sum(-1), im[..., n:].sum(-1)) * dzeta
            _check(coarse, fine, quad.tol)
        else:
            fine = Hyperbolic(re.sum(-1), im.sum(-1)) * dzeta
        results.append(fine)
    return results[0] if single else tuple(results)


def _check(coarse: Hyperbolic, fine: Hyperbolic, tol: float):
    err = (fine - coarse).maxabs()
    scale = np.maximum(1.0, fine.maxabs())
    bad = err > tol * scale
    if np.any(bad):
        worst = float(np.max(err / scale))
        raise QuadratureNonConvergence(
            f"halving refinement changed the integral by {worst:.3e} (tolerance {tol:g})")


@dataclass(frozen=True)
class Path:
    """A polyline given by its vertices (scalar Hyperbolic points)."""

    vertices: tuple[Hyperbolic, ...]

    def __post_init__(self):
        if len(self.vertices) < 2:
            raise ValueError("a path needs at least two vertices")

    @classmethod
    def straight(cls, a, b) -> "Path":
        return cls((Hyperbolic.coerce(a), Hyperbolic.coerce(b)))

    @classmethod
    def through(cls, points: Sequence) -> "Path":
        return cls(tuple(Hyperbolic.coerce(p) if isinstance(p, Hyperbolic) else Hyperbolic(*p)
                         for p in points))

    @property
    def start(self) -> Hyperbolic:
        return self.vertices[0]

    @property
    def end(self) -> Hyperbolic:
        return self.vertices[-1]

    def reversed(self) -> "Path":
        return Path(tuple(reversed(self.vertices)))

    def __add__(self, other: "Path") -> "Path":
        return Path(self.vertices + other.vertices[1:])

    def segments(self):
        return zip(self.vertices[:-1], self.vertices[1:])

    def sample(self, k: int = 9):
        """Points along every segment, for membership checks."""
        s = np.linspace(0.0, 1.0, k)
        xs, ts = [], []
        for a, b in self.segments():
            xs.append(a.re + s * (b.re - a.re))
            ts.append(a.im + s * (b.im - a.im))
        return np.concatenate(xs), np.concatenate(ts)


def path_integral(integrand: Callable, path: Path, quad: QuadratureSettings = DEFAULT_QUAD):
    """Sum of segment integrals of ``integrand(x, t) d(zeta)`` along ``path``.

    ``integrand`` may be an :class:`~hypervekua.hfield.field.HField` or any
    callable of (x, t).
    """
    fn = integrand.at if hasattr(integrand, "at") else integrand
    total = None
    for a, b in path.segments():
        part = segment_integral(fn, a, b, quad)
        if total is None:
            total = part
        elif isinstance(part, Hyperbolic):
            total = total + part
        else:
            total = tuple(p + q for p, q in zip(total, part))
    return total
