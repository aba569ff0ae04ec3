"""Command line driver: ``hypervekua build | verify | table``.

Exit codes: 0 success, 2 usage or configuration error, 3 construction error
(the library error class is printed on stderr), 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import catalog, export
from .catalog import ExampleSpec
from .duplex import ONE, Hyperbolic, J
from .errors import HyperVekuaError
from .genseq import RhoProfile
from .hfield import QuadratureSettings, as_xt
from .kleingordon import KGProblem, eta, kg_residual
from .pseudoanalytic import vekua_residual
from .verify import SUITES, FAMILY_FD_STEP, VerifyContext, run_suite

EXIT_OK, EXIT_USAGE, EXIT_CONSTRUCTION, EXIT_VERIFY = 0, 2, 3, 4
DEFAULT_BOUNDS = (0.2, 1.8, 0.4, 2.0)
WEDGE_GAP = 0.05
SELF_CHECK_TOL = 1e-8
A_LABELS = {"1": ONE, "j": J}


class ConfigError(ValueError):
    """Bad command line or problem file; maps to exit code 2."""


class SelfCheckFailed(HyperVekuaError):
    """A catalog particular solution does not solve its equation."""


@dataclass(eq=False)
class RunConfig:
    command: str
    example: ExampleSpec
    problem: KGProblem
    profile: RhoProfile
    center: tuple[float, float]
    base: tuple[float, float]
    grid: Hyperbolic
    grid_shape: tuple[int, int]
    bounds: tuple[float, float, float, float]
    quad: QuadratureSettings
    out: Path
    n_max: int = 2
    fstar_sign: float = 1.0
    suite: str = "all"


# -- parsing --------------------------------------------------------------------

def parse_point(text: str) -> tuple[float, float]:
    """``"x,t"`` or a hyperbolic literal such as ``"0+4j"``."""
    try:
        if "," in text:
            a, b = text.split(",")
            return (float(a), float(b))
        z = Hyperbolic.parse(text)
        return (float(z.re), float(z.im))
    except ValueError as exc:
        raise ConfigError(f"cannot read point {text!r}; expected x,t") from exc


def parse_grid(text: str) -> tuple[int, int]:
    try:
        nx, nt = (int(v) for v in text.lower().split("x"))
    except ValueError as exc:
        raise ConfigError(f"cannot read grid {text!r}; expected NXxNT") from exc
    if nx < 1 or nt < 1:
        raise ConfigError("grid sizes must be positive")
    return nx, nt


def parse_bounds(text: str) -> tuple[float, float, float, float]:
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"cannot read bounds {text!r}") from exc
    if len(vals) != 4 or vals[0] > vals[1] or vals[2] > vals[3]:
        raise ConfigError("bounds must be x_min,x_max,t_min,t_max")
    return vals


def build_grid(problem: KGProblem, shape, bounds) -> Hyperbolic:
    """Row-major (x outer, t inner) grid, clipped to x < t - gap for wedge domains."""
    nx, nt = shape
    xs = np.linspace(bounds[0], bounds[1], nx)
    ts = np.linspace(bounds[2], bounds[3], nt)
    X, T = np.meshgrid(xs, ts, indexing="ij")
    X, T = X.ravel(), T.ravel()
    dom = problem.domain
    if dom.wedge:
        keep = X < T - WEDGE_GAP
        X, T = X[keep], T[keep]
    if X.size == 0:
        raise ConfigError("the grid has no points inside the domain")
    if not np.all(dom.interior_mask(X, T)):
        raise ConfigError("the grid leaves the domain minus its margin strip")
    return Hyperbolic(X, T)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--example", help=f"catalog entry: {', '.join(sorted(catalog.EXAMPLES))}")
    src.add_argument("--problem", help="JSON problem description")
    common.add_argument("--n-max", type=int, default=None, dest="n_max")
    common.add_argument("--center", help="center z0 as x,t")
    common.add_argument("--base", help="integration base point as x,t")
    common.add_argument("--grid", default="21x21", help="NXxNT (default 21x21)")
    common.add_argument("--bounds", default=None, help="x_min,x_max,t_min,t_max of the grid")
    common.add_argument("--quad-tol", type=float, default=1e-9, dest="quad_tol")
    common.add_argument("--quad-nodes", type=int, default=16, dest="quad_nodes")
    common.add_argument("--adjoint-sign", type=float, choices=(1.0, -1.0), default=1.0,
                        dest="adjoint_sign", help="sign convention of F* (default +1)")
    common.add_argument("--out", default="out", help="output directory")

    p = argparse.ArgumentParser(prog="hypervekua",
                                description="Formal powers and Klein-Gordon solution families.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common], help="construct formal powers and export CSV")
    v = sub.add_parser("verify", parents=[common], help="run residual suites")
    v.add_argument("--suite", default="all", choices=sorted(SUITES) + ["all"])
    t = sub.add_parser("table", parents=[common], help="compare a build against closed forms")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--a", choices=sorted(A_LABELS), required=True)
    return p


def make_config(args) -> RunConfig:
    if args.problem:
        try:
            doc = json.loads(Path(args.problem).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read problem file: {exc}") from exc
        try:
            example, problem, profile = catalog.problem_from_json(doc)
        except (ValueError, KeyError) as exc:
            raise ConfigError(str(exc)) from exc
    else:
        name = args.example or "saddle"
        try:
            example = catalog.get_example(name)
        except KeyError as exc:
            raise ConfigError(exc.args[0]) from exc
        problem = catalog.cached_problem(name)
        profile = example.profile(problem.domain)
    if args.n_max is not None and args.n_max < 0:
        raise ConfigError("--n-max must be non-negative")
    if args.quad_tol <= 0 or args.quad_nodes < 1:
        raise ConfigError("quadrature settings must be positive")
    shape = parse_grid(args.grid)
    bounds = parse_bounds(args.bounds) if args.bounds else DEFAULT_BOUNDS
    return RunConfig(
        command=args.command,
        example=example,
        problem=problem,
        profile=profile,
        center=parse_point(args.center) if args.center else tuple(example.center),
        base=parse_point(args.base) if args.base else tuple(example.base),
        grid=build_grid(problem, shape, bounds),
        grid_shape=shape,
        bounds=bounds,
        quad=QuadratureSettings(nodes=args.quad_nodes, tol=args.quad_tol),
        out=Path(args.out),
        n_max=args.n_max if args.n_max is not None else 2,
        fstar_sign=args.adjoint_sign,
        suite=getattr(args, "suite", "all"),
    )


# -- commands -------------------------------------------------------------------

def _stats(values) -> dict:
    v = np.asarray(values, dtype=float)
    return {"max": float(np.max(v)), "mean": float(np.mean(v))}


def _config_json(cfg: RunConfig) -> dict:
    return {
        "example": cfg.example.name,
        "potential": cfg.example.potential,
        "solution": cfg.example.solution,
        "domain": cfg.problem.domain.to_json(),
        "base_point": list(cfg.problem.domain.base_point),
        "center": list(cfg.center),
        "base": list(cfg.base),
        "grid": {"shape": list(cfg.grid_shape), "bounds": list(cfg.bounds),
                 "points": int(np.size(cfg.grid.re))},
        "quadrature": cfg.quad.to_json(),
        "adjoint_sign": cfg.fstar_sign,
    }


def cmd_build(cfg: RunConfig) -> int:
    seq = cfg.example.sequence(cfg.problem, cfg.profile)
    x, t = as_xt(cfg.grid)
    nu, et = cfg.problem.potential, eta(cfg.problem)
    meta = _config_json(cfg)
    meta["n_max"] = cfg.n_max
    meta["powers"] = {}
    for n in range(cfg.n_max + 1):
        for lab, a in A_LABELS.items():
            fp = seq.power(0, n, a, cfg.center, cfg.base, cfg.quad, cfg.fstar_sign)
            vals = fp.at(x, t)
            name = f"powers_{n}_{lab}"
            export.write_powers(cfg.out / f"{name}.csv", x, t, vals, n, lab)
            zn = fp.field.numeric(FAMILY_FD_STEP)
            side = fp.metadata()
            side["center_text"], side["base_text"] = side.pop("center"), side.pop("base")
            side.update({
                "a_label": lab,
                "residuals": {
                    "vekua": _stats(vekua_residual(zn, seq.pair(0), (x, t))),
                    "kg_re": _stats(np.abs(kg_residual(zn.re_part(), nu, (x, t), numeric=True))),
                    "eta_im": _stats(np.abs(kg_residual(zn.im_part(), et, (x, t), numeric=True))),
                },
            })
            if fp.lam is not None:
                side["lambda"], side["mu"] = fp.lam, fp.mu
            export.write_json(cfg.out / f"{name}.json", {**side, **_config_json(cfg)})
            meta["powers"][f"{n}_{lab}"] = {"file": f"{name}.csv",
                                           "residuals": side["residuals"]}
            print(f"{name}.csv  vekua max {side['residuals']['vekua']['max']:.3e}")
    export.write_json(cfg.out / "metadata.json", meta)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    ctx = VerifyContext(cfg.example, cfg.problem, cfg.profile, cfg.grid, cfg.center, cfg.base,
                        n_max=cfg.n_max, quad=cfg.quad, fstar_sign=cfg.fstar_sign)
    rep = run_suite(cfg.suite, ctx)
    export.write_residual_report(cfg.out / f"residuals_{cfg.suite}.csv", rep.rows)
    summary = {**_config_json(cfg), "suite": cfg.suite,
               "checks": [{"kind": c.kind, "max": c.value, "tol": c.tol, "passed": c.passed}
                          for c in rep.checks],
               "failures": len(rep.failures), "notes": rep.notes}
    export.write_json(cfg.out / f"verify_{cfg.suite}.json", summary)
    for c in rep.checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.kind:32s} max {c.value:.3e}  tol {c.tol:.1e}")
    for note in rep.notes:
        print(f"note: {note}")
    if rep.failures:
        print(f"{len(rep.failures)} of {len(rep.checks)} checks failed", file=sys.stderr)
        return EXIT_VERIFY
    print(f"all {len(rep.checks)} checks passed")
    return EXIT_OK


def cmd_table(cfg: RunConfig, n: int, a_label: str) -> int:
    src = cfg.out / f"powers_{n}_{a_label}.csv"
    side = cfg.out / f"powers_{n}_{a_label}.json"
    if not src.exists() or not side.exists():
        raise ConfigError(f"{src} not found; run build first")
    info = export.read_json(side)
    if info["example"] != cfg.example.name:
        raise ConfigError(f"build directory holds '{info['example']}', not '{cfg.example.name}'")
    center, base = tuple(info["center"]), tuple(info["base"])
    oracle = cfg.example.oracle(n, a_label, center, base)
    data = export.read_csv(src)
    x, t = data["x"], data["t"]
    ref = oracle.at(x, t).re
    out = cfg.out / f"table_{n}_{a_label}.csv"
    export.write_table(out, x, t, data["re"], ref)
    abs_err, rel = export.relative_errors(data["re"], ref)
    print(f"{out.name}: {x.size} rows, max abs_err {abs_err.max():.3e}, max rel_err {rel.max():.3e}")
    return EXIT_OK


def self_check() -> None:
    worst = catalog.self_check()
    bad = {k: v for k, v in worst.items() if not v <= SELF_CHECK_TOL}
    if bad:
        raise SelfCheckFailed(f"catalog particular solutions fail the equation: {bad}")


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        self_check()
        cfg = make_config(args)
        if args.command == "build":
            return cmd_build(cfg)
        if args.command == "verify":
            return cmd_verify(cfg)
        return cmd_table(cfg, args.n, args.a)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HyperVekuaError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION


if __name__ == "__main__":
    sys.exit(main())
