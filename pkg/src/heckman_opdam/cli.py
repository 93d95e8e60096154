"""``ho`` command line.

Exit codes: 0 success, 2 configuration error, 3 numerical check failure.
``HO_THREADS`` caps the BLAS/FFT thread pools.
"""

from __future__ import annotations

import argparse
import contextlib
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import oracle
from .checks import bargmann_checks, run_checks, summarize
from .heat import HeatKernelEvaluator, heat_transform, kernel_eval
from .innerprod import BACKENDS, DEFAULT_GRID, QuadratureGrid, SampledFunction
from .io import dumps, read_samples_csv, write_samples_csv
from .jacobi import build_basis, JacobiBasis
from .bargmann import HolomorphicHeatFunction
from .rootsys import build_root_system, RootSystemError

EXIT_OK, EXIT_CONFIG, EXIT_CHECK = 0, 2, 3


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument parsing helpers


def _floats(text: str, what: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"{what}: expected a comma-separated list of numbers, got {text!r}") from None


def _point(text: str, rank: int, what: str) -> np.ndarray:
    vals = _floats(text, what)
    if len(vals) != rank:
        raise ConfigError(f"{what}: expected {rank} coordinate(s), got {len(vals)}")
    return np.array(vals)


def _complex_points(text: str, rank: int) -> np.ndarray:
    """``;`` separates points and ``,`` separates components; ``i`` or ``j`` marks the imaginary unit.

    In rank one a plain comma list is read as several points.
    """
    pts = []
    for chunk in text.split(";"):
        if not chunk.strip():
            continue
        try:
            comps = [complex(c.strip().replace("i", "j").replace(" ", "")) for c in chunk.split(",")]
        except ValueError:
            raise ConfigError(f"--z: cannot parse {chunk!r} as complex numbers") from None
        if rank == 1:
            pts.extend([c] for c in comps)
        elif len(comps) == rank:
            pts.append(comps)
        else:
            raise ConfigError(f"--z: expected {rank} components per point, got {len(comps)}")
    if not pts:
        raise ConfigError("--z: no points given")
    return np.array(pts, dtype=complex)


def _nonneg_time(t: float) -> float:
    if not math.isfinite(t) or t < 0:
        raise ConfigError(f"--t must be nonnegative, got {t}")
    return t


def _positive_time(t: float) -> float:
    if not math.isfinite(t) or t <= 0:
        raise ConfigError(f"--t must be positive, got {t}")
    return t


def _load_basis(path) -> JacobiBasis:
    try:
        return JacobiBasis.load(path)
    except FileNotFoundError:
        raise ConfigError(f"{path}: no such basis file") from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _basis_from_args(args) -> JacobiBasis:
    if getattr(args, "basis", None):
        return _load_basis(args.basis)
    return _build(args)


def _build(args) -> JacobiBasis:
    if not args.max_shell > 0:
        raise ConfigError("--max-shell must be positive")
    if args.grid is not None and args.grid < 2:
        raise ConfigError("--grid must be at least 2")
    try:
        rs = build_root_system(args.system, _floats(args.mult, "--mult"))
        return build_basis(rs, args.max_shell, backend=args.backend, grid=args.grid, order=args.order)
    except RootSystemError as exc:
        raise ConfigError(str(exc)) from None


def _emit(obj, out):
    text = dumps(obj)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _read_grid_samples(basis: JacobiBasis, path) -> SampledFunction:
    try:
        nodes, values = read_samples_csv(path)
    except FileNotFoundError:
        raise ConfigError(f"{path}: no such file") from None
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"{path}: {exc}") from None
    rank = basis.rs.rank
    if nodes.shape[1] != rank:
        raise ConfigError(f"{path}: {nodes.shape[1]} coordinate columns, basis has rank {rank}")
    N = round(len(nodes) ** (1.0 / rank))
    if N < 2 or N**rank != len(nodes):
        raise ConfigError(f"{path}: {len(nodes)} rows is not a full N^{rank} torus grid")
    grid = QuadratureGrid(basis.rs, N)
    if not np.allclose(nodes, grid.nodes, atol=1e-12, rtol=0):
        raise ConfigError(f"{path}: node coordinates do not match the N={N} basis grid")
    return SampledFunction(grid, values)


# ---------------------------------------------------------------------------
# commands


def cmd_basis(args) -> int:
    basis = _build(args)
    if args.out:
        basis.save(args.out)
    else:
        sys.stdout.write(dumps(basis.to_dict()))
    return EXIT_OK


def cmd_eval_poly(args) -> int:
    basis = _basis_from_args(args)
    rs = basis.rs
    lam = tuple(int(round(v)) for v in _floats(args.weight, "--weight"))
    try:
        e = basis[lam]
    except KeyError:
        raise ConfigError(f"--weight {lam} is not in the basis") from None
    x = _point(args.x, rs.rank, "--x")
    val = complex(e.R.evaluate(x))
    if args.normalization == "P":
        val *= e.value_at_zero
    _emit({"weight": list(lam), "x": x.tolist(), "normalization": args.normalization, "value": val, "theta": e.theta}, args.out)
    return EXIT_OK


def cmd_sample(args) -> int:
    basis = _load_basis(args.basis)
    grid = QuadratureGrid(basis.rs, args.grid)
    if args.weight is None:
        values = np.full(len(grid), complex(args.constant))
    else:
        lam = tuple(int(round(v)) for v in _floats(args.weight, "--weight"))
        try:
            values = grid.sample(basis[lam].R)
        except KeyError:
            raise ConfigError(f"--weight {lam} is not in the basis") from None
    write_samples_csv(args.out, grid.nodes, values)
    return EXIT_OK


def cmd_heat_kernel(args) -> int:
    basis = _load_basis(args.basis)
    t = _positive_time(args.t)
    ev = HeatKernelEvaluator(basis, tolerance=args.eps)
    x = _point(args.x, basis.rs.rank, "--x")
    y = _point(args.y, basis.rs.rank, "--y")
    kv = kernel_eval(ev, x, y, t)
    _emit(
        {"t": t, "x": x.tolist(), "y": y.tolist(), "value": kv.value.real, "imag": kv.value.imag,
         "tail_bound": kv.tail_bound, "guaranteed": kv.guaranteed, "t_min": ev.t_min, "eps": ev.tolerance},
        args.json,
    )
    return EXIT_OK


def cmd_heat_solve(args) -> int:
    basis = _load_basis(args.basis)
    t = _nonneg_time(args.t)
    f = _read_grid_samples(basis, args.init)
    ev = HeatKernelEvaluator(basis, tolerance=args.eps)
    u = heat_transform(ev, f, t)
    write_samples_csv(args.out, f.grid.nodes, u.values)
    spec = basis.transform(f)
    spectral = float(np.sum(basis.r * np.abs(spec) ** 2))
    direct = f.lp_norm(2) ** 2
    sidecar = {
        "t": t,
        "grid": f.grid.N,
        "tail_bound": ev.tail_bound(t) if t > 0 else 0.0,
        "guaranteed": bool(t == 0 or ev.is_guaranteed(t)),
        "parseval_residual": abs(spectral - direct) / max(direct, 1e-300),
        "invariance_defect": f.invariance_defect(),
    }
    Path(str(args.out) + ".json").write_text(dumps(sidecar))
    return EXIT_OK


def cmd_sb(args) -> int:
    basis = _load_basis(args.basis)
    t = _positive_time(args.t)
    f = _read_grid_samples(basis, args.init)
    Z = _complex_points(args.z, basis.rs.rank)
    F = HolomorphicHeatFunction.from_function(basis, f, t)
    vals = F(Z)
    _emit({"t": t, "z": [list(map(complex, p)) for p in Z], "value": [complex(v) for v in vals]}, args.json)
    return EXIT_OK


def _report(results, out) -> int:
    summary = summarize(results)
    _emit(summary, out)
    return EXIT_OK if summary["passed"] else EXIT_CHECK


def cmd_sb_check(args) -> int:
    basis = _load_basis(args.basis)
    ev = HeatKernelEvaluator(basis, tolerance=args.eps)
    return _report(bargmann_checks(ev, t=_positive_time(args.t)), args.json)


def cmd_check(args) -> int:
    basis = _basis_from_args(args)
    times = tuple(_positive_time(v) for v in _floats(args.times, "--times"))
    grid = args.grid if args.grid is not None else DEFAULT_GRID
    results = run_checks(basis, eps=args.eps, t=_positive_time(args.t), grid=grid, times=times)
    return _report(results, args.json)


def cmd_oracle(args) -> int:
    u = np.array(_floats(args.u, "--u")) if getattr(args, "u", None) else None
    kind = args.oracle
    if kind == "gegenbauer":
        vals = oracle.gegenbauer_normalized(args.mu, args.n, u)
    elif kind == "chebyshev-u":
        vals = oracle.chebyshev_u_normalized(args.n, u)
    elif kind == "jacobi":
        vals = oracle.jacobi_normalized(args.a, args.b, args.n, u)
    elif kind == "circle-kernel":
        x, y = np.array(_floats(args.x, "--x")), np.array(_floats(args.y, "--y"))
        if x.shape != y.shape:
            raise ConfigError("--x and --y must have the same length")
        vals = oracle.circle_heat_kernel(x, y, _positive_time(args.t), args.period, args.method)
    elif kind == "mass":
        vals = np.array([oracle.wallis_mass(args.m) if args.m_long is None else oracle.bc1_mass(args.m, args.m_long)])
    else:  # pragma: no cover - argparse restricts choices
        raise ConfigError(f"unknown oracle {kind!r}")
    _emit({"oracle": kind, "value": np.atleast_1d(vals).tolist()}, None)
    return EXIT_OK


# ---------------------------------------------------------------------------


def _system_flags(p, max_shell=20.0):
    p.add_argument("--system", default="A1", help="A1, BC1, A2, B2, G2 or BC2")
    p.add_argument("--mult", default="2", help="multiplicities, comma list per length class")
    p.add_argument("--max-shell", type=float, default=max_shell)
    p.add_argument("--backend", default="auto", choices=("auto",) + BACKENDS)
    p.add_argument("--grid", type=int, default=None, help="torus grid size N")
    p.add_argument("--order", type=int, default=None, help="alcove Gauss rule order")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ho", description="Jacobi polynomials, heat kernels and holomorphic heat transforms on alcoves.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basis", help="build a Jacobi basis and write it as JSON")
    _system_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("eval-poly", help="evaluate R_lam or P_lam at a point")
    p.add_argument("--basis", required=True)
    p.add_argument("--weight", required=True, help="integer coordinates of lam")
    p.add_argument("--x", required=True)
    p.add_argument("--normalization", choices=("R", "P"), default="R")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval_poly)

    p = sub.add_parser("sample", help="write constant or R_lam samples on the N-point torus grid as CSV")
    p.add_argument("--basis", required=True)
    p.add_argument("--grid", type=int, default=64)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--weight")
    g.add_argument("--constant", type=float, default=1.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("heat-kernel", help="Gamma_m(x, y, t) with its tail bound")
    p.add_argument("--basis", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--eps", type=float, default=1e-8)
    p.add_argument("--json", dest="json", metavar="OUT")
    p.set_defaults(func=cmd_heat_kernel)

    p = sub.add_parser("heat-solve", help="apply H(t) to grid samples")
    p.add_argument("--basis", required=True)
    p.add_argument("--init", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--eps", type=float, default=1e-8)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_heat_solve)

    p = sub.add_parser("sb", help="holomorphic heat transform at complex points")
    p.add_argument("--basis", required=True)
    p.add_argument("--init", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--z", required=True)
    p.add_argument("--json", dest="json", metavar="OUT")
    p.set_defaults(func=cmd_sb)

    p = sub.add_parser("sb-check", help="unitarity and reproducing-kernel checks")
    p.add_argument("--basis", required=True)
    p.add_argument("--t", type=float, default=0.2)
    p.add_argument("--eps", type=float, default=1e-8)
    p.add_argument("--json", dest="json", metavar="OUT")
    p.set_defaults(func=cmd_sb_check)

    p = sub.add_parser("check", help="run all invariant suites and report JSON")
    _system_flags(p)
    p.add_argument("--basis", help="use a saved basis instead of building one")
    p.add_argument("--eps", type=float, default=1e-8)
    p.add_argument("--t", type=float, default=0.2, help="time for the transform checks")
    p.add_argument("--times", default="0.05,0.2,1", help="times for the heat-kernel checks")
    p.add_argument("--json", dest="json", metavar="OUT")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("oracle", help="classical reference values")
    osub = p.add_subparsers(dest="oracle", required=True)
    o = osub.add_parser("gegenbauer")
    o.add_argument("--mu", type=float, required=True)
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--u", required=True)
    o = osub.add_parser("chebyshev-u")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--u", required=True, help="angles")
    o = osub.add_parser("jacobi")
    o.add_argument("--a", type=float, required=True)
    o.add_argument("--b", type=float, required=True)
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--u", required=True)
    o = osub.add_parser("circle-kernel")
    o.add_argument("--x", required=True)
    o.add_argument("--y", required=True)
    o.add_argument("--t", type=float, required=True)
    o.add_argument("--period", type=float, default=2 * math.pi)
    o.add_argument("--method", choices=("theta", "images"), default="theta")
    o = osub.add_parser("mass")
    o.add_argument("--m", type=float, required=True)
    o.add_argument("--m-long", type=float, default=None)
    p.set_defaults(func=cmd_oracle)
    return ap


def _limit_threads():
    n = os.environ.get("HO_THREADS")
    if not n:
        return None
    try:
        n = int(n)
    except ValueError:
        raise ConfigError(f"HO_THREADS must be an integer, got {n!r}") from None
    if n < 1:
        raise ConfigError("HO_THREADS must be at least 1")
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=n)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        with _limit_threads() or contextlib.nullcontext():
            return args.func(args)
    except ConfigError as exc:
        print(f"ho: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, KeyError) as exc:
        print(f"ho: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
