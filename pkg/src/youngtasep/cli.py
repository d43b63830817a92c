"""Command-line entry point: ``youngtasep <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage or parameter error.
A ``--config FILE`` of key=value lines supplies defaults; explicit flags win.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import mtasep, shape, verify, young
from .dimer import beads, kernels
from .errors import YoungTasepError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    for r in rows:
        lines.append(",".join(repr(float(v)) if isinstance(v, (float, np.floating)) else str(v) for v in r))
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ entropy


def _entropy_row(pair):
    L, N = pair
    closed = mtasep.entropy_closed(L, N)
    rho = mtasep.spectral_radius_numeric(L, N).rho
    return L, N, closed, math.log(rho), abs(closed - math.log(rho))


def cmd_entropy(a) -> int:
    if a.sweep is not None:
        if a.sweep < 2:
            raise UsageError("--sweep needs Lmax >= 2")
        pairs = [(L, N) for L in range(2, a.sweep + 1) for N in range(1, L)]
    elif a.L is not None and a.N is not None:
        pairs = [(a.L, a.N)]
    else:
        raise UsageError("give L N or --sweep LMAX")
    if a.jobs > 1 and len(pairs) > 1:
        with ProcessPoolExecutor(a.jobs) as ex:
            rows = list(ex.map(_entropy_row, pairs))
    else:
        rows = [_entropy_row(p) for p in pairs]
    _emit(_csv(["L", "N", "closed", "numeric", "abs_diff"], rows), a.out)
    return EXIT_OK if all(r[4] <= a.tol for r in rows) else EXIT_FAIL


# ------------------------------------------------------------------ verify


def cmd_verify(a) -> int:
    t0 = time.perf_counter()
    checks = verify.run_suite(a.suite)
    rep = verify.report(a.suite, checks, time.perf_counter() - t0)
    _emit(json.dumps(rep, indent=2) + "\n", a.out)
    for c in checks:
        print(c.line(), file=sys.stderr)
    return EXIT_OK if rep["passed"] else EXIT_FAIL


# ------------------------------------------------------------------ sample


def cmd_sample(a) -> int:
    k = a.kind
    if k == "plancherel":
        if a.n is None:
            raise UsageError("sample plancherel needs --n")
        tab = young.sample_plancherel_path(a.n, seed=a.seed)
        _emit(tab.to_json() + "\n", a.out)
    elif k == "skew":
        if a.shape is None:
            raise UsageError("sample skew needs --shape OUTER/INNER")
        tab = young.sample_uniform_skew_path(young.SkewShape.parse(a.shape), seed=a.seed)
        _emit(tab.to_json() + "\n", a.out)
    elif k == "chain":
        _need(a, "L", "N")
        tr = mtasep.simulate_chain(a.L, a.N, a.steps, seed=a.seed)
        rows = [(i, mtasep.state_to_bits(s, a.L)) for i, s in enumerate(tr.occupancies())]
        _emit(_csv(["step", "state"], rows), a.out)
    elif k == "frozen":
        _need(a, "L", "N")
        fs = mtasep.sample_frozen_process(a.L, a.N, a.horizon, seed=a.seed)
        _emit(fs.to_csv(), a.out)
        expected = math.exp(mtasep.entropy_closed(a.L, a.N))
        z = (fs.rate - expected) / math.sqrt(expected / a.horizon)
        print(f"events={len(fs.times)} rate={fs.rate:.6f} expected={expected:.6f} z={z:+.3f}", file=sys.stderr)
    return EXIT_OK


def _need(a, *names):
    missing = [n for n in names if getattr(a, n) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + n for n in missing))


# ------------------------------------------------------------------ kernel


def _heatmap_svg(M: np.ndarray, path: str, cell: int = 12):
    A = np.abs(M)
    top = A.max() or 1.0
    n, m = A.shape
    parts = ['<?xml version="1.0" encoding="UTF-8"?>',
             f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{m * cell}" height="{n * cell}">']
    for i in range(n):
        for j in range(m):
            g = int(255 * (1 - A[i, j] / top))
            parts.append(f'<rect x="{j * cell}" y="{i * cell}" width="{cell}" height="{cell}" fill="rgb({g},{g},255)"/>')
    parts.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(parts) + "\n")


def cmd_kernel(a) -> int:
    k = a.kind
    if k == "projection":
        _need(a, "L", "N")
        K = mtasep.projection_kernel(a.L, a.N)
        rows = [(d, K.value(d).real, K.value(d).imag) for d in range(a.L)]
        _emit(_csv(["d", "re", "im"], rows), a.out)
        if a.svg:
            _heatmap_svg(K.matrix(), a.svg)
    elif k == "sine":
        _need(a, "k", "a")
        if not 0 < a.a < 1:
            raise UsageError("--a must lie in (0, 1)")
        _emit(_csv(["k", "a", "value"], [(a.k, a.a, mtasep.sine_kernel(a.k, a.a))]), a.out)
    elif k == "finite":
        _need(a, "L", "N", "eps")
        js = [a.j] if a.j is not None else list(range(-3, 4))
        rows = []
        for j in js:
            for d in ([a.d] if a.d is not None else range(a.L)):
                v = kernels.finite_kernel_closed(a.L, a.N, a.eps, j, d)
                rows.append((j, d, v.real, v.imag))
        _emit(_csv(["j", "d", "re", "im"], rows), a.out)
    elif k == "limit":
        _need(a, "L", "N")
        ts = [a.t] if a.t is not None else [-1.0, -0.5, 0.0, 0.5, 1.0]
        ds = [a.d] if a.d is not None else range(a.L)
        rows = [(t, d, v.real, v.imag) for t in ts for d in ds for v in [kernels.limit_kernel(a.L, a.N, t, d, c=a.c)]]
        _emit(_csv(["t", "d", "re", "im"], rows), a.out)
        if a.svg:
            M = np.array([[kernels.limit_kernel(a.L, a.N, t, d, c=a.c) for d in range(a.L)] for t in ts])
            _heatmap_svg(M, a.svg)
    elif k == "beads":
        _need(a, "rho", "t", "k")
        arc = beads.beads_kernel_arc(a.rho, a.t, a.k)
        row = [a.rho, a.t, a.k, arc.real, arc.imag]
        header = ["rho", "t", "k", "arc_re", "arc_im"]
        status = EXIT_OK
        if a.rho < 0.5:
            seg = beads.beads_kernel_segment(a.rho, a.t, a.k)
            diff = abs(arc - seg)
            row += [seg, diff]
            header += ["segment", "abs_diff"]
            status = EXIT_OK if diff <= a.tol else EXIT_FAIL
        _emit(_csv(header, [row]), a.out)
        return status
    return EXIT_OK


# ------------------------------------------------------------------ shape


def cmd_shape(a) -> int:
    k = a.kind
    if k == "omega":
        if a.x is None:
            raise UsageError("shape omega needs --x")
        val = shape.omega(a.x) if a.t is None else shape.omega_tx(a.t, a.x)
        _emit(_csv(["t", "x", "omega"], [(1.0 if a.t is None else a.t, a.x, val)]), a.out)
        if a.svg:
            xs = np.linspace(-2, 2, 401)
            ts = [0.25, 0.5, 0.75, 1.0]
            shape.write_svg_curves(a.svg, xs, [shape.omega_tx(t, xs) for t in ts], [f"t={t}" for t in ts])
        return EXIT_OK
    if not a.vkls:
        raise UsageError(f"shape {k} currently evaluates the VKLS surface only; pass --vkls")
    if k == "functional":
        if a.mesh < 2:
            raise UsageError("--mesh must be at least 2")
        g = shape.vkls_shape(a.mesh)
        if a.tag == "area2":
            g = shape.to_area2(g)
        elif a.tag == "unrescaled":
            g = shape.to_unrescaled(shape.to_area2(g), a.n or 1000)
        val = shape.functional_L(g)
        half = shape.functional_L(shape.vkls_shape(max(2, a.mesh // 2))) if a.tag == "area1" else float("nan")
        rows = [(a.mesh, a.tag, val, abs(val - half))]
        _emit(_csv(["mesh", "tag", "L", "richardson_gap"], rows), a.out)
        if a.csv:
            g.to_csv(a.csv)
        if a.svg:
            g.to_svg(a.svg, [0.25, 0.5, 0.75, 1.0] if a.tag != "unrescaled" else None)
        return EXIT_OK
    if k == "residual":
        _need(a, "t", "x")
        val = shape.el_residual(shape.omega_tx, a.t, a.x, a.h)
        _emit(_csv(["t", "x", "h", "residual"], [(a.t, a.x, a.h, val)]), a.out)
        return EXIT_OK if abs(val) <= a.tol else EXIT_FAIL
    return EXIT_OK


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="youngtasep", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="key=value file merged under explicit flags")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("entropy", help="closed-form vs numeric entropy")
    e.add_argument("L", type=int, nargs="?")
    e.add_argument("N", type=int, nargs="?")
    e.add_argument("--sweep", type=int, metavar="LMAX")
    e.add_argument("--tol", type=float, default=1e-10)
    e.add_argument("--jobs", type=int, default=1)
    e.add_argument("--out")
    e.set_defaults(func=cmd_entropy)

    v = sub.add_parser("verify", help="run an invariant suite")
    v.add_argument("suite", choices=["young", "mtasep", "dimer", "shape", "all", "acceptance"])
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sample", help="deterministic samplers")
    s.add_argument("kind", choices=["plancherel", "skew", "chain", "frozen"])
    s.add_argument("--n", type=int)
    s.add_argument("--shape")
    s.add_argument("--L", type=int)
    s.add_argument("--N", type=int)
    s.add_argument("--steps", type=int, default=1000)
    s.add_argument("--horizon", type=float, default=100.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sample)

    k = sub.add_parser("kernel", help="kernel tables")
    k.add_argument("kind", choices=["projection", "sine", "finite", "limit", "beads"])
    k.add_argument("--L", type=int)
    k.add_argument("--N", type=int)
    k.add_argument("--eps", type=float)
    k.add_argument("--j", type=int)
    k.add_argument("--d", type=int)
    k.add_argument("--t", type=float)
    k.add_argument("--c", type=float)
    k.add_argument("--k", type=int)
    k.add_argument("--a", type=float)
    k.add_argument("--rho", type=float)
    k.add_argument("--tol", type=float, default=1e-8)
    k.add_argument("--svg")
    k.add_argument("--out")
    k.set_defaults(func=cmd_kernel)

    h = sub.add_parser("shape", help="limit shapes and the functional")
    h.add_argument("kind", choices=["omega", "functional", "residual"])
    h.add_argument("--vkls", action="store_true")
    h.add_argument("--mesh", type=int, default=1000)
    h.add_argument("--tag", choices=list(shape.TAGS), default="area1")
    h.add_argument("--n", type=float, help="scale of the unrescaled form")
    h.add_argument("--x", type=float)
    h.add_argument("--t", type=float)
    h.add_argument("--h", type=float, default=1e-3)
    h.add_argument("--tol", type=float, default=1e-3)
    h.add_argument("--csv")
    h.add_argument("--svg")
    h.add_argument("--out")
    h.set_defaults(func=cmd_shape)
    return p


def read_config(path: str) -> dict[str, str]:
    cfg = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected key=value")
            key, val = (x.strip() for x in line.split("=", 1))
            cfg[key] = val
    return cfg


def _config_args(parser, argv, cfg) -> list[str]:
    """Insert config entries as flags right after the subcommand so explicit flags override them."""
    sub_action = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    idx = next((i for i, t in enumerate(argv) if t in sub_action.choices), None)
    if idx is None:
        return argv
    subp = sub_action.choices[argv[idx]]
    opts = {s: act for act in subp._actions for s in act.option_strings}
    extra = []
    for key, val in cfg.items():
        flag = "--" + key
        if flag not in opts:
            raise UsageError(f"config key {key!r} is not an option of {argv[idx]!r}")
        if isinstance(opts[flag], argparse._StoreTrueAction):
            if val.lower() in ("1", "true", "yes", "on"):
                extra.append(flag)
        else:
            extra += [flag, val]
    return argv[:idx + 1] + extra + argv[idx + 1:]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        if "--config" in argv:
            i = argv.index("--config")
            if i + 1 >= len(argv):
                raise UsageError("--config needs a path")
            path = argv[i + 1]
            argv = argv[:i] + argv[i + 2:]
            argv = _config_args(parser, argv, read_config(path))
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (UsageError, OSError) as exc:
        print(f"youngtasep: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"youngtasep {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (YoungTasepError, ValueError) as exc:
        print(f"youngtasep {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
