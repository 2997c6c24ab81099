"""Command-line front end.

Every subcommand prints a JSON report on stdout and, with ``--out``, writes the
requested artifacts (``json``, ``csv``, ``svg``) into that directory.  Exit
status: 0 on success, 1 for usage or input errors, 2 when a computation fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import warnings
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import amoeba, degeneration, ronkin, svg, tropical
from .laurent import Exponent, LaurentPolynomial, ParseError, format_laurent, parse_laurent
from .parallel import set_threads
from .polytope import classify_regime, is_maximally_sparse, newton_polytope

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_FAILURE = 0, 1, 2
FORMATS = ("json", "csv", "svg")

log = logging.getLogger("amoebakit")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ----------------------------------------------------------------------------
# argument value parsers


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.replace(" ", "").split(",") if v]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.replace(" ", "").split(",") if v]


def _points(text: str) -> list[list[float]]:
    return [_floats(p) for p in text.split(";") if p.strip()]


def _resolution(text: str) -> tuple[int, int]:
    vals = _ints(text.lower().replace("x", ","))
    if len(vals) == 1:
        vals *= 2
    if len(vals) != 2 or min(vals) < 8:
        raise argparse.ArgumentTypeError(f"bad resolution {text!r}")
    return vals[0], vals[1]


def _box(text: str) -> amoeba.Box2D:
    vals = _floats(text)
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("box needs x1min,x2min,x1max,x2max")
    try:
        return amoeba.Box2D(tuple(vals[:2]), tuple(vals[2:]))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _formats(text: str) -> tuple[str, ...]:
    out = tuple(dict.fromkeys(v.strip().lower() for v in text.split(",") if v.strip()))
    bad = [v for v in out if v not in FORMATS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown format(s) {bad}; choose from {FORMATS}")
    return out


def _parse_weights(text: str, f: LaurentPolynomial | None) -> dict[Exponent, float]:
    """``0,1,1`` follows the sorted support; ``0,0=0;1,0=1`` names exponents explicitly."""
    if "=" in text:
        out = {}
        for item in text.split(";"):
            if not item.strip():
                continue
            key, val = item.split("=")
            out[tuple(_ints(key))] = float(val)
        return out
    vals = _floats(text)
    if f is None:
        raise UsageError("positional weights need --poly to fix the support order")
    if len(vals) != len(f):
        raise UsageError(f"{len(vals)} weights for {len(f)} support points {list(f.support)}")
    return dict(zip(f.support, vals))


# ----------------------------------------------------------------------------
# parser and config file


COMMANDS = (
    "info", "subdivision", "spine", "raster", "ronkin", "solid-check", "bound-check",
    "sweep-convergence", "sweep-solid", "sweep-subdivision", "phi-bound", "threshold",
)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="amoebakit",
        description="Amoebas, Ronkin functions and tropical degenerations of Laurent polynomials.",
        epilog="Weights: '0,1,1' (sorted support order, as printed by info) or '0,0=0;1,0=1'. "
        "Points: '1,2;3,4'. Exit codes: 0 ok, 1 usage or input error, 2 computation failed.",
    )
    p.add_argument("command", choices=COMMANDS, help="what to compute")
    g = p.add_argument_group("input")
    g.add_argument("-f", "--poly", help="Laurent polynomial, e.g. '1 + z1 + z2^-1'")
    g.add_argument("-n", "--dim", type=int, default=2, help="number of variables (default 2)")
    g.add_argument("--weights", help="lifting / degeneration weights nu on the support")
    g = p.add_argument_group("raster")
    g.add_argument("--box", type=_box, help="log-space window x1min,x2min,x1max,x2max")
    g.add_argument("--resolution", type=_resolution, default=(512, 512), help="W or WxH (default 512)")
    g.add_argument("--fibers", type=int, default=64, help="fibres per raster line (default 64)")
    g = p.add_argument_group("quadrature")
    g.add_argument("--scheme", choices=("auto", "tensor", "mc"), default="auto",
                   help="tensor grid, Monte Carlo, or by dimension (default)")
    g.add_argument("--nodes", type=int, default=256, help="tensor nodes per angle (default 256)")
    g.add_argument("--samples", type=int, default=100_000, help="Monte Carlo samples (default 1e5)")
    g.add_argument("--seed", type=int, default=0, help="seed for every random choice (default 0)")
    g.add_argument("--h", type=float, default=ronkin.DEFAULT_STEP, help="gradient step (default 0.05)")
    g = p.add_argument_group("degeneration")
    g.add_argument("--t-list", type=_floats, help="comma-separated t values in (0, 1/e], decreasing")
    g.add_argument("--k-list", type=_floats, help="use t = e^-k for these k (ignored if --t-list)")
    g.add_argument("--x-grid", type=_floats, default=[-20.0, 20.0, 41.0],
                   help="bound-check grid lo,hi,count per axis (default -20,20,41)")
    g = p.add_argument_group("points and directions")
    g.add_argument("--x", type=_points, help="evaluation point(s) for ronkin")
    g.add_argument("--alpha", type=_ints, help="distinguished exponent (phi-bound, threshold)")
    g.add_argument("--x0", type=_floats, help="base point for threshold")
    g.add_argument("--v", type=_floats, help="direction for threshold")
    g.add_argument("--t", type=float, help="single t for threshold")
    g.add_argument("--trials", type=int, default=256, help="phi-bound search trials (default 256)")
    g = p.add_argument_group("output")
    g.add_argument("--out", type=Path, help="directory for artifacts")
    g.add_argument("--formats", type=_formats, default=("json",), help="subset of json,csv,svg")
    g.add_argument("--frames", action="store_true", help="sweeps: also write one SVG per t")
    g.add_argument("--threads", type=int, help="worker cap (output does not depend on it)")
    g.add_argument("--config", type=Path, help="file of 'key = value' lines; flags override it")
    g.add_argument("-q", "--quiet", action="store_true", help="no progress lines on stderr")
    return p


def _read_config(path: Path, parser: argparse.ArgumentParser) -> dict:
    actions = {a.dest: a for a in parser._actions}
    out = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        dest = key.lstrip("-").replace("-", "_")
        act = actions.get(dest)
        if act is None or dest in ("help", "config"):
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        if act.nargs == 0:
            out[dest] = val.lower() in ("1", "true", "yes", "on")
            continue
        try:
            out[dest] = act.type(val) if act.type else val
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise UsageError(f"{path}:{lineno}: {exc}") from None
        if act.choices and out[dest] not in act.choices:
            raise UsageError(f"{path}:{lineno}: {key} must be one of {list(act.choices)}")
    return out


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config is not None:
        parser.set_defaults(**_read_config(args.config, parser))
        args = parser.parse_args(argv)
    return args


# ----------------------------------------------------------------------------
# shared helpers


def _poly(args) -> LaurentPolynomial:
    if not args.poly:
        raise UsageError(f"{args.command} needs --poly")
    return parse_laurent(args.poly, args.dim)


def _quadrature(args, dim: int) -> ronkin.QuadratureSpec:
    if args.scheme == "auto":
        base = ronkin.QuadratureSpec.default_for(dim)
        return ronkin.QuadratureSpec(base.scheme, args.nodes, args.samples, args.seed)
    scheme = ronkin.Scheme.TENSOR_GRID if args.scheme == "tensor" else ronkin.Scheme.MONTE_CARLO
    return ronkin.QuadratureSpec(scheme, args.nodes, args.samples, args.seed)


def _t_list(args, default_k: Sequence[float]) -> list[float]:
    if args.t_list:
        return list(args.t_list)
    return [math.exp(-k) for k in (args.k_list or default_k)]


def _weights(args, f: LaurentPolynomial | None, required: bool = True):
    if not args.weights:
        if required:
            raise UsageError(f"{args.command} needs --weights")
        return None
    return _parse_weights(args.weights, f)


def _need(args, *names: str) -> None:
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} needs " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _require_dim2(f: LaurentPolynomial, what: str) -> None:
    if f.dim != 2:
        raise UsageError(f"{what} works in the plane only (got --dim {f.dim})")


def _csv_text(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _exp(e) -> str:
    return " ".join(str(c) for c in e)


class Result:
    """A report body plus lazily rendered artifacts."""

    def __init__(self, body: dict):
        self.body = body
        self.csv: Callable[[], str] | None = None
        self.svg: Callable[[], str] | None = None
        self.frames: Callable[[], list[tuple[str, str]]] | None = None


# ----------------------------------------------------------------------------
# commands


def cmd_info(args) -> Result:
    f = _poly(args)
    poly = newton_polytope(f)
    body = {
        "polynomial": format_laurent(f),
        "dim": f.dim,
        "support": [list(e) for e in f.support],
        "terms": len(f),
        "newton_polytope": poly.to_dict(),
        "vertex_count": len(poly.vertices),
        "maximally_sparse": is_maximally_sparse(f),
        "regime": classify_regime(f).value,
    }
    res = Result(body)
    if f.dim == 2:
        pts = body["newton_polytope"]["lattice_points"]
        res.csv = lambda: _csv_text(["a1", "a2", "class", "in_support"],
                                    [[*p["point"], p["class"], tuple(p["point"]) in f.support] for p in pts])
    return res


def _lifting(args, f: LaurentPolynomial) -> tuple[tropical.Lifting, str]:
    w = _weights(args, f, required=False)
    if w is None:
        return tropical.Lifting.from_coefficients(f), "coefficients"
    return tropical.Lifting({tuple(k): v for k, v in w.items()}), "weights"


def cmd_subdivision(args) -> Result:
    f = _poly(args)
    _require_dim2(f, "subdivision")
    L, source = _lifting(args, f)
    sub = tropical.regular_subdivision(L)
    gamma = tropical.corner_locus_2d(L, sub)
    points = []
    for alpha in L.points:
        cert = tropical.redundancy_criterion(L, alpha)
        points.append({
            "point": list(alpha),
            "height": float(L[alpha]),
            "subdivision_vertex": tropical.is_subdivision_vertex(L, alpha),
            "redundancy_certificate": cert.to_dict() if cert else None,
        })
    body = {"lifting_source": source, "lifting": L.to_dict(), "subdivision": sub.to_dict(),
            "corner_locus": gamma.to_dict(), "points": points}
    res = Result(body)
    res.csv = lambda: _csv_text(["a1", "a2", "height", "subdivision_vertex", "redundant"],
                                [[*p["point"], p["height"], p["subdivision_vertex"],
                                  p["redundancy_certificate"] is not None] for p in points])
    res.svg = lambda: svg.subdivision_svg(sub, title="regular subdivision")
    return res


def _complex_csv(gamma: tropical.PolyhedralComplex) -> str:
    rows = [["vertex", i, x, y, "", ""] for i, (x, y) in enumerate(gamma.vertices)]
    rows += [["edge", a, b, "", "", w] for (a, b), w in zip(gamma.edges, gamma.edge_weights)]
    rows += [["ray", v, "", d[0], d[1], w] for (v, d), w in zip(gamma.rays, gamma.ray_weights)]
    return _csv_text(["kind", "index", "a", "b", "c", "weight"], rows)


def cmd_spine(args) -> Result:
    f = _poly(args)
    _require_dim2(f, "spine")
    if args.weights:
        L, _ = _lifting(args, f)
        gamma = tropical.corner_locus_2d(L)
        res = Result({"source": "weights", "lifting": L.to_dict(), "spine": gamma.to_dict()})
        res.csv = lambda: _complex_csv(gamma)
        res.svg = lambda: svg.complex_svg(gamma, args.box, title="corner locus")
        return res
    q = _quadrature(args, 2)
    log.info("spine: raster %dx%d, %d fibres", *args.resolution, args.fibers)
    est = degeneration.spine_subdivision(f, args.resolution, args.fibers, q, args.box)
    body = {"source": "ronkin", "quadrature": q.to_dict(), **est.to_dict()}
    res = Result(body)
    res.csv = lambda: _complex_csv(est.complex)
    res.svg = lambda: svg.raster_svg(est.raster, est.components, est.complex, title="amoeba and spine")
    return res


def _raster_csv(r: amoeba.AmoebaRaster) -> str:
    xs, ys = r.centers()
    names = [_exp(e) for e in r.support]
    rows = []
    for i in range(r.resolution[0]):
        for j in range(r.resolution[1]):
            c = int(r.certificates[i, j])
            rows.append([i, j, float(xs[i]), float(ys[j]), amoeba.Verdict(int(r.verdicts[i, j])).name,
                         int(r.samples[i, j]), names[c] if c >= 0 else ""])
    return _csv_text(["i", "j", "x1", "x2", "verdict", "samples", "certificate"], rows)


def _raster_summary(r: amoeba.AmoebaRaster) -> dict:
    return {"box": r.box.to_dict(), "resolution": list(r.resolution), "fibers_per_line": r.fibers,
            "failed_fibers": r.failed_fibers, "verdict_counts": r.counts()}


def cmd_raster(args) -> Result:
    f = _poly(args)
    _require_dim2(f, "raster")
    box = args.box or amoeba.default_box(f)
    log.info("raster: %dx%d over %s, %d fibres", *args.resolution, box.to_dict(), args.fibers)
    r = amoeba.raster_2d(f, box, args.resolution, args.fibers)
    comps = amoeba.complement_components(r)
    body = {**_raster_summary(r), "component_count": len(comps),
            "bounded_count": sum(c.bounded for c in comps), "components": [c.to_dict() for c in comps]}
    res = Result(body)
    res.csv = lambda: _raster_csv(r)
    res.svg = lambda: svg.raster_svg(r, comps, title=format_laurent(f))
    return res


def cmd_ronkin(args) -> Result:
    f = _poly(args)
    _need(args, "x")
    if any(len(x) != f.dim for x in args.x):
        raise UsageError(f"every --x point needs {f.dim} coordinates")
    q = _quadrature(args, f.dim)
    vals = ronkin.ronkin_many(f, args.x, q)
    rows = []
    for x, v in zip(args.x, vals):
        grad = ronkin.ronkin_gradient(f, x, q, args.h)
        rows.append({"x": list(x), "value": v.value, "std_error": v.std_error,
                     "discarded": v.discarded, "gradient": [float(g) for g in grad]})
    res = Result({"quadrature": q.to_dict(), "points": rows})
    res.csv = lambda: _csv_text(
        [f"x{k + 1}" for k in range(f.dim)] + ["value", "std_error"] + [f"grad{k + 1}" for k in range(f.dim)],
        [[*r["x"], r["value"], r["std_error"], *r["gradient"]] for r in rows],
    )
    return res


def cmd_solid_check(args) -> Result:
    f = _poly(args)
    _require_dim2(f, "solid-check")
    q = _quadrature(args, 2)
    log.info("solid-check: raster %dx%d, %d fibres", *args.resolution, args.fibers)
    rep = amoeba.is_solid(f, args.box, args.resolution, q, args.fibers)
    body = {"polynomial": format_laurent(f), "quadrature": q.to_dict(), **rep.to_dict(),
            "verdict_counts": rep.raster.counts()}
    res = Result(body)
    res.csv = lambda: _csv_text(
        ["label", "pixels", "bounded", "order", "witness_x1", "witness_x2"],
        [[c.label, c.size, c.bounded, _exp(c.order), *c.witness_point] for c in rep.components],
    )
    spine = tropical.corner_locus_2d(tropical.Lifting.from_coefficients(f))
    res.svg = lambda: svg.raster_svg(rep.raster, rep.components, spine, title=format_laurent(f))
    return res


def cmd_bound_check(args) -> Result:
    f = _poly(args)
    w = _weights(args, f)
    lo, hi, count = args.x_grid
    axis = np.linspace(lo, hi, int(count))
    grid = np.stack(np.meshgrid(*[axis] * f.dim, indexing="ij"), axis=-1).reshape(-1, f.dim)
    q = _quadrature(args, f.dim)
    ts = _t_list(args, (2, 4, 6, 8))
    log.info("bound-check: %d grid points x %d t values", len(grid), len(ts))
    rep = ronkin.ft_bound_check(f, w, ts, grid, q)
    res = Result({"quadrature": q.to_dict(), "grid_points": len(grid), **rep.to_dict()})
    res.csv = lambda: _csv_text(["t", "gap", "std_error", "bound", "within_bound"],
                                [[r.t, r.gap, r.std_error, r.bound, r.within_bound] for r in rep.rows])
    return res


def _sweep_frames(rows, prefix: str, title: str):
    def render():
        out = []
        for k, r in enumerate(rows):
            if getattr(r, "raster", None) is None:
                continue
            out.append((f"{prefix}_{k:02d}.svg",
                        svg.raster_svg(r.raster, getattr(r, "components", ()), title=f"{title} t={r.t:.6g}")))
        return out
    return render


def cmd_sweep_convergence(args) -> Result:
    f = _poly(args)
    _require_dim2(f, "sweep-convergence")
    w = _weights(args, f)
    ts = _t_list(args, range(1, 9))
    log.info("sweep-convergence: %d values of t", len(ts))
    sweep = degeneration.convergence_sweep(f, w, ts, args.resolution, args.fibers)
    res = Result(sweep.to_dict())
    res.csv = lambda: _csv_text(*sweep.csv_rows())
    res.svg = lambda: svg.complex_svg(sweep.limit, sweep.window, title="limit corner locus")
    res.frames = _sweep_frames(sweep.rows, "frame", "f_t")
    return res


def cmd_sweep_solid(args) -> Result:
    f = _poly(args)
    _require_dim2(f, "sweep-solid")
    w = _weights(args, f)
    ts = _t_list(args, range(1, 9))
    q = _quadrature(args, 2)
    log.info("sweep-solid: %d values of t", len(ts))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", degeneration.NotMaximallySparseWarning)
        sweep = degeneration.solidness_sweep(f, w, ts, q, args.resolution, args.fibers)
    res = Result(sweep.to_dict())
    res.csv = lambda: _csv_text(*sweep.csv_rows())
    res.frames = _sweep_frames(sweep.rows, "frame", "f_t")
    return res


def cmd_sweep_subdivision(args) -> Result:
    f = _poly(args)
    _require_dim2(f, "sweep-subdivision")
    w = _weights(args, f)
    ts = _t_list(args, range(1, 9))
    q = _quadrature(args, 2)
    log.info("sweep-subdivision: %d values of t", len(ts))
    sweep = degeneration.subdivision_stability_sweep(f, w, ts, q, args.resolution, args.fibers)
    res = Result(sweep.to_dict())
    res.csv = lambda: _csv_text(*sweep.csv_rows())
    res.svg = lambda: svg.subdivision_svg(sweep.limit, title="limit subdivision")
    res.frames = _sweep_frames(sweep.rows, "frame", "f_t")
    return res


def cmd_phi_bound(args) -> Result:
    f = _poly(args)
    _need(args, "alpha")
    alpha0 = tuple(args.alpha)
    if alpha0 not in f.support:
        raise UsageError(f"--alpha {alpha0} is not in the support {list(f.support)}")
    q = _quadrature(args, f.dim)
    r = ronkin.phi_lower_bound(alpha0, f.as_dict(), args.trials, q, args.seed)
    body = {"alpha0": list(alpha0), "log_abs_xi_alpha0": math.log(abs(f.as_dict()[alpha0])),
            "quadrature": q.to_dict(), **r.to_dict()}
    return Result(body)


def cmd_threshold(args) -> Result:
    f = parse_laurent(args.poly, args.dim) if args.poly else None
    w = _weights(args, f)
    _need(args, "x0", "v", "t", "alpha")
    L = tropical.Lifting({tuple(k): v for k, v in w.items()})
    terms = ronkin.threshold_terms(args.x0, args.v, L, args.t, args.alpha)
    s0 = max((d["s"] for d in terms.values()), default=0.0)
    body = {"alpha1": list(args.alpha), "x0": args.x0, "v": args.v, "t": args.t, "s0": s0,
            "terms": [{"point": list(k), **d} for k, d in terms.items()]}
    res = Result(body)
    res.csv = lambda: _csv_text(["point", "A", "B", "delta", "s"],
                                [[_exp(k), d["A"], d["B"], d["delta"], d["s"]] for k, d in terms.items()])
    return res


HANDLERS: dict[str, Callable] = {
    "info": cmd_info,
    "subdivision": cmd_subdivision,
    "spine": cmd_spine,
    "raster": cmd_raster,
    "ronkin": cmd_ronkin,
    "solid-check": cmd_solid_check,
    "bound-check": cmd_bound_check,
    "sweep-convergence": cmd_sweep_convergence,
    "sweep-solid": cmd_sweep_solid,
    "sweep-subdivision": cmd_sweep_subdivision,
    "phi-bound": cmd_phi_bound,
    "threshold": cmd_threshold,
}

# keys left out of the echoed config so reports do not depend on them
_UNECHOED = {"threads", "out", "config", "quiet", "frames", "formats"}


def _echo_config(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in _UNECHOED:
            continue
        if isinstance(v, amoeba.Box2D):
            v = v.to_dict()
        elif isinstance(v, tuple):
            v = list(v)
        out[k] = v
    return out


def _write(out: Path, name: str, text: str) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text)


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
    except UsageError as exc:
        print(f"amoebakit: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"amoebakit: cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE

    logging.basicConfig(stream=sys.stderr, format="[amoebakit] %(message)s", force=True,
                        level=logging.WARNING if args.quiet else logging.INFO)
    if args.threads is not None:
        if args.threads < 1:
            print("amoebakit: usage error: --threads must be >= 1", file=sys.stderr)
            return EXIT_USAGE
        set_threads(args.threads)
    if args.out is None and set(args.formats) - {"json"}:
        print("amoebakit: usage error: csv/svg output needs --out", file=sys.stderr)
        return EXIT_USAGE

    try:
        result = HANDLERS[args.command](args)
        report = {"schema_version": SCHEMA_VERSION, "command": args.command,
                  "config": _echo_config(args), "result": result.body}
        text = json.dumps(report, indent=2, allow_nan=True) + "\n"
        if args.out is not None:
            stem = args.command.replace("-", "_")
            if "json" in args.formats:
                _write(args.out, f"{stem}.json", text)
            if "csv" in args.formats and result.csv is not None:
                _write(args.out, f"{stem}.csv", result.csv())
            if "svg" in args.formats and result.svg is not None:
                _write(args.out, f"{stem}.svg", result.svg())
            if args.frames and result.frames is not None:
                for name, body in result.frames():
                    _write(args.out / f"{stem}_frames", name, body)
    except (UsageError, ParseError, ValueError, KeyError) as exc:
        print(f"amoebakit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RuntimeError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"amoebakit: computation failed: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    sys.stdout.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
