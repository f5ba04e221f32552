"""``monolct`` command-line interface.

Exit codes: 0 success, 2 failed validation, 3 I/O error, 4 bad configuration.
Errors are reported on stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .io import (
    FormatError,
    dumps_report,
    read_binary,
    read_image,
    read_points_csv,
    read_signal_csv,
    write_binary,
    write_features,
    write_monogenic,
    write_pgm,
    write_report,
    write_signal_csv,
)
from .grid import Field2D, SampledSignal1D
from .lct import ChirpSamplingWarning, LctParams

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_CONFIG = 4

DEFAULT_GRID = ((0.0, 1.0), (0.25, 1.0), (0.5, 1.0), (1.0, 2.0))
DEFAULT_NOISES = (0.0, 8.0, 16.0, 32.0)


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


# argument helpers ------------------------------------------------------------------------------------


def parse_params(text, d_default=1.0):
    """``a,b[,c,d]``; missing ``(c, d)`` become ``((a d - 1)/b, d)`` with ``d = 1``."""
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise ConfigError(f"params must be comma-separated numbers, got {text!r}") from None
    try:
        if len(vals) == 2:
            return LctParams.from_ab(vals[0], vals[1], d_default)
        if len(vals) == 4:
            return LctParams(*vals)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    raise ConfigError("params take the form a,b or a,b,c,d")


def _float_list(text):
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from None


def _grid(text):
    pairs = []
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        vals = _float_list(item)
        if len(vals) != 2:
            raise ConfigError(f"grid entries are a,b pairs separated by ';', got {item!r}")
        if not vals[1] > 0:
            raise ConfigError("grid entries need b > 0")
        pairs.append(vals)
    if not pairs:
        raise ConfigError("empty parameter grid")
    return tuple(pairs)


def _require_b_positive(p):
    if not p.b > 0:
        raise ConfigError("this command needs b > 0")


def _load_signal(path):
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return read_signal_csv(path)
    if path.suffix.lower() in (".pgm", ".png", ".pnm", ".jpg", ".jpeg"):
        return read_image(path)
    return read_binary(path)


def _save(path, obj):
    path = Path(path)
    if path.suffix.lower() == ".csv":
        if not isinstance(obj, SampledSignal1D):
            raise ConfigError("CSV output holds 1-D signals only")
        write_signal_csv(path, obj)
    else:
        write_binary(path, obj)


def _emit(report, out):
    text = dumps_report(report)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _params_report(p):
    return {"a": p.a, "b": p.b, "c": p.c, "d": p.d}


# commands ------------------------------------------------------------------------------------------------


def cmd_lct(args):
    from .lct import lct_2d, lct_forward_1d, lct_inverse_1d

    p = parse_params(args.params)
    data = _load_signal(args.input)
    direction = "inverse" if args.inverse else "forward"
    if isinstance(data, SampledSignal1D):
        out = lct_forward_1d(data, p) if direction == "forward" else lct_inverse_1d(data, p)
    else:
        _require_b_positive(p)
        out = lct_2d(data, p, direction)
    _save(args.out, out)
    return {"command": "lct", "params": _params_report(p), "direction": direction, "input": args.input, "out": args.out}


def cmd_gas(args):
    from .analytic1d import gas, gas_extend

    p = parse_params(args.params)
    _require_b_positive(p)
    f = _load_signal(args.input)
    if not isinstance(f, SampledSignal1D):
        raise ConfigError("gas expects a 1-D signal")
    g = gas(f, p.a, p.b)
    _save(args.out, g.base)
    rep = {"command": "gas", "params": _params_report(p), "input": args.input, "out": args.out}
    if args.points:
        pts = read_points_csv(args.points)
        vals = gas_extend(f, p, pts)
        target = args.points_out or str(Path(args.out).with_suffix("")) + "_ext.csv"
        with open(target, "w", encoding="ascii") as fh:
            fh.write("x,y,re,im\n")
            for (x, y), z in zip(pts, vals):
                fh.write(f"{x:.17g},{y:.17g},{z.real:.17g},{z.imag:.17g}\n")
        rep.update(points=args.points, points_out=target)
    return rep


def cmd_monogenic(args):
    from .monogenic import monogenic_extend, monogenic_signal

    p = parse_params(args.params)
    _require_b_positive(p)
    f = read_image(args.input)
    if args.x0 > 0:
        fld = monogenic_extend(f, p, args.x0, pad=args.pad)
    elif args.x0 == 0:
        fld = monogenic_signal(f, p.a, p.b, pad=args.pad)
    else:
        raise ConfigError("x0 must be >= 0")
    files = write_monogenic(args.out, fld)
    return {
        "command": "monogenic",
        "params": _params_report(p),
        "x0": args.x0,
        "pad": args.pad,
        "input": args.input,
        "files": files,
    }


def cmd_features(args):
    from .features import compute_features
    from .monogenic import monogenic_extend

    p = parse_params(args.params)
    _require_b_positive(p)
    if not args.x0 > 0:
        raise ConfigError("x0 must be positive")
    f = read_image(args.input)
    feats = compute_features(monogenic_extend(f, p, args.x0, pad=args.pad))
    files = write_features(args.out, feats)
    return {
        "command": "features",
        "params": _params_report(p),
        "x0": args.x0,
        "pad": args.pad,
        "input": args.input,
        "defined_fraction": float(feats.defined_mask.mean()),
        "files": files,
    }


def _edge_map(f, method, p, args):
    from .edge import lca_map, mdcpc_map

    common = dict(
        x0=args.x0,
        threshold=args.threshold,
        percentile=args.percentile,
        boundary=args.boundary,
        method=args.derivatives,
    )
    if method == "lca":
        return lca_map(f, p, **common)
    return mdcpc_map(f, p, include_linear_term=args.linear_term, **common)


def _check_edge_args(args):
    if not args.x0 > 0:
        raise ConfigError("x0 must be positive")
    if not 0 < args.threshold < 1:
        raise ConfigError("threshold must lie in (0, 1)")
    if not 0 < args.percentile <= 100:
        raise ConfigError("percentile must lie in (0, 100]")


def _truth(path):
    from .edge import GroundTruth

    if not path:
        return None
    t = read_image(path)
    return GroundTruth(t.samples.real > 0.5, {"file": str(path)})


def cmd_edges(args):
    from .edge import column_argmax, pratt_fom

    p = parse_params(args.params)
    _require_b_positive(p)
    _check_edge_args(args)
    f = read_image(args.input)
    em = _edge_map(f, args.method, p, args)
    out = args.out or str(Path(args.input).with_suffix("")) + f"_{args.method}.pgm"
    write_pgm(out, em.strength)
    rep = {"command": "edges", "input": args.input, "out": out, "params": _params_report(p), **em.to_dict()}
    rep.update(boundary=args.boundary, derivatives=args.derivatives, argmax_column=column_argmax(em.raw))
    truth = _truth(args.truth)
    rep["fom"] = pratt_fom(em, truth) if truth is not None else None
    return rep


def compare_table(
    kind="disk",
    size=128,
    noises=DEFAULT_NOISES,
    seed=0,
    grid=DEFAULT_GRID,
    x0=1.0,
    threshold=0.3,
    percentile=99.0,
    include_linear_term=False,
    image=None,
    truth=None,
):
    """Pratt FOM of both methods over an (a, b) grid and noise levels.

    Uses the synthetic ``kind`` scene unless ``image`` (and ``truth``) are
    given; noise at level ``s`` is seeded with ``seed`` and the level index.
    """
    from .edge import lca_map, mdcpc_map, pratt_fom, synth_image

    rows = []
    for k, sigma in enumerate(noises):
        if image is None:
            f, gt = synth_image(kind, size, noise=sigma, seed=seed + k)
        else:
            rng = np.random.default_rng(seed + k)
            noisy = image.samples.real + (rng.normal(0, sigma / 255.0, image.shape) if sigma > 0 else 0)
            f, gt = Field2D(noisy), truth
        for a, b in grid:
            for method in ("lca", "mdcpc"):
                if method == "lca":
                    em = lca_map(f, (a, b), x0, threshold, percentile)
                else:
                    em = mdcpc_map(f, (a, b), x0, include_linear_term, threshold, percentile)
                rows.append(
                    {
                        "method": method,
                        "a": a,
                        "b": b,
                        "noise": sigma,
                        "fom": pratt_fom(em, gt) if gt is not None else None,
                    }
                )
    return {
        "scene": kind if image is None else "input",
        "size": size if image is None else list(image.shape),
        "seed": seed,
        "x0": x0,
        "threshold": threshold,
        "percentile": percentile,
        "include_linear_term": include_linear_term,
        "noises": list(noises),
        "grid": [list(g) for g in grid],
        "rows": rows,
    }


def _format_table(table):
    lines = [f"{'method':6} {'a':>6} {'b':>6} {'noise':>6} {'FOM':>8}"]
    for r in table["rows"]:
        fom = "n/a" if r["fom"] is None else f"{r['fom']:.4f}"
        lines.append(f"{r['method']:6} {r['a']:6.3g} {r['b']:6.3g} {r['noise']:6.3g} {fom:>8}")
    return "\n".join(lines) + "\n"


def cmd_compare(args):
    from .edge import lca_map, mdcpc_map

    p = parse_params(args.params)
    _require_b_positive(p)
    _check_edge_args(args)
    grid = _grid(args.grid) if args.grid else DEFAULT_GRID
    user = (p.a, p.b)
    grid = tuple(dict.fromkeys(((0.0, 1.0), user) + tuple(grid)))
    noises = _float_list(args.noise) if args.noise else DEFAULT_NOISES
    image = truth = None
    if args.input:
        image = read_image(args.input)
        truth = _truth(args.truth)
    table = compare_table(
        kind=args.synthetic,
        size=args.size,
        noises=noises,
        seed=args.seed,
        grid=grid,
        x0=args.x0,
        threshold=args.threshold,
        percentile=args.percentile,
        include_linear_term=args.linear_term,
        image=image,
        truth=truth,
    )
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        scene = image
        if scene is None:
            from .edge import synth_image

            scene, _ = synth_image(args.synthetic, args.size, seed=args.seed)
        for tag, ab in (("ft", (0.0, 1.0)), ("lct", user)):
            lca = lca_map(scene, ab, args.x0, args.threshold, args.percentile)
            mdc = mdcpc_map(scene, ab, args.x0, args.linear_term, args.threshold, args.percentile)
            write_pgm(out / f"{tag}_lca.pgm", lca.strength)
            write_pgm(out / f"{tag}_mdcpc.pgm", mdc.strength)
    if not args.quiet_table:
        sys.stderr.write(_format_table(table))
    table.update(command="compare", params=_params_report(p), input=args.input, truth=args.truth)
    return table


def cmd_validate(args):
    from .validation import run_suite

    try:
        results = run_suite(args.suite)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    for key, chk in results:
        print(f"[{key}] {chk.line()}", flush=True)
    ok = all(chk.passed for _, chk in results)
    rep = {
        "command": "validate",
        "suite": args.suite,
        "passed": ok,
        "checks": {key: chk.to_dict() for key, chk in results},
    }
    return rep, (EXIT_OK if ok else EXIT_VALIDATION)


def cmd_synth(args):
    from .edge import synth_image

    f, gt = synth_image(args.kind, args.size, (args.low, args.high), args.noise, args.seed)
    write_pgm(args.out, f.samples.real / 255.0)
    rep = {"command": "synth", "out": args.out, **gt.description}
    if args.truth_out:
        write_pgm(args.truth_out, gt.edge_pixels.astype(float))
        rep["truth_out"] = args.truth_out
    return rep


# parser ---------------------------------------------------------------------------------------------------------


def _add_edge_options(sp, with_method=True):
    if with_method:
        sp.add_argument("--method", choices=("lca", "mdcpc"), default="lca")
    sp.add_argument("--params", default="0,1,-1,0", help="a,b[,c,d] (default: Fourier 0,1,-1,0)")
    sp.add_argument("--x0", type=float, default=1.0, help="scale height (default 1)")
    sp.add_argument("--threshold", type=float, default=0.3)
    sp.add_argument("--percentile", type=float, default=99.0)
    sp.add_argument("--linear-term", action="store_true", help="add i(a/b)x to the MDCPC vector")
    sp.add_argument("--boundary", choices=("symmetric", "periodic"), default="symmetric")
    sp.add_argument("--derivatives", choices=("chain", "fd"), default="chain")
    sp.add_argument("--truth", help="ground-truth edge PGM (nonzero = edge) for the Pratt FOM")
    sp.add_argument("--report", help="write the JSON report here instead of stdout")


def build_parser():
    ap = _Parser(prog="monolct", description="LCT, generalized monogenic signal and edge maps")
    ap.add_argument("--version", action="version", version=f"monolct {__version__}")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    sp = sub.add_parser("lct", help="1-D or 2-D linear canonical transform")
    sp.add_argument("--params", required=True)
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--inverse", action="store_true")
    sp.add_argument("--report")
    sp.set_defaults(func=cmd_lct)

    sp = sub.add_parser("gas", help="generalized analytic signal of a 1-D signal")
    sp.add_argument("--params", required=True)
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--points", help="CSV of x,y points (y > 0) for the half-plane extension")
    sp.add_argument("--points-out")
    sp.add_argument("--report")
    sp.set_defaults(func=cmd_gas)

    for name, func, helptext in (
        ("monogenic", cmd_monogenic, "monogenic field channels of an image"),
        ("features", cmd_features, "polar feature maps of an image"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("input")
        sp.add_argument("--params", default="0,1,-1,0")
        sp.add_argument("--x0", type=float, default=1.0 if name == "features" else 0.0)
        sp.add_argument("--pad", type=int, default=1)
        sp.add_argument("--out", required=True, help="output stem")
        sp.add_argument("--report")
        sp.set_defaults(func=func)

    sp = sub.add_parser("edges", help="LCA or MDCPC edge map")
    sp.add_argument("input")
    sp.add_argument("--out")
    _add_edge_options(sp)
    sp.set_defaults(func=cmd_edges)

    sp = sub.add_parser("compare", help="Fourier vs LCT parameters: FOM table over (a,b) and noise")
    sp.add_argument("input", nargs="?")
    _add_edge_options(sp, with_method=False)
    sp.add_argument("--grid", help="extra (a,b) pairs as 'a,b;a,b;...'")
    sp.add_argument("--noise", help="noise levels in gray levels, e.g. 0,8,16,32")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--synthetic", choices=("step", "disk", "bars", "ramp"), default="disk")
    sp.add_argument("--size", type=int, default=128)
    sp.add_argument("--out-dir", help="write paired FT / LCT edge maps here")
    sp.add_argument("--quiet-table", action="store_true")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("validate", help="run numerical check suites")
    sp.add_argument("--suite", default="all")
    sp.add_argument("--report")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("synth", help="write a synthetic test image")
    sp.add_argument("kind", choices=("step", "disk", "bars", "ramp"))
    sp.add_argument("--size", type=int, default=128)
    sp.add_argument("--low", type=float, default=64.0)
    sp.add_argument("--high", type=float, default=192.0)
    sp.add_argument("--noise", type=float, default=0.0)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True)
    sp.add_argument("--truth-out")
    sp.add_argument("--report")
    sp.set_defaults(func=cmd_synth)
    return ap


def _fail(code, kind, message):
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}, sort_keys=True) + "\n")
    return code


def main(argv=None):
    from ._accel import apply_thread_cap

    apply_thread_cap()
    try:
        args = build_parser().parse_args(argv)
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, "config", str(exc))
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ChirpSamplingWarning)
            result = args.func(args)
        code = EXIT_OK
        if isinstance(result, tuple):
            result, code = result
        result["config"] = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
        _emit(result, getattr(args, "report", None))
        return code
    except ConfigError as exc:
        return _fail(EXIT_CONFIG, "config", str(exc))
    except FormatError as exc:
        return _fail(EXIT_IO, "format", str(exc))
    except OSError as exc:
        return _fail(EXIT_IO, "io", str(exc))
    except ValueError as exc:
        return _fail(EXIT_CONFIG, "config", str(exc))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
