"""Command-line front end: ``segment``, ``synth`` and ``bench``.

Exit codes: 0 success, 2 bad flags, 3 input errors, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import hashlib
import io
import json
import os
import re
import sys

import numpy as np

from . import __version__, contour, engine, initcontour, raster

EXIT_OK = 0
EXIT_FLAGS = 2
EXIT_INPUT = 3
EXIT_NUMERIC = 4

# flag -> {algo: parameter attribute}
MODEL_FLAGS = {
    "lambda": {"chanvese": "lambda_len", "drlse": "lambda_len", "localized": "lambda_len"},
    "dt": {"edgeflow": "dt", "chanvese": "dt", "drlse": "dt", "rsf": "dt"},
    "epsilon": {a: "eps" for a in engine.ALGORITHMS},
    "sigma": {"edgeflow": "sigma", "drlse": "sigma"},
    "edge_scale": {"edgeflow": "edge_scale", "drlse": "edge_scale"},
    "mu": {"drlse": "mu", "rsf": "mu_reg"},
    "alpha": {"drlse": "alpha"},
    "kernel_sigma": {"rsf": "sigma_k"},
    "lambda1": {"rsf": "lambda1"},
    "lambda2": {"rsf": "lambda2"},
    "nu": {"rsf": "nu"},
    "radius": {"localized": "radius"},
    "cfl": {"localized": "cfl"},
    "reinit_every": {"chanvese": "reinit_every", "localized": "reinit_every"},
}
INT_FLAGS = {"reinit_every"}

BENCH_ALGOS = ("rsf", "drlse", "localized")
REPORT_HEADER = "image,algo,iterations,wall_ms,dice,converged"


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_FLAGS, f"{self.prog}: error: {message}")


def _flag(name):
    return "--" + name.replace("_", "-")


def _add_model_flags(p):
    g = p.add_argument_group("model parameters")
    for name in MODEL_FLAGS:
        kind = int if name in INT_FLAGS else float
        g.add_argument(_flag(name), dest=name, type=kind, default=None, metavar="X")


def _shape_arg(text):
    try:
        return initcontour.parse_shape(text)
    except initcontour.InitSpecError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _size_arg(text):
    m = re.fullmatch(r"(\d+)[xX](\d+)", text.strip())
    if not m:
        raise argparse.ArgumentTypeError(f"expected WxH, got {text!r}")
    return int(m.group(1)), int(m.group(2))


def _pair_arg(text):
    try:
        a, b = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected X,Y, got {text!r}")
    return a, b


def _on_off(text):
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected on or off")
    return text == "on"


def build_parser():
    parser = _Parser(prog="levelseg", description="Level-set image segmentation.")
    parser.add_argument("--version", action="version", version=f"levelseg {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    seg = sub.add_parser("segment", help="segment one image")
    seg.add_argument("--algo", choices=engine.ALGORITHMS)
    seg.add_argument("--input")
    seg.add_argument("--init", action="append", type=_shape_arg, metavar="SHAPE",
                     help="circle:cx,cy,r or rect:x0,y0,x1,y1 (repeatable, union)")
    seg.add_argument("--iters", type=int)
    seg.add_argument("--out-prefix")
    seg.add_argument("--min-contour-len", type=float)
    seg.add_argument("--max-dim", type=int)
    seg.add_argument("--converge", type=_on_off, metavar="on|off")
    seg.add_argument("--manifest", help="replay the run recorded in this manifest")
    _add_model_flags(seg)

    syn = sub.add_parser("synth", help="write a synthetic test image")
    syn.add_argument("--kind", choices=raster.SYNTH_KINDS, default="disk")
    syn.add_argument("--size", type=_size_arg, default=(128, 128), metavar="WxH")
    syn.add_argument("--fg", type=float, default=0.8)
    syn.add_argument("--bg", type=float, default=0.2)
    syn.add_argument("--noise", type=float, default=0.0)
    syn.add_argument("--seed", type=int, default=0)
    syn.add_argument("--center", type=_pair_arg, metavar="CX,CY")
    syn.add_argument("--radius", type=float)
    syn.add_argument("--split", type=int)
    syn.add_argument("--slope", type=float, default=0.3)
    syn.add_argument("--cell", type=int, default=16)
    syn.add_argument("--out", required=True)
    syn.add_argument("--truth")

    bench = sub.add_parser("bench", help="run algorithms over an image corpus")
    bench.add_argument("--corpus", required=True)
    bench.add_argument("--algos", default=",".join(BENCH_ALGOS))
    bench.add_argument("--report")
    bench.add_argument("--make-default-corpus", action="store_true")
    bench.add_argument("--max-dim", type=int, default=raster.DEFAULT_MAX_DIM)
    _add_model_flags(bench)
    return parser


def _model_overrides(args):
    return {name: getattr(args, name) for name in MODEL_FLAGS if getattr(args, name) is not None}


def _make_model(algo, overrides, base=None):
    model = base if base is not None else engine.PARAM_TYPES[algo]()
    for name, value in overrides.items():
        model = dataclasses.replace(model, **{MODEL_FLAGS[name][algo]: value})
    try:
        model.validate()
    except ValueError as exc:
        flags = ", ".join(_flag(n) for n in overrides) or "defaults"
        raise CliError(EXIT_FLAGS, f"invalid {algo} parameters ({flags}): {exc}")
    return model


def _check_flags_apply(overrides, algos):
    for name in overrides:
        if not any(a in MODEL_FLAGS[name] for a in algos):
            raise CliError(EXIT_FLAGS, f"argument {_flag(name)}: not used by {', '.join(algos)}")


def _load_gray(path, max_dim):
    try:
        img = raster.load_pnm(path)
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot read {path}: {exc.strerror or exc}")
    except raster.PnmError as exc:
        raise CliError(EXIT_INPUT, f"{path}: {exc}")
    f = raster.rescale_max_dim(raster.to_grayscale_normalized(img), max_dim)
    return img, f


def _seed_from_comments(comments):
    for c in comments:
        m = re.search(r"\bseed=(-?\d+)", c)
        if m:
            return int(m.group(1))
    return None


def phi_digest(phi):
    return hashlib.sha256(np.ascontiguousarray(phi, dtype="<f8").tobytes()).hexdigest()


def _write_text(path, text):
    try:
        raster.atomic_write(path, text.encode("utf-8"))
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot write {path}: {exc.strerror or exc}")


def _read_manifest(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot read {path}: {exc.strerror or exc}")
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_INPUT, f"{path}: not a JSON manifest ({exc})")
    if not isinstance(doc, dict) or doc.get("algo") not in engine.ALGORITHMS:
        raise CliError(EXIT_INPUT, f"{path}: manifest lacks a valid 'algo'")
    return doc


def _run(image, shapes, aparams):
    h, w = image.shape
    try:
        phi0 = initcontour.init_levelset(shapes, w, h, mode=engine.INIT_MODE[aparams.algo])
    except initcontour.InitSpecError as exc:
        raise CliError(EXIT_INPUT, f"--init: {exc}")
    try:
        return engine.evolve(image, phi0, aparams, trace_energy=False)
    except engine.NumericalError as exc:
        raise CliError(EXIT_NUMERIC, str(exc))
    except engine.InputError as exc:
        raise CliError(EXIT_INPUT, str(exc))


def cmd_segment(args):
    doc = _read_manifest(args.manifest) if args.manifest else {}

    def pick(value, key, default):
        if value is not None:
            return value
        return doc.get(key, default)

    algo = pick(args.algo, "algo", None)
    src = pick(args.input, "input", None)
    prefix = pick(args.out_prefix, "out_prefix", None)
    if algo is None:
        raise CliError(EXIT_FLAGS, "segment: error: the following arguments are required: --algo")
    if src is None:
        raise CliError(EXIT_FLAGS, "segment: error: the following arguments are required: --input")
    if prefix is None:
        raise CliError(EXIT_FLAGS, "segment: error: the following arguments are required: --out-prefix")
    max_dim = pick(args.max_dim, "max_dim", raster.DEFAULT_MAX_DIM)
    min_len = pick(args.min_contour_len, "min_contour_len", contour.DEFAULT_MIN_LEN)
    if max_dim < 8:
        raise CliError(EXIT_FLAGS, "argument --max-dim: must be >= 8")
    if min_len < 0:
        raise CliError(EXIT_FLAGS, "argument --min-contour-len: must be >= 0")

    overrides = _model_overrides(args)
    _check_flags_apply(overrides, [algo])
    base = None
    if doc and doc.get("algo") == algo:
        fields = {f.name for f in dataclasses.fields(engine.PARAM_TYPES[algo])}
        recorded = {k[len("param_"):]: v for k, v in doc.items() if k.startswith("param_")}
        try:
            base = engine.PARAM_TYPES[algo](**{k: v for k, v in recorded.items() if k in fields})
        except TypeError as exc:
            raise CliError(EXIT_INPUT, f"{args.manifest}: bad parameter record ({exc})")
    model = _make_model(algo, overrides, base)

    raw, image = _load_gray(src, max_dim)
    h, w = image.shape
    if args.init:
        shapes = args.init
    elif doc.get("init"):
        try:
            shapes = [initcontour.parse_shape(s) for s in doc["init"]]
        except initcontour.InitSpecError as exc:
            raise CliError(EXIT_INPUT, f"{args.manifest}: {exc}")
    else:
        shapes = [initcontour.default_shape(w, h)]

    aparams = engine.AlgorithmParams(
        algo=algo,
        model=model,
        max_iters=pick(args.iters, "max_iters", None),
        check_every=doc.get("check_every", 10),
        converge_patience=doc.get("converge_patience", 3),
        enable_convergence=pick(args.converge, "enable_convergence", True),
    )
    try:
        aparams.validate()
    except ValueError as exc:
        raise CliError(EXIT_FLAGS, f"argument --iters: {exc}")

    result = _run(image, shapes, aparams)
    kept = contour.filter_by_length(result.contours, min_len)

    parent = os.path.dirname(prefix)
    if parent:
        os.makedirs(parent, exist_ok=True)
    paths = {
        "overlay": prefix + ".overlay.ppm",
        "contours_csv": prefix + ".contours.csv",
        "contours_svg": prefix + ".contours.svg",
        "manifest": prefix + ".manifest.json",
    }
    try:
        raster.write_pnm(contour.render_overlay(image, kept), paths["overlay"])
        contour.export_contours(kept, "csv", paths["contours_csv"])
        contour.export_contours(kept, "svg", paths["contours_svg"], w, h)
    except OSError as exc:
        raise CliError(EXIT_INPUT, str(exc))

    manifest = {
        "tool_version": __version__,
        "algo": algo,
        "input": src,
        "input_width": raw.width,
        "input_height": raw.height,
        "width": w,
        "height": h,
        "max_dim": max_dim,
        "init": [str(s) for s in shapes],
        "init_mode": engine.INIT_MODE[algo],
        "max_iters": aparams.max_iters,
        "check_every": aparams.check_every,
        "converge_patience": aparams.converge_patience,
        "enable_convergence": aparams.enable_convergence,
        "min_contour_len": min_len,
    }
    manifest.update({f"param_{k}": v for k, v in dataclasses.asdict(model).items()})
    manifest.update({
        "iterations_run": result.iterations_run,
        "converged": result.converged,
        "wall_ms": round(result.wall_ms, 3),
        "contours_before_filter": len(result.contours),
        "contours_after_filter": len(kept),
        "out_prefix": prefix,
        "overlay": paths["overlay"],
        "contours_csv": paths["contours_csv"],
        "contours_svg": paths["contours_svg"],
        "phi_final_sha256": phi_digest(result.phi_final),
        "seed": _seed_from_comments(raw.comments),
    })
    _write_text(paths["manifest"], json.dumps(manifest, indent=2) + "\n")
    print(f"{algo}: {result.iterations_run} iterations, converged={result.converged}, "
          f"{len(kept)} contour(s) -> {prefix}.*")
    return EXIT_OK


def synth_comment(spec):
    return (f"levelseg synth kind={spec.kind} seed={spec.seed} fg={spec.foreground:g} "
            f"bg={spec.background:g} noise={spec.noise_sigma:g}")


def cmd_synth(args):
    w, h = args.size
    spec = raster.SynthSpec(kind=args.kind, width=w, height=h, foreground=args.fg,
                            background=args.bg, noise_sigma=args.noise, seed=args.seed,
                            center=args.center, radius=args.radius, split=args.split,
                            slope=args.slope, cell=args.cell)
    try:
        spec.validate()
    except raster.SynthSpecError as exc:
        raise CliError(EXIT_FLAGS, f"synth: error: {exc}")
    comments = [synth_comment(spec)]
    try:
        raster.write_pnm(raster.from_field(raster.synth(spec), 255, comments), args.out)
        if args.truth:
            truth = raster.truth_mask(spec).astype(float)
            raster.write_pnm(raster.from_field(truth, 255, comments), args.truth)
    except OSError as exc:
        raise CliError(EXIT_INPUT, f"cannot write output: {exc}")
    return EXIT_OK


def default_corpus():
    """The bundled five-image corpus: ``(name, SynthSpec, init shapes)``.

    Every init is a circle (or rectangle) four pixels outside the object.
    """
    S = raster.SynthSpec
    return [
        ("disk", S(kind="disk", noise_sigma=0.05, seed=42), ["circle:64,64,36"]),
        ("ramp", S(kind="ramp", foreground=0.4, background=0.3, noise_sigma=0.05, seed=42),
         ["circle:64,64,36"]),
        ("smalldisk", S(kind="disk", foreground=0.7, background=0.3, noise_sigma=0.1, seed=1,
                        center=(56, 70), radius=24), ["circle:56,70,28"]),
        ("tworegion", S(kind="tworegion", foreground=0.7, background=0.3, noise_sigma=0.05,
                        seed=3), ["rect:-8,-8,68,135"]),
        ("faintdisk", S(kind="disk", foreground=0.45, background=0.35, noise_sigma=0.03, seed=5,
                        radius=40), ["circle:64,64,44"]),
    ]


def make_default_corpus(directory):
    os.makedirs(directory, exist_ok=True)
    for name, spec, inits in default_corpus():
        comments = [synth_comment(spec)]
        base = os.path.join(directory, name)
        raster.write_pnm(raster.from_field(raster.synth(spec), 255, comments), base + ".pgm")
        truth = raster.truth_mask(spec).astype(float)
        raster.write_pnm(raster.from_field(truth, 255, comments), base + ".truth.pgm")
        raster.atomic_write(base + ".init", ("\n".join(inits) + "\n").encode("ascii"))


def corpus_images(directory):
    names = sorted(os.listdir(directory))
    return [n for n in names
            if n.lower().endswith((".pgm", ".ppm")) and not n.lower().endswith(".truth.pgm")]


def _bench_one(path, algo, model, max_dim):
    stem = os.path.splitext(path)[0]
    _, image = _load_gray(path, max_dim)
    h, w = image.shape
    shapes = [initcontour.default_shape(w, h)]
    if os.path.exists(stem + ".init"):
        with open(stem + ".init", encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
        try:
            shapes = [initcontour.parse_shape(ln) for ln in lines] or shapes
        except initcontour.InitSpecError as exc:
            raise CliError(EXIT_INPUT, f"{stem}.init: {exc}")
    result = _run(image, shapes, engine.AlgorithmParams(algo=algo, model=model))
    dice = None
    if os.path.exists(stem + ".truth.pgm"):
        _, truth = _load_gray(stem + ".truth.pgm", max_dim)
        if truth.shape != image.shape:
            raise CliError(EXIT_INPUT, f"{stem}.truth.pgm: size differs from the image")
        dice = engine.dice(result.mask, truth > 0.5)
    return result, dice


def bench_rows(directory, algos, overrides=None, max_dim=raster.DEFAULT_MAX_DIM):
    overrides = overrides or {}
    images = corpus_images(directory)
    if not images:
        raise CliError(EXIT_INPUT, f"corpus {directory} holds no PGM/PPM images")
    rows = []
    for algo in algos:
        mine = {k: v for k, v in overrides.items() if algo in MODEL_FLAGS[k]}
        model = _make_model(algo, mine)
        for name in images:
            result, dice = _bench_one(os.path.join(directory, name), algo, model, max_dim)
            rows.append((name, algo, result.iterations_run, result.wall_ms, dice, result.converged))
    rows.sort(key=lambda r: (r[0], r[1]))
    return rows


def format_report(rows):
    out = io.StringIO()
    out.write(REPORT_HEADER + "\n")
    for name, algo, iters, wall, dice, conv in rows:
        d = "" if dice is None else f"{dice:.6f}"
        out.write(f"{name},{algo},{iters},{wall:.3f},{d},{'true' if conv else 'false'}\n")
    return out.getvalue()


def cmd_bench(args):
    if args.make_default_corpus:
        try:
            make_default_corpus(args.corpus)
        except OSError as exc:
            raise CliError(EXIT_INPUT, f"cannot write corpus {args.corpus}: {exc}")
        print(f"default corpus written to {args.corpus}")
        if not args.report:
            return EXIT_OK
    if not args.report:
        raise CliError(EXIT_FLAGS, "bench: error: the following arguments are required: --report")
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    bad = [a for a in algos if a not in engine.ALGORITHMS]
    if bad or not algos:
        raise CliError(EXIT_FLAGS, f"argument --algos: unknown algorithm(s) {', '.join(bad) or '(none)'}")
    if not os.path.isdir(args.corpus):
        raise CliError(EXIT_INPUT, f"corpus directory {args.corpus} does not exist")
    overrides = _model_overrides(args)
    _check_flags_apply(overrides, algos)
    rows = bench_rows(args.corpus, algos, overrides, args.max_dim)
    _write_text(args.report, format_report(rows))
    print(f"{len(rows)} rows -> {args.report}")
    return EXIT_OK


COMMANDS = {"segment": cmd_segment, "synth": cmd_synth, "bench": cmd_bench}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except CliError as exc:
        print(exc, file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
