"""Command-line frontend.

Every subcommand is a thin adapter around the library: parse arguments,
call the corresponding function, write the documented file format.  All
randomness flows from ``--seed`` (falling back to the ``WARPBENCH_SEED``
environment variable), so repeating an invocation reproduces its output
files byte for byte.

Exit codes: 0 success, 2 parameter/usage error, 3 internal contract
violation.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

from . import bench, io, metrics, search, weightopt
from .classify import knn_classify, make_dataset
from .dtw import BandConstraint, DtwVariant, WeightParams, align
from .errors import ContractViolation, ParameterError
from .fitter import SAParams, fit, quantify_effects
from .synthesis import (
    GeneratorSpec,
    PeakMode,
    VariationClass,
    VariationParams,
    compose_variation,
    generate_signal,
)

_STDOUT = sys.stdout


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("WARPBENCH_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ParameterError(f"WARPBENCH_SEED must be an integer, got {env!r}") from exc
    raise ParameterError("a seed is required: pass --seed or set WARPBENCH_SEED")


def _variation_params(args) -> VariationParams:
    kwargs = {}
    if args.window_frac:
        kwargs["window_frac"] = tuple(args.window_frac)
    if args.s_range:
        kwargs["s_range"] = tuple(args.s_range)
    if args.peak_height_frac:
        kwargs["peak_height_frac"] = tuple(args.peak_height_frac)
    if args.peak_width_frac:
        kwargs["peak_width_frac"] = tuple(args.peak_width_frac)
    if args.peak_count:
        kwargs["peak_count"] = tuple(args.peak_count)
    if args.peak_mode:
        kwargs["peak_mode"] = PeakMode(args.peak_mode)
    return VariationParams(**kwargs)


def _add_variation_options(p) -> None:
    p.add_argument("--window-frac", nargs=2, type=float, metavar=("LO", "HI"))
    p.add_argument("--s-range", nargs=2, type=float, metavar=("LO", "HI"))
    p.add_argument("--peak-height-frac", nargs=2, type=float, metavar=("LO", "HI"))
    p.add_argument("--peak-width-frac", nargs=2, type=float, metavar=("LO", "HI"))
    p.add_argument("--peak-count", nargs=2, type=int, metavar=("LO", "HI"))
    p.add_argument("--peak-mode", choices=[m.value for m in PeakMode])


def _generator_spec(args, seed: int) -> GeneratorSpec:
    return GeneratorSpec(
        length=args.length,
        min_value=args.min,
        max_value=args.max,
        spacing_min=args.p1,
        spacing_max=args.p2,
        exponent_range=(args.exp_low, args.exp_high),
        noise_fraction=args.noise,
        seed=seed,
    )


def _add_generator_options(p, required: bool = True) -> None:
    p.add_argument("--length", type=int, required=required, default=None if required else 500)
    p.add_argument("--min", type=float, required=required, default=None if required else 0.0)
    p.add_argument("--max", type=float, required=required, default=None if required else 100.0)
    p.add_argument("--p1", type=int, required=required, default=None if required else 10,
                   help="minimum anchor spacing (samples)")
    p.add_argument("--p2", type=int, required=required, default=None if required else 60,
                   help="maximum anchor spacing (samples)")
    p.add_argument("--noise", type=float, default=0.2, help="noise fraction of the magnitude range")
    p.add_argument("--exp-low", type=float, default=0.1, help="lower interpolation exponent")
    p.add_argument("--exp-high", type=float, default=2.0, help="upper interpolation exponent")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _cmd_generate(args) -> int:
    seed = _resolve_seed(args)
    series = generate_signal(_generator_spec(args, seed))
    io.write_series(series, args.output, format=args.format)
    return 0


def _cmd_deform(args) -> int:
    seed = _resolve_seed(args)
    reference = io.read_series(args.reference)
    pair = compose_variation(reference, VariationClass(args.variation), _variation_params(args), seed=seed)
    io.write_signal_pair(pair, args.output)
    return 0


def _cmd_align(args) -> int:
    variant = DtwVariant(args.variant)
    weights = WeightParams(g=args.g) if args.g is not None else None
    constraint = BandConstraint(width=args.band) if args.band is not None else None

    if args.pair is not None:
        pair = io.read_signal_pair(args.pair)
        x, y, gt = pair.reference, pair.target, pair.ground_truth
    else:
        if args.reference is None or args.target is None:
            raise ParameterError("align needs either --pair or reference and target series files")
        x, y, gt = io.read_series(args.reference), io.read_series(args.target), None

    alignment = align(x, y, variant, weights=weights, constraint=constraint)
    if args.output:
        io.write_alignment(alignment, args.output)

    fields = {"variant": variant.value, "cost": alignment.cost, "adm": metrics.adm(alignment, x, y)}
    if gt is not None:
        fields["adt"] = metrics.adt(alignment, gt)
    if args.format == "csv":
        print(",".join(fields.keys()), file=_STDOUT)
        print(",".join(io.fmt(v) for v in fields.values()), file=_STDOUT)
    else:
        print(io.dumps(fields), file=_STDOUT)
    return 0


def _cmd_fit(args) -> int:
    seed = _resolve_seed(args)
    source = io.read_series(args.source)
    target = io.read_series(args.target)
    sa = SAParams(seed=seed, iterations=args.iterations, cooling=args.cooling)
    report = fit(source, target, x=args.x, sa=sa, mode=PeakMode(args.peak_mode or "normalized"))
    profile = quantify_effects(report, target)
    profile_fields = {
        "peak_effect": profile.peak_effect,
        "scaling_effect": profile.scaling_effect,
        "significant_peaks": profile.significant_peaks,
        "significant_scaling": profile.significant_scaling,
        "converged": report.converged,
    }
    if args.output:
        io.write_fit_report(report, args.output)
        print(io.dumps(profile_fields), file=_STDOUT)
    else:
        report_fields = {
            "scaling": {"loc": report.scaling.location, "W": report.scaling.width, "s": report.scaling.s},
            "peaks": [{"loc": p.location, "width": p.width, "mag": p.magnitude} for p in report.peaks],
            "distance": report.distance,
            "T": report.threshold,
            "converged": report.converged,
            "seed": report.seed,
        }
        print(io.dumps({"report": report_fields, "profile": profile_fields}), file=_STDOUT)
    return 0


def _cmd_optimize_weights(args) -> int:
    seed = _resolve_seed(args)
    pairs = [io.read_signal_pair(p) for p in args.pairs]
    cfg = weightopt.WeightSearchConfig(
        samples=args.samples,
        g_range=(args.g_low, args.g_high),
        objective=weightopt.WeightObjective(args.objective),
        seed=seed,
    )
    variant = DtwVariant(args.variant)
    g, value = weightopt.optimize_g(pairs, variant, cfg)
    io.write_weight_report(variant, g, cfg.objective.value, value, cfg.samples, seed, args.output)
    return 0


def _cmd_bench(args) -> int:
    seed = _resolve_seed(args)
    cfg = bench.SuiteConfig(
        pairs_per_variation=args.pairs,
        variations=tuple(VariationClass(v) for v in args.variations)
        if args.variations
        else bench.ALL_VARIATIONS,
        variants=tuple(DtwVariant(v) for v in args.variants) if args.variants else bench.ALL_VARIANTS,
        generator=_generator_spec(args, seed),
        variation_params=_variation_params(args),
        weight_policy=bench.WeightPolicy(args.weight_policy),
        weight_search=weightopt.WeightSearchConfig(samples=args.samples),
        fixed_g=args.fixed_g,
        band_policy=bench.BandPolicy(args.band_policy),
        fixed_band=args.fixed_band,
        n_classes=args.classes,
        per_class=args.per_class,
        seed=seed,
    )
    if args.suite == "alignment":
        report = bench.run_alignment_suite(cfg)
        paths = io.write_report(report, args.out_dir)
    elif args.suite == "windowing":
        if cfg.band_policy is bench.BandPolicy.NONE:
            cfg = replace(cfg, band_policy=bench.BandPolicy.ORACLE)
        report = bench.run_windowing_suite(cfg)
        paths = io.write_report(report, args.out_dir)
    else:
        report = bench.run_classification_suite(cfg)
        paths = io.write_classification_report(report, args.out_dir)
    for key, path in paths.items():
        print(f"{key}: {path}", file=_STDOUT)
    return 0


def _cmd_classify(args) -> int:
    seed = _resolve_seed(args)
    spec = _generator_spec(args, seed)
    dataset = make_dataset(
        n_classes=args.classes,
        per_class=args.per_class,
        spec=spec,
        deform_ops_range=tuple(args.deform_ops),
        params=_variation_params(args),
        seed=seed,
    )
    if args.dataset_out:
        io.write_dataset(dataset, args.dataset_out)
    variant = DtwVariant(args.variant)
    weights = WeightParams(g=args.g) if args.g is not None else None
    result = knn_classify(dataset, variant, weights=weights)
    sample_ids = [f"test-{i:03d}" for i in dataset.test_idx]
    io.write_classification_csv(result, sample_ids, args.output)
    print(io.dumps({"variant": variant.value, "accuracy": result.accuracy}), file=_STDOUT)
    return 0


def _cmd_search(args) -> int:
    reference = search.curvature_torsion(io.read_polylines(args.reference)[0])
    targets = []
    for path in args.targets:
        targets.extend(search.curvature_torsion(line) for line in io.read_polylines(path))
    variant = DtwVariant(args.variant)
    weights = WeightParams(g=args.g) if args.g is not None else None
    matches = search.sliding_search(
        reference,
        targets,
        variant=variant,
        weights=weights,
        factor_range=(args.factor_low, args.factor_high),
        stride=args.stride,
        threshold=args.threshold,
        pointwise=args.pointwise,
    )
    io.write_matches_csv(matches, args.output)
    print(io.dumps({"matches": len(matches)}), file=_STDOUT)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="warpbench",
        description="Time-series alignment laboratory: synthesis, DTW variants, metrics and suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a synthetic signal")
    _add_generator_options(p, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("deform", help="deform a reference series into a signal pair")
    p.add_argument("reference", help="reference series file")
    p.add_argument("--variation", required=True, choices=[v.value for v in VariationClass])
    _add_variation_options(p)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_deform)

    p = sub.add_parser("align", help="align two series (or a signal-pair file)")
    p.add_argument("reference", nargs="?")
    p.add_argument("target", nargs="?")
    p.add_argument("--pair", help="signal-pair file (enables the time metric)")
    p.add_argument("--variant", default="dtw", choices=[v.value for v in DtwVariant])
    p.add_argument("--g", type=float, help="weight steepness for wdtw/wddtw")
    p.add_argument("--band", type=int, help="warping corridor half-width")
    p.add_argument("-o", "--output", help="alignment JSON output path")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=_cmd_align)

    p = sub.add_parser("fit", help="anneal a source onto a target with scaling plus peaks")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--x", type=float, default=1.0, help="allowed error percentage")
    p.add_argument("--iterations", type=int, default=200)
    p.add_argument("--cooling", type=float, default=0.95)
    p.add_argument("--peak-mode", choices=[m.value for m in PeakMode])
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output", help="fit report JSON path (omit to print everything)")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("optimize-weights", help="Monte-Carlo search for the weight steepness")
    p.add_argument("pairs", nargs="+", help="signal-pair files")
    p.add_argument("--variant", required=True, choices=["wdtw", "wddtw"])
    p.add_argument("--samples", "-K", type=int, default=100)
    p.add_argument("--g-low", type=float, default=0.01)
    p.add_argument("--g-high", type=float, default=1.0)
    p.add_argument("--objective", choices=["adm", "adt"], default="adm")
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_optimize_weights)

    p = sub.add_parser("bench", help="run an evaluation suite")
    p.add_argument("--suite", required=True, choices=["alignment", "windowing", "classification"])
    p.add_argument("--pairs", type=int, default=50)
    p.add_argument("--variations", nargs="+", choices=[v.value for v in VariationClass])
    p.add_argument("--variants", nargs="+", choices=[v.value for v in DtwVariant])
    _add_generator_options(p, required=False)
    _add_variation_options(p)
    p.add_argument("--weight-policy", choices=[w.value for w in bench.WeightPolicy], default="optimized")
    p.add_argument("--samples", type=int, default=16, help="weight search sample count")
    p.add_argument("--fixed-g", type=float, default=0.21)
    p.add_argument("--band-policy", choices=[b.value for b in bench.BandPolicy], default="none")
    p.add_argument("--fixed-band", type=int, default=10)
    p.add_argument("--classes", type=int, default=4)
    p.add_argument("--per-class", type=int, default=10)
    p.add_argument("--seed", type=int)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("classify", help="build a dataset and 1-NN classify it")
    p.add_argument("--classes", type=int, default=4)
    p.add_argument("--per-class", type=int, default=10)
    p.add_argument("--deform-ops", nargs=2, type=int, default=[1, 3], metavar=("LO", "HI"))
    p.add_argument("--variant", default="dtw", choices=[v.value for v in DtwVariant])
    p.add_argument("--g", type=float)
    _add_generator_options(p, required=False)
    _add_variation_options(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--dataset-out", help="also write the dataset bundle JSON")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("search", help="sliding-window profile search over polylines")
    p.add_argument("--reference", required=True, help="polyline file (first line used)")
    p.add_argument("--targets", nargs="+", required=True, help="polyline files")
    p.add_argument("--variant", default="dtw", choices=[v.value for v in DtwVariant])
    p.add_argument("--g", type=float)
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--stride", type=int)
    p.add_argument("--factor-low", type=float, default=0.5)
    p.add_argument("--factor-high", type=float, default=2.0)
    p.add_argument("--pointwise", action="store_true", help="pointwise Euclidean instead of alignment cost")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_search)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ContractViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
