"""Command line front end for the point-cloud quality toolkit.

    pcquality convert  --codec vpcc --condition lossyG_lossyA --geom 24 --attr 32
    pcquality predict  --codec avs --condition lossyG_lossyA --geom 8 --attr 40
    pcquality fit      --input samples.csv --out coeffs.txt
    pcquality evaluate --input samples.csv --split test --scheme linear
    pcquality baseline --ref a.ply --deg b.ply --metrics p2point,psnryuv
    pcquality curve    --codec vpcc --condition lossyG_losslessA --qs-min 1 --qs-max 100 --steps 100

Machine-readable output (CSV or a single value) goes to stdout; all
diagnostics go to stderr. Exit codes: 0 success, 1 validation error,
2 I/O error, 3 numeric-domain error.
"""

from __future__ import annotations

import argparse
import math
import sys
from typing import Dict, List, Optional

from . import __version__
from .codec_params import Codec, CodecParams, CompressionCondition, to_quant_steps
from .dataset_io import load_coefficients, load_samples, save_coefficients
from .errors import NumericDomainError, ValidationError
from .fitting import fit_codec_models, fit_condition
from .fullref import p2plane, p2point, psnr_yuv
from .ply_io import parse_ply
from .quality_model import (
    DEFAULT_COEFFICIENTS,
    CombinationScheme,
    ModelCoefficients,
    predict,
    predict_attribute,
    predict_combined,
    predict_geometry,
)
from .stats import error_summary, plcc, rmse, srocc

__all__ = ["main", "run"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    if float(value).is_integer():
        return str(int(value))
    return f"{value:.10g}"


def _build_params(args) -> CodecParams:
    codec = Codec.parse(args.codec)
    condition = CompressionCondition.parse(args.condition)
    if condition.lossy_attribute and args.attr is None:
        raise ValidationError(f"--attr is required for condition {condition.value}")
    if condition.lossy_geometry and args.geom is None:
        raise ValidationError(f"--geom is required for condition {condition.value}")
    if not condition.lossy_attribute and args.attr is not None:
        raise ValidationError(f"--attr must be omitted for condition {condition.value}")
    if not condition.lossy_geometry and args.geom is not None:
        raise ValidationError(f"--geom must be omitted for condition {condition.value}")
    return CodecParams(
        codec=codec, condition=condition, attr_param=args.attr, geom_param=args.geom
    )


def _coefficients(path: Optional[str]) -> Dict[Codec, ModelCoefficients]:
    if path is None:
        return dict(DEFAULT_COEFFICIENTS)
    return {c.codec: c for c in load_coefficients(path)}


def _codec_coefficients(table: Dict[Codec, ModelCoefficients], codec: Codec):
    if codec not in table:
        raise ValidationError(f"coefficient file has no entry for {codec.value}")
    return table[codec]


def _cmd_convert(args) -> int:
    steps = to_quant_steps(_build_params(args))
    print("qs_a,qs_g")
    print(f"{_fmt(steps.qs_a)},{_fmt(steps.qs_g)}")
    return 0


def _cmd_predict(args) -> int:
    params = _build_params(args)
    coeffs = _codec_coefficients(_coefficients(args.coeffs), params.codec)
    scheme = CombinationScheme.parse(args.scheme)
    score = predict(params, coeffs, scheme=scheme, clamp=args.clamp)
    print(_fmt(score.value))
    return 0


def _select_codecs(samples, requested: Optional[str]) -> List[Codec]:
    present = {s.codec for s in samples}
    if requested is not None:
        codec = Codec.parse(requested)
        if codec not in present:
            raise ValidationError(f"input has no rows for codec {codec.value}")
        return [codec]
    return [c for c in Codec if c in present]


def _cmd_fit(args) -> int:
    manifest = load_samples(args.input)
    codecs = _select_codecs(manifest.samples, args.codec)
    fitted: List[ModelCoefficients] = []
    rows: List[str] = []
    for codec in codecs:
        group = [s for s in manifest.samples if s.codec is codec]
        fitted.append(fit_codec_models(group))
        for condition in (
            CompressionCondition.LOSSLESS_GEO_LOSSY_ATTR,
            CompressionCondition.LOSSY_GEO_LOSSLESS_ATTR,
        ):
            fit = fit_condition([s for s in group if s.condition is condition])
            rows.append(
                f"{codec.value},{condition.value},{_fmt(fit.slope)},"
                f"{_fmt(fit.intercept)},{fit.geometry_form.value},"
                f"{_fmt(fit.residual_rms)},{fit.n_points}"
            )
    save_coefficients(fitted, args.out)
    print("codec,condition,slope,intercept,form,residual_rms,n_points")
    for row in rows:
        print(row)
    print(f"wrote {len(fitted)} coefficient set(s) to {args.out}", file=sys.stderr)
    return 0


_SPLITS = {
    "train": (
        CompressionCondition.LOSSLESS_GEO_LOSSY_ATTR,
        CompressionCondition.LOSSY_GEO_LOSSLESS_ATTR,
    ),
    "test": (CompressionCondition.LOSSY_GEO_LOSSY_ATTR,),
    "all": tuple(CompressionCondition),
}


def _cmd_evaluate(args) -> int:
    manifest = load_samples(args.input)
    conditions = _SPLITS[args.split]
    selected = [s for s in manifest.samples if s.condition in conditions]
    if not selected:
        raise ValidationError(f"no rows in split {args.split!r}")
    table = _coefficients(args.coeffs)
    scheme = CombinationScheme.parse(args.scheme)
    print("metric,codec,condition,value")
    for codec in _select_codecs(selected, args.codec):
        group = [s for s in selected if s.codec is codec]
        coeffs = _codec_coefficients(table, codec)
        predicted = [predict(s.params, coeffs, scheme=scheme).value for s in group]
        observed = [s.mos for s in group]
        residuals = [o - p for o, p in zip(observed, predicted)]
        summary = error_summary(residuals)
        for metric, value in (
            ("plcc", plcc(predicted, observed)),
            ("srocc", srocc(predicted, observed)),
            ("rmse", rmse(predicted, observed)),
            ("err_mean", summary.mean),
            ("err_std", summary.std_dev),
            ("err_q95", summary.quantile_95),
        ):
            print(f"{metric},{codec.value},{args.split},{_fmt(value)}")
    return 0


def _parse_peak(token: str) -> Optional[float]:
    if token == "diagonal":
        return None
    if token.startswith("value:"):
        try:
            return float(token[len("value:"):])
        except ValueError:
            raise ValidationError(f"bad --peak value in {token!r}") from None
    raise ValidationError(f"--peak must be 'diagonal' or 'value:<x>', got {token!r}")


def _cmd_baseline(args) -> int:
    metrics = [m.strip() for m in args.metrics.split(",") if m.strip()]
    known = ("p2point", "p2plane", "psnryuv")
    for m in metrics:
        if m not in known:
            raise ValidationError(
                f"unknown metric {m!r} (expected a comma list of {', '.join(known)})"
            )
    if not metrics:
        raise ValidationError("--metrics selected nothing")
    ref = parse_ply(args.ref)
    deg = parse_ply(args.deg)
    peak = _parse_peak(args.peak)
    print("metric,value")
    for m in metrics:
        if m == "psnryuv":
            report = psnr_yuv(ref, deg)
            for field in ("psnr_y", "psnr_u", "psnr_v", "psnr_yuv"):
                print(f"psnryuv.{field},{_fmt(getattr(report, field))}")
            continue
        geo = p2point(ref, deg, peak) if m == "p2point" else p2plane(ref, deg, peak)
        if m == "p2plane" and geo.mse_ab is None:
            print(
                "warning: p2plane ref-to-deg direction skipped "
                "(degraded cloud has no normals)",
                file=sys.stderr,
            )
        for field in (
            "mse_ab", "mse_ba", "mse_sym", "hausdorff_sym",
            "psnr_mse", "psnr_hausdorff", "peak",
        ):
            print(f"{m}.{field},{_fmt(getattr(geo, field))}")
    return 0


def _cmd_curve(args) -> int:
    codec = Codec.parse(args.codec)
    condition = CompressionCondition.parse(args.condition)
    coeffs = _codec_coefficients(_coefficients(args.coeffs), codec)
    scheme = CombinationScheme.parse(args.scheme)
    if args.qs_min < 1:
        raise ValidationError(f"--qs-min must be >= 1, got {args.qs_min!r}")
    if args.qs_max < args.qs_min:
        raise ValidationError("--qs-max must be >= --qs-min")
    if args.steps < 1:
        raise ValidationError(f"--steps must be >= 1, got {args.steps!r}")
    if args.steps == 1:
        grid = [args.qs_min]
    else:
        span = args.qs_max - args.qs_min
        grid = [args.qs_min + span * i / (args.steps - 1) for i in range(args.steps)]
    print("qs,mos")
    for qs in grid:
        if condition is CompressionCondition.LOSSLESS_GEO_LOSSY_ATTR:
            score = predict_attribute(coeffs, qs, clamp=args.clamp)
        elif condition is CompressionCondition.LOSSY_GEO_LOSSLESS_ATTR:
            score = predict_geometry(coeffs, qs, clamp=args.clamp)
        else:
            score = predict_combined(coeffs, qs, qs, scheme=scheme, clamp=args.clamp)
        print(f"{_fmt(qs)},{_fmt(score.value)}")
    return 0


def _add_params_flags(sub) -> None:
    sub.add_argument(
        "--codec", required=True, type=str.lower, choices=["vpcc", "gpcc", "avs"]
    )
    sub.add_argument(
        "--condition", required=True,
        choices=[c.value for c in CompressionCondition],
    )
    sub.add_argument("--attr", type=float, default=None,
                     help="attribute parameter (textureQP / qp / attr_quant_param)")
    sub.add_argument("--geom", type=float, default=None,
                     help="geometry parameter (geomQP / scale / geom_quant_step)")


def _scheme_flag(sub) -> None:
    sub.add_argument(
        "--scheme", default=CombinationScheme.LINEAR.value,
        choices=[s.value for s in CombinationScheme],
    )


def _build_parser() -> _Parser:
    parser = _Parser(prog="pcquality", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    convert = subs.add_parser("convert", help="codec parameters to quantization steps")
    _add_params_flags(convert)
    convert.set_defaults(handler=_cmd_convert)

    pred = subs.add_parser("predict", help="predict MOS from codec parameters")
    _add_params_flags(pred)
    _scheme_flag(pred)
    pred.add_argument("--coeffs", default=None, help="coefficient file (default: built-in)")
    pred.add_argument("--clamp", action="store_true", help="clamp output to [1, 5]")
    pred.set_defaults(handler=_cmd_predict)

    fit = subs.add_parser("fit", help="refit model coefficients from annotations")
    fit.add_argument("--input", required=True, help="annotated samples CSV")
    fit.add_argument("--codec", type=str.lower, choices=["vpcc", "gpcc", "avs"],
                     default=None, help="fit only this codec")
    fit.add_argument("--out", required=True, help="coefficient file to write")
    fit.set_defaults(handler=_cmd_fit)

    ev = subs.add_parser("evaluate", help="score predictions against annotations")
    ev.add_argument("--input", required=True, help="annotated samples CSV")
    ev.add_argument("--coeffs", default=None)
    ev.add_argument("--codec", type=str.lower, choices=["vpcc", "gpcc", "avs"],
                    default=None)
    _scheme_flag(ev)
    ev.add_argument("--split", default="all", choices=sorted(_SPLITS))
    ev.set_defaults(handler=_cmd_evaluate)

    base = subs.add_parser("baseline", help="full-reference metrics over PLY files")
    base.add_argument("--ref", required=True, help="reference PLY")
    base.add_argument("--deg", required=True, help="degraded PLY")
    base.add_argument("--metrics", default="p2point",
                      help="comma list of p2point,p2plane,psnryuv")
    base.add_argument("--peak", default="diagonal",
                      help="'diagonal' or 'value:<x>' for geometry PSNR")
    base.set_defaults(handler=_cmd_baseline)

    curve = subs.add_parser("curve", help="export a (qs, predicted MOS) curve")
    curve.add_argument("--codec", required=True, type=str.lower,
                       choices=["vpcc", "gpcc", "avs"])
    curve.add_argument("--condition", required=True,
                       choices=[c.value for c in CompressionCondition])
    curve.add_argument("--coeffs", default=None)
    _scheme_flag(curve)
    curve.add_argument("--qs-min", type=float, required=True)
    curve.add_argument("--qs-max", type=float, required=True)
    curve.add_argument("--steps", type=int, required=True)
    curve.add_argument("--clamp", action="store_true")
    curve.set_defaults(handler=_cmd_curve)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except SystemExit as exc:  # argparse --help / --version
        return 0 if exc.code in (0, None) else 1
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericDomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
