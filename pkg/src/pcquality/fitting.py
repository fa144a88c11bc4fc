"""Least-squares refitting of the quality models from annotated samples.

Samples sharing a codec and a single-lossy-channel condition are collapsed
to (quantization step, mean MOS) pairs, a line (optionally in ln qs) is
fitted through them, and per-content additive offsets are recovered from
the raw residuals afterwards. Individual clouds sit on a common curve
shifted by a content offset, so the offsets average to zero by
construction and the shared mean lives in the intercept.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .codec_params import Codec, CodecParams, CompressionCondition, to_quant_steps
from .errors import (
    DegenerateFitError,
    GroupingError,
    IncompleteDataError,
    ParameterDomainError,
    ValidationError,
)
from .quality_model import GeometryForm, ModelCoefficients

__all__ = [
    "AnnotatedSample",
    "ContentFactor",
    "FitResult",
    "collapse_to_mean",
    "fit_linear",
    "fit_log_linear",
    "estimate_content_factors",
    "fit_condition",
    "fit_codec_models",
]


@dataclass(frozen=True)
class AnnotatedSample:
    """One distorted point cloud: its source content, parameters and MOS."""

    content_id: str
    codec: Codec
    condition: CompressionCondition
    params: CodecParams
    mos: float

    def __post_init__(self):
        if self.params.codec is not self.codec:
            raise ValidationError(
                f"sample codec {self.codec.value} disagrees with params "
                f"codec {self.params.codec.value}"
            )
        if self.params.condition is not self.condition:
            raise ValidationError(
                f"sample condition {self.condition.value} disagrees with "
                f"params condition {self.params.condition.value}"
            )


@dataclass(frozen=True)
class ContentFactor:
    """Additive per-content offset around the fitted curve."""

    content_id: str
    c: float


@dataclass(frozen=True)
class FitResult:
    """A fitted line y = slope*x + intercept (x may be ln qs)."""

    slope: float
    intercept: float
    geometry_form: GeometryForm
    residual_rms: float
    n_points: int
    factors: Tuple[ContentFactor, ...] = ()

    def evaluate(self, qs: float) -> float:
        x = np.log(qs) if self.geometry_form is GeometryForm.NATURAL_LOG else qs
        return self.slope * x + self.intercept


def _single_channel_qs(sample: AnnotatedSample) -> float:
    """The one quantization step of a sample whose condition is single-lossy."""
    steps = to_quant_steps(sample.params)
    if sample.condition is CompressionCondition.LOSSLESS_GEO_LOSSY_ATTR:
        return float(steps.qs_a)
    if sample.condition is CompressionCondition.LOSSY_GEO_LOSSLESS_ATTR:
        return float(steps.qs_g)
    raise GroupingError(
        "condition lossyG_lossyA has two quantization steps; "
        "fitting uses the single-lossy-channel conditions only"
    )


def _check_uniform(samples: Sequence[AnnotatedSample]) -> None:
    codecs = {s.codec for s in samples}
    conditions = {s.condition for s in samples}
    if len(codecs) > 1:
        raise GroupingError(
            f"samples mix codecs: {sorted(c.value for c in codecs)}"
        )
    if len(conditions) > 1:
        raise GroupingError(
            f"samples mix conditions: {sorted(c.value for c in conditions)}"
        )


def collapse_to_mean(
    samples: Sequence[AnnotatedSample], qs_tolerance: float = 0.0
) -> List[Tuple[float, float]]:
    """Group samples by quantization step and average the MOS per group.

    All samples must share one codec and one single-lossy-channel
    condition. Steps are matched exactly by default; a positive
    ``qs_tolerance`` clusters externally supplied steps whose values
    differ by at most that amount (the cluster mean becomes the step).
    Output is sorted by ascending step.
    """
    if not samples:
        return []
    _check_uniform(samples)
    qs_mos = [(_single_channel_qs(s), s.mos) for s in samples]
    if qs_tolerance == 0.0:
        groups: dict = {}
        for qs, mos in qs_mos:
            groups.setdefault(qs, []).append(mos)
        return sorted((qs, float(np.mean(m))) for qs, m in groups.items())
    qs_mos.sort()
    clusters: List[Tuple[List[float], List[float]]] = []
    for qs, mos in qs_mos:
        if clusters and qs - clusters[-1][0][0] <= qs_tolerance:
            clusters[-1][0].append(qs)
            clusters[-1][1].append(mos)
        else:
            clusters.append(([qs], [mos]))
    return [(float(np.mean(q)), float(np.mean(m))) for q, m in clusters]


def fit_linear(points: Sequence[Tuple[float, float]]) -> FitResult:
    """Ordinary least squares line through (x, y) points.

    Uses the closed-form normal equations of the two-parameter problem,
    which is numerically adequate for the few dozen points a collapsed
    sample group produces.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 2:
        raise DegenerateFitError(f"need at least 2 (x, y) points, got {len(pts)}")
    x, y = pts[:, 0], pts[:, 1]
    if np.unique(x).size < 2:
        raise DegenerateFitError("need at least 2 distinct x values")
    dx = x - x.mean()
    slope = float(np.sum(dx * (y - y.mean())) / np.sum(dx * dx))
    intercept = float(y.mean() - slope * x.mean())
    residuals = y - (slope * x + intercept)
    return FitResult(
        slope=slope,
        intercept=intercept,
        geometry_form=GeometryForm.LINEAR,
        residual_rms=float(np.sqrt(np.mean(residuals * residuals))),
        n_points=len(pts),
    )


def fit_log_linear(points: Sequence[Tuple[float, float]]) -> FitResult:
    """Least squares fit of y = slope*ln(x) + intercept; requires x > 0."""
    pts = list(points)
    for x, _ in pts:
        if x <= 0:
            raise ParameterDomainError("x", f"must be > 0 for a log fit, got {x!r}")
    fit = fit_linear([(float(np.log(x)), y) for x, y in pts])
    return replace(fit, geometry_form=GeometryForm.NATURAL_LOG)


def estimate_content_factors(
    samples: Sequence[AnnotatedSample], fit: FitResult
) -> List[ContentFactor]:
    """Per-content additive offsets around a fitted curve.

    Each content's offset is the mean of its raw residuals mos - F(qs);
    the offsets are then recentred to sum to zero because their common
    mean is already absorbed by the fitted intercept.
    """
    by_content: dict = {}
    for s in samples:
        by_content.setdefault(s.content_id, []).append(
            s.mos - fit.evaluate(_single_channel_qs(s))
        )
    raw = {cid: float(np.mean(r)) for cid, r in by_content.items()}
    shift = float(np.mean(list(raw.values()))) if raw else 0.0
    return [ContentFactor(cid, raw[cid] - shift) for cid in sorted(raw)]


def fit_condition(samples: Sequence[AnnotatedSample]) -> FitResult:
    """Collapse one single-condition sample group and fit its model.

    The attribute condition always gets a linear fit; the geometry
    condition gets a log fit for V-PCC and a linear fit otherwise.
    Content factors are estimated from the raw samples and attached.
    """
    if not samples:
        raise IncompleteDataError("cannot fit an empty sample group")
    _check_uniform(samples)
    codec = samples[0].codec
    condition = samples[0].condition
    collapsed = collapse_to_mean(samples)
    if condition is CompressionCondition.LOSSY_GEO_LOSSLESS_ATTR and codec is Codec.VPCC:
        fit = fit_log_linear(collapsed)
    else:
        fit = fit_linear(collapsed)
    return replace(fit, factors=tuple(estimate_content_factors(samples, fit)))


def fit_codec_models(samples: Iterable[AnnotatedSample]) -> ModelCoefficients:
    """Fit one codec's attribute and geometry models from annotated samples.

    Requires both a losslessG_lossyA group and a lossyG_losslessA group;
    lossyG_lossyA samples are ignored here (they serve as evaluation data).
    The combined-model constants derive from the returned coefficients.
    """
    samples = list(samples)
    if not samples:
        raise IncompleteDataError("no samples supplied")
    codecs = {s.codec for s in samples}
    if len(codecs) > 1:
        raise GroupingError(
            f"samples mix codecs: {sorted(c.value for c in codecs)}"
        )
    codec = samples[0].codec
    attr_group = [
        s for s in samples
        if s.condition is CompressionCondition.LOSSLESS_GEO_LOSSY_ATTR
    ]
    geom_group = [
        s for s in samples
        if s.condition is CompressionCondition.LOSSY_GEO_LOSSLESS_ATTR
    ]
    if not attr_group:
        raise IncompleteDataError(
            "missing condition losslessG_lossyA (needed for the attribute model)"
        )
    if not geom_group:
        raise IncompleteDataError(
            "missing condition lossyG_losslessA (needed for the geometry model)"
        )
    attr_fit = fit_condition(attr_group)
    geom_fit = fit_condition(geom_group)
    return ModelCoefficients(
        codec=codec,
        c1_a=attr_fit.slope,
        c2_a=attr_fit.intercept,
        c1_g=geom_fit.slope,
        c2_g=geom_fit.intercept,
        geometry_form=geom_fit.geometry_form,
    )
