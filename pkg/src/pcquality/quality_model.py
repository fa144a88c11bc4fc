"""Quantization-step quality models: predict MOS from qs_a and qs_g.

Each codec carries a fitted attribute model (linear in qs_a) and a fitted
geometry model (logarithmic in qs_g for V-PCC, linear for G-PCC and AVS).
When both channels are lossy the two sub-models are combined; the default
linear combination halves both slopes and averages the intercepts so the
result stays on the subjective 1..5 scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .codec_params import Codec, CodecParams, CompressionCondition, to_quant_steps
from .errors import NumericDomainError, ParameterDomainError, ValidationError

__all__ = [
    "GeometryForm",
    "CombinationScheme",
    "ModelCoefficients",
    "PredictedScore",
    "DEFAULT_COEFFICIENTS",
    "default_coefficients",
    "predict_attribute",
    "predict_geometry",
    "predict_combined",
    "predict",
    "SCORE_MIN",
    "SCORE_MAX",
]

# Bounds of the five-grade absolute category rating scale the models were
# fitted on. SCORE_MAX doubles as the ceiling M used to normalize sub-scores
# in the non-linear combination schemes.
SCORE_MIN = 1.0
SCORE_MAX = 5.0


class GeometryForm(Enum):
    """Functional form of the geometry sub-model."""

    LINEAR = "linear"
    NATURAL_LOG = "natural_log"

    @classmethod
    def parse(cls, token: str) -> "GeometryForm":
        for member in cls:
            if member.value == token:
                return member
        raise ParameterDomainError(
            "geometry_form",
            f"unknown form {token!r} (expected 'linear' or 'natural_log')",
        )

    @classmethod
    def default_for(cls, codec: Codec) -> "GeometryForm":
        return cls.NATURAL_LOG if codec is Codec.VPCC else cls.LINEAR


class CombinationScheme(Enum):
    """How attribute and geometry sub-scores merge into one prediction.

    LINEAR averages the two sub-scores. The other three normalize each
    sub-score by the scale ceiling M: MULTIPLICATIVE is M*(a/M)*(g/M),
    G_POWER_A is M*(g/M)^(M/a) and A_POWER_G is M*(a/M)^(M/g). The
    exponent M/x equals 1 when the modulating sub-score is perfect, so
    each power scheme degenerates to the other sub-score there, and it
    grows as that sub-score drops, so every scheme stays strictly
    decreasing in both quantization steps while sub-scores lie in (0, M).
    """

    LINEAR = "linear"
    MULTIPLICATIVE = "multiplicative"
    G_POWER_A = "gpowera"
    A_POWER_G = "apowerg"

    @classmethod
    def parse(cls, token: str) -> "CombinationScheme":
        for member in cls:
            if member.value == token:
                return member
        raise ParameterDomainError(
            "scheme",
            f"unknown scheme {token!r} (expected one of "
            f"{', '.join(m.value for m in cls)})",
        )


@dataclass(frozen=True)
class ModelCoefficients:
    """Fitted constants of one codec's attribute and geometry models.

    c1_a/c2_a are the attribute slope and intercept; c1_g/c2_g the geometry
    slope and intercept (the slope applies to ln(qs_g) under the NATURAL_LOG
    form). The combined-model constants are always derived, never stored.
    """

    codec: Codec
    c1_a: float
    c2_a: float
    c1_g: float
    c2_g: float
    geometry_form: GeometryForm

    @property
    def p1_a(self) -> float:
        return self.c1_a / 2.0

    @property
    def p1_g(self) -> float:
        return self.c1_g / 2.0

    @property
    def p_combined(self) -> float:
        return (self.c2_a + self.c2_g) / 2.0


DEFAULT_COEFFICIENTS = {
    Codec.VPCC: ModelCoefficients(
        Codec.VPCC, -0.0089, 4.4862, -0.559, 5.4165, GeometryForm.NATURAL_LOG
    ),
    Codec.GPCC: ModelCoefficients(
        Codec.GPCC, -0.01, 5.3515, -0.2381, 5.3818, GeometryForm.LINEAR
    ),
    Codec.AVS: ModelCoefficients(
        Codec.AVS, -0.0519, 5.1337, -0.273, 5.5034, GeometryForm.LINEAR
    ),
}


def default_coefficients(codec: Codec) -> ModelCoefficients:
    """Shipped default model constants for one codec."""
    return DEFAULT_COEFFICIENTS[codec]


@dataclass(frozen=True)
class PredictedScore:
    """A predicted MOS; ``clamped`` is True when clamping changed the value."""

    value: float
    clamped: bool = False


def _finish(value: float, clamp: bool) -> PredictedScore:
    if clamp:
        bounded = min(max(value, SCORE_MIN), SCORE_MAX)
        return PredictedScore(bounded, bounded != value)
    return PredictedScore(value, False)


def _check_qs(field: str, qs: float) -> None:
    if qs < 1:
        raise ParameterDomainError(field, f"quantization step must be >= 1, got {qs!r}")


def _geometry_term(coeffs: ModelCoefficients, qs_g: float) -> float:
    if coeffs.geometry_form is GeometryForm.NATURAL_LOG:
        return math.log(qs_g)
    return qs_g


def predict_attribute(
    coeffs: ModelCoefficients, qs_a: float, clamp: bool = False
) -> PredictedScore:
    """Predicted MOS under attribute-only compression: c1_a*qs_a + c2_a."""
    _check_qs("qs_a", qs_a)
    return _finish(coeffs.c1_a * qs_a + coeffs.c2_a, clamp)


def predict_geometry(
    coeffs: ModelCoefficients, qs_g: float, clamp: bool = False
) -> PredictedScore:
    """Predicted MOS under geometry-only compression.

    Evaluates c1_g*ln(qs_g) + c2_g or c1_g*qs_g + c2_g depending on the
    coefficient set's geometry form.
    """
    _check_qs("qs_g", qs_g)
    return _finish(coeffs.c1_g * _geometry_term(coeffs, qs_g) + coeffs.c2_g, clamp)


def predict_combined(
    coeffs: ModelCoefficients,
    qs_a: float,
    qs_g: float,
    scheme: CombinationScheme = CombinationScheme.LINEAR,
    clamp: bool = False,
    ceiling: float = SCORE_MAX,
) -> PredictedScore:
    """Predicted MOS when both channels are lossy.

    Sub-scores are always evaluated unclamped; only the combined value is
    optionally clamped. The power schemes require strictly positive
    sub-scores and raise NumericDomainError otherwise instead of returning
    NaN or a complex value.
    """
    _check_qs("qs_a", qs_a)
    _check_qs("qs_g", qs_g)
    if scheme is CombinationScheme.LINEAR:
        value = (
            coeffs.p1_a * qs_a
            + coeffs.p1_g * _geometry_term(coeffs, qs_g)
            + coeffs.p_combined
        )
        return _finish(value, clamp)

    mos_a = predict_attribute(coeffs, qs_a).value
    mos_g = predict_geometry(coeffs, qs_g).value
    if scheme is CombinationScheme.MULTIPLICATIVE:
        value = ceiling * (mos_a / ceiling) * (mos_g / ceiling)
    else:
        if mos_a <= 0 or mos_g <= 0:
            raise NumericDomainError(
                f"power-scheme sub-scores must be positive, got "
                f"mos_a={mos_a:.6g}, mos_g={mos_g:.6g}"
            )
        if scheme is CombinationScheme.G_POWER_A:
            value = ceiling * (mos_g / ceiling) ** (ceiling / mos_a)
        else:
            value = ceiling * (mos_a / ceiling) ** (ceiling / mos_g)
    return _finish(value, clamp)


def predict(
    params: CodecParams,
    coeffs: Optional[ModelCoefficients] = None,
    scheme: CombinationScheme = CombinationScheme.LINEAR,
    clamp: bool = False,
) -> PredictedScore:
    """End-to-end prediction from raw codec parameters.

    Converts the parameters to quantization steps and routes to the
    attribute, geometry or combined model according to the condition.
    A lossless channel is skipped entirely, never evaluated at qs = 1.
    """
    if coeffs is None:
        coeffs = default_coefficients(params.codec)
    elif coeffs.codec is not params.codec:
        raise ValidationError(
            f"coefficients are for {coeffs.codec.value}, "
            f"parameters are for {params.codec.value}"
        )
    qs = to_quant_steps(params)
    condition = params.condition
    if condition is CompressionCondition.LOSSLESS_GEO_LOSSY_ATTR:
        return predict_attribute(coeffs, qs.qs_a, clamp=clamp)
    if condition is CompressionCondition.LOSSY_GEO_LOSSLESS_ATTR:
        return predict_geometry(coeffs, qs.qs_g, clamp=clamp)
    return predict_combined(coeffs, qs.qs_a, qs.qs_g, scheme=scheme, clamp=clamp)
