"""Codec compression parameters and their conversion to quantization steps.

V-PCC and G-PCC control attribute coding with an HEVC-style quantizer
parameter whose step doubles every 6 QP. G-PCC geometry is driven by a
position scale whose reciprocal is the step, AVS attribute coding uses a
base 2^(1/8) exponent, and AVS geometry exposes the step directly. The
converters below unify all of them into quantization steps ``qs_a`` and
``qs_g``, the only inputs the quality models consume.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from .errors import ParameterDomainError

__all__ = [
    "Codec",
    "CompressionCondition",
    "CodecParams",
    "QuantSteps",
    "vpcc_qp_to_qs",
    "gpcc_attr_qp_to_qs",
    "gpcc_scale_to_qs",
    "avs_attr_qp_to_qs",
    "avs_geom_step_to_qs",
    "to_quant_steps",
]

QP_MIN = 0
QP_MAX = 51


class Codec(Enum):
    """Supported point-cloud compression schemes."""

    VPCC = "VPCC"
    GPCC = "GPCC"
    AVS = "AVS"

    @classmethod
    def parse(cls, token: str) -> "Codec":
        try:
            return cls[token.strip().upper()]
        except KeyError:
            raise ParameterDomainError(
                "codec", f"unknown codec {token!r} (expected VPCC, GPCC or AVS)"
            ) from None


class CompressionCondition(Enum):
    """Which of the geometry/attribute channels were coded lossily."""

    LOSSLESS_GEO_LOSSY_ATTR = "losslessG_lossyA"
    LOSSY_GEO_LOSSLESS_ATTR = "lossyG_losslessA"
    LOSSY_GEO_LOSSY_ATTR = "lossyG_lossyA"

    @property
    def lossy_attribute(self) -> bool:
        return self in (
            CompressionCondition.LOSSLESS_GEO_LOSSY_ATTR,
            CompressionCondition.LOSSY_GEO_LOSSY_ATTR,
        )

    @property
    def lossy_geometry(self) -> bool:
        return self in (
            CompressionCondition.LOSSY_GEO_LOSSLESS_ATTR,
            CompressionCondition.LOSSY_GEO_LOSSY_ATTR,
        )

    @classmethod
    def parse(cls, token: str) -> "CompressionCondition":
        # Tokens are case-sensitive; they are also the on-disk CSV vocabulary.
        for member in cls:
            if member.value == token:
                return member
        raise ParameterDomainError(
            "condition",
            f"unknown condition {token!r} (expected one of "
            f"{', '.join(m.value for m in cls)})",
        )


def _require_integer(field: str, value: float) -> int:
    if isinstance(value, bool) or not float(value).is_integer():
        raise ParameterDomainError(field, f"must be an integer, got {value!r}")
    return int(value)


def vpcc_qp_to_qs(qp: Union[int, float]) -> int:
    """Quantization step for a V-PCC texture/geometry QP: round(2^((QP-4)/6)).

    Rounding is half away from zero. Valid QP range is [0, 51].
    """
    qp = _require_integer("qp", qp)
    if not QP_MIN <= qp <= QP_MAX:
        raise ParameterDomainError("qp", f"must lie in [{QP_MIN}, {QP_MAX}], got {qp}")
    return int(math.floor(2.0 ** ((qp - 4) / 6.0) + 0.5))


def gpcc_attr_qp_to_qs(qp: Union[int, float]) -> int:
    """Quantization step for a G-PCC attribute qp; same scale as V-PCC QP."""
    return vpcc_qp_to_qs(qp)


def gpcc_scale_to_qs(scale: float) -> float:
    """Geometry quantization step for a G-PCC positionQuantizationScale.

    The step is the reciprocal of the scale; no rounding is applied.
    """
    if not 0.0 < scale <= 1.0:
        raise ParameterDomainError("scale", f"must lie in (0, 1], got {scale!r}")
    return 1.0 / scale


def avs_attr_qp_to_qs(qp_a: float) -> float:
    """Attribute quantization step for an AVS attr_quant_param: 2^(QPa/8).

    Unrounded; the AVS attribute quantizer steps in eighths of an octave.
    """
    if qp_a < 0:
        raise ParameterDomainError("qp_a", f"must be >= 0, got {qp_a!r}")
    return 2.0 ** (qp_a / 8.0)


def avs_geom_step_to_qs(step: float) -> float:
    """AVS geom_quant_step is already a quantization step; identity map."""
    if step < 1:
        raise ParameterDomainError("step", f"must be >= 1, got {step!r}")
    return step


@dataclass(frozen=True)
class CodecParams:
    """Raw encoder parameters for one compressed point cloud.

    ``attr_param`` is the textureQP (V-PCC), qp (G-PCC) or attr_quant_param
    (AVS); ``geom_param`` is the geomQP (V-PCC), positionQuantizationScale
    (G-PCC) or geom_quant_step (AVS). A parameter must be present exactly
    when its channel is coded lossily under ``condition``.
    """

    codec: Codec
    condition: CompressionCondition
    attr_param: Optional[float] = None
    geom_param: Optional[float] = None

    def __post_init__(self):
        if self.condition.lossy_attribute and self.attr_param is None:
            raise ParameterDomainError(
                "attr_param", f"required for condition {self.condition.value}"
            )
        if not self.condition.lossy_attribute and self.attr_param is not None:
            raise ParameterDomainError(
                "attr_param", f"must be absent for condition {self.condition.value}"
            )
        if self.condition.lossy_geometry and self.geom_param is None:
            raise ParameterDomainError(
                "geom_param", f"required for condition {self.condition.value}"
            )
        if not self.condition.lossy_geometry and self.geom_param is not None:
            raise ParameterDomainError(
                "geom_param", f"must be absent for condition {self.condition.value}"
            )
        # Range checks mirror the per-codec converters so invalid values are
        # rejected at construction rather than at first use.
        if self.attr_param is not None:
            if self.codec in (Codec.VPCC, Codec.GPCC):
                qp = _require_integer("attr_param", self.attr_param)
                if not QP_MIN <= qp <= QP_MAX:
                    raise ParameterDomainError(
                        "attr_param", f"QP must lie in [{QP_MIN}, {QP_MAX}], got {qp}"
                    )
            elif self.attr_param < 0:
                raise ParameterDomainError(
                    "attr_param", f"must be >= 0, got {self.attr_param!r}"
                )
        if self.geom_param is not None:
            if self.codec is Codec.VPCC:
                qp = _require_integer("geom_param", self.geom_param)
                if not QP_MIN <= qp <= QP_MAX:
                    raise ParameterDomainError(
                        "geom_param", f"QP must lie in [{QP_MIN}, {QP_MAX}], got {qp}"
                    )
            elif self.codec is Codec.GPCC:
                if not 0.0 < self.geom_param <= 1.0:
                    raise ParameterDomainError(
                        "geom_param",
                        f"scale must lie in (0, 1], got {self.geom_param!r}",
                    )
            elif self.geom_param < 1:
                raise ParameterDomainError(
                    "geom_param", f"step must be >= 1, got {self.geom_param!r}"
                )


@dataclass(frozen=True)
class QuantSteps:
    """Unified attribute/geometry quantization steps; None means lossless."""

    qs_a: Optional[float] = None
    qs_g: Optional[float] = None


_ATTR_CONVERTERS = {
    Codec.VPCC: vpcc_qp_to_qs,
    Codec.GPCC: gpcc_attr_qp_to_qs,
    Codec.AVS: avs_attr_qp_to_qs,
}

_GEOM_CONVERTERS = {
    Codec.VPCC: vpcc_qp_to_qs,
    Codec.GPCC: gpcc_scale_to_qs,
    Codec.AVS: avs_geom_step_to_qs,
}


def to_quant_steps(params: CodecParams) -> QuantSteps:
    """Convert raw codec parameters to unified quantization steps.

    Each present parameter is dispatched to the converter for its codec
    and channel; absent parameters stay absent.
    """

    def _convert(converter, value):
        try:
            return converter(value)
        except ParameterDomainError as exc:
            raise ParameterDomainError(
                exc.field,
                f"{exc.reason} [codec={params.codec.value}, "
                f"condition={params.condition.value}]",
            ) from None

    qs_a = None
    if params.attr_param is not None:
        qs_a = _convert(_ATTR_CONVERTERS[params.codec], params.attr_param)
    qs_g = None
    if params.geom_param is not None:
        qs_g = _convert(_GEOM_CONVERTERS[params.codec], params.geom_param)
    return QuantSteps(qs_a=qs_a, qs_g=qs_g)
