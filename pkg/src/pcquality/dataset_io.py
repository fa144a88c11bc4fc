"""Annotated-sample CSV ingest, built-in parameter grids and coefficient files.

The sample CSV schema is `content_id,codec,condition,geom_param,attr_param,mos`
with empty fields for absent parameters. Coefficient files are plain text,
one `CODEC.field = value` entry per line with fields c1_a, c2_a, c1_g, c2_g
and geometry_form.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .codec_params import Codec, CodecParams, CompressionCondition
from .errors import (
    DataFormatError,
    DuplicateEntryError,
    ParameterDomainError,
    ValidationError,
)
from .fitting import AnnotatedSample
from .quality_model import GeometryForm, ModelCoefficients

__all__ = [
    "SAMPLE_CSV_HEADER",
    "FULL_DATASET_ROWS",
    "ParameterGrid",
    "DatasetManifest",
    "load_samples",
    "save_samples",
    "builtin_grid",
    "save_coefficients",
    "load_coefficients",
    "format_number",
]

SAMPLE_CSV_HEADER = ("content_id", "codec", "condition", "geom_param", "attr_param", "mos")

# 5 contents x 3 codecs x 3 conditions x 5 levels in a complete annotation run.
FULL_DATASET_ROWS = 225

MOS_MIN = 1.0
MOS_MAX = 5.0


def format_number(value: Union[int, float, None]) -> str:
    """Render a number for CSV output; integral values drop their decimals."""
    if value is None:
        return ""
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


@dataclass(frozen=True)
class DatasetManifest:
    """Validated samples loaded from one CSV file."""

    samples: Tuple[AnnotatedSample, ...]
    source_path: str
    row_count: int


def _parse_optional_float(token: str, field: str, line_no: int) -> Optional[float]:
    token = token.strip()
    if token == "":
        return None
    try:
        return float(token)
    except ValueError:
        raise DataFormatError(
            f"line {line_no}: {field} is not a number: {token!r}"
        ) from None


def load_samples(
    path,
    expect_full_dataset: bool = False,
    enforce_mos_range: bool = True,
) -> DatasetManifest:
    """Load and validate an annotated-sample CSV file.

    Every row is checked against the parameter-domain rules of its codec
    and condition; the first offending row raises with its line number.
    ``expect_full_dataset`` additionally requires exactly 225 rows.
    ``enforce_mos_range=False`` admits scores outside [1, 5] for datasets
    normalized onto other scales.
    """
    with open(path, "r", newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError(f"{path}: empty file, expected a header row") from None
        if tuple(h.strip() for h in header) != SAMPLE_CSV_HEADER:
            raise DataFormatError(
                f"{path}: bad header {header!r}, expected "
                f"{','.join(SAMPLE_CSV_HEADER)}"
            )
        samples: List[AnnotatedSample] = []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not f.strip() for f in row):
                continue
            if len(row) != len(SAMPLE_CSV_HEADER):
                raise DataFormatError(
                    f"line {line_no}: expected {len(SAMPLE_CSV_HEADER)} fields, "
                    f"got {len(row)}"
                )
            content_id = row[0].strip()
            if not content_id:
                raise DataFormatError(f"line {line_no}: empty content_id")
            try:
                codec = Codec.parse(row[1])
                condition = CompressionCondition.parse(row[2].strip())
            except ParameterDomainError as exc:
                raise DataFormatError(f"line {line_no}: {exc}") from None
            geom = _parse_optional_float(row[3], "geom_param", line_no)
            attr = _parse_optional_float(row[4], "attr_param", line_no)
            mos = _parse_optional_float(row[5], "mos", line_no)
            if mos is None:
                raise DataFormatError(f"line {line_no}: missing mos")
            if enforce_mos_range and not MOS_MIN <= mos <= MOS_MAX:
                raise DataFormatError(
                    f"line {line_no}: mos {mos!r} outside [{MOS_MIN:g}, {MOS_MAX:g}]"
                )
            try:
                params = CodecParams(
                    codec=codec, condition=condition, attr_param=attr, geom_param=geom
                )
            except ParameterDomainError as exc:
                raise DataFormatError(f"line {line_no}: {exc}") from None
            samples.append(
                AnnotatedSample(
                    content_id=content_id,
                    codec=codec,
                    condition=condition,
                    params=params,
                    mos=mos,
                )
            )
    if expect_full_dataset and len(samples) != FULL_DATASET_ROWS:
        raise ValidationError(
            f"{path}: expected a full {FULL_DATASET_ROWS}-row dataset, "
            f"got {len(samples)} rows"
        )
    return DatasetManifest(
        samples=tuple(samples), source_path=str(path), row_count=len(samples)
    )


def save_samples(samples: Iterable[AnnotatedSample], path) -> None:
    """Write samples back to the CSV schema accepted by load_samples."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(SAMPLE_CSV_HEADER)
        for s in samples:
            writer.writerow(
                [
                    s.content_id,
                    s.codec.value,
                    s.condition.value,
                    format_number(s.params.geom_param),
                    format_number(s.params.attr_param),
                    format_number(s.mos),
                ]
            )


@dataclass(frozen=True)
class ParameterGrid:
    """The five (geom_param, attr_param) rows of one codec/condition cell."""

    codec: Codec
    condition: CompressionCondition
    rows: Tuple[Tuple[Optional[float], Optional[float]], ...]

    def params(self) -> Tuple[CodecParams, ...]:
        """The grid rows as validated CodecParams values."""
        return tuple(
            CodecParams(
                codec=self.codec,
                condition=self.condition,
                geom_param=geom,
                attr_param=attr,
            )
            for geom, attr in self.rows
        )


_C = CompressionCondition

# Encoder settings used to generate the five distortion levels of each
# codec/condition cell, as (geom_param, attr_param) rows.
_BUILTIN_GRIDS: Dict[Tuple[Codec, CompressionCondition], Tuple] = {
    (Codec.VPCC, _C.LOSSLESS_GEO_LOSSY_ATTR): (
        (None, 32), (None, 37), (None, 42), (None, 47), (None, 51),
    ),
    (Codec.VPCC, _C.LOSSY_GEO_LOSSLESS_ATTR): (
        (22, None), (32, None), (37, None), (42, None), (51, None),
    ),
    (Codec.VPCC, _C.LOSSY_GEO_LOSSY_ATTR): (
        (24, 32), (28, 37), (32, 42), (36, 47), (40, 51),
    ),
    (Codec.GPCC, _C.LOSSLESS_GEO_LOSSY_ATTR): (
        (None, 35), (None, 39), (None, 43), (None, 47), (None, 51),
    ),
    (Codec.GPCC, _C.LOSSY_GEO_LOSSLESS_ATTR): (
        (0.75, None), (0.5, None), (0.25, None), (0.125, None), (0.0625, None),
    ),
    (Codec.GPCC, _C.LOSSY_GEO_LOSSY_ATTR): (
        (0.75, 35), (0.5, 39), (0.25, 43), (0.125, 47), (0.0625, 51),
    ),
    (Codec.AVS, _C.LOSSLESS_GEO_LOSSY_ATTR): (
        (None, 24), (None, 32), (None, 40), (None, 44), (None, 48),
    ),
    (Codec.AVS, _C.LOSSY_GEO_LOSSLESS_ATTR): (
        (2, None), (4, None), (8, None), (12, None), (16, None),
    ),
    (Codec.AVS, _C.LOSSY_GEO_LOSSY_ATTR): (
        (2, 24), (4, 32), (8, 40), (12, 44), (16, 48),
    ),
}


def builtin_grid(codec: Codec, condition: CompressionCondition) -> ParameterGrid:
    """The built-in five-level parameter grid for one codec/condition cell."""
    return ParameterGrid(
        codec=codec, condition=condition, rows=_BUILTIN_GRIDS[(codec, condition)]
    )


_COEFF_FIELDS = ("c1_a", "c2_a", "c1_g", "c2_g")


def save_coefficients(coeffs: Sequence[ModelCoefficients], path) -> None:
    """Write coefficient sets as `CODEC.field = value` lines.

    Values carry 10 significant digits, so the round trip through
    load_coefficients is exact for values representable at that precision.
    """
    seen = set()
    lines = []
    for c in coeffs:
        if c.codec in seen:
            raise DuplicateEntryError(f"duplicate codec {c.codec.value} in output")
        seen.add(c.codec)
        for field in _COEFF_FIELDS:
            lines.append(f"{c.codec.value}.{field} = {getattr(c, field):.10g}")
        lines.append(f"{c.codec.value}.geometry_form = {c.geometry_form.value}")
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")


def load_coefficients(path) -> List[ModelCoefficients]:
    """Parse a coefficient file into per-codec coefficient sets.

    Unknown keys and duplicate entries are rejected. A codec missing its
    geometry_form entry gets the per-codec default (natural_log for V-PCC,
    linear otherwise) with a warning.
    """
    entries: Dict[Codec, Dict[str, object]] = {}
    order: List[Codec] = []
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise DataFormatError(f"line {line_no}: expected 'CODEC.field = value'")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key.count(".") != 1:
                raise DataFormatError(f"line {line_no}: bad key {key!r}")
            codec_token, field = key.split(".")
            try:
                codec = Codec.parse(codec_token)
            except ParameterDomainError as exc:
                raise DataFormatError(f"line {line_no}: {exc}") from None
            if field not in _COEFF_FIELDS and field != "geometry_form":
                raise DataFormatError(f"line {line_no}: unknown key {key!r}")
            slot = entries.setdefault(codec, {})
            if codec not in order:
                order.append(codec)
            if field in slot:
                raise DuplicateEntryError(f"line {line_no}: {key} listed twice")
            if field == "geometry_form":
                try:
                    slot[field] = GeometryForm.parse(value)
                except ParameterDomainError as exc:
                    raise DataFormatError(f"line {line_no}: {exc}") from None
            else:
                try:
                    slot[field] = float(value)
                except ValueError:
                    raise DataFormatError(
                        f"line {line_no}: {key} is not a number: {value!r}"
                    ) from None
    result = []
    for codec in order:
        slot = entries[codec]
        missing = [f for f in _COEFF_FIELDS if f not in slot]
        if missing:
            raise DataFormatError(
                f"{path}: codec {codec.value} is missing {', '.join(missing)}"
            )
        if "geometry_form" not in slot:
            slot["geometry_form"] = GeometryForm.default_for(codec)
            warnings.warn(
                f"{path}: no geometry_form for {codec.value}, "
                f"defaulting to {slot['geometry_form'].value}",
                stacklevel=2,
            )
        result.append(
            ModelCoefficients(
                codec=codec,
                c1_a=slot["c1_a"],
                c2_a=slot["c2_a"],
                c1_g=slot["c1_g"],
                c2_g=slot["c2_g"],
                geometry_form=slot["geometry_form"],
            )
        )
    return result
