"""PLY point-cloud reading and writing (ASCII and binary little endian).

Only the vertex element is consumed: float x/y/z positions, optional float
nx/ny/nz unit normals and optional uchar red/green/blue colors. Values
parsed from ASCII are cast to the declared property type so both storage
formats of the same cloud parse to identical arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .errors import DataFormatError, ValidationError

__all__ = ["PointCloud", "parse_ply", "write_ply"]

_SCALAR_TYPES = {
    "char": "i1", "int8": "i1",
    "uchar": "u1", "uint8": "u1",
    "short": "i2", "int16": "i2",
    "ushort": "u2", "uint16": "u2",
    "int": "i4", "int32": "i4",
    "uint": "u4", "uint32": "u4",
    "float": "f4", "float32": "f4",
    "double": "f8", "float64": "f8",
}

_FLOAT_CODES = ("f4", "f8")
_NORMAL_UNIT_TOL = 1e-3


@dataclass(frozen=True)
class PointCloud:
    """Point positions with optional per-point unit normals and RGB colors."""

    positions: np.ndarray
    normals: Optional[np.ndarray] = None
    colors: Optional[np.ndarray] = None

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=np.float64)
        if pos.ndim != 2 or pos.shape[1] != 3 or len(pos) < 1:
            raise ValidationError("positions must be a non-empty (n, 3) array")
        object.__setattr__(self, "positions", pos)
        if self.normals is not None:
            nrm = np.asarray(self.normals, dtype=np.float64)
            if nrm.shape != pos.shape:
                raise ValidationError("normals must match positions in shape")
            lengths = np.sqrt(np.sum(nrm * nrm, axis=1))
            if np.any(np.abs(lengths - 1.0) > _NORMAL_UNIT_TOL):
                raise ValidationError(
                    f"normals must be unit length within {_NORMAL_UNIT_TOL}"
                )
            object.__setattr__(self, "normals", nrm)
        if self.colors is not None:
            col = np.asarray(self.colors)
            if col.shape != pos.shape:
                raise ValidationError("colors must match positions in shape")
            if not np.issubdtype(col.dtype, np.integer) or col.min() < 0 or col.max() > 255:
                raise ValidationError("colors must be integers in [0, 255]")
            object.__setattr__(self, "colors", col.astype(np.uint8))
        for arr in (self.positions, self.normals, self.colors):
            if arr is not None:
                arr.setflags(write=False)

    @property
    def count(self) -> int:
        return len(self.positions)


class _Element:
    def __init__(self, name: str, count: int):
        self.name = name
        self.count = count
        self.properties: List[Tuple[str, str]] = []  # (name, dtype code)
        self.has_list = False


def _parse_header(handle):
    line = handle.readline()
    if line.strip() != b"ply":
        raise DataFormatError("line 1: not a PLY file (missing 'ply' magic)")
    fmt = None
    elements: List[_Element] = []
    line_no = 1
    while True:
        raw = handle.readline()
        line_no += 1
        if not raw:
            raise DataFormatError(f"line {line_no}: header ended without end_header")
        try:
            tokens = raw.decode("ascii").split()
        except UnicodeDecodeError:
            raise DataFormatError(f"line {line_no}: non-ASCII bytes in header") from None
        if not tokens or tokens[0] in ("comment", "obj_info"):
            continue
        keyword = tokens[0]
        if keyword == "format":
            if len(tokens) != 3 or tokens[2] != "1.0":
                raise DataFormatError(f"line {line_no}: malformed format line")
            if tokens[1] not in ("ascii", "binary_little_endian"):
                raise DataFormatError(
                    f"line {line_no}: unsupported format {tokens[1]!r} "
                    f"(ascii and binary_little_endian only)"
                )
            fmt = tokens[1]
        elif keyword == "element":
            if len(tokens) != 3:
                raise DataFormatError(f"line {line_no}: malformed element line")
            try:
                count = int(tokens[2])
            except ValueError:
                raise DataFormatError(
                    f"line {line_no}: bad element count {tokens[2]!r}"
                ) from None
            elements.append(_Element(tokens[1], count))
        elif keyword == "property":
            if not elements:
                raise DataFormatError(f"line {line_no}: property before any element")
            if tokens[1] == "list":
                elements[-1].has_list = True
                elements[-1].properties.append((tokens[-1], "list"))
            else:
                if len(tokens) != 3 or tokens[1] not in _SCALAR_TYPES:
                    raise DataFormatError(
                        f"line {line_no}: unsupported property type {tokens[1]!r}"
                    )
                elements[-1].properties.append((tokens[2], _SCALAR_TYPES[tokens[1]]))
        elif keyword == "end_header":
            break
        else:
            raise DataFormatError(f"line {line_no}: unknown header keyword {keyword!r}")
    if fmt is None:
        raise DataFormatError("header has no format line")
    return fmt, elements, line_no


def _vertex_layout(vertex: _Element):
    props = dict(vertex.properties)
    for name in ("x", "y", "z"):
        if name not in props:
            raise DataFormatError(f"vertex element is missing property {name!r}")
        if props[name] not in _FLOAT_CODES:
            raise DataFormatError(f"vertex property {name!r} must be float typed")
    has_normals = all(n in props for n in ("nx", "ny", "nz"))
    if not has_normals and any(n in props for n in ("nx", "ny", "nz")):
        raise DataFormatError("vertex normals must supply all of nx, ny, nz")
    if has_normals and any(props[n] not in _FLOAT_CODES for n in ("nx", "ny", "nz")):
        raise DataFormatError("vertex normal properties must be float typed")
    has_colors = all(c in props for c in ("red", "green", "blue"))
    if not has_colors and any(c in props for c in ("red", "green", "blue")):
        raise DataFormatError("vertex colors must supply all of red, green, blue")
    if has_colors and any(props[c] != "u1" for c in ("red", "green", "blue")):
        raise DataFormatError("vertex color properties must be uchar typed")
    return has_normals, has_colors


def _gather(columns: dict, names, out_dtype) -> np.ndarray:
    return np.stack([columns[n] for n in names], axis=1).astype(out_dtype)


def _parse_ascii(vertex, preceding, text: str, first_line: int) -> dict:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    cursor = 0
    for element in preceding:
        # One row per line holds for list properties too in ASCII PLY.
        cursor += element.count
    if len(lines) - cursor < vertex.count:
        raise DataFormatError(
            f"line {first_line + len(lines)}: vertex data truncated, "
            f"expected {vertex.count} rows, found {len(lines) - cursor}"
        )
    names = [name for name, _ in vertex.properties]
    codes = dict(vertex.properties)
    raw = {name: [] for name in names}
    for row_idx in range(vertex.count):
        line = lines[cursor + row_idx]
        tokens = line.split()
        if len(tokens) != len(names):
            raise DataFormatError(
                f"line ~{first_line + cursor + row_idx}: expected "
                f"{len(names)} values per vertex, got {len(tokens)}"
            )
        for name, token in zip(names, tokens):
            raw[name].append(token)
    columns = {}
    for name in names:
        code = codes[name]
        try:
            if code.startswith("f"):
                values = np.array([float(t) for t in raw[name]], dtype=np.float64)
            else:
                values = np.array([int(t) for t in raw[name]], dtype=np.int64)
        except ValueError:
            raise DataFormatError(
                f"vertex property {name!r} contains a non-numeric value"
            ) from None
        info = np.iinfo(np.dtype(code)) if not code.startswith("f") else None
        if info is not None and (values.min() < info.min or values.max() > info.max):
            raise DataFormatError(
                f"vertex property {name!r} has values outside its {code} range"
            )
        columns[name] = values.astype(np.dtype(code))
    return columns


def _parse_binary(vertex, preceding, payload: bytes, payload_offset: int) -> dict:
    offset = 0
    for element in preceding:
        if element.has_list:
            raise DataFormatError(
                f"cannot skip element {element.name!r}: list-typed properties "
                f"have no fixed size"
            )
        dt = np.dtype([(n, "<" + c) for n, c in element.properties])
        offset += dt.itemsize * element.count
    if vertex.has_list:
        raise DataFormatError("list-typed vertex properties are not supported")
    dt = np.dtype([(n, "<" + c) for n, c in vertex.properties])
    needed = dt.itemsize * vertex.count
    if len(payload) - offset < needed:
        raise DataFormatError(
            f"byte {payload_offset + len(payload)}: vertex data truncated, "
            f"expected {needed} bytes, found {len(payload) - offset}"
        )
    rows = np.frombuffer(payload, dtype=dt, count=vertex.count, offset=offset)
    return {name: rows[name] for name, _ in vertex.properties}


def parse_ply(path) -> PointCloud:
    """Parse a PLY file into a PointCloud.

    Supports format ascii 1.0 and binary_little_endian 1.0. Elements before
    the vertex element are skipped; elements after it are ignored.
    """
    with open(path, "rb") as handle:
        fmt, elements, header_lines = _parse_header(handle)
        payload_offset = handle.tell()
        payload = handle.read()
    vertex_pos = next(
        (i for i, e in enumerate(elements) if e.name == "vertex"), None
    )
    if vertex_pos is None:
        raise DataFormatError("file has no vertex element")
    vertex = elements[vertex_pos]
    preceding = elements[:vertex_pos]
    if vertex.count < 1:
        raise DataFormatError("vertex element declares zero vertices")
    has_normals, has_colors = _vertex_layout(vertex)
    if fmt == "ascii":
        columns = _parse_ascii(
            vertex, preceding, payload.decode("ascii", errors="replace"),
            header_lines + 1,
        )
    else:
        columns = _parse_binary(vertex, preceding, payload, payload_offset)
    return PointCloud(
        positions=_gather(columns, ("x", "y", "z"), np.float64),
        normals=_gather(columns, ("nx", "ny", "nz"), np.float64) if has_normals else None,
        colors=_gather(columns, ("red", "green", "blue"), np.int64) if has_colors else None,
    )


def write_ply(cloud: PointCloud, path, binary: bool = False) -> None:
    """Write a PointCloud as PLY with float properties (positions cast to
    32-bit, the customary PLY precision)."""
    fields = [("x", "<f4"), ("y", "<f4"), ("z", "<f4")]
    if cloud.normals is not None:
        fields += [("nx", "<f4"), ("ny", "<f4"), ("nz", "<f4")]
    if cloud.colors is not None:
        fields += [("red", "u1"), ("green", "u1"), ("blue", "u1")]
    rows = np.empty(cloud.count, dtype=np.dtype(fields))
    for i, axis in enumerate(("x", "y", "z")):
        rows[axis] = cloud.positions[:, i].astype(np.float32)
    if cloud.normals is not None:
        for i, axis in enumerate(("nx", "ny", "nz")):
            rows[axis] = cloud.normals[:, i].astype(np.float32)
    if cloud.colors is not None:
        for i, channel in enumerate(("red", "green", "blue")):
            rows[channel] = cloud.colors[:, i]
    header = [
        "ply",
        "format binary_little_endian 1.0" if binary else "format ascii 1.0",
        f"element vertex {cloud.count}",
    ]
    header += [
        f"property {'uchar' if code == 'u1' else 'float'} {name}"
        for name, code in fields
    ]
    header.append("end_header")
    with open(path, "wb") as handle:
        handle.write(("\n".join(header) + "\n").encode("ascii"))
        if binary:
            handle.write(rows.tobytes())
        else:
            float_names = [n for n, c in fields if c == "<f4"]
            for row in rows:
                parts = [
                    f"{float(row[n]):.9g}" if n in float_names else str(int(row[n]))
                    for n, _ in fields
                ]
                handle.write((" ".join(parts) + "\n").encode("ascii"))
