"""Shared builders for synthetic annotation data and PLY files."""

from __future__ import annotations

import math
import struct

import numpy as np

from pcquality import AnnotatedSample, Codec, CodecParams, CompressionCondition

import oracles

COND_A = "losslessG_lossyA"
COND_G = "lossyG_losslessA"
COND_AG = "lossyG_lossyA"

CONTENTS = ("amaryllis", "basalt", "cedar", "dune", "ember")
CONTENT_OFFSETS = {"amaryllis": -0.2, "basalt": -0.1, "cedar": 0.0, "dune": 0.1, "ember": 0.2}

# (c1_a, c2_a, c1_g, c2_g, log_geometry) per codec
MODEL = {
    "VPCC": (-0.0089, 4.4862, -0.559, 5.4165, True),
    "GPCC": (-0.01, 5.3515, -0.2381, 5.3818, False),
    "AVS": (-0.0519, 5.1337, -0.273, 5.5034, False),
}

# (geom_param, attr_param) rows per codec/condition cell
GRIDS = {
    ("VPCC", COND_A): tuple((None, q) for q in (32, 37, 42, 47, 51)),
    ("VPCC", COND_G): tuple((q, None) for q in (22, 32, 37, 42, 51)),
    ("VPCC", COND_AG): ((24, 32), (28, 37), (32, 42), (36, 47), (40, 51)),
    ("GPCC", COND_A): tuple((None, q) for q in (35, 39, 43, 47, 51)),
    ("GPCC", COND_G): tuple((s, None) for s in (0.75, 0.5, 0.25, 0.125, 0.0625)),
    ("GPCC", COND_AG): ((0.75, 35), (0.5, 39), (0.25, 43), (0.125, 47), (0.0625, 51)),
    ("AVS", COND_A): tuple((None, q) for q in (24, 32, 40, 44, 48)),
    ("AVS", COND_G): tuple((s, None) for s in (2, 4, 8, 12, 16)),
    ("AVS", COND_AG): ((2, 24), (4, 32), (8, 40), (12, 44), (16, 48)),
}


def qs_of(codec: str, geom, attr):
    """(qs_a, qs_g) computed through the oracle converters, not the package."""
    qs_a = qs_g = None
    if attr is not None:
        qs_a = oracles.qp_step(attr) if codec in ("VPCC", "GPCC") else oracles.avs_attr_step(attr)
    if geom is not None:
        if codec == "VPCC":
            qs_g = oracles.qp_step(geom)
        elif codec == "GPCC":
            qs_g = oracles.reciprocal(geom)
        else:
            qs_g = float(geom)
    return qs_a, qs_g


def model_mos(codec: str, geom, attr) -> float:
    """Ground-truth score of the default model at one parameter row."""
    c1a, c2a, c1g, c2g, log_geom = MODEL[codec]
    qs_a, qs_g = qs_of(codec, geom, attr)
    if qs_g is None:
        return c1a * qs_a + c2a
    g_term = math.log(qs_g) if log_geom else qs_g
    if qs_a is None:
        return c1g * g_term + c2g
    return c1a / 2 * qs_a + c1g / 2 * g_term + (c2a + c2g) / 2


def make_sample(content: str, codec: str, condition: str, geom, attr, mos: float) -> AnnotatedSample:
    c = Codec.parse(codec)
    cond = CompressionCondition.parse(condition)
    return AnnotatedSample(
        content_id=content,
        codec=c,
        condition=cond,
        params=CodecParams(codec=c, condition=cond, geom_param=geom, attr_param=attr),
        mos=mos,
    )


def synthetic_samples(
    codec: str,
    conditions=(COND_A, COND_G, COND_AG),
    with_offsets: bool = True,
    noise: float = 0.0,
    seed: int = 0,
    clip: bool = False,
):
    """Annotated samples whose MOS comes from the default model.

    Five contents per grid row; optional per-content offsets (which average
    to zero) and Gaussian noise. ``clip`` bounds the MOS to [1, 5] for data
    that must survive the strict CSV loader.
    """
    rng = np.random.default_rng(seed)
    samples = []
    for condition in conditions:
        for geom, attr in GRIDS[(codec, condition)]:
            base = model_mos(codec, geom, attr)
            for content in CONTENTS:
                mos = base
                if with_offsets:
                    mos += CONTENT_OFFSETS[content]
                if noise:
                    mos += rng.normal(0.0, noise)
                if clip:
                    mos = min(5.0, max(1.0, mos))
                samples.append(make_sample(content, codec, condition, geom, attr, mos))
    return samples


def csv_text(rows) -> str:
    """Build sample-CSV text from (content, codec, condition, geom, attr, mos)."""

    def fmt(v):
        if v is None:
            return ""
        if isinstance(v, float) and v.is_integer():
            return str(int(v))
        return repr(v) if isinstance(v, float) else str(v)

    lines = ["content_id,codec,condition,geom_param,attr_param,mos"]
    for content, codec, condition, geom, attr, mos in rows:
        lines.append(f"{content},{codec},{condition},{fmt(geom)},{fmt(attr)},{fmt(mos)}")
    return "\n".join(lines) + "\n"


def samples_csv_rows(samples) -> list:
    return [
        (
            s.content_id,
            s.codec.value,
            s.condition.value,
            s.params.geom_param,
            s.params.attr_param,
            s.mos,
        )
        for s in samples
    ]


# -- PLY builders (independent of the package writer) -------------------------

def write_ascii_ply(path, positions, normals=None, colors=None):
    positions = np.asarray(positions, dtype=np.float64)
    lines = ["ply", "format ascii 1.0", f"element vertex {len(positions)}"]
    lines += ["property double x", "property double y", "property double z"]
    if normals is not None:
        lines += ["property double nx", "property double ny", "property double nz"]
    if colors is not None:
        lines += ["property uchar red", "property uchar green", "property uchar blue"]
    lines.append("end_header")
    for i in range(len(positions)):
        parts = [repr(float(v)) for v in positions[i]]
        if normals is not None:
            parts += [repr(float(v)) for v in normals[i]]
        if colors is not None:
            parts += [str(int(v)) for v in colors[i]]
        lines.append(" ".join(parts))
    path.write_text("\n".join(lines) + "\n")


def write_binary_ply(path, positions, normals=None, colors=None):
    positions = np.asarray(positions, dtype=np.float64)
    header = ["ply", "format binary_little_endian 1.0", f"element vertex {len(positions)}"]
    header += ["property double x", "property double y", "property double z"]
    if normals is not None:
        header += ["property double nx", "property double ny", "property double nz"]
    if colors is not None:
        header += ["property uchar red", "property uchar green", "property uchar blue"]
    header.append("end_header")
    blob = bytearray(("\n".join(header) + "\n").encode("ascii"))
    for i in range(len(positions)):
        blob += struct.pack("<3d", *positions[i])
        if normals is not None:
            blob += struct.pack("<3d", *normals[i])
        if colors is not None:
            blob += struct.pack("<3B", *(int(v) for v in colors[i]))
    path.write_bytes(bytes(blob))


def random_cloud(rng, n, span=10.0):
    return rng.uniform(0.0, span, size=(n, 3))


def random_normals(rng, n):
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_colors(rng, n):
    return rng.integers(0, 256, size=(n, 3))
