"""Full-reference geometry and color metrics over point clouds.

Geometry distortion is measured by nearest-neighbor point-to-point
distances, optionally projected onto the reference surface normal
(point-to-plane). Color distortion compares each degraded point's color
with the color of its geometrically nearest reference point in YUV space.
All PSNR values use an explicit +infinity sentinel when the error is zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    MissingNormalsError,
    NumericDomainError,
    ParameterDomainError,
    ValidationError,
)
from .kdtree import KdTree
from .ply_io import PointCloud

__all__ = [
    "GeometryReport",
    "ColorReport",
    "build_index",
    "p2point",
    "p2plane",
    "psnr_yuv",
    "rgb_to_yuv_bt709",
]

# ITU-R BT.709 luma weights and the derived chroma normalization, applied
# as the 8-bit limited-range ("studio swing") digital encoding:
#   Y  =  16 + 219 * (Kr*R' + Kg*G' + Kb*B')      R',G',B' = R,G,B / 255
#   Cb = 128 + 224 * (B' - Y') / (2*(1 - Kb))
#   Cr = 128 + 224 * (R' - Y') / (2*(1 - Kr))
# with the result rounded to integer code values.
BT709_KR = 0.2126
BT709_KG = 0.7152
BT709_KB = 0.0722

COLOR_PEAK = 255.0
YUV_WEIGHTS = (6.0, 1.0, 1.0)  # combined PSNR weights for Y, U, V


def rgb_to_yuv_bt709(colors: np.ndarray) -> np.ndarray:
    """Convert (n, 3) RGB in [0, 255] to BT.709 limited-range code values."""
    rgb = np.asarray(colors, dtype=np.float64) / 255.0
    r, g, b = rgb[:, 0], rgb[:, 1], rgb[:, 2]
    y_analog = BT709_KR * r + BT709_KG * g + BT709_KB * b
    y = 16.0 + 219.0 * y_analog
    cb = 128.0 + 224.0 * (b - y_analog) / (2.0 * (1.0 - BT709_KB))
    cr = 128.0 + 224.0 * (r - y_analog) / (2.0 * (1.0 - BT709_KR))
    return np.floor(np.stack([y, cb, cr], axis=1) + 0.5)


@dataclass(frozen=True)
class GeometryReport:
    """Directional and symmetric geometry errors plus their PSNR values.

    mse_* are mean squared nearest-neighbor errors; hausdorff_sym is the
    worst-case distance (not squared). Direction ab runs from the reference
    cloud to the degraded one, ba the other way; a direction is None when
    the inputs cannot support it (point-to-plane without degraded normals).
    """

    mse_ab: Optional[float]
    mse_ba: Optional[float]
    mse_sym: float
    hausdorff_sym: float
    psnr_mse: float
    psnr_hausdorff: float
    peak: float


@dataclass(frozen=True)
class ColorReport:
    """Per-channel and combined color PSNR over matched point pairs."""

    psnr_y: float
    psnr_u: float
    psnr_v: float
    psnr_yuv: float


def build_index(cloud: PointCloud) -> KdTree:
    """Exact nearest-neighbor index over a cloud's positions."""
    return KdTree(cloud.positions)


def _require_nonempty(ref: PointCloud, deg: PointCloud) -> None:
    if ref.count < 1 or deg.count < 1:
        raise ValidationError("both clouds must contain at least one point")


def _resolve_peak(ref: PointCloud, peak: Optional[float]) -> float:
    if peak is None:
        extent = ref.positions.max(axis=0) - ref.positions.min(axis=0)
        peak = float(np.sqrt(np.sum(extent * extent)))
        if peak <= 0.0:
            raise NumericDomainError(
                "reference bounding box is degenerate; supply an explicit peak"
            )
        return peak
    if peak <= 0.0:
        raise ParameterDomainError("peak", f"must be > 0, got {peak!r}")
    return float(peak)


def _psnr(peak: float, error: float) -> float:
    if error == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / error)


def _geometry_report(
    sq_ab: Optional[np.ndarray], sq_ba: Optional[np.ndarray], peak: float
) -> GeometryReport:
    mse_ab = float(np.mean(sq_ab)) if sq_ab is not None else None
    mse_ba = float(np.mean(sq_ba)) if sq_ba is not None else None
    present_mse = [m for m in (mse_ab, mse_ba) if m is not None]
    present_max = [
        float(np.max(sq)) for sq in (sq_ab, sq_ba) if sq is not None
    ]
    mse_sym = max(present_mse)
    hausdorff_sym = math.sqrt(max(present_max))
    return GeometryReport(
        mse_ab=mse_ab,
        mse_ba=mse_ba,
        mse_sym=mse_sym,
        hausdorff_sym=hausdorff_sym,
        psnr_mse=_psnr(peak, mse_sym),
        psnr_hausdorff=_psnr(peak, hausdorff_sym * hausdorff_sym),
        peak=peak,
    )


def p2point(
    ref: PointCloud, deg: PointCloud, peak: Optional[float] = None
) -> GeometryReport:
    """Symmetric point-to-point geometry distortion.

    Parameters
    ----------
    ref, deg : PointCloud
        Reference and degraded clouds.
    peak : float, optional
        Peak value for the PSNR terms; defaults to the diagonal of the
        reference bounding box.

    Each point contributes its squared Euclidean distance to the nearest
    neighbor in the other cloud; the symmetric MSE and Hausdorff values
    take the worse of the two directions.
    """
    _require_nonempty(ref, deg)
    peak = _resolve_peak(ref, peak)
    sq_ab = KdTree(deg.positions).query_many(ref.positions)[1]
    sq_ba = KdTree(ref.positions).query_many(deg.positions)[1]
    return _geometry_report(sq_ab, sq_ba, peak)


def _projected_sq(
    sources: np.ndarray, target: PointCloud, target_index: KdTree
) -> np.ndarray:
    nn = target_index.query_many(sources)[0]
    diff = sources - target.positions[nn]
    proj = np.sum(diff * target.normals[nn], axis=1)
    return proj * proj


def p2plane(
    ref: PointCloud, deg: PointCloud, peak: Optional[float] = None
) -> GeometryReport:
    """Symmetric point-to-plane geometry distortion.

    Parameters
    ----------
    ref, deg : PointCloud
        Reference and degraded clouds. ``ref`` must carry normals; no
        normal estimation is performed.
    peak : float, optional
        Peak value for the PSNR terms; defaults to the reference bounding
        box diagonal.

    The error of a point is its nearest-neighbor displacement projected
    onto the neighbor's normal, so tangential drift along the surface does
    not count. When ``deg`` has no normals the ref-to-deg direction is
    reported as None and the symmetric values use the other direction only.
    """
    _require_nonempty(ref, deg)
    if ref.normals is None:
        raise MissingNormalsError("point-to-plane needs normals on the reference cloud")
    peak = _resolve_peak(ref, peak)
    sq_ba = _projected_sq(deg.positions, ref, KdTree(ref.positions))
    sq_ab = None
    if deg.normals is not None:
        sq_ab = _projected_sq(ref.positions, deg, KdTree(deg.positions))
    return _geometry_report(sq_ab, sq_ba, peak)


def _combine_channel_psnrs(psnrs: tuple) -> float:
    finite = [(w, p) for w, p in zip(YUV_WEIGHTS, psnrs) if math.isfinite(p)]
    if not finite:
        return math.inf
    if len(finite) == 1:
        return finite[0][1]
    total = sum(w for w, _ in finite)
    return sum(w * p for w, p in finite) / total


def psnr_yuv(ref: PointCloud, deg: PointCloud) -> ColorReport:
    """Color PSNR between matched points, in BT.709 YUV with 6:1:1 weights.

    Every degraded point is matched to its geometrically nearest reference
    point; channel MSEs are taken over those pairs with peak 255. Channels
    whose error is zero are infinite and drop out of the weighted
    combination, which is infinite only when all three channels are.
    """
    _require_nonempty(ref, deg)
    if ref.colors is None or deg.colors is None:
        raise ValidationError("psnr_yuv needs colors on both clouds")
    nn = KdTree(ref.positions).query_many(deg.positions)[0]
    ref_yuv = rgb_to_yuv_bt709(ref.colors[nn])
    deg_yuv = rgb_to_yuv_bt709(deg.colors)
    diff = deg_yuv - ref_yuv
    channel_psnrs = tuple(
        _psnr(COLOR_PEAK, float(np.mean(diff[:, c] * diff[:, c]))) for c in range(3)
    )
    return ColorReport(
        psnr_y=channel_psnrs[0],
        psnr_u=channel_psnrs[1],
        psnr_v=channel_psnrs[2],
        psnr_yuv=_combine_channel_psnrs(channel_psnrs),
    )
