"""Full-reference geometry and color baselines over PLY clouds.

A reference sphere is jittered into a degraded copy, both are written as
PLY, and the point-to-point, point-to-plane and YUV color metrics are
computed. Point-to-plane needs reference normals; for a sphere they are
the radial directions, so tangential jitter is forgiven while radial
jitter is not.
"""

import tempfile
from pathlib import Path

import numpy as np

from pcquality import PointCloud, p2plane, p2point, parse_ply, psnr_yuv, write_ply

rng = np.random.default_rng(33)
n = 800

# points on a unit sphere; normals point outward
directions = rng.normal(size=(n, 3))
directions /= np.linalg.norm(directions, axis=1, keepdims=True)
positions = 10.0 * directions
colors = rng.integers(0, 256, size=(n, 3))
reference = PointCloud(positions=positions, normals=directions, colors=colors)

# tangential drift plus a little radial noise and color damage
tangent = np.cross(directions, rng.normal(size=(n, 3)))
tangent /= np.linalg.norm(tangent, axis=1, keepdims=True)
degraded_positions = positions + 0.05 * tangent + 0.01 * rng.normal(size=(n, 1)) * directions
degraded_colors = np.clip(colors + rng.integers(-6, 7, size=(n, 3)), 0, 255)
degraded = PointCloud(positions=degraded_positions, colors=degraded_colors)

with tempfile.TemporaryDirectory() as tmp:
    ref_path = Path(tmp) / "reference.ply"
    deg_path = Path(tmp) / "degraded.ply"
    write_ply(reference, ref_path, binary=True)
    write_ply(degraded, deg_path)
    ref = parse_ply(ref_path)
    deg = parse_ply(deg_path)
    print(f"loaded {ref.count} reference / {deg.count} degraded points from PLY")

    point = p2point(ref, deg)
    plane = p2plane(ref, deg)
    color = psnr_yuv(ref, deg)

print("\npoint-to-point (squared-distance based)")
print(f"  mse_sym        {point.mse_sym:.6f}")
print(f"  hausdorff_sym  {point.hausdorff_sym:.6f}")
print(f"  psnr_mse       {point.psnr_mse:.2f} dB   (peak = bbox diagonal {point.peak:.2f})")

print("\npoint-to-plane (displacement projected on the reference normal)")
print(f"  mse_sym        {plane.mse_sym:.6f}")
print(f"  psnr_mse       {plane.psnr_mse:.2f} dB")
print("  tangential drift dominates here, so the planar error is far smaller")

print("\ncolor (BT.709 YUV, nearest-reference matching, 6:1:1 weights)")
print(f"  psnr_y   {color.psnr_y:.2f} dB")
print(f"  psnr_u   {color.psnr_u:.2f} dB")
print(f"  psnr_v   {color.psnr_v:.2f} dB")
print(f"  psnr_yuv {color.psnr_yuv:.2f} dB")
