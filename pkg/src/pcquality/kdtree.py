"""Exact nearest-neighbor search over a static 3-D point set.

A bounding-box tree built once over the input array; queries return the
same (index, squared distance) an exhaustive scan would, with equal
distances resolved to the lowest point index.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError

__all__ = ["KdTree"]


class _Node:
    __slots__ = ("lo", "hi", "indices", "left", "right")

    def __init__(self, lo, hi, indices=None, left=None, right=None):
        self.lo = lo
        self.hi = hi
        self.indices = indices
        self.left = left
        self.right = right


class KdTree:
    """Axis-aligned splitting tree for exact nearest-neighbor queries."""

    def __init__(self, points, leaf_size: int = 16):
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] < 1:
            raise ValidationError("KdTree needs a non-empty (n, d) point array")
        if leaf_size < 1:
            raise ValidationError("leaf_size must be >= 1")
        self._points = pts
        self._leaf_size = leaf_size
        self._root = self._build(np.arange(len(pts)))

    def _build(self, indices: np.ndarray) -> _Node:
        pts = self._points[indices]
        lo = pts.min(axis=0)
        hi = pts.max(axis=0)
        spread = hi - lo
        if len(indices) <= self._leaf_size or not spread.any():
            return _Node(lo, hi, indices=indices)
        axis = int(np.argmax(spread))
        mid = len(indices) // 2
        order = np.argpartition(pts[:, axis], mid)
        return _Node(
            lo,
            hi,
            left=self._build(indices[order[:mid]]),
            right=self._build(indices[order[mid:]]),
        )

    @staticmethod
    def _box_sqdist(node: _Node, q: np.ndarray) -> float:
        d = np.maximum(node.lo - q, 0.0) + np.maximum(q - node.hi, 0.0)
        return float(np.sum(d * d))

    def query(self, point) -> tuple[int, float]:
        """Index and squared distance of the nearest point; ties go to the
        lowest index."""
        q = np.asarray(point, dtype=np.float64)
        best_sq = np.inf
        best_idx = -1
        stack = [self._root]
        while stack:
            node = stack.pop()
            # Equal box distance may still hide an equidistant lower index,
            # so only strictly worse boxes are pruned.
            if self._box_sqdist(node, q) > best_sq:
                continue
            if node.indices is not None:
                diff = self._points[node.indices] - q
                sq = np.sum(diff * diff, axis=1)
                local_min = sq.min()
                if local_min < best_sq or (
                    local_min == best_sq
                    and int(node.indices[sq == local_min].min()) < best_idx
                ):
                    best_sq = float(local_min)
                    best_idx = int(node.indices[sq == local_min].min())
                continue
            near, far = node.left, node.right
            if self._box_sqdist(far, q) < self._box_sqdist(near, q):
                near, far = far, near
            stack.append(far)
            stack.append(near)
        return best_idx, best_sq

    def query_many(self, points) -> tuple[np.ndarray, np.ndarray]:
        """Vector form of query over the rows of an (m, d) array."""
        pts = np.asarray(points, dtype=np.float64)
        indices = np.empty(len(pts), dtype=np.int64)
        sqdists = np.empty(len(pts), dtype=np.float64)
        for i, p in enumerate(pts):
            indices[i], sqdists[i] = self.query(p)
        return indices, sqdists

    def __len__(self) -> int:
        return len(self._points)
