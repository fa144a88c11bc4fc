"""Prediction evaluation statistics: PLCC, SROCC, RMSE and error summaries."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import UndefinedCorrelationError, ValidationError

__all__ = ["ErrorSummary", "plcc", "srocc", "rmse", "error_summary"]


def _paired(predicted, observed, min_len: int) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(predicted, dtype=np.float64)
    b = np.asarray(observed, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1:
        raise ValidationError("paired scores must be one-dimensional")
    if a.shape != b.shape:
        raise ValidationError(
            f"paired scores differ in length: {a.size} vs {b.size}"
        )
    if a.size < min_len:
        raise ValidationError(f"need at least {min_len} pairs, got {a.size}")
    return a, b


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    da = a - a.mean()
    db = b - b.mean()
    den = math.sqrt(float(np.sum(da * da)) * float(np.sum(db * db)))
    if den == 0.0:
        raise UndefinedCorrelationError(
            "correlation undefined: at least one vector is constant"
        )
    r = float(np.sum(da * db)) / den
    return min(1.0, max(-1.0, r))


def plcc(predicted, observed) -> float:
    """Pearson linear correlation coefficient between two score vectors."""
    a, b = _paired(predicted, observed, 2)
    return _pearson(a, b)


def srocc(predicted, observed) -> float:
    """Spearman rank-order correlation coefficient.

    Computed as the Pearson correlation of the rank vectors; ties receive
    average (fractional) ranks.
    """
    a, b = _paired(predicted, observed, 2)
    return _pearson(rankdata(a, method="average"), rankdata(b, method="average"))


def rmse(predicted, observed) -> float:
    """Root mean squared difference between predicted and observed scores."""
    a, b = _paired(predicted, observed, 1)
    d = a - b
    return math.sqrt(float(np.mean(d * d)))


@dataclass(frozen=True)
class ErrorSummary:
    """Mean, sample standard deviation and 95% quantile of residuals."""

    mean: float
    std_dev: float
    quantile_95: float


def error_summary(residuals) -> ErrorSummary:
    """Summarize a residual vector (observed minus predicted scores).

    The standard deviation uses the n-1 denominator (0.0 for a single
    residual) and the 95% quantile interpolates linearly between order
    statistics at position 0.95*(n-1)+1.
    """
    r = np.asarray(residuals, dtype=np.float64)
    if r.ndim != 1 or r.size < 1:
        raise ValidationError("error summary needs at least one residual")
    std = float(np.std(r, ddof=1)) if r.size > 1 else 0.0
    return ErrorSummary(
        mean=float(np.mean(r)),
        std_dev=std,
        quantile_95=float(np.percentile(r, 95)),
    )
