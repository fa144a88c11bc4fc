"""Scoring predictions against observed MOS.

PLCC measures linear agreement, SROCC rank agreement, RMSE absolute error,
and the error summary reports the mean, sample standard deviation and 95%
quantile of the observed-minus-predicted residuals.
"""

import numpy as np

from pcquality import (
    Codec,
    CompressionCondition,
    builtin_grid,
    error_summary,
    plcc,
    predict,
    rmse,
    srocc,
)

rng = np.random.default_rng(21)

print("per-codec agreement on noisy synthetic annotations (joint distortion)")
print("  codec   PLCC    SROCC   RMSE    err_mean  err_std  err_q95")
for codec in Codec:
    grid = builtin_grid(codec, CompressionCondition.LOSSY_GEO_LOSSY_ATTR)
    predicted, observed = [], []
    for params in grid.params():
        truth = predict(params).value
        for _ in range(5):  # five synthetic contents per level
            predicted.append(predict(params).value)
            observed.append(truth + rng.normal(0.0, 0.12))
    residuals = [o - p for o, p in zip(observed, predicted)]
    summary = error_summary(residuals)
    print(
        f"  {codec.value:5s} {plcc(predicted, observed):7.4f} "
        f"{srocc(predicted, observed):7.4f} {rmse(predicted, observed):7.4f} "
        f"{summary.mean:9.4f} {summary.std_dev:8.4f} {summary.quantile_95:8.4f}"
    )

print("\nrank correlation ignores any monotone recalibration of the predictions:")
a = rng.normal(size=12)
b = a + rng.normal(0.0, 0.3, size=12)
print(f"  srocc(a, b)          = {srocc(a, b):.4f}")
print(f"  srocc(exp(a), b)     = {srocc(np.exp(a), b):.4f}")
print(f"  plcc(a, b)           = {plcc(a, b):.4f}")
print(f"  plcc(exp(a), b)      = {plcc(np.exp(a), b):.4f}   (linearity is not preserved)")
