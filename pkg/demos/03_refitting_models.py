"""Refitting the quality models from annotated samples.

Annotated data is a list of (content, codec, condition, parameters, MOS)
records. The fit collapses each single-lossy-channel group to per-step mean
scores, runs least squares through them, and recovers per-content offsets
from the raw residuals. Here the annotations are synthesized from the
shipped coefficients plus noise, so the refit should land close to them.
"""

import tempfile
from pathlib import Path

import numpy as np

from pcquality import (
    AnnotatedSample,
    Codec,
    CompressionCondition,
    DEFAULT_COEFFICIENTS,
    builtin_grid,
    fit_codec_models,
    fit_condition,
    predict,
    save_samples,
)
from pcquality.cli import main as cli_main

CONTENTS = {"parade": -0.12, "lantern": -0.05, "orchard": 0.0, "quarry": 0.06, "rooftop": 0.11}

rng = np.random.default_rng(7)
samples = []
for condition in (
    CompressionCondition.LOSSLESS_GEO_LOSSY_ATTR,
    CompressionCondition.LOSSY_GEO_LOSSLESS_ATTR,
):
    for params in builtin_grid(Codec.AVS, condition).params():
        truth = predict(params).value
        for content, offset in CONTENTS.items():
            mos = truth + offset + rng.normal(0.0, 0.04)
            samples.append(
                AnnotatedSample(content, Codec.AVS, condition, params, float(mos))
            )

print(f"synthesized {len(samples)} annotated samples for AVS")

fitted = fit_codec_models(samples)
defaults = DEFAULT_COEFFICIENTS[Codec.AVS]
print("\nrecovered coefficients (target in parentheses)")
for field in ("c1_a", "c2_a", "c1_g", "c2_g"):
    print(f"  {field}: {getattr(fitted, field):9.4f}   ({getattr(defaults, field)})")

attr_fit = fit_condition(
    [s for s in samples if s.condition is CompressionCondition.LOSSLESS_GEO_LOSSY_ATTR]
)
print("\nper-content offsets hidden in the attribute group (target in parentheses)")
for factor in attr_fit.factors:
    print(f"  {factor.content_id:8s} {factor.c:+.4f}   ({CONTENTS[factor.content_id]:+.2f})")

with tempfile.TemporaryDirectory() as tmp:
    csv_path = Path(tmp) / "avs_annotations.csv"
    coeff_path = Path(tmp) / "avs_coefficients.txt"
    save_samples([s for s in samples if 1.0 <= s.mos <= 5.0], csv_path)
    print("\nthe same refit through the command line:")
    print(f"  pcquality fit --input {csv_path.name} --out {coeff_path.name}")
    cli_main(["fit", "--input", str(csv_path), "--out", str(coeff_path)])
    print("\ncoefficient file contents:")
    print(coeff_path.read_text())
