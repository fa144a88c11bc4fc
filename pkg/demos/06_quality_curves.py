"""Exporting quality-versus-step curves for plotting.

The fitted models are one-dimensional in each channel, so a curve is just
the model evaluated over a step range. The CSV produced here is the same
payload the `pcquality curve` command prints; if matplotlib is available a
PNG lands next to this script.
"""

from pathlib import Path

import numpy as np

from pcquality import Codec, DEFAULT_COEFFICIENTS, predict_attribute, predict_geometry

qs = np.linspace(1, 100, 200)
curves = {}
for codec in Codec:
    coeffs = DEFAULT_COEFFICIENTS[codec]
    curves[f"{codec.value} attribute"] = [predict_attribute(coeffs, q).value for q in qs]
    curves[f"{codec.value} geometry"] = [predict_geometry(coeffs, q).value for q in qs]

out = Path(__file__).with_name("quality_curves.csv")
with out.open("w") as handle:
    handle.write("qs," + ",".join(curves) + "\n")
    for i, q in enumerate(qs):
        handle.write(f"{q:g}," + ",".join(f"{curves[k][i]:.6f}" for k in curves) + "\n")
print(f"wrote {out.name} with {len(qs)} rows and {len(curves)} curves")

print("\nspot values at qs = 1, 10, 100")
for name, values in curves.items():
    picks = [values[0], values[np.searchsorted(qs, 10)], values[-1]]
    print(f"  {name:16s} " + "  ".join(f"{v:7.4f}" for v in picks))

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("\nmatplotlib not installed; skipping the PNG render")
else:
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for name, values in curves.items():
        ax.plot(qs, values, label=name, linestyle="--" if "geometry" in name else "-")
    ax.set_xlabel("quantization step")
    ax.set_ylabel("predicted MOS")
    ax.set_ylim(0.5, 5.5)
    ax.legend(fontsize=8)
    ax.grid(alpha=0.3)
    png = out.with_suffix(".png")
    fig.savefig(png, dpi=120, bbox_inches="tight")
    print(f"rendered {png.name}")
