"""Predicting MOS from compression parameters alone.

The per-codec models need nothing but the quantization steps: a linear
attribute model, a linear or logarithmic geometry model, and a choice of
combination scheme when both channels are lossy. Scores live on the 1..5
subjective scale.
"""

from pcquality import (
    Codec,
    CodecParams,
    CombinationScheme,
    CompressionCondition,
    builtin_grid,
    predict,
)

attr_only = CodecParams(
    Codec.VPCC, CompressionCondition.LOSSLESS_GEO_LOSSY_ATTR, attr_param=32
)
geom_only = CodecParams(
    Codec.GPCC, CompressionCondition.LOSSY_GEO_LOSSLESS_ATTR, geom_param=0.25
)
both = CodecParams(
    Codec.AVS, CompressionCondition.LOSSY_GEO_LOSSY_ATTR, attr_param=40, geom_param=8
)

print("single-channel predictions")
print(f"  V-PCC textureQP 32 only   -> MOS {predict(attr_only).value:.4f}")
print(f"  G-PCC scale 0.25 only     -> MOS {predict(geom_only).value:.4f}")
print(f"  AVS attr 40 + geom 8      -> MOS {predict(both).value:.4f}")

print("\ncombination schemes over the joint-distortion grids")
header = "  {:4s} {:>14s}" + " {:>14s}" * 4
print(header.format("", "(geom, attr)", *[s.value for s in CombinationScheme]))
for codec in Codec:
    grid = builtin_grid(codec, CompressionCondition.LOSSY_GEO_LOSSY_ATTR)
    for params in grid.params():
        scores = [
            predict(params, scheme=scheme).value for scheme in CombinationScheme
        ]
        cell = f"({params.geom_param:g}, {params.attr_param:g})"
        print(
            f"  {codec.value:4s} {cell:>14s}"
            + "".join(f" {score:14.4f}" for score in scores)
        )
print("\nevery scheme ranks the five levels identically; only the spacing moves")
