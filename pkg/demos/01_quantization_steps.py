"""Unified quantization steps from codec-specific encoder parameters.

Every supported codec exposes a different knob: V-PCC and G-PCC attribute
coding use an HEVC-style QP (step doubles every 6), G-PCC geometry uses a
position scale whose reciprocal is the step, and AVS uses a 2^(QP/8)
attribute law plus a direct geometry step. This walk shows each converter
and then sweeps the built-in five-level grids.
"""

from pcquality import (
    Codec,
    CompressionCondition,
    avs_attr_qp_to_qs,
    builtin_grid,
    gpcc_scale_to_qs,
    to_quant_steps,
    vpcc_qp_to_qs,
)

print("single conversions")
print(f"  V-PCC textureQP 32  -> qs {vpcc_qp_to_qs(32)}")
print(f"  V-PCC geomQP 24     -> qs {vpcc_qp_to_qs(24)}")
print(f"  G-PCC scale 0.0625  -> qs {gpcc_scale_to_qs(0.0625):g}")
print(f"  AVS attr QP 44      -> qs {avs_attr_qp_to_qs(44):.6f}")

print("\nbuilt-in parameter grids (five distortion levels per cell)")
for codec in Codec:
    for condition in CompressionCondition:
        grid = builtin_grid(codec, condition)
        steps = [to_quant_steps(p) for p in grid.params()]
        rendered = ", ".join(
            f"(qs_a={s.qs_a if s.qs_a is not None else '-'}, "
            f"qs_g={f'{s.qs_g:g}' if s.qs_g is not None else '-'})"
            for s in steps
        )
        print(f"  {codec.value:4s} {condition.value:17s} {rendered}")
