"""Reduced-reference point-cloud quality toolkit.

Predicts the perceptual quality (MOS) of compressed point clouds directly
from codec quantization parameters, refits the underlying per-codec models
from annotated data, evaluates predictions with PLCC/SROCC/RMSE, and
computes full-reference geometry and color baselines over PLY clouds.
"""

from .codec_params import (
    Codec,
    CodecParams,
    CompressionCondition,
    QuantSteps,
    avs_attr_qp_to_qs,
    avs_geom_step_to_qs,
    gpcc_attr_qp_to_qs,
    gpcc_scale_to_qs,
    to_quant_steps,
    vpcc_qp_to_qs,
)
from .dataset_io import (
    DatasetManifest,
    ParameterGrid,
    builtin_grid,
    load_coefficients,
    load_samples,
    save_coefficients,
    save_samples,
)
from .errors import (
    DataFormatError,
    DegenerateFitError,
    DuplicateEntryError,
    GroupingError,
    IncompleteDataError,
    MissingNormalsError,
    NumericDomainError,
    ParameterDomainError,
    PCQualityError,
    UndefinedCorrelationError,
    ValidationError,
)
from .fitting import (
    AnnotatedSample,
    ContentFactor,
    FitResult,
    collapse_to_mean,
    estimate_content_factors,
    fit_codec_models,
    fit_condition,
    fit_linear,
    fit_log_linear,
)
from .fullref import (
    ColorReport,
    GeometryReport,
    build_index,
    p2plane,
    p2point,
    psnr_yuv,
    rgb_to_yuv_bt709,
)
from .kdtree import KdTree
from .ply_io import PointCloud, parse_ply, write_ply
from .quality_model import (
    DEFAULT_COEFFICIENTS,
    CombinationScheme,
    GeometryForm,
    ModelCoefficients,
    PredictedScore,
    default_coefficients,
    predict,
    predict_attribute,
    predict_combined,
    predict_geometry,
)
from .stats import ErrorSummary, error_summary, plcc, rmse, srocc

__version__ = "0.1.0"
