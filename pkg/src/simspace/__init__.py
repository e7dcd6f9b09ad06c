"""simspace: psychological similarity spaces from dissimilarity data.

Multidimensional scaling (metric and nonmetric SMACOF), stress and
correlation evaluation of stimulus representations, pixel and
augmentation tooling, and regression experiments from image features
into similarity spaces.
"""

from .augment import (
    AugmentationManifest,
    AugmentationPlan,
    augment_dataset,
    augment_image,
    load_manifest_csv,
    save_manifest_csv,
)
from .data import (
    Configuration,
    DissimilarityMatrix,
    FeatureMatrix,
    TargetAssignment,
    load_configuration_csv,
    load_dissimilarity_csv,
    load_feature_csv,
    normalize_configuration,
    save_configuration_csv,
    save_dissimilarity_csv,
    save_feature_csv,
)
from .distances import (
    CorrelationReport,
    DistanceSpec,
    correlation_analysis,
    fit_distance_weights,
    pairwise_distances,
    pearson,
    spearman,
)
from .errors import SimspaceError, ValidationError
from .isotonic import MonotoneFit, pava
from .mds import (
    MdsOptions,
    MdsResult,
    SweepEntry,
    dimension_sweep,
    evaluate_stress,
    fit_mds,
)
from .nnls import nnls
from .pixels import (
    AGGREGATORS,
    RasterImage,
    block_downscale,
    load_image,
    pixel_features,
    save_png,
)
from .regression import (
    BETA_GRID_DEFAULT,
    EvaluationReport,
    LinearModel,
    RegressorSpec,
    SplitMetrics,
    best_beta_indices,
    beta_sweep,
    evaluate,
    fit_lasso,
    fit_linear,
    grouped_cross_validation,
    shuffle_targets,
    zero_baseline_predict,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
