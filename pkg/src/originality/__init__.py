"""Originality scoring for collections of assets.

Assets are modelled as mutually repelling particles in feature space. An
asset's originality is the interaction energy a typical pair of its
comparands contributes, divided by the energy the asset itself feels:
crowded assets score near 0, average ones near 1, remote ones above 1.
"""

from .distances import (
    DEFAULT_TOKEN_PATTERN,
    EXTRACTION_MODES,
    ExtractionScheme,
    FeatureVectors,
    ValidationReport,
    euclidean_matrix,
    extract_frequency_vectors,
    levenshtein,
    levenshtein_matrix,
    normalize_mean,
    tokenize,
    validate_matrix,
)
from .energy import (
    DistanceMatrix,
    EnergyBreakdown,
    as_distance_matrix,
    asset_energy,
    energy_breakdown,
    maxent_density,
    reference_energy,
    surprisal_asset,
    surprisal_total,
    total_energy,
    zero_pairs,
)
from .errors import CollisionError, DegenerateInputError, DoubletonError
from .io import (
    parse_date,
    read_matrix_csv,
    read_score_csv,
    read_texts,
    read_vectors_csv,
    write_correlations,
    write_heatmap_csv,
    write_matrix_csv,
    write_score_csv,
    write_score_json,
)
from .pipeline import (
    Asset,
    Dataset,
    HeatmapGrid,
    PipelineResult,
    build_matrix,
    correlations,
    heatmap_grid,
    max_workers,
    run_pipeline,
    with_day_precision,
)
from .potentials import COULOMB, PotentialSpec, eval_pair_potential, parse_potential, potential_values
from .scores import (
    COLLISION_POLICIES,
    VARIANTS,
    ScoreConfig,
    ScoreReport,
    bounded_score,
    generalized_mean_score,
    j_nearest_score,
    normalization_residual,
    rank_descending,
    score_all,
    score_asset,
    score_vs_mean_energy,
    time_ordered_scores,
)

__version__ = "0.1.0"

__all__ = [
    "COLLISION_POLICIES",
    "COULOMB",
    "DEFAULT_TOKEN_PATTERN",
    "EXTRACTION_MODES",
    "VARIANTS",
    "Asset",
    "CollisionError",
    "Dataset",
    "DegenerateInputError",
    "DistanceMatrix",
    "DoubletonError",
    "EnergyBreakdown",
    "ExtractionScheme",
    "FeatureVectors",
    "HeatmapGrid",
    "PipelineResult",
    "PotentialSpec",
    "ScoreConfig",
    "ScoreReport",
    "ValidationReport",
    "as_distance_matrix",
    "asset_energy",
    "bounded_score",
    "build_matrix",
    "correlations",
    "energy_breakdown",
    "euclidean_matrix",
    "eval_pair_potential",
    "extract_frequency_vectors",
    "generalized_mean_score",
    "heatmap_grid",
    "j_nearest_score",
    "levenshtein",
    "levenshtein_matrix",
    "max_workers",
    "maxent_density",
    "normalization_residual",
    "normalize_mean",
    "parse_date",
    "parse_potential",
    "potential_values",
    "rank_descending",
    "read_matrix_csv",
    "read_score_csv",
    "read_texts",
    "read_vectors_csv",
    "reference_energy",
    "run_pipeline",
    "score_all",
    "score_asset",
    "score_vs_mean_energy",
    "surprisal_asset",
    "surprisal_total",
    "time_ordered_scores",
    "tokenize",
    "total_energy",
    "validate_matrix",
    "with_day_precision",
    "write_correlations",
    "write_heatmap_csv",
    "write_matrix_csv",
    "write_score_csv",
    "write_score_json",
    "zero_pairs",
]
