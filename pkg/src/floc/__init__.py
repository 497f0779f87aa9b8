"""Facility-location coreset selection for embedding token streams.

Selects a compact, representative, and diverse subset of embedding
vectors under a budget by maximizing the facility-location objective
with an exact-equivalent lazy greedy algorithm; ships block-wise
processing, baseline selectors, quality metrics, a brute-force oracle,
synthetic instance generators, a binary embedding file format, and a
benchmarking CLI.
"""

from .baselines import (
    farthest_point_select,
    kmeans_medoid_select,
    random_select,
    uniform_select,
)
from .coverage import CoverageState, apply_pick, marginal_gain, new_state, objective
from .embeddings import (
    RAW,
    SHIFTED,
    SimilarityMatrix,
    TokenMatrix,
    as_tokens,
    cosine_similarity,
    normalize_rows,
    similarity_matrix,
)
from .engines import Selection, lazy_greedy, naive_greedy
from .errors import FlocError
from .fileio import read_embeddings, write_embeddings
from .instances import InstanceSpec, generate, rare_indices
from .metrics import (
    QualityReport,
    averaged_distance,
    averaged_sum_coverage,
    z_normalize,
)
from .oracle import OracleResult, exhaustive_optimum, verify_bound
from .pipeline import BlockPlan, CompressionConfig, allocate_budget, partition, run_blocks, select
from .rng import Rng

__version__ = "0.1.0"

__all__ = [
    "BlockPlan",
    "CompressionConfig",
    "CoverageState",
    "FlocError",
    "InstanceSpec",
    "OracleResult",
    "QualityReport",
    "RAW",
    "Rng",
    "SHIFTED",
    "Selection",
    "SimilarityMatrix",
    "TokenMatrix",
    "allocate_budget",
    "apply_pick",
    "as_tokens",
    "averaged_distance",
    "averaged_sum_coverage",
    "cosine_similarity",
    "exhaustive_optimum",
    "farthest_point_select",
    "generate",
    "kmeans_medoid_select",
    "lazy_greedy",
    "marginal_gain",
    "naive_greedy",
    "new_state",
    "normalize_rows",
    "objective",
    "partition",
    "random_select",
    "rare_indices",
    "read_embeddings",
    "run_blocks",
    "select",
    "similarity_matrix",
    "uniform_select",
    "verify_bound",
    "write_embeddings",
    "z_normalize",
]
