"""Minimum spanning trees under the line-crossing metric."""
from .approx import SamplingConfig, approx_mst
from .ann import AnnConfig, LshIndex, mst_via_embedding
from .arrangement import build_arrangement, face_bfs_layers, locate
from .embedding import EmbeddingConfig, classify_pair, embed_points, label_hamming, plan_embedding, separation_probability
from .errors import (
    BudgetExceeded,
    CrossMetricError,
    DimensionUnsupported,
    DuplicateId,
    GapDegenerate,
    InvalidInstance,
    NotFound,
    OnHyperplane,
    ResampleExhausted,
    UnknownId,
)
from .estimator import estimate_weight_rough
from .forest import SpanningForest
from .geometry import Hyperplane, Instance, crossing_distance, generate_instance
from .mst_exact import bounded_spanning_forest, mst_bruteforce, mst_wavefront

__version__ = "0.1.0"
