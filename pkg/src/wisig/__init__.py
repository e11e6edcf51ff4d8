"""Writer-independent offline signature verification in dissimilarity space."""

from .backend import backend_name
from .core import (
    Dataset,
    DissimilarityVector,
    SignatureSample,
    between_pairs,
    dichotomy_transform,
    within_pairs,
)
from .fusion import FUSION_RULES, fuse
from .metrics import MetricsReport, ScoredQuery, aggregate, compute_report, eer, global_threshold
from .svm import SvmConfig, WiSvmModel, decision_score, load_model, rbf_kernel, save_model, train

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "DissimilarityVector",
    "FUSION_RULES",
    "MetricsReport",
    "ScoredQuery",
    "SignatureSample",
    "SvmConfig",
    "WiSvmModel",
    "aggregate",
    "backend_name",
    "between_pairs",
    "compute_report",
    "decision_score",
    "dichotomy_transform",
    "eer",
    "fuse",
    "global_threshold",
    "load_model",
    "rbf_kernel",
    "save_model",
    "train",
    "within_pairs",
]
