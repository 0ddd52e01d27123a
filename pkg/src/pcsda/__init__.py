"""Probabilistic class-specific discriminant analysis."""
from .dataset import LabeledDataset, MulticlassDataset, SplitSpec, load_csv, make_class_specific, split
from .estimator import PCSDA
from .exceptions import ConfigError, NumericalError
from .inference import Decision, RankResult, classify, log_posterior_ratio, posterior_ratio, rank
from .kernel import KernelConfig, KernelMap, fit_kernel_map, map_points, rbf_kernel, sigma_heuristic
from .metrics import average_precision, f1_score
from .model import PcsdaModel, fit_model, project
from .scatter import compute_scatters, estimate_covariances
from .specreg import build_graph_matrices, sr_fit
from .subclass import SubclassAssignment, kmeans, within_cluster_sse

__version__ = "0.1.0"

__all__ = [
    "PCSDA",
    "PcsdaModel",
    "fit_model",
    "project",
    "classify",
    "rank",
    "log_posterior_ratio",
    "posterior_ratio",
    "Decision",
    "RankResult",
    "compute_scatters",
    "estimate_covariances",
    "build_graph_matrices",
    "sr_fit",
    "kmeans",
    "within_cluster_sse",
    "SubclassAssignment",
    "rbf_kernel",
    "sigma_heuristic",
    "fit_kernel_map",
    "map_points",
    "KernelConfig",
    "KernelMap",
    "average_precision",
    "f1_score",
    "load_csv",
    "make_class_specific",
    "split",
    "SplitSpec",
    "LabeledDataset",
    "MulticlassDataset",
    "ConfigError",
    "NumericalError",
]
