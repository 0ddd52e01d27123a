"""Explicit RBF kernel feature map.

Features are built from the eigen-decomposition ``K = U S U^T`` of the
training kernel matrix: training point ``i`` maps to row ``i`` of
``U S^{1/2}`` and a new point ``x`` maps to ``S^{-1/2} U^T k(x)`` with
``k(x)_i = kappa(x_i, x)``. Inner products of training features reproduce
``K`` on the retained spectrum, so linear methods on these features are
kernel methods on the original inputs.
"""
from dataclasses import dataclass

import numpy as np
from scipy import linalg
from scipy.spatial.distance import cdist, pdist

from .exceptions import NumericalError
from .numkit import fix_signs

KERNELS = ("rbf",)


@dataclass(frozen=True)
class KernelConfig:
    kind: str = "rbf"
    sigma: object = "auto"

    def __post_init__(self):
        if self.kind not in KERNELS:
            raise ValueError(f"unsupported kernel {self.kind!r}")
        if self.sigma != "auto":
            s = float(self.sigma)
            if not np.isfinite(s) or s <= 0:
                raise ValueError(f"sigma must be positive, got {self.sigma}")
            object.__setattr__(self, "sigma", s)

    @property
    def sigma_rule(self):
        return "mean-positive-pairwise" if self.sigma == "auto" else "manual"


def rbf_kernel(x, y, sigma):
    """``exp(-||x - y||^2 / (2 sigma^2))`` for two vectors."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("non-finite input")
    diff = x - y
    return float(np.exp(-np.dot(diff, diff) / (2.0 * sigma * sigma)))


def rbf_gram(A, B, sigma):
    """Kernel matrix between the rows of ``A`` and ``B``."""
    D2 = cdist(np.atleast_2d(A), np.atleast_2d(B), "sqeuclidean")
    return np.exp(-D2 / (2.0 * sigma * sigma))


def sigma_heuristic(X_pos):
    """Mean Euclidean distance over all unordered pairs of positive samples."""
    X_pos = np.asarray(X_pos, dtype=float)
    if X_pos.shape[0] < 2:
        raise ValueError("need at least 2 positive samples")
    sigma = float(np.mean(pdist(X_pos)))
    if sigma <= 0:
        raise ValueError("all positive samples coincide; mean pairwise distance is zero")
    return sigma


@dataclass(frozen=True)
class KernelMap:
    """Fitted explicit feature map.

    Attributes
    ----------
    train_points : (N, D) reference samples
    U : (N, L) retained eigenvectors of the training kernel matrix
    scale : (L,) square roots of the retained eigenvalues, descending
    sigma : RBF bandwidth
    cutoff : absolute eigenvalue threshold that was applied
    """

    train_points: np.ndarray
    U: np.ndarray
    scale: np.ndarray
    sigma: float
    cutoff: float

    @property
    def dim(self):
        return self.scale.shape[0]

    @property
    def train_features(self):
        return self.U * self.scale

    def kernel(self, X):
        return rbf_gram(X, self.train_points, self.sigma)


def fit_kernel_map(X, sigma, tau_rel=1e-10, max_dim=None):
    """Eigen-decompose the RBF kernel matrix of ``X`` and keep the leading spectrum.

    Eigenvalues not exceeding ``tau_rel * lambda_max`` are dropped.
    ``max_dim`` optionally caps the number of retained directions.
    """
    X = np.asarray(X, dtype=float)
    if X.shape[0] < 2:
        raise ValueError("need at least 2 training points")
    if not 0 <= tau_rel < 1:
        raise ValueError(f"tau_rel must lie in [0, 1), got {tau_rel}")
    K = rbf_gram(X, X, sigma)
    # 1'K1/N <= lambda_max, so this window holds every eigenvalue we keep
    floor = tau_rel * K.sum() / K.shape[0]
    try:
        lam, U = linalg.eigh(K, subset_by_value=(floor, np.inf), driver="evr")
    except linalg.LinAlgError as exc:
        raise NumericalError(f"kernel eigensolver failed: {exc}") from exc
    lam, U = lam[::-1], fix_signs(U[:, ::-1])
    cutoff = tau_rel * lam[0]
    keep = lam > cutoff
    if max_dim is not None:
        keep[int(max_dim):] = False
    return KernelMap(X.copy(), U[:, keep].copy(), np.sqrt(lam[keep]), float(sigma), float(cutoff))


def map_points(km, X):
    """Features ``S^{-1/2} U^T k(x)`` for each row of ``X``."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != km.train_points.shape[1]:
        raise ValueError(f"X has {X.shape[1]} features, kernel map expects {km.train_points.shape[1]}")
    return (km.kernel(X) @ km.U) / km.scale
