"""Scatter matrices and maximum-likelihood covariance estimates.

All quantities are expressed in the frame centered on the positive-class mean
``m``: every sample is shifted by ``-m`` before any outer product is formed.
"""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ScatterSet:
    S_p: np.ndarray
    S_n: np.ndarray
    S_w: np.ndarray
    mean: np.ndarray
    n_pos: int
    n_neg: int
    n_subclasses: int

    @property
    def S_I(self):
        """Inner scatter ``S_p + S_w`` (right-hand side of the eigenproblem)."""
        return self.S_p + self.S_w


@dataclass(frozen=True)
class CovarianceEstimates:
    phi_p: np.ndarray
    phi_w: np.ndarray
    phi_n: np.ndarray
    phi_o: np.ndarray


def _sym(A):
    return 0.5 * (A + A.T)


def compute_scatters(X, y, labels):
    """Positive, out-of-class and within-subclass scatter.

    Parameters
    ----------
    X : (N, D) array
    y : (N,) bool array, True for positives
    labels : (N_n,) int array
        Subclass index of every negative row, in row order.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=bool)
    labels = np.asarray(labels, dtype=int)
    if X.shape[0] != y.shape[0]:
        raise ValueError(f"X has {X.shape[0]} rows but y has {y.shape[0]}")
    neg = X[~y]
    if labels.shape != (neg.shape[0],):
        raise ValueError(f"assignment covers {labels.shape[0]} rows, expected {neg.shape[0]} negatives")
    k = int(labels.max()) + 1
    sizes = np.bincount(labels, minlength=k)
    if np.any(sizes == 0):
        raise ValueError("assignment has empty subclasses")

    pos = X[y]
    m = pos.mean(axis=0)
    P = pos - m
    S_p = P.T @ P

    means = np.zeros((k, X.shape[1]))
    np.add.at(means, labels, neg)
    means /= sizes[:, None]
    R = neg - means[labels]
    S_w = R.T @ R
    C = means - m
    S_n = C.T @ C
    return ScatterSet(_sym(S_p), _sym(S_n), _sym(S_w), m, pos.shape[0], neg.shape[0], k)


def estimate_covariances(s):
    """Saddle-point estimates of the generative model's covariances.

    With ``M = N_n / K`` (real-valued for unbalanced subclasses)::

        phi_p = S_p / N_p
        phi_w = S_w / (N_n - K)
        phi_n = S_n / K - S_w / (M (N_n - K))
        phi_o = phi_n + phi_w = S_n / K + S_w / N_n

    When every negative sample is its own subclass (``K == N_n``) ``phi_w``
    is zero and ``phi_o == phi_n == S_n / K``.
    """
    if s.n_pos < 2:
        raise ValueError("need at least 2 positive samples")
    if not 1 <= s.n_subclasses <= s.n_neg:
        raise ValueError(f"need 1 <= K <= N_n, got K={s.n_subclasses}, N_n={s.n_neg}")
    K, Nn = s.n_subclasses, s.n_neg
    phi_p = s.S_p / s.n_pos
    if K == Nn:
        phi_w = np.zeros_like(s.S_w)
        phi_n = s.S_n / K
    else:
        M = Nn / K
        phi_w = s.S_w / (Nn - K)
        phi_n = s.S_n / K - s.S_w / (M * (Nn - K))
    phi_o = s.S_n / K + s.S_w / Nn
    return CovarianceEstimates(phi_p, phi_w, phi_n, phi_o)
