"""Test phase: posterior-ratio classification and distance ranking."""
from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .model import project
from .numkit import cholesky_spd

_COV_RIDGE = 1e-9


@dataclass(frozen=True)
class Decision:
    """Per-row classification output.

    ``labels`` is True where ``scores >= 0``; ``ratios = exp(scores)``, with
    overflow reported as ``inf``.
    """

    labels: np.ndarray
    scores: np.ndarray
    ratios: np.ndarray


@dataclass(frozen=True)
class RankResult:
    order: np.ndarray
    distances: np.ndarray


def _ridged_factor(S):
    d = S.shape[0]
    scale = np.trace(S) / d
    r = _COV_RIDGE * scale if scale > 0 else _COV_RIDGE
    return cholesky_spd(S + r * np.eye(d), "projected covariance")


def _half_sq_norm(L, Z):
    V = linalg.solve_triangular(L, Z.T, lower=True)
    return 0.5 * np.einsum("ij,ij->j", V, V)


def log_posterior_ratio(model, z, equiprobable=False):
    """Log ratio of class posteriors ``g`` for centered projected points.

    ``z`` is a (d,) vector or an (n, d) array of rows in the frame where the
    projected positive mean is the origin. Both projected covariances get a
    ``1e-9 * trace / d`` ridge before factorization.
    """
    Z = np.asarray(z, dtype=float)
    single = Z.ndim == 1
    Z = np.atleast_2d(Z)
    if Z.shape[1] != model.d:
        raise ValueError(f"expected {model.d}-dimensional points, got {Z.shape[1]}")
    if not np.all(np.isfinite(Z)):
        raise ValueError("non-finite projected point")
    Lp = _ridged_factor(model.phi_p)
    Lo = _ridged_factor(model.phi_o)
    prior = 0.0 if equiprobable else np.log(model.prior_p) - np.log(model.prior_n)
    logdet = np.sum(np.log(np.diag(Lo))) - np.sum(np.log(np.diag(Lp)))
    g = prior + logdet - _half_sq_norm(Lp, Z) + _half_sq_norm(Lo, Z)
    return float(g[0]) if single else g


def posterior_ratio(model, z, equiprobable=False):
    """``exp(g)``; values beyond the float range come back as ``inf``."""
    with np.errstate(over="ignore"):
        return np.exp(log_posterior_ratio(model, z, equiprobable))


def classify(model, X, equiprobable=False):
    """Label rows of ``X`` positive when ``g >= 0``."""
    g = np.atleast_1d(log_posterior_ratio(model, project(model, X), equiprobable))
    with np.errstate(over="ignore"):
        ratios = np.exp(g)
    return Decision(g >= 0, g, ratios)


def rank(model, X):
    """Order rows of ``X`` by projected distance to the positive mean (stable)."""
    dist = np.linalg.norm(project(model, X), axis=1)
    return RankResult(np.argsort(dist, kind="stable"), dist)
