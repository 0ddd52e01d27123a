"""Training: subclass discovery, scatter estimation and the discriminant projection."""
import warnings
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .numkit import gen_eig_spd, resolve_ridge
from .scatter import compute_scatters, estimate_covariances
from .specreg import sr_fit
from .subclass import SubclassAssignment, kmeans

SOLVERS = ("direct", "specreg")


@dataclass(frozen=True)
class PcsdaModel:
    """Everything the test phase needs.

    Projected covariances are stored in the frame centered on the positive
    mean, so the projected positive mean ``mu`` is the origin there.

    Attributes
    ----------
    W : (D, d) projection, columns ordered by descending eigenvalue
    phi_p, phi_o : (d, d) projected positive and negative covariances
    mean : (D,) positive-class mean
    prior_p, prior_n : training-set class proportions
    eigenvalues : (d,) generalized eigenvalues attached to ``W``'s columns
    ridge : ridge actually added to ``S_p + S_w`` in the eigenproblem
    """

    W: np.ndarray
    phi_p: np.ndarray
    phi_o: np.ndarray
    mean: np.ndarray
    prior_p: float
    prior_n: float
    eigenvalues: np.ndarray
    n_subclasses: int
    ridge: float

    @property
    def d(self):
        return self.W.shape[1]

    @property
    def n_features(self):
        return self.W.shape[0]

    @property
    def mu(self):
        """Projected positive mean ``W^T m`` in the uncentered frame."""
        return self.mean @ self.W

    def truncate(self, d):
        """Model restricted to the leading ``d`` directions.

        Exact, since the projected covariances of a column prefix of ``W``
        are the leading blocks of the full ones.
        """
        if not 1 <= d <= self.d:
            raise ValueError(f"d must lie in [1, {self.d}], got {d}")
        return replace(
            self,
            W=self.W[:, :d],
            phi_p=self.phi_p[:d, :d],
            phi_o=self.phi_o[:d, :d],
            eigenvalues=self.eigenvalues[:d],
        )


@dataclass(frozen=True)
class FitResult:
    model: PcsdaModel
    assignment: SubclassAssignment
    scatters: object
    covariances: object


def _distinct_rows(X):
    return np.unique(X, axis=0).shape[0]


def resolve_subclasses(X_neg, n_subclasses):
    """Number of subclasses to use: ``"all"`` means one per negative sample.

    Clamped, with a warning, to the number of distinct negative points.
    """
    n_neg = X_neg.shape[0]
    if isinstance(n_subclasses, str):
        if n_subclasses != "all":
            raise ValueError(f"n_subclasses must be an integer or 'all', got {n_subclasses!r}")
        K = n_neg
    else:
        K = int(n_subclasses)
        if K < 1:
            raise ValueError(f"n_subclasses must be >= 1, got {K}")
        if K > n_neg:
            raise ValueError(f"n_subclasses={K} exceeds the number of negative samples ({n_neg})")
    distinct = _distinct_rows(X_neg)
    if K > distinct:
        warnings.warn(
            f"only {distinct} distinct negative samples; reducing K from {K} to {distinct}",
            stacklevel=3,
        )
        K = distinct
    return K


def fit_model(X, y, n_components=1, n_subclasses=1, ridge="auto", seed=0, solver="direct",
              max_iter=300, assignment: Optional[SubclassAssignment] = None, full=False):
    """Train a PCSDA projection and its class-conditional Gaussians.

    Parameters
    ----------
    X : (N, D) array
    y : (N,) bool array, True for positives
    n_components : int
        Subspace dimension ``d``; must satisfy ``d <= min(D, K)``.
    n_subclasses : int or "all"
        Number of negative subclasses ``K``. ``"all"`` (or ``K == N_n``)
        skips clustering and treats every negative as its own subclass.
    ridge : float or "auto"
        Added to ``S_p + S_w`` in the eigenproblem only.
    seed, max_iter : K-Means controls.
    solver : {"direct", "specreg"}
    assignment : SubclassAssignment, optional
        Use these subclass labels instead of clustering.
    full : bool
        Return a :class:`FitResult` with the intermediate quantities.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=bool)
    if solver not in SOLVERS:
        raise ValueError(f"solver must be one of {SOLVERS}, got {solver!r}")
    N, D = X.shape
    X_neg = X[~y]
    n_neg = X_neg.shape[0]

    if assignment is None:
        K = resolve_subclasses(X_neg, n_subclasses)
        if K < n_neg:
            assignment = kmeans(X_neg, K, seed=seed, max_iter=max_iter)
        else:
            assignment = SubclassAssignment(np.arange(n_neg), X_neg.copy(), np.ones(n_neg, dtype=int))
    K = assignment.k

    d = int(n_components)
    if not 1 <= d <= min(D, K):
        raise ValueError(f"n_components must lie in [1, min(D={D}, K={K})], got {d}")

    s = compute_scatters(X, y, assignment.labels)
    cov = estimate_covariances(s)
    eps = resolve_ridge(s.S_I, ridge)
    if solver == "direct":
        pairs = gen_eig_spd(s.S_n, s.S_I, eps)
        W, values = pairs.vectors[:, :d], pairs.values[:d]
    else:
        W, values = sr_fit(X, y, assignment.labels, d, ridge=eps, return_values=True)

    phi_p = W.T @ cov.phi_p @ W
    phi_o = W.T @ cov.phi_o @ W
    model = PcsdaModel(
        W=W,
        phi_p=0.5 * (phi_p + phi_p.T),
        phi_o=0.5 * (phi_o + phi_o.T),
        mean=s.mean,
        prior_p=s.n_pos / N,
        prior_n=s.n_neg / N,
        eigenvalues=np.asarray(values, dtype=float),
        n_subclasses=K,
        ridge=eps,
    )
    if full:
        return FitResult(model, assignment, s, cov)
    return model


def project(model, X):
    """Centered projection ``(x - m)^T W`` of every row of ``X``."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != model.n_features:
        raise ValueError(f"X has {X.shape[1]} features, model expects {model.n_features}")
    return (X - model.mean) @ model.W
