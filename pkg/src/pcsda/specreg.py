"""Spectral-regression route to the discriminant subspace.

Instead of factoring the D x D pencil ``(S_n, S_p + S_w)`` directly, the
problem is posed on the N x N graph matrices built from label and subclass
indicators, ``L_n v = lam (L_I + eps I) v``, and the resulting eigenvectors
are regressed back to feature space with the pseudo-inverse of the centered
data matrix.
"""
import warnings
from dataclasses import dataclass

import numpy as np

from .numkit import fix_signs, gen_eig_spd, pseudo_inverse_apply, resolve_ridge


@dataclass(frozen=True)
class IndicatorSet:
    """Membership indicators of the positive class and each negative subclass.

    ``one_p`` is an (N,) 0/1 vector; ``one_k`` is (N, K) with one column per
    subclass. Rows follow the dataset order.
    """

    one_p: np.ndarray
    one_k: np.ndarray

    @classmethod
    def from_labels(cls, y, labels):
        y = np.asarray(y, dtype=bool)
        labels = np.asarray(labels, dtype=int)
        if labels.shape != ((~y).sum(),):
            raise ValueError("one subclass label per negative row is required")
        k = int(labels.max()) + 1
        one_k = np.zeros((y.shape[0], k))
        one_k[np.flatnonzero(~y), labels] = 1.0
        if np.any(one_k.sum(0) == 0):
            raise ValueError("assignment has empty subclasses")
        return cls(y.astype(float), one_k)

    @property
    def n_pos(self):
        return int(self.one_p.sum())

    @property
    def sizes(self):
        return self.one_k.sum(0).astype(int)


def build_graph_matrices(ind):
    """Return ``(L_n, L_I)`` with ``X L_n X^T = S_n`` and ``X L_I X^T = S_p + S_w``."""
    Np = ind.n_pos
    U = ind.one_k / ind.sizes - (ind.one_p / Np)[:, None]
    L_n = U @ U.T
    blocks = np.column_stack([ind.one_p, ind.one_k])
    counts = blocks.sum(0)
    L_I = np.eye(len(ind.one_p)) * blocks.sum(1) - (blocks / counts) @ blocks.T
    return 0.5 * (L_n + L_n.T), 0.5 * (L_I + L_I.T)


def sr_fit(X, y, labels, d, eps=None, ridge="auto", return_values=False):
    """Discriminant projection through spectral regression.

    The top-K graph eigenvectors (K = number of subclasses, the rank of
    ``L_n``) are normalized to unit length and regressed onto the
    positive-mean-centered data with a pseudo-inverse. The K-dimensional span
    obtained this way is then ordered by a Rayleigh-Ritz step on the
    feature-space pencil ``(S_n, S_p + S_w + ridge I)``, and the leading ``d``
    directions are kept.

    Parameters
    ----------
    X : (N, D) array
    y : (N,) bool array
    labels : (N_n,) int array of negative subclass labels
    d : int
        Requested dimension; clamped to K with a warning.
    eps : float, optional
        Ridge on ``L_I``. Defaults to ``1e-8 * N``.
    ridge : float or "auto"
        Ridge used for the Rayleigh-Ritz step, matching the direct solver.

    Returns
    -------
    W : (D, d) array, or ``(W, eigenvalues)`` when ``return_values``.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=bool)
    N, D = X.shape
    ind = IndicatorSet.from_labels(y, labels)
    K = ind.one_k.shape[1]
    if d > K:
        warnings.warn(f"d={d} exceeds the number of subclasses ({K}); using d={K}", stacklevel=2)
        d = K
    if N < D:
        warnings.warn(f"fewer samples ({N}) than features ({D}); regression is rank deficient", stacklevel=2)
    if eps is None:
        eps = 1e-8 * N
    if eps <= 0:
        raise ValueError("eps must be positive")

    L_n, L_I = build_graph_matrices(ind)
    V = gen_eig_spd(L_n, L_I, eps).vectors[:, :K]
    V /= np.linalg.norm(V, axis=0)

    Xc = X - X[y].mean(axis=0)
    W_full = pseudo_inverse_apply(Xc, V)

    # orthonormal basis of the regressed span, then Rayleigh-Ritz
    Q, s, _ = np.linalg.svd(W_full, full_matrices=False)
    Q = Q[:, s > 1e-12 * s[0]]
    S_n = Xc.T @ L_n @ Xc
    S_I = Xc.T @ L_I @ Xc
    r = resolve_ridge(S_I, ridge)
    A = Q.T @ S_n @ Q
    B = Q.T @ (S_I + r * np.eye(D)) @ Q
    pairs = gen_eig_spd(0.5 * (A + A.T), 0.5 * (B + B.T), 0.0)
    W = fix_signs(Q @ pairs.vectors[:, :d])
    if return_values:
        return W, pairs.values[:d]
    return W
