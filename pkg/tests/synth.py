"""Synthetic data generators shared by the tests."""
import numpy as np


def blobs(seed, n_pos=30, n_neg=60, D=5, n_modes=3, spread=3.0):
    """Gaussian positives at the origin; negatives around a few random centres."""
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n_pos + n_neg, D))
    centres = spread * rng.normal(size=(n_modes, D))
    X[n_pos:] += centres[rng.integers(n_modes, size=n_neg)]
    y = np.r_[np.ones(n_pos, bool), np.zeros(n_neg, bool)]
    return X, y


def generative(seed, n_pos, n_sub, per_sub, D=4, phi_p=None, phi_n=None, phi_w=None,
               min_separation=None):
    """Draw from the generative model: x|pos ~ N(m, phi_p), subclass means
    y_k ~ N(m, phi_n), x|k ~ N(y_k, phi_w). Returns X, y, true labels, m.

    ``min_separation`` rejects subclass means whose Mahalanobis distance to
    ``m`` under ``phi_p + phi_w`` is below the threshold.
    """
    rng = np.random.default_rng(seed)
    m = rng.normal(size=D)
    phi_p = np.eye(D) if phi_p is None else phi_p
    phi_n = 4 * np.eye(D) if phi_n is None else phi_n
    phi_w = 0.5 * np.eye(D) if phi_w is None else phi_w
    P = rng.multivariate_normal(m, phi_p, n_pos)
    inner = np.linalg.inv(phi_p + phi_w)
    means = []
    while len(means) < n_sub:
        yk = rng.multivariate_normal(m, phi_n)
        if min_separation is None or np.sqrt((yk - m) @ inner @ (yk - m)) >= min_separation:
            means.append(yk)
    Q = np.concatenate([rng.multivariate_normal(yk, phi_w, per_sub) for yk in means])
    labels = np.repeat(np.arange(n_sub), per_sub)
    X = np.r_[P, Q]
    y = np.r_[np.ones(n_pos, bool), np.zeros(len(Q), bool)]
    return X, y, labels, m


def ring(rng, n, radius, noise=0.1):
    t = rng.uniform(0, 2 * np.pi, n)
    r = radius + noise * rng.normal(size=n)
    return np.c_[r * np.cos(t), r * np.sin(t)]


def nested_rings(seed, n=100):
    """Positive ring at radius 1.5 between a negative central disc and a
    negative outer ring at radius 3."""
    rng = np.random.default_rng(seed)
    X = np.r_[ring(rng, n, 1.5), ring(rng, n, 0.0, 0.25), ring(rng, n, 3.0)]
    y = np.r_[np.ones(n, bool), np.zeros(2 * n, bool)]
    return X, y


def tri_modal(seed, n=60, D=4, radius=4.0, noise=0.5):
    """Three negative subclasses at 120 degrees around the positive class;
    their overall mean coincides with the positive mean."""
    rng = np.random.default_rng(seed)
    P = rng.normal(scale=noise, size=(n, D))
    ang = np.array([0, 2, 4]) * np.pi / 3
    centres = np.zeros((3, D))
    centres[:, 0], centres[:, 1] = radius * np.cos(ang), radius * np.sin(ang)
    Q = np.concatenate([c + rng.normal(scale=noise, size=(n, D)) for c in centres])
    return np.r_[P, Q], np.r_[np.ones(n, bool), np.zeros(3 * n, bool)]
