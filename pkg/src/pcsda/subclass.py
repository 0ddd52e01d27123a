"""Negative-class subclass discovery with Lloyd's K-Means."""
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist


@dataclass(frozen=True)
class SubclassAssignment:
    """Cluster labels for the negative samples.

    Attributes
    ----------
    labels : (N_n,) int array with values in ``[0, k)``
    centroids : (k, D) array
    sizes : (k,) int array, all >= 1
    sse_trace : tuple of floats
        Within-cluster SSE after every Lloyd iteration (empty when no
        iterations ran).
    """

    labels: np.ndarray
    centroids: np.ndarray
    sizes: np.ndarray
    sse_trace: tuple = ()
    n_iter: int = 0

    @property
    def k(self):
        return self.centroids.shape[0]

    @classmethod
    def from_labels(cls, X, labels, k=None):
        """Build an assignment from known labels (centroids are the cluster means)."""
        X = np.asarray(X, dtype=float)
        labels = np.asarray(labels, dtype=int)
        k = int(labels.max()) + 1 if k is None else int(k)
        sizes = np.bincount(labels, minlength=k)
        if labels.min() < 0 or np.any(sizes == 0):
            raise ValueError("every cluster in [0, k) must be non-empty")
        return cls(labels, _centroids(X, labels, k, sizes), sizes)


def _centroids(X, labels, k, sizes):
    order = np.argsort(labels, kind="stable")
    starts = np.r_[0, np.cumsum(sizes)[:-1]]
    return np.add.reduceat(X[order], starts, axis=0) / sizes[:, None]


def _sq_dists(X, C):
    # explicit differences (no |x|^2 - 2x.c + |c|^2 expansion) keep exact ties exact,
    # so argmin picks the lowest index
    return cdist(X, C, "sqeuclidean")


def within_cluster_sse(X, assignment):
    """Sum of squared distances of each sample to its cluster centroid."""
    X = np.asarray(X, dtype=float)
    diff = X - assignment.centroids[assignment.labels]
    return float(np.sum(diff * diff))


def _kmeanspp(X, k, rng):
    n = X.shape[0]
    chosen = [int(rng.integers(n))]
    d2 = ((X - X[chosen[0]]) ** 2).sum(1)
    for _ in range(1, k):
        total = d2.sum()
        if total > 0:
            nxt = int(rng.choice(n, p=d2 / total))
        else:
            # every remaining point coincides with a chosen center
            rest = np.setdiff1d(np.arange(n), chosen)
            nxt = int(rest[0])
        chosen.append(nxt)
        d2 = np.minimum(d2, ((X - X[nxt]) ** 2).sum(1))
    return X[chosen].copy()


def _repair_empty(X, labels, C, k):
    sizes = np.bincount(labels, minlength=k)
    for empty in np.flatnonzero(sizes == 0):
        d = ((X - C[labels]) ** 2).sum(1)
        d[sizes[labels] <= 1] = -1.0  # never empty another cluster
        far = int(np.argmax(d))
        sizes[labels[far]] -= 1
        labels[far] = empty
        sizes[empty] = 1
        C[empty] = X[far]
    return labels, sizes


def kmeans(X, k, seed=0, max_iter=300):
    """Lloyd's algorithm with k-means++ seeding.

    Iterates until the assignment stops changing or ``max_iter`` is reached.
    Ties in the assignment step go to the lowest cluster index. Clusters that
    become empty receive the sample farthest from its current centroid.
    ``k == len(X)`` short-circuits to singleton clusters.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    k = int(k)
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if k > n:
        raise ValueError(f"k={k} exceeds the number of samples ({n})")
    if k == n:
        return SubclassAssignment(np.arange(n), X.copy(), np.ones(n, dtype=int))

    rng = np.random.default_rng(seed)
    C = _kmeanspp(X, k, rng)
    labels = np.full(n, -1)
    trace = []
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        new = np.argmin(_sq_dists(X, C), axis=1)
        new, sizes = _repair_empty(X, new, C, k)
        changed = not np.array_equal(new, labels)
        labels = new
        C = _centroids(X, labels, k, sizes)
        diff = X - C[labels]
        trace.append(float(np.sum(diff * diff)))
        if not changed:
            break
    sizes = np.bincount(labels, minlength=k)
    return SubclassAssignment(labels, C, sizes, tuple(trace), n_iter)
