"""scikit-learn estimator front end."""
import copy

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from . import inference
from .kernel import KernelConfig, fit_kernel_map, map_points, sigma_heuristic
from .model import SOLVERS, fit_model, project


def binarize(y, pos_label=1):
    """Boolean positive-class mask from a label vector."""
    y = np.asarray(y)
    if y.dtype == bool:
        return y
    return y == pos_label


class PCSDA(ClassifierMixin, TransformerMixin, BaseEstimator):
    """Probabilistic class-specific discriminant analysis.

    Learns a ``d``-dimensional subspace in which one positive class is
    compact and the (possibly multi-modal) negative class is spread away from
    it. Negative samples are grouped into ``n_subclasses`` clusters with
    K-Means; each cluster is modelled as one Gaussian mode. The fitted model
    doubles as a classifier (log posterior ratio ``g``, positive when
    ``g >= 0``) and as a ranker (distance to the projected positive mean).

    Parameters
    ----------
    n_components : int, default=1
        Subspace dimension ``d``, at most ``min(n_features, n_subclasses)``.
    n_subclasses : int or "all", default=1
        Number of negative subclasses ``K``. ``"all"`` gives one subclass per
        negative sample, which reduces to classic CSDA.
    ridge : float or "auto", default="auto"
        Ridge on ``S_p + S_w`` in the eigenproblem. ``"auto"`` is
        ``1e-6 * trace / dim``.
    solver : {"direct", "specreg"}, default="direct"
    kernel : None or "rbf", default=None
        Fit on explicit RBF kernel features instead of raw inputs.
    sigma : float or "auto", default="auto"
        RBF bandwidth; "auto" is the mean pairwise distance of the positive
        training samples.
    equiprobable : bool, default=False
        Use equal class priors instead of training proportions.
    random_state : int, default=0
        Seed for K-Means.
    pos_label : default=1
        Label value treated as positive when ``y`` is not boolean.

    Attributes
    ----------
    model_ : PcsdaModel
    kernel_map_ : KernelMap or None
    sigma_ : float or None
    """

    def __init__(self, n_components=1, n_subclasses=1, ridge="auto", solver="direct",
                 kernel=None, sigma="auto", equiprobable=False, random_state=0,
                 max_iter=300, pos_label=1, kernel_tau=1e-10, kernel_max_dim=None):
        self.n_components = n_components
        self.n_subclasses = n_subclasses
        self.ridge = ridge
        self.solver = solver
        self.kernel = kernel
        self.sigma = sigma
        self.equiprobable = equiprobable
        self.random_state = random_state
        self.max_iter = max_iter
        self.pos_label = pos_label
        self.kernel_tau = kernel_tau
        self.kernel_max_dim = kernel_max_dim

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=float)
        y = binarize(y, self.pos_label)
        if y.sum() < 2 or (~y).sum() < 1:
            raise ValueError("need at least 2 positive and 1 negative samples")
        if self.solver not in SOLVERS:
            raise ValueError(f"solver must be one of {SOLVERS}, got {self.solver!r}")
        self.n_features_in_ = X.shape[1]
        self.classes_ = np.array([0, 1])

        self.kernel_map_ = None
        self.sigma_ = None
        F = X
        if self.kernel is not None:
            cfg = KernelConfig(self.kernel, self.sigma)
            self.sigma_ = sigma_heuristic(X[y]) if cfg.sigma == "auto" else cfg.sigma
            self.kernel_map_ = fit_kernel_map(X, self.sigma_, self.kernel_tau, self.kernel_max_dim)
            F = self.kernel_map_.train_features

        result = fit_model(F, y, self.n_components, self.n_subclasses, self.ridge,
                           self.random_state, self.solver, self.max_iter, full=True)
        self.model_ = result.model
        self.assignment_ = result.assignment
        return self

    def _features(self, X):
        check_is_fitted(self, "model_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        if self.kernel_map_ is not None:
            return map_points(self.kernel_map_, X)
        return X

    def transform(self, X):
        """Projected coordinates, centered on the projected positive mean."""
        F = self._features(X)
        return project(self.model_, F)

    def decision_function(self, X):
        """Log posterior ratio ``g``; positive values favour the positive class."""
        return inference.log_posterior_ratio(self.model_, self.transform(X), self.equiprobable)

    def posterior_ratio(self, X):
        return inference.posterior_ratio(self.model_, self.transform(X), self.equiprobable)

    def predict(self, X):
        return (self.decision_function(X) >= 0).astype(int)

    def rank(self, X):
        """Stable ascending order of projected distance to the positive mean."""
        return inference.rank(self.model_, self._features(X))

    def distances(self, X):
        return np.linalg.norm(self.transform(X), axis=1)

    def truncated(self, n_components):
        """Copy of this fitted estimator keeping only the leading directions."""
        check_is_fitted(self, "model_")
        new = copy.copy(self)
        new.model_ = self.model_.truncate(n_components)
        new.n_components = n_components
        return new
