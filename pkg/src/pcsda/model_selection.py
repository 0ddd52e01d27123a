"""Stratified K-fold grid search over subspace dimension and subclass count."""
import math
from dataclasses import dataclass, field

import numpy as np

from .inference import classify
from .kernel import fit_kernel_map, map_points, sigma_heuristic
from .metrics import average_precision_from_distances, f1_score
from .model import fit_model, project, resolve_subclasses

OBJECTIVES = ("map", "f1")
MODES = ("pcsda1", "pcsdaK", "csda")
DEFAULT_K_GRID = (5, 10, 15, 20)


@dataclass(frozen=True)
class CvGrid:
    d_values: tuple = tuple(range(1, 26))
    k_values: tuple = DEFAULT_K_GRID
    folds: int = 5
    seed: int = 0

    def __post_init__(self):
        if int(self.folds) < 2:
            raise ValueError("folds must be >= 2")
        d_values = tuple(int(d) for d in self.d_values)
        k_values = tuple(k if k == "all" else int(k) for k in self.k_values)
        if not d_values or not k_values:
            raise ValueError("d_values and k_values must be non-empty")
        if any(d < 1 for d in d_values) or any(k != "all" and k < 1 for k in k_values):
            raise ValueError("grid values must be positive")
        object.__setattr__(self, "d_values", d_values)
        object.__setattr__(self, "k_values", k_values)

    @classmethod
    def for_mode(cls, mode, d_values=tuple(range(1, 26)), k_values=DEFAULT_K_GRID, folds=5, seed=0):
        """Grid for a named variant: PCSDA-1 fixes K=1, CSDA uses one subclass per negative."""
        if mode == "pcsda1":
            k_values = (1,)
        elif mode == "csda":
            k_values = ("all",)
        elif mode != "pcsdaK":
            raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
        return cls(tuple(d_values), tuple(k_values), folds, seed)


@dataclass
class CvResult:
    """Mean validation scores per grid cell and the winning cells.

    ``table`` rows are ``(d, K, mean_map, mean_f1)``; infeasible cells
    (``d > min(D, K)``) are omitted. ``best`` maps each objective to
    ``(d, K, score)``.
    """

    table: list
    best: dict = field(default_factory=dict)

    def best_params(self, objective):
        d, K, _ = self.best[objective]
        return d, K


def stratified_folds(y, folds, seed):
    """Fold index per row; each stratum is shuffled then dealt round-robin."""
    y = np.asarray(y, dtype=bool)
    if y.sum() < folds or (~y).sum() < 1:
        raise ValueError(
            f"infeasible folds: {int(y.sum())} positives and {int((~y).sum())} negatives for {folds} folds"
        )
    if y.sum() - math.ceil(y.sum() / folds) < 2:
        raise ValueError("infeasible folds: a training fold would keep fewer than 2 positives")
    rng = np.random.default_rng(seed)
    fold_of = np.empty(y.shape[0], dtype=int)
    for stratum in (np.flatnonzero(y), np.flatnonzero(~y)):
        perm = rng.permutation(stratum)
        fold_of[perm] = np.arange(perm.shape[0]) % folds
    return fold_of


def kernel_features(X_tr, y_tr, X_other, kernel=None, sigma="auto", tau=1e-10, max_dim=None):
    """Training and held-out features (raw inputs when ``kernel`` is None)."""
    if kernel is None:
        return X_tr, X_other
    s = sigma_heuristic(X_tr[y_tr]) if sigma == "auto" else float(sigma)
    km = fit_kernel_map(X_tr, s, tau, max_dim)
    return km.train_features, map_points(km, X_other)


def _order_key(K, n_neg):
    return n_neg if K == "all" else K


def evaluate_grid(F_tr, y_tr, F_va, y_va, d_values, k_values, ridge="auto", solver="direct",
                  seed=0, max_iter=300, equiprobable=False):
    """Validation (AP, f1) for every feasible ``(d, K)`` cell of one split.

    One model is fitted per K at the largest feasible d; smaller d reuse its
    leading directions.
    """
    out = {}
    D = F_tr.shape[1]
    n_neg = int((~y_tr).sum())
    for K in k_values:
        if K != "all" and K > n_neg:
            continue
        K_eff = resolve_subclasses(F_tr[~y_tr], K)
        feasible = [d for d in d_values if d <= min(D, K_eff)]
        if not feasible:
            continue
        full = fit_model(F_tr, y_tr, max(feasible), K, ridge, seed, solver, max_iter)
        for d in feasible:
            m = full.truncate(d)
            ap = average_precision_from_distances(np.linalg.norm(project(m, F_va), axis=1), y_va)
            f1 = f1_score(classify(m, F_va, equiprobable).labels, y_va)
            out[(d, K)] = (ap, f1)
    return out


def cross_validate(X, y, grid, objective="both", solver="direct", kernel=None, sigma="auto",
                   ridge="auto", equiprobable=False, max_iter=300, kernel_max_dim=None,
                   kernel_tau=1e-10):
    """Grid search with stratified folds.

    For each ``(d, K)`` the validation AP and f1 are averaged over folds;
    the best cell per objective wins, ties going to smaller K, then smaller d.

    Parameters
    ----------
    objective : {"map", "f1", "both"}
        Which objectives to select for; the table always holds both scores.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=bool)
    objectives = OBJECTIVES if objective == "both" else (objective,)
    if any(o not in OBJECTIVES for o in objectives):
        raise ValueError(f"objective must be 'map', 'f1' or 'both', got {objective!r}")
    fold_of = stratified_folds(y, grid.folds, grid.seed)

    scores = {}
    for f in range(grid.folds):
        tr, va = fold_of != f, fold_of == f
        F_tr, F_va = kernel_features(X[tr], y[tr], X[va], kernel, sigma, kernel_tau,
                                     kernel_max_dim)
        cells = evaluate_grid(F_tr, y[tr], F_va, y[va], grid.d_values, grid.k_values, ridge,
                              solver, grid.seed, max_iter, equiprobable)
        for key, val in cells.items():
            scores.setdefault(key, []).append(val)

    n_neg = int((~y).sum())
    table = []
    for (d, K), vals in scores.items():
        if len(vals) != grid.folds:
            continue  # infeasible in at least one fold
        ap, f1 = np.mean(np.asarray(vals), axis=0)
        table.append((d, K, float(ap), float(f1)))
    if not table:
        raise ValueError("no feasible grid cell (need d <= min(D, K))")
    table.sort(key=lambda r: (_order_key(r[1], n_neg), r[0]))

    result = CvResult(table)
    for obj in objectives:
        col = 2 if obj == "map" else 3
        best = max(table, key=lambda r: r[col])  # first maximum in (K, d) order
        result.best[obj] = (best[0], best[1], best[col])
    return result
