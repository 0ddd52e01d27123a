"""Quick numerical self-checks run by ``pcsda selftest``."""
import numpy as np
from scipy import linalg

from .estimator import PCSDA
from .kernel import fit_kernel_map, map_points
from .metrics import average_precision, f1_score
from .model import PcsdaModel, fit_model
from .inference import log_posterior_ratio
from .scatter import compute_scatters, estimate_covariances
from .subclass import kmeans


def _data(seed, n_pos=30, n_neg=60, D=5):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n_pos + n_neg, D))
    X[n_pos:] += 3.0 * rng.normal(size=(3, D))[rng.integers(3, size=n_neg)]
    y = np.r_[np.ones(n_pos, bool), np.zeros(n_neg, bool)]
    return X, y


def check_csda_reduction():
    X, y = _data(0)
    W = fit_model(X, y, 3, "all", ridge=1e-3).W
    m = X[y].mean(0)
    Sn = (X[~y] - m).T @ (X[~y] - m)
    Sp = (X[y] - m).T @ (X[y] - m)
    _, V = linalg.eigh(Sn, Sp + 1e-3 * np.eye(X.shape[1]))
    angle = np.max(linalg.subspace_angles(W, V[:, ::-1][:, :3]))
    return angle < 1e-6, f"max principal angle {angle:.2e}"


def check_solver_equivalence():
    X, y = _data(1)
    a = kmeans(X[~y], 3, seed=0)
    W1 = fit_model(X, y, 2, assignment=a).W
    W2 = fit_model(X, y, 2, assignment=a, solver="specreg").W
    angle = np.max(linalg.subspace_angles(W1, W2))
    return angle < 1e-4, f"max principal angle {angle:.2e}"


def check_phi_o_identity():
    X, y = _data(2)
    a = kmeans(X[~y], 4, seed=0)
    s = compute_scatters(X, y, a.labels)
    c = estimate_covariances(s)
    ref = s.S_n / s.n_subclasses + s.S_w / s.n_neg
    err = np.linalg.norm(c.phi_n + c.phi_w - ref) / np.linalg.norm(ref)
    return err < 1e-9, f"relative error {err:.2e}"


def check_decision_boundary():
    m = PcsdaModel(np.ones((1, 1)), np.array([[1.0]]), np.array([[4.0]]), np.zeros(1),
                   0.5, 0.5, np.ones(1), 1, 0.0)
    z = np.linspace(1.0, 2.0, 200001)
    g = log_posterior_ratio(m, z[:, None])
    root = z[np.argmin(np.abs(g))]
    return abs(root - 1.3593) < 1e-3, f"boundary at |z| = {root:.5f}"


def check_metrics():
    ok = average_precision([0, 1, 2], [True, False, True]) == 5 / 6
    ok &= average_precision([0, 1, 2, 3], [False, False, False, True]) == 0.25
    ok &= f1_score([1, 1, 1, 0, 0], [1, 1, 0, 1, 0]) == 2 / 3
    return bool(ok), "AP 5/6, AP 1/4, f1 2/3"


def check_kernel_map():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(80, 3))
    km = fit_kernel_map(X, 1.5)
    F = km.train_features
    K = km.kernel(X)
    rec = np.linalg.norm(F @ F.T - K) / np.linalg.norm(K)
    back = np.max(np.abs(map_points(km, X[:5]) - F[:5]))
    return rec <= 1e-8 and back <= 1e-8, f"reconstruction {rec:.1e}, remap {back:.1e}"


def check_estimator():
    X, y = _data(4, n_pos=60, n_neg=120)
    est = PCSDA(n_components=2, n_subclasses=3).fit(X, y)
    ap = average_precision(est.rank(X), y)
    return ap > 0.9, f"training AP {ap:.3f}"


CHECKS = [
    ("CSDA reduction", check_csda_reduction),
    ("solver equivalence", check_solver_equivalence),
    ("phi_O identity", check_phi_o_identity),
    ("decision boundary", check_decision_boundary),
    ("metrics", check_metrics),
    ("kernel map", check_kernel_map),
    ("estimator smoke", check_estimator),
]


def run(out=print):
    """Run every check, report one line each; return True when all pass."""
    all_ok = True
    for name, fn in CHECKS:
        ok, detail = fn()
        all_ok &= bool(ok)
        out(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return all_ok
