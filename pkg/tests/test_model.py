import numpy as np
import pytest
from scipy import linalg

from pcsda.model import PcsdaModel, fit_model, project
from pcsda.subclass import SubclassAssignment

from synth import blobs, generative


def direct_csda(X, y, eps):
    m = X[y].mean(0)
    Sn = (X[~y] - m).T @ (X[~y] - m)
    Sp = (X[y] - m).T @ (X[y] - m)
    lam, V = linalg.eigh(Sn, Sp + eps * np.eye(X.shape[1]))
    return lam[::-1], V[:, ::-1]


def test_two_clusters_on_x_axis():
    rng = np.random.default_rng(0)
    P = 0.1 * rng.normal(size=(30, 2))
    N = np.r_[rng.normal(size=(30, 2)) * [0.3, 1.0] + [8, 0], rng.normal(size=(30, 2)) * [0.3, 1.0] + [-8, 0]]
    X = np.r_[P, N]
    y = np.r_[np.ones(30, bool), np.zeros(60, bool)]
    res = fit_model(X, y, 1, 2, full=True)
    w = res.model.W[:, 0]
    assert abs(w[0]) / np.linalg.norm(w) > 0.99
    s = res.scatters
    lam, V = linalg.eigh(s.S_n, s.S_I + res.model.ridge * np.eye(2))
    v = V[:, -1]
    assert abs(v @ w) / (np.linalg.norm(v) * np.linalg.norm(w)) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("seed", range(3))
def test_csda_reduction(seed):
    X, y = blobs(seed, 20, 40, D=5)
    eps = 1e-2
    model = fit_model(X, y, 4, "all", ridge=eps)
    lam, V = direct_csda(X, y, eps)
    assert np.max(linalg.subspace_angles(model.W, V[:, :4])) < 1e-6
    np.testing.assert_allclose(model.eigenvalues, lam[:4], rtol=1e-8)
    assert model.n_subclasses == 40


def test_k_equal_nneg_skips_clustering():
    X, y = blobs(1, 10, 15)
    res = fit_model(X, y, 2, 15, full=True)
    np.testing.assert_array_equal(res.assignment.labels, np.arange(15))


def test_d_equals_k_equals_one():
    X, y = blobs(2)
    m = fit_model(X, y, 1, 1)
    assert m.W.shape == (5, 1)
    assert m.phi_p.shape == m.phi_o.shape == (1, 1)
    assert m.phi_p[0, 0] >= 0 and m.phi_o[0, 0] >= 0


def test_d_out_of_range():
    X, y = blobs(3)
    with pytest.raises(ValueError, match="n_components"):
        fit_model(X, y, 3, 2)
    with pytest.raises(ValueError):
        fit_model(X, y, 0, 2)
    with pytest.raises(ValueError, match="solver"):
        fit_model(X, y, 1, 1, solver="magic")


def test_k_clamped_to_distinct_negatives():
    X = np.r_[np.random.default_rng(0).normal(size=(5, 2)), np.tile([[3.0, 3.0], [-3.0, 3.0]], (4, 1))]
    y = np.r_[np.ones(5, bool), np.zeros(8, bool)]
    with pytest.warns(UserWarning, match="distinct"):
        m = fit_model(X, y, 1, 5)
    assert m.n_subclasses == 2


def test_priors_and_invariants():
    X, y = blobs(4, 25, 75, D=6)
    m = fit_model(X, y, 3, 4)
    assert m.prior_p == 0.25 and m.prior_n == 0.75
    assert m.prior_p + m.prior_n == 1.0
    assert np.all(np.diff(m.eigenvalues) <= 0)
    assert m.d <= min(6, 4)
    assert np.linalg.eigvalsh(m.phi_p).min() >= 0
    assert np.linalg.eigvalsh(m.phi_o).min() >= 0


def test_projected_covariances_explicit():
    X, y = blobs(5, 30, 60)
    res = fit_model(X, y, 2, 3, full=True)
    W = res.model.W
    np.testing.assert_allclose(res.model.phi_p, W.T @ res.covariances.phi_p @ W)
    np.testing.assert_allclose(res.model.phi_o, W.T @ res.covariances.phi_o @ W)


def test_ridge_only_affects_solver():
    X, y = blobs(6)
    a = SubclassAssignment.from_labels(X[~y], np.arange(60) % 3)
    r1 = fit_model(X, y, 2, assignment=a, ridge=0.0, full=True)
    r2 = fit_model(X, y, 2, assignment=a, ridge=10.0, full=True)
    np.testing.assert_array_equal(r1.covariances.phi_o, r2.covariances.phi_o)
    assert r2.model.ridge == 10.0


@pytest.mark.parametrize("c", [1e-3, 0.5, 7.0])
def test_scale_equivariance(c):
    X, y = blobs(7, 30, 60)
    a = SubclassAssignment.from_labels(X[~y], np.arange(60) % 4)
    W1 = fit_model(X, y, 3, assignment=a, ridge=0.0).W
    W2 = fit_model(c * X, y, 3, assignment=SubclassAssignment.from_labels(c * X[~y], a.labels), ridge=0.0).W
    assert np.max(linalg.subspace_angles(W1, W2)) < 1e-6


def test_truncate_matches_refit():
    X, y = blobs(8, 30, 60, D=6)
    a = SubclassAssignment.from_labels(X[~y], np.arange(60) % 5)
    full = fit_model(X, y, 5, assignment=a)
    small = fit_model(X, y, 2, assignment=a)
    t = full.truncate(2)
    np.testing.assert_allclose(t.W, small.W)
    np.testing.assert_allclose(t.phi_p, small.phi_p)
    np.testing.assert_allclose(t.phi_o, small.phi_o)
    with pytest.raises(ValueError):
        full.truncate(6)


def test_project_mean_to_zero():
    X, y = blobs(9)
    m = fit_model(X, y, 2, 3)
    np.testing.assert_array_equal(project(m, m.mean), np.zeros((1, 2)))


def test_project_coordinate_pick():
    m = PcsdaModel(np.array([[1.0], [0.0]]), np.eye(1), np.eye(1), np.array([1.0, 1.0]),
                   0.5, 0.5, np.ones(1), 1, 0.0)
    assert project(m, np.array([4.0, 8.0]))[0, 0] == 3.0


def test_project_centering_oracle():
    X, y = blobs(10, 40, 80)
    m = fit_model(X, y, 3, 3)
    Z = project(m, X)
    np.testing.assert_allclose(Z[y].mean(0), 0, atol=1e-10)
    np.testing.assert_allclose(Z, X @ m.W - m.mu, atol=1e-10)


def test_project_dimension_mismatch():
    X, y = blobs(11)
    m = fit_model(X, y, 1, 1)
    with pytest.raises(ValueError):
        project(m, np.zeros((2, 4)))


@pytest.mark.parametrize("seed", range(3))
def test_generative_recovery_improves_with_n(seed):
    D = 4
    rng = np.random.default_rng(100 + seed)
    A = rng.normal(size=(D, D))
    phi_p = A @ A.T / D + 0.5 * np.eye(D)
    phi_n = 4 * np.eye(D)
    phi_w = np.diag([0.5, 1.0, 1.5, 2.0])
    errs = []
    for n_pos, K, M in ((250, 25, 10), (10000, 1000, 10)):
        X, y, labels, _ = generative(seed, n_pos, K, M, D, phi_p, phi_n, phi_w)
        res = fit_model(X, y, 1, assignment=SubclassAssignment.from_labels(X[~y], labels), full=True)
        c = res.covariances
        errs.append([np.linalg.norm(est - ref) / np.linalg.norm(ref)
                     for est, ref in ((c.phi_p, phi_p), (c.phi_w, phi_w), (c.phi_o, phi_n + phi_w))])
    small, large = np.array(errs)
    assert np.all(large < small)
    assert np.all(large < 0.1)
