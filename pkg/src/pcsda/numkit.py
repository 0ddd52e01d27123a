"""Dense symmetric linear algebra shared by the solvers.

Everything here works on small dense ``numpy`` arrays and wraps LAPACK through
:mod:`scipy.linalg`. Eigenvalues are always returned in descending order and
every eigenvector is sign-normalized so that its largest-magnitude entry is
positive, which makes outputs reproducible across platforms.
"""
from typing import NamedTuple, Union

import numpy as np
from scipy import linalg

from .exceptions import NumericalError

Ridge = Union[float, str]

_SYM_TOL = 1e-10


class EigenPairs(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray


def as_symmetric(A, name="matrix"):
    """Validate that ``A`` is square, finite and symmetric; return ``(A + A.T) / 2``."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"{name} must be square, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} contains non-finite values")
    scale = np.max(np.abs(A)) if A.size else 0.0
    if np.max(np.abs(A - A.T), initial=0.0) > _SYM_TOL * max(scale, np.finfo(float).tiny):
        raise ValueError(f"{name} is not symmetric")
    return 0.5 * (A + A.T)


def resolve_ridge(B, ridge):
    """Turn a ridge spec into a number. ``"auto"`` means ``1e-6 * trace(B) / dim``."""
    if isinstance(ridge, str):
        if ridge != "auto":
            raise ValueError(f"ridge must be a non-negative number or 'auto', got {ridge!r}")
        return 1e-6 * float(np.trace(B)) / B.shape[0]
    ridge = float(ridge)
    if not np.isfinite(ridge) or ridge < 0:
        raise ValueError(f"ridge must be a non-negative number, got {ridge}")
    return ridge


def fix_signs(V):
    """Flip columns so that each one's largest-magnitude entry is positive."""
    idx = np.argmax(np.abs(V), axis=0)
    signs = np.sign(V[idx, np.arange(V.shape[1])])
    signs[signs == 0] = 1.0
    return V * signs


def _descending(values, vectors):
    order = np.argsort(-values, kind="stable")
    return EigenPairs(values[order], fix_signs(vectors[:, order]))


def sym_eig(A):
    """Eigen-decomposition of a real symmetric matrix, eigenvalues descending."""
    A = as_symmetric(A)
    try:
        w, V = linalg.eigh(A)
    except linalg.LinAlgError as exc:
        raise NumericalError(f"symmetric eigensolver did not converge: {exc}") from exc
    return _descending(w, V)


def _smallest_pivot(B):
    _, D, _ = linalg.ldl(B)
    # D is block diagonal with 1x1 or 2x2 blocks; its eigenvalues are the pivots.
    return float(np.min(linalg.eigvalsh(D)))


def cholesky_spd(B, name="matrix"):
    """Lower Cholesky factor of ``B``; raises :class:`NumericalError` with the smallest pivot."""
    try:
        return linalg.cholesky(B, lower=True, check_finite=False)
    except linalg.LinAlgError:
        pivot = _smallest_pivot(B)
        raise NumericalError(
            f"{name} is not positive definite (smallest LDL pivot {pivot:.3e})"
        ) from None


def gen_eig_spd(A, B, ridge: Ridge = 0.0):
    """Solve ``A w = lam (B + ridge I) w`` for symmetric ``A`` and SPD ``B + ridge I``.

    The pencil is reduced to a standard problem through the Cholesky factor
    ``B + ridge I = L L^T``: the eigenvectors ``y`` of ``L^-1 A L^-T`` map back
    to ``w = L^-T y``. The returned vectors are therefore orthonormal in the
    ``B + ridge I`` inner product.

    Parameters
    ----------
    A, B : array of shape (n, n)
    ridge : float or "auto"
        Multiple of the identity added to ``B``. ``"auto"`` uses
        ``1e-6 * trace(B) / n``.

    Returns
    -------
    EigenPairs
        ``values`` descending, ``vectors`` as columns.
    """
    A = as_symmetric(A, "A")
    B = as_symmetric(B, "B")
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch: A {A.shape} vs B {B.shape}")
    eps = resolve_ridge(B, ridge)
    Br = B + eps * np.eye(B.shape[0])
    L = cholesky_spd(Br, "B + ridge*I")
    tmp = linalg.solve_triangular(L, A, lower=True)
    C = linalg.solve_triangular(L, tmp.T, lower=True)
    C = 0.5 * (C + C.T)
    try:
        lam, Y = linalg.eigh(C)
    except linalg.LinAlgError as exc:
        raise NumericalError(f"generalized eigensolver did not converge: {exc}") from exc
    W = linalg.solve_triangular(L, Y, lower=True, trans="T")
    return _descending(lam, W)


def log_det_spd(A, ridge=0.0):
    """``ln det(A + ridge I)`` from the Cholesky pivots."""
    A = as_symmetric(A)
    L = cholesky_spd(A + float(ridge) * np.eye(A.shape[0]))
    return 2.0 * float(np.sum(np.log(np.diag(L))))


def pseudo_inverse_apply(M, T, rcond=1e-12):
    """Minimum-norm least-squares solution ``M^+ T``.

    Singular values below ``rcond * sigma_max`` are treated as zero.
    """
    M = np.asarray(M, dtype=float)
    T = np.asarray(T, dtype=float)
    if not (np.all(np.isfinite(M)) and np.all(np.isfinite(T))):
        raise ValueError("pseudo_inverse_apply requires finite inputs")
    vector = T.ndim == 1
    if vector:
        T = T[:, None]
    U, s, Vt = np.linalg.svd(M, full_matrices=False)
    keep = s > rcond * (s[0] if s.size else 0.0)
    X = Vt[keep].T @ ((U[:, keep].T @ T) / s[keep, None])
    return X[:, 0] if vector else X
