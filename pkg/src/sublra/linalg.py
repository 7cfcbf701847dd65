"""Dense linear-algebra kernels shared by every other module.

All matrices are 2-D ``numpy.float64`` arrays in row-major order.  The
routines here are thin, contract-enforcing wrappers over LAPACK (via
numpy/scipy): compact SVD, thin and pivoted QR, Moore-Penrose pseudoinverse,
rank truncation, the three matrix norms used throughout (spectral,
Frobenius, Chebyshev), numerical epsilon-rank, and the relative-error
statistic used by the benchmark harness.

Everything is a pure function of its inputs; nothing mutates its arguments.
"""

import numpy as np
import scipy.linalg

__all__ = [
    "QrFactors",
    "SvdFactors",
    "factorize_qr",
    "svd",
    "pinv",
    "truncate_rank",
    "norm",
    "numerical_rank",
    "relative_error",
]

# Pivoted QR truncates trailing columns once |R_ii| falls below this
# fraction of |R_00|; protects downstream triangular solves.
_QR_RANK_TOL = 1e-12
# pinv treats singular values below this fraction of sigma_1 as zero.
_PINV_RCOND = 1e-12


class QrFactors:
    """Thin QR factorization, optionally column-pivoted.

    Attributes
    ----------
    Q : (m, k) ndarray with orthonormal columns
    R : (k, k) upper-triangular ndarray
    perm : (k,) int ndarray or None
        Column permutation such that ``A[:, perm] ~= Q @ R``.  None for the
        unpivoted factorization, where ``A ~= Q @ R`` directly.
    """

    def __init__(self, Q, R, perm=None):
        self.Q = Q
        self.R = R
        self.perm = perm

    @property
    def rank(self):
        return self.R.shape[0]


class SvdFactors:
    """Compact SVD ``A = U @ diag(sigma) @ V.T`` with rank-many columns."""

    def __init__(self, U, sigma, V):
        self.U = U
        self.sigma = sigma
        self.V = V

    @property
    def rank(self):
        return self.sigma.size

    def compose(self):
        return (self.U * self.sigma) @ self.V.T


def _as_matrix(A):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValueError("expected a 2-D array")
    return A


def factorize_qr(A, pivoted=False):
    """Thin QR factorization of ``A`` (m x n, m >= rank).

    The pivoted variant orders the diagonal of R by non-increasing magnitude
    and truncates at the first diagonal entry below 1e-12 * |R_00|, so it
    tolerates rank deficiency; the plain variant expects full column rank.

    Returns
    -------
    QrFactors
    """
    A = _as_matrix(A)
    if not np.any(A):
        raise ValueError("rank zero: cannot factorize the zero matrix")
    if pivoted:
        Q, R, perm = scipy.linalg.qr(A, mode="economic", pivoting=True)
        diag = np.abs(np.diag(R))
        keep = int(np.sum(diag > _QR_RANK_TOL * diag[0]))
        return QrFactors(Q[:, :keep], R[:keep, :keep], perm[:keep])
    Q, R = scipy.linalg.qr(A, mode="economic")
    return QrFactors(Q, R, None)


def svd(A):
    """Compact SVD of ``A``: exact zero singular values are dropped.

    The zero matrix yields rank-0 factors (empty sigma).
    """
    A = _as_matrix(A)
    if not np.any(A):
        m, n = A.shape
        return SvdFactors(np.zeros((m, 0)), np.zeros(0), np.zeros((n, 0)))
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    rank = int(np.sum(s > 0.0))
    return SvdFactors(U[:, :rank], s[:rank], Vt[:rank].T)


def singular_values(A):
    """All min(m, n) singular values of ``A``, non-increasing."""
    return np.linalg.svd(np.asarray(A, dtype=float), compute_uv=False)


def pinv(A, rcond=_PINV_RCOND):
    """Moore-Penrose pseudoinverse; sigma below ``rcond * sigma_1`` is zero."""
    A = _as_matrix(A)
    if not np.any(A):
        return A.T.copy()
    return np.linalg.pinv(A, rcond=rcond)


def truncate_rank(A, r):
    """Best rank-``r`` approximation of ``A`` (truncated SVD)."""
    A = _as_matrix(A)
    if r < 0 or r > min(A.shape):
        raise ValueError(f"rank {r} outside [0, {min(A.shape)}]")
    if r == 0:
        return np.zeros_like(A)
    if r == min(A.shape):
        return A.copy()
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    return (U[:, :r] * s[:r]) @ Vt[:r]


def norm(A, kind="spectral"):
    """Matrix norm: ``spectral`` (sigma_1), ``frobenius``, or ``chebyshev``
    (largest entry magnitude).  For every matrix,
    chebyshev <= spectral <= frobenius <= sqrt(m*n) * chebyshev."""
    A = np.asarray(A, dtype=float)
    if kind == "spectral":
        if not np.any(A):
            return 0.0
        return float(np.linalg.norm(A, 2))
    if kind == "frobenius":
        return float(np.linalg.norm(A, "fro"))
    if kind == "chebyshev":
        return float(np.max(np.abs(A))) if A.size else 0.0
    raise ValueError(f"unknown norm kind {kind!r}")


def numerical_rank(A, eps, relative=False, sigmas=None):
    """Number of singular values exceeding ``eps``.

    The threshold is absolute by default, matching the experimental
    convention of comparing against eps = 1e-6 on inputs of unit-order norm;
    pass ``relative=True`` to threshold against ``eps * sigma_1`` instead.
    Precomputed singular values can be supplied to avoid the SVD.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    s = singular_values(A) if sigmas is None else np.asarray(sigmas)
    if s.size == 0 or s[0] == 0.0:
        return 0
    cutoff = eps * s[0] if relative else eps
    return int(np.sum(s > cutoff))


def relative_error(M, Mtilde, r, sigmas=None):
    """Error of an approximation relative to the optimal rank-``r`` error,
    ``||M - Mtilde||_2 / ||M - M_r||_2`` (the denominator is sigma_{r+1}).

    Raises if sigma_{r+1}(M) vanishes (the optimum is exact); use an
    absolute residual in that case.
    """
    M = _as_matrix(M)
    Mtilde = np.asarray(Mtilde, dtype=float)
    if M.shape != Mtilde.shape:
        raise ValueError("shape mismatch")
    s = singular_values(M) if sigmas is None else np.asarray(sigmas)
    if r < 0 or r >= s.size:
        raise ValueError(f"rank {r} outside [0, {s.size - 1}]")
    opt = float(s[r])
    if opt == 0.0:
        raise ValueError("optimal error zero; use absolute residual")
    return norm(M - Mtilde, "spectral") / opt
