"""Sketching algorithms for low-rank approximation and their error-bound
evaluators.

Four closely related algorithms, each compressing the input through one or
two test matrices:

* :func:`range_finder` - column sketch ``X = M H T^{-1}``, ``Y = X^+ M``.
* :func:`transposed_range_finder` - row sketch ``X = S^{-1} F M``,
  ``Y = M X^+`` (approximation is ``Y @ X``).
* :func:`row_column_sketch` - both sketches; the small least-squares
  problem ``Y = argmin ||F X V - F M||`` avoids ever touching M again, so
  with sampling test matrices the whole computation reads only
  ``m*l + k*n`` entries of M.
* the transposed row/column variant, available via ``transposed=True``.

When the test matrices have full rank the output product is independent of
the S and T conditioning policies: T picks the nonsingular post-multiplier
in ``X = M H T^{-1}`` (the R factor of a thin, optionally pivoted, QR
factorization makes X orthonormal) and S picks the factorization used for
the small least-squares solve.

The bound evaluators implement the deterministic posterior bound
(``|||M - XY|||^2 <= |||S2|||^2 + |||S2 C2 C1^+|||^2`` with
``C_i = V_i^T H``), the pre-multiplication bound
``1 + ||X|| ||F|| ||(FX)^+||``, and the closed-form a-priori error factors
for the randomized-input and Gaussian-test models.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .counting import ensure_counter
from .linalg import pinv
from .testmat import SamplingMatrix

__all__ = [
    "LraFactors",
    "SketchConfig",
    "PosteriorBound",
    "AprioriBound",
    "range_finder",
    "transposed_range_finder",
    "row_column_sketch",
    "posterior_error_bound",
    "apriori_bounds",
    "premult_bound",
]

T_POLICIES = ("identity", "qr_r_factor", "qrp_r_factor")
# Cross is flagged degenerate below this relative smallest singular value.
_DEGENERATE_TOL = 1e-10


@dataclass
class SketchConfig:
    """Parameters of a row-and-column sketch: target rank r, column-sketch
    size l (r <= l <= n), row-sketch size k (r <= k <= m), and the S/T
    conditioning policies."""

    r: int
    l: int
    k: int
    t_policy: str = "qr_r_factor"
    s_policy: str = "qr_r_factor"
    seed: int = 0

    def __post_init__(self):
        if not (self.r <= self.l and self.r <= self.k):
            raise ValueError("need r <= l and r <= k")
        for p in (self.t_policy, self.s_policy):
            if p not in T_POLICIES:
                raise ValueError(f"unknown policy {p!r}")


@dataclass
class LraFactors:
    """A low-rank approximation as a factor pair.

    ``orientation='xy'`` means the approximation is ``X @ Y``;
    ``'yx'`` means ``Y @ X`` (used by the transposed range finder).
    ``degenerate`` is set when the sketched cross was numerically
    rank-deficient (the C-A driver restarts on this signal).
    """

    X: np.ndarray
    Y: np.ndarray
    orientation: str = "xy"
    degenerate: bool = False

    def approximation(self):
        if self.orientation == "xy":
            return self.X @ self.Y
        return self.Y @ self.X


def _is_sampling(A):
    return isinstance(A, SamplingMatrix)


def _right_sketch(M, H, counter):
    """``M @ H`` charging entry reads (all of M for a dense H)."""
    if _is_sampling(H):
        return H.select_columns(M, counter)
    H = np.asarray(H, dtype=float)
    counter.add_reads(M.size)
    counter.add_flops(M.size * H.shape[1])
    return M @ H


def _left_sketch(F, M, counter):
    """``F @ M`` where a SamplingMatrix F stands for its transpose
    (row selection)."""
    if _is_sampling(F):
        return F.select_rows(M, counter)
    F = np.asarray(F, dtype=float)
    counter.add_reads(M.size)
    counter.add_flops(M.size * F.shape[0])
    return F @ M


def _apply_t_policy(MH, policy):
    """X = MH T^{-1} for the chosen policy; falls back to pivoted-QR
    truncation when the sketch is rank deficient."""
    m, l = MH.shape
    if policy == "identity":
        R = scipy.linalg.qr(MH, mode="r", pivoting=True)[0]
        diag = np.abs(np.diag(R))
        if diag[0] == 0 or np.any(diag <= 1e-12 * diag[0]):
            warnings.warn("rank-deficient sketch under identity policy; "
                          "falling back to pivoted QR", stacklevel=3)
            policy = "qrp_r_factor"
        else:
            return MH
    if policy == "qr_r_factor":
        Q, R = scipy.linalg.qr(MH, mode="economic")
        diag = np.abs(np.diag(R))
        if diag[0] == 0 or np.any(diag <= 1e-12 * diag[0]):
            policy = "qrp_r_factor"
        else:
            return Q
    if policy == "qrp_r_factor":
        if not np.any(MH):
            return np.zeros((m, 0))
        Q, R, _ = scipy.linalg.qr(MH, mode="economic", pivoting=True)
        diag = np.abs(np.diag(R))
        keep = int(np.sum(diag > 1e-12 * diag[0]))
        return Q[:, :keep]
    raise ValueError(f"unknown policy {policy!r}")


def _orthonormal(X):
    l = X.shape[1]
    if X.shape[0] < l:
        return False
    G = X.T @ X
    return np.allclose(G, np.eye(l), atol=1e-8)


def range_finder(M, H, t_policy="qr_r_factor", counter=None):
    """Column-sketch approximation ``M ~= X @ Y`` (Range Finder).

    Parameters
    ----------
    M : (m, n) ndarray
    H : (n, l) ndarray or SamplingMatrix of full rank l
    t_policy : 'identity', 'qr_r_factor', or 'qrp_r_factor'
        T in ``X = M H T^{-1}``; the QR policies make X orthonormal.

    Returns
    -------
    LraFactors with X (m, l) and ``Y = X^+ M`` (l, n).  The product equals
    ``MH (MH)^+ M`` whenever MH has full rank, for every policy.
    """
    counter = ensure_counter(counter)
    M = np.asarray(M, dtype=float)
    MH = _right_sketch(M, H, counter)
    X = _apply_t_policy(MH, t_policy)
    counter.add_reads(M.size)
    counter.add_flops(M.size * X.shape[1])
    Y = X.T @ M if _orthonormal(X) else pinv(X) @ M
    return LraFactors(X, Y, "xy")


def transposed_range_finder(M, F, s_policy="qr_r_factor", counter=None):
    """Row-sketch approximation ``M ~= Y @ X`` with ``X = S^{-1} F M`` and
    ``Y = M X^+``.  Mirror image of :func:`range_finder`; F is k x m (a
    SamplingMatrix stands for its transpose)."""
    counter = ensure_counter(counter)
    M = np.asarray(M, dtype=float)
    FM = _left_sketch(F, M, counter)
    Xt = _apply_t_policy(FM.T, s_policy)   # X = Xt.T has orthonormal rows
    X = Xt.T
    counter.add_reads(M.size)
    counter.add_flops(M.size * X.shape[0])
    Y = M @ Xt if _orthonormal(Xt) else M @ pinv(X)
    return LraFactors(X, Y, "yx")


def _solve_least_squares(A, B, policy, counter):
    """argmin_V ||A V - B|| by the method the policy names: SVD
    pseudoinverse ('identity'), thin-QR solve ('qr_r_factor'), or pivoted
    QR with rank truncation ('qrp_r_factor').  All agree for a full-rank A;
    the deficient cases fall back to the truncating pseudoinverse."""
    k, l = A.shape
    counter.add_flops(k * l * min(k, l) + l * A.shape[0] * B.shape[1])
    if policy != "identity" and np.any(A):
        pivot = policy == "qrp_r_factor"
        fac = scipy.linalg.qr(A, mode="economic", pivoting=pivot)
        Q, R = fac[0], fac[1]
        diag = np.abs(np.diag(R))
        keep = int(np.sum(diag > 1e-12 * diag[0])) if diag[0] > 0 else 0
        if keep == l:
            return scipy.linalg.solve_triangular(R, Q.T @ B)
        if pivot and keep:
            V = np.zeros((l, B.shape[1]))
            V[fac[2][:keep]] = scipy.linalg.solve_triangular(
                R[:keep, :keep], Q[:, :keep].T @ B)
            return V
        # plain QR met rank deficiency: use the truncating pseudoinverse
    return pinv(A) @ B


def row_column_sketch(M, F, H, s_policy="qr_r_factor",
                      t_policy="qr_r_factor", transposed=False, counter=None):
    """Row-and-column sketch ``M ~= X @ Y``.

    Computes ``X = M H T^{-1}`` and the least-squares right factor
    ``Y = argmin_V |||F X V - F M|||``, so that with full-rank generators
    the product equals ``MH (FMH)^+ FM`` independently of the policies.
    The T policy conditions X (see :func:`range_finder`); the S policy
    selects the factorization used for the row-sketched least-squares
    solve (its weighted variant ``(S^{-1}FX)^+ S^{-1}FM`` would change the
    k > l solution, contradicting the invariance the algorithms are built
    on, so the policies here are solution methods for the same problem).
    With sampling F and H only ``m*l + k*n`` entries of M are read and the
    arithmetic cost is ``O(k^2 n + l^2 m)``, sublinear in m*n for small k
    and l.

    ``transposed=True`` applies the algorithm to ``M.T`` (column sketching
    first), transposing the result back.

    A numerically rank-deficient cross (smallest singular value of the
    k x l cross below 1e-10 of the largest) sets ``degenerate`` on the
    result; the returned approximation is still the best the sketch offers
    (zero when the cross is zero).
    """
    if transposed:
        Ft = F if _is_sampling(F) else np.asarray(F, dtype=float).T
        Ht = H if _is_sampling(H) else np.asarray(H, dtype=float).T
        out = row_column_sketch(np.asarray(M, dtype=float).T, F=Ht, H=Ft,
                                s_policy=t_policy, t_policy=s_policy,
                                transposed=False, counter=counter)
        return LraFactors(out.Y.T, out.X.T, "xy", degenerate=out.degenerate)

    counter = ensure_counter(counter)
    M = np.asarray(M, dtype=float)
    MH = _right_sketch(M, H, counter)
    FM = _left_sketch(F, M, counter)
    # Cross of the two sketches; this is the CUR generator when F and H
    # are sampling matrices.
    if _is_sampling(H):
        G = FM[:, H.indices]
    elif _is_sampling(F):
        G = MH[F.indices, :]
    else:
        G = FM @ np.asarray(H, dtype=float)
        counter.add_flops(FM.size * G.shape[1])
    sv = np.linalg.svd(G, compute_uv=False) if G.size else np.zeros(1)
    degenerate = sv[0] == 0 or sv[min(G.shape) - 1] < _DEGENERATE_TOL * sv[0]

    X = _apply_t_policy(MH, t_policy)
    k, l = FM.shape[0], X.shape[1]
    if _is_sampling(F):
        FX = X[F.indices, :]
    else:
        FX = np.asarray(F, dtype=float) @ X
        counter.add_flops(k * X.shape[0] * l)
    Y = _solve_least_squares(FX, FM, s_policy, counter)
    return LraFactors(X, Y, "xy", degenerate=bool(degenerate))


@dataclass
class PosteriorBound:
    """Posterior (deterministic) error bound for a given M, H, and r.

    ``bound_spectral`` / ``bound_frobenius`` are the right-hand sides of
    ``|||M - XY|||^2 <= |||S2|||^2 + |||S2 C2 C1^+|||^2`` in the two norms;
    ``multiplier_*`` are the corresponding ``sqrt(1 + |||C1^+|||^2)``
    factors relating the error to the optimal rank-r error.  ``h_scale``
    reports the rescaling applied to enforce ``||H||_2 <= 1`` (which leaves
    the sketch output unchanged).
    """

    bound_spectral: float
    bound_frobenius: float
    c1_pinv_norm: float
    multiplier_spectral: float
    multiplier_frobenius: float
    h_scale: float


def posterior_error_bound(M, H, r):
    """Evaluate the deterministic posterior bound (a full-SVD diagnostic
    oracle; superlinear cost, not part of the sublinear pipeline).

    Requires the top-r right singular space of M to be visible through H
    (``rank(V1^T H) = r``); H is rescaled to unit spectral norm first.
    """
    M = np.asarray(M, dtype=float)
    if _is_sampling(H):
        H = H.toarray()
    H = np.asarray(H, dtype=float)
    s_h = np.linalg.norm(H, 2)
    scale = max(1.0, s_h)
    Hs = H / scale
    U, s, Vt = np.linalg.svd(M, full_matrices=True)
    if r < 1 or r > min(M.shape):
        raise ValueError("r outside [1, min(m, n)]")
    C1 = Vt[:r] @ Hs
    C2 = Vt[r:] @ Hs
    c1_sv = np.linalg.svd(C1, compute_uv=False)
    if c1_sv.size < r or c1_sv[-1] <= 1e-12 * max(1.0, c1_sv[0]):
        raise ValueError("test matrix lies in or near the null space of the "
                         "top singular space (rank(C1) < r)")
    C1_pinv = pinv(C1)
    tail = s[r:]                      # min(m, n) - r values
    T = (tail[:, None] * C2[: tail.size]) @ C1_pinv
    sigma2_spec = tail[0] if tail.size else 0.0
    sigma2_fro2 = float(np.sum(tail**2))
    t_spec = np.linalg.norm(T, 2) if T.size else 0.0
    t_fro2 = float(np.sum(T**2))
    c1p_spec = 1.0 / c1_sv[-1]
    c1p_fro = float(np.sqrt(np.sum(1.0 / c1_sv**2)))
    return PosteriorBound(
        bound_spectral=float(np.sqrt(sigma2_spec**2 + t_spec**2)),
        bound_frobenius=float(np.sqrt(sigma2_fro2 + t_fro2)),
        c1_pinv_norm=float(c1p_spec),
        multiplier_spectral=float(np.sqrt(1.0 + c1p_spec**2)),
        multiplier_frobenius=float(np.sqrt(1.0 + c1p_fro**2)),
        h_scale=float(scale),
    )


@dataclass
class AprioriBound:
    """Closed-form error-ratio factor and failure probability (NaN for
    expectation-type bounds, which have no failure probability)."""

    factor: float
    failure_prob: float


def apriori_bounds(n, l, r, kappa_h=1.0, model="random_space_i", k=None):
    """A-priori error factors for the randomized models.

    Models
    ------
    ``random_space_i``      sqrt(1 + 16 n / l); orthonormal H, input with a
                            random top right singular space.
    ``random_space_ii``     sqrt(1 + 16 kappa(H)^2 n / l); any full-rank H.
    ``factor_gaussian_i``   sqrt(1 + 100 n / l); orthonormal H, perturbed
                            right factor-Gaussian input.
    ``factor_gaussian_ii``  sqrt(1 + 100 kappa(H)^2 n / l).
    ``gaussian_hmt``        sqrt(1 + r / (l - r - 1)); Gaussian H,
                            Frobenius-expectation bound (Halko, Martinsson
                            & Tropp 2011).
    ``tyuc``                sqrt(k l / ((k - l) (l - r))); Gaussian F and H,
                            Frobenius-expectation bound (Tropp, Yurtsever,
                            Udell & Cevher 2017; requires ``k``).

    The first four return the failure-probability bound of the matching
    tail estimate; the expectation bounds return NaN there.
    """
    if model in ("random_space_i", "random_space_ii",
                 "factor_gaussian_i", "factor_gaussian_ii"):
        if not n > 36 * r:
            raise ValueError(f"precondition violated: n > 36 r (n={n}, r={r})")
        if not l > 22 * (r - 1):
            raise ValueError(f"precondition violated: l > 22 (r - 1) "
                             f"(l={l}, r={r})")
        if not r <= l < n:
            raise ValueError(f"precondition violated: r <= l < n")
        kappa2 = kappa_h**2 if model.endswith("_ii") else 1.0
        fail = np.exp(-n / 72.0) + np.exp(-(l - r) / 20.0)
        if model.startswith("random_space"):
            factor = np.sqrt(1.0 + 16.0 * kappa2 * n / l)
        else:
            factor = np.sqrt(1.0 + 100.0 * kappa2 * n / l)
            fail += np.exp(-(n - r) / 20.0)
        return AprioriBound(float(factor), float(fail))
    if model == "gaussian_hmt":
        if not 2 <= r <= l - 2:
            raise ValueError("precondition violated: 2 <= r <= l - 2")
        return AprioriBound(float(np.sqrt(1.0 + r / (l - r - 1.0))), float("nan"))
    if model == "tyuc":
        if k is None:
            raise ValueError("model 'tyuc' requires k")
        if not k > l > r:
            raise ValueError("precondition violated: k > l > r")
        return AprioriBound(
            float(np.sqrt(k * l / ((k - l) * (l - r)))), float("nan"))
    raise ValueError(f"unknown model {model!r}")


def premult_bound(X, F):
    """Pre-multiplication error factor ``1 + ||X||_2 ||F||_2 ||(FX)^+||_2``
    (the norm bound on ``W = I - X (FX)^+ F``).

    For F chosen by maxvol row selection on an orthonormal X the last factor
    satisfies ``||(FX)^+||_2 <= ||X^+||_2 sqrt((m - k) k h^2 + 1)``.
    """
    X = np.asarray(X, dtype=float)
    if _is_sampling(F):
        FX = X[F.indices, :]
        f_norm = 1.0
    else:
        F = np.asarray(F, dtype=float)
        FX = F @ X
        f_norm = np.linalg.norm(F, 2)
    sv = np.linalg.svd(FX, compute_uv=False)
    if sv.size < X.shape[1] or sv[-1] <= 1e-14 * max(1.0, sv[0]):
        raise ValueError("rank(FX) < rank(X): pre-multiplier loses the range")
    return float(1.0 + np.linalg.norm(X, 2) * f_norm / sv[-1])
