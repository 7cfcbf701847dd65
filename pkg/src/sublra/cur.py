"""CUR decompositions, matrix volumes, and maxvol row selection.

A CUR approximation keeps actual columns C = M[:, J] and rows R = M[I, :]
of the input and joins them through a nucleus U computed from the generator
G = M[I, J]; the canonical nucleus is the pseudoinverse of G.  Quality is
governed by the volume (product of singular values) of the generator: a
k x l generator whose r-projective volume is locally maximal up to a factor
h satisfies the Chebyshev-norm bound

    ||M - CUR||_C <= h * f(k, l, r) * sigma_{r+1}(M),
    f(k, l, r) = sqrt((k+1)(l+1) / ((k-r+1)(l-r+1))).

Row subsets of (weakly) h-maximal volume are computed by the classical
maxvol sweep: starting from the rows touched by Gaussian elimination with
partial pivoting, swap a row in whenever it would grow |det| by more than
h, i.e. while ``max |(A A_I^{-1})_{ij}| > h``.  For an orthonormal m x l
matrix the selected rows additionally satisfy
``||(A_I)^{-1}||_2 <= sqrt((m - k) k h^2 + 1)``.

All volumes are computed and compared in the log domain.
"""

import math
import warnings
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
import scipy.linalg

from .counting import ensure_counter
from .linalg import pinv

__all__ = [
    "VolumeReport",
    "CurFactors",
    "MaxvolResult",
    "volume",
    "log_volume",
    "cheb_bound_f",
    "build_cur",
    "maxvol_rows",
    "select_maxvol_rows",
    "brute_force_maxvol",
    "brute_force_maxvol_cross",
    "maxvol_pinv_bound",
]


@dataclass
class VolumeReport:
    """Volume v2 (product of all singular values) and r-projective volume
    v2r (product of the top r), with log-domain accumulators."""

    v2: float
    v2r: float
    log_v2: float
    log_v2r: float
    r: int


def log_volume(M, r=None):
    """log of the (r-projective) volume of M; -inf for singular matrices."""
    s = np.linalg.svd(np.asarray(M, dtype=float), compute_uv=False)
    if r is not None:
        s = s[:r]
    if np.any(s == 0.0):
        return -np.inf
    return float(np.sum(np.log(s)))


def volume(M, r=None):
    """Volume and r-projective volume of M (log-domain products of singular
    values).  With r omitted, v2r is reported at r = min(m, n) = v2."""
    M = np.asarray(M, dtype=float)
    s = np.linalg.svd(M, compute_uv=False)
    rr = min(M.shape) if r is None else int(r)
    if not 1 <= rr <= min(M.shape):
        raise ValueError("r outside [1, min(m, n)]")
    with np.errstate(divide="ignore"):
        logs = np.log(s)
    lv2 = float(np.sum(logs))
    lv2r = float(np.sum(logs[:rr]))
    return VolumeReport(v2=float(np.exp(lv2)), v2r=float(np.exp(lv2r)),
                        log_v2=lv2, log_v2r=lv2r, r=rr)


def cheb_bound_f(k, l, r):
    """Chebyshev-bound factor f(k, l, r) =
    sqrt((k+1)(l+1) / ((k-r+1)(l-r+1)))."""
    if not 1 <= r <= min(k, l):
        raise ValueError("need 1 <= r <= min(k, l)")
    return math.sqrt((k + 1) * (l + 1) / ((k - r + 1) * (l - r + 1)))


def maxvol_pinv_bound(m, k, h):
    """Spectral bound sqrt((m - k) k h^2 + 1) on ||(FX)^+|| / ||X^+|| for a
    maxvol-selected row sampler F on an m-row matrix X."""
    return math.sqrt((m - k) * k * h * h + 1.0)


@dataclass
class CurFactors:
    """CUR factors: C = M[:, J] (m x l), R = M[I, :] (k x n), and the
    nucleus U (l x k) from the generator G = M[I, J] under the chosen
    policy ('canonical' U = G^+, 'rank_r_truncated' U = (G_r)^+, or
    'tau_threshold' U = G(tau)^+ with singular values below tau zeroed)."""

    row_set: np.ndarray
    col_set: np.ndarray
    C: np.ndarray
    U: np.ndarray
    R: np.ndarray
    nucleus_policy: str = "canonical"

    def approximation(self):
        return self.C @ self.U @ self.R


def _nucleus(G, policy, r=None, tau=None):
    if policy == "canonical":
        return pinv(G)
    U, s, Vt = np.linalg.svd(G, full_matrices=False)
    if policy == "rank_r_truncated":
        if r is None or not 0 <= r <= s.size:
            raise ValueError("rank_r_truncated nucleus needs 0 <= r <= min(k, l)")
        keep = s[:r] > 0
        inv = np.zeros_like(s)
        inv[:r][keep] = 1.0 / s[:r][keep]
    elif policy == "tau_threshold":
        if tau is None or tau <= 0:
            raise ValueError("tau_threshold nucleus needs tau > 0")
        inv = np.where(s >= tau, np.divide(1.0, s, where=s > 0), 0.0)
    else:
        raise ValueError(f"unknown nucleus policy {policy!r}")
    return (Vt.T * inv) @ U.T


def build_cur(M, row_set, col_set, nucleus_policy="canonical", r=None,
              tau=None, counter=None):
    """CUR factors of M on the given row and column index sets.

    Reads only the selected rows and columns of M (charged to the counter).
    """
    counter = ensure_counter(counter)
    M = np.asarray(M, dtype=float)
    I = np.asarray(row_set, dtype=int)
    J = np.asarray(col_set, dtype=int)
    if I.size == 0 or J.size == 0:
        raise ValueError("index sets must be nonempty")
    if I.min() < 0 or I.max() >= M.shape[0] or J.min() < 0 or J.max() >= M.shape[1]:
        raise ValueError("index out of bounds")
    C = M[:, J].copy()
    R = M[I, :].copy()
    counter.add_reads(C.size + R.size)
    G = R[:, J]
    U = _nucleus(G, nucleus_policy, r=r, tau=tau)
    return CurFactors(I.copy(), J.copy(), C, U, R, nucleus_policy)


@dataclass
class MaxvolResult:
    """Row subset of weakly h-maximal volume plus sweep diagnostics.
    ``sweeps`` counts the swaps performed; the final verification pass that
    certifies ``max |B_ij| <= h`` is not a sweep, so an already-maximal
    initialization reports 0."""

    indices: np.ndarray
    sweeps: int = 0
    converged: bool = True
    log_volume: float = field(default=0.0)


def _partial_pivot_rows(A, counter):
    """Rows touched as pivots by Gaussian elimination with partial pivoting
    (the classical sublinear-cost maxvol initialization)."""
    m, k = A.shape
    B = np.array(A, dtype=float)
    order = np.arange(m)
    for col in range(k):
        p = col + int(np.argmax(np.abs(B[col:, col])))
        if B[p, col] == 0.0:
            raise np.linalg.LinAlgError("degenerate column set")
        if p != col:
            B[[col, p]] = B[[p, col]]
            order[[col, p]] = order[[p, col]]
        below = B[col + 1:, col] / B[col, col]
        B[col + 1:, col:] -= np.outer(below, B[col, col:])
    counter.add_flops(m * k * k)
    return order[:k]


def maxvol_rows(A, h=1.05, max_sweeps=128, warm_start=None, counter=None):
    """Select k rows of the m x k matrix A whose square submatrix has weakly
    h-maximal volume: no single-row swap grows |det| by more than h.

    Initializes with partial-pivot elimination (or the caller's warm-start
    set when it is nonsingular), then sweeps: compute ``B = A A_I^{-1}``
    (O(m k^2) per sweep) and swap in the entry of largest magnitude while it
    exceeds h, largest first, ties broken by lowest row index.

    Returns
    -------
    MaxvolResult with the selected indices, sweep count, and a convergence
    flag (a warning is issued when the sweep cap is hit).
    """
    counter = ensure_counter(counter)
    A = np.asarray(A, dtype=float)
    m, k = A.shape
    if m < k:
        raise ValueError("need at least as many rows as columns")
    if h <= 1.0:
        raise ValueError("need h > 1")
    idx = None
    if warm_start is not None:
        cand = np.asarray(warm_start, dtype=int)
        if cand.size == k:
            sv = np.linalg.svd(A[cand], compute_uv=False)
            # a nearly singular warm start is useless: fall back to the
            # partial-pivot initialization instead
            if sv[-1] > 1e-10 * max(1.0, sv[0]):
                idx = cand.copy()
    if idx is None:
        idx = _partial_pivot_rows(A, counter)
        sv = np.linalg.svd(A[idx], compute_uv=False)
        if sv[-1] <= 1e-14 * max(1.0, sv[0]):
            raise np.linalg.LinAlgError("degenerate column set")
    sweeps = 0
    converged = False
    while True:
        B = scipy.linalg.solve(A[idx].T, A.T).T      # A @ A_I^{-1}
        counter.add_flops(m * k * k + k**3)
        i, j = np.unravel_index(int(np.argmax(np.abs(B))), B.shape)
        if abs(B[i, j]) <= h:
            converged = True
            break
        if sweeps >= max_sweeps:
            break
        idx[j] = i
        sweeps += 1
    if not converged:
        warnings.warn(f"maxvol did not converge in {max_sweeps} sweeps",
                      stacklevel=2)
    return MaxvolResult(indices=idx, sweeps=sweeps, converged=converged,
                        log_volume=log_volume(A[idx]))


def select_maxvol_rows(A, count, h=1.05, max_sweeps=128, warm_start=None,
                       counter=None):
    """Select ``count >= k`` rows of an m x k matrix: square maxvol for the
    first k, then greedy appends maximizing the volume gain
    ``det(G + a a^T)/det(G) = 1 + a^T G^{-1} a`` of the selected Gram
    matrix.  The greedy extension realizes the rectangular (count > k)
    selection the square sweep cannot provide."""
    counter = ensure_counter(counter)
    A = np.asarray(A, dtype=float)
    m, k = A.shape
    if not k <= count <= m:
        raise ValueError("need k <= count <= m")
    warm_square = None
    if warm_start is not None and len(warm_start) >= k:
        warm_square = np.asarray(warm_start, dtype=int)[:k]
    res = maxvol_rows(A, h=h, max_sweeps=max_sweeps, warm_start=warm_square,
                      counter=counter)
    idx = list(res.indices)
    if count > k:
        selected = np.zeros(m, dtype=bool)
        selected[idx] = True
        G = A[idx].T @ A[idx]
        for _ in range(count - k):
            # in near-singular directions the gain signal is arbitrary;
            # any padded pick is acceptable there
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
                try:
                    P = scipy.linalg.solve(G, A.T, assume_a="pos").T
                except np.linalg.LinAlgError:
                    P = A @ pinv(G)
            counter.add_flops(m * k * k + k**3)
            gains = np.einsum("ij,ij->i", P, A)
            gains[selected] = -np.inf
            best = int(np.argmax(gains))
            idx.append(best)
            selected[best] = True
            G = G + np.outer(A[best], A[best])
    return MaxvolResult(indices=np.asarray(idx, dtype=int), sweeps=res.sweeps,
                        converged=res.converged,
                        log_volume=log_volume(A[np.asarray(idx)]))


def brute_force_maxvol(A, r=None, limit=10**6):
    """Exhaustive oracle: the k-row subset of the m x k matrix A with
    globally maximal volume (or r-projective volume).

    Returns (indices, log_volume).  Guarded against combinatorial blowup.
    """
    A = np.asarray(A, dtype=float)
    m, k = A.shape
    if math.comb(m, k) > limit:
        raise ValueError(f"C({m},{k}) subsets exceed the {limit} guard")
    subsets = np.array(list(combinations(range(m), k)), dtype=int)
    blocks = A[subsets]                     # (N, k, k)
    if r is None or r == k:
        vals = np.abs(np.linalg.det(blocks))
        with np.errstate(divide="ignore"):
            logs = np.log(vals)
    else:
        s = np.linalg.svd(blocks, compute_uv=False)[:, :r]
        with np.errstate(divide="ignore"):
            logs = np.sum(np.log(s), axis=1)
    best = int(np.argmax(logs))
    return subsets[best], float(logs[best])


def brute_force_maxvol_cross(M, k, l, r=None, limit=10**6):
    """Exhaustive oracle over all k x l crosses of M: returns
    (row_set, col_set, log_volume) with globally maximal (r-projective)
    volume of M[I, J]."""
    M = np.asarray(M, dtype=float)
    m, n = M.shape
    n_crosses = math.comb(m, k) * math.comb(n, l)
    if n_crosses > limit:
        raise ValueError(f"{n_crosses} crosses exceed the {limit} guard")
    rows = np.array(list(combinations(range(m), k)), dtype=int)
    cols = np.array(list(combinations(range(n), l)), dtype=int)
    # (NI, NJ, k, l) gather, then batched singular values
    blocks = M[rows[:, None, :, None], cols[None, :, None, :]]
    s = np.linalg.svd(blocks, compute_uv=False)
    if r is not None:
        s = s[..., :r]
    with np.errstate(divide="ignore"):
        logs = np.sum(np.log(s), axis=-1)
    bi, bj = np.unravel_index(int(np.argmax(logs)), logs.shape)
    return rows[bi], cols[bj], float(logs[bi, bj])
