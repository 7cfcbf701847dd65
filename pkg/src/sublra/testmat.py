"""Test-matrix (sketching-multiplier) generators.

Provides the multiplier families used by the sketching algorithms and the
benchmark harness: dense Gaussian, sampling (sub-permutation) matrices whose
application only touches the selected rows/columns, d-abridged Hadamard and
Fourier matrices built by truncating the classical radix-2 recursions after
``d`` doubling steps, their randomly scaled/permuted variants, and the six
experiment families (Gaussian control plus sums of a depth-3 scaled/permuted
Hadamard matrix with one to three random permutation matrices).

Every generator is a deterministic pure function of its arguments; the same
seed always reproduces the same matrix bit for bit.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .counting import ensure_counter

__all__ = [
    "TestMatrixSpec",
    "SamplingMatrix",
    "gaussian",
    "sampling_indices",
    "sampling_matrix",
    "abridged_hadamard",
    "abridged_fourier",
    "scaled_permuted",
    "permutation_matrix",
    "family_matrix",
    "FAMILY_COUNT",
]

FAMILY_COUNT = 6
# Experiment families use three Hadamard doubling steps.
_FAMILY_DEPTH = 3
# ASPH diagonal scaling values, drawn uniformly.
_SCALE_SET = np.arange(-4.0, 5.0)


def gaussian(m, n, seed):
    """m x n matrix of iid standard normal entries from the given seed."""
    if m < 1 or n < 1:
        raise ValueError("dimensions must be positive")
    return np.random.default_rng(seed).standard_normal((m, n))


def sampling_indices(n, l, seed):
    """l distinct indices in [0, n), uniform without replacement."""
    if not 1 <= l <= n:
        raise ValueError(f"need 1 <= l <= n, got l={l}, n={n}")
    return np.random.default_rng(seed).permutation(n)[:l]


class SamplingMatrix:
    """n x l leftmost submatrix of a random n x n permutation matrix.

    Column j is the standard basis vector ``e_{indices[j]}``, so multiplying
    ``M @ S`` just selects l columns of M and reads m*l entries.  Kept in
    structured form so the sketching code can certify sublinear access.
    """

    def __init__(self, n, indices):
        indices = np.asarray(indices, dtype=int)
        if np.unique(indices).size != indices.size:
            raise ValueError("sampling indices must be distinct")
        if indices.size and (indices.min() < 0 or indices.max() >= n):
            raise ValueError("sampling index out of range")
        self.n = int(n)
        self.indices = indices

    @classmethod
    def random(cls, n, l, seed):
        return cls(n, sampling_indices(n, l, seed))

    @property
    def shape(self):
        return (self.n, self.indices.size)

    def toarray(self):
        S = np.zeros(self.shape)
        S[self.indices, np.arange(self.indices.size)] = 1.0
        return S

    def select_columns(self, M, counter=None):
        """``M @ self``: the selected columns of M, charging m*l reads."""
        out = np.asarray(M)[:, self.indices]
        ensure_counter(counter).add_reads(out.size)
        return np.array(out, dtype=float)

    def select_rows(self, M, counter=None):
        """``self.T @ M``: the selected rows of M, charging l*n reads."""
        out = np.asarray(M)[self.indices, :]
        ensure_counter(counter).add_reads(out.size)
        return np.array(out, dtype=float)


def sampling_matrix(n, l, seed):
    """Dense n x l sampling matrix (orthonormal columns)."""
    return SamplingMatrix.random(n, l, seed).toarray()


def _check_depth(n, d):
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")
    if 2**d > n or n % (2**d) != 0:
        raise ValueError(f"n={n} must be divisible by 2^d={2 ** d}")


def abridged_hadamard(n, d):
    """n x n d-abridged Hadamard matrix: d doubling steps
    ``H -> [[H, H], [H, -H]]`` from the identity of size n / 2^d.

    Every row and column has exactly 2^d nonzero entries, all +-1, and
    ``H @ H.T = 2^d * I``.  Full depth (n a power of two, d = log2 n)
    reproduces the Walsh-Hadamard matrix.
    """
    _check_depth(n, d)
    H = np.eye(n >> d)
    for _ in range(d):
        H = np.block([[H, H], [H, -H]])
    return H


def abridged_fourier(n, d):
    """n x n d-abridged Fourier matrix (complex), from d doubling steps of
    the radix-2 decimation-in-frequency recursion started at the identity.

    Each step maps F of size s to size 2s via
    ``P^{-1} [[F, F], [F D, -F D]]`` with twiddles
    ``D = diag(omega_{2s}^j), omega_{2s} = exp(2 pi i / (2s))`` and P the
    odd/even (gather-evens-first) permutation.  The result has 2^d nonzeros
    per row and column and satisfies ``F @ F* = 2^d * I``; at full depth it
    is exactly the n-point DFT matrix with omega_n = exp(2 pi i / n).
    """
    _check_depth(n, d)
    F = np.eye(n >> d, dtype=complex)
    for _ in range(d):
        s = F.shape[0]
        twiddle = np.exp(2j * np.pi * np.arange(s) / (2 * s))
        B = np.block([[F, F], [F * twiddle, -(F * twiddle)]])
        gather = np.concatenate([np.arange(0, 2 * s, 2), np.arange(1, 2 * s, 2)])
        F = np.empty_like(B)
        F[gather, :] = B
    return F


def permutation_matrix(n, rng):
    """Dense n x n permutation matrix drawn uniformly."""
    P = np.zeros((n, n))
    P[rng.permutation(n), np.arange(n)] = 1.0
    return P


def scaled_permuted(base, scale_mode="none", permute=False, seed=0):
    """Random diagonal scaling and/or column permutation of a square matrix.

    ``scale_mode='integer_set'`` scales row i by a uniform draw from
    {-4, ..., 4} (the ASPH recipe; zero draws can null rows, which callers
    guard against); ``'unit_complex'`` scales by random unit-modulus phases
    (ASPF); ``'none'`` leaves the matrix unscaled.  ``permute`` applies a
    uniform random column permutation.
    """
    base = np.asarray(base)
    if base.shape[0] != base.shape[1]:
        raise ValueError("base must be square")
    n = base.shape[0]
    rng = np.random.default_rng(seed)
    out = base
    if scale_mode == "integer_set":
        out = rng.choice(_SCALE_SET, size=n)[:, None] * out
    elif scale_mode == "unit_complex":
        out = np.exp(2j * np.pi * rng.random(n))[:, None] * out.astype(complex)
    elif scale_mode != "none":
        raise ValueError(f"unknown scale_mode {scale_mode!r}")
    if permute:
        out = out[:, rng.permutation(n)]
    return out if out is not base else base.copy()


def _family_sum(index, n, rng):
    """The n x n sum behind experiment family ``index`` (1..5)."""
    base = abridged_hadamard(n, _FAMILY_DEPTH)
    scale = "integer_set" if index in (1, 2, 3) else "none"
    n_perms = {1: 1, 2: 2, 3: 3, 4: 3, 5: 2}[index]
    total = scaled_permuted(base, scale_mode=scale, permute=True,
                            seed=rng.integers(2**63))
    for _ in range(n_perms):
        total = total + permutation_matrix(n, rng)
    return total


def family_matrix(index, n, l, seed, orthonormalize=True):
    """n x l test matrix from experiment family ``index`` in 0..5.

    Family 0 is Gaussian (control).  Families 1-3 are the sum of a depth-3
    abridged scaled permuted Hadamard matrix and 1-3 random permutation
    matrices; families 4-5 drop the scaling (depth-3 abridged permuted
    Hadamard) and add 3 or 2 permutation matrices.  The leftmost l columns
    of the n x n sum are returned, orthonormalized by thin QR unless
    disabled.  Rank-deficient draws (possible through zero scalings) are
    redrawn with seed+1.
    """
    if index == 0:
        H = gaussian(n, l, seed)
    else:
        if index not in range(1, FAMILY_COUNT):
            raise ValueError(f"family index {index} outside 0..5")
        if n < 8:
            raise ValueError("family sums need n >= 8 (three doubling steps)")
        if not 1 <= l <= n:
            raise ValueError(f"need 1 <= l <= n, got l={l}")
        H = None
        for attempt in range(32):
            rng = np.random.default_rng(seed + attempt)
            cand = _family_sum(index, n, rng)[:, :l]
            R = scipy.linalg.qr(cand, mode="r", pivoting=True)[0]
            diag = np.abs(np.diag(R))
            if diag[0] > 0 and np.all(diag > 1e-12 * diag[0]):
                if attempt:
                    warnings.warn(
                        f"family {index} redraw: seed {seed}+{attempt} "
                        "(rank-deficient draw)", stacklevel=2)
                H = cand
                break
        if H is None:
            raise RuntimeError("could not draw a full-rank family matrix")
    if orthonormalize:
        H = scipy.linalg.qr(H, mode="economic")[0]
    return H


@dataclass
class TestMatrixSpec:
    """Declarative description of a test matrix; materialization is a pure
    function of the fields.

    ``family`` is one of 'gaussian', 'sampling', 'abridged_hadamard',
    'abridged_fourier', 'asph', 'aph', 'aspf', or 'sum0'..'sum5'.
    """

    __test__ = False          # keep pytest from collecting the Test* name

    family: str
    rows: int
    cols: int
    depth_d: int = _FAMILY_DEPTH
    seed: int = 0
    orthonormalize: bool = False

    def materialize(self):
        f = self.family
        if f == "gaussian":
            H = gaussian(self.rows, self.cols, self.seed)
        elif f == "sampling":
            return sampling_matrix(self.rows, self.cols, self.seed)
        elif f == "abridged_hadamard":
            H = abridged_hadamard(self.rows, self.depth_d)[:, : self.cols]
        elif f == "abridged_fourier":
            H = abridged_fourier(self.rows, self.depth_d)[:, : self.cols]
        elif f == "asph":
            H = scaled_permuted(abridged_hadamard(self.rows, self.depth_d),
                                "integer_set", True, self.seed)[:, : self.cols]
        elif f == "aph":
            H = scaled_permuted(abridged_hadamard(self.rows, self.depth_d),
                                "none", True, self.seed)[:, : self.cols]
        elif f == "aspf":
            H = scaled_permuted(abridged_fourier(self.rows, self.depth_d),
                                "unit_complex", True, self.seed)[:, : self.cols]
        elif f.startswith("sum") and f[3:].isdigit():
            return family_matrix(int(f[3:]), self.rows, self.cols, self.seed,
                                 self.orthonormalize)
        else:
            raise ValueError(f"unknown family {self.family!r}")
        if self.orthonormalize:
            H = scipy.linalg.qr(H, mode="economic")[0]
        return H
