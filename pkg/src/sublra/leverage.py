"""Leverage-score row sampling and the least-squares refinement step.

Given a factor X with (near-)orthonormal columns, the leverage score of row
i is the squared Euclidean norm of that row; the scores of an m x l
orthonormal matrix sum to l and define the row-sampling distribution
p_i = score_i / l.  Sampling k rows with replacement with rescaling
D = diag(1 / sqrt(k p)) and solving the k-row least-squares problem
``Y = (D F X)^+ D F M`` yields ``||X Y - M||_F <= (1 + eps) ||X X^+ M - M||_F``
with probability 1 - delta once k reaches ``1296 r^2 / (beta eps^2 delta^4)``
-- astronomically conservative, so :func:`refine_lra` takes the sample size
directly and :func:`sample_size` is a separate advisory calculator.

For a consistent system (M in the range of X) the rescaling cancels exactly
and the scaled and unscaled solves agree; in general the scaling is the
variant the guarantee is proved for, and it is what we compute.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .counting import ensure_counter
from .linalg import pinv
from .sketch import LraFactors

__all__ = ["LeverageSample", "leverage_scores", "draw_leverage_sample",
           "sample_size", "refine_lra"]


@dataclass
class LeverageSample:
    """A with-replacement row sample: the score vector it was drawn from,
    the k sampled row indices, and the diagonal rescaling values
    1/sqrt(k p_i) applied to the sampled rows."""

    scores: np.ndarray
    rows: np.ndarray
    scaling: np.ndarray


def leverage_scores(X):
    """Squared row norms of X; X is orthonormalized first (with a warning)
    if its columns are not already orthonormal within 1e-8."""
    X = np.asarray(X, dtype=float)
    l = X.shape[1]
    if not np.allclose(X.T @ X, np.eye(l), atol=1e-8):
        warnings.warn("X does not have orthonormal columns; "
                      "orthonormalizing via thin QR", stacklevel=2)
        X = scipy.linalg.qr(X, mode="economic")[0]
    return np.einsum("ij,ij->i", X, X)


def sample_size(r, eps, delta, beta=1.0):
    """Advisory sample count ``ceil(1296 r^2 / (beta eps^2 delta^4))`` for
    the (1 + eps, 1 - delta) guarantee; callers may cap at m."""
    if not 0 < eps < 1:
        raise ValueError("need 0 < eps < 1")
    if not 0 < delta < 1:
        raise ValueError("need 0 < delta < 1")
    if not 0 < beta <= 1:
        raise ValueError("need 0 < beta <= 1")
    if r < 1:
        raise ValueError("need r >= 1")
    return math.ceil(1296.0 * r * r / (beta * eps * eps * delta**4))


def draw_leverage_sample(X, k, seed=0):
    """Draw k row indices with replacement, probabilities proportional to
    the leverage scores of X, with the matching rescaling values."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        scores = leverage_scores(X)
    p = scores / scores.sum()
    rows = np.random.default_rng(seed).choice(X.shape[0], size=k,
                                              replace=True, p=p)
    return LeverageSample(scores=scores, rows=rows,
                          scaling=1.0 / np.sqrt(k * p[rows]))


def refine_lra(M, X, k, seed=0, counter=None):
    """Recompute the right factor of ``M ~= X Y`` by leverage-score row
    sampling: draw k rows with replacement with probabilities proportional
    to the leverage scores of (orthonormalized) X, rescale, and solve the
    sampled least-squares problem.

    ``k >= m`` forces the full deterministic sample, recovering the
    unconstrained optimum ``Y = X^+ M``.  Reads k rows of M (k*n entries).
    A rank-deficient sample is redrawn once, then raises.
    """
    counter = ensure_counter(counter)
    M = np.asarray(M, dtype=float)
    X = np.asarray(X, dtype=float)
    m, l = X.shape
    if k < 1:
        raise ValueError("need k >= 1")
    if k >= m:
        counter.add_reads(M.size)
        return LraFactors(X, pinv(X) @ M, "xy")
    for attempt in range(2):
        sample = draw_leverage_sample(X, k, seed=seed + attempt)
        FX = sample.scaling[:, None] * X[sample.rows]
        sv = np.linalg.svd(FX, compute_uv=False)
        if sv[-1] > 1e-12 * max(1.0, sv[0]):
            FM = sample.scaling[:, None] * M[sample.rows]
            counter.add_reads(k * M.shape[1])
            counter.add_flops(k * l * min(k, l) + l * k * M.shape[1])
            return LraFactors(X, pinv(FX) @ FM, "xy")
    raise np.linalg.LinAlgError("sampled rows are rank deficient for X")
