"""Synthetic input-matrix generators for the experiments.

Three families of benchmark inputs plus two randomized models:

* SVD-generated matrices with a planted spectrum (sigma_j = 1/j up to the
  target rank, 1e-10 beyond), unit spectral norm.
* The discretized single-layer potential between two concentric circles
  (radii 1 and 2), a circulant matrix with geometrically decaying spectrum.
* Five classical first-kind Fredholm test kernels (baart, shaw, gravity,
  wing, foxgood) discretized on n points.
* Matrices whose leading right singular space is a random (Gaussian) row
  space, with an arbitrary planted spectrum.
* Factor-Gaussian matrices: products of Gaussian factors with a fixed
  diagonal spectrum, optionally perturbed by a Gaussian matrix of exact
  Frobenius norm.

All generators are deterministic per seed.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .testmat import gaussian

__all__ = [
    "InputSpec",
    "class1_svd_generated",
    "laplacian_single_layer",
    "regtools_kernel",
    "random_singular_space_matrix",
    "factor_gaussian",
    "REGTOOLS_KINDS",
]

REGTOOLS_KINDS = ("baart", "shaw", "gravity", "wing", "foxgood")


def _haar_orthogonal(n, rng):
    """Haar-distributed n x n orthogonal matrix (sign-fixed QR of Gaussian)."""
    Q, R = scipy.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def _orthonormal_columns(m, k, rng):
    Q, R = scipy.linalg.qr(rng.standard_normal((m, k)), mode="economic")
    return Q * np.sign(np.diag(R))


def class1_svd_generated(n, r, seed):
    """n x n matrix U diag(sigma) V.T with Haar orthogonal U, V and
    sigma_j = 1/j for j <= r, 1e-10 for j > r.

    Unit spectral norm; numerical rank r at eps = 1e-6 (since 1/r > 1e-6
    for the desk-scale ranks used here and the tail sits at 1e-10).
    """
    if not 0 < r < n:
        raise ValueError("need 0 < r < n")
    rng = np.random.default_rng(seed)
    sigma = np.concatenate([1.0 / np.arange(1, r + 1), np.full(n - r, 1e-10)])
    U = _haar_orthogonal(n, rng)
    V = _haar_orthogonal(n, rng)
    return (U * sigma) @ V.T


def _gauss_legendre(k):
    x, w = np.polynomial.legendre.leggauss(k)
    return x, w


def laplacian_single_layer(n, nodes_per_arc=16, normalize=True):
    """Discretized single-layer potential between circles of radii 1 and 2.

    Entry (i, j) integrates log|2 w^i - y| over the j-th arc of the unit
    circle (angles [2 pi j / n, 2 pi (j+1) / n], arc-length measure),
    w = exp(2 pi i / n), by composite Gauss-Legendre quadrature with
    ``nodes_per_arc`` nodes.  The kernel depends only on (j - i) mod n, so
    the matrix is circulant.  With ``normalize`` the constant is chosen so
    the spectral norm is 1.
    """
    if n < 4:
        raise ValueError("need n >= 4")
    x, w = _gauss_legendre(nodes_per_arc)
    h = 2.0 * np.pi / n
    theta = (x[None, :] + 1.0) * (h / 2.0) + np.arange(n)[:, None] * h
    weights = w * (h / 2.0)
    # |2 - exp(i t)|^2 = 5 - 4 cos t
    g = (weights[None, :] * 0.5 * np.log(5.0 - 4.0 * np.cos(theta))).sum(axis=1)
    idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    M = g[idx]
    if normalize:
        M = M / np.linalg.norm(M, 2)
    return M


def _midpoints(n, a, b):
    h = (b - a) / n
    return a + (np.arange(n) + 0.5) * h, h


def regtools_kernel(kind, n, normalize=False):
    """n x n discretization of one of five first-kind Fredholm kernels.

    Kinds and kernels (quadrature on midpoints unless noted):

    * ``baart``:   exp(s cos t), s in [0, pi/2], t in [0, pi]; Galerkin with
      orthonormal box functions, cell integrals by 4-point Gauss-Legendre.
    * ``shaw``:    ((cos s + cos t) sinc((sin s + sin t)))^2 scaled by pi
      inside the sinc, s, t in [-pi/2, pi/2].
    * ``gravity``: d (d^2 + (s-t)^2)^(-3/2) with depth d = 0.25 on [0, 1].
    * ``wing``:    t exp(-s t^2) on [0, 1].
    * ``foxgood``: sqrt(s^2 + t^2) on [0, 1].

    By default the matrices keep their natural quadrature scale, under
    which the numerical ranks at absolute eps = 1e-6 for n = 1000 are
    4 (wing), 6 (baart), 10 (foxgood), 12 (shaw), and 25 (gravity);
    ``normalize`` rescales to unit spectral norm.
    """
    if n < 16:
        raise ValueError("need n >= 16")
    if kind == "shaw":
        s, h = _midpoints(n, -np.pi / 2, np.pi / 2)
        co = np.add.outer(np.cos(s), np.cos(s))
        u = np.pi * np.add.outer(np.sin(s), np.sin(s))
        M = h * co**2 * np.sinc(u / np.pi) ** 2
    elif kind == "gravity":
        d = 0.25
        s, h = _midpoints(n, 0.0, 1.0)
        M = h * d * (d**2 + np.subtract.outer(s, s) ** 2) ** (-1.5)
    elif kind == "foxgood":
        s, h = _midpoints(n, 0.0, 1.0)
        M = h * np.sqrt(np.add.outer(s**2, s**2))
    elif kind == "wing":
        s, h = _midpoints(n, 0.0, 1.0)
        M = h * s[None, :] * np.exp(-np.outer(s, s**2))
    elif kind == "baart":
        hs = (np.pi / 2) / n
        ht = np.pi / n
        x, w = _gauss_legendre(4)
        x = (x + 1.0) / 2.0
        w = w / 2.0
        s0 = np.arange(n) * hs
        t0 = np.arange(n) * ht
        M = np.zeros((n, n))
        for a in range(4):
            sa = s0 + x[a] * hs
            for b in range(4):
                tb = t0 + x[b] * ht
                M += w[a] * w[b] * np.exp(np.outer(sa, np.cos(tb)))
        M *= np.sqrt(hs * ht)
    else:
        raise ValueError(f"unknown kind {kind!r}; expected one of {REGTOOLS_KINDS}")
    if normalize:
        M = M / np.linalg.norm(M, 2)
    return M


def random_singular_space_matrix(m, n, r, sigma_profile, seed,
                                 identity_u=False):
    """Matrix whose top-r right singular space is the row space of a random
    r x n Gaussian matrix, with singular values ``sigma_profile``.

    ``sigma_profile`` must be non-increasing of length n (r leading values,
    n - r tail values).  The left factor is a random orthogonal matrix
    unless ``identity_u`` forces U = I.
    """
    sigma_profile = np.asarray(sigma_profile, dtype=float)
    if not r < n <= m:
        raise ValueError("need r < n <= m")
    if sigma_profile.shape != (n,):
        raise ValueError("sigma_profile must have length n")
    if np.any(np.diff(sigma_profile) > 0) or np.any(sigma_profile < 0):
        raise ValueError("sigma_profile must be non-increasing and nonnegative")
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((r, n))
    # Orthonormal basis of the row space of G and of its complement.
    Qfull, _ = scipy.linalg.qr(G.T, mode="full")
    Q, Q_perp = Qfull[:, :r], Qfull[:, r:]
    Vt = np.vstack([Q.T, Q_perp.T])
    core = np.zeros((m, n))
    np.fill_diagonal(core, sigma_profile)
    if identity_u:
        return core @ Vt
    U = _haar_orthogonal(m, rng)
    return U @ core @ Vt


def factor_gaussian(m, n, r, side="right", sigma_profile=None,
                    perturbation_norm=0.0, seed=0):
    """Factor-Gaussian matrix of rank r, optionally perturbed.

    * ``side='right'``: A @ G / sqrt(n) with A = Q diag(sigma_profile) for a
      random orthonormal m x r factor Q and G an r x n Gaussian matrix.
    * ``side='left'``: mirror image, G @ B / sqrt(m) with
      B = diag(sigma_profile) Q.T for orthonormal n x r Q.
    * ``side='two_sided'``: G1 @ diag(sigma_profile) @ G2 with unscaled
      Gaussian factors G1 (m x r) and G2 (r x n).

    A Gaussian perturbation rescaled to exact Frobenius norm
    ``perturbation_norm`` is added when that norm is positive.
    """
    if not 0 < r < min(m, n):
        raise ValueError("need 0 < r < min(m, n)")
    if perturbation_norm < 0:
        raise ValueError("perturbation_norm must be nonnegative")
    sigma = (np.ones(r) if sigma_profile is None
             else np.asarray(sigma_profile, dtype=float))
    if sigma.shape != (r,):
        raise ValueError("sigma_profile must have length r")
    rng = np.random.default_rng(seed)
    if side == "right":
        A = _orthonormal_columns(m, r, rng) * sigma
        core = A @ (rng.standard_normal((r, n)) / np.sqrt(n))
    elif side == "left":
        B = sigma[:, None] * _orthonormal_columns(n, r, rng).T
        core = (rng.standard_normal((m, r)) / np.sqrt(m)) @ B
    elif side == "two_sided":
        G1 = rng.standard_normal((m, r))
        G2 = rng.standard_normal((r, n))
        core = (G1 * sigma) @ G2
    else:
        raise ValueError(f"unknown side {side!r}")
    if perturbation_norm > 0.0:
        E = rng.standard_normal((m, n))
        core = core + E * (perturbation_norm / np.linalg.norm(E, "fro"))
    return core


@dataclass
class InputSpec:
    """Declarative description of a benchmark input matrix.

    ``kind`` is one of 'class1', 'laplacian', 'regtools',
    'random_singular_space', or 'factor_gaussian'.  ``subkind`` names the
    Fredholm kernel for 'regtools' and the factor side for
    'factor_gaussian'.
    """

    kind: str
    n: int
    m: int = 0
    r: int = 0
    subkind: str = ""
    sigma_profile: list = field(default_factory=list)
    perturbation_norm: float = 0.0
    seed: int = 0

    def materialize(self):
        m = self.m or self.n
        if self.kind == "class1":
            return class1_svd_generated(self.n, self.r, self.seed)
        if self.kind == "laplacian":
            return laplacian_single_layer(self.n)
        if self.kind == "regtools":
            return regtools_kernel(self.subkind, self.n)
        if self.kind == "random_singular_space":
            return random_singular_space_matrix(
                m, self.n, self.r, np.asarray(self.sigma_profile), self.seed)
        if self.kind == "factor_gaussian":
            return factor_gaussian(
                m, self.n, self.r, self.subkind or "right",
                np.asarray(self.sigma_profile) if self.sigma_profile else None,
                self.perturbation_norm, self.seed)
        raise ValueError(f"unknown input kind {self.kind!r}")
