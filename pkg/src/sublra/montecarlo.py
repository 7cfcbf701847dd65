"""Monte Carlo verification suites for the probabilistic guarantees.

Each suite replays one of the closed-form tail bounds on seeded random
draws and compares the empirical event frequency against the theoretical
bound plus a small sampling slack (2 percent absolute by default):

* ``gauss_norms``   spectral norm of a Gaussian matrix:
                    P{nu > t + sqrt(m) + sqrt(n)} <= exp(-t^2/2).
* ``gauss_pinv``    pseudoinverse norm of an m x n Gaussian matrix, m > n:
                    P{nu+ >= t e sqrt(m)/(m-n+1)} <= t^(n-m).
* ``preprocess``    Gaussian premultiplication of a rank-r matrix:
                    ||G M||_2 <= ||M||_2 (t + sqrt(k) + sqrt(r)) whp.
* ``volume``        volume concentration of Gaussian matrices (upper/lower
                    tails), submultiplicativity of r-projective volume, and
                    the lower bound on the volume of a random submatrix of
                    a two-sided factor-Gaussian matrix.
* ``random_space``  the sqrt(1 + 16 n / l) error factor for inputs with
                    a random right singular space and an orthonormal
                    sampling test matrix.
* ``factor_gaussian``  the sqrt(1 + 100 n / l) factor for perturbed right
                    factor-Gaussian inputs with the perturbation at its
                    admissible threshold.
* ``leverage``      the leverage-score refinement ratio
                    ||XY - M||_F / ||X X^+ M - M||_F at a practical sample
                    size.
"""

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import synth
from .cur import log_volume
from .leverage import refine_lra
from .sketch import apriori_bounds, range_finder
from .testmat import SamplingMatrix

__all__ = ["CheckResult", "SuiteReport", "montecarlo_suite", "SUITES"]

_SLACK = 0.02


@dataclass
class CheckResult:
    label: str
    empirical: float
    bound: float
    passed: bool
    comparison: str = "<="

    def line(self):
        mark = "pass" if self.passed else "FAIL"
        return (f"[{mark}] {self.label}: empirical {self.empirical:.5f} "
                f"{self.comparison} bound {self.bound:.5f}")


@dataclass
class SuiteReport:
    name: str
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def text(self):
        head = f"suite {self.name}: {'pass' if self.passed else 'FAIL'}"
        return "\n".join([head] + ["  " + c.line() for c in self.checks])


def _freq_check(label, events, bound, slack=_SLACK):
    freq = float(np.mean(events))
    return CheckResult(label, freq, bound + slack, freq <= bound + slack)


def suite_gauss_norms(m=100, n=100, trials=2000, ts=(1.0, 2.0, 3.0), seed=0):
    rng = np.random.default_rng(seed)
    norms = np.array([np.linalg.norm(rng.standard_normal((m, n)), 2)
                      for _ in range(trials)])
    checks = [
        _freq_check(f"P(nu > {t:g}+sqrt(m)+sqrt(n)), m={m}, n={n}",
                    norms > t + math.sqrt(m) + math.sqrt(n),
                    math.exp(-t * t / 2.0))
        for t in ts
    ]
    return SuiteReport("gauss_norms", checks)


def suite_gauss_pinv(m=100, n=96, trials=2000, ts=(2.0, 4.0), seed=0):
    rng = np.random.default_rng(seed)
    smin = np.array([np.linalg.svd(rng.standard_normal((m, n)),
                                   compute_uv=False)[-1]
                     for _ in range(trials)])
    checks = []
    for t in ts:
        thresh = t * math.e * math.sqrt(m) / (m - n + 1)
        checks.append(_freq_check(
            f"P(nu+ >= {t:g} e sqrt(m)/(m-n+1)), m={m}, n={n}",
            1.0 / smin >= thresh, t ** (n - m)))
    return SuiteReport("gauss_pinv", checks)


def suite_preprocess(m=64, r=8, k=32, trials=500, ts=(1.0, 2.0, 3.0), seed=0):
    """Appendix-style premultiplication check: G M behaves like a k x r
    Gaussian matrix scaled by ||M||_2."""
    rng = np.random.default_rng(seed)
    M = synth.random_singular_space_matrix(
        m, m, r, np.concatenate([np.ones(r), np.zeros(m - r)]), seed)
    norms = np.array([np.linalg.norm(rng.standard_normal((k, m)) @ M, 2)
                      for _ in range(trials)])
    checks = [
        _freq_check(f"P(||GM|| > (t+sqrt(k)+sqrt(r))||M||), t={t:g}",
                    norms > t + math.sqrt(k) + math.sqrt(r),
                    math.exp(-t * t / 2.0))
        for t in ts
    ]
    return SuiteReport("preprocess", checks)


def suite_volume(seed=0, trials=None, gauss_trials=1000, subm_trials=500,
                 pair_trials=500):
    """Volume events: Gaussian volume concentration (theta=5 upper tail,
    phi=0.5 lower tail, m=100, r=5), submultiplicativity of v_{2,r}, and
    the factor-Gaussian submatrix volume lower bound (m=n=128, r=4,
    p=q=16, phi=0.5).  ``trials`` overrides all three draw counts."""
    if trials is not None:
        gauss_trials = subm_trials = pair_trials = trials
    rng = np.random.default_rng(seed)
    checks = []

    m, r, theta, phi = 100, 5, 5.0, 0.5
    lv = np.array([log_volume(rng.standard_normal((m, r)))
                   for _ in range(gauss_trials)])
    up_event = lv >= (r / 2.0) * (math.log1p(theta) + math.log(m - r / 2.0))
    lo_event = lv <= (r / 2.0) * (math.log(1 - phi) + math.log(m - r + 1.0))
    up_bound = math.exp(-(theta / 4.0) * (m * r - r * r / 2.0 - r / 2.0 + 1))
    lo_bound = math.exp(-(phi * phi / 4.0) * r * (m - r + 1))
    checks.append(_freq_check(f"gaussian volume upper tail (theta={theta:g})",
                              up_event, up_bound, 0.01))
    checks.append(_freq_check(f"gaussian volume lower tail (phi={phi:g})",
                              lo_event, lo_bound, 0.01))

    # v_{2,r}(G H) <= v_{2,r}(G) v_{2,r}(H) on random conformal triples.
    bad = 0
    for _ in range(pair_trials):
        p, q, s = rng.integers(3, 12, size=3)
        rr = int(rng.integers(1, min(p, q, s) + 1))
        G = rng.standard_normal((p, q))
        Hm = rng.standard_normal((q, s))
        if log_volume(G @ Hm, rr) > log_volume(G, rr) + log_volume(Hm, rr) + 1e-9:
            bad += 1
    checks.append(CheckResult("submultiplicativity v2r(GH) <= v2r(G) v2r(H)",
                              bad / pair_trials, 0.0, bad == 0, "=="))

    mm = nn = 128
    r4, p, q = 4, 16, 16
    hits = 0
    for t in range(subm_trials):
        W = synth.factor_gaussian(mm, nn, r4, side="two_sided",
                                  seed=seed + 1000 + t)
        I = rng.permutation(mm)[:p]
        J = rng.permutation(nn)[:q]
        lhs = log_volume(W[np.ix_(I, J)], r4)
        rhs = (r4 * math.log(1 - phi)
               + (r4 / 2.0) * (math.log(p - r4 + 1.0) + math.log(q - r4 + 1.0)))
        hits += int(lhs >= rhs)     # v2r(Sigma) = 1 for Sigma = I
    freq = hits / subm_trials
    checks.append(CheckResult(
        "factor-Gaussian submatrix volume lower bound (freq >= 0.95)",
        freq, 0.95, freq >= 0.95, ">="))
    return SuiteReport("volume", checks)


def _range_finder_ratio(M, H, opt_spectral):
    out = range_finder(M, H)
    return float(np.linalg.norm(M - out.approximation(), 2) / opt_spectral)


def suite_random_space(n=512, m=512, r=8, l=160, trials=1000, seed=0,
                       max_fraction=_SLACK):
    """Random-right-singular-space inputs, orthonormal sampling test matrix:
    fraction of trials whose spectral error ratio exceeds
    sqrt(1 + 16 n / l)."""
    bound = apriori_bounds(n, l, r, model="random_space_i")
    profile = np.concatenate([1.0 / np.arange(1, r + 1), np.full(n - r, 1e-6)])
    exceed = 0
    ratios = np.empty(trials)
    for t in range(trials):
        M = synth.random_singular_space_matrix(m, n, r, profile, seed + t)
        H = SamplingMatrix.random(n, l, seed + 500000 + t)
        ratios[t] = _range_finder_ratio(M, H, profile[r])
        exceed += int(ratios[t] > bound.factor)
    freq = exceed / trials
    checks = [
        CheckResult(f"P(ratio > {bound.factor:.4g}) (tail bound "
                    f"{bound.failure_prob:.2e} + slack)",
                    freq, max_fraction, freq <= max_fraction),
        CheckResult("median ratio finite", float(np.median(ratios)),
                    bound.factor, bool(np.median(ratios) <= bound.factor)),
    ]
    return SuiteReport("random_space", checks)


def suite_factor_gaussian(n=512, m=512, r=8, l=160, trials=1000,
                          seed=0, max_fraction=_SLACK):
    """Perturbed right factor-Gaussian inputs with ||E||_F at the admissible
    threshold sigma_r(A) / (48 sqrt(n/l) + 6)."""
    bound = apriori_bounds(n, l, r, model="factor_gaussian_i")
    e_norm = 1.0 / (48.0 * math.sqrt(n / l) + 6.0)   # sigma_r(A) = 1
    exceed = 0
    for t in range(trials):
        M = synth.factor_gaussian(m, n, r, side="right",
                                  perturbation_norm=e_norm, seed=seed + t)
        sig = np.linalg.svd(M, compute_uv=False)
        H = SamplingMatrix.random(n, l, seed + 500000 + t)
        ratio = _range_finder_ratio(M, H, sig[r])
        exceed += int(ratio > bound.factor)
    freq = exceed / trials
    return SuiteReport("factor_gaussian", [
        CheckResult(f"P(ratio > {bound.factor:.4g}) (tail bound "
                    f"{bound.failure_prob:.2e} + slack)",
                    freq, max_fraction, freq <= max_fraction)])


def suite_leverage(m=400, n=60, l=12, k=200, trials=500, seed=0,
                   ratio_limit=1.5, min_fraction=0.90):
    """Leverage-score refinement at a practical sample size: the sampled
    least-squares solution is within ``ratio_limit`` of the unconstrained
    optimum in at least ``min_fraction`` of trials."""
    rng = np.random.default_rng(seed)
    ok = 0
    for t in range(trials):
        X = scipy.linalg.qr(rng.standard_normal((m, l)), mode="economic")[0]
        M = X @ rng.standard_normal((l, n)) + 0.1 * rng.standard_normal((m, n))
        out = refine_lra(M, X, k, seed=seed + 900000 + t)
        err = np.linalg.norm(out.approximation() - M, "fro")
        opt = np.linalg.norm(X @ (X.T @ M) - M, "fro")
        ok += int(err <= ratio_limit * opt)
    freq = ok / trials
    return SuiteReport("leverage", [
        CheckResult(f"P(||XY-M||_F <= {ratio_limit:g} opt) >= {min_fraction:g}",
                    freq, min_fraction, freq >= min_fraction, ">=")])


SUITES = {
    "gauss_norms": suite_gauss_norms,
    "gauss_pinv": suite_gauss_pinv,
    "preprocess": suite_preprocess,
    "volume": suite_volume,
    "random_space": suite_random_space,
    "factor_gaussian": suite_factor_gaussian,
    "leverage": suite_leverage,
}


def montecarlo_suite(name, **kwargs):
    """Run one named suite; see :data:`SUITES` for the registry."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; "
                         f"choose from {sorted(SUITES)}")
    return SUITES[name](**kwargs)
