"""Posterior and a-priori error bounds.

Evaluates the deterministic posterior bound on concrete sketches, then the
closed-form a-priori factors for the randomized-input models, and replays
one of the Monte Carlo verification suites at reduced size.
"""

import numpy as np
import scipy.linalg

from sublra import apriori_bounds, posterior_error_bound, range_finder
from sublra.montecarlo import montecarlo_suite
from sublra.synth import random_singular_space_matrix

rng = np.random.default_rng(0)
m = n = 120
r, l = 6, 30
profile = np.concatenate([1.0 / np.arange(1, r + 1), np.full(n - r, 1e-4)])
M = random_singular_space_matrix(m, n, r, profile, seed=1)
H = scipy.linalg.qr(rng.standard_normal((n, l)), mode="economic")[0]

bound = posterior_error_bound(M, H, r)
err = np.linalg.norm(M - range_finder(M, H).approximation(), 2)
print(f"posterior bound: measured {err:.3e} <= {bound.bound_spectral:.3e} "
      f"(multiplier {bound.multiplier_spectral:.2f} x optimal)")

print("\na-priori factors at n=512, l=160, r=8:")
for model in ("random_space_i", "factor_gaussian_i"):
    b = apriori_bounds(512, 160, 8, model=model)
    print(f"  {model:18s}: factor {b.factor:6.2f}, failure probability "
          f"<= {b.failure_prob:.2e}")
for model, kw in (("gaussian_hmt", {}), ("tyuc", dict(k=320))):
    b = apriori_bounds(512, 160, 8, model=model, **kw)
    print(f"  {model:18s}: expectation factor {b.factor:6.2f}")

print("\nMonte Carlo replay (200 trials):")
rep = montecarlo_suite("random_space", trials=200)
print(rep.text())
