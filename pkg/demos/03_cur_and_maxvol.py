"""CUR decompositions driven by maxvol row selection.

Selects a row subset of weakly h-maximal volume, verifies the pivot-growth
exit condition and the pseudoinverse norm bound it implies, and compares
the sweep output against the exhaustive oracle on a small instance.  Then
builds CUR approximations with the three nucleus policies.
"""

import numpy as np

from sublra import (
    brute_force_maxvol,
    build_cur,
    cheb_bound_f,
    maxvol_pinv_bound,
    maxvol_rows,
    volume,
)
from sublra.synth import factor_gaussian

rng = np.random.default_rng(0)

# maxvol on an orthonormal frame: the exit condition |B_ij| <= h bounds
# the inverse of the selected block
m, k, h = 200, 10, 1.05
X = np.linalg.qr(rng.standard_normal((m, k)))[0]
res = maxvol_rows(X, h=h)
B = X @ np.linalg.inv(X[res.indices])
pinv_norm = 1.0 / np.linalg.svd(X[res.indices], compute_uv=False)[-1]
print(f"maxvol({m}x{k}, h={h}): {res.sweeps} swaps, max |B| = "
      f"{np.max(np.abs(B)):.3f} <= {h}")
print(f"  ||(FX)^+|| = {pinv_norm:.1f} <= bound "
      f"{maxvol_pinv_bound(m, k, h):.1f}")

A = rng.standard_normal((10, 3))
sweep = maxvol_rows(A, h=1.01)
best, best_log = brute_force_maxvol(A)
print(f"small instance: sweep volume {np.exp(sweep.log_volume):.3f} vs "
      f"exhaustive optimum {np.exp(best_log):.3f}")

# CUR with the three nucleus policies on a noisy low-rank input
M = factor_gaussian(80, 60, 5, side="two_sided", seed=1,
                    perturbation_norm=1e-6)
I = rng.permutation(80)[:8]
J = rng.permutation(60)[:8]
for policy, kwargs in [("canonical", {}), ("rank_r_truncated", dict(r=5)),
                       ("tau_threshold", dict(tau=1e-3))]:
    cur = build_cur(M, I, J, policy, **kwargs)
    err = np.linalg.norm(M - cur.approximation()) / np.linalg.norm(M)
    print(f"CUR nucleus {policy:18s}: relative error {err:.2e}")

G = M[np.ix_(I, J)]
rep = volume(G, r=5)
print(f"generator volume v2 = {rep.v2:.3e}, 5-projective volume = "
      f"{rep.v2r:.3e}; Chebyshev factor f(8,8,5) = {cheb_bound_f(8, 8, 5):.2f}")
