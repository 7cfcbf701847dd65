"""The sparse test-matrix families.

Shows the structure of the d-abridged Hadamard and Fourier matrices (2^d
nonzeros per row, orthogonal up to scaling), their scaled/permuted
variants, and the six experiment families built from sums with random
permutation matrices.
"""

import numpy as np

from sublra import abridged_fourier, abridged_hadamard, family_matrix, scaled_permuted

n = 32
for d in (1, 2, 3, 5):
    H = abridged_hadamard(n, d)
    gram = H @ H.T
    print(f"abridged Hadamard n={n} d={d}: {int((H[0] != 0).sum())} nonzeros "
          f"per row, H H^T = {gram[0, 0]:.0f} I: "
          f"{np.allclose(gram, gram[0, 0] * np.eye(n))}")

F = abridged_fourier(16, 4)
x = np.random.default_rng(0).standard_normal(16)
direct = np.array([np.sum(x * np.exp(2j * np.pi * k * np.arange(16) / 16))
                   for k in range(16)])
print(f"full-depth abridged Fourier == DFT: "
      f"{np.max(np.abs(F @ x - direct)):.2e} max deviation")

asph = scaled_permuted(abridged_hadamard(n, 3), "integer_set", True, seed=1)
print(f"3-ASPH entries lie in {sorted(set(np.unique(asph)))}")

print("\nexperiment families (n=32, l=8, orthonormalized):")
labels = ["Gaussian control", "3-ASPH + 1 permutation", "3-ASPH + 2",
          "3-ASPH + 3", "3-APH + 3", "3-APH + 2"]
for fam, label in enumerate(labels):
    H = family_matrix(fam, n, 8, seed=fam + 10)
    dev = np.max(np.abs(H.T @ H - np.eye(8)))
    print(f"  family {fam} ({label:24s}): orthonormality deviation {dev:.1e}")
