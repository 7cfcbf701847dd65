import numpy as np
import pytest

from sublra.counting import OpCounter
from sublra.testmat import (
    SamplingMatrix,
    TestMatrixSpec,
    abridged_fourier,
    abridged_hadamard,
    family_matrix,
    gaussian,
    sampling_matrix,
    scaled_permuted,
)


def walsh_hadamard(n):
    """Kronecker-power oracle for the full Walsh-Hadamard matrix."""
    W = np.array([[1.0]])
    while W.shape[0] < n:
        W = np.block([[W, W], [W, -W]])
    return W


def dft_direct(x):
    """Direct DFT sum with omega = exp(2 pi i / n) (positive sign)."""
    n = x.size
    j = np.arange(n)
    return np.array([np.sum(x * np.exp(2j * np.pi * k * j / n)) for k in j])


def test_gaussian_moments():
    G = gaussian(1000, 1000, seed=0)
    assert abs(G.mean()) < 0.005
    assert 0.99 <= G.var() <= 1.01


def test_gaussian_determinism():
    np.testing.assert_array_equal(gaussian(10, 7, 42), gaussian(10, 7, 42))
    assert not np.array_equal(gaussian(10, 7, 42), gaussian(10, 7, 43))


def test_gaussian_validation():
    with pytest.raises(ValueError):
        gaussian(0, 3, 0)


def test_sampling_full_permutation():
    H = sampling_matrix(6, 6, seed=0)
    np.testing.assert_allclose(H.T @ H, np.eye(6), atol=1e-14)
    assert set(np.argmax(H, axis=0)) == set(range(6))


def test_sampling_two_columns():
    H = sampling_matrix(4, 2, seed=1)
    assert H.sum() == 2.0
    np.testing.assert_allclose(H.T @ H, np.eye(2), atol=1e-14)
    assert np.all((H == 0) | (H == 1))


def test_sampling_access_count():
    M = np.arange(12.0).reshape(3, 4)
    S = SamplingMatrix.random(4, 2, seed=2)
    counter = OpCounter()
    MH = S.select_columns(M, counter)
    np.testing.assert_array_equal(MH, M @ S.toarray())
    assert counter.entry_reads == 3 * 2          # exactly m*l entries touched
    assert counter.flops == 0


def test_sampling_validation():
    with pytest.raises(ValueError):
        sampling_matrix(3, 4, seed=0)


def test_hadamard_single_step():
    np.testing.assert_array_equal(abridged_hadamard(2, 1),
                                  [[1.0, 1.0], [1.0, -1.0]])


def test_hadamard_depth1_block_structure():
    H = abridged_hadamard(4, 1)
    I2 = np.eye(2)
    np.testing.assert_array_equal(H, np.block([[I2, I2], [I2, -I2]]))
    assert np.all((np.abs(H) > 0).sum(axis=1) == 2)


def test_hadamard_full_depth_matches_kronecker_oracle():
    H = abridged_hadamard(8, 3)
    np.testing.assert_array_equal(H, walsh_hadamard(8))
    np.testing.assert_allclose(H @ H.T, 8.0 * np.eye(8), atol=1e-12)


def test_hadamard_nonzero_count_and_orthogonality():
    for n, d in [(16, 2), (32, 3), (24, 3)]:
        H = abridged_hadamard(n, d)
        nnz_rows = (np.abs(H) > 0).sum(axis=1)
        nnz_cols = (np.abs(H) > 0).sum(axis=0)
        assert np.all(nnz_rows == 2**d) and np.all(nnz_cols == 2**d)
        np.testing.assert_allclose(H @ H.T, (2**d) * np.eye(n), atol=1e-12)
        assert np.all(np.isin(H[np.abs(H) > 0], [-1.0, 1.0]))


def test_hadamard_validation():
    with pytest.raises(ValueError):
        abridged_hadamard(12, 3)     # 12 not divisible by 8


def test_fourier_single_step():
    F = abridged_fourier(2, 1)
    np.testing.assert_allclose(F, [[1.0, 1.0], [1.0, -1.0]], atol=1e-14)


def test_fourier_full_depth_matches_direct_dft():
    rng = np.random.default_rng(3)
    for n in (4, 8, 16):
        F = abridged_fourier(n, int(np.log2(n)))
        x = rng.standard_normal(n)
        np.testing.assert_allclose(F @ x, dft_direct(x), atol=1e-10)


def test_fourier_orthogonality_and_sparsity():
    for n, d in [(8, 2), (16, 3), (64, 3), (24, 3)]:
        F = abridged_fourier(n, d)
        np.testing.assert_allclose(F @ F.conj().T, (2**d) * np.eye(n),
                                   atol=1e-12)
        nnz = (np.abs(F) > 1e-14).sum(axis=1)
        assert np.all(nnz == 2**d)


def test_scaled_permuted_identity_transform():
    H = abridged_hadamard(8, 2)
    np.testing.assert_array_equal(scaled_permuted(H, "none", False, 0), H)


def test_scaled_permuted_asph_entry_range():
    H = scaled_permuted(abridged_hadamard(8, 3), "integer_set", True, seed=4)
    vals = np.unique(np.abs(H))
    assert set(vals).issubset({0.0, 1.0, 2.0, 3.0, 4.0})
    assert np.max(np.abs(H)) <= 4.0


def test_scaled_permuted_permutation_preserves_columns():
    H = abridged_hadamard(8, 2)
    P = scaled_permuted(H, "none", True, seed=5)
    orig = sorted(map(tuple, H.T))
    perm = sorted(map(tuple, P.T))
    assert orig == perm


def test_scaled_permuted_aspf_unit_modulus():
    F = scaled_permuted(abridged_fourier(8, 3), "unit_complex", True, seed=6)
    mags = np.abs(F[np.abs(F) > 1e-12])
    np.testing.assert_allclose(mags, 1.0, atol=1e-12)


def test_family_zero_is_gaussian_dispatch():
    np.testing.assert_array_equal(family_matrix(0, 16, 5, 7, orthonormalize=False),
                                  gaussian(16, 5, 7))


def test_family_one_row_sparsity_before_orthonormalization():
    H = family_matrix(1, 16, 16, seed=8, orthonormalize=False)
    nnz = (np.abs(H) > 0).sum(axis=1)
    assert np.all(nnz <= 2**3 + 1)


def test_family_orthonormalized_columns():
    for fam in range(6):
        H = family_matrix(fam, 16, 6, seed=9, orthonormalize=True)
        np.testing.assert_allclose(H.T @ H, np.eye(6), atol=1e-10)


def test_family_determinism():
    for fam in range(6):
        A = family_matrix(fam, 16, 5, seed=10)
        B = family_matrix(fam, 16, 5, seed=10)
        np.testing.assert_array_equal(A, B)


def test_family_validation():
    with pytest.raises(ValueError):
        family_matrix(6, 16, 4, 0)
    with pytest.raises(ValueError):
        family_matrix(1, 4, 2, 0)       # n < 8


def test_spec_materialization_deterministic():
    spec = TestMatrixSpec("sum3", 16, 5, seed=11, orthonormalize=True)
    np.testing.assert_array_equal(spec.materialize(), spec.materialize())
    spec2 = TestMatrixSpec("asph", 16, 16, depth_d=3, seed=12)
    np.testing.assert_array_equal(spec2.materialize(), spec2.materialize())
    with pytest.raises(ValueError):
        TestMatrixSpec("bogus", 8, 4).materialize()
