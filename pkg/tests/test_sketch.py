import numpy as np
import pytest
import scipy.linalg

from sublra.counting import OpCounter
from sublra.linalg import norm
from sublra.sketch import (
    SketchConfig,
    apriori_bounds,
    posterior_error_bound,
    premult_bound,
    range_finder,
    row_column_sketch,
    transposed_range_finder,
)
from sublra.synth import factor_gaussian
from sublra.testmat import SamplingMatrix, gaussian


def rank_r_matrix(m, n, r, seed):
    rng = np.random.default_rng(seed)
    return rng.standard_normal((m, r)) @ rng.standard_normal((r, n))


def test_range_finder_exact_on_low_rank():
    for seed in range(5):
        M = rank_r_matrix(24, 18, 3, seed)
        H = gaussian(18, 5, seed + 100)
        out = range_finder(M, H)
        err = np.linalg.norm(M - out.approximation()) / np.linalg.norm(M)
        assert err <= 1e-9


def test_range_finder_policy_invariance():
    rng = np.random.default_rng(0)
    M = rng.standard_normal((20, 15))
    H = gaussian(15, 6, 1)
    outs = [range_finder(M, H, t_policy=p).approximation()
            for p in ("identity", "qr_r_factor", "qrp_r_factor")]
    for other in outs[1:]:
        assert np.linalg.norm(outs[0] - other) <= 1e-8 * np.linalg.norm(M)


def test_range_finder_exact_column_capture():
    M = np.diag([1.0, 0.0])
    H = np.array([[1.0], [0.0]])
    out = range_finder(M, H)
    np.testing.assert_allclose(out.approximation(), M, atol=1e-12)


def test_range_finder_rank_deficient_identity_policy_warns():
    M = rank_r_matrix(12, 10, 2, 3)
    H = gaussian(10, 5, 4)          # MH has rank 2 < 5
    with pytest.warns(UserWarning, match="rank-deficient"):
        out = range_finder(M, H, t_policy="identity")
    err = np.linalg.norm(M - out.approximation()) / np.linalg.norm(M)
    assert err <= 1e-8


def test_transposed_range_finder_exact():
    M = rank_r_matrix(16, 22, 4, 5)
    F = gaussian(6, 16, 6)
    out = transposed_range_finder(M, F)
    assert out.orientation == "yx"
    err = np.linalg.norm(M - out.approximation()) / np.linalg.norm(M)
    assert err <= 1e-9


def test_transposed_range_finder_is_transposition_of_range_finder():
    rng = np.random.default_rng(7)
    M = rng.standard_normal((14, 11))
    F = gaussian(5, 14, 8)
    a = transposed_range_finder(M, F).approximation()
    b = range_finder(M.T, F.T).approximation().T
    assert np.linalg.norm(a - b) <= 1e-9 * np.linalg.norm(M)


def test_transposed_range_finder_row_capture():
    M = np.diag([1.0, 0.0])
    F = np.array([[1.0, 0.0]])
    out = transposed_range_finder(M, F)
    np.testing.assert_allclose(out.approximation(), M, atol=1e-12)


def test_row_column_sketch_exact_square_cross():
    for seed in range(5):
        M = rank_r_matrix(20, 17, 3, seed + 10)
        F = gaussian(3, 20, seed + 50)
        H = gaussian(17, 3, seed + 90)
        out = row_column_sketch(M, F, H)
        err = np.linalg.norm(M - out.approximation()) / np.linalg.norm(M)
        assert err <= 1e-8
        assert not out.degenerate


def test_row_column_sketch_policy_invariance():
    rng = np.random.default_rng(11)
    M = rng.standard_normal((18, 15))
    F = gaussian(8, 18, 12)
    H = gaussian(15, 5, 13)
    outs = [row_column_sketch(M, F, H, s_policy=sp, t_policy=tp).approximation()
            for sp in ("identity", "qr_r_factor")
            for tp in ("identity", "qr_r_factor", "qrp_r_factor")]
    for other in outs[1:]:
        assert np.linalg.norm(outs[0] - other) <= 1e-8 * np.linalg.norm(M)


def test_row_column_sketch_remark_product_identity():
    # XY = MH (FMH)^+ FM for full-rank generators
    rng = np.random.default_rng(14)
    M = rng.standard_normal((16, 13))
    F = gaussian(7, 16, 15)
    H = gaussian(13, 5, 16)
    out = row_column_sketch(M, F, H)
    MH, FM = M @ H, F @ M
    direct = MH @ np.linalg.pinv(FM @ H) @ FM
    assert np.linalg.norm(out.approximation() - direct) <= 1e-8 * np.linalg.norm(M)


def test_row_column_sketch_sampling_sublinear_counters():
    m, n, k, l = 60, 50, 8, 6
    M = np.random.default_rng(17).standard_normal((m, n))
    H = SamplingMatrix.random(n, l, 18)
    F = SamplingMatrix.random(m, k, 19)
    counter = OpCounter()
    out = row_column_sketch(M, F, H, counter=counter)
    assert out.approximation().shape == (m, n)
    # entry accesses: the selected columns and rows only
    assert counter.entry_reads == m * l + k * n
    assert counter.entry_reads < m * n
    # main arithmetic cost O(k l n + l^2 m) with a modest constant
    assert counter.flops <= 20 * (k * l * n + l * l * m + k * k * n)


def test_row_column_sketch_degenerate_cross_flag():
    M = np.zeros((12, 12))
    M[3, 4] = 1.0
    H = SamplingMatrix(12, [0, 1, 2])
    F = SamplingMatrix(12, [0, 1, 2])
    out = row_column_sketch(M, F, H)
    assert out.degenerate
    np.testing.assert_allclose(out.approximation(), 0.0, atol=1e-14)


def test_row_column_sketch_transposed_variant():
    M = rank_r_matrix(15, 21, 3, 20)
    F = gaussian(4, 15, 21)
    H = gaussian(21, 4, 22)
    a = row_column_sketch(M, F, H, transposed=True)
    err = np.linalg.norm(M - a.approximation()) / np.linalg.norm(M)
    assert err <= 1e-8


def test_sketch_config_validation():
    with pytest.raises(ValueError):
        SketchConfig(r=5, l=3, k=8)
    with pytest.raises(ValueError):
        SketchConfig(r=2, l=4, k=4, t_policy="cholesky")
    SketchConfig(r=2, l=4, k=4)


def test_posterior_bound_top_space_multiplier():
    rng = np.random.default_rng(23)
    M = rng.standard_normal((20, 12))
    r = 4
    V1 = np.linalg.svd(M)[2][:r].T
    bound = posterior_error_bound(M, V1, r)
    assert abs(bound.multiplier_spectral - np.sqrt(2.0)) <= 1e-9
    assert abs(bound.c1_pinv_norm - 1.0) <= 1e-9


def test_posterior_bound_zero_for_exact_rank():
    M = rank_r_matrix(18, 14, 3, 24)
    H = scipy.linalg.qr(gaussian(14, 5, 25), mode="economic")[0]
    bound = posterior_error_bound(M, H, 3)
    assert bound.bound_spectral <= 1e-9 * np.linalg.norm(M)
    assert bound.bound_frobenius <= 1e-9 * np.linalg.norm(M)


def test_posterior_bound_dominates_measured_error():
    rng = np.random.default_rng(26)
    for t in range(100):
        m, n, r, l = 20, 16, 3, 6
        sigma = np.concatenate([[3.0, 2.0, 1.5], 0.1 * rng.random(n - r)])
        sigma.sort()
        sigma = sigma[::-1]
        U = np.linalg.qr(rng.standard_normal((m, n)))[0]
        V = np.linalg.qr(rng.standard_normal((n, n)))[0]
        M = (U * sigma) @ V.T
        H = scipy.linalg.qr(rng.standard_normal((n, l)), mode="economic")[0]
        bound = posterior_error_bound(M, H, r)
        out = range_finder(M, H)
        E = M - out.approximation()
        assert norm(E, "spectral") <= bound.bound_spectral * (1 + 1e-9)
        assert norm(E, "frobenius") <= bound.bound_frobenius * (1 + 1e-9)
        # Corollary form: factor relative to the optimal rank-r error
        opt2 = sigma[r]
        optF = np.sqrt(np.sum(sigma[r:] ** 2))
        assert norm(E, "spectral") <= bound.multiplier_spectral * opt2 * (1 + 1e-9)
        assert norm(E, "frobenius") <= bound.multiplier_frobenius * optF * (1 + 1e-9)


def test_posterior_bound_rescales_large_h():
    rng = np.random.default_rng(27)
    M = rng.standard_normal((15, 12))
    H = 50.0 * gaussian(12, 4, 28)
    bound = posterior_error_bound(M, H, 2)
    assert bound.h_scale > 1.0
    out = range_finder(M, H)
    assert norm(M - out.approximation(), "spectral") \
        <= bound.bound_spectral * (1 + 1e-9)


def test_posterior_bound_null_space_error():
    M = np.diag([5.0, 4.0, 3.0, 1e-8, 1e-8])
    H = np.zeros((5, 2))
    H[3, 0] = 1.0
    H[4, 1] = 1.0    # spans only the trailing singular directions
    with pytest.raises(ValueError, match="null space"):
        posterior_error_bound(M, H, 3)


def test_apriori_random_space_arithmetic():
    b = apriori_bounds(512, 160, 8, model="random_space_i")
    assert abs(b.factor - np.sqrt(1 + 16 * 512 / 160)) <= 1e-12
    assert abs(b.factor - 7.2249) <= 1e-3
    expected_fail = np.exp(-512 / 72) + np.exp(-152 / 20)
    assert abs(b.failure_prob - expected_fail) <= 1e-12
    assert b.failure_prob < 1.4e-3


def test_apriori_wide_sketch_arithmetic():
    b = apriori_bounds(1024, 64, 2, model="random_space_i")
    assert abs(b.factor - np.sqrt(257.0)) <= 1e-12
    assert abs(b.factor - 16.03) <= 1e-2


def test_apriori_factor_gaussian_arithmetic():
    b = apriori_bounds(512, 160, 8, model="factor_gaussian_i")
    assert abs(b.factor - np.sqrt(1 + 100 * 512 / 160)) <= 1e-12
    assert abs(b.factor - 17.92) <= 1e-2
    assert b.failure_prob >= np.exp(-(512 - 8) / 20)


def test_apriori_kappa_models():
    base = apriori_bounds(512, 160, 8, model="random_space_ii", kappa_h=1.0)
    worse = apriori_bounds(512, 160, 8, model="random_space_ii", kappa_h=3.0)
    assert worse.factor > base.factor
    assert abs(base.factor
               - apriori_bounds(512, 160, 8, model="random_space_i").factor) < 1e-12


def test_apriori_expectation_models():
    hmt = apriori_bounds(512, 12, 4, model="gaussian_hmt")
    assert abs(hmt.factor - np.sqrt(1 + 4 / 7)) <= 1e-12
    assert np.isnan(hmt.failure_prob)
    tyuc = apriori_bounds(512, 12, 4, model="tyuc", k=24)
    assert abs(tyuc.factor - np.sqrt(24 * 12 / (12 * 8))) <= 1e-12


def test_apriori_precondition_messages():
    with pytest.raises(ValueError, match="n > 36 r"):
        apriori_bounds(100, 80, 8, model="random_space_i")
    with pytest.raises(ValueError, match=r"22 \(r - 1\)"):
        apriori_bounds(512, 100, 8, model="random_space_i")
    with pytest.raises(ValueError, match="requires k"):
        apriori_bounds(512, 12, 4, model="tyuc")


def test_premult_bound_identity_block():
    X = np.zeros((10, 3))
    X[:3] = np.eye(3)
    F = SamplingMatrix(10, [0, 1, 2])
    assert abs(premult_bound(X, F) - 2.0) <= 1e-12


def test_premult_bound_gaussian_f():
    rng = np.random.default_rng(29)
    X = scipy.linalg.qr(rng.standard_normal((30, 5)), mode="economic")[0]
    F = rng.standard_normal((8, 30))
    val = premult_bound(X, F)
    assert np.isfinite(val) and val >= 1.0


def test_premult_bound_rank_deficient_raises():
    X = np.zeros((10, 2))
    X[:2] = np.eye(2)
    F = SamplingMatrix(10, [5, 6])      # selects only zero rows
    with pytest.raises(ValueError):
        premult_bound(X, F)


def test_all_four_algorithms_exact_on_factor_gaussian():
    M = factor_gaussian(40, 30, 5, side="two_sided", seed=30)
    F = gaussian(5, 40, 31)
    H = gaussian(30, 5, 32)
    approx = {
        "alg31": range_finder(M, H).approximation(),
        "alg32": transposed_range_finder(M, F).approximation(),
        "alg33": row_column_sketch(M, F, H).approximation(),
        "alg34": row_column_sketch(M, F, H, transposed=True).approximation(),
    }
    for name, A in approx.items():
        err = np.linalg.norm(M - A) / np.linalg.norm(M)
        assert err <= 1e-8, name
