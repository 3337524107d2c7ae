import time

import numpy as np
import pytest

from repmetric import ConfigError, DimensionError, KernelSpec, gram_matrix, gulp_primal, ukp
from repmetric.approx import (
    ApproxConfig,
    Provenance,
    build_factor,
    exact_factor,
    nystrom_map,
    rff_map,
    ukp_lowrank,
)


class TestRFF:
    def test_shape_and_determinism(self, rng):
        X = rng.standard_normal((10, 3))
        a = rff_map(KernelSpec.rbf(1.0), X, 16, seed=4)
        b = rff_map(KernelSpec.rbf(1.0), X, 16, seed=4)
        assert a.Z.shape == (10, 16)
        assert a.provenance is Provenance.RANDOM_FEATURES
        assert np.array_equal(a.Z, b.Z)
        assert not np.array_equal(a.Z, rff_map(KernelSpec.rbf(1.0), X, 16, seed=5).Z)

    @pytest.mark.parametrize("spec", [KernelSpec.rbf(1.5), KernelSpec.laplace(1.5)], ids=["rbf", "laplace"])
    def test_monte_carlo_accuracy(self, spec, rng):
        X = rng.standard_normal((32, 3)) * 0.7
        Z = rff_map(spec, X, 8192, seed=0)
        assert np.max(np.abs(Z.gram() - gram_matrix(spec, X))) <= 0.05

    def test_linear_rejected(self, rng):
        with pytest.raises(ConfigError):
            rff_map(KernelSpec.linear(), rng.standard_normal((4, 2)), 8, 0)

    def test_bad_rank(self, rng):
        with pytest.raises(ConfigError):
            rff_map(KernelSpec.rbf(1.0), rng.standard_normal((4, 2)), 0, 0)


class TestNystrom:
    @pytest.mark.parametrize("spec", [KernelSpec.rbf(1.0), KernelSpec.laplace(2.0)], ids=["rbf", "laplace"])
    def test_full_rank_recovers_gram(self, spec, rng):
        X = rng.standard_normal((40, 3))
        Z = nystrom_map(spec, X, 40, seed=1)
        assert np.max(np.abs(Z.gram() - gram_matrix(spec, X))) <= 1e-6

    def test_rank_one(self, rng):
        Z = nystrom_map(KernelSpec.rbf(1.0), rng.standard_normal((9, 2)), 1, seed=0)
        assert Z.Z.shape == (9, 1)
        assert np.linalg.matrix_rank(Z.gram()) == 1

    def test_landmarks_seeded(self, rng):
        X = rng.standard_normal((30, 2))
        a = nystrom_map(KernelSpec.rbf(1.0), X, 5, seed=9)
        b = nystrom_map(KernelSpec.rbf(1.0), X, 5, seed=9)
        assert np.array_equal(a.Z, b.Z)

    def test_duplicate_landmarks_survive(self):
        X = np.zeros((6, 2))
        Z = nystrom_map(KernelSpec.rbf(1.0), X, 4, seed=0)
        np.testing.assert_allclose(Z.gram(), np.ones((6, 6)), atol=1e-12)

    def test_rank_above_n(self, rng):
        with pytest.raises(ConfigError):
            nystrom_map(KernelSpec.rbf(1.0), rng.standard_normal((5, 2)), 6, 0)


def test_push_through_identity(rng):
    Z = rng.standard_normal((32, 8))
    for c in (0.1, 1.0, 10.0):
        lhs = Z @ Z.T @ np.linalg.inv(Z @ Z.T + c * np.eye(32))
        rhs = Z @ np.linalg.inv(Z.T @ Z + c * np.eye(8)) @ Z.T
        assert np.linalg.norm(lhs - rhs) <= 1e-9


class TestUKPLowRank:
    def test_identical_factors(self, rng):
        Z = rff_map(KernelSpec.rbf(1.0), rng.standard_normal((20, 3)), 32, 0)
        assert ukp_lowrank(Z, Z, 0.1).value == 0.0

    def test_symmetric(self, rng):
        A = rng.standard_normal((25, 4))
        B = rng.standard_normal((25, 7))
        assert ukp_lowrank(A, B, 0.1).value == pytest.approx(ukp_lowrank(B, A, 0.1).value, rel=1e-12)

    @pytest.mark.parametrize("n,k,l", [(50, 4, 6), (8, 12, 20)])
    def test_linear_exact_factor_matches_gulp(self, n, k, l, rng):
        X, Y = rng.standard_normal((n, k)), rng.standard_normal((n, l))
        low = ukp_lowrank(exact_factor(X), exact_factor(Y), 0.05).value
        assert low == pytest.approx(gulp_primal(X, Y, 0.05).value, rel=1e-8)

    def test_low_rank_matches_dense_gram(self, rng):
        Za, Zb = rng.standard_normal((30, 5)), rng.standard_normal((30, 3))
        dense = ukp(Za @ Za.T, Zb @ Zb.T, 0.02).value
        assert ukp_lowrank(Za, Zb, 0.02).value == pytest.approx(dense, rel=1e-9)

    def test_nystrom_full_rank_matches_dense(self, rng):
        spec = KernelSpec.rbf(2.0)
        X, Y = rng.standard_normal((64, 3)), rng.standard_normal((64, 5))
        dense = ukp(gram_matrix(spec, X), gram_matrix(spec, Y), 0.01).value
        low = ukp_lowrank(nystrom_map(spec, X, 64, 0), nystrom_map(spec, Y, 64, 1), 0.01).value
        assert abs(low - dense) <= 1e-6

    def test_sample_mismatch(self, rng):
        with pytest.raises(DimensionError):
            ukp_lowrank(rng.standard_normal((5, 2)), rng.standard_normal((6, 2)), 0.1)

    def test_rff_error_shrinks_with_rank(self):
        rng = np.random.default_rng(7)
        spec = KernelSpec.rbf(3.0)
        X, Y = rng.standard_normal((128, 3)), rng.standard_normal((128, 4))
        dense = ukp(gram_matrix(spec, X), gram_matrix(spec, Y), 0.01).value
        errors = {D: [] for D in (64, 4096)}
        for seed in range(20):
            for D in errors:
                low = ukp_lowrank(rff_map(spec, X, D, seed), rff_map(spec, Y, D, seed + 1000), 0.01).value
                errors[D].append(abs(low - dense))
        assert np.median(errors[4096]) < np.median(errors[64])


class TestBuildFactor:
    def test_linear_defaults_to_exact(self, rng):
        X = rng.standard_normal((6, 2))
        f = build_factor(KernelSpec.linear(), X, ApproxConfig("rff", 4, 0))
        assert f.provenance is Provenance.EXACT
        assert np.array_equal(f.Z, X)

    def test_dispatch(self, rng):
        X = rng.standard_normal((6, 2))
        assert build_factor(KernelSpec.rbf(1.0), X, ApproxConfig("nystrom", 3, 0)).provenance is Provenance.NYSTROM
        assert build_factor(KernelSpec.rbf(1.0), X, ApproxConfig("rff", 3, 0)).provenance is Provenance.RANDOM_FEATURES

    def test_config_validation(self):
        with pytest.raises(ConfigError):
            ApproxConfig("rff", 0, 0)
        with pytest.raises(ValueError):
            ApproxConfig("svd", 4, 0)


@pytest.mark.slow
def test_lowrank_speedup():
    rng = np.random.default_rng(3)
    spec = KernelSpec.rbf(4.0)
    X, Y = rng.standard_normal((2048, 4)), rng.standard_normal((2048, 6))
    t0 = time.perf_counter()
    ukp(gram_matrix(spec, X), gram_matrix(spec, Y), 0.01)
    dense = time.perf_counter() - t0
    t0 = time.perf_counter()
    ukp_lowrank(nystrom_map(spec, X, 64, 0), nystrom_map(spec, Y, 64, 1), 0.01)
    low = time.perf_counter() - t0
    assert dense >= 10 * low
