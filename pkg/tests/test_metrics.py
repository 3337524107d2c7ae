import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from repmetric import (
    ConfigError,
    DegenerateInputError,
    DimensionError,
    KernelSpec,
    Metric,
    MetricConfig,
    cca,
    center_gram,
    cka,
    gram_matrix,
    gulp_primal,
    rcca,
    ukp,
    ukp_eigenform,
)
from repmetric.metrics import compute, rcca_eigenform

KERNELS = [KernelSpec.linear(), KernelSpec.rbf(2.0), KernelSpec.laplace(2.0)]


def brute_ukp(Kphi, Kpsi, lam):
    n = Kphi.shape[0]
    Hphi = Kphi @ np.linalg.inv(Kphi + n * lam * np.eye(n))
    Hpsi = Kpsi @ np.linalg.inv(Kpsi + n * lam * np.eye(n))
    D = Hphi - Hpsi
    return np.sqrt(max(np.trace(D @ D), 0.0))


def pair(rng, spec, n=20, k=4, l=6):
    return gram_matrix(spec, rng.standard_normal((n, k))), gram_matrix(spec, rng.standard_normal((n, l)))


class TestWorkedInstance:
    # K_phi = I, K_psi = all ones, lam = 1/2: H_phi = I/2 and H_psi = J/3,
    # so Tr(H_phi^2) = 1/2, Tr(H_psi^2) = 4/9, Tr(H_phi H_psi) = 1/3
    def test_ukp(self):
        expected = np.sqrt(5.0 / 18.0)
        assert abs(ukp(np.eye(2), np.ones((2, 2)), 0.5).value - expected) <= 1e-12
        assert abs(ukp_eigenform(np.eye(2), np.ones((2, 2)), 0.5).value - expected) <= 1e-12

    def test_rcca(self):
        assert rcca(np.eye(2), np.ones((2, 2)), 0.5) == pytest.approx(1 / 3, abs=1e-15)
        assert rcca_eigenform(np.eye(2), np.ones((2, 2)), 0.5) == pytest.approx(1 / 3, abs=1e-15)

    def test_squared_field(self):
        v = ukp(np.eye(2), np.ones((2, 2)), 0.5)
        assert v.squared == pytest.approx(5 / 18, abs=1e-15)
        assert float(v) == v.value


class TestUKP:
    @pytest.mark.parametrize("spec", KERNELS, ids=lambda s: s.family.value)
    @pytest.mark.parametrize("lam", [0.01, 1.0])
    def test_brute_force_oracle(self, spec, lam, rng):
        Kphi, Kpsi = pair(rng, spec)
        assert ukp(Kphi, Kpsi, lam).value == pytest.approx(brute_ukp(Kphi, Kpsi, lam), rel=1e-9)

    @pytest.mark.parametrize("spec", KERNELS, ids=lambda s: s.family.value)
    def test_eigenform_agrees(self, spec, rng):
        Kphi, Kpsi = pair(rng, spec, n=40)
        a = ukp(Kphi, Kpsi, 0.05).value
        b = ukp_eigenform(Kphi, Kpsi, 0.05).value
        assert abs(a - b) <= 1e-8 * max(a, b)

    def test_self_distance_exactly_zero(self, rng):
        K, _ = pair(rng, KernelSpec.rbf(1.0))
        assert ukp(K, K, 0.1).value == 0.0
        assert ukp(K, K.copy(), 0.1).value == 0.0

    def test_symmetry_exact(self, backend, rng):
        Kphi, Kpsi = pair(rng, KernelSpec.laplace(1.0), n=30)
        assert ukp(Kphi, Kpsi, 0.1).value == ukp(Kpsi, Kphi, 0.1).value

    def test_zero_gram_against_identity(self):
        # H = 0 for the zero kernel; H = I/(1 + n lam) for the identity
        n, lam = 4, 0.25
        assert ukp(np.zeros((n, n)), np.eye(n), lam).value == pytest.approx(np.sqrt(n) / (1 + n * lam), rel=1e-14)

    def test_bounded_by_sqrt_n(self, rng):
        Kphi, Kpsi = pair(rng, KernelSpec.rbf(0.5), n=25)
        assert ukp(Kphi, Kpsi, 1e-4).value <= np.sqrt(25)

    def test_polarization(self, rng):
        for spec in KERNELS:
            Kphi, Kpsi = pair(rng, spec)
            sq = ukp(Kphi, Kpsi, 0.1).squared
            pol = rcca(Kphi, Kphi, 0.1) + rcca(Kpsi, Kpsi, 0.1) - 2 * rcca(Kphi, Kpsi, 0.1)
            assert abs(sq - pol) <= 1e-10

    def test_size_mismatch(self):
        with pytest.raises(DimensionError):
            ukp(np.eye(3), np.eye(4), 0.1)

    def test_bad_lambda(self):
        with pytest.raises(ConfigError):
            ukp(np.eye(3), np.eye(3), 0.0)

    def test_not_symmetric(self):
        with pytest.raises(DimensionError):
            ukp(np.array([[1.0, 0.5], [0.0, 1.0]]), np.eye(2), 0.1)


class TestRCCA:
    def test_cauchy_schwarz(self, rng):
        for spec in KERNELS:
            Kphi, Kpsi = pair(rng, spec)
            s = rcca(Kphi, Kpsi, 0.05)
            assert 0.0 <= s <= np.sqrt(rcca(Kphi, Kphi, 0.05) * rcca(Kpsi, Kpsi, 0.05)) + 1e-12

    def test_eigenform(self, rng):
        Kphi, Kpsi = pair(rng, KernelSpec.rbf(1.0), n=35)
        assert rcca(Kphi, Kpsi, 0.1) == pytest.approx(rcca_eigenform(Kphi, Kpsi, 0.1), rel=1e-10)


class TestCKA:
    def test_self_is_one(self, rng):
        K, _ = pair(rng, KernelSpec.rbf(1.0))
        assert cka(K, K) == pytest.approx(1.0, abs=1e-14)

    def test_scale_invariant(self, rng):
        Kphi, Kpsi = pair(rng, KernelSpec.laplace(1.0))
        assert cka(3.5 * Kphi, Kpsi) == pytest.approx(cka(Kphi, Kpsi), rel=1e-13)

    def test_two_point_sample(self):
        # a centred 2x2 Gram is a multiple of [[1,-1],[-1,1]]
        assert cka(np.array([[2.0, 0.3], [0.3, 1.0]]), np.array([[1.0, 0.9], [0.9, 5.0]])) == pytest.approx(1.0)

    def test_brute_force(self, rng):
        Kphi, Kpsi = pair(rng, KernelSpec.linear(), n=15)
        n = 15
        C = np.eye(n) - np.ones((n, n)) / n
        A, B = C @ Kphi @ C, C @ Kpsi @ C
        expected = np.sum(A * B) / np.sqrt(np.sum(A * A) * np.sum(B * B))
        assert cka(Kphi, Kpsi) == pytest.approx(expected, rel=1e-12)

    def test_range(self, rng):
        Kphi, Kpsi = pair(rng, KernelSpec.rbf(1.0))
        assert 0.0 <= cka(Kphi, Kpsi) <= 1.0

    def test_constant_gram(self):
        with pytest.raises(DegenerateInputError):
            cka(np.ones((3, 3)), np.eye(3))

    def test_large_lambda_limit(self, rng):
        for spec in KERNELS:
            Kphi, Kpsi = (center_gram(K) for K in pair(rng, spec, n=25))
            mu = max(np.linalg.eigvalsh(Kphi)[-1], np.linalg.eigvalsh(Kpsi)[-1])
            lam = 1e6 * mu / 25
            norm = rcca(Kphi, Kpsi, lam) / np.sqrt(rcca(Kphi, Kphi, lam) * rcca(Kpsi, Kpsi, lam))
            assert abs(norm - cka(Kphi, Kpsi)) <= 1e-4


class TestGULP:
    @pytest.mark.parametrize("n,k,l", [(60, 5, 8), (6, 12, 15), (10, 10, 3)])
    @pytest.mark.parametrize("lam", [0.01, 1.0])
    def test_primal_matches_dual(self, n, k, l, lam, rng):
        X, Y = rng.standard_normal((n, k)), rng.standard_normal((n, l))
        dual = ukp(X @ X.T, Y @ Y.T, lam).value
        primal = gulp_primal(X, Y, lam).value
        assert abs(primal - dual) <= 1e-8 * max(primal, dual)

    def test_orthogonal_invariance(self, rng):
        X = rng.standard_normal((40, 6))
        Q, _ = np.linalg.qr(rng.standard_normal((6, 6)))
        assert gulp_primal(X, X @ Q, 0.1).value <= 1e-7

    def test_config_attached(self, rng):
        X = rng.standard_normal((10, 2))
        v = gulp_primal(X, X, 0.5)
        assert v.config.metric is Metric.GULP
        assert v.config.lam == 0.5

    def test_sample_mismatch(self, rng):
        with pytest.raises(DimensionError):
            gulp_primal(rng.standard_normal((5, 2)), rng.standard_normal((6, 2)), 0.1)


def brute_cca(X, Y):
    Px = X @ np.linalg.pinv(X)
    Py = Y @ np.linalg.pinv(Y)
    return np.trace(Px @ Py)


class TestCCA:
    def test_self_equals_rank(self, rng):
        X = rng.standard_normal((20, 3)) @ rng.standard_normal((3, 7))
        assert cca(X, X) == pytest.approx(3.0, abs=1e-10)

    def test_orthogonal_supports(self):
        X = np.array([[1.0], [0.0], [0.0]])
        Y = np.array([[0.0], [1.0], [0.0]])
        assert cca(X, Y) == pytest.approx(0.0, abs=1e-15)

    def test_invertible_map_invariance(self, rng):
        X, Y = rng.standard_normal((30, 4)), rng.standard_normal((30, 5))
        A = rng.standard_normal((4, 4)) + 3 * np.eye(4)
        assert cca(X @ A, Y) == pytest.approx(cca(X, Y), rel=1e-9)

    def test_brute_force(self, rng):
        X, Y = rng.standard_normal((25, 4)), rng.standard_normal((25, 6))
        value = cca(X, Y)
        assert value == pytest.approx(brute_cca(X, Y), rel=1e-9)
        assert 0.0 <= value <= 4.0

    def test_zero_representation(self):
        assert cca(np.zeros((4, 2)), np.eye(4)) == 0.0


class TestMetricConfig:
    def test_gulp_forces_linear(self):
        cfg = MetricConfig("gulp", lam=0.1)
        assert cfg.kernel == KernelSpec.linear()
        with pytest.raises(ConfigError):
            MetricConfig("gulp", KernelSpec.rbf(1.0), 0.1)

    def test_lambda_rules(self):
        with pytest.raises(ConfigError):
            MetricConfig("ukp", KernelSpec.rbf(1.0))
        with pytest.raises(ConfigError):
            MetricConfig("cka", KernelSpec.rbf(1.0), 0.1)
        with pytest.raises(ConfigError):
            MetricConfig("cca", lam=0.1)
        with pytest.raises(ConfigError):
            MetricConfig("ukp", None, 0.1)

    def test_unknown_metric(self):
        with pytest.raises(ConfigError):
            MetricConfig("procrustes", KernelSpec.linear(), 0.1)

    def test_to_dict(self):
        assert MetricConfig("ukp", KernelSpec.rbf(0.1), 0.01).to_dict() == {
            "name": "ukp", "kernel": "rbf", "bandwidth": 0.1, "lambda": 0.01}

    def test_compute_dispatch(self, rng):
        X, Y = rng.standard_normal((12, 3)), rng.standard_normal((12, 4))
        spec = KernelSpec.rbf(1.0)
        Kx, Ky = gram_matrix(spec, X), gram_matrix(spec, Y)
        assert compute(MetricConfig("ukp", spec, 0.1), X, Y) == ukp(Kx, Ky, 0.1).value
        assert compute(MetricConfig("rcca", spec, 0.1), X, Y) == rcca(Kx, Ky, 0.1)
        assert compute(MetricConfig("cka", spec), X, Y) == cka(Kx, Ky)
        assert compute(MetricConfig("gulp", lam=0.1), X, Y) == gulp_primal(X, Y, 0.1).value
        assert compute(MetricConfig("cca"), X, Y) == cca(X, Y)


def no_numeric_warnings(fn):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        return fn()


@settings(max_examples=40, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    n=st.integers(3, 18),
    family=st.sampled_from(["linear", "rbf", "laplace"]),
    lam=st.floats(1e-3, 10.0),
)
def test_pseudometric_properties(seed, n, family, lam):
    rng = np.random.default_rng(seed)
    spec = KernelSpec.linear() if family == "linear" else KernelSpec(family, 2.0)
    Ks = [gram_matrix(spec, rng.standard_normal((n, int(k)))) for k in rng.integers(1, 6, size=3)]
    d = [[no_numeric_warnings(lambda: ukp(Ks[i], Ks[j], lam).value) for j in range(3)] for i in range(3)]
    for i in range(3):
        assert d[i][i] == 0.0
        for j in range(3):
            assert d[i][j] >= 0.0
            assert d[i][j] == d[j][i]
            for r in range(3):
                assert d[i][j] <= d[i][r] + d[r][j] + 1e-8
