"""Quick numerical self-checks: the two UKP evaluation routes agree, the
distance behaves as a pseudometric, and a hand-computed instance is
reproduced."""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ._rng import make_rng
from .kernels import KernelSpec, gram_matrix
from .metrics import ukp, ukp_eigenform

FAMILIES = ("linear", "rbf", "laplace")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.detail} ({self.seconds:.2f}s)"


def random_kernel(family: str, dim: int, rng: np.random.Generator) -> KernelSpec:
    if family == "linear":
        return KernelSpec.linear()
    # scale the bandwidth with the typical pairwise distance so Grams are informative
    h = dim * rng.uniform(0.5, 2.0)
    return KernelSpec(family, h)


def random_gram_pair(n: int, family: str, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    k, l = rng.integers(1, 13, size=2)
    X = rng.standard_normal((n, k))
    Y = rng.standard_normal((n, l))
    return gram_matrix(random_kernel(family, k, rng), X), gram_matrix(random_kernel(family, l, rng), Y)


def rel_close(a: float, b: float, rtol: float) -> bool:
    scale = max(abs(a), abs(b))
    return abs(a - b) <= rtol * scale if scale > 0 else True


def check_dual_path(trials: int = 200, seed: int = 0) -> CheckResult:
    t0 = time.perf_counter()
    worst = 0.0
    failures = 0
    for t in range(trials):
        rng = make_rng(seed, 10, t)
        n = int(rng.integers(5, 65))
        family = FAMILIES[t % 3]
        lam = (0.01, 1.0)[(t // 3) % 2]
        Kphi, Kpsi = random_gram_pair(n, family, rng)
        a = ukp(Kphi, Kpsi, lam).value
        b = ukp_eigenform(Kphi, Kpsi, lam).value
        rel = abs(a - b) / max(abs(a), abs(b), 1e-300)
        worst = max(worst, rel)
        failures += not rel_close(a, b, 1e-8)
    return CheckResult("dual-path oracle", failures == 0,
                       f"{trials} pairs, worst relative gap {worst:.2e} (tol 1e-8)",
                       time.perf_counter() - t0)


def check_pseudometric(trials: int = 500, seed: int = 1) -> CheckResult:
    t0 = time.perf_counter()
    worst_triangle = -np.inf
    ok = True
    for t in range(trials):
        rng = make_rng(seed, 20, t)
        n = int(rng.integers(4, 33))
        family = FAMILIES[t % 3]
        lam = float(10 ** rng.uniform(-2, 0))
        Ks = [gram_matrix(random_kernel(family, k, rng), rng.standard_normal((n, k)))
              for k in rng.integers(1, 9, size=3)]
        d = {(i, j): ukp(Ks[i], Ks[j], lam).value for i in range(3) for j in range(3)}
        ok &= all(d[i, i] == 0.0 for i in range(3))
        ok &= all(v >= 0.0 for v in d.values())
        ok &= all(d[i, j] == d[j, i] for i in range(3) for j in range(3))
        for i, j, r in ((0, 1, 2), (0, 2, 1), (1, 2, 0)):
            excess = d[i, j] - d[i, r] - d[r, j]
            worst_triangle = max(worst_triangle, excess)
    ok &= worst_triangle <= 1e-8
    return CheckResult("pseudometric axioms", bool(ok),
                       f"{trials} triples, max triangle excess {worst_triangle:.2e} (tol 1e-8)",
                       time.perf_counter() - t0)


def check_worked_instance() -> CheckResult:
    t0 = time.perf_counter()
    Kphi = np.eye(2)
    Kpsi = np.ones((2, 2))
    expected = np.sqrt(5.0 / 18.0)
    a = ukp(Kphi, Kpsi, 0.5).value
    b = ukp_eigenform(Kphi, Kpsi, 0.5).value
    ok = abs(a - expected) <= 1e-12 and abs(b - expected) <= 1e-12
    return CheckResult("worked 2x2 instance", ok,
                       f"gram form {a:.17g}, eigen form {b:.17g}, expected {expected:.17g}",
                       time.perf_counter() - t0)


def run_all() -> list[CheckResult]:
    return [check_dual_path(), check_pseudometric(), check_worked_instance()]
