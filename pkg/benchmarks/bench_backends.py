"""Time the numba and numpy hot kernels side by side.

    python benchmarks/bench_backends.py [--sizes 256,512,1024,2048] [--dim 32] [--repeats 5]

Reports the best-of-``repeats`` wall time per kernel and size, the speedup
of numba over numpy, and the largest absolute disagreement between the two.
A dense vs low-rank UKP comparison is printed at the end.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from repmetric import KernelSpec, gram_matrix, ukp
from repmetric import _backend
from repmetric.approx import nystrom_map, ukp_lowrank


def best_of(fn, repeats: int) -> tuple[float, object]:
    best = np.inf
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_kernels(sizes: list[int], dim: int, repeats: int) -> None:
    names = _backend.available()
    if "numba" not in names:
        print("numba is not importable; only the numpy backend is available")
    rng = np.random.default_rng(0)
    header = f"{'kernel':<16}{'n':>6}" + "".join(f"{b + ' (s)':>14}" for b in names)
    if len(names) == 2:
        header += f"{'speedup':>10}{'max |diff|':>12}"
    print(header)
    for n in sizes:
        X = rng.standard_normal((n, dim))
        A = rng.standard_normal((n, n))
        B = rng.standard_normal((n, n))
        cases = {
            "sqeuclidean": lambda mod: mod.sqeuclidean_gram(X),
            "cityblock": lambda mod: mod.cityblock_gram(X),
            "trace_product": lambda mod: mod.trace_product(A, B),
        }
        for label, fn in cases.items():
            times, outs = [], []
            for name in names:
                mod = _backend.get(name)
                fn(mod)  # warm-up, includes JIT compilation for numba
                t, out = best_of(lambda: fn(mod), repeats)
                times.append(t)
                outs.append(np.asarray(out))
            row = f"{label:<16}{n:>6}" + "".join(f"{t:>14.5f}" for t in times)
            if len(names) == 2:
                row += f"{times[1] / times[0]:>9.1f}x{np.max(np.abs(outs[0] - outs[1])):>12.1e}"
            print(row)


def bench_lowrank(n: int, D: int, repeats: int) -> None:
    rng = np.random.default_rng(1)
    spec = KernelSpec.rbf(4.0)
    X, Y = rng.standard_normal((n, 4)), rng.standard_normal((n, 6))
    t_dense, dense = best_of(lambda: ukp(gram_matrix(spec, X), gram_matrix(spec, Y), 0.01).value, repeats)
    t_low, low = best_of(
        lambda: ukp_lowrank(nystrom_map(spec, X, D, 0), nystrom_map(spec, Y, D, 1), 0.01).value, repeats)
    print(f"\nukp n={n}: dense {t_dense:.3f}s ({dense:.6f}), Nystrom D={D} {t_low:.4f}s ({low:.6f}), "
          f"speedup {t_dense / t_low:.0f}x")


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", default="256,512,1024,2048")
    p.add_argument("--dim", type=int, default=32)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--lowrank-n", type=int, default=2048)
    p.add_argument("--lowrank-D", type=int, default=64)
    args = p.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    bench_kernels(sizes, args.dim, args.repeats)
    bench_lowrank(args.lowrank_n, args.lowrank_D, max(1, args.repeats // 2))


if __name__ == "__main__":
    main()
