"""Compare the compiled and pure-Python kernels.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import math
import timeit

import numpy as np

from trajint._kernels import _pure

try:
    from trajint._kernels import _fast
except ImportError:
    _fast = None


def _cases(rng: np.random.Generator, k: int, n: int):
    return [(list(rng.normal(size=k)), list(rng.normal(size=k))) for _ in range(n)]


def bench(repeat: int) -> None:
    rng = np.random.default_rng(0)
    backends = [("python", _pure)] + ([("cython", _fast)] if _fast is not None else [])
    print(f"{'kernel':<28}{'backend':<10}{'seconds':>10}")
    for k in (2, 3, 8):
        cases = _cases(rng, k, 2000)
        for name, mod in backends:
            t = min(timeit.repeat(
                lambda: [mod.pl_minimize(d, v, -math.inf, math.inf, 1e-9) for d, v in cases],
                number=1, repeat=repeat,
            ))
            print(f"{f'pl_minimize k={k} x2000':<28}{name:<10}{t:>10.4f}")
    d, v = _cases(rng, 3, 1)[0]
    for n in (10_000, 2_000_000):
        for name, mod in backends:
            t = min(timeit.repeat(lambda: mod.grid_scan(d, v, -100.0, 200.0 / n, n), number=1, repeat=repeat))
            print(f"{f'grid_scan n={n}':<28}{name:<10}{t:>10.4f}")
    if _fast is None:
        print("compiled kernels not built; only the fallback was timed")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    bench(ap.parse_args().repeat)
