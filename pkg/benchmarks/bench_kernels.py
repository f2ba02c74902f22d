"""Time the numba kernels against the numpy fallbacks on the same inputs.

    python benchmarks/bench_kernels.py [--repeat 5] [--size 200000]
"""

import argparse
import time

import numpy as np

from signedpartitions import _kernels


def _best(fn, args, repeat):
    fn(*args)  # warm-up (triggers compilation for the numba variant)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=200_000)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(12345)
    n = args.size
    coeffs = rng.standard_normal(n + 1)
    inputs = {
        "compensated_sum": (coeffs,),
        "alternating_sum": (coeffs,),
        "series_at_many": (coeffs, np.linspace(1e-4, 1e-2, 64), 1),
        "phase_sums": (coeffs[: n // 10], np.linspace(0, 1, 16, endpoint=False)),
        "weight_coeffs": (rng.choice([-1, 0, 1], size=n + 1).astype(np.int64), n),
    }
    impls = _kernels.IMPLEMENTATIONS
    if "numba" not in impls:
        print("numba is not installed; only the numpy path is available")
        return
    print(f"{'kernel':<22}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}")
    for name, args_ in inputs.items():
        fast, slow = impls["numba"][name], impls["numpy"][name]
        a = _best(fast, args_, args.repeat) * 1e3
        b = _best(slow, args_, args.repeat) * 1e3
        print(f"{name:<22}{a:>12.3f}{b:>12.3f}{b / a:>10.1f}")


if __name__ == "__main__":
    main()
