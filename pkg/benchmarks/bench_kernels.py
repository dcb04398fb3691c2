"""Time the compiled and pure-Python kernels on the same inputs.

Run with ``python3 benchmarks/bench_kernels.py [--n N] [--repeat R]``.
"""

import argparse
import timeit

import numpy as np

from kolakoski import kernels


def cases(n):
    ref = kernels.get_backend("python")
    u = ref.kolakoski_self(2, 1, n) - 1
    w = np.array([1.0, -0.5 + 0.25j], dtype=np.complex128)
    return {
        "kolakoski_self": lambda k: k.kolakoski_self(2, 1, n),
        "kolakoski_alternating": lambda k: k.kolakoski_alternating(2, 1, n),
        "exp_sum": lambda k: k.exp_sum(u, w, 1, 9),
        "autocorrelation": lambda k: k.autocorrelation(u, w, 7),
        "run_lengths": lambda k: k.run_lengths(u),
        "occurrence_gcd": lambda k: k.occurrence_gcd(u, 2),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=200_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    backends = sorted(kernels.BACKENDS)
    print(f"n = {args.n}, best of {args.repeat}, active backend: {kernels.BACKEND}")
    print(f"{'kernel':<24}" + "".join(f"{b:>14}" for b in backends) + ("   speedup" if len(backends) > 1 else ""))
    for name, fn in cases(args.n).items():
        times = {}
        for b in backends:
            k = kernels.get_backend(b)
            times[b] = min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat))
        row = f"{name:<24}" + "".join(f"{times[b] * 1e3:>12.2f}ms" for b in backends)
        if "cython" in times and "python" in times:
            row += f"   {times['python'] / times['cython']:>7.1f}x"
        print(row)


if __name__ == "__main__":
    main()
