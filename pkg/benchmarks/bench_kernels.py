"""Compiled against pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints one line per kernel with the best time per call for each backend.
"""

import argparse
import timeit

import numpy as np

from spinchain import kernels


def cases():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h4 = (a + a.conj().T) / 2
    b = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    h8 = (b + b.conj().T) / 2
    stack = np.array([h4] * 200)
    return {
        "bessel_row n=200 x=50": lambda be: kernels.bessel_row_values(200, 50.0, backend=be),
        "bessel_row n=1000 x=500": lambda be: kernels.bessel_row_values(1000, 500.0, backend=be),
        "jacobi 4x4": lambda be: kernels.jacobi_eigh(h4, backend=be),
        "jacobi 8x8": lambda be: kernels.jacobi_eigh(h8, backend=be),
        "jacobi batch 200x4x4": lambda be: kernels.jacobi_eigh_many(stack, backend=be),
    }


def best(fn, repeat):
    timer = timeit.Timer(fn)
    n, _ = timer.autorange()
    return min(timer.repeat(repeat, n)) / n


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])
    print(f"{'kernel':26s}" + "".join(f"{b:>14s}" for b in backends) + ("   speedup" if len(backends) == 2 else ""))
    for name, fn in cases().items():
        times = [best(lambda be=be: fn(be), args.repeat) for be in backends]
        line = f"{name:26s}" + "".join(f"{t * 1e6:11.1f} us" for t in times)
        if len(times) == 2:
            line += f"   {times[0] / times[1]:7.1f}x"
        print(line)
    if len(backends) == 1:
        print("compiled extension not built; only the Python backend was timed")


if __name__ == "__main__":
    main()
