"""Compare the compiled and pure-Python sweep kernels.

    python benchmarks/bench_kernels.py [--repeat 3]

Times ``successor_table`` + ``label_cycles`` (one exhaustive sweep) for a
few parameter points and checks that both backends agree.
"""

import argparse
import time

import numpy as np

from contour_chain import kernels

POINTS = [(3, 5, 2), (5, 4, 3), (4, 8, 5), (6, 4, 3), (6, 5, 3)]


def sweep(backend, n, m, l):
    succ, moves, adm = backend.successor_table(n, m, l)
    rep, trans = backend.label_cycles(succ, adm)
    return succ, moves, adm, rep, trans


def best_of(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    names = kernels.available_backends()
    print(f"backends: {', '.join(names)}")
    print(f"{'N,m,l':>10} {'states':>9} " + " ".join(f"{n:>10}" for n in names) + "   speedup")
    for n, m, l in POINTS:
        timings = {}
        results = {}
        for name in names:
            backend = kernels.load_backend(name)
            timings[name], results[name] = best_of(lambda: sweep(backend, n, m, l), args.repeat)
        ref = results["python"]
        for name in names:
            for a, b in zip(results[name], ref):
                np.testing.assert_array_equal(a, b)
        speedup = timings["python"] / timings[names[0]] if names[0] != "python" else 1.0
        row = " ".join(f"{timings[name]:>9.3f}s" for name in names)
        print(f"{f'{n},{m},{l}':>10} {(2 * m) ** n:>9} {row}   {speedup:6.1f}x")


if __name__ == "__main__":
    main()
