"""Compare the compiled kernels with the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--sizes 3 8 16]

Times the three kernels on random SPD input and the three-asset completion
end to end, once per backend.
"""
import argparse
import timeit

import numpy as np

from corrstress import kernels
from corrstress.completion import CompletionSpec, complete


def random_spd(rng, n):
    a = rng.standard_normal((n, n))
    return a @ a.T + n * np.eye(n)


def kernel_cases(n, rng):
    s, c = random_spd(rng, n), random_spd(rng, n)
    w, v = np.linalg.eigh(s)
    white = (v / np.sqrt(w)) @ v.T
    return {
        "det": lambda: kernels.det(c),
        "sym_eigvalsh": lambda: kernels.sym_eigvalsh(c),
        "whitened_log_sq": lambda: kernels.whitened_log_sq(white, c),
    }


def completion_case():
    base = 1e-4 * np.diag([144.0, 36.0, 625.0])
    pins = {(0, 0): 144e-4, (1, 1): 36e-4, (0, 1): 7.2e-4}
    spec = CompletionSpec(base, pins)
    return lambda: complete(spec)


def best_of(fn, repeat):
    timer = timeit.Timer(fn)
    number, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=number)) / number


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--sizes", type=int, nargs="+", default=[3, 8, 16])
    args = p.parse_args(argv)

    backends = ["python"] + (["compiled"] if kernels.COMPILED_AVAILABLE else [])
    if len(backends) == 1:
        print("compiled extension not built; timing the fallback only")
    previous = kernels.BACKEND
    rows = []
    try:
        for n in args.sizes:
            for name in ("det", "sym_eigvalsh", "whitened_log_sq"):
                times = {}
                for b in backends:
                    kernels.set_backend(b)
                    fn = kernel_cases(n, np.random.default_rng(n))[name]
                    times[b] = best_of(fn, args.repeat)
                rows.append((f"{name} n={n}", times))
        times = {}
        for b in backends:
            kernels.set_backend(b)
            times[b] = best_of(completion_case(), args.repeat)
        rows.append(("complete (3 assets, 8 restarts)", times))
    finally:
        kernels.set_backend(previous)

    print(f"{'case':<34}" + "".join(f"{b:>14}" for b in backends) + f"{'speedup':>10}")
    for label, times in rows:
        cells = "".join(f"{times[b] * 1e6:>12.1f}us" for b in backends)
        speed = times["python"] / times["compiled"] if "compiled" in times else float("nan")
        print(f"{label:<34}{cells}{speed:>9.2f}x")


if __name__ == "__main__":
    main()
