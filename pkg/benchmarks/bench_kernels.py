"""Time the compiled and numpy kernel backends on typical workloads.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from xbicorr import kernels
from xbicorr.bicorr import lag_pairs


def workloads(rng):
    x = rng.standard_normal(2000)
    X, Y = rng.standard_normal((152, 28)), rng.standard_normal((152, 28))
    pairs = np.asarray(lag_pairs(3, "dof"), dtype=np.intp)
    big = rng.standard_normal(4277)
    return {
        "bds_counts n=2000 m=2": lambda k: k.bds_counts(x, 0.5, 2),
        "bds_counts n=4277 m=4": lambda k: k.bds_counts(big, 1.5, 4),
        "window_lag_stats 152x28 L=3": lambda k: k.window_lag_stats(X, Y, 3, pairs),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = {name: kernels.get_backend(name) for name in kernels.available_backends()}
    print(f"backends: {', '.join(backends)}")
    print(f"{'workload':32s}" + "".join(f"{n:>12s}" for n in backends) + ("     speedup" if len(backends) > 1 else ""))
    for label, fn in workloads(np.random.default_rng(0)).items():
        times = {}
        for name, impl in backends.items():
            number = 3
            times[name] = min(timeit.repeat(lambda: fn(impl), number=number, repeat=args.repeat)) / number
        row = f"{label:32s}" + "".join(f"{times[n] * 1e3:10.2f}ms" for n in backends)
        if len(backends) > 1:
            row += f"{times['python'] / times['cython']:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
