"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import timeit

from condisc import _kernels_py as py

try:
    from condisc import _kernels as cy
except ImportError:
    cy = None


def workloads(rng):
    labels = [[rng.randrange(6) for _ in range(64)] for _ in range(200)]
    pairs = list(zip(labels, labels[1:]))
    n = 5000
    us = [rng.randrange(n) for _ in range(4000)]
    vs = [rng.randrange(n) for _ in range(4000)]
    return {
        "rg_partitions(10)": lambda k: k.rg_partitions(10),
        "rg_normalize x200": lambda k: [k.rg_normalize(a) for a in labels],
        "meet x199": lambda k: [k.meet(a, b) for a, b in pairs],
        "refines x199": lambda k: [k.refines(a, b) for a, b in pairs],
        "uf_labels(5000)": lambda k: k.uf_labels(n, us, vs),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if cy is None:
        print("compiled kernels not built; only the fallback is timed")
    print(f"{'kernel':<20} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for name, fn in workloads(random.Random(0)).items():
        tp = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat))
        if cy is None:
            print(f"{name:<20} {tp:>10.4f}")
            continue
        tc = min(timeit.repeat(lambda: fn(cy), number=1, repeat=args.repeat))
        print(f"{name:<20} {tp:>10.4f} {tc:>10.4f} {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
