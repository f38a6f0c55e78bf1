"""Compare the numba and pure-Python search backends.

Usage: python3 benchmarks/bench_backends.py [--groups 6,6 33 ...] [--repeat N]

Each group is enumerated once per backend after a warm-up call, with the
in-process result cache cleared between runs. Both backends must visit the
same number of states and return the same sets.
"""

import argparse
import statistics
import time

from crossnum import search
from crossnum.groups import parse_group

DEFAULT_GROUPS = ["18", "3,9", "27", "5,5", "33", "2,2,2,4", "2,18"]


def run(G, backend):
    search._enumerate_cached.cache_clear()
    t0 = time.perf_counter()
    r = search.enumerate_sets(G, backend=backend)
    return r, time.perf_counter() - t0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--groups", nargs="*", default=DEFAULT_GROUPS)
    ap.add_argument("--repeat", type=int, default=1)
    args = ap.parse_args(argv)

    run(parse_group("2,6"), "numba")  # JIT load / compile
    print(f"{'group':>10} {'states':>9} {'numba s':>9} {'python s':>9} {'speedup':>8}")
    for spec in args.groups:
        G = parse_group(spec)
        times = {}
        results = {}
        for backend in ("numba", "python"):
            samples = []
            for _ in range(args.repeat):
                r, secs = run(G, backend)
                samples.append(secs)
            times[backend] = statistics.median(samples)
            results[backend] = r
        a, b = results["numba"], results["python"]
        if (a.w_set, a.W_set, a.states_visited) != (b.w_set, b.W_set, b.states_visited):
            raise SystemExit(f"backends disagree on {spec}")
        print(f"{spec:>10} {a.states_visited:>9} {times['numba']:>9.3f} {times['python']:>9.3f} "
              f"{times['python'] / max(times['numba'], 1e-9):>7.1f}x")


if __name__ == "__main__":
    main()
