"""Compare the compiled kernel backend against the pure-Python one.

Times the three hot primitives (matching size, transversal test, threat
mask) over a fixed random corpus, and a full empty-board solve at 4x4 in
both variants.  Run from the repository root:

    python3 benchmarks/bench_kernels.py
"""

import argparse
import random
import time

from transversal._kernels import available, get


def random_masks(rng, n, count):
    # Positions with independent ~35% stone density per side; overlaps
    # are resolved in O's favor so the masks stay disjoint.
    masks = []
    full = (1 << (n * n)) - 1
    for _ in range(count):
        x = o = 0
        for idx in range(n * n):
            roll = rng.random()
            if roll < 0.35:
                x |= 1 << idx
            elif roll < 0.70:
                o |= 1 << idx
        masks.append((x & ~o & full, o & full))
    return masks


def best_of(repeats, fn):
    best = None
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        elapsed = time.perf_counter() - start
        if best is None or elapsed < best:
            best = elapsed
    return best


def bench_primitives(backend, corpus_by_n, repeats):
    def run():
        for n, masks in corpus_by_n.items():
            for x, o in masks:
                backend.matching_size(x, n)
                backend.matching_size(o, n)
                backend.has_transversal(x, n)
                backend.threat_bits(x, o, n)
                backend.threat_bits(o, x, n)

    return best_of(repeats, run)


def bench_solve(backend, mb):
    # Fresh context per run so nothing is served from a warm table.
    def run():
        ctx = backend.SolveContext(1 << 20, None)
        backend.solve_position(ctx, 0, 0, 4, True, mb)

    return best_of(3, run)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--positions", type=int, default=2000,
                        help="corpus size per board size (default 2000)")
    parser.add_argument("--repeats", type=int, default=3,
                        help="timing repeats, best kept (default 3)")
    parser.add_argument("--seed", type=int, default=17)
    args = parser.parse_args()

    names = available()
    rng = random.Random(args.seed)
    corpus_by_n = {n: random_masks(rng, n, args.positions) for n in (4, 5, 6, 8)}

    rows = []
    for label, fn in (
        ("primitives, %d pos x n=4,5,6,8" % args.positions,
         lambda b: bench_primitives(b, corpus_by_n, args.repeats)),
        ("solve empty 4x4 strong", lambda b: bench_solve(b, False)),
        ("solve empty 4x4 maker-breaker", lambda b: bench_solve(b, True)),
    ):
        times = {name: fn(get(name)) for name in names}
        rows.append((label, times))

    width = max(len(label) for label, _ in rows)
    header = "%-*s" % (width, "benchmark")
    for name in names:
        header += "  %10s" % name
    if "c" in names:
        header += "  %8s" % "speedup"
    print(header)
    for label, times in rows:
        line = "%-*s" % (width, label)
        for name in names:
            line += "  %9.3fs" % times[name]
        if "c" in names:
            line += "  %7.1fx" % (times["pure"] / times["c"])
        print(line)
    if "c" not in names:
        print("\ncompiled backend not built; only the pure backend was timed")


if __name__ == "__main__":
    main()
