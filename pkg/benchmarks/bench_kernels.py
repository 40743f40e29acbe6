"""Timing comparison between the pure and compiled bitset kernels.

Run as: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import time

from kfl._kernel import pure
from kfl.formula import build_Bh, parse, variables
from kfl.oracle import _program

try:
    from kfl._kernel import _speedups
except ImportError:
    _speedups = None


def random_rows(rng, n, density=0.3):
    return [sum(1 << v for v in range(n) if rng.random() < density) for u in range(n)]


def timeit(fn, repeat):
    best = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, out


def bench(label, make_pure, make_fast, repeat):
    tp, outp = timeit(make_pure, repeat)
    if _speedups is None:
        print("%-28s pure %8.3fms  compiled (unavailable)" % (label, tp * 1e3))
        return
    tc, outc = timeit(make_fast, repeat)
    assert outp == outc, label
    print("%-28s pure %8.3fms  compiled %8.3fms  %6.1fx" % (label, tp * 1e3, tc * 1e3, tp / tc))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5, help="keep the best of N runs")
    args = ap.parse_args()
    rng = random.Random(0)

    for n in (16, 64, 128):
        r1 = random_rows(rng, n)
        r2 = random_rows(rng, n)
        bench("compose_rows n=%d x100" % n,
              lambda: [pure.compose_rows(r1, r2, n) for _ in range(100)][-1],
              lambda: [_speedups.compose_rows(r1, r2, n) for _ in range(100)][-1],
              args.repeat)

    for n in (16, 64, 128):
        rows = random_rows(rng, n, 0.1)
        bench("closure_rows n=%d x100" % n,
              lambda: [pure.closure_rows(rows, n) for _ in range(100)][-1],
              lambda: [_speedups.closure_rows(rows, n) for _ in range(100)][-1],
              args.repeat)

    cases = [("<><>p1 -> <>p1", 5), ("[](p1 & p2) <-> ~<>~(p1 & p2)", 5)]
    for text, n in cases:
        f = parse(text)
        prog = _program(f, {v: j for j, v in enumerate(variables(f))})
        rows = random_rows(rng, n, 0.4)
        nv = len(variables(f))
        bench("valid_on_frame %-12s n=%d" % (text[:12], n),
              lambda: pure.valid_on_frame(*prog, rows, n, nv),
              lambda: _speedups.valid_on_frame(*prog, rows, n, nv),
              args.repeat)

    f = build_Bh(3, 2)
    prog = _program(f, {v: j for j, v in enumerate(variables(f))})
    rows = random_rows(rng, 4, 0.5)
    bench("valid_on_frame height-3 n=4",
          lambda: pure.valid_on_frame(*prog, rows, 4, 3),
          lambda: _speedups.valid_on_frame(*prog, rows, 4, 3),
          args.repeat)


if __name__ == "__main__":
    main()
