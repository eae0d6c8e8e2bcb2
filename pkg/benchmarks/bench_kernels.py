"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]
"""

from __future__ import annotations

import argparse
import json
import sys
import timeit

import numpy as np

from olt import _fallback

try:
    from olt import _kernels
except ImportError:
    _kernels = None


def cases(rng):
    """(name, setup returning fresh args, call) triples."""
    tab = rng.integers(-1, 2, 1 << 18).astype(np.int64)
    bits = rng.integers(0, 2, 1 << 18, dtype=np.uint8)
    target = rng.integers(0, 2 ** 63, 16, dtype=np.uint64)
    gens = rng.integers(0, 2 ** 63, (16, 16), dtype=np.uint64)
    R = rng.integers(0, 2 ** 63, (1 << 14, 3), dtype=np.uint64)
    vec = R[7].copy()
    seq = rng.normal(size=20_000).cumsum()
    short = rng.integers(-50, 50, 3000).astype(np.float64)
    return [
        ("fwht_int64 n=18", lambda: (tab.copy(),), lambda m, a: m.fwht_int64(a)),
        ("mobius_u8 n=18", lambda: (bits.copy(),), lambda m, a: m.mobius_u8(a)),
        ("gray_min_distance g=16 w=16", lambda: (target, gens), lambda m, t, g: m.gray_min_distance(t, g)),
        ("residual_update 2^14 rows", lambda: (R.copy(), vec), lambda m, r, v: m.residual_update(r, v, 0, np.uint64(1))),
        ("lnds_length 20000", lambda: (seq,), lambda m, s: m.lnds_length(s)),
        ("lipschitz_keep 3000", lambda: (short,), lambda m, s: m.lipschitz_keep(s)),
    ]


def best_time(mod, setup, call, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        args = setup()
        times.append(timeit.timeit(lambda: call(mod, *args), number=1))
    return min(times)


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", help="also write results here")
    args = p.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; only the fallback can be timed", file=sys.stderr)
    rng = np.random.default_rng(args.seed)
    rows = []
    print(f"{'kernel':32s} {'fallback':>12s} {'compiled':>12s} {'speedup':>8s}")
    for name, setup, call in cases(rng):
        slow = best_time(_fallback, setup, call, args.repeat)
        fast = best_time(_kernels, setup, call, args.repeat) if _kernels else float("nan")
        rows.append({"kernel": name, "fallback_s": slow, "compiled_s": fast})
        print(f"{name:32s} {slow * 1e3:10.2f}ms {fast * 1e3:10.2f}ms {slow / fast:7.1f}x")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)
    return 0


if __name__ == "__main__":
    sys.exit(main())
