"""Time the compiled kernels against the numpy fallback on identical inputs.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--seed 1] [--small]

Each row checks that both backends return the same table before timing.
"""

from __future__ import annotations

import argparse
import math
import time

import numpy as np

from msrkit._backend import available_backends
from msrkit.harness import random_graph
from msrkit.solvers import MsrInstance, Variant, _ball_system


def _apsp_case(seed: int, n: int, w: int):
    g = random_graph(seed, n, 2.0 * math.log(n) / n, w)
    indptr, indices, weights = g.csr()
    if w == 1:
        return "apsp_unit", (indptr, indices, n), f"n={n}"
    return "apsp_weighted", (indptr, indices, weights, n), f"n={n} w<={w}"


def _cover_case(seed: int, n: int, k: int, exact: bool):
    g = random_graph(seed, n, 0.3, 3)
    inst = MsrInstance.from_graph(g, k, None, Variant.EXACT if exact else Variant.STANDARD)
    balls = sorted(_ball_system(inst, None))
    masks = np.array([m for _, _, m in balls], dtype=np.uint64)
    costs = np.array([r for _, r, _ in balls], dtype=np.int64)
    if exact:
        centers = sorted({c for c, _, _ in balls})
        counts = [sum(1 for c, _, _ in balls if c == x) for x in centers]
        ptr = np.zeros(len(centers) + 1, dtype=np.int64)
        ptr[1:] = np.cumsum(counts)
        return "group_cover", (masks, costs, ptr, n, k), f"n={n} k={k}"
    per_point = [[i for i, (_, _, m) in enumerate(balls) if m >> p & 1] for p in range(n)]
    ptr = np.zeros(n + 1, dtype=np.int64)
    ptr[1:] = np.cumsum([len(x) for x in per_point])
    flat = np.array([i for x in per_point for i in x], dtype=np.int64)
    return "cover_layers", (masks, costs, ptr, flat, n, k), f"n={n} k={k}"


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--small", action="store_true", help="tiny inputs, for a smoke run")
    args = ap.parse_args(argv)

    backends = available_backends()
    if "cython" not in backends:
        print("compiled extension not built; only the fallback is available")
    if args.small:
        cases = [_apsp_case(args.seed, 40, 1), _apsp_case(args.seed, 40, 9),
                 _cover_case(args.seed, 8, 2, False), _cover_case(args.seed, 8, 2, True)]
    else:
        cases = [
            _apsp_case(args.seed, 200, 1),
            _apsp_case(args.seed, 200, 9),
            _apsp_case(args.seed, 600, 1),
            _cover_case(args.seed, 12, 3, False),
            _cover_case(args.seed, 16, 3, False),
            _cover_case(args.seed, 10, 3, True),
            _cover_case(args.seed, 13, 3, True),
        ]
    print(f"{'kernel':<14} {'case':<14} " + " ".join(f"{b:>10}" for b in backends) + "   speedup")
    for name, inputs, label in cases:
        times, outs = {}, {}
        for bname, mod in backends.items():
            fn = getattr(mod, name)
            best = float("inf")
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                outs[bname] = fn(*inputs)
                best = min(best, time.perf_counter() - t0)
            times[bname] = best
        if len(outs) == 2 and not _same(outs["python"], outs["cython"]):
            raise SystemExit(f"{name} {label}: backends disagree")
        speed = times["python"] / times["cython"] if "cython" in times else 1.0
        cols = " ".join(f"{times[b] * 1e3:>8.2f}ms" for b in backends)
        print(f"{name:<14} {label:<14} {cols}   {speed:6.1f}x")


if __name__ == "__main__":
    main()
