"""Compare the two rational backends on representative workloads.

The package selects gmpy2.mpq when importable and falls back to
fractions.Fraction; CREDALFANS_PURE_PYTHON=1 forces the fallback. Backend
selection happens at import time, so each measurement runs in a fresh
subprocess and this driver only collates the numbers.

Run from the repository root:

    python benchmarks/bench_backends.py
"""

from __future__ import annotations

import argparse
import json
import os
import random
import subprocess
import sys
import time


def _quadratic_lowprob(n, rng):
    # supermodular by construction: L(A) = (sum of weights in A)^2 / total^2
    import itertools

    from credalfans.chains2mono import LowerProbability
    from credalfans.credal import OutcomeSpace
    from credalfans.exactla import rat

    w = [rng.randint(1, 5) for _ in range(n)]
    total = sum(w)
    table = []
    for size in range(1, n):
        for s in itertools.combinations(range(n), size):
            v = rat(sum(w[i] for i in s)) ** 2 / rat(total) ** 2
            table.append((frozenset(s), v))
    return LowerProbability(OutcomeSpace(tuple(f"x{i}" for i in range(n))), tuple(table))


def _random_gamble(n, rng):
    from credalfans.exactla import rat

    return tuple(rat(rng.randint(-36, 72)) / 12 for _ in range(n))


def bench_pri_enumerate():
    """Full fan walk of the 1260-cone interval model on ten outcomes."""
    from credalfans.credal import OutcomeSpace
    from credalfans.exactla import rat
    from credalfans.pri import PRIModel, enumerate_extreme_pri

    space = OutcomeSpace(tuple(f"x{i}" for i in range(10)))
    m = PRIModel(space, (rat("1/11"),) * 10, (rat("1/9"),) * 10)
    t0 = time.perf_counter()
    points, graph = enumerate_extreme_pri(m)
    elapsed = time.perf_counter() - t0
    assert len(points) == 1260 and len(graph.nodes) == 1260
    return elapsed


def bench_oracle_vertices():
    """Brute-force vertex enumeration of a four-outcome credal set, the
    ground-truth path every structured engine is checked against."""
    from credalfans.chains2mono import as_lower_prevision
    from credalfans.credal import build_credal_hrep
    from credalfans.polytope import vertices_bruteforce

    rng = random.Random(7)
    lowprob = _quadratic_lowprob(4, rng)
    h, _ = build_credal_hrep(as_lower_prevision(lowprob))
    t0 = time.perf_counter()
    for _ in range(20):
        vs = vertices_bruteforce(h)
    elapsed = time.perf_counter() - t0
    assert vs
    return elapsed


def bench_rank_batch():
    """Fraction-free elimination on random dense rational matrices."""
    from credalfans.exactla import rank, rat

    rng = random.Random(11)
    mats = [
        [
            tuple(rat(rng.randint(-30, 30)) / rng.randint(1, 9) for _ in range(8))
            for _ in range(8)
        ]
        for _ in range(60)
    ]
    t0 = time.perf_counter()
    total = sum(rank(m) for m in mats)
    elapsed = time.perf_counter() - t0
    assert total > 0
    return elapsed


def bench_choquet_batch():
    """Choquet evaluation against an eight-outcome supermodular table."""
    from credalfans.chains2mono import choquet

    rng = random.Random(13)
    lowprob = _quadratic_lowprob(8, rng)
    gambles = [_random_gamble(8, rng) for _ in range(400)]
    t0 = time.perf_counter()
    acc = sum(choquet(lowprob, g) for g in gambles)
    elapsed = time.perf_counter() - t0
    assert acc is not None
    return elapsed


TASKS = {
    "pri_enumerate_n10": bench_pri_enumerate,
    "oracle_vertices_n4_x20": bench_oracle_vertices,
    "rank_8x8_x60": bench_rank_batch,
    "choquet_n8_x400": bench_choquet_batch,
}


def worker():
    from credalfans.exactla import BACKEND

    results = {name: round(fn() * 1000, 1) for name, fn in TASKS.items()}
    print(json.dumps({"backend": BACKEND, "results": results}))


def run_subprocess(pure):
    env = dict(os.environ)
    if pure:
        env["CREDALFANS_PURE_PYTHON"] = "1"
    else:
        env.pop("CREDALFANS_PURE_PYTHON", None)
    proc = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--worker"],
        env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()
    if args.worker:
        worker()
        return
    fast = run_subprocess(pure=False)
    pure = run_subprocess(pure=True)
    if fast["backend"] == pure["backend"]:
        print(f"note: gmpy2 not importable, both runs used {fast['backend']}")
    width = max(len(name) for name in TASKS)
    print(f"{'task':<{width}}  {fast['backend']:>10}  {pure['backend']:>10}  speedup")
    for name in TASKS:
        a = fast["results"][name]
        b = pure["results"][name]
        ratio = b / a if a else float("inf")
        print(f"{name:<{width}}  {a:>8.1f}ms  {b:>8.1f}ms  {ratio:>6.1f}x")


if __name__ == "__main__":
    main()
