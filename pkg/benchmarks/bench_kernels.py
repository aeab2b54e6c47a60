"""Compare the compiled and numpy kernel backends on construction-sized inputs.

Run with ``python benchmarks/bench_kernels.py [--repeat N]``.  Each kernel is
timed on both backends and the outputs are compared before timing is reported.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from perfect_forge import kernels
from perfect_forge.constructions import LambdaFunction, lindstrom_schonheim, vasiliev
from perfect_forge.fqla import word_keys
from perfect_forge.gf import FieldPermutation
from perfect_forge.components import apply_at
from perfect_forge.hamming import build_hamming


def _time(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return a == b
    return np.array_equal(np.asarray(a), np.asarray(b))


def cases():
    v = vasiliev(build_hamming(2, 3).codewords(), LambdaFunction("seeded", seed=1))
    ls = lindstrom_schonheim(build_hamming(3, 2).codewords())
    h24 = build_hamming(2, 4).codewords()
    punct = np.delete(v.words, 14, axis=1)
    keys = word_keys(punct, 2)
    order = np.argsort(keys)
    shifted = apply_at(ls.words, 1, FieldPermutation((0, 2, 1)))
    edges = kernels.radius_pairs(keys[order], punct, 2, 1)
    yield "ball_mark  vasiliev n=15", lambda b: kernels.ball_mark(v.keys(), v.words, 2, 2**15, b)
    yield "ball_mark  LS q=3 n=13", lambda b: kernels.ball_mark(ls.keys(), ls.words, 3, 3**13, b)
    yield "min_distance H(2,4)", lambda b: kernels.min_distance(h24.words, b)
    yield "pairs_at_distance H(2,4) d=3", lambda b: kernels.pairs_at_distance(h24.words, 3, 3, b)
    yield "radius_pairs r=1 punctured n=14", lambda b: kernels.radius_pairs(keys[order], punct, 2, 1, b)
    yield "radius_pairs r=2 LS (i,sigma)", lambda b: kernels.radius_pairs(ls.keys(), shifted, 3, 2, b)
    yield "component_labels", lambda b: kernels.component_labels(len(punct), edges, b)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    have_c = kernels.BACKEND == "cython"
    print(f"active backend: {kernels.BACKEND}")
    print(f"{'kernel':36s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for name, fn in cases():
        tp, out_p = _time(lambda: fn("python"), args.repeat)
        if have_c:
            tc, out_c = _time(lambda: fn("cython"), args.repeat)
            if not _same(out_p, out_c):
                raise SystemExit(f"backends disagree on {name}")
            print(f"{name:36s} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}x")
        else:
            print(f"{name:36s} {tp:10.4f} {'-':>10s} {'-':>8s}")


if __name__ == "__main__":
    main()
