"""Pure numpy/Python versions of the compiled kernels in ``_ckernels.pyx``."""

from __future__ import annotations

from itertools import combinations

import numpy as np


def _place_values(n: int, q: int) -> np.ndarray:
    return q ** np.arange(n - 1, -1, -1, dtype=np.int64)


def ball_mark(keys, words, q, cells):
    keys = np.asarray(keys, dtype=np.int64)
    words = np.asarray(words, dtype=np.uint8)
    n = words.shape[1]
    pw = _place_values(n, q)
    counts = np.zeros(int(cells), dtype=np.uint8)
    chunk = max(1, (1 << 22) // max(1, n * q))
    for start in range(0, len(keys), chunk):
        k = keys[start:start + chunk]
        w = words[start:start + chunk].astype(np.int64)
        # shifts[v] moves coordinate j from w[:, j] to v
        cand = [k]
        for j in range(n):
            for v in range(q):
                delta = (v - w[:, j]) * pw[j]
                cand.append((k + delta)[w[:, j] != v])
        bc = np.bincount(np.concatenate(cand), minlength=int(cells))
        counts = np.minimum(counts.astype(np.int64) + bc, 255).astype(np.uint8)
    multi = counts > 1
    doubles = int((counts[multi].astype(np.int64) - 1).sum())
    first_double = int(np.flatnonzero(multi)[0]) if doubles else -1
    zero = counts == 0
    uncovered = int(zero.sum())
    first_uncovered = int(np.flatnonzero(zero)[0]) if uncovered else -1
    return doubles, first_double, uncovered, first_uncovered


def _block_distances(words: np.ndarray, start: int, stop: int) -> np.ndarray:
    return (words[start:stop, None, :] != words[None, :, :]).sum(axis=2)


def _block_rows(N: int, n: int) -> int:
    return max(1, (1 << 24) // max(1, N * n))


def min_distance(words):
    words = np.asarray(words, dtype=np.uint8)
    N, n = words.shape
    if N < 2:
        return -1
    best = n + 1
    step = _block_rows(N, n)
    for start in range(0, N, step):
        stop = min(N, start + step)
        d = _block_distances(words, start, stop)
        rows = np.arange(start, stop)[:, None]
        d[rows >= np.arange(N)[None, :]] = n + 1
        best = min(best, int(d.min()))
        if best <= 1:
            break
    return best


def pairs_at_distance(words, lo, hi):
    words = np.asarray(words, dtype=np.uint8)
    N, n = words.shape
    out = []
    step = _block_rows(N, n)
    for start in range(0, N, step):
        stop = min(N, start + step)
        d = _block_distances(words, start, stop)
        a, b = np.nonzero((d >= lo) & (d <= hi))
        a = a + start
        keep = a < b
        out.append(np.stack([a[keep], b[keep]], axis=1))
    if not out:
        return np.empty((0, 2), dtype=np.int64)
    return np.concatenate(out).astype(np.int64)


def radius_pairs(sorted_keys, queries, q, radius):
    sorted_keys = np.asarray(sorted_keys, dtype=np.int64)
    queries = np.asarray(queries, dtype=np.uint8)
    M, n = queries.shape
    pw = _place_values(n, q)
    keys = queries.astype(np.int64) @ pw if n else np.zeros(M, dtype=np.int64)
    rows = np.arange(M)
    found_r, found_p = [], []

    def lookup(r, cand):
        left = np.searchsorted(sorted_keys, cand, side="left")
        right = np.searchsorted(sorted_keys, cand, side="right")
        cnt = right - left
        hit = cnt > 0
        if not hit.any():
            return
        r, left, cnt = r[hit], left[hit], cnt[hit]
        rep_r = np.repeat(r, cnt)
        offs = np.arange(cnt.sum()) - np.repeat(np.cumsum(cnt) - cnt, cnt)
        found_r.append(rep_r)
        found_p.append(np.repeat(left, cnt) + offs)

    x = queries.astype(np.int64)
    if radius == 0:
        lookup(rows, keys)
    elif radius == 1:
        for j in range(n):
            for v in range(q):
                m = x[:, j] != v
                lookup(rows[m], keys[m] + (v - x[m, j]) * pw[j])
    elif radius == 2:
        for j1, j2 in combinations(range(n), 2):
            for v1 in range(q):
                m1 = x[:, j1] != v1
                base = keys + (v1 - x[:, j1]) * pw[j1]
                for v2 in range(q):
                    m = m1 & (x[:, j2] != v2)
                    lookup(rows[m], base[m] + (v2 - x[m, j2]) * pw[j2])
    else:
        raise ValueError("radius must be 0, 1 or 2")
    if not found_r:
        return np.empty((0, 2), dtype=np.int64)
    out = np.stack([np.concatenate(found_r), np.concatenate(found_p)], axis=1).astype(np.int64)
    # match the compiled kernel's (row, candidate order) emission
    return out[np.lexsort((out[:, 1], out[:, 0]))]


class UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            lo, hi = (ra, rb) if ra < rb else (rb, ra)
            self.parent[hi] = lo


def component_labels(n_vertices, edges):
    uf = UnionFind(int(n_vertices))
    for a, b in np.asarray(edges, dtype=np.int64).tolist():
        uf.union(a, b)
    return np.array([uf.find(v) for v in range(int(n_vertices))], dtype=np.int64)
