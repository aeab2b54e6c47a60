# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops.  Signatures mirror ``_pykernels`` exactly."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int32_t, int64_t, uint8_t

cnp.import_array()


cdef inline int64_t _bsearch_left(const int64_t[:] a, int64_t x) nogil:
    cdef Py_ssize_t lo = 0, hi = a.shape[0], mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if a[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


def ball_mark(const int64_t[:] keys, const uint8_t[:, :] words, int q, int64_t cells):
    """Mark radius-1 balls in a 2-bit-per-cell array over ``cells = q**n``.

    Returns ``(doubles, first_double, uncovered, first_uncovered)``; the
    ``first_*`` entries are cell keys or -1.
    """
    cdef Py_ssize_t N = words.shape[0], n = words.shape[1]
    cdef Py_ssize_t c, j
    cdef int v, x
    cdef int64_t key, cell, doubles = 0, uncovered = 0
    cdef int64_t first_double = -1, first_uncovered = -1
    cdef uint8_t state
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] arr = np.zeros((cells + 3) // 4, dtype=np.uint8)
    cdef uint8_t[:] bits = arr
    cdef int64_t[:] pw = np.empty(n, dtype=np.int64)
    cdef int64_t w = 1
    for j in range(n - 1, -1, -1):
        pw[j] = w
        w *= q
    with nogil:
        for c in range(N):
            key = keys[c]
            for j in range(-1, n):
                if j < 0:
                    x = 0
                else:
                    x = words[c, j]
                for v in range(q):
                    if j < 0:
                        if v > 0:
                            break
                        cell = key
                    else:
                        if v == x:
                            continue
                        cell = key + (v - x) * pw[j]
                    state = (bits[cell >> 2] >> ((cell & 3) << 1)) & 3
                    if state == 0:
                        bits[cell >> 2] |= 1 << ((cell & 3) << 1)
                    elif state == 1:
                        bits[cell >> 2] ^= 3 << ((cell & 3) << 1)
                        doubles += 1
                        if first_double < 0 or cell < first_double:
                            first_double = cell
                    else:
                        doubles += 1
        for cell in range(cells):
            if ((bits[cell >> 2] >> ((cell & 3) << 1)) & 3) == 0:
                uncovered += 1
                if first_uncovered < 0:
                    first_uncovered = cell
    return doubles, first_double, uncovered, first_uncovered


def min_distance(const uint8_t[:, :] words):
    """Exact minimum pairwise distance (rows assumed distinct); -1 if < 2 rows."""
    cdef Py_ssize_t N = words.shape[0], n = words.shape[1]
    cdef Py_ssize_t a, b, j
    cdef int d, best = n + 1
    if N < 2:
        return -1
    with nogil:
        for a in range(N):
            for b in range(a + 1, N):
                d = 0
                for j in range(n):
                    if words[a, j] != words[b, j]:
                        d += 1
                        if d >= best:
                            break
                if d < best:
                    best = d
                    if best <= 1:
                        break
            if best <= 1:
                break
    return best


def pairs_at_distance(const uint8_t[:, :] words, int lo, int hi):
    """All pairs ``a < b`` with ``lo <= d(words[a], words[b]) <= hi``."""
    cdef Py_ssize_t N = words.shape[0], n = words.shape[1]
    cdef Py_ssize_t a, b, j, cnt = 0, cap = 1024
    cdef int d
    cdef cnp.ndarray[cnp.int64_t, ndim=2] out = np.empty((cap, 2), dtype=np.int64)
    for a in range(N):
        for b in range(a + 1, N):
            d = 0
            for j in range(n):
                if words[a, j] != words[b, j]:
                    d += 1
                    if d > hi:
                        break
            if lo <= d <= hi:
                if cnt == cap:
                    cap *= 2
                    out = np.resize(out, (cap, 2))
                out[cnt, 0] = a
                out[cnt, 1] = b
                cnt += 1
    return out[:cnt].copy()


DIRECT_TABLE_LIMIT = 1 << 24


cdef inline Py_ssize_t _first(const int64_t[:] keys, const int32_t[:] table, bint direct,
                              int64_t x, int64_t space) nogil:
    """Position of the first occurrence of ``x`` in ``keys``, or -1."""
    cdef Py_ssize_t pos
    if x < 0 or x >= space:
        return -1
    if direct:
        return table[x]
    pos = _bsearch_left(keys, x)
    if pos < keys.shape[0] and keys[pos] == x:
        return pos
    return -1


def radius_pairs(const int64_t[:] sorted_keys, const uint8_t[:, :] queries, int q, int radius):
    """Pairs ``(query row, key position)`` at Hamming distance exactly ``radius``.

    ``sorted_keys`` encodes words of the same length as ``queries`` in base q
    (first coordinate most significant); duplicate keys are all reported.
    Lookups go through a direct-address table when q^n is at most
    ``DIRECT_TABLE_LIMIT`` and through binary search otherwise.
    """
    cdef Py_ssize_t M = queries.shape[0], n = queries.shape[1], K = sorted_keys.shape[0]
    cdef Py_ssize_t r, j1, j2, pos, t, cnt = 0, cap = 1024
    cdef int v1, v2, x1, x2
    cdef int64_t key, cand, w = 1
    cdef int64_t[:] pw = np.empty(max(n, 1), dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] out = np.empty((cap, 2), dtype=np.int64)
    for j1 in range(n - 1, -1, -1):
        pw[j1] = w
        w *= q
    cdef int64_t space = w
    cdef bint direct = space <= DIRECT_TABLE_LIMIT
    cdef cnp.ndarray[cnp.int32_t, ndim=1] table_arr = np.full(space if direct else 1, -1, dtype=np.int32)
    cdef int32_t[:] table = table_arr
    if direct:
        for t in range(K - 1, -1, -1):
            table[sorted_keys[t]] = <int32_t>t
    for r in range(M):
        key = 0
        for j1 in range(n):
            key += queries[r, j1] * pw[j1]
        if radius == 0:
            pos = _first(sorted_keys, table, direct, key, space)
            while pos >= 0 and pos < K and sorted_keys[pos] == key:
                if cnt == cap:
                    cap *= 2
                    out = np.resize(out, (cap, 2))
                out[cnt, 0] = r
                out[cnt, 1] = pos
                cnt += 1
                pos += 1
            continue
        for j1 in range(n):
            x1 = queries[r, j1]
            for v1 in range(q):
                if v1 == x1:
                    continue
                if radius == 1:
                    cand = key + (v1 - x1) * pw[j1]
                    pos = _first(sorted_keys, table, direct, cand, space)
                    while pos >= 0 and pos < K and sorted_keys[pos] == cand:
                        if cnt == cap:
                            cap *= 2
                            out = np.resize(out, (cap, 2))
                        out[cnt, 0] = r
                        out[cnt, 1] = pos
                        cnt += 1
                        pos += 1
                    continue
                for j2 in range(j1 + 1, n):
                    x2 = queries[r, j2]
                    for v2 in range(q):
                        if v2 == x2:
                            continue
                        cand = key + (v1 - x1) * pw[j1] + (v2 - x2) * pw[j2]
                        pos = _first(sorted_keys, table, direct, cand, space)
                        while pos >= 0 and pos < K and sorted_keys[pos] == cand:
                            if cnt == cap:
                                cap *= 2
                                out = np.resize(out, (cap, 2))
                            out[cnt, 0] = r
                            out[cnt, 1] = pos
                            cnt += 1
                            pos += 1
    return out[:cnt].copy()


def component_labels(Py_ssize_t n_vertices, const int64_t[:, :] edges):
    """Union-find labels; each vertex is labelled by the smallest vertex of its component."""
    cdef cnp.ndarray[cnp.int64_t, ndim=1] parent_arr = np.arange(n_vertices, dtype=np.int64)
    cdef int64_t[:] parent = parent_arr
    cdef Py_ssize_t e, E = edges.shape[0], v
    cdef int64_t a, b, t
    with nogil:
        for e in range(E):
            a = edges[e, 0]
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            b = edges[e, 1]
            while parent[b] != b:
                parent[b] = parent[parent[b]]
                b = parent[b]
            if a != b:
                if a < b:
                    parent[b] = a
                else:
                    parent[a] = b
        for v in range(n_vertices):
            t = v
            while parent[t] != t:
                t = parent[t]
            parent[v] = t
    return parent_arr
