"""q-ary Hamming codes and the projective geometry of their parity-check columns.

Columns of the parity-check matrix are points of PG(m-1, q).  The canonical
order normalises each point so its topmost nonzero entry is 1 and sorts the
points by their base-q value read top to bottom.  Point indices are the
1-based coordinates of the code.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import NamedTuple, Sequence

import numpy as np

from .fqla import (
    ExplicitCode,
    FqMatrix,
    FqVector,
    nullspace,
    rank_of,
    span_words,
    word_keys,
)
from .gf import FieldSpec, field_from_order

DEFAULT_LIST_CAP = 1 << 26


class GeometryError(ValueError):
    """Invalid point, line, plane or hyperplane arguments."""


def hamming_length(q: int, m: int) -> int:
    return (q**m - 1) // (q - 1)


def hamming_redundancy(q: int, n: int) -> int | None:
    """The ``m >= 1`` with ``n = (q^m - 1)/(q - 1)``, or None."""
    m = 1
    while hamming_length(q, m) < n:
        m += 1
    return m if hamming_length(q, m) == n else None


class ProjectiveOrder:
    """An ordered set of pairwise independent columns spanning F_q^m.

    ``points[t]`` is the column of coordinate ``t + 1``.  Every nonzero
    ``z`` in F_q^m is ``scalar * points[t]`` for a unique ``(t, scalar)``;
    both are tabulated by the base-q key of ``z``.
    """

    def __init__(self, field: FieldSpec, points: np.ndarray):
        points = np.array(points, dtype=np.uint8)
        self.field = field
        self.m = int(points.shape[1])
        self.n = int(points.shape[0])
        q = field.q
        size = q**self.m
        point_of = np.full(size, -1, dtype=np.int64)
        scalar_of = np.zeros(size, dtype=np.uint8)
        for t, col in enumerate(points):
            if not col.any():
                raise GeometryError("zero column")
            for alpha in range(1, q):
                key = int(word_keys(field.mul[alpha, col], q))
                if point_of[key] >= 0:
                    raise GeometryError(f"columns {point_of[key] + 1} and {t + 1} are dependent")
                point_of[key] = t
                scalar_of[key] = alpha
        if self.n != hamming_length(q, self.m):
            raise GeometryError(f"{self.n} points do not fill PG({self.m - 1},{q})")
        points.setflags(write=False)
        point_of.setflags(write=False)
        scalar_of.setflags(write=False)
        self.points = points
        self.point_of = point_of
        self.scalar_of = scalar_of
        self._span_cache: dict[tuple[int, ...], list[int]] = {}

    @classmethod
    def canonical(cls, field: FieldSpec, m: int) -> ProjectiveOrder:
        q = field.q
        reps = []
        for digits in product(range(q), repeat=m):
            v = np.array(digits, dtype=np.uint8)
            if v.any() and v[np.flatnonzero(v)[0]] == 1:
                reps.append(v)
        # product() already yields ascending base-q order (top digit most significant)
        return cls(field, np.array(reps, dtype=np.uint8))

    @property
    def q(self) -> int:
        return self.field.q

    def column(self, coord: int) -> np.ndarray:
        self._check(coord)
        return self.points[coord - 1]

    def _check(self, coord: int) -> None:
        if not 1 <= coord <= self.n:
            raise GeometryError(f"point {coord} outside 1..{self.n}")

    def decompose(self, z) -> tuple[int, int]:
        """``(coordinate, alpha)`` with ``z = alpha * h_coordinate``."""
        z = np.asarray(z, dtype=np.uint8)
        if z.shape != (self.m,):
            raise GeometryError(f"expected a vector of length {self.m}")
        if not z.any():
            raise GeometryError("the zero vector is not a projective point")
        key = int(word_keys(z, self.q))
        return int(self.point_of[key]) + 1, int(self.scalar_of[key])

    def decompose_many(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Vectorised decomposition; 0-based indices, -1 for zero rows."""
        keys = word_keys(z, self.q)
        return self.point_of[keys], self.scalar_of[keys]

    def span_points(self, coords: Sequence[int]) -> list[int]:
        """All points in the linear span of the given points, sorted."""
        key = tuple(sorted(coords))
        if key in self._span_cache:
            return list(self._span_cache[key])
        field, q = self.field, self.q
        cols = np.array([self.column(c) for c in coords], dtype=np.uint8)
        coeffs = np.array(list(product(range(q), repeat=len(coords))), dtype=np.uint8)
        vecs = field.matmul(coeffs, cols)
        vecs = vecs[vecs.any(axis=1)]
        idx, _ = self.decompose_many(vecs)
        pts = sorted({int(t) + 1 for t in idx})
        self._span_cache[key] = pts
        return list(pts)

    def rank(self, coords: Sequence[int]) -> int:
        return rank_of(self.field, np.array([self.column(c) for c in coords]))


def line_points(order: ProjectiveOrder, x: int, y: int) -> list[int]:
    """The q+1 points of the line through points ``x`` and ``y``."""
    order._check(x)
    order._check(y)
    if x == y:
        raise GeometryError("a line needs two distinct points")
    return order.span_points([x, y])


def plane_points(order: ProjectiveOrder, x: int, y: int, z: int) -> list[int]:
    """The q^2+q+1 points of the plane through three non-collinear points."""
    for c in (x, y, z):
        order._check(c)
    if len({x, y, z}) < 3 or order.rank([x, y, z]) < 3:
        raise GeometryError(f"points {x}, {y}, {z} are collinear or repeated")
    return order.span_points([x, y, z])


def pencil(order: ProjectiveOrder, i: int) -> list[list[int]]:
    """The (n-1)/q lines through point ``i``, ordered by their smallest other point."""
    order._check(i)
    covered = {i}
    lines = []
    for x in range(1, order.n + 1):
        if x in covered:
            continue
        line = line_points(order, i, x)
        covered.update(line)
        lines.append(line)
    return lines


def hyperplane_points(order: ProjectiveOrder, w) -> list[int]:
    """Points ``i`` with ``w . h_i = 0``."""
    w = np.asarray(w, dtype=np.uint8)
    if w.shape != (order.m,) or not w.any():
        raise GeometryError("hyperplane functional must be a nonzero vector of length m")
    vals = order.field.matmul(order.points, w[:, None])[:, 0]
    return [int(t) + 1 for t in np.flatnonzero(vals == 0)]


@dataclass(frozen=True, eq=False)
class HammingCode:
    field: FieldSpec
    m: int
    order: ProjectiveOrder
    H: FqMatrix
    basis: FqMatrix
    distinguished: tuple[int, ...]

    @property
    def n(self) -> int:
        return self.order.n

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def dim(self) -> int:
        return self.n - self.m

    def __repr__(self) -> str:
        return f"HammingCode(q={self.q}, m={self.m}, n={self.n})"

    def syndromes(self, words) -> np.ndarray:
        """``H x^T`` for every row ``x`` (shape ``(N, m)``)."""
        return self.field.matmul(np.asarray(words, dtype=np.uint8), self.H.entries.T)

    def contains(self, words) -> np.ndarray:
        return ~self.syndromes(words).any(axis=-1)

    def __contains__(self, v) -> bool:
        sym = v.symbols if isinstance(v, FqVector) else np.asarray(v, dtype=np.uint8)
        return bool(self.contains(sym.reshape(1, -1))[0])

    def codewords(self, cap: int = DEFAULT_LIST_CAP) -> ExplicitCode:
        words = span_words(self.field, self.basis.entries, cap=cap)
        return ExplicitCode(self.field, self.n, words)

    def zero(self) -> FqVector:
        return FqVector.zeros(self.field, self.n)


def _distinguished(order: ProjectiveOrder) -> tuple[int, ...]:
    out = []
    for r in range(order.m):
        e = np.zeros(order.m, dtype=np.uint8)
        e[r] = 1
        coord, _ = order.decompose(e)
        out.append(coord)
    return tuple(out)


def hamming_from_order(order: ProjectiveOrder) -> HammingCode:
    field = order.field
    H = order.points.T.copy()
    G = nullspace(field, H)
    return HammingCode(
        field=field,
        m=order.m,
        order=order,
        H=FqMatrix(field, H),
        basis=FqMatrix(field, G),
        distinguished=_distinguished(order),
    )


def hamming_from_parity_check(H: FqMatrix) -> HammingCode:
    """Hamming code defined by an arbitrary m x n matrix of pairwise independent columns."""
    return hamming_from_order(ProjectiveOrder(H.field, H.entries.T))


def build_hamming(q: int, m: int) -> HammingCode:
    """The Hamming code H_{q,m} in canonical column order."""
    if m < 2:
        raise GeometryError(f"Hamming codes need m >= 2 (got m={m})")
    field = field_from_order(q)
    return hamming_from_order(ProjectiveOrder.canonical(field, m))


def permute_columns(code: HammingCode, perm: Sequence[int]) -> HammingCode:
    """Same code family with coordinate ``t`` taking old coordinate ``perm[t-1]``."""
    pts = code.order.points[[p - 1 for p in perm]]
    return hamming_from_order(ProjectiveOrder(code.field, pts))


class DecodeResult(NamedTuple):
    codeword: FqVector
    position: int | None
    magnitude: int | None


def syndrome_decode(code: HammingCode, x: FqVector) -> DecodeResult:
    """Nearest codeword: if ``H x^T = alpha h_i`` subtract ``alpha e_i``."""
    if x.n != code.n:
        raise GeometryError(f"word has length {x.n}, code has length {code.n}")
    s = code.syndromes(x.symbols[None, :])[0]
    if not s.any():
        return DecodeResult(x, None, None)
    pos, alpha = code.order.decompose(s)
    corrected = x.with_symbol(pos, int(code.field.sub[x.symbols[pos - 1], alpha]))
    return DecodeResult(corrected, pos, alpha)


def decode_words(code: HammingCode, words) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Batch decode: (codewords, 0-based error positions or -1, magnitudes)."""
    words = np.array(words, dtype=np.uint8)
    s = code.syndromes(words)
    idx, alpha = code.order.decompose_many(s)
    rows = np.flatnonzero(idx >= 0)
    cols = idx[rows]
    words[rows, cols] = code.field.sub[words[rows, cols], alpha[rows]]
    return words, idx, alpha


def line_subcode(code: HammingCode, line: Sequence[int]) -> FqMatrix:
    """Basis of the codewords supported inside ``line`` (dimension q-1)."""
    line = sorted(set(int(c) for c in line))
    for c in line:
        code.order._check(c)
    if len(line) != code.q + 1 or code.order.rank(line) != 2:
        raise GeometryError(f"{line} is not a line of PG({code.m - 1},{code.q})")
    sub = code.H.entries[:, [c - 1 for c in line]]
    ker = nullspace(code.field, sub)
    out = np.zeros((ker.shape[0], code.n), dtype=np.uint8)
    out[:, [c - 1 for c in line]] = ker
    return FqMatrix(code.field, out)


def triples_through(code: HammingCode, i: int) -> np.ndarray:
    """All weight-3 codewords with a nonzero symbol at coordinate ``i``.

    Found by brute force over coordinate pairs and coefficients, without
    using the line structure; serves as an independent oracle.
    """
    field, n = code.field, code.n
    H = code.H.entries
    out = []
    hi = H[:, i - 1]
    for a in range(1, code.q):
        for x in range(n):
            if x == i - 1:
                continue
            for y in range(x + 1, n):
                if y == i - 1:
                    continue
                for b in range(1, code.q):
                    s = field.add[field.mul[a, hi], field.mul[b, H[:, x]]]
                    # need c with c*h_y = -s
                    for c in range(1, code.q):
                        if np.array_equal(field.add[s, field.mul[c, H[:, y]]], np.zeros(code.m, dtype=np.uint8)):
                            w = np.zeros(n, dtype=np.uint8)
                            w[i - 1], w[x], w[y] = a, b, c
                            out.append(w)
    return np.array(out, dtype=np.uint8).reshape(-1, n)
