"""Vectors, matrices and explicit codes over F_q.

Words are stored as uint8 arrays of element indices.  Bulk operations take
2-D arrays (one word per row); :class:`FqVector` wraps a single word for the
scalar-style API.  Coordinates exposed by this API are 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .gf import FieldSpec

KEY_LIMIT = 1 << 62


class DimensionError(ValueError):
    """Operands have mismatched lengths or fields."""


class CapExceeded(OverflowError):
    """A requested enumeration or marking run is above its size cap."""


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=np.uint8)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FqVector:
    field: FieldSpec
    symbols: np.ndarray

    def __post_init__(self):
        sym = _frozen(self.symbols).reshape(-1)
        if sym.size and int(sym.max()) >= self.field.q:
            raise ValueError(f"symbol out of range for F_{self.field.q}")
        object.__setattr__(self, "symbols", sym)

    @classmethod
    def of(cls, field: FieldSpec, symbols: Iterable[int]) -> FqVector:
        return cls(field, np.fromiter(symbols, dtype=np.int64))

    @classmethod
    def zeros(cls, field: FieldSpec, n: int) -> FqVector:
        return cls(field, np.zeros(n, dtype=np.uint8))

    @classmethod
    def unit(cls, field: FieldSpec, n: int, coord: int, value: int = 1) -> FqVector:
        """``value * e_coord`` with a 1-based coordinate."""
        a = np.zeros(n, dtype=np.uint8)
        a[coord - 1] = value
        return cls(field, a)

    @property
    def n(self) -> int:
        return int(self.symbols.size)

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, FqVector):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.symbols, other.symbols)

    def __hash__(self) -> int:
        return hash((self.field, self.symbols.tobytes()))

    def __repr__(self) -> str:
        return f"FqVector(q={self.field.q}, {self.symbols.tolist()})"

    def _check(self, other: FqVector) -> None:
        if self.field != other.field or self.n != other.n:
            raise DimensionError("vectors differ in field or length")

    def __add__(self, other: FqVector) -> FqVector:
        self._check(other)
        return FqVector(self.field, self.field.add[self.symbols, other.symbols])

    def __sub__(self, other: FqVector) -> FqVector:
        self._check(other)
        return FqVector(self.field, self.field.sub[self.symbols, other.symbols])

    def __neg__(self) -> FqVector:
        return FqVector(self.field, self.field.neg[self.symbols])

    def scale(self, alpha: int) -> FqVector:
        return FqVector(self.field, self.field.mul[alpha, self.symbols])

    def with_symbol(self, coord: int, value: int) -> FqVector:
        a = self.symbols.copy()
        a[coord - 1] = value
        return FqVector(self.field, a)

    def __str__(self) -> str:
        return " ".join(map(str, self.symbols.tolist()))


@dataclass(frozen=True, eq=False)
class FqMatrix:
    field: FieldSpec
    entries: np.ndarray

    def __post_init__(self):
        e = _frozen(self.entries)
        if e.ndim == 1:
            e = e.reshape(0 if e.size == 0 else 1, -1)
        if e.size and int(e.max()) >= self.field.q:
            raise ValueError(f"entry out of range for F_{self.field.q}")
        object.__setattr__(self, "entries", e)

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence, cols: int | None = None) -> FqMatrix:
        rows = [r.symbols if isinstance(r, FqVector) else r for r in rows]
        if not rows:
            return cls(field, np.zeros((0, cols or 0), dtype=np.uint8))
        return cls(field, np.array(rows, dtype=np.int64))

    @property
    def rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def cols(self) -> int:
        return int(self.entries.shape[1])

    def row(self, r: int) -> FqVector:
        return FqVector(self.field, self.entries[r])

    def __eq__(self, other) -> bool:
        if not isinstance(other, FqMatrix):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.field, self.entries.shape, self.entries.tobytes()))

    def __repr__(self) -> str:
        return f"FqMatrix(q={self.field.q}, {self.rows}x{self.cols})"


def word_keys(words: np.ndarray, q: int) -> np.ndarray:
    """Base-q integer of each row, first coordinate most significant.

    Numeric order of keys equals lexicographic order of words.
    """
    words = np.asarray(words, dtype=np.uint8)
    n = words.shape[-1]
    if q**n >= KEY_LIMIT:
        raise OverflowError(f"q^n = {q}^{n} does not fit a 62-bit key")
    pw = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return words.astype(np.int64) @ pw


def keys_to_words(keys, q: int, n: int) -> np.ndarray:
    keys = np.asarray(keys, dtype=np.int64)
    pw = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((keys[..., None] // pw) % q).astype(np.uint8)


def canonical_words(words, n: int | None = None) -> np.ndarray:
    """Deduplicate and sort rows lexicographically."""
    words = np.asarray(words, dtype=np.uint8)
    if words.size == 0:
        return np.zeros((0, n if n is not None else (words.shape[-1] if words.ndim == 2 else 0)), dtype=np.uint8)
    return np.unique(words, axis=0)


class ExplicitCode:
    """A deduplicated, lexicographically sorted set of words."""

    __slots__ = ("field", "n", "words", "_keys")

    def __init__(self, field: FieldSpec, n: int, words=None):
        self.field = field
        self.n = int(n)
        if words is None:
            words = np.zeros((0, self.n), dtype=np.uint8)
        words = np.asarray(words, dtype=np.uint8).reshape(-1, self.n)
        if words.size and int(words.max()) >= field.q:
            raise ValueError(f"symbol out of range for F_{field.q}")
        self.words = canonical_words(words, self.n)
        self.words.setflags(write=False)
        self._keys = None

    @classmethod
    def from_vectors(cls, field: FieldSpec, n: int, vectors: Iterable) -> ExplicitCode:
        rows = [v.symbols if isinstance(v, FqVector) else v for v in vectors]
        return cls(field, n, np.array(rows, dtype=np.uint8).reshape(-1, n))

    @property
    def q(self) -> int:
        return self.field.q

    def __len__(self) -> int:
        return int(self.words.shape[0])

    def __iter__(self):
        for row in self.words:
            yield FqVector(self.field, row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExplicitCode):
            return NotImplemented
        return self.field == other.field and self.n == other.n and np.array_equal(self.words, other.words)

    def __repr__(self) -> str:
        return f"ExplicitCode(q={self.q}, n={self.n}, size={len(self)})"

    def keys(self) -> np.ndarray:
        if self._keys is None:
            self._keys = word_keys(self.words, self.q)
            self._keys.setflags(write=False)
        return self._keys

    def contains_words(self, words) -> np.ndarray:
        """Boolean membership for each row of ``words``."""
        k = word_keys(np.asarray(words, dtype=np.uint8).reshape(-1, self.n), self.q)
        keys = self.keys()
        if len(keys) == 0:
            return np.zeros(len(k), dtype=bool)
        pos = np.minimum(np.searchsorted(keys, k), len(keys) - 1)
        return keys[pos] == k

    def __contains__(self, v) -> bool:
        sym = v.symbols if isinstance(v, FqVector) else np.asarray(v, dtype=np.uint8)
        return bool(self.contains_words(sym.reshape(1, -1))[0])

    def index_of(self, v) -> int:
        """Canonical sort index of a codeword."""
        sym = v.symbols if isinstance(v, FqVector) else np.asarray(v, dtype=np.uint8)
        k = int(word_keys(sym.reshape(1, -1), self.q)[0])
        pos = int(np.searchsorted(self.keys(), k))
        if pos >= len(self) or int(self.keys()[pos]) != k:
            raise KeyError("word is not in the code")
        return pos


class VecStats(NamedTuple):
    weight: int
    support: tuple[int, ...]
    distance: int | None


def vec_stats(x: FqVector, y: FqVector | None = None) -> VecStats:
    """Weight and 1-based support of ``x``; distance to ``y`` when given."""
    support = tuple(int(i) + 1 for i in np.flatnonzero(x.symbols))
    dist = None
    if y is not None:
        x._check(y)
        dist = int(np.count_nonzero(x.symbols != y.symbols))
    return VecStats(len(support), support, dist)


def weight(x: FqVector) -> int:
    return int(np.count_nonzero(x.symbols))


def distance(x: FqVector, y: FqVector) -> int:
    x._check(y)
    return int(np.count_nonzero(x.symbols != y.symbols))


def p_sum(x: FqVector):
    """Sum of all symbols, as a field element."""
    return x.field.element(int(x.field.sum(x.symbols)))


def extend_code(code: ExplicitCode) -> ExplicitCode:
    """Append the overall symbol sum to every codeword."""
    parity = code.field.sum(code.words, axis=1)
    return ExplicitCode(code.field, code.n + 1, np.hstack([code.words, parity[:, None]]))


# -- Gaussian elimination ---------------------------------------------------


def rref_array(field: FieldSpec, a: np.ndarray, pivot_cols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a uint8 index array.

    The pivot for each column is the lowest-index remaining row with a
    nonzero entry there.  Only the first ``pivot_cols`` columns may hold
    pivots (the rest are carried along, e.g. an augmented column).
    """
    a = np.array(a, dtype=np.uint8, copy=True)
    if a.ndim != 2:
        raise DimensionError("expected a 2-D array")
    rows, cols = a.shape
    if pivot_cols is None:
        pivot_cols = cols
    pivots: list[int] = []
    r = 0
    for c in range(pivot_cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        lead = int(a[r, c])
        if lead != 1:
            a[r] = field.mul[field.inv[lead], a[r]]
        f = a[:, c].copy()
        f[r] = 0
        hit = np.flatnonzero(f)
        if hit.size:
            a[hit] = field.sub[a[hit], field.mul[f[hit, None], a[r][None, :]]]
        pivots.append(c)
        r += 1
    return a, pivots


class RankResult(NamedTuple):
    rank: int
    rref: FqMatrix
    pivots: tuple[int, ...]


def rank_rref(m: FqMatrix) -> RankResult:
    """Rank, reduced row echelon form and (0-based) pivot columns."""
    r, piv = rref_array(m.field, m.entries)
    return RankResult(len(piv), FqMatrix(m.field, r), tuple(piv))


def rank_of(field: FieldSpec, rows) -> int:
    rows = np.asarray(rows, dtype=np.uint8)
    if rows.size == 0:
        return 0
    return len(rref_array(field, rows)[1])


def row_basis(field: FieldSpec, rows) -> np.ndarray:
    """Nonzero rows of the RREF: a canonical basis of the row space."""
    rows = np.asarray(rows, dtype=np.uint8)
    if rows.size == 0:
        return rows.reshape(0, rows.shape[-1] if rows.ndim == 2 else 0)
    r, piv = rref_array(field, rows)
    return r[: len(piv)]


def nullspace(field: FieldSpec, a) -> np.ndarray:
    """Basis (as rows) of ``{x : a x^T = 0}``."""
    a = np.asarray(a, dtype=np.uint8)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(cols, dtype=np.uint8)
    r, piv = rref_array(field, a)
    free = [c for c in range(cols) if c not in piv]
    out = np.zeros((len(free), cols), dtype=np.uint8)
    for t, fcol in enumerate(free):
        out[t, fcol] = 1
        for i, pcol in enumerate(piv):
            out[t, pcol] = field.neg[r[i, fcol]]
    return out


class SpanResult(NamedTuple):
    member: bool
    coefficients: tuple[int, ...] | None


def in_span(basis: FqMatrix, v: FqVector) -> SpanResult:
    """Whether ``v`` is a combination of the rows of ``basis``; coefficients if so."""
    if basis.cols != v.n or basis.field != v.field:
        raise DimensionError(f"basis has {basis.cols} columns, vector has length {v.n}")
    field = basis.field
    k = basis.rows
    aug = np.hstack([basis.entries.T, v.symbols[:, None]])
    r, piv = rref_array(field, aug, pivot_cols=k)
    rank = len(piv)
    if np.any(r[rank:, k]):
        return SpanResult(False, None)
    coef = np.zeros(k, dtype=np.uint8)
    for i, c in enumerate(piv):
        coef[c] = r[i, k]
    return SpanResult(True, tuple(int(c) for c in coef))


def span_words(field: FieldSpec, basis, cap: int | None = None) -> np.ndarray:
    """All ``q^k`` combinations of the basis rows, in coefficient order."""
    basis = np.asarray(basis, dtype=np.uint8)
    k, n = basis.shape
    total = field.q**k
    if cap is not None and total > cap:
        raise CapExceeded(f"span has {field.q}^{k} words, above cap {cap}")
    coeffs = keys_to_words(np.arange(total, dtype=np.int64), field.q, k)
    if k == 0:
        return np.zeros((1, n), dtype=np.uint8)
    return field.matmul(coeffs, basis)


def combine(field: FieldSpec, coeffs, basis) -> np.ndarray:
    return field.matmul(np.asarray(coeffs, dtype=np.uint8), np.asarray(basis, dtype=np.uint8))
