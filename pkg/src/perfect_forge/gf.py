"""Small finite fields F_q (q = p^k <= 16) and permutations of their elements.

Elements are integer indices in ``[0, q)``.  The index of a polynomial
``a_0 + a_1 x + ... + a_{k-1} x^{k-1}`` is ``sum(a_j * p**j)``, so for prime
fields the index is the residue itself and index 0 is always zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Sequence

import numpy as np

MAX_ORDER = 16

# One fixed irreducible (Conway) polynomial per supported extension,
# coefficients low degree first.
DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (0, 1),
    (3, 1): (0, 1),
    (5, 1): (0, 1),
    (7, 1): (0, 1),
    (11, 1): (0, 1),
    (13, 1): (0, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (3, 2): (2, 2, 1),
}


class FieldError(ValueError):
    """Invalid field parameters or an illegal field operation."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` divided by the monic polynomial ``b`` over F_p."""
    r = _poly_trim([c % p for c in a])
    db = len(b) - 1
    while len(r) - 1 >= db and r:
        coef = r[-1]
        shift = len(r) - 1 - db
        for j, bj in enumerate(b):
            r[shift + j] = (r[shift + j] - coef * bj) % p
        _poly_trim(r)
    return r


def _is_irreducible(mod: Sequence[int], p: int) -> bool:
    k = len(mod) - 1
    # trial division by every monic polynomial of degree 1..k//2
    for d in range(1, k // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _poly_mod(mod, list(low) + [1], p):
                return False
    return True


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """The field F_q with arithmetic tables indexed by element index.

    ``add``, ``sub`` and ``mul`` are ``q x q`` uint8 tables; ``neg`` and ``inv``
    are length-``q`` tables (``inv[0]`` is a 0 placeholder).  ``exp_table`` and
    ``log_table`` are mutually inverse on nonzero elements.
    """

    p: int
    k: int
    modulus: tuple[int, ...]
    add: np.ndarray = field(repr=False)
    sub: np.ndarray = field(repr=False)
    mul: np.ndarray = field(repr=False)
    neg: np.ndarray = field(repr=False)
    inv: np.ndarray = field(repr=False)
    exp_table: np.ndarray = field(repr=False)
    log_table: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def is_prime(self) -> bool:
        return self.k == 1

    @property
    def characteristic(self) -> int:
        return self.p

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldSpec):
            return NotImplemented
        return (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    def __repr__(self) -> str:
        return f"FieldSpec(q={self.q}, p={self.p}, k={self.k})"

    def element(self, idx: int) -> FieldElement:
        return FieldElement(self, idx)

    def nonzero(self) -> range:
        """Nonzero elements in canonical index order."""
        return range(1, self.q)

    # -- vectorised helpers on index arrays ---------------------------------

    def vadd(self, a, b) -> np.ndarray:
        return self.add[a, b]

    def vsub(self, a, b) -> np.ndarray:
        return self.sub[a, b]

    def vmul(self, a, b) -> np.ndarray:
        return self.mul[a, b]

    def vneg(self, a) -> np.ndarray:
        return self.neg[a]

    def dot(self, a, b) -> int:
        """Inner product of two index vectors."""
        acc = 0
        for x, y in zip(np.asarray(a).tolist(), np.asarray(b).tolist()):
            acc = int(self.add[acc, self.mul[x, y]])
        return acc

    @cached_property
    def _coeffs(self) -> np.ndarray:
        """``q x k`` table of F_p coefficients of each element (float64 for BLAS)."""
        idx = np.arange(self.q)
        return ((idx[:, None] // self.p ** np.arange(self.k)) % self.p).astype(np.float64)

    @cached_property
    def _mul_maps(self) -> np.ndarray:
        """``[beta, r, s]``: coefficient s of ``t^r * beta``, i.e. multiplication by beta as a k x k map over F_p."""
        powers = self.p ** np.arange(self.k)
        return np.transpose(self._coeffs[self.mul[powers]], (1, 0, 2))

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Matrix product ``a @ b`` over F_q for uint8 index arrays.

        Extension fields are lifted to F_p: each entry of ``a`` becomes its k
        coefficients and each entry of ``b`` the k x k matrix of multiplication
        by it, so one floating-point product does the work.  Partial sums are
        at most ``n k (p-1)^2``, so float32 is exact below 2^24 and float64
        is used beyond that.
        """
        a = np.asarray(a, dtype=np.uint8)
        b = np.asarray(b, dtype=np.uint8)
        n, m = b.shape
        k = self.k
        dtype = np.float32 if n * k * (self.p - 1) ** 2 < 1 << 24 else np.float64
        if k == 1:
            out = a.astype(dtype) @ b.astype(dtype)
            return (out.astype(np.int64) % self.p).astype(np.uint8)
        # digit-major layout: column (r, j) holds coefficient r of a[..., j]
        lead = a.shape[:-1]
        lifted_a = np.empty(lead + (k, n), dtype=dtype)
        x = a
        for r in range(k):
            lifted_a[..., r, :] = x % self.p
            x = x // self.p
        lifted_a = lifted_a.reshape(lead + (k * n,))
        lifted_b = np.transpose(self._mul_maps[b], (2, 0, 1, 3)).reshape(k * n, m * k).astype(dtype)
        out = (lifted_a @ lifted_b).astype(np.int64) % self.p
        out = out.reshape(a.shape[:-1] + (m, k)) @ (self.p ** np.arange(k))
        return out.astype(np.uint8)

    def sum(self, a: np.ndarray, axis: int = -1) -> np.ndarray:
        """Field sum along ``axis``."""
        a = np.asarray(a, dtype=np.uint8)
        if self.k == 1:
            return (a.sum(axis=axis, dtype=np.int64) % self.p).astype(np.uint8)
        a = np.moveaxis(a, axis, -1)
        out = np.zeros(a.shape[:-1], dtype=np.uint8)
        for j in range(a.shape[-1]):
            out = self.add[out, a[..., j]]
        return out


def _build_tables(p: int, k: int, modulus: tuple[int, ...]) -> dict[str, np.ndarray]:
    q = p**k

    def coeffs(idx: int) -> list[int]:
        return [(idx // p**j) % p for j in range(k)]

    def index(c: Sequence[int]) -> int:
        return sum((cj % p) * p**j for j, cj in enumerate(c))

    add = np.zeros((q, q), dtype=np.uint8)
    mul = np.zeros((q, q), dtype=np.uint8)
    for a in range(q):
        ca = coeffs(a)
        for b in range(q):
            cb = coeffs(b)
            add[a, b] = index([x + y for x, y in zip(ca, cb)])
            prod = [0] * (2 * k - 1)
            for i, x in enumerate(ca):
                for j, y in enumerate(cb):
                    prod[i + j] += x * y
            r = _poly_mod(prod, modulus, p) if k > 1 else [prod[0] % p]
            mul[a, b] = index(r)
    neg = np.array([index([-c for c in coeffs(a)]) for a in range(q)], dtype=np.uint8)
    sub = add[np.arange(q)[:, None], neg[None, :]]
    inv = np.zeros(q, dtype=np.uint8)
    for a in range(1, q):
        inv[a] = int(np.flatnonzero(mul[a] == 1)[0])

    # smallest primitive element by index
    gen = None
    for g in range(1, q):
        x, seen = 1, set()
        for _ in range(q - 1):
            seen.add(x)
            x = int(mul[x, g])
        if len(seen) == q - 1:
            gen = g
            break
    assert gen is not None
    exp_table = np.zeros(q - 1, dtype=np.uint8)
    log_table = np.zeros(q, dtype=np.int16)
    x = 1
    for e in range(q - 1):
        exp_table[e] = x
        log_table[x] = e
        x = int(mul[x, gen])
    log_table[0] = -1
    tables = dict(add=add, sub=sub, mul=mul, neg=neg, inv=inv, exp_table=exp_table, log_table=log_table)
    for t in tables.values():
        t.setflags(write=False)
    return tables


_CACHE: dict[tuple[int, int, tuple[int, ...]], FieldSpec] = {}


def field_make(p: int, k: int = 1, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Build (or fetch from cache) the field of order ``p**k``.

    Raises:
        FieldError: non-prime ``p``, order above 16, or a modulus that is not
            a monic irreducible polynomial of degree ``k``.
    """
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if k < 1 or p**k > MAX_ORDER:
        raise FieldError(f"field order {p}^{k} outside supported range 2..{MAX_ORDER}")
    if modulus is None:
        if (p, k) not in DEFAULT_MODULI:
            raise FieldError(f"no built-in modulus for p={p}, k={k}")
        modulus = DEFAULT_MODULI[(p, k)]
    mod = tuple(int(c) % p for c in modulus)
    if len(mod) != k + 1 or mod[-1] != 1:
        raise FieldError(f"modulus {list(modulus)} is not monic of degree {k}")
    if k > 1 and not _is_irreducible(mod, p):
        raise FieldError(f"modulus {list(modulus)} is reducible over F_{p}")
    key = (p, k, mod)
    if key not in _CACHE:
        _CACHE[key] = FieldSpec(p=p, k=k, modulus=mod, **_build_tables(p, k, mod))
    return _CACHE[key]


def field_from_order(q: int) -> FieldSpec:
    """Field of order ``q`` with the built-in modulus."""
    for (p, k) in DEFAULT_MODULI:
        if p**k == q:
            return field_make(p, k)
    raise FieldError(f"unsupported field order q={q}")


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    idx: int

    def __post_init__(self):
        if not 0 <= self.idx < self.field.q:
            raise FieldError(f"index {self.idx} out of range for F_{self.field.q}")

    def _other(self, other: FieldElement) -> int:
        if not isinstance(other, FieldElement):
            raise TypeError(f"expected FieldElement, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldError("arithmetic between elements of different fields")
        return other.idx

    def __add__(self, other):
        return FieldElement(self.field, int(self.field.add[self.idx, self._other(other)]))

    def __sub__(self, other):
        return FieldElement(self.field, int(self.field.sub[self.idx, self._other(other)]))

    def __mul__(self, other):
        return FieldElement(self.field, int(self.field.mul[self.idx, self._other(other)]))

    def __truediv__(self, other):
        b = self._other(other)
        if b == 0:
            raise ZeroDivisionError("division by zero in finite field")
        return FieldElement(self.field, int(self.field.mul[self.idx, self.field.inv[b]]))

    def __neg__(self):
        return FieldElement(self.field, int(self.field.neg[self.idx]))

    def inverse(self) -> FieldElement:
        if self.idx == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return FieldElement(self.field, int(self.field.inv[self.idx]))

    def __int__(self) -> int:
        return self.idx


def field_arith(a: FieldElement, b: FieldElement | None, kind: str) -> FieldElement:
    """Dispatch one of ``add, sub, mul, div, neg, inv``."""
    if kind == "neg":
        return -a
    if kind == "inv":
        return a.inverse()
    if b is None:
        raise FieldError(f"operation {kind!r} needs two operands")
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    raise FieldError(f"unknown operation {kind!r}")


@dataclass(frozen=True)
class FieldPermutation:
    """A bijection on element indices, applied as ``table[x]``."""

    table: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.table) != list(range(len(self.table))):
            raise FieldError(f"{list(self.table)} is not a permutation")

    @property
    def q(self) -> int:
        return len(self.table)

    def __call__(self, x: int) -> int:
        return self.table[x]

    def as_array(self) -> np.ndarray:
        return np.array(self.table, dtype=np.uint8)

    def inverse(self) -> FieldPermutation:
        inv = [0] * self.q
        for x, y in enumerate(self.table):
            inv[y] = x
        return FieldPermutation(tuple(inv))

    def compose(self, other: FieldPermutation) -> FieldPermutation:
        """``self o other``: apply ``other`` first."""
        if other.q != self.q:
            raise FieldError("composing permutations of different sizes")
        return FieldPermutation(tuple(self.table[y] for y in other.table))

    @property
    def fixes_one(self) -> bool:
        return self.table[1] == 1

    @property
    def is_identity(self) -> bool:
        return self.table == tuple(range(self.q))

    @classmethod
    def identity(cls, q: int) -> FieldPermutation:
        return cls(tuple(range(q)))

    def __str__(self) -> str:
        return ",".join(map(str, self.table))


def perm_make(table: Sequence[int], q: int | None = None) -> FieldPermutation:
    """Validated permutation; ``q`` (if given) pins the expected length."""
    table = tuple(int(t) for t in table)
    if q is not None and len(table) != q:
        raise FieldError(f"permutation has length {len(table)}, expected {q}")
    return FieldPermutation(table)


def all_permutations(q: int) -> list[FieldPermutation]:
    from itertools import permutations

    return [FieldPermutation(t) for t in permutations(range(q))]
