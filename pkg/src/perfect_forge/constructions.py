"""Constructions of 1-perfect codes.

Explicit constructions (Vasil'ev, doubling, Lindstrom-Schonheim, switching,
the generalized Lindstrom-Schonheim union of permuted cosets) return
:class:`ExplicitCode`.  The full-rank construction returns an
:class:`ImplicitSwitchedCode`, a Hamming code plus a family of switched
cosets that answers membership queries without enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .components import (
    ComponentError,
    PrincipalComponent,
    admissible_check,
    apply_at,
    i_components_explicit,
    principal_basis,
)
from .fqla import ExplicitCode, FqVector, keys_to_words, span_words, word_keys
from .gf import FieldPermutation, FieldSpec, all_permutations
from .hamming import (
    HammingCode,
    ProjectiveOrder,
    build_hamming,
    hamming_from_order,
    hamming_redundancy,
)
from .rng import stream_values
from .verify import CapExceeded, verify_perfect_explicit

ENUMERATION_CAP = 1 << 26


class ConstructionError(ValueError):
    """Invalid construction input or failed internal consistency check."""


def _require_cap(total: int, cap: int) -> None:
    if total > cap:
        raise CapExceeded(f"construction would produce {total} words, above cap {cap}")


def _require_perfect(code: ExplicitCode, what: str = "input code") -> int:
    m = hamming_redundancy(code.q, code.n)
    if m is None:
        raise ConstructionError(f"{what}: length {code.n} is not a q-ary Hamming length")
    report = verify_perfect_explicit(code, m)
    if not report.passed:
        raise ConstructionError(f"{what} is not 1-perfect: {report.failures()[0].detail}")
    return m


# -- lambda functions ------------------------------------------------------


@dataclass(frozen=True)
class LambdaFunction:
    """A function from codewords (by canonical sort index) to field elements.

    ``kind`` is ``"zero"``, ``"table"`` (explicit values, one per index) or
    ``"seeded"`` (value = SplitMix64 output ``index`` of stream ``seed``, mod q).
    """

    kind: str = "zero"
    table: tuple[int, ...] = ()
    seed: int = 0

    def values(self, code: ExplicitCode) -> np.ndarray:
        N, q = len(code), code.q
        if self.kind == "zero":
            return np.zeros(N, dtype=np.uint8)
        if self.kind == "table":
            if len(self.table) != N:
                raise ConstructionError(f"lambda table has {len(self.table)} entries, code has {N} words")
            vals = np.array(self.table, dtype=np.int64)
            if vals.min(initial=0) < 0 or vals.max(initial=0) >= q:
                raise ConstructionError("lambda value outside the field")
            return vals.astype(np.uint8)
        if self.kind == "seeded":
            raw = stream_values(np.uint64(self.seed), np.arange(N, dtype=np.uint64))
            return (raw % np.uint64(q)).astype(np.uint8)
        raise ConstructionError(f"unknown lambda kind {self.kind!r}")


def _all_words(q: int, n: int) -> np.ndarray:
    return keys_to_words(np.arange(q**n, dtype=np.int64), q, n)


# -- Constructions 1-3 -----------------------------------------------------


def vasiliev(c1: ExplicitCode, lam: LambdaFunction = LambdaFunction(), cap: int = ENUMERATION_CAP) -> ExplicitCode:
    """Words ``(u | u + v | p(u) + lambda(v))`` for all u in F_2^n, v in C1."""
    if c1.q != 2:
        raise ConstructionError("the Vasil'ev construction is binary")
    _require_perfect(c1)
    return lindstrom_schonheim(c1, lam, cap=cap, _checked=True)


def lindstrom_schonheim(
    c1: ExplicitCode,
    lam: LambdaFunction = LambdaFunction(),
    cap: int = ENUMERATION_CAP,
    _checked: bool = False,
) -> ExplicitCode:
    """Length-(qn+1) words ``(u_1|...|u_{q-1}| v + sum u_t | sum alpha_t p(u_t) + lambda(v))``.

    ``alpha_1, ..., alpha_{q-1}`` are the nonzero field elements in index order.
    """
    f, q, n = c1.field, c1.q, c1.n
    if not _checked:
        _require_perfect(c1)
    blocks = q - 1
    _require_cap(q ** (blocks * n) * len(c1), cap)
    U = _all_words(q, blocks * n).reshape(-1, blocks, n)
    usum = np.zeros((U.shape[0], n), dtype=np.uint8)
    weighted = np.zeros(U.shape[0], dtype=np.uint8)
    for t in range(blocks):
        alpha = t + 1
        usum = f.add[usum, U[:, t]]
        weighted = f.add[weighted, f.mul[alpha, f.sum(U[:, t], axis=1)]]
    V = c1.words
    lv = lam.values(c1)
    A, B = U.shape[0], V.shape[0]
    mid = f.add[usum[:, None, :], V[None, :, :]]
    last = f.add[weighted[:, None], lv[None, :]]
    head = np.broadcast_to(U.reshape(A, 1, blocks * n), (A, B, blocks * n))
    words = np.concatenate([head, mid, last[..., None]], axis=2).reshape(A * B, q * n + 1)
    return ExplicitCode(f, q * n + 1, words)


@dataclass(frozen=True)
class CosetPartition:
    """The n+1 cosets ``H + e_k`` of a binary Hamming code (class 0 is H itself)."""

    base: HammingCode
    classes: tuple[ExplicitCode, ...]

    @property
    def n(self) -> int:
        return self.base.n

    def phi(self, words) -> np.ndarray:
        """Class index of each row (its syndrome's coordinate, or 0)."""
        idx, _ = self.base.order.decompose_many(self.base.syndromes(words))
        return np.where(idx >= 0, idx + 1, 0)


def coset_partition(m: int) -> CosetPartition:
    base = build_hamming(2, m)
    H = base.codewords().words
    classes = [ExplicitCode(base.field, base.n, H)]
    for k in range(base.n):
        shifted = H.copy()
        shifted[:, k] ^= 1
        classes.append(ExplicitCode(base.field, base.n, shifted))
    return CosetPartition(base, tuple(classes))


def doubling(p1: CosetPartition, p2: CosetPartition, pi: Sequence[int]) -> ExplicitCode:
    """Words ``(u | v | p(u))`` with v in class ``pi(phi_1(u))`` of the second partition."""
    n = p1.n
    if p2.n != n:
        raise ConstructionError("partitions have different lengths")
    pi = [int(t) for t in pi]
    if sorted(pi) != list(range(n + 1)):
        raise ConstructionError(f"pi must be a permutation of 0..{n}")
    f = p1.base.field
    U = _all_words(2, n)
    cls = p1.phi(U)
    parity = f.sum(U, axis=1)
    parts = []
    for k in range(n + 1):
        rows = np.flatnonzero(cls == k)
        V = p2.classes[pi[k]].words
        A, B = len(rows), len(V)
        u = np.broadcast_to(U[rows][:, None, :], (A, B, n))
        v = np.broadcast_to(V[None, :, :], (A, B, n))
        p = np.broadcast_to(parity[rows][:, None, None], (A, B, 1))
        parts.append(np.concatenate([u, v, p], axis=2).reshape(A * B, 2 * n + 1))
    return ExplicitCode(f, 2 * n + 1, np.vstack(parts))


# -- switching -------------------------------------------------------------


@dataclass(frozen=True)
class SwitchPart:
    """One block to switch: a set of codewords, its coordinate and permutation."""

    block: ExplicitCode
    i: int
    sigma: FieldPermutation


def _validate_block(code: ExplicitCode, part: SwitchPart, base: HammingCode | None, cache: dict) -> None:
    if base is not None:
        comp = principal_basis(base, part.i)
        if len(part.block) != code.q**comp.dim:
            raise ConstructionError(f"block at coordinate {part.i} has the wrong size for an R_{part.i} coset")
        shift = FqVector(code.field, part.block.words[0])
        if not comp.with_shift(shift).contains(part.block.words).all():
            raise ConstructionError(f"block at coordinate {part.i} is not a coset of R_{part.i}")
        return
    if part.i not in cache:
        cache[part.i] = [b.words for b in i_components_explicit(code, part.i).block_codes(code)]
    if not any(np.array_equal(b, part.block.words) for b in cache[part.i]):
        raise ConstructionError(f"block is not a {part.i}-component of the code")


def switch_family_explicit(
    code: ExplicitCode,
    parts: Sequence[SwitchPart],
    base: HammingCode | None = None,
) -> ExplicitCode:
    """Remove each block and reinsert it with its permutation applied at its coordinate.

    When ``base`` is given, ``code`` must be that Hamming code and blocks are
    validated as cosets of principal components; otherwise blocks are checked
    against the i-component partition of ``code``.
    """
    f = code.field
    if base is not None and (base.n != code.n or len(code) != base.q**base.dim or not base.contains(code.words).all()):
        raise ConstructionError("code does not match the given Hamming code")
    taken = np.zeros(len(code), dtype=bool)
    cache: dict[int, list[np.ndarray]] = {}
    inserted = []
    for part in parts:
        if part.block.n != code.n or part.block.field != f:
            raise ConstructionError("block has the wrong length or field")
        if not 1 <= part.i <= code.n:
            raise ConstructionError(f"coordinate {part.i} outside 1..{code.n}")
        if not code.contains_words(part.block.words).all():
            raise ConstructionError("block is not contained in the code")
        rows = np.searchsorted(code.keys(), part.block.keys())
        if taken[rows].any():
            raise ConstructionError("blocks overlap")
        taken[rows] = True
        _validate_block(code, part, base, cache)
        inserted.append(apply_at(part.block.words, part.i, part.sigma))
    out = ExplicitCode(f, code.n, np.vstack([code.words[~taken]] + inserted))
    if len(out) != len(code):
        raise ConstructionError(f"switched code has {len(out)} words, expected {len(code)}")
    return out


# -- generalized Lindstrom-Schonheim ----------------------------------------


@dataclass(frozen=True)
class SigmaMap:
    """Permutation per codeword of C1 (by canonical sort index).

    ``kind`` is ``"identity"``, ``"table"`` or ``"seeded"``; seeded maps pick
    permutation number ``stream_value(seed, index) mod q!`` from the
    lexicographic list of all permutations.
    """

    kind: str = "identity"
    table: tuple[FieldPermutation, ...] = ()
    seed: int = 0

    def permutations(self, code: ExplicitCode) -> list[FieldPermutation]:
        N, q = len(code), code.q
        if self.kind == "identity":
            return [FieldPermutation.identity(q)] * N
        if self.kind == "table":
            if len(self.table) != N:
                raise ConstructionError(f"sigma table has {len(self.table)} entries, code has {N} words")
            return list(self.table)
        if self.kind == "seeded":
            perms = all_permutations(q)
            raw = stream_values(np.uint64(self.seed), np.arange(N, dtype=np.uint64))
            return [perms[int(r % np.uint64(len(perms)))] for r in raw]
        raise ConstructionError(f"unknown sigma map kind {self.kind!r}")


def hyperplane_last_hamming(q: int, m: int) -> HammingCode:
    """H_{q,m} with the q^{m-1} points off the hyperplane ``x_top = 0`` first.

    The last (q^{m-1}-1)/(q-1) coordinates then form a hyperplane.
    """
    canon = ProjectiveOrder.canonical(build_hamming(q, m).field, m)
    top_zero = canon.points[:, 0] == 0
    pts = np.vstack([canon.points[~top_zero], canon.points[top_zero]])
    return hamming_from_order(ProjectiveOrder(canon.field, pts))


def generalized_ls(
    c1: ExplicitCode,
    i: int,
    sigma_map: SigmaMap = SigmaMap(),
    cap: int = ENUMERATION_CAP,
) -> ExplicitCode:
    """Union over c in C1 of ``sigma_c(R_i + (0 | c))`` inside F_q^{qn+1}.

    ``R_i`` is the principal i-component of H_{q,m+1} arranged so that the
    last n coordinates form a hyperplane; ``1 <= i <= (q-1)n + 1``.
    """
    q, n = c1.q, c1.n
    m = _require_perfect(c1)
    if not 1 <= i <= (q - 1) * n + 1:
        raise ConstructionError(f"coordinate {i} outside 1..{(q - 1) * n + 1}")
    base = hyperplane_last_hamming(q, m + 1)
    comp = principal_basis(base, i)
    _require_cap(q**comp.dim * len(c1), cap)
    R = span_words(c1.field, comp.basis.entries)
    f = c1.field
    perms = sigma_map.permutations(c1)
    prefix = (q - 1) * n + 1
    parts = []
    for c, sigma in zip(c1.words, perms):
        shift = np.concatenate([np.zeros(prefix, dtype=np.uint8), c])
        coset = f.add[R, shift[None, :]]
        parts.append(apply_at(coset, i, sigma) if not sigma.is_identity else coset)
    out = ExplicitCode(f, q * n + 1, np.vstack(parts))
    if len(out) != len(R) * len(c1):
        raise ConstructionError("permuted cosets overlap")
    return out


# -- full-rank construction ------------------------------------------------


def xi_map(code: HammingCode, z) -> FqVector:
    """The weight-1 word ``alpha e_i`` for ``z = alpha h_i``."""
    coord, alpha = code.order.decompose(np.asarray(z, dtype=np.uint8))
    return FqVector.unit(code.field, code.n, coord, alpha)


def fullrank_vectors(code: HammingCode, variant: str | None = None) -> list[FqVector]:
    """The codewords c_1, ..., c_m whose cosets R_j + c_j form the switching family.

    ``variant`` is ``"char2"`` (all signs +, valid in characteristic 2) or
    ``"general"``; by default it follows the field characteristic.
    """
    f, m = code.field, code.m
    if m < 4:
        raise ConstructionError(f"the full-rank family needs m >= 4 (got m={m})")
    if variant is None:
        variant = "char2" if f.p == 2 else "general"
    if variant == "char2" and f.p != 2:
        raise ConstructionError("the char2 variant needs a field of characteristic 2")
    if variant not in ("char2", "general"):
        raise ConstructionError(f"unknown variant {variant!r}")
    cols = {k + 1: code.order.column(code.distinguished[k]) for k in range(m)}

    def h(*terms: int) -> np.ndarray:
        # terms are +k or -k for +/- h_k
        z = np.zeros(m, dtype=np.uint8)
        for t in terms:
            col = cols[abs(t)]
            z = f.add[z, col] if t > 0 else f.sub[z, col]
        return z

    def xi(sign: int, z: np.ndarray) -> np.ndarray:
        v = xi_map(code, z).symbols
        return v if sign > 0 else f.neg[v]

    def total(*pieces: np.ndarray) -> FqVector:
        acc = np.zeros(code.n, dtype=np.uint8)
        for p in pieces:
            acc = f.add[acc, p]
        return FqVector(f, acc)

    s = 1 if variant == "char2" else -1
    out = []
    for j in range(1, m + 1):
        if j == 1:
            if variant == "char2":
                c = total(xi(1, h(1)), xi(1, h(1, 2, 3)), xi(1, h(1, 2, 4)), xi(1, h(1, 3, 4)))
            else:
                c = total(xi(1, h(1)), xi(1, h(1, 2, 3)), xi(-1, h(1, 2, -4)), xi(-1, h(1, 3, 4)))
        elif j == 2:
            if variant == "char2":
                c = total(xi(1, h(1)), xi(1, h(2)), xi(1, h(1, 3, 4)), xi(1, h(2, 3, 4)))
            else:
                c = total(xi(1, h(1)), xi(1, h(2)), xi(-1, h(1, -3, -4)), xi(-1, h(2, 3, 4)))
        elif j == 4:
            if variant == "char2":
                c = total(*(xi(1, h(k)) for k in (1, 2, 3, 4)),
                          xi(1, h(1, 2, 3)), xi(1, h(1, 2, 4)), xi(1, h(1, 3, 4)), xi(1, h(2, 3, 4)))
            else:
                c = total(xi(1, h(1)), xi(-1, h(2)), xi(-1, h(3)), xi(1, h(4)),
                          xi(1, h(1, 2, 3)), xi(-1, h(1, 2, 4)), xi(-1, h(1, 3, 4)), xi(1, h(2, 3, 4)))
        elif j % 2 == 1:
            c = total(*(xi(1, h(k)) for k in range(1, j + 1)), xi(s, h(*range(1, j + 1))))
        else:
            half = j // 2
            c = total(*(xi(1, h(k)) for k in range(1, j + 1)),
                      xi(s, h(*range(1, half + 1))), xi(s, h(*range(half + 1, j + 1))))
        out.append(c)
    for j, c in enumerate(out, start=1):
        if c not in code:
            raise ConstructionError(f"c_{j} is not a codeword ({variant} variant, q={code.q}, m={m})")
    return out


@dataclass(frozen=True)
class SwitchedCoset:
    component: PrincipalComponent
    sigma: FieldPermutation

    @property
    def i(self) -> int:
        return self.component.i

    @property
    def shift(self) -> FqVector:
        return self.component.shift


@dataclass(frozen=True, eq=False)
class ImplicitSwitchedCode:
    """``(H minus the cosets) union (their switched images)``, held implicitly."""

    base: HammingCode
    family: tuple[SwitchedCoset, ...]
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "family", tuple(self.family))
        for member in self.family:
            if member.component.code is not self.base and member.component.code.H != self.base.H:
                raise ConstructionError("family member belongs to a different Hamming code")
            if member.sigma.q != self.base.q:
                raise ConstructionError("permutation size does not match the field")
        if self.validate and self.family:
            res = admissible_check([m.component for m in self.family])
            if not res.ok:
                raise ConstructionError(f"family is not admissible: members {res.violation} at coordinates {res.coordinates}")

    @property
    def field(self) -> FieldSpec:
        return self.base.field

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def q(self) -> int:
        return self.base.q

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def size(self) -> int:
        return self.q ** (self.n - self.m)

    def contains(self, words) -> np.ndarray:
        """Membership for every row of ``words``."""
        words = np.asarray(words, dtype=np.uint8).reshape(-1, self.n)
        in_hamming = self.base.contains(words)
        removed = np.zeros(len(words), dtype=bool)
        switched = np.zeros(len(words), dtype=bool)
        for member in self.family:
            removed |= member.component.contains(words)
            undone = apply_at(words, member.i, member.sigma.inverse())
            switched |= member.component.contains(undone)
        return switched | (in_hamming & ~removed)

    def switched_representatives(self) -> list[FqVector]:
        """``c_s`` with ``sigma_s`` applied at coordinate ``i_s``, for each member."""
        return [FqVector(self.field, apply_at(m.shift.symbols, m.i, m.sigma)) for m in self.family]


def implicit_membership(code: ImplicitSwitchedCode, x: FqVector) -> bool:
    if x.n != code.n:
        raise ConstructionError(f"word has length {x.n}, code has length {code.n}")
    return bool(code.contains(x.symbols[None, :])[0])


def implicit_enumerate(code: ImplicitSwitchedCode, cap: int = ENUMERATION_CAP) -> ExplicitCode:
    _require_cap(code.size, cap)
    words = code.base.codewords(cap=cap).words
    removed = np.zeros(len(words), dtype=bool)
    inserted = []
    for member in code.family:
        hit = member.component.contains(words)
        removed |= hit
        inserted.append(apply_at(words[hit], member.i, member.sigma))
    return ExplicitCode(code.field, code.n, np.vstack([words[~removed]] + inserted))


def fullrank_code(q: int, m: int, sigmas: Sequence[FieldPermutation], variant: str | None = None) -> ImplicitSwitchedCode:
    """Switch the cosets R_{d_j} + c_j (d_j the coordinate of h_j) by sigma_j."""
    if m < 4:
        raise ConstructionError(f"the full-rank construction needs m >= 4 (got m={m})")
    sigmas = list(sigmas)
    if len(sigmas) != m:
        raise ConstructionError(f"need {m} permutations, got {len(sigmas)}")
    for j, s in enumerate(sigmas, start=1):
        if s.q != q:
            raise ConstructionError(f"sigma_{j} acts on {s.q} symbols, field has {q}")
        if s.fixes_one:
            raise ConstructionError(f"sigma_{j} fixes 1; the construction needs sigma_j(1) != 1")
    code = build_hamming(q, m)
    cs = fullrank_vectors(code, variant)
    family = []
    for j, (c, sigma) in enumerate(zip(cs, sigmas), start=1):
        coord = code.distinguished[j - 1]
        if c.symbols[coord - 1] != 1:
            raise ConstructionError(f"c_{j} does not have symbol 1 at coordinate {coord}")
        family.append(SwitchedCoset(principal_basis(code, coord, shift=c), sigma))
    try:
        return ImplicitSwitchedCode(code, tuple(family))
    except ConstructionError as exc:
        raise ConstructionError(f"full-rank family failed admissibility for q={q}, m={m}: {exc}") from exc


def switch_implicit(base: HammingCode, members: Sequence[tuple[int, FqVector, FieldPermutation]]) -> ImplicitSwitchedCode:
    """Implicit code from ``(coordinate, coset shift, permutation)`` triples."""
    family = []
    for i, shift, sigma in members:
        try:
            family.append(SwitchedCoset(principal_basis(base, i, shift=shift), sigma))
        except ComponentError as exc:
            raise ConstructionError(str(exc)) from exc
    return ImplicitSwitchedCode(base, tuple(family))


def default_sigma(q: int, name: str) -> FieldPermutation:
    """``swap`` is the binary transposition; ``cycle`` fixes 0 and cycles 1 -> 2 -> ... -> q-1 -> 1."""
    if name == "swap":
        if q != 2:
            raise ConstructionError("'swap' is only defined for q = 2")
        return FieldPermutation((1, 0))
    if name == "cycle":
        if q < 3:
            raise ConstructionError("'cycle' needs q >= 3")
        return FieldPermutation((0,) + tuple(range(2, q)) + (1,))
    if name == "identity":
        return FieldPermutation.identity(q)
    raise ConstructionError(f"unknown permutation shorthand {name!r}")


__all__ = [
    "ENUMERATION_CAP",
    "ConstructionError",
    "CosetPartition",
    "ImplicitSwitchedCode",
    "LambdaFunction",
    "SigmaMap",
    "SwitchPart",
    "SwitchedCoset",
    "coset_partition",
    "default_sigma",
    "doubling",
    "fullrank_code",
    "fullrank_vectors",
    "generalized_ls",
    "hyperplane_last_hamming",
    "implicit_enumerate",
    "implicit_membership",
    "lindstrom_schonheim",
    "switch_family_explicit",
    "switch_implicit",
    "vasiliev",
    "word_keys",
    "xi_map",
]
