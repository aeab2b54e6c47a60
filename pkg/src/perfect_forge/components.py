"""i-components and (i, sigma)-components of q-ary codes.

Two views are provided.  For Hamming codes the principal i-component
``R_i`` is the span of all triples through coordinate ``i``, assembled line by
line over the pencil at ``i``; its cosets ``R_i + u`` (``u`` a codeword) are the
i-components.  For arbitrary explicit codes, components are read off the
minimum distance graph of the code punctured at ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from .fqla import (
    ExplicitCode,
    FqMatrix,
    FqVector,
    nullspace,
    rank_of,
    row_basis,
    word_keys,
)
from .gf import FieldPermutation
from .hamming import (
    HammingCode,
    line_points,
    line_subcode,
    pencil,
    plane_points,
)

PAIRWISE_CAP = 1 << 17


class ComponentError(ValueError):
    """Invalid component request or violated precondition."""


@dataclass(frozen=True, eq=False)
class PrincipalComponent:
    """The coset ``R_i + shift`` of the principal i-component of a Hamming code."""

    code: HammingCode
    i: int
    basis: FqMatrix
    shift: FqVector
    checks: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.basis.rows

    def with_shift(self, shift: FqVector) -> PrincipalComponent:
        if shift not in self.code:
            raise ComponentError("coset shift must be a codeword of the Hamming code")
        return PrincipalComponent(self.code, self.i, self.basis, shift, self.checks)

    def contains(self, words) -> np.ndarray:
        """Membership in ``R_i + shift`` for each row."""
        f = self.code.field
        words = np.asarray(words, dtype=np.uint8)
        s = f.matmul(words, self.checks.T)
        s0 = f.matmul(self.shift.symbols[None, :], self.checks.T)[0]
        return np.all(s == s0, axis=-1)

    def __contains__(self, v) -> bool:
        sym = v.symbols if isinstance(v, FqVector) else np.asarray(v, dtype=np.uint8)
        return bool(self.contains(sym.reshape(1, -1))[0])

    def words(self, cap: int | None = 1 << 24) -> np.ndarray:
        from .fqla import span_words

        span = span_words(self.code.field, self.basis.entries, cap=cap)
        return self.code.field.add[span, self.shift.symbols[None, :]]


def principal_basis(code: HammingCode, i: int, shift: FqVector | None = None) -> PrincipalComponent:
    """Principal i-component as the sum of the line subcodes over the pencil at ``i``."""
    if not 1 <= i <= code.n:
        raise ComponentError(f"coordinate {i} outside 1..{code.n}")
    comp = _principal(code, i)
    return comp if shift is None else comp.with_shift(shift)


@lru_cache(maxsize=256)
def _principal(code: HammingCode, i: int) -> PrincipalComponent:
    rows = np.vstack([line_subcode(code, line).entries for line in pencil(code.order, i)])
    basis = row_basis(code.field, rows)
    expected = code.q ** (code.m - 1) - 1
    if basis.shape[0] != expected:
        raise AssertionError(f"principal component has dimension {basis.shape[0]}, expected {expected}")
    checks = nullspace(code.field, basis)
    checks.setflags(write=False)
    return PrincipalComponent(code, i, FqMatrix(code.field, basis), code.zero(), checks)


def _same_code(a: HammingCode, b: HammingCode) -> bool:
    return a is b or (a.field == b.field and a.H == b.H)


def coset_disjoint(a: PrincipalComponent, b: PrincipalComponent) -> bool:
    """Exact disjointness of ``R_r + u`` and ``R_s + v``.

    The cosets meet iff ``u - v`` lies in ``R_r + R_s`` (``R_r`` when r = s).
    """
    if not _same_code(a.code, b.code):
        raise ComponentError("components belong to different Hamming codes")
    f = a.code.field
    diff = f.sub[a.shift.symbols, b.shift.symbols]
    span = a.basis.entries if a.i == b.i else np.vstack([a.basis.entries, b.basis.entries])
    base = rank_of(f, span)
    return rank_of(f, np.vstack([span, diff[None, :]])) > base


class AdmissibleResult(NamedTuple):
    ok: bool
    violation: tuple[int, int] | None
    coordinates: tuple[int, int] | None

    def __bool__(self) -> bool:
        return self.ok


def admissible_check(family: Sequence[PrincipalComponent]) -> AdmissibleResult:
    """Pairwise coset disjointness; reports the first failing pair (0-based family positions)."""
    family = list(family)
    if not family:
        raise ComponentError("empty family")
    for r in range(len(family)):
        for s in range(r + 1, len(family)):
            if not coset_disjoint(family[r], family[s]):
                return AdmissibleResult(False, (r, s), (family[r].i, family[s].i))
    return AdmissibleResult(True, None, None)


@dataclass(frozen=True)
class ComponentPartition:
    """Blocks are sorted arrays of row indices into the code's sorted word list."""

    i: int
    sigma: FieldPermutation | None
    blocks: tuple[np.ndarray, ...]

    def __len__(self) -> int:
        return len(self.blocks)

    def sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def block_codes(self, code: ExplicitCode) -> list[ExplicitCode]:
        return [ExplicitCode(code.field, code.n, code.words[b]) for b in self.blocks]

    def block_of(self, row: int) -> int:
        for t, b in enumerate(self.blocks):
            if row in b:
                return t
        raise KeyError(row)


def _blocks_from_edges(n_vertices: int, edges: np.ndarray) -> tuple[np.ndarray, ...]:
    labels = kernels.component_labels(n_vertices, edges)
    order = np.argsort(labels, kind="stable")
    _, starts = np.unique(labels[order], return_index=True)
    groups = np.split(order, starts[1:])
    # each label is its component's smallest vertex, so groups come out ordered by it
    return tuple(np.sort(g) for g in groups)


def _check_coord(code: ExplicitCode, i: int) -> None:
    if not 1 <= i <= code.n:
        raise ComponentError(f"coordinate {i} outside 1..{code.n}")


def i_components_explicit(code: ExplicitCode, i: int) -> ComponentPartition:
    """Connected components of the minimum distance graph of the code punctured at ``i``.

    Codewords that coincide after puncturing are joined as well.
    """
    _check_coord(code, i)
    N = len(code)
    if N < 2:
        raise ComponentError("need at least two codewords")
    q = code.q
    punct = np.delete(code.words, i - 1, axis=1)
    keys = word_keys(punct, q)
    order = np.argsort(keys, kind="stable")
    skeys = keys[order]

    def edges_at(radius: int) -> np.ndarray:
        pairs = kernels.radius_pairs(skeys, punct, q, radius)
        if len(pairs) == 0:
            return pairs
        pairs[:, 1] = order[pairs[:, 1]]
        return pairs[pairs[:, 0] != pairs[:, 1]]

    dups = edges_at(0)
    edges = None
    for radius in (1, 2):
        e = edges_at(radius)
        if len(e):
            edges = e
            break
    if edges is None:
        uniq = np.unique(punct, axis=0)
        if len(uniq) < 2:
            edges = np.empty((0, 2), dtype=np.int64)
        else:
            if N > PAIRWISE_CAP:
                raise ComponentError(f"punctured minimum distance > 2 with {N} words; pairwise cap is {PAIRWISE_CAP}")
            d = kernels.min_distance(uniq)
            edges = kernels.pairs_at_distance(punct, d, d)
    all_edges = np.vstack([dups.reshape(-1, 2), edges.reshape(-1, 2)])
    return ComponentPartition(i, None, _blocks_from_edges(N, all_edges))


def apply_at(words, i: int, sigma: FieldPermutation) -> np.ndarray:
    """Copy of ``words`` with ``sigma`` applied to coordinate ``i`` (1-based)."""
    out = np.array(words, dtype=np.uint8, copy=True)
    out[..., i - 1] = sigma.as_array()[out[..., i - 1]]
    return out


def _sigma_edges(code: ExplicitCode, i: int, sigma: FieldPermutation) -> np.ndarray:
    shifted = apply_at(code.words, i, sigma)
    return kernels.radius_pairs(code.keys(), shifted, code.q, 2)


def i_sigma_components_explicit(code: ExplicitCode, i: int, sigma: FieldPermutation) -> ComponentPartition:
    """(i, sigma)-components from the distance-2 bipartite graph between C and C(i, sigma).

    Each vertex ``y(i, sigma)`` of the second part is identified with its source
    codeword ``y``; a block is the set of codewords of one connected component.
    """
    _check_coord(code, i)
    if sigma.q != code.q:
        raise ComponentError(f"permutation acts on {sigma.q} symbols, field has {code.q}")
    N = len(code)
    if N == 0:
        raise ComponentError("empty code")
    edges = _sigma_edges(code, i, sigma)
    return ComponentPartition(i, sigma, _blocks_from_edges(N, edges))


def i_sigma_closure(code: ExplicitCode, i: int, sigma: FieldPermutation, start: int) -> np.ndarray:
    """Smallest row set containing ``start`` and closed under the recursive rule.

    If ``y`` is in the set, so is every codeword at distance 2 from ``y(i, sigma)``.
    """
    _check_coord(code, i)
    edges = _sigma_edges(code, i, sigma)  # sorted by source row
    offsets = np.searchsorted(edges[:, 0], np.arange(len(code) + 1))
    targets = edges[:, 1]
    seen = np.zeros(len(code), dtype=bool)
    seen[start] = True
    frontier = np.array([start], dtype=np.int64)
    while frontier.size:
        nxt = np.concatenate([targets[offsets[y]:offsets[y + 1]] for y in frontier.tolist()])
        nxt = np.unique(nxt[~seen[nxt]]) if nxt.size else nxt
        seen[nxt] = True
        frontier = nxt.astype(np.int64)
    return np.flatnonzero(seen)


def coset_blocks(code: HammingCode, words: np.ndarray, i: int) -> list[np.ndarray]:
    """Partition rows of ``words`` (codewords of ``code``) into cosets of ``R_i``."""
    comp = principal_basis(code, i)
    synd = code.field.matmul(np.asarray(words, dtype=np.uint8), comp.checks.T)
    keys = word_keys(synd, code.q)
    _, inverse = np.unique(keys, return_inverse=True)
    groups: dict[int, list[int]] = {}
    for row, g in enumerate(inverse.tolist()):
        groups.setdefault(g, []).append(row)
    return sorted((np.array(g) for g in groups.values()), key=lambda b: int(b[0]))


def _require_span(f, basis_rows: np.ndarray, u: np.ndarray, what: str) -> None:
    if rank_of(f, np.vstack([basis_rows, u[None, :]])) != rank_of(f, basis_rows):
        raise ComponentError(f"vector is not in {what}")


def structural_predicates(code: HammingCode, u: FqVector, mode: str, i: int, j: int | None = None) -> bool:
    """Check the support property of vectors in ``R_i`` ("thm4") or ``R_i + R_j`` ("thm5").

    thm4: every ``x`` in supp(u), ``x != i``, has another point of the line
    through ``i`` and ``x`` in the support.  thm5: every ``x`` in supp(u) off the
    line through ``i`` and ``j`` has a point of the plane through ``i, j, x``,
    other than those three, in the support.
    """
    f = code.field
    sym = u.symbols
    supp = [int(t) + 1 for t in np.flatnonzero(sym)]
    order = code.order
    if mode == "thm4":
        _require_span(f, principal_basis(code, i).basis.entries, sym, f"R_{i}")
        for x in supp:
            if x == i:
                continue
            others = [y for y in line_points(order, i, x) if y not in (i, x)]
            if not any(sym[y - 1] for y in others):
                return False
        return True
    if mode == "thm5":
        if j is None or j == i:
            raise ComponentError("thm5 needs two distinct coordinates")
        rows = np.vstack([principal_basis(code, i).basis.entries, principal_basis(code, j).basis.entries])
        _require_span(f, rows, sym, f"R_{i} + R_{j}")
        line = set(line_points(order, i, j))
        for x in supp:
            if x in line:
                continue
            others = [y for y in plane_points(order, i, j, x) if y not in (i, j, x)]
            if not any(sym[y - 1] for y in others):
                return False
        return True
    raise ComponentError(f"unknown mode {mode!r}")
