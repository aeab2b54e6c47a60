"""Verification and certification of perfect codes.

Exact checks mark radius-1 balls over all of F_q^n; sampled checks count
codewords in the balls around pseudorandom words.  Rank certificates list
membership-verified codewords whose rank is the claimed rank.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import kernels
from .fqla import CapExceeded, ExplicitCode, FqVector, keys_to_words, rank_of, rref_array
from .hamming import HammingCode, GeometryError, hamming_length, hamming_redundancy, hyperplane_points
from .rng import SplitMix64, random_words, substream

MARK_CAP = 1 << 28
PAIR_CAP = 1 << 34
SAMPLING_BUDGET = 10**6
DECIMAL_DIGIT_LIMIT = 10**4


class VerificationError(ValueError):
    """Invalid verification request (bad length, precondition violated)."""


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str
    witness: tuple[int, ...] | None = None


@dataclass
class VerificationReport:
    kind: str
    n: int
    q: int
    m: int | None
    checks: list[Check] = field(default_factory=list)
    trials: int | None = None
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def add(self, name: str, passed: bool, detail: str, witness=None) -> None:
        w = None if witness is None else tuple(int(t) for t in np.asarray(witness).ravel())
        self.checks.append(Check(name, bool(passed), detail, w))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "q": self.q,
            "m": self.m,
            "passed": self.passed,
            "trials": self.trials,
            "seed": self.seed,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail, "witness": list(c.witness) if c.witness else None}
                for c in self.checks
            ],
        }

    def summary_line(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def text(self) -> str:
        head = f"{self.kind} verification: q={self.q} n={self.n} m={self.m}"
        if self.trials is not None:
            head += f" trials={self.trials} seed={self.seed}"
        lines = [head]
        for c in self.checks:
            lines.append(f"  [{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
            if c.witness is not None:
                lines.append(f"         witness: {' '.join(map(str, c.witness))}")
        lines.append("result: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)


def _claimed_m(q: int, n: int, m: int | None) -> int:
    if m is None:
        m = hamming_redundancy(q, n)
        if m is None:
            raise VerificationError(f"length {n} is not (q^m - 1)/(q - 1) for q={q}")
    elif hamming_length(q, m) != n:
        raise VerificationError(f"n={n} does not equal (q^m - 1)/(q - 1) for q={q}, m={m}")
    return m


def _ball_owner(code: ExplicitCode, cell: np.ndarray) -> list[int]:
    d = (code.words != cell[None, :]).sum(axis=1)
    return np.flatnonzero(d <= 1).tolist()


def verify_perfect_explicit(
    code: ExplicitCode, m: int | None = None, cap: int = MARK_CAP, backend: str | None = None
) -> VerificationReport:
    """Sphere-packing equality by marking every radius-1 ball in F_q^n."""
    q, n = code.q, code.n
    m = _claimed_m(q, n, m)
    cells = q**n
    if cells > cap:
        raise CapExceeded(f"marking needs {q}^{n} = {cells} cells, above cap {cap}")
    report = VerificationReport("exact", n, q, m)
    expected = q ** (n - m)
    report.add("size", len(code) == expected, f"|C| = {len(code)}, q^(n-m) = {expected}")
    doubles, first_double, uncovered, first_uncovered = kernels.ball_mark(code.keys(), code.words, q, cells, backend)
    if doubles:
        cell = keys_to_words(np.array([first_double]), q, n)[0]
        owners = _ball_owner(code, cell)
        report.add("disjoint balls", False,
                   f"{doubles} extra marks; first shared cell is within distance 1 of codewords {owners}", cell)
    else:
        report.add("disjoint balls", True, "no cell marked twice")
    if uncovered:
        cell = keys_to_words(np.array([first_uncovered]), q, n)[0]
        report.add("covering", False, f"{uncovered} cells uncovered", cell)
    else:
        report.add("covering", True, f"all {cells} cells covered")
    return report


def min_distance(code: ExplicitCode, pair_cap: int = PAIR_CAP, backend: str | None = None) -> int:
    N = len(code)
    if N < 2:
        raise VerificationError("minimum distance needs at least two codewords")
    work = N * (N - 1) // 2 * code.n
    if work > pair_cap:
        raise CapExceeded(f"{work} symbol comparisons exceed the pair cap {pair_cap}")
    return kernels.min_distance(code.words, backend)


# -- sampling --------------------------------------------------------------


def ball_words(field, x: np.ndarray) -> np.ndarray:
    """All words within distance 1 of each row: shape (B, 1 + n(q-1), n), centre first."""
    B, n = x.shape
    q = field.q
    out = np.repeat(x[:, None, :], 1 + n * (q - 1), axis=1)
    slot = 1
    for j in range(n):
        for delta in range(1, q):
            out[:, slot, j] = field.add[x[:, j], delta]
            slot += 1
    return out


TARGET_SALT = 0x7A5C_3E91_D2B4_6F08


def targeted_words(code, seed: int, indices: np.ndarray) -> np.ndarray:
    """Words in the radius-1 balls of switched-coset codewords.

    Trial ``t`` picks member ``t mod s``, a random element of its switched
    coset and a random word of that element's ball (possibly the centre), all
    from substream ``(seed ^ TARGET_SALT, t)``.
    """
    from .components import apply_at
    from .rng import stream_values

    f, n, q = code.field, code.n, code.field.q
    family = code.family
    dim = family[0].component.dim
    child = stream_values(np.uint64(seed ^ TARGET_SALT), np.asarray(indices, dtype=np.uint64))
    vals = stream_values(child[:, None], np.arange(dim + 1, dtype=np.uint64)[None, :])
    coeffs = (vals[:, :dim] % np.uint64(q)).astype(np.uint8)
    which = np.asarray(indices, dtype=np.int64) % len(family)
    err = (vals[:, dim] % np.uint64(1 + n * (q - 1))).astype(np.int64)
    out = np.empty((len(which), n), dtype=np.uint8)
    for s, member in enumerate(family):
        rows = np.flatnonzero(which == s)
        if len(rows) == 0:
            continue
        words = f.add[f.matmul(coeffs[rows], member.component.basis.entries), member.shift.symbols[None, :]]
        out[rows] = apply_at(words, member.i, member.sigma)
    balls = ball_words(f, out)
    return balls[np.arange(len(out)), err]


def sampled_perfect_check(
    code, trials: int, seed: int, threads: int = 1, batch: int = 1024, targeted: int = 0
) -> VerificationReport:
    """Count codewords in the radius-1 ball of ``trials`` pseudorandom words.

    ``code`` is an explicit code or anything with ``field``, ``n`` and a
    vectorised ``contains(words)``.  Trial
    ``t`` draws its word from substream ``(seed, t)``, so the outcome does not
    depend on ``threads`` or ``batch``.  ``targeted`` adds that many trials
    centred near switched cosets (implicit codes only), which uniform draws
    almost never reach when the cosets are a small fraction of the code.
    """
    if trials < 1:
        raise VerificationError("trials must be positive")
    if targeted and not getattr(code, "family", None):
        raise VerificationError("targeted trials need an implicit code with a nonempty family")
    f, n, q = code.field, code.n, code.field.q
    m = hamming_redundancy(q, n)
    contains = code.contains_words if isinstance(code, ExplicitCode) else code.contains

    def draw(kind: str, start: int, stop: int) -> np.ndarray:
        idx = np.arange(start, stop)
        return random_words(seed, idx, n, q) if kind == "uniform" else targeted_words(code, seed, idx)

    def run(kind: str, start: int, stop: int):
        x = draw(kind, start, stop)
        balls = ball_words(f, x)
        counts = contains(balls.reshape(-1, n)).reshape(len(x), -1).sum(axis=1)
        bad = np.flatnonzero(counts != 1)
        return [(start + int(b), int(counts[b]), x[b]) for b in bad]

    report = VerificationReport("sampled", n, q, m, trials=trials + targeted, seed=seed)
    for kind, total in (("uniform", trials), ("targeted", targeted)):
        if total == 0:
            continue
        spans = [(kind, s, min(s + batch, total)) for s in range(0, total, batch)]
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(lambda a: run(*a), spans))
        else:
            results = [run(*a) for a in spans]
        bad = [b for r in results for b in r]
        name = "one codeword per ball" if kind == "uniform" else "one codeword per ball near switched cosets"
        if bad:
            t, count, x = bad[0]
            report.add(name, False, f"{len(bad)} of {total} {kind} trials failed; trial {t} sees {count} codewords", x)
        else:
            report.add(name, True, f"{total} {kind} trials, each ball of {1 + n * (q - 1)} words holds exactly one codeword")
    return report


# -- rank ------------------------------------------------------------------


@dataclass(frozen=True)
class RankCertificate:
    witnesses: tuple[FqVector, ...]
    rank: int
    proofs: tuple[str, ...]

    def check_rank(self) -> int:
        if not self.witnesses:
            return 0
        f = self.witnesses[0].field
        return rank_of(f, np.vstack([w.symbols for w in self.witnesses]))


def _independent_rows(field, words: np.ndarray) -> list[int]:
    """Indices of the lexicographically first maximal independent set of rows."""
    _, pivots = rref_array(field, np.ascontiguousarray(words.T))
    return list(pivots)


def rank_certificate(code, seed: int = 0, budget: int = SAMPLING_BUDGET) -> RankCertificate:
    """Rank of an explicit code, or a sampled certificate for an implicit switched code."""
    if isinstance(code, ExplicitCode):
        f = code.field
        if len(code) == 0:
            return RankCertificate((), 0, ())
        rows = _independent_rows(f, code.words)
        wit = tuple(FqVector(f, code.words[r]) for r in rows)
        proofs = tuple(f"codeword #{r} of the explicit list" for r in rows)
        return RankCertificate(wit, len(wit), proofs)
    return _implicit_rank_certificate(code, seed, budget)


def _implicit_rank_certificate(code, seed: int, budget: int) -> RankCertificate:
    f, base = code.field, code.base
    target = base.dim
    rng = SplitMix64(seed)
    basis = np.zeros((0, code.n), dtype=np.uint8)
    witnesses: list[FqVector] = []
    proofs: list[str] = []
    draws = 0
    batch = 256
    while len(witnesses) < target:
        if draws >= budget:
            raise VerificationError(f"sampling budget {budget} exhausted with {len(witnesses)} of {target} witnesses")
        take = min(batch, budget - draws)
        coeffs = rng.block((take, target), f.q).astype(np.uint8)
        draws += take
        words = f.matmul(coeffs, base.basis.entries)
        outside = np.ones(take, dtype=bool)
        for member in code.family:
            outside &= ~member.component.contains(words)
        for t in np.flatnonzero(outside):
            cand = np.vstack([basis, words[t][None, :]])
            if rank_of(f, cand) > len(basis):
                basis = cand
                witnesses.append(FqVector(f, words[t]))
                proofs.append("Hamming codeword outside every switched coset; coefficients "
                              + ",".join(str(int(c)) for c in coeffs[t]))
                if len(witnesses) == target:
                    break
    for s, (member, rep) in enumerate(zip(code.family, code.switched_representatives())):
        witnesses.append(rep)
        proofs.append(f"switched coset {s + 1}: shift with sigma={member.sigma} applied at coordinate {member.i}")
    mat = np.vstack([w.symbols for w in witnesses])
    ok = code.contains(mat)
    if not ok.all():
        bad = int(np.flatnonzero(~ok)[0])
        raise VerificationError(f"witness {bad} failed its membership re-check")
    return RankCertificate(tuple(witnesses), rank_of(f, mat), tuple(proofs))


# -- linearity -------------------------------------------------------------


class LinearityResult(NamedTuple):
    linear: bool
    witness: tuple | None

    def __bool__(self) -> bool:
        return self.linear


def linearity_check(code: ExplicitCode, pair_cap: int = PAIR_CAP) -> LinearityResult:
    """Linear iff |C| = q^rank and 0 in C; otherwise the first closure failure.

    Witnesses: ``("zero",)``, ``("scalar", alpha, row)`` or ``("sum", row_a, row_b)``
    with row indices into the sorted word list.
    """
    f, N = code.field, len(code)
    if N == 0:
        return LinearityResult(False, ("zero",))
    if not code.contains_words(np.zeros((1, code.n), dtype=np.uint8))[0]:
        return LinearityResult(False, ("zero",))
    if N == f.q ** rank_of(f, code.words):
        return LinearityResult(True, None)
    if N * N * code.n > pair_cap:
        raise CapExceeded(f"pairwise closure scan of {N} words exceeds the pair cap {pair_cap}")
    for a in range(N):
        for alpha in range(2, f.q):
            if not code.contains_words(f.mul[alpha, code.words[a]][None, :])[0]:
                return LinearityResult(False, ("scalar", alpha, a))
        sums = f.add[code.words[a][None, :], code.words[a:]]
        miss = np.flatnonzero(~code.contains_words(sums))
        if len(miss):
            return LinearityResult(False, ("sum", a, a + int(miss[0])))
    raise AssertionError("rank test and closure scan disagree")


# -- counting bound ----------------------------------------------------------


@dataclass(frozen=True)
class LowerBound:
    """``base^(q^gap)``; ``exponent`` and ``decimal`` are filled in when small enough to print."""

    q: int
    n: int
    inner_length: int
    inner_m: int
    base: int
    gap: int
    exponent: int | None = field(repr=False)
    decimal: str | None = field(repr=False)

    @property
    def vacuous(self) -> bool:
        return self.gap < 0

    def describe(self) -> str:
        if self.vacuous:
            return (f"N({self.q},{self.n}): bound vacuous; inner length {self.inner_length} "
                    f"(m'={self.inner_m}) gives a negative exponent")
        power = big_decimal(self.exponent) if self.exponent is not None else f"({self.q}^{self.gap})"
        text = f"N({self.q},{self.n}) >= {self.base}^{power}"
        text += f"  [inner length {self.inner_length}, m'={self.inner_m}]"
        if self.decimal is not None:
            text += f" = {self.decimal}"
        return text


EXPONENT_DIGIT_LIMIT = 10**4
_CHUNK = 10**1000


def big_decimal(x: int) -> str:
    """Decimal string of a nonnegative int, chunked to stay under the interpreter's str() digit limit."""
    if x < _CHUNK:
        return str(x)
    parts = []
    while x:
        x, r = divmod(x, _CHUNK)
        parts.append(r)
    return str(parts[-1]) + "".join(f"{r:01000d}" for r in reversed(parts[:-1]))


def lower_bound_count(q: int, n: int) -> LowerBound:
    """``(q!)^(q^(n' - m' - 1))`` with n' = (n-1)/q the inner length and m' its redundancy."""
    m = hamming_redundancy(q, n)
    if m is None or m < 2:
        raise VerificationError(f"n={n} is not a q-ary Hamming length with m >= 2 for q={q}")
    inner = (n - 1) // q
    inner_m = hamming_redundancy(q, inner)
    gap = inner - inner_m - 1
    base = math.factorial(q)
    if gap < 0:
        return LowerBound(q, n, inner, inner_m, base, gap, None, None)
    # log10 of the exponent and of the value, kept in floats only while they are small
    exp_digits = gap * math.log10(q)
    exponent = q**gap if exp_digits <= EXPONENT_DIGIT_LIMIT else None
    decimal = None
    if exponent is not None and exp_digits + math.log10(math.log10(base)) <= math.log10(DECIMAL_DIGIT_LIMIT):
        decimal = big_decimal(base**exponent)
    return LowerBound(q, n, inner, inner_m, base, gap, exponent, decimal)


# -- Lemma 1 -----------------------------------------------------------------


def lemma1_check(
    code: HammingCode,
    i: int,
    w,
    trials: int = 1000,
    seed: int = 0,
    exhaustive: bool | None = None,
    enumerate_limit: int = 1 << 16,
) -> VerificationReport:
    """For u supported on the hyperplane ``w``, ``R_i + u`` meets that support space only in u.

    Exhaustive mode runs every u; otherwise ``trials`` seeded u are drawn.  When
    R_i has at most ``enumerate_limit`` words the intersection is counted
    exactly, otherwise a random element of R_i is tested per trial.
    """
    from .components import principal_basis
    from .fqla import span_words

    f, n, q = code.field, code.n, code.q
    plane = hyperplane_points(code.order, w)
    if i in plane:
        raise VerificationError(f"coordinate {i} lies on the hyperplane")
    comp = principal_basis(code, i)
    off = np.ones(n, dtype=bool)
    off[np.array(plane) - 1] = False
    n_u = q ** len(plane)
    if exhaustive is None:
        exhaustive = n_u * min(q**comp.dim, enumerate_limit) <= 1 << 22
    R = span_words(f, comp.basis.entries) if q**comp.dim <= enumerate_limit else None

    def u_from(coeffs: np.ndarray) -> np.ndarray:
        u = np.zeros((len(coeffs), n), dtype=np.uint8)
        u[:, np.array(plane) - 1] = coeffs
        return u

    if exhaustive:
        if R is None:
            raise CapExceeded("exhaustive Lemma 1 check needs an enumerable R_i")
        us = u_from(keys_to_words(np.arange(n_u), q, len(plane)))
        label, total = "exhaustive", len(us)
    else:
        rng = SplitMix64(substream(seed, 0))
        us = u_from(rng.block((trials, len(plane)), q).astype(np.uint8))
        label, total = "sampled", trials
    report = VerificationReport(label, n, q, code.m, trials=None if exhaustive else trials,
                                seed=None if exhaustive else seed)
    rng_r = SplitMix64(substream(seed, 1))
    for t, u in enumerate(us):
        if R is not None:
            shifted = f.add[R, u[None, :]]
            inside = ~shifted[:, off].any(axis=1)
            hits = shifted[inside]
            ok = len(hits) == 1 and np.array_equal(hits[0], u)
            if not ok:
                report.add("single intersection", False, f"u #{t} meets the support space in {len(hits)} words", u)
                return report
        else:
            coeffs = rng_r.block((1, comp.dim), q).astype(np.uint8)
            r = f.matmul(coeffs, comp.basis.entries)[0]
            v = f.add[r, u]
            if (not v[off].any()) != (not r.any()):
                report.add("single intersection", False, f"u #{t}: r + u lies in the support space with r != 0", v)
                return report
    report.add("single intersection", True, f"{total} vectors u, coordinate {i}, hyperplane of {len(plane)} points")
    return report


__all__ = [
    "CapExceeded",
    "Check",
    "GeometryError",
    "LinearityResult",
    "LowerBound",
    "MARK_CAP",
    "PAIR_CAP",
    "RankCertificate",
    "SAMPLING_BUDGET",
    "VerificationError",
    "VerificationReport",
    "ball_words",
    "lemma1_check",
    "linearity_check",
    "lower_bound_count",
    "min_distance",
    "rank_certificate",
    "sampled_perfect_check",
    "targeted_words",
    "verify_perfect_explicit",
]
