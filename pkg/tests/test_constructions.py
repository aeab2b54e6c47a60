import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import is_perfect_bruteforce, rank_mod_p
from perfect_forge.components import apply_at, i_components_explicit, principal_basis
from perfect_forge.constructions import (
    ConstructionError,
    ImplicitSwitchedCode,
    LambdaFunction,
    SigmaMap,
    SwitchPart,
    SwitchedCoset,
    coset_partition,
    default_sigma,
    doubling,
    fullrank_code,
    fullrank_vectors,
    generalized_ls,
    implicit_enumerate,
    implicit_membership,
    lindstrom_schonheim,
    switch_family_explicit,
    vasiliev,
    xi_map,
)
from perfect_forge.fqla import CapExceeded, ExplicitCode, FqVector, rank_of, weight, word_keys
from perfect_forge.gf import FieldPermutation, field_make
from perfect_forge.hamming import build_hamming
from perfect_forge.rng import random_words, stream_value
from perfect_forge.verify import linearity_check, verify_perfect_explicit

F2, F3 = field_make(2), field_make(3)
TRIVIAL2 = ExplicitCode(F2, 1, [[0]])
H23 = build_hamming(2, 3).codewords()
H32 = build_hamming(3, 2).codewords()
SWAP = FieldPermutation((1, 0))
CYCLE3 = FieldPermutation((0, 2, 1))


def test_vasiliev_smallest():
    out = vasiliev(TRIVIAL2)
    assert out.words.tolist() == [[0, 0, 0], [1, 1, 1]]
    assert is_perfect_bruteforce(out.words.tolist(), 2, 3)


def test_vasiliev_linear_and_nonlinear():
    lin = vasiliev(H23)
    assert len(lin) == 2048 and verify_perfect_explicit(lin).passed
    assert rank_of(F2, lin.words) == 11 and linearity_check(lin).linear
    non = vasiliev(H23, LambdaFunction("seeded", seed=3))
    assert verify_perfect_explicit(non).passed
    assert not linearity_check(non).linear


def test_vasiliev_word_shape():
    lam = LambdaFunction("seeded", seed=9)
    out = vasiliev(H23, lam)
    u, mid, last = out.words[:, :7], out.words[:, 7:14], out.words[:, 14]
    v = u ^ mid
    assert H23.contains_words(v).all()
    lv = lam.values(H23)[np.searchsorted(H23.keys(), word_keys(v, 2))]
    assert np.array_equal(last, (u.sum(axis=1) + lv) % 2)


def test_vasiliev_rejects_bad_input():
    with pytest.raises(ConstructionError):
        vasiliev(H32)
    with pytest.raises(ConstructionError):
        vasiliev(ExplicitCode(F2, 7, H23.words[1:]))


def test_lambda_kinds():
    assert not LambdaFunction().values(H23).any()
    t = LambdaFunction("table", table=tuple(range(16)))
    with pytest.raises(ConstructionError):
        t.values(H23)  # values outside F_2
    s1 = LambdaFunction("seeded", seed=1).values(H23)
    assert np.array_equal(s1, LambdaFunction("seeded", seed=1).values(H23))
    assert s1.tolist() == [stream_value(1, k) % 2 for k in range(16)]
    with pytest.raises(ConstructionError):
        LambdaFunction("table", table=(0, 1)).values(H23)


def test_coset_partition():
    p2 = coset_partition(2)
    assert [len(c) for c in p2.classes] == [2, 2, 2, 2]
    p3 = coset_partition(3)
    allw = np.vstack([c.words for c in p3.classes])
    assert len(p3.classes) == 8 and all(len(c) == 16 for c in p3.classes)
    assert len(ExplicitCode(F2, 7, allw)) == 128
    e5 = FqVector.unit(F2, 7, 5).symbols[None, :]
    assert p3.phi(e5).tolist() == [5]
    for k, c in enumerate(p3.classes):
        assert (p3.phi(c.words) == k).all()


@pytest.mark.parametrize("pi", [list(range(8)), [1, 2, 0, 3, 4, 5, 6, 7], [7, 0, 1, 2, 3, 4, 5, 6]])
def test_doubling_is_perfect(pi):
    p = coset_partition(3)
    out = doubling(p, p, pi)
    assert len(out) == 2048 and verify_perfect_explicit(out).passed


def test_doubling_errors():
    p = coset_partition(3)
    with pytest.raises(ConstructionError):
        doubling(p, p, [0] * 8)
    with pytest.raises(ConstructionError):
        doubling(p, coset_partition(2), list(range(8)))


def test_ls_binary_equals_vasiliev():
    lam = LambdaFunction("seeded", seed=21)
    assert lindstrom_schonheim(H23, lam) == vasiliev(H23, lam)


def test_ls_ternary():
    out = lindstrom_schonheim(H32)
    assert len(out) == 3**10 and out.n == 13
    assert verify_perfect_explicit(out).passed
    with pytest.raises(ConstructionError):
        lindstrom_schonheim(ExplicitCode(F3, 4, [[0, 0, 0, 0]]))
    with pytest.raises(CapExceeded):
        lindstrom_schonheim(H32, cap=1000)


def test_ls_ternary_word_shape():
    out = lindstrom_schonheim(H32, LambdaFunction("seeded", seed=2))
    w = out.words.astype(np.int64)
    u1, u2, mid, last = w[:, :4], w[:, 4:8], w[:, 8:12], w[:, 12]
    v = (mid - u1 - u2) % 3
    assert H32.contains_words(v.astype(np.uint8)).all()
    # alpha_1 = 1, alpha_2 = 2
    lam = LambdaFunction("seeded", seed=2).values(H32)
    lv = lam[np.searchsorted(H32.keys(), word_keys(v.astype(np.uint8), 3))]
    assert np.array_equal(last, (u1.sum(1) + 2 * u2.sum(1) + lv) % 3)


def test_ls_trivial_ternary():
    out = lindstrom_schonheim(ExplicitCode(F3, 1, [[0]]))
    assert out.n == 4 and len(out) == 9 and is_perfect_bruteforce(out.words.tolist(), 3, 4)


# -- switching ---------------------------------------------------------------


R7 = [
    (0, 0, 0, 0, 0, 0, 0), (0, 0, 1, 0, 0, 1, 1), (0, 1, 0, 0, 1, 0, 1), (0, 1, 1, 0, 1, 1, 0),
    (1, 0, 0, 1, 0, 0, 1), (1, 0, 1, 1, 0, 1, 0), (1, 1, 0, 1, 1, 0, 0), (1, 1, 1, 1, 1, 1, 1),
]


def test_switch_example_block():
    code = vasiliev(ExplicitCode(F2, 3, [[0, 0, 0], [1, 1, 1]]))
    block = ExplicitCode(F2, 7, R7)
    out = switch_family_explicit(code, [SwitchPart(block, 7, SWAP)])
    assert verify_perfect_explicit(out).passed
    rest = [w for w in code.words.tolist() if tuple(w) not in R7]
    moved = [list(w[:6]) + [1 - w[6]] for w in R7]
    assert out == ExplicitCode(F2, 7, rest + moved)


def test_switch_identity_is_noop():
    part = i_components_explicit(H23, 3)
    blocks = part.block_codes(H23)
    assert switch_family_explicit(H23, [SwitchPart(blocks[0], 3, FieldPermutation((0, 1)))]) == H23


def test_switch_errors():
    part = i_components_explicit(H23, 3)
    b = part.block_codes(H23)
    with pytest.raises(ConstructionError):
        switch_family_explicit(H23, [SwitchPart(b[0], 3, SWAP), SwitchPart(b[0], 3, SWAP)])
    half = ExplicitCode(F2, 7, b[0].words[:4])
    with pytest.raises(ConstructionError):
        switch_family_explicit(H23, [SwitchPart(half, 3, SWAP)])
    with pytest.raises(ConstructionError):
        switch_family_explicit(H23, [SwitchPart(ExplicitCode(F2, 7, [[1, 0, 0, 0, 0, 0, 0]]), 3, SWAP)])


def test_switch_with_hamming_base_validation():
    base = build_hamming(2, 4)
    H = base.codewords()
    cs = fullrank_vectors(base)
    parts = []
    for j, c in enumerate(cs):
        comp = principal_basis(base, base.distinguished[j], c)
        parts.append(SwitchPart(ExplicitCode(F2, 15, comp.words()), comp.i, SWAP))
    out = switch_family_explicit(H, parts, base=base)
    assert verify_perfect_explicit(out).passed
    assert rank_of(F2, out.words) == 15
    assert out == implicit_enumerate(fullrank_code(2, 4, [SWAP] * 4))
    bad = ExplicitCode(F2, 15, np.vstack([parts[0].block.words[:64], parts[1].block.words[:64]]))
    with pytest.raises(ConstructionError):
        switch_family_explicit(H, [SwitchPart(bad, parts[0].i, SWAP)], base=base)


# -- generalized LS ----------------------------------------------------------


def test_gls_smallest():
    out = generalized_ls(TRIVIAL2, 1)
    assert out.words.tolist() == [[0, 0, 0], [1, 1, 1]]


@pytest.mark.parametrize("i", [1, 4, 8])
def test_gls_binary(i):
    out = generalized_ls(H23, i)
    assert len(out) == 2048 and verify_perfect_explicit(out).passed


def test_gls_ternary_varying_sigma():
    a = generalized_ls(H32, 2, SigmaMap("seeded", seed=4))
    b = generalized_ls(H32, 2, SigmaMap("seeded", seed=5))
    assert len(a) == 59049 and verify_perfect_explicit(a).passed
    assert verify_perfect_explicit(b).passed
    assert a != b


def test_gls_errors():
    with pytest.raises(ConstructionError):
        generalized_ls(H23, 9)
    with pytest.raises(ConstructionError):
        generalized_ls(H23, 0)
    with pytest.raises(ConstructionError):
        generalized_ls(H32, 1, SigmaMap("table", table=(CYCLE3,)))


# -- full rank -----------------------------------------------------------------


def test_xi_map():
    code = build_hamming(3, 3)
    for j in (1, 5, 13):
        h = code.order.column(j)
        assert xi_map(code, h) == FqVector.unit(code.field, 13, j)
        assert xi_map(code, code.field.mul[2, h]) == FqVector.unit(code.field, 13, j, 2)
    with pytest.raises(Exception):
        xi_map(code, np.zeros(3, dtype=np.uint8))


def _binary_family_by_hand(m):
    """Binary c_j from integer arithmetic: h_k = 2^(m-k), xi(z) = e_z."""
    h = {k: 1 << (m - k) for k in range(1, m + 1)}

    def idx(*ks):
        z = 0
        for k in ks:
            z ^= h[k]
        return z

    out = []
    for j in range(1, m + 1):
        if j == 1:
            pts = [idx(1), idx(1, 2, 3), idx(1, 2, 4), idx(1, 3, 4)]
        elif j == 2:
            pts = [idx(1), idx(2), idx(1, 3, 4), idx(2, 3, 4)]
        elif j == 4:
            pts = [idx(k) for k in (1, 2, 3, 4)] + [idx(1, 2, 3), idx(1, 2, 4), idx(1, 3, 4), idx(2, 3, 4)]
        elif j % 2:
            pts = [idx(k) for k in range(1, j + 1)] + [idx(*range(1, j + 1))]
        else:
            pts = [idx(k) for k in range(1, j + 1)] + [idx(*range(1, j // 2 + 1)), idx(*range(j // 2 + 1, j + 1))]
        v = [0] * (2**m - 1)
        for p in pts:
            v[p - 1] ^= 1
        out.append(tuple(v))
    return out


@pytest.mark.parametrize("m", [4, 5, 6, 7])
def test_binary_family_matches_hand_expansion(m):
    code = build_hamming(2, m)
    got = [tuple(c.symbols.tolist()) for c in fullrank_vectors(code, "char2")]
    assert got == _binary_family_by_hand(m)
    w = [weight(c) for c in fullrank_vectors(code)]
    expect = [4, 4, 4, 8] + [j + 1 if j % 2 else j + 2 for j in range(5, m + 1)]
    assert w == expect


@pytest.mark.parametrize("q,m,variant", [(2, 4, "char2"), (4, 4, "char2"), (3, 4, "general"),
                                         (5, 4, "general"), (3, 5, "general"), (4, 4, "general")])
def test_family_in_hamming_code(q, m, variant):
    code = build_hamming(q, m)
    cs = fullrank_vectors(code, variant)
    assert len(cs) == m
    for j, c in enumerate(cs):
        assert not code.syndromes(c.symbols[None, :]).any()
        assert c.symbols[code.distinguished[j] - 1] == 1


def test_family_errors():
    with pytest.raises(ConstructionError):
        fullrank_vectors(build_hamming(2, 3))
    with pytest.raises(ConstructionError):
        fullrank_vectors(build_hamming(3, 4), "char2")


def test_fullrank_binary():
    code = fullrank_code(2, 4, [SWAP] * 4)
    out = implicit_enumerate(code)
    assert len(out) == 2048
    assert verify_perfect_explicit(out).passed
    assert rank_mod_p(out.words.tolist(), 2) == 15


def test_fullrank_preconditions():
    with pytest.raises(ConstructionError):
        fullrank_code(2, 4, [SWAP, SWAP, SWAP, FieldPermutation((0, 1))])
    with pytest.raises(ConstructionError):
        fullrank_code(2, 3, [SWAP] * 3)
    with pytest.raises(ConstructionError):
        fullrank_code(3, 4, [CYCLE3] * 3)


def test_switched_representatives_independent_and_outside_hamming():
    for q, m, sig in [(2, 4, SWAP), (3, 4, CYCLE3), (2, 5, SWAP)]:
        code = fullrank_code(q, m, [sig] * m)
        reps = np.vstack([r.symbols for r in code.switched_representatives()])
        assert rank_of(code.field, reps) == m
        assert not code.base.contains(reps).any()
        assert code.contains(reps).all()


def test_implicit_membership_examples():
    code = fullrank_code(3, 4, [CYCLE3] * 4)
    c1 = code.family[0].shift
    rep = FqVector(code.field, apply_at(c1.symbols, code.family[0].i, code.family[0].sigma))
    assert implicit_membership(code, rep)
    assert not implicit_membership(code, c1)
    assert implicit_membership(code, code.base.zero())
    with pytest.raises(ConstructionError):
        implicit_membership(code, FqVector.zeros(code.field, 5))


def test_implicit_enumerate_cases():
    base = build_hamming(2, 3)
    assert implicit_enumerate(ImplicitSwitchedCode(base, ())) == base.codewords()
    with pytest.raises(CapExceeded):
        implicit_enumerate(fullrank_code(3, 4, [CYCLE3] * 4))


def test_inadmissible_family_rejected():
    base = build_hamming(2, 4)
    comp = principal_basis(base, 1)
    fam = (SwitchedCoset(comp, SWAP), SwitchedCoset(comp, SWAP))
    with pytest.raises(ConstructionError):
        ImplicitSwitchedCode(base, fam)
    ImplicitSwitchedCode(base, fam, validate=False)


@settings(max_examples=15)
@given(st.lists(st.sampled_from([(1, 0, 2), (2, 0, 1), (0, 2, 1)]), min_size=4, max_size=4))
def test_ternary_full_rank_any_sigma_with_one_moved(tables):
    sig = [FieldPermutation(t) for t in tables]
    code = fullrank_code(3, 4, sig)
    reps = np.vstack([r.symbols for r in code.switched_representatives()])
    assert code.contains(reps).all() and not code.base.contains(reps).any()


@settings(max_examples=20)
@given(st.integers(0, 2**64 - 1))
def test_implicit_and_explicit_membership_agree(seed):
    code = fullrank_code(2, 4, [SWAP] * 4)
    explicit = implicit_enumerate(code)
    x = random_words(seed, np.arange(64), 15, 2)
    assert np.array_equal(code.contains(x), explicit.contains_words(x))


def test_default_sigma():
    assert default_sigma(2, "swap").table == (1, 0)
    assert default_sigma(5, "cycle").table == (0, 2, 3, 4, 1)
    with pytest.raises(ConstructionError):
        default_sigma(3, "swap")
    with pytest.raises(ConstructionError):
        default_sigma(2, "cycle")
