from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import poly_field
from perfect_forge.gf import (
    DEFAULT_MODULI,
    FieldElement,
    FieldError,
    FieldPermutation,
    all_permutations,
    field_arith,
    field_from_order,
    field_make,
    perm_make,
)

SUPPORTED = sorted(DEFAULT_MODULI)


def test_binary_field_is_xor_and_and():
    f = field_make(2, 1)
    assert f.add.tolist() == [[0, 1], [1, 0]]
    assert f.mul.tolist() == [[0, 0], [0, 1]]


def test_f4_product_of_x_with_itself():
    f = field_make(2, 2)
    assert f.mul[2, 3 - 1] == 3  # x*x = x+1


# frozen from the polynomial oracle in tests/oracles.py
F4_MUL = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]]
F8_ROW2 = [0, 2, 4, 6, 3, 1, 7, 5]
F9_ROW3 = [0, 3, 6, 4, 7, 1, 8, 2, 5]


def test_frozen_extension_tables():
    assert field_make(2, 2).mul.tolist() == F4_MUL
    assert field_make(2, 3).mul[2].tolist() == F8_ROW2
    assert field_make(3, 2).mul[3].tolist() == F9_ROW3


@pytest.mark.parametrize("pk", SUPPORTED)
def test_tables_match_polynomial_oracle(pk):
    p, k = pk
    f = field_make(p, k)
    add, mul = poly_field(p, list(f.modulus))
    q = f.q
    assert f.add.tolist() == [[add(a, b) for b in range(q)] for a in range(q)]
    assert f.mul.tolist() == [[mul(a, b) for b in range(q)] for a in range(q)]


@pytest.mark.parametrize("pk", SUPPORTED)
def test_field_axioms_exhaustive(pk):
    f = field_make(*pk)
    q = f.q
    a, b, c = np.meshgrid(np.arange(q), np.arange(q), np.arange(q), indexing="ij")
    assert np.array_equal(f.add[f.add[a, b], c], f.add[a, f.add[b, c]])
    assert np.array_equal(f.mul[a, f.add[b, c]], f.add[f.mul[a, b], f.mul[a, c]])
    nz = np.arange(1, q)
    assert (f.mul[nz, f.inv[nz]] == 1).all()
    assert (f.add[np.arange(q), f.neg[np.arange(q)]] == 0).all()


@pytest.mark.parametrize("pk", [pk for pk in SUPPORTED if pk[1] > 1])
def test_exp_log_are_inverse(pk):
    f = field_make(*pk)
    nz = np.arange(1, f.q)
    assert (f.exp_table[f.log_table[nz]] == nz).all()


def test_field_errors():
    with pytest.raises(FieldError):
        field_make(4, 1)
    with pytest.raises(FieldError):
        field_make(17, 1)
    with pytest.raises(FieldError):
        field_make(2, 5)
    with pytest.raises(FieldError):
        field_make(2, 2, modulus=[1, 0, 1])  # x^2 + 1 = (x+1)^2
    with pytest.raises(FieldError):
        field_make(2, 2, modulus=[1, 1, 0])  # not degree 2


def test_field_arith_examples():
    f3, f4, f5 = field_make(3), field_make(2, 2), field_make(5)
    assert field_arith(f3.element(2), f3.element(2), "add").idx == 1
    assert field_arith(f4.element(2), None, "inv").idx == 3
    assert field_arith(f5.element(2), None, "neg").idx == 3
    with pytest.raises(ZeroDivisionError):
        field_arith(f5.element(2), f5.element(0), "div")
    with pytest.raises(ZeroDivisionError):
        field_arith(f5.element(0), None, "inv")
    with pytest.raises(FieldError):
        field_arith(f3.element(1), f5.element(1), "add")


def test_element_operators():
    f = field_make(7)
    a, b = FieldElement(f, 3), FieldElement(f, 5)
    assert (a + b).idx == 1 and (a - b).idx == 5 and (a * b).idx == 1
    assert (a / b * b) == a
    assert (-a).idx == 4


def test_field_from_order():
    assert field_from_order(9).p == 3
    with pytest.raises(FieldError):
        field_from_order(6)


def test_perm_make_examples():
    swap = perm_make([1, 0])
    assert swap(0) == 1 and not swap.is_identity
    assert [p for p in all_permutations(2) if not p.is_identity] == [swap]
    s = perm_make([0, 2, 1])
    assert s(1) == 2 and not s.fixes_one
    with pytest.raises(FieldError):
        perm_make([0, 1, 1])
    with pytest.raises(FieldError):
        perm_make([0, 1], q=3)


@given(st.sampled_from([2, 3, 4, 5]).flatmap(lambda q: st.permutations(range(q))))
def test_inverse_then_compose_is_identity(table):
    p = FieldPermutation(tuple(table))
    assert p.compose(p.inverse()).is_identity
    assert p.inverse().compose(p).is_identity


def test_all_permutations_lexicographic():
    assert [p.table for p in all_permutations(3)] == list(permutations(range(3)))


@settings(max_examples=60)
@given(st.sampled_from([2, 3, 4, 5, 7, 8, 9, 11, 13, 16]), st.integers(0, 6), st.integers(0, 40), st.integers(0, 5),
       st.integers(0, 2**32 - 1))
def test_matmul_matches_table_accumulation(q, rows, inner, cols, seed):
    f = field_from_order(q)
    rng = np.random.default_rng(seed)
    a = rng.integers(0, q, (rows, inner)).astype(np.uint8)
    b = rng.integers(0, q, (inner, cols)).astype(np.uint8)
    ref = np.zeros((rows, cols), dtype=np.uint8)
    for j in range(inner):
        ref = f.add[ref, f.mul[a[:, j, None], b[j]]]
    assert np.array_equal(f.matmul(a, b), ref)
    assert np.array_equal(f.matmul(a[None], b)[0], ref)
