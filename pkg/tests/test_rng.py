import numpy as np
from hypothesis import given, strategies as st

from oracles import splitmix64_reference
from perfect_forge.rng import SplitMix64, mix64, random_words, stream_value, stream_values, substream

U64 = st.integers(0, 2**64 - 1)


def test_first_output_seed_zero():
    assert stream_value(0, 0) == 0xE220A8397B1DCDAF
    assert SplitMix64(0).next() == 0xE220A8397B1DCDAF


@given(U64)
def test_sequential_matches_reference(seed):
    gen = SplitMix64(seed)
    assert [gen.next() for _ in range(8)] == splitmix64_reference(seed, 8)


@given(U64, st.integers(0, 10**6))
def test_counter_addressing(seed, k):
    assert stream_value(seed, k) == splitmix64_reference(seed, k + 1)[-1]


@given(st.lists(U64, min_size=1, max_size=5), st.lists(st.integers(0, 2**40), min_size=1, max_size=5))
def test_vectorised_matches_scalar(seeds, ks):
    got = stream_values(np.array(seeds, dtype=np.uint64)[:, None], np.array(ks, dtype=np.uint64)[None, :])
    assert got.tolist() == [[stream_value(s, k) for k in ks] for s in seeds]


def test_block_continues_stream():
    a = SplitMix64(42)
    head = [a.next() for _ in range(3)]
    blk = a.block((2, 3), 1000)
    ref = splitmix64_reference(42, 9)
    assert head == ref[:3]
    assert blk.tolist() == [[v % 1000 for v in ref[3:6]], [v % 1000 for v in ref[6:9]]]
    assert a.counter == 9


def test_random_words_trial_addressing():
    full = random_words(7, np.arange(10), 12, 5)
    part = random_words(7, np.array([3, 8]), 12, 5)
    assert np.array_equal(full[[3, 8]], part)
    assert full.max() < 5 and full.dtype == np.uint8
    row = [stream_value(substream(7, 4), k) % 5 for k in range(12)]
    assert full[4].tolist() == row


def test_mix64_masks_input():
    assert mix64(2**64 + 5) == mix64(5)
