import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heap_model import run_sequence
from pspath.heap import FibonacciHeap
from pspath.rational import INF


def test_insert_find_min():
    h = FibonacciHeap()
    assert h.find_min() is None and len(h) == 0
    h.insert(5)
    assert h.find_min()[0] == 5


def test_infinite_keys():
    h = FibonacciHeap()
    h.insert(INF)
    h.insert(3)
    assert h.find_min()[0] == 3
    h.delete_min()
    assert h.find_min()[0] is INF


def test_duplicates():
    h = FibonacciHeap()
    for k in (2, 7, 2):
        h.insert(k)
    assert h.find_min()[0] == 2


def test_decrease_key():
    h = FibonacciHeap()
    h.insert(5)
    x = h.insert(7)
    h.decrease_key(x, 3)
    assert h.find_min()[0] == 3
    h.decrease_key(x, 3)  # equal key: no-op
    assert h.find_min()[0] == 3
    with pytest.raises(ValueError):
        h.decrease_key(x, 4)


def test_reassign_key():
    h = FibonacciHeap()
    x = h.insert(3, "x")
    h.insert(5, "y")
    h.reassign_key(x, 9)
    assert h.find_min() == (5, "y")
    h.reassign_key(x, 9)
    assert len(h) == 2 and x.key == 9


def test_delete_min_order_and_ties():
    h = FibonacciHeap()
    h.insert(2, "b")
    h.insert(1, "a")
    assert h.delete_min() == (1, "a")
    assert h.delete_min() == (2, "b")
    assert h.delete_min() is None
    for i in range(10):
        h.insert(0, i)
    assert [h.delete_min()[1] for _ in range(10)] == list(range(10))


def test_explicit_tiebreak():
    h = FibonacciHeap()
    h.insert(1, "late", tiebreak=9)
    h.insert(1, "early", tiebreak=2)
    assert h.find_min() == (1, "early")


def test_stale_handle():
    h = FibonacciHeap()
    x = h.insert(1)
    h.delete(x)
    with pytest.raises(ValueError):
        h.decrease_key(x, 0)
    with pytest.raises(ValueError):
        h.delete(x)


def test_heapsort():
    rng = random.Random(1)
    keys = [rng.randrange(10**9) for _ in range(10_000)]
    h = FibonacciHeap()
    for k in keys:
        h.insert(k)
    assert [h.delete_min()[0] for _ in keys] == sorted(keys)


def test_many_inserts_min():
    rng = random.Random(2)
    h = FibonacciHeap()
    best = None
    for _ in range(100_000):
        k = rng.randrange(10**12)
        h.insert(k)
        best = k if best is None else min(best, k)
    assert h.find_min()[0] == best


def test_long_interleaved_sequence():
    assert run_sequence(random.Random(3), 100_000, key_range=10**6, p_insert=0.25) == 100_000


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 60))
def test_model_hypothesis(seed, length):
    run_sequence(random.Random(seed), length, key_range=8)
