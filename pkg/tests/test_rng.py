import numpy as np
import pytest
from hypothesis import given, strategies as st

from hiddenpartition.rng import coin, fisher_yates, stream


def test_same_key_reproduces():
    a = stream(42, "instance", 3).integers(0, 1000, size=10)
    b = stream(42, "instance", 3).integers(0, 1000, size=10)
    assert np.array_equal(a, b)


def test_distinct_labels_differ():
    a = stream(42, "instance", 0).integers(0, 2**30, size=8)
    b = stream(42, "instance", 1).integers(0, 2**30, size=8)
    c = stream(42, "protocol", 0).integers(0, 2**30, size=8)
    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)


@given(st.integers(min_value=1, max_value=200), st.integers(min_value=0, max_value=2**31))
def test_fisher_yates_is_permutation(n, seed):
    perm = fisher_yates(n, stream(seed, "p"))
    assert sorted(perm) == list(range(1, n + 1))


def test_fisher_yates_uniform_smoke():
    # each image roughly equally often in each slot
    counts = np.zeros((4, 4))
    for trial in range(4000):
        perm = fisher_yates(4, stream(9, trial))
        for slot, image in enumerate(perm):
            counts[slot, image - 1] += 1
    assert np.all(np.abs(counts / 4000 - 0.25) < 0.05)


def test_fisher_yates_rejects_nonpositive():
    with pytest.raises(ValueError):
        fisher_yates(0, stream(0))


def test_coin_values():
    values = {coin(stream(5, i)) for i in range(64)}
    assert values == {-1, 1}
