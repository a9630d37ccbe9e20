import hypothesis
import numpy as np
import pytest

from hiddenpartition import boolfn

hypothesis.settings.register_profile(
    "default", deadline=None, max_examples=50
)
hypothesis.settings.load_profile("default")


def random_table(t: int, rng: np.random.Generator) -> boolfn.BooleanFunction:
    table = 1 - 2 * rng.integers(0, 2, size=2**t)
    return boolfn.BooleanFunction(t, tuple(int(v) for v in table))


def all_symmetric_specs(t: int):
    """Every threshold configuration and both leading signs at arity t."""
    for mask in range(2**t):
        thresholds = tuple(k for k in range(t) if (mask >> k) & 1)
        for sign in (1, -1):
            yield boolfn.SymmetricSpec(t, thresholds, sign)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
