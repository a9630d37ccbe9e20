import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hiddenpartition.boolfn import and_fn, parity, row_of_point
from hiddenpartition.hardness import (
    MessageSet,
    compose_blocks,
    decompose_blocks,
    expected_tvd,
    full_cube,
    induced_distributions,
    kkl_check,
    r_hat_bruteforce,
    r_hat_formula,
    random_message_set,
    tvd,
    u_bruteforce,
    u_formula,
)
from hiddenpartition.instances import PartitionParams
from hiddenpartition.rng import fisher_yates, stream

PARAMS_4 = PartitionParams(4, 2, Fraction(1))
IDENTITY_4 = (1, 2, 3, 4)


def random_sigma(n, rng):
    return tuple(int(v) for v in fisher_yates(n, rng))


# --- message sets ------------------------------------------------------------


def test_message_set_validation():
    with pytest.raises(ValueError):
        MessageSet(3, frozenset())
    with pytest.raises(ValueError):
        MessageSet(3, frozenset({8}))


def test_characteristic_spectrum_parseval():
    # for a 0/1 indicator, sum of squared coefficients equals |A|/2^n
    rng = stream(0, "ms")
    for _ in range(20):
        n = 6
        ms = random_message_set(n, int(rng.integers(1, 65)), rng)
        spectrum = ms.characteristic_spectrum()
        assert np.sum(spectrum**2) == pytest.approx(len(ms) / 2**n, abs=1e-12)


# --- induced distributions -----------------------------------------------------


def test_point_mass_for_singleton():
    x = (1, -1, 1, 1)
    ms = MessageSet(4, frozenset({row_of_point(x)}))
    dists = induced_distributions(parity(2), ms, IDENTITY_4, PARAMS_4)
    z_mask = 0b01  # z = (-1, +1)
    assert dists.p[z_mask] == 1.0
    assert dists.q[0b10] == 1.0
    assert tvd(dists.p, dists.q) == 2.0


def test_two_element_example():
    members = frozenset(
        {row_of_point((1, 1, 1, 1)), row_of_point((1, -1, 1, 1))}
    )
    dists = induced_distributions(parity(2), MessageSet(4, members), IDENTITY_4, PARAMS_4)
    assert dists.p[0b00] == 0.5
    assert dists.p[0b01] == 0.5
    assert tvd(dists.p, dists.q) == 2.0  # disjoint supports


def test_full_cube_distributions_coincide():
    dists = induced_distributions(parity(2), full_cube(4), IDENTITY_4, PARAMS_4)
    assert tvd(dists.p, dists.q) == 0.0


@given(st.integers(min_value=0, max_value=2**31))
def test_complement_relation(seed):
    rng = stream(seed, "c")
    params = PartitionParams(6, 2, Fraction(2, 3))
    ms = random_message_set(6, int(rng.integers(1, 65)), rng)
    dists = induced_distributions(parity(2), ms, random_sigma(6, rng), params)
    full = 2**dists.length - 1
    for mask in range(2**dists.length):
        assert dists.q[mask] == dists.p[full ^ mask]
    assert dists.p.sum() == pytest.approx(1.0, abs=1e-12)
    assert dists.q.sum() == pytest.approx(1.0, abs=1e-12)


def test_tvd_bounds_and_mismatch():
    assert tvd(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 2.0
    assert tvd(np.array([0.5, 0.5]), np.array([0.5, 0.5])) == 0.0
    with pytest.raises(ValueError):
        tvd(np.array([1.0]), np.array([0.5, 0.5]))


def test_expected_tvd_endpoints():
    rng = stream(1, "tvd")
    est = expected_tvd(parity(2), full_cube(4), PARAMS_4, 10, rng)
    assert est.mean == 0.0 and est.stderr == 0.0
    singleton = MessageSet(4, frozenset({3}))
    est = expected_tvd(parity(2), singleton, PARAMS_4, 10, rng)
    assert est.mean == 2.0 and est.stderr == 0.0


def test_expected_tvd_trend_with_set_size():
    # larger message sets give smaller average distance
    params = PartitionParams(10, 2, Fraction(1))
    wins = 0
    for seed in range(10):
        rng = stream(seed, "trend")
        small = random_message_set(10, 2**3, rng)
        large = random_message_set(10, 2**8, rng)
        small_est = expected_tvd(parity(2), small, params, 20, rng)
        large_est = expected_tvd(parity(2), large, params, 20, rng)
        wins += int(large_est.mean < small_est.mean)
    assert wins >= 9


# --- r-hat -------------------------------------------------------------------


def test_r_hat_even_sets_are_zero():
    rng = stream(2, "rhat")
    ms = random_message_set(4, 5, rng)
    assert r_hat_formula(parity(2), ms, IDENTITY_4, [], PARAMS_4) == 0.0
    assert r_hat_formula(parity(2), ms, IDENTITY_4, [1, 2], PARAMS_4) == 0.0
    assert r_hat_bruteforce(parity(2), ms, IDENTITY_4, [1, 2], PARAMS_4) == pytest.approx(
        0.0, abs=1e-15
    )


def test_r_hat_half_cube_example():
    members = frozenset(m for m in range(16) if not (m & 1))  # x_1 = +1
    ms = MessageSet(4, members)
    for v in ([1], [2]):
        formula = r_hat_formula(parity(2), ms, IDENTITY_4, v, PARAMS_4)
        brute = r_hat_bruteforce(parity(2), ms, IDENTITY_4, v, PARAMS_4)
        assert abs(formula - brute) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**31))
def test_r_hat_formula_matches_bruteforce(seed):
    rng = stream(seed, "rh")
    params = PartitionParams(8, 2, Fraction(1))
    f = parity(2) if seed % 2 else and_fn(2)
    ms = random_message_set(8, int(rng.integers(1, 257)), rng)
    sigma = random_sigma(8, rng)
    v_mask = int(rng.integers(1, 2**params.active_blocks))
    v = [j + 1 for j in range(params.active_blocks) if (v_mask >> j) & 1]
    formula = r_hat_formula(f, ms, sigma, v, params)
    brute = r_hat_bruteforce(f, ms, sigma, v, params)
    assert abs(formula - brute) <= 1e-10


def test_r_hat_guards():
    ms = MessageSet(4, frozenset({0}))
    with pytest.raises(ValueError):
        r_hat_formula(parity(2), ms, IDENTITY_4, [5], PARAMS_4)


# --- block decomposition -------------------------------------------------------


def test_decompose_blocks_round_trip():
    rng = stream(3, "dec")
    n, t = 12, 3
    for _ in range(50):
        mask = int(rng.integers(0, 2**n))
        positions = frozenset(i + 1 for i in range(n) if (mask >> i) & 1)
        if not positions:
            continue
        decomposition = decompose_blocks(positions, n, t)
        assert compose_blocks(decomposition.blocks, t) == positions
        for j, slots in decomposition.nonempty:
            assert slots and all(1 <= k <= t for k in slots)


def test_decompose_blocks_bounds():
    with pytest.raises(ValueError):
        decompose_blocks({13}, 12, 3)


# --- u correlation --------------------------------------------------------------


def test_u_example_full_block():
    params = PARAMS_4
    w = (1, 1)
    value = u_bruteforce(parity(2), IDENTITY_4, w, [1, 2], params)
    expected = (1 / math.factorial(4)) / 4  # p_sigma / 2^2 * |f^({1,2})|
    assert value == pytest.approx(expected, abs=1e-15)
    assert u_formula(parity(2), IDENTITY_4, w, [1, 2], params) == pytest.approx(
        expected, abs=1e-15
    )


def test_u_zero_outside_active_prefix():
    params = PartitionParams(4, 2, Fraction(1, 2))
    # sigma sends position 1 to 3, outside the active prefix [2]
    sigma = (3, 1, 2, 4)
    assert u_formula(parity(2), sigma, (1,), [1], params) == 0.0
    assert u_bruteforce(parity(2), sigma, (1,), [1], params) == pytest.approx(0.0, abs=1e-18)


def test_u_zero_even_nonempty_blocks():
    params = PARAMS_4
    value = u_formula(parity(2), IDENTITY_4, (1, -1), [1, 2, 3, 4], params)
    assert value == 0.0
    brute = u_bruteforce(parity(2), IDENTITY_4, (1, -1), [1, 2, 3, 4], params)
    assert brute == pytest.approx(0.0, abs=1e-18)


def test_u_requires_balanced_function():
    with pytest.raises(ValueError):
        u_formula(and_fn(2), IDENTITY_4, (1, 1), [1], PARAMS_4)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2**31))
def test_u_formula_matches_bruteforce(seed):
    rng = stream(seed, "u")
    params = PartitionParams(8, 2, Fraction(1, 2))
    sigma = random_sigma(8, rng)
    w = tuple(int(v) for v in 1 - 2 * rng.integers(0, 2, size=params.active_blocks))
    mask = int(rng.integers(0, 2**8))
    positions = [i + 1 for i in range(8) if (mask >> i) & 1]
    formula = u_formula(parity(2), sigma, w, positions, params)
    brute = u_bruteforce(parity(2), sigma, w, positions, params)
    assert abs(formula - brute) <= 1e-12


def test_u_sign_matches_bruteforce_on_constructed_case():
    # engineer a nonzero case: sigma(S) = one full block inside the prefix
    params = PartitionParams(8, 2, Fraction(1, 2))
    rng = stream(9, "ucase")
    sigma = random_sigma(8, rng)
    inverse = {image: i + 1 for i, image in enumerate(sigma)}
    positions = [inverse[1], inverse[2]]  # sigma(S) = {1, 2} = block 1
    for w1 in (1, -1):
        w = (w1, 1)
        formula = u_formula(parity(2), sigma, w, positions, params)
        brute = u_bruteforce(parity(2), sigma, w, positions, params)
        assert formula == pytest.approx(brute, abs=1e-18)
        assert formula != 0.0


# --- spectral mass inequality ----------------------------------------------------


def test_kkl_full_cube_equality():
    report = kkl_check(full_cube(6), [0.1, 0.5, 0.9])
    assert report.violations == 0
    for lhs, rhs in zip(report.lhs, report.rhs):
        assert lhs == pytest.approx(1.0, abs=1e-12)
        assert rhs == pytest.approx(1.0, abs=1e-12)


def test_kkl_singleton_closed_form():
    n = 8
    report = kkl_check(MessageSet(n, frozenset({17})), [0.1 * k for k in range(1, 10)])
    assert report.violations == 0
    for delta, lhs, rhs in zip(report.deltas, report.lhs, report.rhs):
        assert lhs == pytest.approx(((1 + delta) / 4) ** n, abs=1e-12)
        assert rhs == pytest.approx(2 ** (-2 * n / (1 + delta)), abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2**31))
def test_kkl_never_violated(seed):
    rng = stream(seed, "kkl")
    n = int(rng.integers(4, 11))
    ms = random_message_set(n, int(rng.integers(1, 2**n + 1)), rng)
    report = kkl_check(ms, [0.1 * k for k in range(1, 10)])
    assert report.violations == 0
