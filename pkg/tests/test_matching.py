import itertools

import numpy as np
import pytest

from concavematch.core import InstanceError, make_rng, random_instance, validate_instance
from concavematch.matching import (
    assignment_cost, check_monotonicity, check_noncrossing, crossing_matrix, match_bruteforce,
    match_cost, match_generic, match_noncrossing_dp, noncrossing_pairing,
)
from conftest import random_instances

SOLVERS = [match_bruteforce, match_generic, match_noncrossing_dp]


@pytest.mark.parametrize("solve", SOLVERS)
def test_single_pair(solve):
    res = solve(validate_instance([0.2], [0.7], 0.5))
    assert res.cost == pytest.approx(0.5 ** 0.5) and res.sigma == (0,)


@pytest.mark.parametrize("solve", SOLVERS)
def test_equal_families_cost_zero(solve):
    xs = [0.1, 0.7, 0.4]
    ys = [0.4, 0.1, 0.7]
    res = solve(validate_instance(xs, ys, 0.6))
    assert res.cost == 0.0
    assert all(xs[i] == ys[j] for i, j in enumerate(res.sigma))


@pytest.mark.parametrize("solve", SOLVERS)
def test_nesting_beats_monotone(solve):
    inst = validate_instance([0, 0.6], [0.5, 1.0], 0.5)
    res = solve(inst)
    assert res.cost == pytest.approx(1 + 0.1 ** 0.5)
    assert res.pairs(inst) == [(0.0, 1.0), (0.6, 0.5)]


@pytest.mark.parametrize("solve", SOLVERS)
def test_interleaved(solve):
    res = solve(validate_instance([0.1, 0.3], [0.2, 0.4], 0.7))
    assert res.cost == pytest.approx(2 * 0.1 ** 0.7)


def test_solvers_agree_on_random_instances():
    for inst in random_instances(21, 200, (1, 7), [0.3, 0.5, 0.8, 1.0]):
        b = match_bruteforce(inst).cost
        assert match_generic(inst).cost == pytest.approx(b, abs=1e-9)
        assert match_noncrossing_dp(inst).cost == pytest.approx(b, abs=1e-9)


def test_dp_matches_generic_at_moderate_n():
    for k in range(5):
        inst = random_instance(make_rng(22, k), 300, [0.2, 0.5, 0.9, 0.35, 0.7][k])
        assert match_noncrossing_dp(inst).cost == pytest.approx(match_generic(inst).cost, abs=1e-9)


def test_dp_handles_ties():
    inst = validate_instance([0.5, 0.5, 0.2], [0.5, 0.2, 0.9], 0.5)
    assert match_noncrossing_dp(inst).cost == pytest.approx(match_bruteforce(inst).cost, abs=1e-12)


def test_bruteforce_size_cap():
    with pytest.raises(InstanceError):
        match_bruteforce(random_instance(make_rng(1), 10, 0.5))


def test_assignment_cost_and_match_cost():
    inst = validate_instance([0, 0.6], [0.5, 1.0], 0.5)
    assert assignment_cost(inst, (0, 1)) == pytest.approx(0.5 ** 0.5 + 0.4 ** 0.5)
    assert match_cost(inst) == pytest.approx(1 + 0.1 ** 0.5)


def test_noncrossing_pairing_unbalanced():
    with pytest.raises(InstanceError):
        noncrossing_pairing([0.1, 0.2], [1, 1], 0.5)


def test_noncrossing_pairing_is_involution():
    r = make_rng(5)
    pos = r.random(40)
    sign = np.r_[np.ones(20), -np.ones(20)].astype(int)
    _, partner = noncrossing_pairing(pos, sign, 0.4)
    assert np.array_equal(partner[partner], np.arange(40))
    assert np.all(sign[partner] == -sign)


def test_monotonicity_check():
    inst = validate_instance([0, 0.6], [0.5, 1.0], 0.5)
    assert check_monotonicity(inst, match_bruteforce(inst).sigma)
    # pairs (0 -> 0.5, 0.6 -> 1.0) cross and lose to the nested pairing
    assert not check_monotonicity(inst, (0, 1))
    assert check_monotonicity(validate_instance([0.3], [0.1], 0.5), (0,))


def test_noncrossing_check():
    nested = validate_instance([0, 0.5], [1, 0.6], 0.5)
    assert check_noncrossing(nested, (0, 1))
    disjoint = validate_instance([0, 0.5], [0.1, 0.6], 0.5)
    assert check_noncrossing(disjoint, (0, 1))
    crossing = validate_instance([0, 0.5], [0.7, 1.0], 0.5)
    assert not check_noncrossing(crossing, (0, 1))


def test_crossing_matrix_symmetric_and_matches_definition():
    r = make_rng(6)
    a, b = r.random(12), r.random(12)
    M = crossing_matrix(a, b)
    assert np.array_equal(M, M.T) and not M.diagonal().any()
    for i, j in itertools.combinations(range(12), 2):
        (l1, r1), (l2, r2) = sorted((a[i], b[i])), sorted((a[j], b[j]))
        expect = (l1 < l2 < r1 < r2) or (l2 < l1 < r2 < r1)
        assert bool(M[i, j]) == expect


def test_optimal_matchings_have_structure():
    for inst in random_instances(23, 150, (1, 7), [0.3, 0.5, 0.8]):
        sigma = match_bruteforce(inst).sigma
        assert check_monotonicity(inst, sigma)
        assert check_noncrossing(inst, sigma)
