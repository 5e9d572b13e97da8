import itertools

import numpy as np
import pytest

from concavematch.core import GridFunction, InstanceError, make_rng
from concavematch.seminorms import (
    holder_seminorm, oscillation, p_variation, p_variation_bounds, p_variation_bruteforce,
    refine, young_integral,
)

G3 = np.array([0.0, 0.5, 1.0])


def test_holder_identity_lipschitz():
    assert holder_seminorm(GridFunction(G3, G3), 1.0) == pytest.approx(1.0)


def test_holder_constant():
    assert holder_seminorm(GridFunction(G3, [2.0, 2.0, 2.0]), 0.3) == 0.0


def test_holder_tent():
    f = GridFunction(G3, [0.0, 1.0, 0.0])
    assert holder_seminorm(f, 0.5) == pytest.approx(np.sqrt(2))


def test_holder_matches_pairwise_enumeration():
    r = make_rng(4)
    t = np.sort(r.random(30))
    v = r.normal(size=30)
    f = GridFunction(t, v)
    ref = max(abs(v[i] - v[j]) / abs(t[i] - t[j]) ** 0.6
              for i, j in itertools.combinations(range(30), 2))
    assert holder_seminorm(f, 0.6) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("vals, expected", [([0, 1, 0], 1), ([1, 1, 1], 0), ([-2, 3, 1], 5)])
def test_oscillation(vals, expected):
    assert oscillation(GridFunction(G3, vals)) == expected


def test_pvar_alternating_walk():
    f = GridFunction(np.linspace(0, 1, 5), [0, 1, 0, 1, 0])
    assert p_variation(f, 1.0) == pytest.approx(4.0)
    assert p_variation(f, 2.0) == pytest.approx(2.0)


@pytest.mark.parametrize("p", [1.0, 1.7, 3.0, np.inf])
def test_pvar_monotone_is_oscillation(p):
    f = GridFunction(G3, [0, 0.3, 1])
    assert p_variation(f, p) == pytest.approx(1.0)


def test_pvar_rejects_small_p():
    with pytest.raises(InstanceError):
        p_variation(GridFunction(G3, G3), 0.5)


def test_pvar_equals_bruteforce():
    for k in range(60):
        r = make_rng(9, k)
        n = int(r.integers(2, 12))
        f = GridFunction(np.arange(n, dtype=float), r.normal(size=n))
        p = float(r.choice([1.0, 1.25, 2.0, 2.5, 4.0]))
        assert p_variation(f, p) == p_variation_bruteforce(f, p)


def test_pvar_bracket_contains_exact():
    r = make_rng(10)
    v = np.cumsum(r.normal(size=3000))
    f = GridFunction(np.linspace(0, 1, 3000), v)
    for p in (1.5, 2.5):
        exact = p_variation(f, p)
        lo, hi = p_variation_bounds(f, p, block=128)
        assert lo <= exact * (1 + 1e-12) and exact <= hi * (1 + 1e-12)


def test_refine_interpolates():
    f = GridFunction([0, 1], [0, 1])
    g = GridFunction([0, 0.5, 1], [0, 2, 0])
    fr, gr = refine(f, g)
    assert list(fr.grid) == [0, 0.5, 1] and fr(0.5) == 0.5
    assert np.array_equal(gr.values, g.values)


def test_young_constant_against_bridge():
    g = GridFunction(np.linspace(0, 1, 7), [0, 1, -2, 0.5, 3, 1, 0])
    assert young_integral(GridFunction(g.grid, np.ones(7)), g) == pytest.approx(0.0, abs=1e-14)


def test_young_unit_jump():
    grid = np.array([0.0, 0.25, 0.5, 0.75, 1.0])
    g = GridFunction(grid, [0, 0, 1, 1, 1])
    f = GridFunction(grid, grid)
    assert young_integral(f, g) == pytest.approx(0.5)
    assert young_integral(f, g, rule="left") == pytest.approx(0.25)


def test_young_identity_converges():
    for N in (10, 100, 1000):
        t = np.linspace(0, 1, N + 1)
        f = GridFunction(t, t)
        left = young_integral(f, f, rule="left")
        assert abs(left - 0.5) <= 1 / (2 * N) + 1e-12
        assert abs(young_integral(f, f) - 0.5) <= 1 / (2 * N) + 1e-12


def test_young_needs_common_grid():
    with pytest.raises(InstanceError):
        young_integral(GridFunction([0, 1], [0, 1]), GridFunction([0, 0.5, 1], [0, 1, 0]))
    with pytest.raises(ValueError):
        young_integral(GridFunction([0, 1], [0, 1]), GridFunction([0, 1], [0, 1]), rule="mid")
