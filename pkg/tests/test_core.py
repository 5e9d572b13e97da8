import numpy as np
import pytest

from concavematch.core import (
    GridFunction, Instance, InstanceError, Interval, UNIT, check_alpha, counting_difference,
    format_instance, make_rng, parse_instance, random_instance, read_instance,
    validate_instance, write_instance,
)


def test_minimal_instance():
    inst = validate_instance([0.2], [0.7], 0.5, UNIT)
    assert inst.n == 1 and inst.strict


def test_duplicate_points_clear_strict_flag():
    inst = validate_instance([0.2, 0.2], [0.3, 0.4], 0.5)
    assert not inst.strict


def test_size_mismatch():
    with pytest.raises(InstanceError, match="size"):
        validate_instance([0.2], [0.3, 0.4], 0.5)


@pytest.mark.parametrize("xs, ys", [([], []), ([1.5], [0.2]), ([0.1], [-0.1]), ([np.nan], [0.2])])
def test_rejects_bad_points(xs, ys):
    with pytest.raises(InstanceError):
        validate_instance(xs, ys, 0.5)


@pytest.mark.parametrize("alpha", [0.0, -0.2, 1.01, np.nan])
def test_rejects_bad_alpha(alpha):
    with pytest.raises(InstanceError):
        check_alpha(alpha)


def test_alpha_one_admitted():
    assert check_alpha(1.0) == 1.0


def test_interval_checks():
    with pytest.raises(InstanceError):
        Interval(1.0, 1.0)
    assert 0.5 in Interval(0, 1) and 1.5 not in Interval(0, 1)
    assert Interval(-1, 3).length == 4


def test_sorted_copies_keep_original_order():
    inst = validate_instance([0.9, 0.1], [0.5, 0.3], 1.0)
    assert inst.xs == (0.9, 0.1)
    assert list(inst.sorted_xs) == [0.1, 0.9]
    assert list(inst.sorted_ys) == [0.3, 0.5]


def test_cost_matrix():
    inst = validate_instance([0.0, 0.6], [0.5, 1.0], 0.5)
    C = inst.cost_matrix()
    assert C.shape == (2, 2)
    assert C[0, 1] == pytest.approx(1.0) and C[1, 0] == pytest.approx(0.1 ** 0.5)


def test_validation_is_idempotent():
    a = validate_instance([0.3, 0.1], [0.2, 0.8], 0.4)
    b = validate_instance(a.xs, a.ys, a.alpha, a.interval)
    assert a == b


def test_grid_function_invariants():
    with pytest.raises(InstanceError):
        GridFunction([0.0], [1.0])
    with pytest.raises(InstanceError):
        GridFunction([0.0, 0.0, 1.0], [1, 2, 3])
    with pytest.raises(InstanceError):
        GridFunction([0.0, 1.0], [1.0])
    g = GridFunction([0, 0.5, 1], [1.0, 3.0, 1.0])
    assert g.is_bridge() and len(g) == 3
    assert g(0.25) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        g.values[0] = 5.0


def test_grid_function_arithmetic():
    f = GridFunction([0, 1], [1.0, 2.0])
    g = GridFunction([0, 1], [0.5, 0.5])
    assert np.allclose((f + g).values, [1.5, 2.5])
    assert np.allclose((f - g).values, [0.5, 1.5])
    assert np.allclose(f.scale(-2).values, [-2, -4])
    with pytest.raises(InstanceError):
        f + GridFunction([0, 2], [0, 0])


def test_counting_difference():
    inst = validate_instance([0.2], [0.7], 0.5)
    g = counting_difference(inst)
    assert g.is_bridge()
    assert list(g.grid) == [0.0, 0.2, 0.7, 1.0]
    assert list(g.values) == [0, 1, 0, 0]


def test_counting_difference_point_at_left_end():
    g = counting_difference(validate_instance([0.0], [0.5], 1.0))
    assert g.grid[0] < 0 and g.values[0] == 0 and g(0.0) == 1


def test_make_rng_streams():
    a = make_rng(7, 1, 2).random(4)
    assert np.array_equal(a, make_rng(7, 1, 2).random(4))
    assert not np.array_equal(a, make_rng(7, 1, 3).random(4))
    assert not np.array_equal(a, make_rng(8, 1, 2).random(4))
    with pytest.raises(InstanceError):
        make_rng(-1)


def test_instance_text_roundtrip(tmp_path):
    inst = random_instance(make_rng(3), 5, 0.37)
    assert parse_instance(format_instance(inst)) == inst
    path = tmp_path / "inst.txt"
    write_instance(inst, path)
    assert read_instance(path) == inst


def test_instance_text_custom_interval():
    inst = parse_instance("0.5 -1 2\n-1 2\n0 1.5\n")
    assert inst.interval == Interval(-1.0, 2.0) and inst.n == 2


@pytest.mark.parametrize("text", ["0.5 0 1\n0.1\n", "0.5 0 1\n0.1 x\n0.2 0.3\n", "0.5 0\n0.1\n0.2\n"])
def test_instance_text_errors(text):
    with pytest.raises(InstanceError):
        parse_instance(text)


def test_random_instance_is_uniform_unit():
    inst = random_instance(make_rng(1), 1000, 0.5)
    assert isinstance(inst, Instance) and inst.n == 1000
    assert 0 <= inst.x.min() and inst.y.max() <= 1
    assert abs(inst.x.mean() - 0.5) < 0.05
