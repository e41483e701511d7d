import numpy as np
import pytest

from robustmo.cones import interval_contains_many
from robustmo.problem import (BilinearObjective, BilinearTerm, ExplicitSpace, GridSpace,
                              InstanceError, ObjectiveWiseObjective, TableObjective,
                              UncertainInstance, auto_bounds, build_F, demo_instance, evaluate,
                              image_set, point_based_counterpart, upper_bound_map)
from robustmo.staircase import build_staircase

from test_staircase import assert_same_set


def bilinear_xu_instance():
    # f1 = x*u, f2 = x + u
    t1 = BilinearTerm([[1.0]], [0.0], [0.0], 0.0)
    t2 = BilinearTerm([[0.0]], [1.0], [1.0], 0.0)
    return UncertainInstance("xu", 1, 2, 1, ExplicitSpace([[2.0]]), ExplicitSpace([[3.0]]),
                             BilinearObjective((t1, t2)))


def constant_instance(value=7.0):
    t = BilinearTerm([[0.0]], [0.0], [0.0], value)
    return UncertainInstance("const", 1, 2, 1, ExplicitSpace([[0.0], [1.0]]),
                             GridSpace([0.0], [1.0], (2,)), BilinearObjective((t, t)))


def test_evaluate_examples():
    np.testing.assert_array_equal(evaluate(bilinear_xu_instance(), [2.0], [3.0]), (6, 5))
    np.testing.assert_array_equal(evaluate(demo_instance(), 0, 0), (1, 3))
    np.testing.assert_array_equal(evaluate(constant_instance(), [5.0], [0.5]), (7, 7))


def test_image_set_examples():
    inst = demo_instance()
    np.testing.assert_array_equal(image_set(inst, 0), [(1, 3), (3, 1)])
    assert len(image_set(bilinear_xu_instance(), 0)) == 1
    np.testing.assert_array_equal(image_set(constant_instance(), 1), np.full((3, 2), 7.0))


def test_upper_and_point_based_maps():
    inst = demo_instance()
    expected_ub = [(4, 4), (3, 3), (5, 5)]
    expected_pb = [(3, 3), (2, 2), (4, 4)]
    for i in range(3):
        np.testing.assert_array_equal(upper_bound_map(inst, i), expected_ub[i])
        np.testing.assert_array_equal(point_based_counterpart(inst, i), expected_pb[i])
        assert np.all(image_set(inst, i) < upper_bound_map(inst, i))


def test_auto_bounds_examples():
    b = auto_bounds(demo_instance())
    np.testing.assert_array_equal(b.lb, (-1, -1))
    assert b.alpha == 3
    b = auto_bounds(constant_instance())
    np.testing.assert_array_equal(b.lb, (6, 6))
    assert b.alpha == 3
    single = UncertainInstance("one", 1, 2, 1, ExplicitSpace([[0.0]]), ExplicitSpace([[0.0]]),
                               TableObjective([[[0.0, 8.0]]]))
    b = auto_bounds(single)
    np.testing.assert_array_equal(b.lb, (-1, 7))
    assert b.alpha == 3


def test_auto_bounds_proper_boundedness():
    inst = demo_instance()
    b = auto_bounds(inst)
    for i in range(3):
        assert np.all(interval_contains_many(b.cone, b.lb, upper_bound_map(inst, i),
                                             image_set(inst, i), open=True))


def test_build_F_examples():
    inst = demo_instance()
    b = auto_bounds(inst)
    assert_same_set(build_F(inst, 1, b).minimal_points, [(2, 0), (0, 2)])
    assert_same_set(build_F(inst, 0, b).minimal_points, [(1, 1), (3, 1 / 3), (1 / 3, 3)])
    assert_same_set(build_F(inst, 2, b).minimal_points, [(4, 2 / 3), (2 / 3, 4)])


def test_build_F_uses_full_image_set_for_membership():
    inst = demo_instance()
    st = build_F(inst, 2, auto_bounds(inst))
    np.testing.assert_array_equal(st.source, image_set(inst, 2))


def test_build_F_decision_by_point():
    inst = demo_instance()
    b = auto_bounds(inst)
    np.testing.assert_array_equal(build_F(inst, [3.0], b).minimal_points,
                                  build_F(inst, 2, b).minimal_points)
    with pytest.raises(IndexError):
        build_F(inst, [9.0], b)


def test_table_requires_explicit_spaces():
    with pytest.raises(InstanceError) as exc:
        UncertainInstance("bad", 1, 2, 1, GridSpace([0.0], [1.0], (1,)), ExplicitSpace([[0.0]]),
                          TableObjective(np.zeros((2, 1, 2))))
    assert any("explicit" in e for e in exc.value.errors)


def test_bilinear_shape_errors_name_fields():
    bad = BilinearTerm(np.zeros((2, 1)), [0.0], [0.0], 0.0)
    ok = BilinearTerm([[0.0]], [0.0], [0.0], 0.0)
    with pytest.raises(InstanceError) as exc:
        UncertainInstance("bad", 1, 2, 1, ExplicitSpace([[0.0]]), ExplicitSpace([[0.0]]),
                          BilinearObjective((bad, ok)))
    assert any(e.startswith("objective.terms[0].Q") for e in exc.value.errors)


def test_objective_wise_validation():
    t1 = BilinearTerm([[1.0, 0.0]], [0.0], [1.0, 0.0], 0.0)
    t2 = BilinearTerm([[0.0, 1.0]], [0.0], [0.0, 1.0], 0.0)
    grid = GridSpace([0.0, 0.0], [1.0, 1.0], (2, 2))
    inst = UncertainInstance("ow", 1, 2, 2, ExplicitSpace([[1.0]]), grid,
                             ObjectiveWiseObjective((t1, t2), blocks=(1, 1)))
    assert inst.is_objective_wise
    with pytest.raises(InstanceError):
        UncertainInstance("ow", 1, 2, 2, ExplicitSpace([[1.0]]), grid,
                          ObjectiveWiseObjective((t2, t1), blocks=(1, 1)))
    with pytest.raises(InstanceError):
        UncertainInstance("ow", 1, 2, 2, ExplicitSpace([[1.0]]), ExplicitSpace([[0.0, 0.0]]),
                          ObjectiveWiseObjective((t1, t2), blocks=(1, 1)))


def test_grid_space_materialization():
    g = GridSpace([0.0, 1.0], [1.0, 2.0], (2, 1))
    X = g.materialize()
    assert X.shape == (6, 2)
    np.testing.assert_array_equal(X[0], (0, 1))
    np.testing.assert_array_equal(X[-1], (1, 2))
    assert len(g.refined(3).materialize()) == 7 * 4


def test_objective_wise_collapse():
    from oracles import random_objective_wise_instance
    for seed in range(10):
        inst = random_objective_wise_instance(seed)
        b = auto_bounds(inst)
        for i in range(len(inst.decisions)):
            worst = point_based_counterpart(inst, i)
            # the worst-case point is itself attained, so it lies in the image set
            assert np.any(np.all(image_set(inst, i) == worst, axis=1))
            full = build_F(inst, i, b).minimal_points
            single = build_staircase(worst[None, :], b, upper_bound_map(inst, i)).minimal_points
            assert_same_set(single, full, atol=1e-9)
