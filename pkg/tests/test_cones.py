import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from robustmo.cones import (Bounds, ConeSpec, check_bounds, cone_contains, fit_alpha,
                            fit_lower_bound, interval_contains, interval_contains_many)

C32 = ConeSpec.polyhedral(3, 2)


def test_cone_examples():
    assert cone_contains(C32, (1, 2))
    assert not cone_contains(C32, (1, 4))
    for cone in (C32, ConeSpec.polyhedral(5, 3), ConeSpec.orthant(2)):
        zero = np.zeros(cone.m)
        assert cone_contains(cone, zero)
        assert not cone_contains(cone, zero, strict=True)


def test_interval_examples():
    assert interval_contains(C32, (-1, -1), (3, 3), (2, 0))
    assert not interval_contains(C32, (-1, -1), (3, 3), (2, 0), open=True)
    assert interval_contains(C32, (-1, -1), (3, 3), (-1, -1))
    assert not interval_contains(C32, (-1, -1), (3, 3), (-1, -1), open=True)


def test_alpha_must_exceed_m_minus_one():
    with pytest.raises(ValueError):
        ConeSpec.polyhedral(1.0, 2)
    with pytest.raises(ValueError):
        Bounds([0, 0, 0], 2.0)


def test_tolerance_only_relaxes_closed_mode():
    y = np.array([1.0, 3.0 + 1e-12])
    assert not cone_contains(C32, y)
    assert cone_contains(C32, y, tol=1e-9)
    assert not cone_contains(C32, (1, 3), strict=True, tol=1.0)


@pytest.mark.parametrize("pts,alpha", [
    ([(2, 4), (4, 2), (3, 3), (5, 5), (1, 1)], 3.0),
    ([(1, 1)], 3.0),
    ([(1, 9)], 10.0),
])
def test_fit_alpha_examples(pts, alpha):
    assert fit_alpha(pts) == alpha


def test_fit_alpha_rejects_nonpositive():
    with pytest.raises(ValueError):
        fit_alpha([(0, 1)])


@pytest.mark.parametrize("pts,lb,alpha", [
    ([(1, 3), (3, 1), (2, 2), (4, 4), (0, 0)], (-1, -1), 3.0),
    ([(0, 0)], (-1, -1), 3.0),
    ([(0, 0), (0, 8)], (-1, -1), 10.0),
])
def test_fit_lower_bound_examples(pts, lb, alpha):
    b = fit_lower_bound(pts, 1.0)
    np.testing.assert_array_equal(b.lb, lb)
    assert b.alpha == alpha


positive = arrays(np.float64, st.tuples(st.integers(1, 10), st.integers(2, 4)),
                  elements=st.floats(-50, 50, allow_nan=False))


@given(positive, st.floats(0.1, 5))
def test_fit_soundness(Y, delta):
    b = fit_lower_bound(Y, delta)
    assert check_bounds(b, Y)
    for y in Y:
        assert interval_contains(b.cone, b.lb, y + 1.0, y, open=True)


vec = st.integers(2, 4).flatmap(
    lambda m: arrays(np.float64, m, elements=st.floats(-10, 10, allow_nan=False)))


@given(vec, st.floats(0, 5), st.floats(0, 5))
def test_nesting_and_positivity(y, d1, d2):
    m = len(y)
    a1 = m - 1 + 0.01 + d1
    a2 = a1 + d2
    if cone_contains(ConeSpec.polyhedral(a1, m), y):
        assert cone_contains(ConeSpec.polyhedral(a2, m), y)
        assert np.all(y == 0) or np.all(y > 0)


@given(vec, vec, st.floats(0.01, 100))
def test_convex_cone_axioms(y1, y2, s):
    if len(y1) != len(y2):
        return
    cone = ConeSpec.polyhedral(len(y1) + 0.5, len(y1))
    if cone_contains(cone, y1):
        # scaling can round a tight row by one ulp
        assert cone_contains(cone, s * y1, tol=1e-9 * s * np.abs(y1).sum())
        if cone_contains(cone, y2):
            assert cone_contains(cone, y1 + y2, tol=1e-9 * np.abs(y1 + y2).sum())


def test_orthant_interval_is_box():
    box = ConeSpec.orthant(2)
    ys = np.array([(0, 0), (1, 1), (2, 0.5), (-0.1, 1)])
    np.testing.assert_array_equal(interval_contains_many(box, (0, 0), (2, 2), ys),
                                  [True, True, True, False])
