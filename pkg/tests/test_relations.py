import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from robustmo.relations import (Position, RelationKind, certify_strict_upper,
                                complement_closure_position, holds, psi, psi_many)

from conftest import cloud_pairs, clouds


@pytest.mark.parametrize("A,y,expected", [
    ([(0, 0)], (3, -1), 3.0),
    ([(0, 0)], (1, 1), 1.0),
    ([(0, 0), (2, -2)], (1, 0), 1.0),
])
def test_psi_examples(A, y, expected):
    assert psi(A, y) == expected


def test_psi_many_matches_psi():
    A = [(0, 0), (2, -2), (1, 1)]
    ys = [(1, 0), (-3, 4), (0.5, 0.5)]
    np.testing.assert_array_equal(psi_many(A, ys), [psi(A, y) for y in ys])


def test_holds_examples():
    assert holds(RelationKind.STRICT_UPPER, [(0, 0)], [(1, 1)])
    A = [(1, 3), (3, 1), (2, 2)]
    assert holds("lower", A, A)
    assert holds("upper", A, A)
    assert not holds("strict_lower", A, A)


def test_disk_clouds_strict_upper():
    t = np.arange(720) * 2 * math.pi / 720
    A = np.c_[-1 + np.cos(t), np.sin(t)]
    B = np.c_[2 + 2 * np.cos(t), 2 * np.sin(t)]
    assert holds("strict_upper", A, B)
    assert certify_strict_upper(A, B) > 0


@pytest.mark.parametrize("A,B,expected", [
    ([(0, 0)], [(1, 1)], 1.0),
    ([(0, 0)], [(0, 0)], None),
    ([(1, 3), (3, 1)], [(4, 4)], 1.0),
])
def test_certificate_examples(A, B, expected):
    assert certify_strict_upper(A, B) == expected


@pytest.mark.parametrize("y,pos", [
    ((0, 0), Position.BOUNDARY),
    ((-1, 2), Position.OUTSIDE_LOWER_SET),
    ((-1, -1), Position.INSIDE_LOWER_SET),
])
def test_position_examples(y, pos):
    assert complement_closure_position([(0, 0)], y) is pos


def test_invalid_kind():
    with pytest.raises(ValueError):
        holds("sideways", [(0, 0)], [(1, 1)])


@given(cloud_pairs(), st.floats(-10, 10))
def test_translation_invariance(pair, t):
    A, B = pair
    for y in B:
        assert abs(psi(A, y + t) - (psi(A, y) + t)) <= 1e-12


@given(cloud_pairs(), st.integers(0, 5).map(float))
def test_monotone(pair, s):
    A, B = pair
    for y in B:
        assert psi(A, y) <= psi(A, y + s * np.eye(len(y))[0])


@given(cloud_pairs())
def test_lipschitz(pair):
    A, B = pair
    m = A.shape[1]
    for y1 in B:
        for y2 in B:
            assert abs(psi(A, y1) - psi(A, y2)) <= math.sqrt(m) * np.linalg.norm(y1 - y2) + 1e-12


@given(cloud_pairs())
def test_certificate_iff_strict_upper(pair):
    A, B = pair
    assert (certify_strict_upper(A, B) is not None) == holds("strict_upper", A, B)


@given(cloud_pairs())
def test_sublevel_characterizations(pair):
    A, B = pair
    assert holds("strict_upper", A, B) == (psi_many(B, A).max() < 0)
    # lower side: every b strictly above some a, i.e. -b strictly below some -a
    assert holds("strict_lower", A, B) == (psi_many(-A, -B).max() < 0)


@given(cloud_pairs())
def test_strict_implies_weak(pair):
    A, B = pair
    if holds("strict_upper", A, B):
        assert holds("upper", A, B)
    if holds("strict_lower", A, B):
        assert holds("lower", A, B)


@given(st.integers(2, 3).flatmap(lambda m: st.tuples(clouds(m=m, max_size=4),
                                                      clouds(m=m, max_size=4),
                                                      clouds(m=m, max_size=4))))
def test_preorder_laws(triple):
    A, B, C = triple
    for kind in RelationKind:
        if kind in (RelationKind.LOWER, RelationKind.UPPER):
            assert holds(kind, A, A)
        if holds(kind, A, B) and holds(kind, B, C):
            assert holds(kind, A, C)
