import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from knapgap.config import Caps
from knapgap.errors import InvalidInstanceError, ScaleError
from knapgap.knapsack import (BOUNDED, EMPTY, UNBOUNDED, KnapsackInstance, classify,
                              enumerate_fiber_in_box, is_integer_feasible,
                              is_integer_feasible_oracle, pivot_index, vertices)

from oracles import fiber, gcd_all

K = KnapsackInstance


def points(inst):
    return {v.point(inst.n) for v in vertices(inst)}


def test_vertices_examples():
    F = Fraction
    assert points(K((3, 5, 7), 15)) == {(5, 0, 0), (0, 3, 0), (0, 0, F(15, 7))}
    assert points(K((3, 5), 0)) == {(0, 0)}
    assert points(K((3, -2), 1)) == {(F(1, 3), 0)}


def test_classify_examples():
    assert classify(K((3, 5, 7), 4)) == BOUNDED
    assert classify(K((3, 5), -1)) == EMPTY
    assert classify(K((3, -2), 100)) == UNBOUNDED


def test_feasibility_examples():
    assert not is_integer_feasible(K((2, 3), 1))
    assert is_integer_feasible(K((3, 5), 8))
    assert is_integer_feasible(K((3, -2), 1))


def test_instance_validation():
    with pytest.raises(InvalidInstanceError):
        K((3, 0), 1)
    with pytest.raises(InvalidInstanceError):
        K((2, 4), 2)


def test_enumerate_examples():
    assert enumerate_fiber_in_box(K((5, 5, 1), 4), (0, 0, 4), 0).points == ((0, 0, 4),)
    assert enumerate_fiber_in_box(K((2, 3), 6), (0, 2), 3).points == ((0, 2), (3, 0))
    assert enumerate_fiber_in_box(K((3, 5), 1), (0, 0), 5).points == ()


def test_pivot_is_largest_lowest_index():
    assert pivot_index((3, -7, 7, 2)) == 1


def test_vertices_nonempty_iff_not_empty():
    for a in itertools.product(range(-4, 5), repeat=2):
        if 0 in a or gcd_all(a) != 1:
            continue
        for b in range(-6, 7):
            inst = K(a, b)
            assert bool(vertices(inst)) == (classify(inst) != EMPTY)


def test_feasibility_agrees_with_oracle():
    for n, H, B in ((2, 12, 60), (3, 6, 30)):
        for a in itertools.product(range(-H, H + 1), repeat=n):
            if 0 in a or gcd_all(a) != 1:
                continue
            for b in range(-B, B + 1):
                inst = K(a, b)
                fast = is_integer_feasible(inst)
                assert fast == is_integer_feasible_oracle(inst), (a, b)
                if classify(inst) == UNBOUNDED:
                    assert fast


vectors = st.lists(st.integers(-6, 6).filter(bool), min_size=2, max_size=3).filter(
    lambda a: gcd_all(a) == 1)


@given(vectors, st.integers(-15, 15), st.lists(st.integers(0, 6), min_size=3, max_size=3),
       st.integers(0, 4))
def test_enumerate_matches_brute_force(a, b, center, radius):
    inst = K(a, b)
    center = center[:len(a)]
    got = enumerate_fiber_in_box(inst, center, radius).points
    want = sorted(x for x in fiber(a, b, max(center) + radius)
                  if all(abs(xi - ci) <= radius for xi, ci in zip(x, center)))
    assert list(got) == want


def test_positive_fiber_inside_scaled_cube():
    for a in ((3, 5, 7), (2, 3), (4, 9, 11)):
        for b in range(0, 40):
            for x in enumerate_fiber_in_box(K(a, b), (0,) * len(a), b).points:
                assert all(xi <= Fraction(b, min(a)) for xi in x)


def test_enumeration_cap():
    with pytest.raises(ScaleError):
        enumerate_fiber_in_box(K((3, 5, 7), 10), (0, 0, 0), 50, Caps(fiber=100))
