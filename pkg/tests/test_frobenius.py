import itertools
import math

import pytest
from hypothesis import given, strategies as st

from knapgap.config import Caps
from knapgap.errors import InvalidInstanceError, ScaleError
from knapgap.frobenius import (CoveringRadii, apery_table, discrete_radius_bruteforce, f_plus,
                               frobenius_number, kannan_radii, schur_bound)

from oracles import frobenius, gcd_all, representable_upto


@pytest.mark.parametrize("a, g", [((3, 5), 7), ((3, 5, 7), 4), ((5, 5, 1), -1), ((2, 3), 1),
                                  ((6, 10, 15), 29)])
def test_frobenius_examples(a, g):
    assert frobenius_number(a).g == g


def test_f_plus_examples():
    assert f_plus((3, 5, 7)) == 19
    assert f_plus((3, -5, 7)) == 19
    assert f_plus((1, 1)) == 1


def test_schur_and_kannan_examples():
    assert [schur_bound(a) for a in ((3, 5, 7), (3, 5), (2, 3))] == [11, 7, 1]
    assert kannan_radii((3, 5, 7)) == CoveringRadii(19, 11)
    assert kannan_radii((2, 3)) == CoveringRadii(6, 4)
    assert kannan_radii((5, 5, 1)) == CoveringRadii(10, 0)
    assert [discrete_radius_bruteforce(a) for a in ((3, 5, 7), (2, 3), (5, 5, 1))] == [11, 4, 0]


positive_primitive = st.lists(st.integers(1, 30), min_size=2, max_size=4).filter(
    lambda a: gcd_all(a) == 1)


@given(positive_primitive)
def test_frobenius_matches_sieve(a):
    res = frobenius_number(a)
    assert res.g == frobenius(a)
    ok = representable_upto(a, res.g + max(a) + 1)
    for b in range(len(ok)):
        assert res.representable(b) == ok[b]


@given(positive_primitive)
def test_apery_table_minimal(a):
    table = apery_table(a)
    m = min(a)
    ok = representable_upto(a, max(table) + 1)
    for r, t in enumerate(table):
        assert t % m == r and ok[t]
        assert not any(ok[s] for s in range(r, t, m))


@given(positive_primitive, st.randoms())
def test_frobenius_permutation_invariant(a, rnd):
    b = list(a)
    rnd.shuffle(b)
    assert frobenius_number(b).g == frobenius_number(a).g


def test_discrete_radius_depends_on_last_entry():
    a = (3, 5, 7)
    for perm in itertools.permutations(a):
        assert kannan_radii(perm).discrete - kannan_radii(a).discrete == perm[-1] - a[-1]


def test_schur_bound_small_sweep():
    for n in (2, 3):
        for a in itertools.product(range(1, 13), repeat=n):
            if math.gcd(*a) == 1:
                assert frobenius_number(a).g <= schur_bound(a)


def test_invalid_inputs():
    with pytest.raises(InvalidInstanceError) as e:
        frobenius_number((4, 6))
    assert e.value.clause == "(ii)"
    with pytest.raises(InvalidInstanceError):
        frobenius_number((3, -5))
    with pytest.raises(InvalidInstanceError):
        f_plus((3, 0))


def test_bruteforce_scale_refusal():
    with pytest.raises(ScaleError):
        discrete_radius_bruteforce((3, 5, 101))
    with pytest.raises(ScaleError):
        discrete_radius_bruteforce((3, 5, 7), Caps(covering_det=6))
