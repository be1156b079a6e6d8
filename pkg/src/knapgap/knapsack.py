"""Knapsack polyhedra P(a, b) = {x >= 0 : a.x = b}: vertices, shape and integer points."""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .config import DEFAULT_CAPS
from .errors import ScaleError
from .frobenius import apery_table
from .lattice import norm_inf, require_knapsack_vector

EMPTY, BOUNDED, UNBOUNDED = "empty", "bounded", "unbounded"


@dataclass(frozen=True)
class KnapsackInstance:
    a: tuple
    b: int

    def __post_init__(self):
        object.__setattr__(self, "a", require_knapsack_vector(self.a))
        object.__setattr__(self, "b", int(self.b))

    @property
    def n(self):
        return len(self.a)

    @property
    def norm_inf(self):
        return norm_inf(self.a)

    def negated(self):
        return KnapsackInstance(tuple(-x for x in self.a), -self.b)

    def permuted(self, order):
        return KnapsackInstance(tuple(self.a[i] for i in order), self.b)

    def is_feasible_point(self, x):
        return all(xi >= 0 for xi in x) and sum(ai * xi for ai, xi in zip(self.a, x)) == self.b


@dataclass(frozen=True)
class Vertex:
    """``value * e_index``, or the origin when ``index`` is None."""

    index: int
    value: Fraction

    def point(self, n):
        p = [Fraction(0)] * n
        if self.index is not None:
            p[self.index] = self.value
        return tuple(p)


@dataclass(frozen=True)
class FeasibleSet:
    points: tuple
    exhaustive: bool
    center: tuple
    radius: int


def vertices(inst):
    if inst.b == 0:
        return [Vertex(None, Fraction(0))]
    return [Vertex(j, Fraction(inst.b, aj)) for j, aj in enumerate(inst.a)
            if Fraction(inst.b, aj) > 0]


def classify(inst):
    signs = {x > 0 for x in inst.a}
    if len(signs) == 2:
        return UNBOUNDED
    positive = signs.pop()
    if inst.b == 0 or (inst.b > 0) == positive:
        return BOUNDED
    return EMPTY


def _positive_form(inst):
    """(a, b) with a > 0 for a same-sign instance."""
    if inst.a[0] < 0:
        return tuple(-x for x in inst.a), -inst.b
    return inst.a, inst.b


def is_integer_feasible(inst):
    """Exact test for ``P(a, b) & Z^n != {}``.

    Mixed signs with gcd 1 generate all of Z.  Otherwise ``b`` must lie in the
    numerical semigroup of ``|a|``, read off the residue table mod ``min |a_i|``.
    """
    kind = classify(inst)
    if kind == UNBOUNDED:
        return True
    if kind == EMPTY:
        return False
    a, b = _positive_form(inst)
    if b == 0:
        return True
    table = apery_table(a)
    return b >= table[b % min(a)]


def is_integer_feasible_oracle(inst, caps=DEFAULT_CAPS):
    """Search a box of radius ``||a||_inf - 1`` around each vertex."""
    radius = max(inst.norm_inf - 1, 0)
    for v in vertices(inst):
        if enumerate_fiber_in_box(inst, v.point(inst.n), radius, caps).points:
            return True
    return False


def pivot_index(a):
    """Coordinate with the largest ``|a_i|``; lowest index on ties."""
    return max(range(len(a)), key=lambda i: (abs(a[i]), -i))


def box_ranges(center, radius):
    ranges = []
    for c in center:
        lo = max(0, math.ceil(Fraction(c) - radius))
        hi = math.floor(Fraction(c) + radius)
        ranges.append((lo, hi))
    return ranges


def enumerate_fiber_in_box(inst, center, radius, caps=DEFAULT_CAPS):
    """All x >= 0 with a.x = b and ``||x - center||_inf <= radius``, lexicographically sorted.

    The pivot coordinate (largest ``|a_i|``) is solved for; of the remaining
    free coordinates, the last one is stepped along its arithmetic progression
    of solutions rather than scanned.
    """
    a, b, n = inst.a, inst.b, inst.n
    ranges = box_ranges(center, radius)
    if any(lo > hi for lo, hi in ranges):
        return FeasibleSet((), True, tuple(center), radius)
    p = pivot_index(a)
    free = [i for i in range(n) if i != p]
    volume = math.prod(ranges[i][1] - ranges[i][0] + 1 for i in free)
    if volume > caps.fiber:
        raise ScaleError(f"fiber box has {volume} candidates, cap is {caps.fiber}")
    q = free[-1]
    outer = free[:-1]
    ap, aq = a[p], a[q]
    g = math.gcd(ap, aq)
    step = abs(ap) // g
    lo_p, hi_p = ranges[p]
    lo_q, hi_q = ranges[q]
    # aq' * x_q = rest' (mod ap'), with aq' invertible mod ap'
    inv = pow(aq // g, -1, step) if step > 1 else 0
    found = []
    for xs in itertools.product(*(range(ranges[i][0], ranges[i][1] + 1) for i in outer)):
        rest = b - sum(a[i] * x for i, x in zip(outer, xs))
        if rest % g:
            continue
        x0 = ((rest // g) * inv) % step if step > 1 else 0
        start = lo_q + ((x0 - lo_q) % step)
        for xq in range(start, hi_q + 1, step):
            num = rest - aq * xq
            xp = num // ap
            if lo_p <= xp <= hi_p:
                x = [0] * n
                for i, xi in zip(outer, xs):
                    x[i] = xi
                x[q] = xq
                x[p] = xp
                found.append(tuple(x))
    found.sort()
    return FeasibleSet(tuple(found), True, tuple(center), radius)
