"""Deliberately naive reference implementations used only by the tests."""

import itertools
import math
from fractions import Fraction
from functools import reduce


def gcd_all(v):
    return reduce(math.gcd, (abs(x) for x in v), 0)


def representable_upto(a, limit):
    """Boolean sieve of nonnegative combinations of positive ``a`` up to ``limit``."""
    ok = [False] * (limit + 1)
    ok[0] = True
    for s in range(1, limit + 1):
        ok[s] = any(s >= x and ok[s - x] for x in a)
    return ok


def frobenius(a):
    if 1 in a:
        return -1
    limit = max(a) * min(a) + max(a)
    ok = representable_upto(a, limit)
    return max(s for s in range(limit + 1) if not ok[s])


def fiber(a, b, radius):
    """Integer points of P(a, b) in [0, radius]^n."""
    return [x for x in itertools.product(range(radius + 1), repeat=len(a))
            if sum(ai * xi for ai, xi in zip(a, x)) == b]


def vertex_points(a, b):
    n = len(a)
    if b == 0:
        return [(Fraction(0),) * n]
    out = []
    for j, aj in enumerate(a):
        t = Fraction(b, aj)
        if t > 0:
            out.append(tuple(t if i == j else Fraction(0) for i in range(n)))
    return out


def fibers_by_rhs(a, radius):
    """All points of [0, radius]^n bucketed by a.x."""
    out = {}
    for x in itertools.product(range(radius + 1), repeat=len(a)):
        out.setdefault(sum(ai * xi for ai, xi in zip(a, x)), []).append(x)
    return out


def vertex_distance(a, b, radius, buckets=None):
    """max_v min_z ||v - z||_inf over the fiber points in the box; None when the box holds none."""
    pts = fiber(a, b, radius) if buckets is None else buckets.get(b, [])
    if not pts:
        return None
    return max(min(max(abs(vi - zi) for vi, zi in zip(v, z)) for z in pts)
               for v in vertex_points(a, b))


def ip_min(c, a, b, radius):
    vals = [sum(ci * xi for ci, xi in zip(c, x)) for x in fiber(a, b, radius)]
    return min(vals) if vals else None


def group_min(weights, modulus, costs, target, radius):
    """min l.x over x in [0, radius]^d with weights.x = target (mod modulus)."""
    best = None
    for x in itertools.product(range(radius + 1), repeat=len(weights)):
        if sum(w * xi for w, xi in zip(weights, x)) % modulus == target % modulus:
            v = sum(l * xi for l, xi in zip(costs, x))
            if best is None or v < best:
                best = v
    return best


def coset_min_sum(weights, modulus, radius):
    """For each residue, the least coordinate sum of a point in [0, radius]^d hitting it."""
    best = {}
    for x in itertools.product(range(radius + 1), repeat=len(weights)):
        r = sum(w * xi for w, xi in zip(weights, x)) % modulus
        s = sum(x)
        if r not in best or s < best[r]:
            best[r] = s
    return best
