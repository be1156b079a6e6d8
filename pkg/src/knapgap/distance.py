"""Vertex distances d(a, b) and nearest feasible lattice points.

``vertex_distance`` is the exact reference: for each vertex it grows an
l_inf box one unit at a time until the box holds a feasible point; the best
point in the first non-empty box is the global minimiser.  ``proof_guided_point``
builds a (not necessarily nearest) point by the covering/induction argument and
is validated against the exact search.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import DEFAULT_CAPS
from .errors import InfeasibleError, InvalidInstanceError, InvariantViolation
from .frobenius import apery_table, frobenius_number, f_plus
from .knapsack import (BOUNDED, UNBOUNDED, KnapsackInstance, Vertex, classify,
                       enumerate_fiber_in_box, is_integer_feasible, vertices)
from .lattice import (CongruenceLattice, gcd_vector, gs_box_representative, hnf_basis,
                      norm_inf, particular_solution, path_counts, residue_shortest_paths)

NEG_INF = float("-inf")


def linf_distance(v, z):
    return max(abs(Fraction(vi) - zi) for vi, zi in zip(v, z))


def l1_distance(v, z):
    return sum(abs(Fraction(vi) - zi) for vi, zi in zip(v, z))


@dataclass(frozen=True)
class VertexDistance:
    vertex: Vertex
    point: tuple
    distance: Fraction


@dataclass(frozen=True)
class DistanceResult:
    value: object  # Fraction, or NEG_INF when P(a, b) has no integer point
    per_vertex: tuple

    @property
    def feasible(self):
        return self.value != NEG_INF


def fallback_radius(inst):
    """A radius that provably reaches a feasible point without using the ||a||-1 bound.

    Bounded case: (g(a) + ||a||_inf) / min a_i.  Unbounded case:
    (n - 1) f(a+) / min |a_i|.
    """
    ap = [abs(x) for x in inst.a]
    if classify(inst) == BOUNDED:
        bound = Fraction(frobenius_number(ap).g + max(ap), min(ap))
    else:
        bound = Fraction((inst.n - 1) * f_plus(inst.a), min(ap))
    return max(math.ceil(bound), 0)


def _nearest_in_boxes(inst, point, metric, start, stop, caps):
    """First radius R in [start, stop] whose box holds feasible points; best point in it."""
    for radius in range(start, stop + 1):
        pts = enumerate_fiber_in_box(inst, point, radius, caps).points
        if pts:
            best = min(pts, key=lambda z: metric(point, z))  # pts are lex-sorted: ties -> lex-least
            return best, metric(point, best), radius
    return None


def nearest_feasible_linf(inst, v, caps=DEFAULT_CAPS):
    """Exact l_inf-nearest feasible integer point to vertex ``v``; lex-least on ties."""
    point = v.point(inst.n)
    bound = max(inst.norm_inf - 1, 0)
    hit = _nearest_in_boxes(inst, point, linf_distance, 0, bound, caps)
    if hit is None:
        if not is_integer_feasible(inst):
            raise InfeasibleError(f"P({inst.a}, {inst.b}) has no integer point")
        hit = _nearest_in_boxes(inst, point, linf_distance, bound + 1, fallback_radius(inst), caps)
        if hit is None:
            raise InvariantViolation(f"no feasible point near vertex {v} of P({inst.a}, {inst.b})")
    return hit[0], hit[1]


def vertex_distance(inst, caps=DEFAULT_CAPS):
    if not is_integer_feasible(inst):
        return DistanceResult(NEG_INF, ())
    rows = []
    for v in vertices(inst):
        z, dist = nearest_feasible_linf(inst, v, caps)
        rows.append(VertexDistance(v, z, dist))
    return DistanceResult(max(r.distance for r in rows), tuple(rows))


# -- constructive point ---------------------------------------------------


def proof_guided_point(inst, v):
    """Feasible integer point within ``||a||_inf - 1`` of vertex ``v``, built by the covering argument.

    All-positive ``a``: the cheapest lift of the residue class of ``b``
    (shortest path over residues of the vertex coordinate).  Mixed signs are
    normalised so the last entry is the positive minimum of ``|a_i|`` and then
    handled by the simplex covering of the HNF box, or by induction on ``n``
    through an auxiliary right-hand side ``t``.
    """
    if not is_integer_feasible(inst):
        raise InfeasibleError(f"P({inst.a}, {inst.b}) has no integer point")
    if v.index is None and inst.b != 0:
        raise InvalidInstanceError("origin is a vertex only when b = 0", clause="vertex")
    z = _construct(inst.a, inst.b, v.index)
    if not inst.is_feasible_point(z):
        raise InvariantViolation(f"constructed point {z} is not in P({inst.a}, {inst.b})")
    return z


def _construct(a, b, j):
    n = len(a)
    if b == 0:
        return (0,) * n
    if all(x > 0 for x in a) or all(x < 0 for x in a):
        return _positive_case(a, b, j)
    absa = [abs(x) for x in a]
    if min(absa) == max(absa):
        # a = (+-1, ..., +-1) is totally unimodular: the vertex is integral
        z = [0] * n
        z[j] = b // a[j]
        return tuple(z)
    k = absa.index(min(absa))
    order = [i for i in range(n) if i != k] + [k]
    sign = 1 if a[k] > 0 else -1
    a2 = tuple(sign * a[i] for i in order)
    z2 = _mixed_case(a2, sign * b, order.index(j))
    z = [0] * n
    for pos, i in enumerate(order):
        z[i] = z2[pos]
    return tuple(z)


def _positive_case(a, b, j):
    if a[0] < 0:
        a, b = tuple(-x for x in a), -b
    aj = a[j]
    others = [i for i in range(len(a)) if i != j]
    steps = [a[i] for i in others]
    dist, pred = residue_shortest_paths(aj, steps, steps)
    target = b % aj
    s = dist[target]
    if s is None or s > b:
        raise InfeasibleError(f"{b} is not representable by {a}")
    y = path_counts(pred, target, len(others))
    z = [0] * len(a)
    for i, yi in zip(others, y):
        z[i] = yi
    z[j] = (b - s) // aj
    return tuple(z)


def _mixed_case(a, b, j):
    """``a[-1] = min |a_i| > 0``, ``a[-1] < ||a||_inf``, some entry negative, b != 0."""
    n = len(a)
    head, an = a[:-1], a[-1]
    if all(x < 0 for x in head):
        return _simplex_covering_case(a, b, j)
    h = gcd_vector(head)
    if j != n - 1:
        if b % h == 0:
            y = _construct(tuple(x // h for x in head), b // h, j)
            return y + (0,)
        # t in [b - h*an + 1, b): t = 0 (mod h), t = b (mod an)
        m = (b * pow(an, -1, h)) % h
        t = b - an * m
        if t != 0 and Fraction(t, head[j]) > 0:
            p = j
        else:
            p = _first_vertex(head, t)
        y = _construct(tuple(x // h for x in head), t // h, p)
        return y + ((b - t) // an,)
    # vertex (0, ..., 0, b/a_n) with b > 0
    if max(abs(x) for x in head) == h:
        for i in range(n - 1):
            rest = a[:i] + a[i + 1:]
            if any(x < 0 for x in rest):
                break
        y = _construct(rest, b, len(rest) - 1)
        return y[:i] + (0,) + y[i:]
    # t in [-h*an + 1, 0]: t = 0 (mod h), t = b (mod an)
    t0 = h * ((b * pow(h, -1, an)) % an) if an > 1 else 0
    t = t0 - h * an if t0 > 0 else 0
    y = _construct(tuple(x // h for x in head), t // h, _first_vertex(head, t))
    return y + ((b - t) // an,)


def _first_vertex(a, t):
    if t == 0:
        return None
    return next(i for i, x in enumerate(a) if Fraction(t, x) > 0)


def _simplex_covering_case(a, b, j):
    """``pi_n(a) < 0 < a_n``: a point of L(a, b) in ``u + (a_n - 1) S`` from the HNF box."""
    head, an = a[:-1], a[-1]
    d = len(head)
    basis = hnf_basis(CongruenceLattice(head, an))
    r = particular_solution(head, an, b % an)
    u = [0] * d
    if b < 0:
        u[j] = math.ceil(Fraction(b, head[j]))
    shift = tuple(ri - ui for ri, ui in zip(r, u))
    p = gs_box_representative(basis, shift).lattice_point
    y = tuple(ri - pi for ri, pi in zip(r, p))
    zn, rem = divmod(b - sum(x * yi for x, yi in zip(head, y)), an)
    assert rem == 0
    return y + (zn,)


# -- l1 refinement, witnesses, reference bounds -----------------------------


@dataclass(frozen=True)
class L1Check:
    value: Fraction
    bound: int
    holds: bool
    per_vertex: tuple


def l1_nearest_check(inst, caps=DEFAULT_CAPS):
    """Max over vertices of the least l1 distance to a feasible point, against 2(||a||_inf - 1)."""
    if classify(inst) == UNBOUNDED:
        raise InvalidInstanceError("l1 refinement applies to bounded polyhedra only", clause="bounded")
    if not is_integer_feasible(inst):
        raise InfeasibleError(f"P({inst.a}, {inst.b}) has no integer point")
    rows = []
    for v in vertices(inst):
        point = v.point(inst.n)
        radius = 0
        while True:
            # every point outside the l_inf box of radius R has l1 distance > R
            pts = enumerate_fiber_in_box(inst, point, radius, caps).points
            if pts:
                best = min(pts, key=lambda z: l1_distance(point, z))
                dist = l1_distance(point, best)
                if dist <= radius:
                    break
            radius += 1
        rows.append(VertexDistance(v, best, dist))
    value = max(r.distance for r in rows)
    bound = 2 * (inst.norm_inf - 1)
    return L1Check(value, bound, value <= bound, tuple(rows))


def tight_witness(n, k):
    """``a = (k, ..., k, 1)``, ``b = k - 1``, whose vertex distance is exactly ``k - 1``."""
    if n < 2 or k < 1:
        raise InvalidInstanceError("need n >= 2 and k >= 1", clause="witness")
    return KnapsackInstance((k,) * (n - 1) + (1,), k - 1), Fraction(k - 1)


@dataclass(frozen=True)
class ReferenceBounds:
    cook: int
    ew_l1: int
    sup_norm: int


def reference_bounds(a):
    a = tuple(a)
    h = norm_inf(a)
    return ReferenceBounds(cook=len(a) * h, ew_l1=2 * h + 1, sup_norm=h - 1)


# -- many right-hand sides at once -----------------------------------------

_UNRESOLVED = np.iinfo(np.int64).max


def _scaled_profile(a, b_lo, b_hi):
    """``d(a, b) * L`` for every b in [b_lo, b_hi] with ``L = lcm |a_j|``.

    Per vertex direction j, tabulate ``phi(s) = min max(||y||_inf, |s|/|a_j|)``
    over ``y in [0, ||a||_inf - 1]^{n-1}`` with ``pi_j(a).y = s``; the vertex
    distance at b is then a running minimum of phi along the residue class of
    b, restricted to the side of b that keeps ``z_j >= 0``.  Entries that this
    box cannot resolve come back as ``_UNRESOLVED``.
    """
    n = len(a)
    big = max(abs(x) for x in a)
    kmax = big - 1
    lcm = math.lcm(*(abs(x) for x in a))
    bs = np.arange(b_lo, b_hi + 1, dtype=np.int64)
    out = np.full(bs.shape, -1, dtype=np.int64)  # -1: no vertex seen yet
    grids = np.meshgrid(*([np.arange(kmax + 1, dtype=np.int64)] * (n - 1)), indexing="ij")
    grids = [g.ravel() for g in grids]
    kk = np.max(np.stack(grids), axis=0) if n > 1 else np.zeros(1, dtype=np.int64)
    for j in range(n):
        aj = a[j]
        w = abs(aj)
        others = [a[i] for i in range(n) if i != j]
        s = sum(ai * g for ai, g in zip(others, grids))
        cost = np.maximum(kk * w, np.abs(s))
        lo = min(int(s.min()), b_lo)
        hi = max(int(s.max()), b_hi)
        table = np.full(hi - lo + 1, _UNRESOLVED, dtype=np.int64)
        np.minimum.at(table, s - lo, cost)
        for r in range(w):
            view = table[r::w]
            if aj > 0:
                view[:] = np.minimum.accumulate(view)
            else:
                view[:] = np.minimum.accumulate(view[::-1])[::-1]
        has_vertex = bs * aj > 0
        vals = table[bs - lo]
        scaled = np.where(vals == _UNRESOLVED, _UNRESOLVED, vals * (lcm // w))
        out = np.where(has_vertex, np.maximum(out, scaled), out)
    out[bs == 0] = 0
    return bs, out, lcm


def _feasibility(a):
    """``b -> is_integer_feasible(KnapsackInstance(a, b))`` with the residue table built once."""
    if len({x > 0 for x in a}) == 2:
        return lambda b: True
    sign = 1 if a[0] > 0 else -1
    pos = [abs(x) for x in a]
    table, base = apery_table(pos), min(pos)
    return lambda b: sign * b >= 0 and sign * b >= table[(sign * b) % base]


def distance_profile(a, b_lo, b_hi, caps=DEFAULT_CAPS):
    """``[d(a, b) for b in range(b_lo, b_hi + 1)]``, exact; NEG_INF for infeasible b."""
    a = KnapsackInstance(a, 0).a
    bs, out, lcm = _scaled_profile(a, b_lo, b_hi)
    feasible = _feasibility(a)
    result = []
    for b, val in zip(bs.tolist(), out.tolist()):
        if val == _UNRESOLVED or val < 0:
            value = vertex_distance(KnapsackInstance(a, b), caps).value if feasible(b) else NEG_INF
            result.append(value)
        else:
            result.append(Fraction(val, lcm))
    return result


def max_distance_over_range(a, b_lo, b_hi, caps=DEFAULT_CAPS):
    """``(max_b d(a, b), least argmax b)`` over [b_lo, b_hi]; (NEG_INF, None) if all infeasible."""
    a = KnapsackInstance(a, 0).a
    bs, out, lcm = _scaled_profile(a, b_lo, b_hi)
    best, arg = NEG_INF, None
    unresolved = np.nonzero(out == _UNRESOLVED)[0]
    resolved = np.where(out == _UNRESOLVED, -1, out)
    if resolved.size and resolved.max() >= 0:
        idx = int(np.argmax(resolved))
        best, arg = Fraction(int(resolved[idx]), lcm), int(bs[idx])
    feasible = _feasibility(a)
    for idx in unresolved.tolist():
        b = int(bs[idx])
        if not feasible(b):
            continue
        val = vertex_distance(KnapsackInstance(a, b), caps).value
        if val > best or (val == best and val != NEG_INF and b < arg):
            best, arg = val, b
    return best, arg
