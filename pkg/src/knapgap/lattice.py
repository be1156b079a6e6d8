"""Exact integer lattice machinery for congruence lattices.

A congruence lattice is ``{x in Z^d : w.x = 0 (mod m)}``.  Everything here
works with Python integers and :class:`fractions.Fraction`; nothing is
rounded through floating point.
"""

import heapq
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from .config import DEFAULT_CAPS
from .errors import InvalidInstanceError, ScaleError


def gcd_vector(v):
    """gcd of the absolute values of ``v``; 0 only for the all-zero vector."""
    if len(v) == 0:
        raise InvalidInstanceError("gcd of an empty vector", clause="dim")
    return reduce(math.gcd, (abs(int(x)) for x in v), 0)


def norm_inf(v):
    return max(abs(x) for x in v)


def norm_1(v):
    return sum(abs(x) for x in v)


@dataclass(frozen=True)
class Verdict:
    valid: bool
    clause: str = None
    message: str = ""

    def __bool__(self):
        return self.valid


def validate_knapsack_vector(a):
    """Check that ``a`` has length >= 2, no zero entry and gcd 1."""
    if len(a) < 2:
        return Verdict(False, "(i)", f"dimension n = {len(a)} < 2")
    zeros = [i for i, x in enumerate(a) if x == 0]
    if zeros:
        return Verdict(False, "(i)", f"zero entry at position {zeros[0] + 1}")
    g = gcd_vector(a)
    if g != 1:
        return Verdict(False, "(ii)", f"gcd = {g}")
    return Verdict(True)


def require_knapsack_vector(a):
    verdict = validate_knapsack_vector(a)
    if not verdict:
        raise InvalidInstanceError(f"invalid knapsack vector {tuple(a)}: {verdict.message}",
                                   clause=verdict.clause)
    return tuple(int(x) for x in a)


def xgcd_vector(values):
    """Return ``(g, coeffs)`` with ``sum(c*v) == g == gcd(values)``, g >= 0."""
    g, coeffs = 0, []
    for v in values:
        # extend the current Bezout relation by one more generator
        old_g, s, t = g, 1, 0
        r0, r1, s0, s1, t0, t1 = old_g, v, 1, 0, 0, 1
        while r1:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0 < 0:
            r0, s0, t0 = -r0, -s0, -t0
        s, t = s0, t0
        coeffs = [c * s for c in coeffs] + [t]
        g = r0
    return g, coeffs


@dataclass(frozen=True)
class CongruenceLattice:
    """``{x in Z^d : weights . x = 0 (mod modulus)}``."""

    weights: tuple
    modulus: int

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if not self.weights:
            raise InvalidInstanceError("congruence lattice needs dimension >= 1", clause="dim")
        if int(self.modulus) < 1:
            raise InvalidInstanceError("modulus must be >= 1", clause="modulus")
        object.__setattr__(self, "modulus", int(self.modulus))

    @property
    def dim(self):
        return len(self.weights)

    @property
    def det(self):
        m = self.modulus
        return m // math.gcd(gcd_vector(self.weights), m)

    def residue(self, x):
        """Value of ``weights . x`` mod the modulus; identifies the coset of ``x``."""
        return sum(w * xi for w, xi in zip(self.weights, x)) % self.modulus

    def __contains__(self, x):
        return self.residue(x) == 0

    @classmethod
    def of_knapsack(cls, a, drop=None):
        """The lattice Lambda_a: drop coordinate ``drop`` (default last) and use it as modulus."""
        drop = len(a) - 1 if drop is None else drop
        rest = tuple(x for i, x in enumerate(a) if i != drop)
        return cls(rest, abs(a[drop]))


@dataclass(frozen=True)
class HNFBasis:
    """Lower-triangular basis; row ``i`` is the basis vector b_i."""

    rows: tuple
    det: int

    @property
    def dim(self):
        return len(self.rows)

    @property
    def diagonal(self):
        return tuple(self.rows[i][i] for i in range(self.dim))


def hnf_basis(lattice):
    """Unique lower-triangular basis with ``v_ii > 0`` and ``0 <= v_ij < v_jj``.

    Column by column: the smallest positive i-th coordinate of a lattice vector
    supported on the first i coordinates is ``g/gcd(w_i, g)`` where ``g`` is the
    gcd of the modulus and the earlier weights.  The remaining coordinates of
    that row come from a Bezout lift, then get reduced against earlier rows.
    """
    w, m = lattice.weights, lattice.modulus
    if math.gcd(gcd_vector(w), m) != 1:
        raise InvalidInstanceError(
            f"lattice {w} mod {m} has determinant {lattice.det}, not {m}", clause="rank")
    d = len(w)
    rows = []
    g_prev = m  # gcd(w_1..w_{i-1}, m)
    for i in range(d):
        v_ii = g_prev // math.gcd(w[i], g_prev)
        row = [0] * d
        row[i] = v_ii
        if i:
            # need sum_{j<i} w_j x_j = -w_i v_ii (mod m); g_prev divides the target
            target = (-w[i] * v_ii) % m
            _, coeffs = xgcd_vector(list(w[:i]) + [m])
            k = target // g_prev
            for j in range(i):
                row[j] = coeffs[j] * k
            for j in range(i - 1, -1, -1):
                q = row[j] // rows[j][j]
                if q:
                    for t in range(j + 1):
                        row[t] -= q * rows[j][t]
        rows.append(tuple(row))
        g_prev = math.gcd(g_prev, w[i])
    basis = HNFBasis(tuple(rows), math.prod(r[i] for i, r in enumerate(rows)))
    assert basis.det == m
    assert all(lattice.residue(r) == 0 for r in rows)
    return basis


def gram_schmidt(rows):
    """Gram-Schmidt vectors of ``rows`` (in order), as tuples of Fractions."""
    hats = []
    for b in rows:
        v = [Fraction(x) for x in b]
        for h in hats:
            hh = sum(x * x for x in h)
            mu = sum(Fraction(x) * y for x, y in zip(b, h)) / hh
            v = [vi - mu * hi for vi, hi in zip(v, h)]
        hats.append(tuple(v))
    return hats


@dataclass(frozen=True)
class BoxRepresentative:
    lattice_point: tuple
    coefficients: tuple


def gs_box_representative(basis, x):
    """Lattice point ``y`` with ``x - y = sum(lam_i * bhat_i)`` and every ``0 <= lam_i < 1``.

    Peel coordinates from the last Gram-Schmidt direction to the first,
    subtracting ``floor(lam_i) * b_i`` each time.
    """
    rows = basis.rows
    d = len(rows)
    if len(x) != d:
        raise InvalidInstanceError(f"point has dimension {len(x)}, basis {d}", clause="dim")
    hats = gram_schmidt(rows)
    norms = [sum(c * c for c in h) for h in hats]
    rest = [Fraction(c) for c in x]
    y = [0] * d
    for i in range(d - 1, -1, -1):
        lam = sum(r * h for r, h in zip(rest, hats[i])) / norms[i]
        q = math.floor(lam)
        if q:
            rest = [r - q * b for r, b in zip(rest, rows[i])]
            y = [yi + q * b for yi, b in zip(y, rows[i])]
    lams = tuple(sum(r * h for r, h in zip(rest, hats[i])) / norms[i] for i in range(d))
    return BoxRepresentative(tuple(y), lams)


def particular_solution(weights, modulus, target):
    """Some integer ``x`` with ``weights . x = target (mod modulus)``."""
    g, coeffs = xgcd_vector(list(weights) + [modulus])
    if target % g:
        raise InvalidInstanceError(f"{target} is not reachable mod {modulus}", clause="residue")
    k = target // g
    return tuple(c * k for c in coeffs[:-1])


def residue_classes(lattice):
    """Canonical coset representatives of ``Z^d / lattice``.

    The representatives are the integer points of the HNF box
    ``[0, v_11 - 1] x ... x [0, v_dd - 1]`` in lexicographic order.  When
    ``gcd(w_1, m) = 1`` this is ``(k, 0, ..., 0)`` for ``k = 0 .. m - 1``.
    """
    basis = hnf_basis(lattice)
    return [tuple(p) for p in itertools.product(*(range(v) for v in basis.diagonal))]


def residue_shortest_paths(modulus, steps, costs, source=0):
    """Dijkstra on the cyclic group Z_modulus with arcs ``r -> r + step`` of cost ``cost``.

    Costs must be nonnegative (ints or Fractions).  Returns ``(dist, pred)``
    where ``dist[r]`` is ``None`` for unreachable residues and ``pred[r]`` is
    ``(previous residue, step index)``.
    """
    dist = [None] * modulus
    pred = [None] * modulus
    dist[source % modulus] = 0
    heap = [(0, source % modulus)]
    done = [False] * modulus
    arcs = [(k, s % modulus, c) for k, (s, c) in enumerate(zip(steps, costs)) if s % modulus]
    while heap:
        du, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for k, s, c in arcs:
            v = (u + s) % modulus
            nd = du + c
            if dist[v] is None or nd < dist[v]:
                dist[v] = nd
                pred[v] = (u, k)
                heapq.heappush(heap, (nd, v))
    return dist, pred


def path_counts(pred, target, nsteps, source=0):
    """Step-usage vector of the shortest path ending at ``target``."""
    counts = [0] * nsteps
    r = target
    while r != source:
        u, k = pred[r]
        counts[k] += 1
        r = u
    return tuple(counts)


def check_simplex_covering(lattice, caps=DEFAULT_CAPS):
    """Does ``(det - 1) * S_1 + lattice`` cover ``Z^d``?

    Returns ``(True, None)`` or ``(False, representative_of_uncovered_class)``.
    The least coordinate sum in each coset is a unit-cost shortest path in
    ``Z_m`` with arcs ``+w_i``.
    """
    d, m = lattice.dim, lattice.modulus
    if d > caps.covering_dim or m > caps.covering_det:
        raise ScaleError(f"covering check capped at d <= {caps.covering_dim}, "
                         f"det <= {caps.covering_det}; got d={d}, det={m}")
    hnf_basis(lattice)  # precondition: full rank with det m
    dist, _ = residue_shortest_paths(m, lattice.weights, [1] * d)
    for rep in residue_classes(lattice):
        r = lattice.residue(rep)
        if dist[r] is None or dist[r] > m - 1:
            return False, rep
    return True, None
