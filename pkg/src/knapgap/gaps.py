"""LP/IP values on knapsack fibers, integrality gaps and group relaxations.

All objective values are exact :class:`~fractions.Fraction` objects.  The
only irrational quantities, the covering constants rho_d and the roots in
the lower bound for Gap(c, a), are carried as ``radicand ** (1/k) - offset``
and compared by raising to the k-th power.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .config import DEFAULT_CAPS
from .distance import proof_guided_point
from .errors import (InfeasibleError, InvalidInstanceError, InvariantViolation, ScaleError,
                     UnboundedError)
from .frobenius import f_plus
from .knapsack import KnapsackInstance, is_integer_feasible, vertices
from .lattice import (CongruenceLattice, gcd_vector, norm_1, path_counts,
                      require_knapsack_vector, residue_shortest_paths)

OPTIMAL, UNBOUNDED, INFEASIBLE = "optimal", "unbounded", "infeasible"


def as_costs(c, n=None):
    c = tuple(Fraction(x) for x in c)
    if n is not None and len(c) != n:
        raise InvalidInstanceError(f"cost vector has {len(c)} entries, instance has {n}", clause="dim")
    return c


@dataclass(frozen=True)
class Optimum:
    status: str
    value: Fraction = None
    point: tuple = None
    basis: int = None  # index of the basic variable of an optimal LP vertex


def recession_rays(a):
    """Extreme rays ``|a_j| e_i + |a_i| e_j`` of {x >= 0 : a.x = 0}, one per opposite-sign pair."""
    n = len(a)
    rays = []
    for i, j in itertools.combinations(range(n), 2):
        if (a[i] > 0) != (a[j] > 0):
            r = [0] * n
            r[i], r[j] = abs(a[j]), abs(a[i])
            rays.append(tuple(r))
    return rays


def lp_value(c, inst):
    c = as_costs(c, inst.n)
    verts = vertices(inst)
    if not verts:
        return Optimum(INFEASIBLE)
    for r in recession_rays(inst.a):
        if sum(ci * ri for ci, ri in zip(c, r)) < 0:
            return Optimum(UNBOUNDED)
    best = None
    for v in verts:
        val = Fraction(0) if v.index is None else c[v.index] * v.value
        if best is None or val < best[0]:
            best = (val, v)
    val, v = best
    return Optimum(OPTIMAL, val, v.point(inst.n), v.index)


def ip_value(c, inst, caps=DEFAULT_CAPS):
    """Exact ``min{c.x : x in P(a, b), x integral}``.

    With tau the basic variable of an optimal LP vertex and l the reduced
    costs, every feasible x costs ``LP + l . pi_tau(x)``.  The group
    relaxation (drop ``x_tau >= 0``) is solved first; if its optimum lifts to a
    feasible point the value is certified.  Otherwise the non-basic variables
    are searched exhaustively modulo ``|a_tau|``: a coordinate with
    ``a_i`` of the same sign as ``a_tau`` is never ``>= |a_tau|`` in some
    optimum, and the opposite-sign coordinates split into a residue plus
    multiples of ``|a_tau|`` whose cheapest choice is a covering knapsack.
    """
    c = as_costs(c, inst.n)
    if not is_integer_feasible(inst):
        return Optimum(INFEASIBLE)
    lp = lp_value(c, inst)
    if lp.status == UNBOUNDED:
        return Optimum(UNBOUNDED)
    n = inst.n
    if inst.b == 0:
        return Optimum(OPTIMAL, Fraction(0), (0,) * n)
    tau = lp.basis
    a, b = inst.a, inst.b
    if a[tau] < 0:
        a, b = tuple(-x for x in a), -b
    at = a[tau]
    others = [i for i in range(n) if i != tau]
    w = [a[i] for i in others]
    l = [c[i] - c[tau] * a[i] / at for i in others]
    if any(x < 0 for x in l):
        raise InvariantViolation(f"negative reduced cost at an optimal LP vertex: {l}")

    def lift(y):
        s = sum(wi * yi for wi, yi in zip(w, y))
        x = [0] * n
        for i, yi in zip(others, y):
            x[i] = yi
        x[tau] = (b - s) // at
        return tuple(x), s <= b

    dist, pred = residue_shortest_paths(at, w, l)
    target = b % at
    group_min = dist[target]
    y = path_counts(pred, target, len(others))
    x, ok = lift(y)
    if ok:
        return Optimum(OPTIMAL, lp.value + Fraction(group_min), x)

    volume = at ** len(others)
    if volume > caps.ip_enum:
        incumbent = min(sum(ci * xi for ci, xi in zip(c, proof_guided_point(inst, v)))
                        for v in vertices(inst))
        raise ScaleError(f"exact IP search needs {volume} residue combinations, cap is {caps.ip_enum}",
                         bracket=(lp.value + Fraction(group_min), incumbent))
    neg = [k for k, wi in enumerate(w) if wi < 0]
    dmax = (at - 1) * sum(wi for wi in w if wi > 0) // at + 1
    # cover[D] = (min sum l_j k_j over opposite-sign j with sum |w_j| k_j >= D, choice)
    cover = [(Fraction(0), None)]
    for D in range(1, dmax + 1):
        best = (None, None)
        for k in neg:
            prev = cover[max(D + w[k], 0)][0]  # w[k] < 0
            if prev is not None and (best[0] is None or l[k] + prev < best[0]):
                best = (l[k] + prev, k)
        cover.append(best)

    best_cost, best_y = None, None
    for ys in itertools.product(range(at), repeat=len(others)):
        s0 = sum(wi * yi for wi, yi in zip(w, ys))
        if (s0 - b) % at:
            continue
        D = (s0 - b) // at
        extra = Fraction(0) if D <= 0 else cover[D][0]
        if extra is None:
            continue
        cost = sum(li * yi for li, yi in zip(l, ys)) + at * extra
        if best_cost is None or cost < best_cost:
            ys = list(ys)
            while D > 0:
                k = cover[D][1]
                ys[k] += at
                D += w[k]
            best_cost, best_y = cost, tuple(ys)
    x, ok = lift(best_y)
    assert ok
    return Optimum(OPTIMAL, lp.value + best_cost, x)


@dataclass(frozen=True)
class GapReport:
    lp: Fraction
    ip: Fraction
    ig: Fraction
    bound: Fraction          # (||a||_inf - 1) ||c||_1
    lp_point: tuple
    ip_point: tuple

    def __post_init__(self):
        if self.ig != self.ip - self.lp:
            raise InvariantViolation("IG != IP - LP")
        if self.ig < 0:
            raise InvariantViolation(f"negative integrality gap {self.ig}")
        if self.ig > self.bound:
            raise InvariantViolation(f"integrality gap {self.ig} exceeds (||a||-1)||c||_1 = {self.bound}")


def integrality_gap(c, inst, caps=DEFAULT_CAPS):
    c = as_costs(c, inst.n)
    ip = ip_value(c, inst, caps)
    if ip.status == INFEASIBLE:
        raise InfeasibleError(f"P({inst.a}, {inst.b}) has no integer point")
    if ip.status == UNBOUNDED:
        raise UnboundedError(f"c = {c} is unbounded below on P({inst.a}, {inst.b})")
    lp = lp_value(c, inst)
    bound = (inst.norm_inf - 1) * norm_1(c)
    return GapReport(lp.value, ip.value, ip.value - lp.value, bound, lp.point, ip.point)


# -- group relaxations ------------------------------------------------------


@dataclass(frozen=True)
class GroupProblem:
    lattice: CongruenceLattice
    costs: tuple
    residue: tuple

    def __post_init__(self):
        object.__setattr__(self, "costs", as_costs(self.costs, self.lattice.dim))
        object.__setattr__(self, "residue", tuple(int(x) for x in self.residue))
        if any(x <= 0 for x in self.costs):
            raise InvalidInstanceError("group problem costs must be positive", clause="costs")
        if len(self.residue) != self.lattice.dim:
            raise InvalidInstanceError("residue has the wrong dimension", clause="dim")

    @classmethod
    def of_knapsack(cls, a, costs, residue):
        a = require_knapsack_vector(a)
        return cls(CongruenceLattice.of_knapsack(a), costs, residue)


@dataclass(frozen=True)
class GroupEntry:
    residue: int       # weights . x mod modulus
    value: Fraction
    witness: tuple


@dataclass(frozen=True)
class GroupTable:
    modulus: int
    entries: tuple     # entries[r] is the entry for residue value r

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class LatticeGap:
    gap: Fraction
    argmax: int
    table: GroupTable


def _group_paths(lattice, costs):
    w, m = lattice.weights, lattice.modulus
    if math.gcd(gcd_vector(w), m) != 1:
        raise InvalidInstanceError(f"weights {w} do not generate Z_{m}", clause="rank")
    return residue_shortest_paths(m, w, costs)


def group_value(problem):
    """``min{l.x : x = r (mod lattice), x >= 0 integral}`` with a minimising x."""
    dist, pred = _group_paths(problem.lattice, problem.costs)
    target = problem.lattice.residue(problem.residue)
    if dist[target] is None:
        raise RuntimeError(f"residue {target} unreachable despite the gcd condition")
    return Fraction(dist[target]), path_counts(pred, target, problem.lattice.dim)


def lattice_gap(lattice, costs):
    """Largest group-relaxation value over all residue classes; least residue on ties."""
    costs = as_costs(costs, lattice.dim)
    if any(x <= 0 for x in costs):
        raise InvalidInstanceError("lattice programming gap needs positive costs", clause="costs")
    dist, pred = _group_paths(lattice, costs)
    entries = tuple(GroupEntry(r, Fraction(dist[r]), path_counts(pred, r, lattice.dim))
                    for r in range(lattice.modulus))
    top = max(entries, key=lambda e: (e.value, -e.residue))
    return LatticeGap(top.value, top.residue, GroupTable(lattice.modulus, entries))


def gap_special(a):
    """Gap(c, a) for ``c = (a_1, ..., a_{n-1}, 0)``, i.e. Gap(Lambda_a, pi_n(a))."""
    a = require_knapsack_vector(a)
    if any(x <= 0 for x in a):
        raise InvalidInstanceError("gap_special needs a positive vector", clause="positive")
    return lattice_gap(CongruenceLattice.of_knapsack(a), a[:-1]).gap


@dataclass(frozen=True)
class GapScan:
    value: Fraction      # None when no b in the window is feasible and bounded
    argmax: int
    b_min: int
    b_max: int
    scanned: int


def gap_scan(c, a, b_max=None, b_min=0, caps=DEFAULT_CAPS):
    """``max IG(c, a, b)`` over b in [b_min, b_max] with a feasible bounded IP.

    A lower estimate of Gap(c, a); the default window ends at ``f(a+)``.
    """
    a = require_knapsack_vector(a)
    c = as_costs(c, len(a))
    if b_max is None:
        b_max = f_plus(a)
    count = b_max - b_min + 1
    if count > caps.scan:
        raise ScaleError(f"gap scan over {count} right-hand sides, cap is {caps.scan}")
    best, arg, scanned = None, None, 0
    for b in range(b_min, b_max + 1):
        inst = KnapsackInstance(a, b)
        ip = ip_value(c, inst, caps)
        if ip.status != OPTIMAL:
            continue
        scanned += 1
        ig = ip.value - lp_value(c, inst).value
        if best is None or ig > best:
            best, arg = ig, b
    return GapScan(best, arg, b_min, b_max, scanned)


# -- covering constants and the generic lower bound -------------------------


@dataclass(frozen=True)
class RootBound:
    """The real number ``radicand ** (1/k) - offset``."""

    radicand: Fraction
    k: int
    offset: Fraction

    def __float__(self):
        return float(self.radicand) ** (1.0 / self.k) - float(self.offset)

    def _shift(self, q):
        return Fraction(q) + self.offset

    def le(self, q):
        t = self._shift(q)
        return t >= 0 and self.radicand <= t ** self.k

    def ge(self, q):
        t = self._shift(q)
        return t <= 0 or self.radicand >= t ** self.k

    def equals(self, q):
        t = self._shift(q)
        return t >= 0 and self.radicand == t ** self.k


@dataclass(frozen=True)
class Rho:
    d: int
    power: Fraction   # rho_d ** d, or (d!) when only the lower bound is known
    exact: bool

    @property
    def value(self):
        return float(self.power) ** (1.0 / self.d)


def rho_table(d):
    if d < 1:
        raise InvalidInstanceError("rho_d needs d >= 1", clause="dim")
    if d == 1:
        return Rho(1, Fraction(1), True)
    if d == 2:
        return Rho(2, Fraction(3), True)
    return Rho(d, Fraction(math.factorial(d)), False)


def covering_lower_bound(det, costs):
    """``rho_k (det * l_1 ... l_k)^{1/k} - ||l||_1`` as a RootBound (rho_k weakened for k >= 3)."""
    costs = as_costs(costs)
    k = len(costs)
    rho = rho_table(k)
    return RootBound(rho.power * det * math.prod(costs), k, sum(costs)), rho.exact


@dataclass(frozen=True)
class GapLowerBound:
    generic: bool
    tau: int = None
    l: tuple = None
    bound: RootBound = None
    rho_exact: bool = None


def gap_lower_bound(a, c):
    """Lower bound on Gap(c, a) for a generic positive pair; ``tau`` is 0-based."""
    a = require_knapsack_vector(a)
    if any(x <= 0 for x in a):
        raise InvalidInstanceError("the lower bound needs a positive vector", clause="positive")
    c = as_costs(c, len(a))
    ratios = [ci / ai for ci, ai in zip(c, a)]
    low = min(ratios)
    if ratios.count(low) > 1:
        return GapLowerBound(False)
    tau = ratios.index(low)
    l = tuple(c[i] - c[tau] * a[i] / a[tau] for i in range(len(a)) if i != tau)
    bound, exact = covering_lower_bound(a[tau], l)
    return GapLowerBound(True, tau, l, bound, exact)
