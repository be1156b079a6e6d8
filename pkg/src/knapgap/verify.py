"""Invariant sweeps run by ``knapgap verify`` and by the acceptance tests.

Each sweep returns a :class:`Check`.  Nothing time-dependent goes into a
check, so two runs with the same scale produce identical reports.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .distance import (NEG_INF, distance_profile, l1_nearest_check, tight_witness,
                       vertex_distance)
from .errors import InfeasibleError, InvariantViolation, UnboundedError
from .experiments import (SampleSpec, csv_text, run_records, tail_table)
from .frobenius import (discrete_radius_bruteforce, frobenius_number, kannan_radii,
                        schur_bound)
from .gaps import covering_lower_bound, gap_special, integrality_gap, lattice_gap, gap_lower_bound
from .knapsack import BOUNDED, KnapsackInstance, classify, is_integer_feasible
from .lattice import CongruenceLattice, gcd_vector, norm_1, validate_knapsack_vector

MAX_REPORTED = 10


@dataclass(frozen=True)
class Scale:
    t1_n: tuple = (2, 3)
    t1_H: int = 12
    t1_b: int = 40
    t2_n: int = 5
    t2_k: int = 10
    t4_H: int = 25
    t5_pair: int = 200
    t5_n: int = 4
    t5_H: int = 20
    t7_samples: int = 10_000
    t7_n: int = 4
    t7_H: int = 15
    t7_coef: int = 10
    t7_b: int = 60
    t10_n: int = 3
    t10_H: int = 30
    t10_samples: int = 10_000
    t10_eps: Fraction = Fraction(1, 2)
    t10_grid: tuple = tuple(Fraction(k, 4) for k in range(1, 25))
    t11_samples: int = 200
    seed: int = 20240601


FULL = Scale()
QUICK = Scale(t1_H=5, t1_b=12, t2_n=4, t2_k=6, t4_H=10, t5_pair=40, t5_H=8, t7_samples=300,
              t7_H=8, t10_H=15, t10_samples=500, t10_grid=tuple(Fraction(k, 4) for k in range(4, 25)),
              t11_samples=50)
SCALES = {"full": FULL, "quick": QUICK}


@dataclass(frozen=True)
class Check:
    criterion: int
    name: str
    passed: bool
    checked: int
    violations: tuple = ()
    data: dict = field(default_factory=dict)


class _Tally:
    def __init__(self):
        self.checked = 0
        self.bad = []
        self.nbad = 0

    def __call__(self, ok, detail):
        self.checked += 1
        if not ok:
            self.nbad += 1
            if len(self.bad) < MAX_REPORTED:
                self.bad.append(detail() if callable(detail) else detail)

    def check(self, criterion, name, **data):
        if self.nbad:
            data["violation_count"] = self.nbad
        return Check(criterion, name, self.nbad == 0, self.checked, tuple(self.bad), data)


def knapsack_vectors(n, H, positive=False):
    """Primitive vectors in {-H..H}^n without zero entries (or in {1..H}^n)."""
    lo = 1 if positive else -H
    for a in itertools.product(range(lo, H + 1), repeat=n):
        if validate_knapsack_vector(a):
            yield a


def _map(fn, items, workers):
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(fn, items, chunksize=64))
    return [fn(x) for x in items]


# -- 1. vertex distance bound -------------------------------------------------


def _distance_row(args):
    a, b_lo, b_hi = args
    exact = [vertex_distance(KnapsackInstance(a, b)).value for b in range(b_lo, b_hi + 1)]
    return exact, distance_profile(a, b_lo, b_hi)


def check_distance_bound(scale=FULL, workers=1):
    tally = _Tally()
    items = [(a, -scale.t1_b, scale.t1_b) for n in scale.t1_n for a in knapsack_vectors(n, scale.t1_H)]
    feasible = 0
    for (a, lo, _), (exact, fast) in zip(items, _map(_distance_row, items, workers)):
        bound = max(abs(x) for x in a) - 1
        for b, d, e in zip(range(lo, lo + len(exact)), exact, fast):
            if d != NEG_INF:
                feasible += 1
            tally(d <= bound and d == e, lambda: f"a={a} b={b} d={d} profile={e} bound={bound}")
    return tally.check(1, "vertex distance <= ||a||_inf - 1", vectors=len(items), feasible=feasible)


# -- 2. tight witnesses ---------------------------------------------------------


def check_tight_witness(scale=FULL):
    tally = _Tally()
    for n in range(2, scale.t2_n + 1):
        for k in range(1, scale.t2_k + 1):
            inst, expected = tight_witness(n, k)
            d = vertex_distance(inst).value
            tally(d == expected, f"n={n} k={k} d={d} expected={expected}")
    return tally.check(2, "tight witness attains k - 1")


# -- 3. l1 refinement -----------------------------------------------------------


def check_l1(scale=FULL):
    tally = _Tally()
    for n in scale.t1_n:
        for a in knapsack_vectors(n, scale.t1_H):
            for b in range(-scale.t1_b, scale.t1_b + 1):
                inst = KnapsackInstance(a, b)
                if classify(inst) != BOUNDED or not is_integer_feasible(inst):
                    continue
                res = l1_nearest_check(inst)
                tally(res.holds, lambda: f"a={a} b={b} l1={res.value} bound={res.bound}")
    return tally.check(3, "l1 distance <= 2(||a||_inf - 1) on bounded instances")


# -- 4, 6, 8. covering radius, lattice gaps, lower bound -------------------------


def check_kannan(scale=FULL):
    tally = _Tally()
    for a in knapsack_vectors(3, scale.t4_H, positive=True):
        g = frobenius_number(a).g
        brute = discrete_radius_bruteforce(a)
        tally(brute == g + a[-1] == kannan_radii(a).discrete,
              lambda: f"a={a} brute={brute} g+a_n={g + a[-1]}")
    return tally.check(4, "discrete covering radius = g(a) + a_n")


def check_gap_triangle(scale=FULL):
    tally = _Tally()
    for a in knapsack_vectors(3, scale.t4_H, positive=True):
        g = frobenius_number(a).g
        special = gap_special(a)
        lg = lattice_gap(CongruenceLattice.of_knapsack(a), a[:-1]).gap
        brute = discrete_radius_bruteforce(a)
        tally(special == g + a[-1] == lg == brute,
              lambda: f"a={a} special={special} g+a_n={g + a[-1]} lattice={lg} brute={brute}")
    return tally.check(6, "gap_special = g + a_n = lattice gap = brute force")


def check_rho_bound(scale=FULL):
    tally = _Tally()
    # k = 2: projected costs and unit costs on every positive triple
    for a in knapsack_vectors(3, scale.t4_H, positive=True):
        lat = CongruenceLattice.of_knapsack(a)
        for l in (a[:-1], (1, 1)):
            gap = lattice_gap(lat, l).gap
            bound, exact = covering_lower_bound(lat.det, l)
            tally(exact and bound.le(gap), lambda: f"a={a} l={l} gap={gap} bound={float(bound):.6g}")
        t4 = gap_lower_bound(a, a[:-1] + (0,))
        tally(t4.generic and t4.bound.le(gap_special(a)), lambda: f"a={a} lower bound above gap")
    # k = 1 on positive pairs
    for a in knapsack_vectors(2, scale.t4_H, positive=True):
        for l in ((a[0],), (1,)):
            gap = lattice_gap(CongruenceLattice.of_knapsack(a), l).gap
            bound, _ = covering_lower_bound(a[-1], l)
            tally(bound.le(gap), lambda: f"a={a} l={l} gap={gap} bound={float(bound):.6g}")
    t4 = gap_lower_bound((3, 5), (1, 0))
    exact_gap = lattice_gap(CongruenceLattice.of_knapsack((3, 5)), t4.l).gap
    attained = t4.generic and t4.bound.equals(4) and exact_gap == 4
    tally(attained, "a=(3,5) c=(1,0): bound 4 not attained")
    return tally.check(8, "lattice gap >= rho lower bound", attained_example=attained)


# -- 5. Frobenius formulas ------------------------------------------------------


def check_frobenius(scale=FULL):
    tally = _Tally()
    for a1 in range(1, scale.t5_pair + 1):
        for a2 in range(a1, scale.t5_pair + 1):
            if gcd_vector((a1, a2)) == 1:
                g = frobenius_number((a1, a2)).g
                tally(g == a1 * a2 - a1 - a2, lambda: f"a=({a1},{a2}) g={g}")
    for n in range(2, scale.t5_n + 1):
        # g is symmetric, so nondecreasing vectors cover the sweep
        for a in itertools.combinations_with_replacement(range(1, scale.t5_H + 1), n):
            if gcd_vector(a) == 1:
                g = frobenius_number(a).g
                tally(g <= schur_bound(a), lambda: f"a={a} g={g} schur={schur_bound(a)}")
    return tally.check(5, "Sylvester formula and Schur bound")


# -- 7, 9. randomized integrality gaps -------------------------------------------


@dataclass(frozen=True)
class GapSample:
    c: tuple
    inst: KnapsackInstance
    index: int


def gap_samples(count, n_max, H, coef, b_range, seed):
    """Seeded (c, a, b) with a feasible bounded integer program; redrawn until one is found."""
    for i in range(count):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(7, i)))
        while True:
            n = int(rng.integers(2, n_max + 1))
            mags = rng.integers(1, H + 1, size=n)
            signs = rng.choice((-1, 1), size=n)
            a = tuple(int(s * m) for s, m in zip(signs, mags))
            if gcd_vector(a) != 1:
                continue
            b = int(rng.integers(-b_range, b_range + 1))
            nums = rng.integers(-coef, coef + 1, size=n)
            dens = rng.integers(1, coef + 1, size=n)
            c = tuple(Fraction(int(p), int(q)) for p, q in zip(nums, dens))
            inst = KnapsackInstance(a, b)
            if not is_integer_feasible(inst):
                continue
            try:
                integrality_gap(c, inst)
            except (InfeasibleError, UnboundedError):
                continue
            yield GapSample(c, inst, i)
            break


def _gap_row(s):
    try:
        rep = integrality_gap(s.c, s.inst)
    except InvariantViolation as exc:
        return None, str(exc), None
    d = vertex_distance(s.inst).value
    return rep, None, d


def check_integrality_gaps(scale=FULL, workers=1):
    samples = list(gap_samples(scale.t7_samples, scale.t7_n, scale.t7_H, scale.t7_coef,
                               scale.t7_b, scale.seed))
    rows = _map(_gap_row, samples, workers)
    t7, t9 = _Tally(), _Tally()
    for s, (rep, err, d) in zip(samples, rows):
        label = f"#{s.index} c={tuple(str(x) for x in s.c)} a={s.inst.a} b={s.inst.b}"
        if rep is None:
            t7(False, f"{label}: {err}")
            continue
        t7(rep.ig <= rep.bound, lambda: f"{label} ig={rep.ig} bound={rep.bound}")
        t9(rep.ig <= d * norm_1(s.c), lambda: f"{label} ig={rep.ig} d={d}")
    attained = []
    for n in range(2, 6):
        for k in range(1, 11):
            inst, _ = tight_witness(n, k)
            c = (0,) * (n - 1) + (1,)
            rep = integrality_gap(c, inst)
            ok = rep.ig == rep.bound == k - 1
            attained.append(ok)
            t7(ok, f"witness n={n} k={k}: ig={rep.ig} bound={rep.bound}")
    return (t7.check(7, "IG <= (||a||_inf - 1)||c||_1", samples=len(samples),
                     equality_cases=sum(attained)),
            t9.check(9, "IG <= d(a, b)||c||_1", samples=len(samples)))


# -- 10. tail shape ---------------------------------------------------------------


def tail_spec(scale=FULL):
    return SampleSpec(scale.t10_n, scale.t10_H, scale.t10_samples, scale.seed, scale.t10_eps)


def check_tail(scale=FULL, workers=1):
    spec = tail_spec(scale)
    table = tail_table(run_records(spec, workers=workers), spec, scale.t10_grid)
    tally = _Tally()
    for x, y in zip(table.rows, table.rows[1:]):
        tally(x.ratio >= y.ratio, f"ratio increases from t={x.t} to t={y.t}")
    for row in table.rows:
        tally(float(row.ratio) <= row.reference * (1 + 1e-12),
              lambda: f"t={row.t} ratio={float(row.ratio):.6g} reference={row.reference:.6g}")
    plot = [{"t": r.t, "count": r.count, "ratio": r.ratio, "reference": r.reference}
            for r in table.rows]
    return tally.check(10, "tail ratio non-increasing and below C t^-alpha", C=table.C,
                       alpha=table.alpha, samples=table.samples, plot=plot)


# -- 11. determinism ----------------------------------------------------------------


def check_determinism(scale=FULL, workers=1):
    tally = _Tally()
    spec = SampleSpec(scale.t10_n, scale.t10_H, scale.t11_samples, scale.seed, scale.t10_eps)
    first = csv_text(run_records(spec))
    tally(first == csv_text(run_records(spec)), "repeated serial run differs")
    if workers > 1:
        tally(first == csv_text(run_records(spec, workers=workers)), "parallel run differs")
    return tally.check(11, "seeded experiment output is reproducible")


CRITERIA = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11)


def run_checks(scale=FULL, only=None, workers=1):
    only = set(CRITERIA if only is None else only)
    out = []
    if 1 in only:
        out.append(check_distance_bound(scale, workers))
    if 2 in only:
        out.append(check_tight_witness(scale))
    if 3 in only:
        out.append(check_l1(scale))
    if 4 in only:
        out.append(check_kannan(scale))
    if 5 in only:
        out.append(check_frobenius(scale))
    if 6 in only:
        out.append(check_gap_triangle(scale))
    if only & {7, 9}:
        out.extend(c for c in check_integrality_gaps(scale, workers) if c.criterion in only)
    if 8 in only:
        out.append(check_rho_bound(scale))
    if 10 in only:
        out.append(check_tail(scale, workers))
    if 11 in only:
        out.append(check_determinism(scale, workers))
    return sorted(out, key=lambda c: c.criterion)
