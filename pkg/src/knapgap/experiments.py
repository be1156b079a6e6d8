"""Seeded sampling over Q(H) and the tail / average statistics built on max_b d(a, b).

Every sample ``i`` draws from its own generator seeded by ``(seed, i)``, so
a record does not depend on how many other samples were drawn or in which
order they were evaluated.
"""

import csv
import io
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import DEFAULT_CAPS
from .distance import NEG_INF, max_distance_over_range
from .errors import InvalidInstanceError, ScaleError
from .frobenius import f_plus, frobenius_number
from .lattice import norm_1, norm_inf, validate_knapsack_vector

CSV_HEADER = ("a", "b_argmax", "Dmax", "f_plus", "eps", "normalized", "upper_proxy",
              "lower_witness", "seed")
RANDOM, EXHAUSTIVE, AUTO = "random", "exhaustive", "auto"


@dataclass(frozen=True)
class SampleSpec:
    n: int
    H: int
    samples: int = 1000
    seed: int = 0
    eps: Fraction = Fraction(1, 2)
    window: int = None       # None: W = f(a+) + ||a||_1 per vector
    mode: str = RANDOM

    def __post_init__(self):
        object.__setattr__(self, "eps", Fraction(self.eps))
        if self.n < 2:
            raise InvalidInstanceError("need n >= 2", clause="(i)")
        if self.H < 1:
            raise InvalidInstanceError("need H >= 1", clause="H")
        if self.samples < 0:
            raise InvalidInstanceError("sample count must be >= 0", clause="samples")
        if not 0 <= self.eps < 1:
            raise InvalidInstanceError("need 0 <= eps < 1", clause="eps")
        if self.mode not in (RANDOM, EXHAUSTIVE, AUTO):
            raise InvalidInstanceError(f"unknown sampling mode {self.mode!r}", clause="mode")
        if self.window is not None and self.window < 0:
            raise InvalidInstanceError("window must be >= 0", clause="window")

    def check_tail_range(self):
        if self.n < 3:
            raise InvalidInstanceError("tail statistics need n >= 3", clause="(i)")
        if not 0 < self.eps < Fraction(3, 4):
            raise InvalidInstanceError("tail statistics need 0 < eps < 3/4", clause="eps")


def _draw(rng, n, H):
    while True:
        a = tuple(int(x) for x in rng.integers(-H, H + 1, size=n))
        if validate_knapsack_vector(a):
            return a


def sample_stream(spec, caps=DEFAULT_CAPS):
    """``(seed_path, a)`` pairs; exhaustive mode lists Q(H) in lexicographic order."""
    mode = spec.mode
    if mode == AUTO:
        mode = EXHAUSTIVE if (2 * spec.H + 1) ** spec.n <= caps.exhaustive else RANDOM
    if mode == EXHAUSTIVE:
        if (2 * spec.H + 1) ** spec.n > caps.exhaustive:
            raise ScaleError(f"exhaustive Q(H) has up to {(2 * spec.H + 1) ** spec.n} vectors, "
                             f"cap is {caps.exhaustive}")
        rng = range(-spec.H, spec.H + 1)
        k = 0
        for a in itertools.product(rng, repeat=spec.n):
            if validate_knapsack_vector(a):
                yield f"exhaustive:{k}", a
                k += 1
        return
    for i in range(spec.samples):
        gen = np.random.default_rng(np.random.SeedSequence(spec.seed, spawn_key=(i,)))
        yield f"{spec.seed}:{i}", _draw(gen, spec.n, spec.H)


def sample_Q(spec, caps=DEFAULT_CAPS):
    return [a for _, a in sample_stream(spec, caps)]


@dataclass(frozen=True)
class MaxDistance:
    value: Fraction
    argmax: int
    window: tuple


def default_window(a):
    return f_plus(a) + norm_1(a)


def max_distance_over_b(a, window=None, caps=DEFAULT_CAPS):
    """Largest d(a, b) for b in [-W, W]; the least maximising b is reported."""
    W = default_window(a) if window is None else window
    value, arg = max_distance_over_range(a, -W, W, caps)
    return MaxDistance(value, arg, (-W, W))


def eps_power(x, eps):
    return float(x) ** float(eps)


def lower_witness(a):
    """``(g(a) + a_n) / (a_1 + ... + a_{n-1})`` for positive a, else 0.

    This is Gap(c, a)/||c||_1 for ``c = (a_1, ..., a_{n-1}, 0)``.
    """
    if any(x <= 0 for x in a):
        return Fraction(0)
    return Fraction(frobenius_number(a).g + a[-1], sum(a[:-1]))


@dataclass(frozen=True)
class ExperimentRecord:
    a: tuple
    b_argmax: int
    dmax: Fraction
    f_plus: int
    eps: Fraction
    normalized: float        # Dmax / ||a||^eps
    upper_proxy: float       # same quantity, read as a bound on max_c Gap/(||a||^eps ||c||_1)
    lower_witness: float     # lower_witness(a) / ||a||^eps
    seed: str
    window: tuple


def evaluate(a, eps, seed_path="", window=None, caps=DEFAULT_CAPS):
    md = max_distance_over_b(a, window, caps)
    if md.value == NEG_INF:
        raise RuntimeError(f"no feasible b in the window for {a}")  # b = 0 is always feasible
    scale = eps_power(norm_inf(a), eps)
    normalized = float(md.value) / scale
    return ExperimentRecord(tuple(a), md.argmax, md.value, f_plus(a), Fraction(eps), normalized,
                            normalized, float(lower_witness(a)) / scale, seed_path, md.window)


def run_records(spec, caps=DEFAULT_CAPS, workers=1):
    pairs = list(sample_stream(spec, caps))
    if workers > 1 and len(pairs) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_evaluate_pair, pairs, itertools.repeat(spec.eps),
                                 itertools.repeat(spec.window), itertools.repeat(caps),
                                 chunksize=64))
    return [evaluate(a, spec.eps, path, spec.window, caps) for path, a in pairs]


def _evaluate_pair(pair, eps, window, caps):
    path, a = pair
    return evaluate(a, eps, path, window, caps)


# -- statistics ---------------------------------------------------------------


def alpha(eps, n):
    """Tail exponent ``(n - 2) / ((1 - eps) n)``."""
    eps = Fraction(eps)
    return Fraction(n - 2) / ((1 - eps) * n)


def exceeds(record, t):
    """``Dmax > t * ||a||^eps``, decided exactly for rational t and eps = p/q."""
    t = Fraction(t)
    if t < 0:
        return True
    p, q = record.eps.numerator, record.eps.denominator
    return record.dmax ** q > t ** q * Fraction(norm_inf(record.a)) ** p


@dataclass(frozen=True)
class TailRow:
    t: Fraction
    count: int
    ratio: Fraction
    reference: float   # min(1, C t^-alpha)


@dataclass(frozen=True)
class TailTable:
    n: int
    H: int
    eps: Fraction
    alpha: Fraction
    C: float
    t_fit: Fraction
    samples: int
    rows: tuple

    def monotone(self):
        return all(x.ratio >= y.ratio for x, y in zip(self.rows, self.rows[1:]))

    def violations(self):
        return [row for row in self.rows if float(row.ratio) > row.reference * (1 + 1e-12)]


def tail_table(records, spec, t_grid, t_fit=1):
    """Empirical ``N_eps(t, H)/N(H)`` over ``records`` with the fitted reference curve."""
    spec.check_tail_range()
    t_grid = sorted(Fraction(t) for t in t_grid)
    t_fit = Fraction(t_fit)
    total = len(records)
    al = alpha(spec.eps, spec.n)

    def ratio(t):
        k = sum(1 for r in records if exceeds(r, t))
        return k, (Fraction(k, total) if total else Fraction(0))

    C = float(ratio(t_fit)[1]) * float(t_fit) ** float(al)
    rows = []
    for t in t_grid:
        k, r = ratio(t)
        ref = 1.0 if t <= 0 else min(1.0, C * float(t) ** -float(al))
        rows.append(TailRow(t, k, r, ref))
    return TailTable(spec.n, spec.H, spec.eps, al, C, t_fit, total, tuple(rows))


def tail_ratio(spec, t_grid, t_fit=1, caps=DEFAULT_CAPS, workers=1):
    return tail_table(run_records(spec, caps, workers), spec, t_grid, t_fit)


@dataclass(frozen=True)
class Averages:
    upper_proxy: float
    lower_witness: float
    samples: int
    positive_samples: int


def averages(records):
    """Means over all records; non-positive vectors contribute 0 to the lower witness."""
    if not records:
        return Averages(0.0, 0.0, 0, 0)
    k = len(records)
    pos = sum(1 for r in records if all(x > 0 for x in r.a))
    return Averages(math.fsum(r.upper_proxy for r in records) / k,
                    math.fsum(r.lower_witness for r in records) / k, k, pos)


def avg_normalized_gap(spec, caps=DEFAULT_CAPS, workers=1):
    return averages(run_records(spec, caps, workers))


# -- CSV ------------------------------------------------------------------------


def format_rational(x):
    if x == NEG_INF:
        return "-inf"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_float(x):
    return f"{x:.12g}"


def record_row(r):
    return [";".join(str(x) for x in r.a), str(r.b_argmax), format_rational(r.dmax),
            str(r.f_plus), format_rational(r.eps), format_float(r.normalized),
            format_float(r.upper_proxy), format_float(r.lower_witness), r.seed]


def csv_text(records):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(record_row(r))
    return buf.getvalue()


def emit_csv(records, path):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(csv_text(records))
