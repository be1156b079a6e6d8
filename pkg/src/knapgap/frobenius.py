"""Frobenius numbers, f(a+), Schur's bound and Kannan's covering radii."""

import itertools
import math
from dataclasses import dataclass

from .config import DEFAULT_CAPS
from .errors import InvalidInstanceError, ScaleError
from .lattice import gcd_vector


@dataclass(frozen=True)
class FrobeniusResult:
    g: int
    apery: tuple    # apery[r] = least representable integer = r (mod modulus)
    modulus: int    # min_i a_i

    def representable(self, b):
        return b >= 0 and b >= self.apery[b % self.modulus]


@dataclass(frozen=True)
class CoveringRadii:
    continuous: int
    discrete: int


def _require_positive_primitive(a):
    a = tuple(int(x) for x in a)
    if not a:
        raise InvalidInstanceError("empty vector", clause="dim")
    if any(x < 1 for x in a):
        raise InvalidInstanceError(f"entries must be positive: {a}", clause="positive")
    if gcd_vector(a) != 1:
        raise InvalidInstanceError(f"gcd{a} = {gcd_vector(a)}", clause="(ii)")
    return a


def apery_table(a):
    """Round-robin shortest paths over residues mod ``min(a)``.

    ``table[r]`` is the least nonnegative combination of ``a`` congruent to
    ``r``; ``None`` where no combination exists (non-primitive input).
    """
    a = sorted(int(x) for x in a)
    base = a[0]
    table = [None] * base
    table[0] = 0
    for ai in a[1:]:
        d = math.gcd(base, ai)
        for p in range(d):
            cands = [table[q] for q in range(p, base, d) if table[q] is not None]
            if not cands:
                continue
            n = min(cands)
            for _ in range(base // d - 1):
                n += ai
                r = n % base
                if table[r] is not None and table[r] < n:
                    n = table[r]
                table[r] = n
    return table


def frobenius_number(a):
    """Largest integer not representable by ``a``; ``-1`` when some entry is 1."""
    a = _require_positive_primitive(a)
    table = apery_table(a)
    base = min(a)
    return FrobeniusResult(max(table) - base, tuple(table), base)


def f_plus(a):
    """``g(|a|) + sum |a_i|``."""
    ap = tuple(abs(int(x)) for x in a)
    if any(x == 0 for x in ap):
        raise InvalidInstanceError(f"zero entry in {tuple(a)}", clause="(i)")
    return frobenius_number(ap).g + sum(ap)


def schur_bound(a):
    a = _require_positive_primitive(a)
    lo, hi = min(a), max(a)
    return lo * hi - lo - hi


def kannan_radii(a):
    """Continuous and discrete covering radii of (S_a, Lambda_a); the last entry is a_n."""
    a = _require_positive_primitive(a)
    if len(a) < 2:
        raise InvalidInstanceError("need n >= 2", clause="(i)")
    g = frobenius_number(a).g
    return CoveringRadii(continuous=g + sum(a), discrete=g + a[-1])


def discrete_radius_bruteforce(a, caps=DEFAULT_CAPS):
    """Max over cosets of Z^{n-1}/Lambda_a of the least ``a_1 x_1 + ... + a_{n-1} x_{n-1}``, x >= 0.

    A minimiser never has ``x_i >= a_n`` (subtract ``a_n e_i``, which lies in
    Lambda_a), so the box ``[0, a_n - 1]^{n-1}`` is searched exhaustively.
    """
    a = _require_positive_primitive(a)
    n = len(a)
    if n < 2:
        raise InvalidInstanceError("need n >= 2", clause="(i)")
    an = a[-1]
    if n > caps.covering_dim or an > caps.covering_det:
        raise ScaleError(f"brute-force discrete radius capped at n <= {caps.covering_dim}, "
                         f"a_n <= {caps.covering_det}")
    head = a[:-1]
    best = {}
    for x in itertools.product(range(an), repeat=n - 1):
        s = sum(ai * xi for ai, xi in zip(head, x))
        r = s % an
        if r not in best or s < best[r]:
            best[r] = s
    if len(best) != an:
        raise InvalidInstanceError(f"Lambda_a for {a} does not have determinant {an}", clause="rank")
    return max(best.values())
