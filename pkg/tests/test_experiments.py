import itertools
import math
from fractions import Fraction

import pytest

from knapgap.config import Caps
from knapgap.errors import InvalidInstanceError, ScaleError
from knapgap.experiments import (CSV_HEADER, SampleSpec, alpha, averages, csv_text, emit_csv,
                                 evaluate, exceeds, lower_witness, max_distance_over_b,
                                 run_records, sample_Q, tail_table)

from oracles import gcd_all


def q_count(n, H):
    return sum(1 for a in itertools.product(range(-H, H + 1), repeat=n)
               if 0 not in a and gcd_all(a) == 1)


def test_exhaustive_counts():
    # 4^3 nonzero-entry vectors minus the 8 with every entry +-2
    assert len(sample_Q(SampleSpec(3, 2, mode="exhaustive"))) == 56 == q_count(3, 2)
    assert sorted(sample_Q(SampleSpec(2, 1, mode="exhaustive"))) == [(-1, -1), (-1, 1), (1, -1),
                                                                      (1, 1)]
    assert len(sample_Q(SampleSpec(3, 5, mode="auto"))) == q_count(3, 5)


def test_exhaustive_cap():
    with pytest.raises(ScaleError):
        sample_Q(SampleSpec(3, 30, mode="exhaustive"), Caps(exhaustive=1000))


def test_sampling_is_seeded():
    spec = SampleSpec(3, 10, samples=50, seed=7)
    first = sample_Q(spec)
    assert first == sample_Q(spec)
    assert first != sample_Q(SampleSpec(3, 10, samples=50, seed=8))
    # sub-seeds depend on the index only
    assert sample_Q(SampleSpec(3, 10, samples=20, seed=7)) == first[:20]
    assert all(0 not in a and gcd_all(a) == 1 and max(map(abs, a)) <= 10 for a in first)


def test_spec_validation():
    with pytest.raises(InvalidInstanceError):
        SampleSpec(3, 0)
    with pytest.raises(InvalidInstanceError):
        SampleSpec(3, 5, mode="grid")
    with pytest.raises(InvalidInstanceError):
        SampleSpec(3, 5, eps=Fraction(3, 4)).check_tail_range()
    with pytest.raises(InvalidInstanceError):
        SampleSpec(2, 5).check_tail_range()


def test_max_distance_examples():
    md = max_distance_over_b((5, 5, 1))
    assert (md.value, md.argmax) == (4, 4)
    assert max_distance_over_b((1, 1, 1)).value == 0
    md = max_distance_over_b((3, -2))
    assert md.value <= 2 and md.window == (-11, 11)  # f(3, 2) = 1 + 5, plus ||a||_1 = 5


def test_alpha():
    assert alpha(Fraction(1, 2), 3) == Fraction(2, 3)
    assert alpha(Fraction(1, 4), 4) == Fraction(2, 3)


def test_lower_witness():
    assert lower_witness((3, 5, 7)) == Fraction(11, 8)
    assert lower_witness((1, 1, 1)) == 0
    assert lower_witness((3, -5, 7)) == 0
    rec = evaluate((3, 5, 7), Fraction(1, 2))
    assert rec.lower_witness == pytest.approx(11 / (8 * math.sqrt(7)))
    assert evaluate((1, 1, 1), Fraction(1, 2)).upper_proxy == 0


def test_record_invariants():
    for rec in run_records(SampleSpec(3, 12, samples=200, seed=3, eps=Fraction(1, 2))):
        h = max(map(abs, rec.a))
        assert rec.dmax <= h - 1
        assert rec.normalized <= h ** 0.5 + 1e-12


def test_exceeds_is_exact():
    rec = evaluate((5, 5, 1), Fraction(1, 2))  # Dmax = 4, ||a|| = 5
    assert exceeds(rec, Fraction(178, 100))     # 4/sqrt 5 = 1.78885...
    assert not exceeds(rec, Fraction(179, 100))


def test_tail_table_shape():
    spec = SampleSpec(3, 12, samples=300, seed=11, eps=Fraction(1, 2))
    recs = run_records(spec)
    table = tail_table(recs, spec, [Fraction(k, 2) for k in range(0, 12)] + [100])
    assert table.monotone()
    assert table.rows[-1].ratio == 0
    assert table.alpha == Fraction(2, 3)
    assert table.C == pytest.approx(float(next(r.ratio for r in table.rows if r.t == 1)))


def test_averages_single_sample():
    rec = evaluate((3, 5, 7), Fraction(1, 2))
    av = averages([rec])
    assert av.upper_proxy == rec.upper_proxy and av.lower_witness == rec.lower_witness
    assert averages([]).samples == 0


def test_csv(tmp_path):
    p = tmp_path / "empty.csv"
    emit_csv([], p)
    assert p.read_text() == ",".join(CSV_HEADER) + "\n"
    recs = run_records(SampleSpec(3, 6, samples=1, seed=1))
    emit_csv(recs, tmp_path / "one.csv")
    assert len((tmp_path / "one.csv").read_text().splitlines()) == 2
    recs = run_records(SampleSpec(3, 6, samples=30, seed=1))
    emit_csv(recs, tmp_path / "a.csv")
    emit_csv(recs, tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    assert csv_text(recs) == csv_text(run_records(SampleSpec(3, 6, samples=30, seed=1)))


def test_csv_io_error_surfaces(tmp_path):
    with pytest.raises(OSError):
        emit_csv([], tmp_path / "missing" / "x.csv")
