from fractions import Fraction

import pytest

from sadic import families
from sadic.directive import DirectiveSequence, certify
from sadic.measures import (
    ProbeNotUnique,
    cone_at,
    cone_sweep,
    ergodicity_probe,
    l1_distance,
    letter_measure_enclosure,
    nesting_coefficients,
    parse_rational,
)
from sadic.quadratic import Quad
from sadic.words import Alphabet, Morphism


def test_parse_rational():
    assert parse_rational("1/3") == Fraction(1, 3)
    assert parse_rational("1e-6") == Fraction(1, 10**6)
    assert parse_rational("0.25") == Fraction(1, 4)
    assert parse_rational(Fraction(2, 7)) == Fraction(2, 7)
    with pytest.raises(ValueError):
        parse_rational("x")


def test_cone_columns_are_stochastic(fib):
    cone = cone_at(fib, 6)
    for col in cone.columns:
        assert sum(col) == 1
        assert all(v > 0 for v in col)
    assert cone.depth == 6
    box = cone.box()
    for (lo, hi), col in zip(box, zip(*cone.columns)):
        assert lo == min(col) and hi == max(col)


def test_cone_gate_rejects_non_unimodular():
    tm = families.thue_morse()
    with pytest.raises(ValueError):
        cone_at(tm, 4)


def test_cone_gate_rejects_non_primitive():
    ab = Alphabet("ab")
    reducible = Morphism({"a": "aa", "b": "ab"}, ab)
    ds = DirectiveSequence(ab, (), (reducible,))
    with pytest.raises(ValueError):
        cone_at(ds, 3)


def test_diameters_shrink_along_sweep(fib):
    cones = cone_sweep(fib, 12)
    diams = [c.diameter for c in cones]
    assert all(b <= a for a, b in zip(diams, diams[1:]))
    assert diams[-1] < Fraction(1, 100)


def test_nesting_coefficients_certify_inclusion(fib):
    for depth in range(1, 10):
        W = nesting_coefficients(fib, depth)
        for j in range(len(W)):
            assert sum(W[i][j] for i in range(len(W))) == 1
            assert all(W[i][j] >= 0 for i in range(len(W)))


def test_probe_unique_fibonacci(fib):
    report = ergodicity_probe(fib, 40, "1e-9")
    assert report.verdict == "unique"
    assert report.certified_depth is not None
    golden_inv = Quad(Fraction(-1, 2), Fraction(1, 2), 5)
    (lo_a, hi_a), (lo_b, hi_b) = report.enclosure
    assert lo_a <= golden_inv <= hi_a
    assert lo_b <= 1 - golden_inv <= hi_b


def test_probe_respects_cluster_count_bound():
    # cluster count <= d - 1 on every multiple verdict
    report = ergodicity_probe(families.sec65(), 40, "1/100")
    assert report.verdict == "multiple"
    assert 2 <= len(report.clusters) <= 2
    members = sorted(m for c in report.clusters for m in c.members)
    assert members == [0, 1, 2]
    assert report.cluster_gap > Fraction(1, 2)


def test_probe_inconclusive_when_eps_unreachable(fib):
    report = ergodicity_probe(fib, 4, "1e-30")
    assert report.verdict == "inconclusive"


def test_letter_measure_enclosure(fib):
    enc = letter_measure_enclosure(fib, 40, "1e-9")
    assert set(enc) == {"a", "b"}
    lo, hi = enc["a"]
    assert hi - lo < Fraction(1, 10**9)
    with pytest.raises(ProbeNotUnique):
        letter_measure_enclosure(families.sec65(), 40, "1/100")


def test_exact_measures_inside_final_cone(fib):
    mu = fib.meta["exact_measures"][0]
    box = cone_at(fib, 20).box()
    for value, (lo, hi) in zip(mu, box):
        assert lo <= value <= hi


def test_iet_exact_measures_inside_final_cone():
    ds = families.iet3_ex63()
    mu = ds.meta["exact_measures"][0]
    box = cone_at(ds, 20).box()
    for value, (lo, hi) in zip(mu, box):
        assert lo <= value <= hi
    assert mu[1] == mu[2]


def test_brun_random_probe_is_rigorous():
    # three spot seeds; the full twenty-seed sweep runs in acceptance
    for seed in (1000, 1007, 1019):
        ds = families.brun_random(seed)
        assert certify(ds).primitive
        report = ergodicity_probe(ds, 60, "1e-6")
        assert report.verdict == "unique"
        for depth in (1, 17, 40):
            W = nesting_coefficients(ds, depth)
            assert all(w >= 0 for row in W for w in row)


def test_l1_distance():
    assert l1_distance((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))) == 2
