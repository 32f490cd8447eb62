from fractions import Fraction

import pytest

from sadic import families
from sadic.directive import DirectiveSequence, certify
from sadic.language import build_language, table_from_text
from sadic.quadratic import Quad, sqrt5
from sadic.words import Alphabet


def test_simple_families_certify():
    for name in ["fibonacci", "tribonacci", "iet3_ex63"]:
        cert = certify(families.builtin(name))
        assert cert.primitive and cert.unimodular and cert.properizable
    for name in ["thue_morse", "thue_morse_conjugate"]:
        cert = certify(families.builtin(name))
        assert cert.primitive and not cert.unimodular


def test_attached_measures_sum_to_one():
    for name in ["fibonacci", "thue_morse", "thue_morse_conjugate", "iet3_ex63"]:
        ds = families.builtin(name)
        for vec in ds.meta["exact_measures"]:
            total = sum(vec[1:], vec[0])
            assert total == 1


def test_thue_morse_conjugate_measure_is_perron():
    ds = families.thue_morse_conjugate()
    m = ds.matrix_at(1)
    mu = ds.meta["exact_measures"][0]
    # stationary under M / 2: the image of mu is 2 mu
    image = tuple(
        sum(Fraction(m[i, j]) * mu[j] for j in range(4)) for i in range(4)
    )
    assert image == tuple(2 * v for v in mu)


def test_arnoux_rauzy_validation():
    ds = families.arnoux_rauzy("abc")
    assert certify(ds).primitive
    assert ds.morphism_at(1).image("b") == "ab"
    assert ds.morphism_at(1).image("a") == "a"
    with pytest.raises(ValueError):
        families.arnoux_rauzy("ab", alphabet="abc")
    with pytest.raises(ValueError):
        families.arnoux_rauzy("")


def test_brun_admissibility():
    ds = families.brun("12,23,31")
    assert certify(ds).primitive
    with pytest.raises(ValueError) as err:
        families.brun("12,12,23")
    assert "inadmissible" in str(err.value)
    with pytest.raises(ValueError):
        families.brun("12,13")
    with pytest.raises(ValueError):
        families.brun("11")
    with pytest.raises(ValueError):
        families.brun("123")


def test_brun_periodic_needs_every_first_letter():
    with pytest.raises(ValueError) as err:
        families.brun("12,21", alphabet="123")
    assert "first" in str(err.value)
    # as a truncated run the same word is fine
    ds = families.brun("12,21", alphabet="123", periodic=False)
    assert not ds.periodic


def test_brun_morphism_shape():
    ds = families.brun("12,23,31")
    m = ds.morphism_at(1)
    assert m.image("2") == "12"
    assert m.image("1") == "1"
    assert m.incidence_matrix().det() in (-1, 1)


def test_brun_random_is_reproducible():
    a = families.brun_random(1003)
    b = families.brun_random(1003)
    assert a.horizon == b.horizon == 60
    for n in range(1, 61):
        assert a.morphism_at(n).image("1") == b.morphism_at(n).image("1")
        assert a.morphism_at(n).image("2") == b.morphism_at(n).image("2")
    c = families.brun_random(1004)
    assert any(
        a.morphism_at(n).incidence_matrix() != c.morphism_at(n).incidence_matrix()
        for n in range(1, 61)
    )


def test_iet_coding_is_exact():
    text = families.iet3_coding_ex63(2000)
    assert set(text) <= {"1", "2", "3"}
    # letter frequencies approach (sqrt5-2, u, u)
    mu1 = float(sqrt5()) - 2
    assert abs(text.count("1") / 2000 - mu1) < 0.01


def test_iet_representation_matches_coding():
    ds = families.iet3_ex63()
    lang = build_language(ds, max_len=10)
    text = families.iet3_coding_ex63(30000)
    oracle = table_from_text(Alphabet("123"), text, 10)
    for n in range(1, 11):
        assert lang.factors(n) == oracle.factors(n)


def test_iet_complexity_two_n_plus_one():
    lang = build_language(families.iet3_ex63(), max_len=40)
    for n in range(41):
        assert lang.complexity(n) == 2 * n + 1


def test_sec65_matrices_and_recurrence():
    ds = families.sec65(horizon=12)
    for n in range(1, 13):
        a_n = families.sec65_parameter(n)
        assert ds.matrix_at(n).rows == ((0, 1, 0), (a_n, 0, 1), (1, 0, 0))
        assert ds.matrix_at(n).det() == 1
    cols = {0: (1, 0, 0), -1: (0, 1, 0), -2: (0, 0, 1)}
    for n in range(1, 13):
        cols[n] = ds.cumulative_matrix(n).col(0)
        a_n = families.sec65_parameter(n)
        assert cols[n] == tuple(
            a_n * x + y for x, y in zip(cols[n - 2], cols[n - 3])
        )


def test_sec65_image_shapes_alternate():
    ds = families.sec65(horizon=4)
    assert ds.morphism_at(1).image("1") == "3" + "2" * 4
    assert ds.morphism_at(2).image("1") == "2" * 8 + "3"
    assert ds.morphism_at(1).image("2") == "1"
    assert ds.morphism_at(1).image("3") == "2"


def test_sec65_parameter_validation():
    with pytest.raises(ValueError):
        families.sec65(horizon=0)
    with pytest.raises(ValueError):
        families.sec65(base=1)
    with pytest.raises(ValueError):
        families.sec65(base=2, shift=0)


def test_family_spec_dispatch():
    ds = families.make(families.FamilySpec(name="brun", word="12,23,31"))
    assert ds.meta["name"] == "brun(12,23,31)"
    ds = families.make(families.FamilySpec(name="sec65", horizon=8))
    assert ds.horizon == 8
    with pytest.raises(ValueError):
        families.make(families.FamilySpec(name="nope"))
    with pytest.raises(ValueError):
        families.make(families.FamilySpec(name="arnoux_rauzy"))


def test_builtin_tokens():
    assert families.builtin("fibonacci").meta["name"] == "fibonacci"
    assert families.builtin("arnoux_rauzy:abc").meta["name"] == "arnoux_rauzy(abc)"
    assert families.builtin("sec65:12").horizon == 12
    with pytest.raises(ValueError):
        families.builtin("fibonacci:x")
    with pytest.raises(ValueError):
        families.builtin("unknown")


def test_generator_json_round_trip():
    ds = families.sec65(horizon=10, base=3, shift=2)
    back = DirectiveSequence.from_json(ds.to_json())
    assert back.horizon == 10
    assert back.matrix_at(1) == ds.matrix_at(1)
    with pytest.raises(ValueError):
        families.from_generator_json({"generator": {"name": "other"}})
