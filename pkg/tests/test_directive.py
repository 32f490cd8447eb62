import pytest

from sadic import families
from sadic.directive import (
    DirectiveSequence,
    aperiodicity_witness,
    certify,
    properize,
    telescope,
    telescope_matrix,
)
from sadic.errors import Inconclusive
from sadic.quadratic import Quad
from sadic.words import Alphabet, Morphism


def test_indexing_periodic(fib):
    m1 = fib.morphism_at(1)
    assert m1.image("a") == "ab"
    assert fib.morphism_at(7).image("a") == "ab"
    assert fib.cumulative_matrix(2).rows == ((2, 1), (1, 1))


def test_truncated_requires_consistent_horizon():
    ab = Alphabet("ab")
    sigma = Morphism({"a": "ab", "b": "a"}, ab)
    with pytest.raises(ValueError):
        DirectiveSequence(ab, (sigma,), (), horizon=5)
    ds = DirectiveSequence(ab, (sigma, sigma), (), horizon=2)
    assert not ds.periodic
    with pytest.raises(ValueError):
        ds.morphism_at(3)


def test_alphabet_needs_two_letters():
    a = Alphabet("a")
    ident = Morphism({"a": "a"}, a)
    with pytest.raises(ValueError):
        DirectiveSequence(a, (), (ident,))


def test_telescope_matches_matrix_product(trib):
    composed = telescope(trib, 1, 4)
    m = telescope_matrix(trib, 1, 4)
    assert composed.incidence_matrix() == m
    prod = trib.matrix_at(1) * trib.matrix_at(2) * trib.matrix_at(3)
    assert m == prod


def test_certificate_fibonacci(fib):
    cert = certify(fib)
    assert cert.primitive and cert.unimodular
    assert cert.left_proper_window == 1
    assert cert.properizable
    assert not cert.truncated


def test_certificate_thue_morse():
    cert = certify(families.thue_morse())
    assert cert.primitive
    assert not cert.unimodular
    # first letters never coincide, so no telescoping makes it left proper
    assert cert.left_proper_window is None
    assert not cert.properizable


def test_certificate_refutes_reducible():
    ab = Alphabet("ab")
    reducible = Morphism({"a": "aa", "b": "ab"}, ab)
    cert = certify(DirectiveSequence(ab, (), (reducible,)))
    assert not cert.primitive
    assert cert.obstruction is not None


def test_certificate_truncated_brun():
    ds = families.brun_random(1000)
    cert = certify(ds)
    assert cert.truncated
    assert cert.primitive and cert.unimodular
    s, e = cert.primitive_window
    assert 1 <= s < e <= ds.horizon + 1


def test_sec65_window_properness():
    cert = certify(families.sec65())
    assert cert.primitive and cert.unimodular
    # per-level properness fails, a five-step window restores it
    assert not cert.proper
    assert cert.left_proper_window is not None


def test_properize_yields_left_proper_levels():
    # properize needs every level left proper already; build one from
    # Arnoux-Rauzy morphisms which all start images with the fixed letter
    ds = families.arnoux_rauzy("abc")
    out = properize(ds)
    for n in range(1, 2 * len(out.period) + 1):
        assert out.morphism_at(n).is_left_proper()
    cert = certify(out)
    assert cert.primitive


def test_aperiodicity_witness(fib):
    verdict = aperiodicity_witness(fib, 40)
    assert verdict.kind == "aperiodic"

    # primitive generator of the two-periodic word (ab)^infinity
    ab = Alphabet("ab")
    doubler = Morphism({"a": "ab", "b": "ab"}, ab)
    periodic = DirectiveSequence(ab, (), (doubler,))
    verdict = aperiodicity_witness(periodic, 24)
    assert verdict.kind == "periodic"


def test_json_round_trip_periodic(fib):
    data = fib.to_json()
    back = DirectiveSequence.from_json(data)
    assert back.alphabet == fib.alphabet
    assert back.meta["name"] == "fibonacci"
    assert back.meta["exact_measures"] == fib.meta["exact_measures"]
    assert back.morphism_at(3).image("a") == "ab"
    assert isinstance(back.meta["exact_measures"][0][0], Quad)


def test_json_round_trip_generator():
    ds = families.sec65(horizon=12)
    data = ds.to_json()
    assert data["generator"]["a"] == {"kind": "geometric", "base": 2, "shift": 1}
    back = DirectiveSequence.from_json(data)
    assert back.horizon == 12
    assert back.matrix_at(3) == ds.matrix_at(3)


def test_json_round_trip_truncated():
    ds = families.brun("12,23", periodic=False)
    back = DirectiveSequence.from_json(ds.to_json())
    assert not back.periodic
    assert back.horizon == 2
    assert back.morphism_at(1).image("2") == "12"


def test_language_beyond_horizon_is_inconclusive():
    # primitive but truncated so short the factor sets cannot stabilize
    ab = Alphabet("ab")
    sigma = Morphism({"a": "ab", "b": "a"}, ab)
    ds = DirectiveSequence(ab, (sigma,) * 4, (), horizon=4)
    assert certify(ds).primitive
    from sadic.language import build_language

    with pytest.raises(Inconclusive):
        build_language(ds, max_len=30)
