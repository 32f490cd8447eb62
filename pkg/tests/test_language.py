import pytest

from sadic import families
from sadic.errors import Inconclusive
from sadic.language import (
    build_language,
    complexity,
    derived_step,
    extension_graph,
    fixed_point_prefix,
    free_basis_check,
    is_dendric,
    return_words,
    return_words_in_text,
    table_from_text,
)
from sadic.words import Alphabet, Morphism


def brute_factors(texts, n):
    out = set()
    for t in texts.values():
        for i in range(len(t) - n + 1):
            out.add(t[i : i + n])
    return out


def test_factors_match_deeper_brute_scan(fib):
    # independent scan at twice the depth the adaptive build settled on
    lang = build_language(fib, max_len=12)
    deep = fib.level_texts(2 * lang.generation_depth)
    for n in range(13):
        assert lang.factors(n) == brute_factors(deep, n)


def test_factors_match_deeper_brute_scan_tribonacci(trib):
    lang = build_language(trib, max_len=12)
    deep = trib.level_texts(2 * lang.generation_depth)
    for n in range(13):
        assert lang.factors(n) == brute_factors(deep, n)


def test_complexity_formulas(fib_lang, trib_lang):
    for n in range(101):
        assert complexity(fib_lang, n) == n + 1
        assert complexity(trib_lang, n) == 2 * n + 1


def test_table_bounds(fib_lang):
    with pytest.raises(ValueError):
        fib_lang.factors(103)
    with pytest.raises(ValueError):
        "a" * 103 in fib_lang
    assert "aba" in fib_lang
    assert "bb" not in fib_lang


def test_table_from_text():
    t = table_from_text(Alphabet("ab"), "abab", 2)
    assert t.factors(2) == frozenset({"ab", "ba"})
    with pytest.raises(ValueError):
        table_from_text(Alphabet("ab"), "abc", 2)
    with pytest.raises(ValueError):
        table_from_text(Alphabet("ab"), "", 0)


def test_extension_graph_edges(fib_lang):
    g = extension_graph(fib_lang, "")
    assert set(g.edges) == {("a", "a"), ("a", "b"), ("b", "a")}
    assert g.is_bispecial and g.is_tree()
    g = extension_graph(fib_lang, "a")
    assert set(g.edges) == {("a", "b"), ("b", "a"), ("b", "b")}
    assert g.is_tree()
    g = extension_graph(fib_lang, "b")
    assert set(g.edges) == {("a", "a")}
    assert not g.is_bispecial
    assert g.is_tree()


def test_extension_graph_rejects_unknown_word(fib_lang):
    with pytest.raises(ValueError):
        extension_graph(fib_lang, "bb")


def test_dendricity(fib_lang, trib_lang):
    assert is_dendric(fib_lang, 50).dendric
    assert is_dendric(trib_lang, 50).dendric


def test_non_dendric_witness():
    tm = families.thue_morse()
    lang = build_language(tm, max_len=12)
    verdict = is_dendric(lang, 10)
    assert not verdict.dendric
    assert verdict.witness is not None
    g = extension_graph(lang, verdict.witness)
    assert g.is_bispecial and not g.is_tree()


def test_return_words_against_text_oracle(fib):
    lang = build_language(fib, max_len=12)
    deep = fib.level_texts(2 * lang.generation_depth)
    text = max(deep.values(), key=len)
    for w in ["a", "b", "ab", "aba", "abaab"]:
        fast = return_words(fib, w)
        slow, hits = return_words_in_text(text, w)
        assert hits > len(slow)
        assert set(fast) == set(slow)


def test_return_word_counts(fib, trib, fib_lang, trib_lang):
    for ds, lang, k in [(fib, fib_lang, 2), (trib, trib_lang, 3)]:
        for n in (1, 2, 5):
            for w in lang.sorted_factors(n):
                assert len(return_words(ds, w)) == k


def test_return_words_concatenate_back(fib):
    # consecutive occurrence gaps of w tile the fixed point with the
    # computed return words
    from sadic.words import occurrence_positions

    x = fixed_point_prefix(fib, 4000)
    w = "ab"
    words = set(return_words(fib, w))
    positions = occurrence_positions(x, w)
    assert len(positions) > 100
    for i, j in zip(positions, positions[1:]):
        assert x[i:j] in words


def test_free_basis_check():
    ab = Alphabet("ab")
    ok = free_basis_check(["aba", "ab"], ab)
    assert ok.basis
    assert abs(ok.abelian_det) == 1
    bad = free_basis_check(["ab", "ba"], ab)
    assert not bad.basis
    square = free_basis_check(["a", "a"], ab)
    assert not square.basis


def test_free_basis_needs_full_rank():
    abc = Alphabet("abc")
    v = free_basis_check(["ab", "bc"], abc)
    assert not v.basis


def test_fixed_point_prefix(fib):
    x = fixed_point_prefix(fib, 200)
    sigma = fib.morphism_at(1)
    assert sigma(x)[:200] == x
    with pytest.raises(ValueError):
        fixed_point_prefix(families.thue_morse(), 10)


def test_derived_step_recovers_inner_structure(fib):
    lam = derived_step(fib, (1, 2))
    # theta2 = theta1 ∘ lam on the return word alphabets
    x = fixed_point_prefix(fib, 4000)
    r1, _ = return_words_in_text(x, x[:1])
    r2, _ = return_words_in_text(x, x[:2])
    theta1 = {a: w for a, w in zip(fib.alphabet.letters, r1)}
    for a, w in zip(fib.alphabet.letters, r2):
        assert "".join(theta1[c] for c in lam.image(a)) == w


def test_build_language_refuses_non_primitive():
    ab = Alphabet("ab")
    reducible = Morphism({"a": "aa", "b": "ab"}, ab)
    from sadic.directive import DirectiveSequence

    with pytest.raises(ValueError):
        build_language(DirectiveSequence(ab, (), (reducible,)), max_len=5)
