"""Built-in directive sequences for the classic example systems.

Each constructor attaches a name and, where the letter frequencies live
in the rationals or a quadratic field, the exact measure vector.  The
three-letter two-measure family keeps its images in run-length form; its
deep images are astronomically long and are never materialized.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .directive import DirectiveSequence
from .quadratic import Quad
from .words import Alphabet, Morphism


def fibonacci() -> DirectiveSequence:
    ab = Alphabet("ab")
    sigma = Morphism({"a": "ab", "b": "a"}, ab)
    golden_inv = Quad(Fraction(-1, 2), Fraction(1, 2), 5)  # (sqrt5-1)/2
    golden_inv_sq = Quad(Fraction(3, 2), Fraction(-1, 2), 5)  # (3-sqrt5)/2
    return DirectiveSequence(
        ab,
        (),
        (sigma,),
        meta={
            "name": "fibonacci",
            "exact_measures": ((golden_inv, golden_inv_sq),),
        },
    )


def tribonacci() -> DirectiveSequence:
    abc = Alphabet("abc")
    sigma = Morphism({"a": "ab", "b": "ac", "c": "a"}, abc)
    return DirectiveSequence(abc, (), (sigma,), meta={"name": "tribonacci"})


def thue_morse() -> DirectiveSequence:
    ab = Alphabet("ab")
    sigma = Morphism({"a": "ab", "b": "ba"}, ab)
    return DirectiveSequence(
        ab,
        (),
        (sigma,),
        meta={
            "name": "thue_morse",
            "exact_measures": ((Fraction(1, 2), Fraction(1, 2)),),
        },
    )


def thue_morse_conjugate() -> DirectiveSequence:
    abcd = Alphabet("abcd")
    tau = Morphism({"a": "bb", "b": "bd", "c": "ca", "d": "cb"}, abcd)
    return DirectiveSequence(
        abcd,
        (),
        (tau,),
        meta={
            "name": "thue_morse_conjugate",
            "exact_measures": (
                (Fraction(1, 9), Fraction(4, 9), Fraction(2, 9), Fraction(2, 9)),
            ),
        },
    )


# -- Arnoux-Rauzy -------------------------------------------------------


def ar_morphism(alphabet: Alphabet, a: str) -> Morphism:
    """a stays fixed, every other letter b maps to ab."""
    if a not in alphabet:
        raise ValueError(f"letter {a!r} not in alphabet")
    images = {b: (a if b == a else a + b) for b in alphabet.letters}
    return Morphism(images, alphabet)


def arnoux_rauzy(word: str, alphabet=None) -> DirectiveSequence:
    """Periodic directive sequence of one-letter morphisms, period = word.

    Every alphabet letter must occur in the word: each morphism then
    recurs, which is exactly primitivity for this family.
    """
    if not word:
        raise ValueError("empty directive word")
    if alphabet is None:
        alphabet = Alphabet(sorted(set(word)))
    elif not isinstance(alphabet, Alphabet):
        alphabet = Alphabet(alphabet)
    if set(word) != set(alphabet.letters):
        raise ValueError(
            "the periodic directive word must use every letter of the "
            "alphabet, otherwise some morphism never recurs"
        )
    period = tuple(ar_morphism(alphabet, a) for a in word)
    return DirectiveSequence(
        alphabet, (), period, meta={"name": f"arnoux_rauzy({word})"}
    )


# -- Brun ---------------------------------------------------------------


def brun_morphism(alphabet: Alphabet, a: str, b: str) -> Morphism:
    """b maps to ab, all other letters stay fixed."""
    if a == b:
        raise ValueError("the two letters must differ")
    for x in (a, b):
        if x not in alphabet:
            raise ValueError(f"letter {x!r} not in alphabet")
    images = {c: c for c in alphabet.letters}
    images[b] = a + b
    return Morphism(images, alphabet)


def _parse_pairs(word: str) -> list[tuple[str, str]]:
    pairs = []
    for chunk in word.split(","):
        chunk = chunk.strip()
        if len(chunk) != 2:
            raise ValueError(f"pair {chunk!r} is not two letters")
        if chunk[0] == chunk[1]:
            raise ValueError(f"pair {chunk!r} repeats a letter")
        pairs.append((chunk[0], chunk[1]))
    return pairs


def _check_admissible(pairs, cyclic: bool) -> None:
    # consecutive steps must repeat the pair exactly or chain through the
    # second letter: after (a,b) comes (a,b) again or some (b,c)
    links = list(zip(pairs, pairs[1:]))
    if cyclic and len(pairs) > 1:
        links.append((pairs[-1], pairs[0]))
    for (a1, b1), (a2, b2) in links:
        if (a2, b2) == (a1, b1) or a2 == b1:
            continue
        raise ValueError(
            f"inadmissible consecutive pairs {a1}{b1},{a2}{b2}: the next "
            f"pair must equal {a1}{b1} or start with {b1}"
        )


def brun(word: str, alphabet=None, periodic: bool = True) -> DirectiveSequence:
    """Brun sequence from a comma-separated word of ordered letter pairs.

    Periodic input is validated cyclically and must use every letter as a
    first coordinate (that is primitivity for this family); non-periodic
    input becomes a truncated sequence checked on consecutive pairs only.
    """
    pairs = _parse_pairs(word)
    if alphabet is None:
        alphabet = Alphabet(sorted({c for p in pairs for c in p}))
    elif not isinstance(alphabet, Alphabet):
        alphabet = Alphabet(alphabet)
    _check_admissible(pairs, cyclic=periodic)
    if periodic:
        firsts = {a for a, _ in pairs}
        missing = set(alphabet.letters) - firsts
        if missing:
            raise ValueError(
                f"letters {sorted(missing)} never occur as a first "
                "coordinate, so the periodic sequence is not primitive"
            )
    morphisms = tuple(brun_morphism(alphabet, a, b) for a, b in pairs)
    name = f"brun({word})"
    if periodic:
        return DirectiveSequence(alphabet, (), morphisms, meta={"name": name})
    return DirectiveSequence(
        alphabet,
        morphisms,
        (),
        horizon=len(morphisms),
        meta={"name": name + " truncated"},
    )


def brun_random(seed: int, length: int = 60, letters: str = "123") -> DirectiveSequence:
    """Seeded admissible random Brun run, truncated at the given length.

    Each step either repeats the previous pair or chains to a pair
    starting with its second letter, so admissibility holds by
    construction.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    rng = random.Random(seed)
    pool = list(letters)
    a = rng.choice(pool)
    b = rng.choice([c for c in pool if c != a])
    pairs = [(a, b)]
    while len(pairs) < length:
        a, b = pairs[-1]
        if rng.random() < 0.5:
            pairs.append((a, b))
        else:
            pairs.append((b, rng.choice([c for c in pool if c != b])))
    word = ",".join(a + b for a, b in pairs)
    ds = brun(word, alphabet=letters, periodic=False)
    ds.meta["name"] = f"brun_random(seed={seed}, length={length})"
    return ds


# -- three-interval exchange with equal-measure letters -----------------

# One-sided natural coding of the exchange of [0, 1-2u), [1-2u, 1-u),
# [1-u, 1) with u = (3-sqrt5)/2, started at 0.  The map is the rotation
# by 2u read through the three-interval cut.

_U = Quad(Fraction(3, 2), Fraction(-1, 2), 5)  # (3-sqrt5)/2
_ROT = Quad(3, -1, 5)  # 2u
_CUT1 = Quad(-2, 1, 5)  # 1-2u = sqrt5-2
_CUT2 = Quad(Fraction(-1, 2), Fraction(1, 2), 5)  # 1-u = (sqrt5-1)/2


def iet3_coding_ex63(length: int) -> str:
    """Exact orbit coding; every comparison is a surd sign computation."""
    if length < 1:
        raise ValueError("length must be >= 1")
    zero = Quad(0, 0, 5)
    x = zero
    out = []
    for step in range(length):
        if x < _CUT1:
            out.append("1")
        elif x < _CUT2:
            out.append("2")
        else:
            out.append("3")
        x = (x + _ROT).mod1()
        if x == zero or x == _CUT1 or x == _CUT2:
            raise RuntimeError(
                f"orbit hit a cut point at step {step}; the rotation "
                "number would have to be rational"
            )
    return "".join(out)


def iet3_ex63() -> DirectiveSequence:
    """Eventually periodic representation of the coding subshift.

    Obtained by iterating the return-word derivation on the exact orbit
    coding until the induced morphisms cycle; the period product has
    Perron eigenvector (g, g, 1) with g the golden ratio, which pushes
    forward to letter measures (sqrt5-2, u, u) exactly.
    """
    a123 = Alphabet("123")
    lam1 = Morphism({"1": "1322", "2": "1332", "3": "13322"}, a123)
    lam2 = Morphism({"1": "1", "2": "1223", "3": "123"}, a123)
    lam3 = Morphism({"1": "122", "2": "13", "3": "1222"}, a123)
    lam4 = Morphism({"1": "122", "2": "1223232322", "3": "12232322"}, a123)
    return DirectiveSequence(
        a123,
        (lam1, lam2),
        (lam3, lam4),
        meta={
            "name": "iet3_ex63",
            "exact_measures": ((_CUT1, _U, _U),),
        },
    )


# -- three-letter family with two ergodic measures ----------------------


def _sec65_parameter(n: int, base: int, shift: int) -> int:
    return base ** (n + shift)


def sec65(horizon: int = 40, base: int = 2, shift: int = 1) -> DirectiveSequence:
    """Alternating morphisms with rapidly growing run counts.

    The n-th morphism sends 1 to a block of a_n copies of 2 and one 3
    (3 before the block at odd n, after it at even n), 2 to 1 and 3 to 2,
    with a_n = base**(n+shift).  The reciprocals of a_n must sum below 1,
    which the default geometric choice satisfies.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if base < 2 or shift < 0:
        raise ValueError("need base >= 2 and shift >= 0")
    if base == 2 and shift == 0:
        raise ValueError("reciprocals of the parameters must sum below 1")
    a123 = Alphabet("123")
    morphisms = []
    for n in range(1, horizon + 1):
        a_n = _sec65_parameter(n, base, shift)
        if n % 2 == 0:
            img1 = (("2", a_n), ("3", 1))
        else:
            img1 = (("3", 1), ("2", a_n))
        morphisms.append(Morphism({"1": img1, "2": "1", "3": "2"}, a123))
    return DirectiveSequence(
        a123,
        morphisms,
        (),
        horizon=horizon,
        meta={
            "name": "sec65",
            "generator": {
                "name": "sec65",
                "a": {"kind": "geometric", "base": base, "shift": shift},
                "horizon": horizon,
            },
        },
    )


def sec65_parameter(n: int, base: int = 2, shift: int = 1) -> int:
    """The run count a_n used by the n-th morphism."""
    return _sec65_parameter(n, base, shift)


# -- dispatch -----------------------------------------------------------


@dataclass(frozen=True)
class FamilySpec:
    name: str
    word: str | None = None
    horizon: int | None = None
    base: int = 2
    shift: int = 1
    periodic: bool = True
    alphabet: str | None = None


_SIMPLE = {
    "fibonacci": fibonacci,
    "tribonacci": tribonacci,
    "thue_morse": thue_morse,
    "thue_morse_conjugate": thue_morse_conjugate,
    "iet3_ex63": iet3_ex63,
}


def make(spec: FamilySpec) -> DirectiveSequence:
    if spec.name in _SIMPLE:
        return _SIMPLE[spec.name]()
    if spec.name == "arnoux_rauzy":
        if not spec.word:
            raise ValueError("arnoux_rauzy needs a directive word")
        return arnoux_rauzy(spec.word, spec.alphabet)
    if spec.name == "brun":
        if not spec.word:
            raise ValueError("brun needs a pair word")
        return brun(spec.word, spec.alphabet, periodic=spec.periodic)
    if spec.name == "sec65":
        return sec65(spec.horizon or 40, spec.base, spec.shift)
    raise ValueError(f"unknown family {spec.name!r}")


def builtin(name: str) -> DirectiveSequence:
    """Resolve a command-line family token like brun:12,23,31."""
    base, _, arg = name.partition(":")
    if base in _SIMPLE:
        if arg:
            raise ValueError(f"family {base!r} takes no parameter")
        return _SIMPLE[base]()
    if base == "arnoux_rauzy":
        return arnoux_rauzy(arg)
    if base == "brun":
        return brun(arg)
    if base == "sec65":
        return sec65(int(arg)) if arg else sec65()
    raise ValueError(f"unknown builtin {name!r}")


def from_generator_json(data: dict) -> DirectiveSequence:
    gen = data["generator"]
    if gen.get("name") != "sec65":
        raise ValueError(f"unknown generator {gen.get('name')!r}")
    a = gen.get("a", {})
    if a.get("kind") != "geometric":
        raise ValueError("only geometric parameter growth is supported")
    return sec65(
        int(gen.get("horizon", 40)), int(a.get("base", 2)), int(a.get("shift", 1))
    )
