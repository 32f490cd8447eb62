"""Factor languages, extension graphs, return words and derived morphisms.

The factor table is generated adaptively: level-1 images are iterated until
the set of longest collected factors is stable across successive depths and
every image is comfortably longer than the requested factor length.  For a
certified primitive sequence this captures the factor language exactly in
practice; the generation depth is recorded so oracles can re-scan deeper.
"""

from __future__ import annotations

from dataclasses import dataclass

from .directive import DirectiveSequence, certify
from .errors import Inconclusive
from .words import Alphabet, IntMatrix, Morphism, occurrence_positions


class LanguageTable:
    """Factors of a subshift up to a fixed length, with their source texts."""

    def __init__(
        self,
        alphabet: Alphabet,
        max_len: int,
        generation_depth: int,
        texts: dict[str, str],
    ):
        self.alphabet = alphabet
        self.max_len = max_len
        self.generation_depth = generation_depth
        self.texts = dict(texts)
        self._factors: dict[int, frozenset[str]] = {0: frozenset({""})}

    def factors(self, n: int) -> frozenset[str]:
        """All factors of length n (n <= max_len)."""
        if not 0 <= n <= self.max_len:
            raise ValueError(f"length {n} outside table range 0..{self.max_len}")
        if n not in self._factors:
            seen: set[str] = set()
            for text in self.texts.values():
                for i in range(len(text) - n + 1):
                    seen.add(text[i : i + n])
            self._factors[n] = frozenset(seen)
        return self._factors[n]

    def sorted_factors(self, n: int) -> tuple[str, ...]:
        return tuple(sorted(self.factors(n)))

    def complexity(self, n: int) -> int:
        return len(self.factors(n))

    def __contains__(self, w: object) -> bool:
        if not isinstance(w, str):
            return False
        if len(w) > self.max_len:
            raise ValueError(f"word longer than table range {self.max_len}")
        return w in self.factors(len(w))


def build_language(
    ds: DirectiveSequence,
    max_len: int,
    *,
    stable_rounds: int = 2,
    max_rounds: int = 64,
) -> LanguageTable:
    """Collect all factors of length <= max_len of the level-1 language."""
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    cert = certify(ds)
    if not cert.primitive:
        raise ValueError("language construction needs a certified primitive sequence")
    letters = ds.alphabet.letters
    if max_len == 0:
        return LanguageTable(ds.alphabet, 0, 1, {a: a for a in letters})

    depth = 1
    top: set[str] = set()
    stable = 0
    for _ in range(max_rounds):
        depth += 1
        try:
            texts = ds.level_texts(depth)
        except ValueError:
            raise Inconclusive(
                f"factor sets not stable within the declared horizon {ds.horizon}",
                max_len=max_len,
            )
        windows: set[str] = set()
        for text in texts.values():
            for i in range(len(text) - max_len + 1):
                windows.add(text[i : i + max_len])
        min_len = min(len(t) for t in texts.values())
        if windows and windows == top:
            stable += 1
        else:
            stable = 0
        top |= windows
        if stable >= stable_rounds and min_len > 2 * max_len:
            return LanguageTable(ds.alphabet, max_len, depth, texts)
    raise Inconclusive(
        f"factor sets not stable after {max_rounds} rounds", max_len=max_len
    )


def complexity(lang: LanguageTable, n: int) -> int:
    """Number of distinct factors of length n."""
    return lang.complexity(n)


def table_from_text(alphabet: Alphabet, text: str, max_len: int) -> LanguageTable:
    """Wrap one explicit text as a factor table.

    Completeness is the caller's responsibility: the table only knows the
    windows of this text, so the text must be long enough to exhibit every
    factor up to max_len (orbit codings, oracle scans).
    """
    if not text:
        raise ValueError("empty text")
    alphabet.check_word(text)
    if not 0 <= max_len <= len(text):
        raise ValueError("max_len must be between 0 and the text length")
    return LanguageTable(alphabet, max_len, 1, {text[0]: text})


@dataclass(frozen=True)
class ExtensionGraph:
    word: str
    left: frozenset[str]
    right: frozenset[str]
    edges: frozenset[tuple[str, str]]

    @property
    def is_bispecial(self) -> bool:
        return len(self.left) >= 2 and len(self.right) >= 2

    def is_tree(self) -> bool:
        """Connected and acyclic as a bipartite graph on left ⊎ right."""
        vertices = {("L", a) for a in self.left} | {("R", b) for b in self.right}
        if not vertices:
            return False
        adjacency: dict[tuple[str, str], list[tuple[str, str]]] = {
            v: [] for v in vertices
        }
        for a, b in self.edges:
            adjacency[("L", a)].append(("R", b))
            adjacency[("R", b)].append(("L", a))
        if len(self.edges) != len(vertices) - 1:
            return False
        seen = set()
        stack = [next(iter(vertices))]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(adjacency[v])
        return len(seen) == len(vertices)


def extension_graph(lang: LanguageTable, w: str) -> ExtensionGraph:
    """One-letter extensions of w: left/right vertices and biextension edges."""
    n = len(w)
    if n + 2 > lang.max_len:
        raise ValueError(
            f"need factors of length {n + 2}, table only goes to {lang.max_len}"
        )
    if w not in lang.factors(n):
        raise ValueError(f"word {w!r} is not in the language")
    ext = lang.factors(n + 1)
    both = lang.factors(n + 2)
    left = frozenset(a for a in lang.alphabet.letters if a + w in ext)
    right = frozenset(b for b in lang.alphabet.letters if w + b in ext)
    edges = frozenset(
        (a, b) for a in left for b in right if a + w + b in both
    )
    return ExtensionGraph(w, left, right, edges)


@dataclass(frozen=True)
class DendricVerdict:
    dendric: bool
    checked_up_to: int
    witness: str | None = None  # shortest non-tree bispecial factor


def is_dendric(lang: LanguageTable, up_to: int) -> DendricVerdict:
    """Check that every extension graph of a factor of length <= up_to is a tree.

    Non-bispecial factors have star-shaped graphs (factor closure plus
    biextendability), so only bispecial ones are tested explicitly.
    """
    if up_to + 2 > lang.max_len:
        raise ValueError(
            f"need factors of length {up_to + 2}, table only goes to {lang.max_len}"
        )
    for n in range(up_to + 1):
        for w in lang.sorted_factors(n):
            graph = extension_graph(lang, w)
            if graph.is_bispecial and not graph.is_tree():
                return DendricVerdict(False, up_to, witness=w)
    return DendricVerdict(True, up_to)


# -- return words -------------------------------------------------------


def return_words_in_text(text: str, w: str) -> tuple[list[str], int]:
    """First-occurrence-ordered gap words between consecutive w hits."""
    positions = occurrence_positions(text, w)
    out: list[str] = []
    seen: set[str] = set()
    for i in range(len(positions) - 1):
        gap = text[positions[i] : positions[i + 1]]
        if gap not in seen:
            seen.add(gap)
            out.append(gap)
    return out, len(positions)


def return_words(
    ds: DirectiveSequence,
    w: str,
    *,
    stability_rounds: int = 2,
    max_rounds: int = 48,
) -> tuple[str, ...]:
    """Words v with vw in the language, w a prefix of vw occurring exactly twice.

    Scanned from level-1 images at increasing depth; the result is accepted
    once it is stable for `stability_rounds` consecutive depths and the
    scanned text holds at least 2 * (set size) * len(w) occurrences of w.
    """
    if not w:
        raise ValueError("return words need a non-empty reference word")
    cert = certify(ds)
    if not cert.primitive:
        raise ValueError("return word scan needs a certified primitive sequence")
    found: list[str] = []
    seen: set[str] = set()
    stable = 0
    ever_hit = False
    depth = 1
    for _ in range(max_rounds):
        depth += 1
        try:
            texts = ds.level_texts(depth)
        except ValueError:
            break
        occurrences = 0
        grew = False
        for a in ds.alphabet.letters:
            gaps, hits = return_words_in_text(texts[a], w)
            occurrences += hits
            for gap in gaps:
                if gap not in seen:
                    seen.add(gap)
                    found.append(gap)
                    grew = True
        if occurrences:
            ever_hit = True
        stable = 0 if grew else stable + 1
        if (
            found
            and stable >= stability_rounds
            and occurrences >= 2 * len(found) * len(w)
        ):
            return tuple(found)
    if not ever_hit:
        raise ValueError(f"word {w!r} never occurred in the generated language")
    raise Inconclusive(
        f"return word set for {w!r} did not stabilize",
        collected=tuple(found),
    )


# -- free group reduction ----------------------------------------------

# group words are tuples of (letter, +1|-1), freely reduced

GWord = tuple[tuple[str, int], ...]


def _g_reduce(seq) -> GWord:
    out: list[tuple[str, int]] = []
    for item in seq:
        if out and out[-1][0] == item[0] and out[-1][1] == -item[1]:
            out.pop()
        else:
            out.append(item)
    return tuple(out)


def _g_inv(u: GWord) -> GWord:
    return tuple((a, -s) for a, s in reversed(u))


def _g_mul(u: GWord, v: GWord) -> GWord:
    return _g_reduce(u + v)


@dataclass(frozen=True)
class BasisVerdict:
    basis: bool
    reduced: tuple[GWord, ...]
    abelian_det: int | None
    note: str


def free_basis_check(words, alphabet: Alphabet) -> BasisVerdict:
    """Nielsen-reduce a set of words and test whether it bases the free group.

    The reduction replaces an element by a strictly shorter product with
    another element (or its inverse); total length is the decreasing
    measure, ties broken lexicographically for determinism.  The input
    generates the full free group exactly when the reduced set is the
    alphabet itself, one single letter per element (up to inversion).
    """
    elems: list[GWord] = []
    for w in words:
        alphabet.check_word(w)
        g = tuple((c, 1) for c in w)
        if g and g not in elems:
            elems.append(g)

    def total() -> int:
        return sum(len(e) for e in elems)

    while True:
        elems = [e for e in elems if e]
        best = None
        for j, ej in enumerate(elems):
            for i, ei in enumerate(elems):
                if i == j:
                    continue
                for other in (ei, _g_inv(ei)):
                    for cand in (_g_mul(other, ej), _g_mul(ej, other)):
                        if len(cand) < len(ej):
                            key = (total() - len(ej) + len(cand), cand, j)
                            if best is None or key < best[0]:
                                best = (key, j, cand)
        if best is None:
            break
        _, j, cand = best
        if cand and cand not in (e for k, e in enumerate(elems) if k != j):
            elems[j] = cand
        else:
            del elems[j]

    single = set()
    ok = True
    for e in elems:
        if len(e) == 1:
            single.add(e[0][0])
        else:
            ok = False
    d = len(alphabet)
    basis = ok and len(elems) == d and single == set(alphabet.letters)

    abelian_det = None
    originals = [g for g in dict.fromkeys(tuple((c, 1) for c in w) for w in words) if g]
    if len(originals) == d:
        rows = []
        for b in alphabet.letters:
            rows.append(
                [sum(s for a, s in g if a == b) for g in originals]
            )
        abelian_det = IntMatrix(rows).det()
    note = (
        "reduced to single letters"
        if basis
        else f"reduced set has {len(elems)} elements, "
        f"{sum(1 for e in elems if len(e) > 1)} of length > 1"
    )
    return BasisVerdict(basis, tuple(elems), abelian_det, note)


# -- derived morphisms --------------------------------------------------


def fixed_point_prefix(ds: DirectiveSequence, length: int) -> str:
    """Prefix of the one-sided limit word shared by all level-1 images.

    Needs a left-proper window W: every image at depth N then starts with
    the full level-(N-W) image of one letter, so prefixes stabilize.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    cert = certify(ds)
    if cert.left_proper_window is None:
        raise ValueError("no left-proper window: no canonical one-sided fixed point")
    w = cert.left_proper_window
    # all images at depth N share a prefix of length min|tau_[1,N-w)(.)|,
    # which is the minimal column sum of the cumulative matrix at N - w - 1
    depth = w + 2
    while min(ds.cumulative_matrix(depth - w - 1).column_sums()) < length:
        depth += 1
        if not ds.periodic and depth > ds.horizon + 1:
            raise Inconclusive(
                f"fixed point prefix of length {length} needs depth beyond horizon"
            )
    text = ds.level_texts(depth)[ds.alphabet.letters[0]]
    return text[:length]


def derived_step(
    ds: DirectiveSequence,
    scales: tuple[int, int],
    *,
    max_text: int = 1 << 22,
) -> "Morphism":
    """Decompose return words at the larger scale over the smaller one.

    For prefix lengths n1 < n2 of the canonical fixed point x, the return
    words of x[:n2] concatenate uniquely from return words of x[:n1]; the
    resulting endomorphism lam satisfies theta2 = theta1 ∘ lam, where
    theta_i sends the k-th alphabet letter to the k-th return word in
    first-occurrence order.
    """
    n1, n2 = scales
    if not 1 <= n1 < n2:
        raise ValueError("scales must satisfy 1 <= n1 < n2")
    d = len(ds.alphabet)
    size = max(64, 16 * n2 * d)
    v1 = v2 = None
    while size <= max_text:
        x = fixed_point_prefix(ds, size)
        r1, _ = return_words_in_text(x, x[:n1])
        r2, _ = return_words_in_text(x, x[:n2])
        if (v1, v2) == (r1, r2) and len(r2) >= 2:
            break
        v1, v2 = r1, r2
        size *= 2
    else:
        raise Inconclusive("return word sets did not stabilize on the fixed point")
    if len(v1) != d or len(v2) != d:
        raise ValueError(
            f"not dendric at this scale: {len(v1)} return words at {n1}, "
            f"{len(v2)} at {n2} (alphabet size {d})"
        )

    u1, u2 = x[:n1], x[:n2]
    p1 = occurrence_positions(x, u1)
    p2 = occurrence_positions(x, u2)
    letter_of_v1 = {w: ds.alphabet.letters[i] for i, w in enumerate(v1)}
    v2_set = set(v2)
    decomposition: dict[str, str] = {}
    p1_set = sorted(p1)
    idx_of_p1 = {p: i for i, p in enumerate(p1_set)}
    for j in range(len(p2) - 1):
        start, stop = p2[j], p2[j + 1]
        gap = x[start:stop]
        if gap in decomposition or gap not in v2_set:
            continue
        if start not in idx_of_p1:
            raise RuntimeError("scale-n2 occurrence is not a scale-n1 occurrence")
        k = idx_of_p1[start]
        letters = []
        while p1_set[k] < stop:
            piece = x[p1_set[k] : p1_set[k + 1]]
            letters.append(letter_of_v1[piece])
            k += 1
        decomposition[gap] = "".join(letters)
        if len(decomposition) == d:
            break
    if len(decomposition) != d:
        raise Inconclusive("not every larger-scale return word was decomposed")
    images = {
        ds.alphabet.letters[i]: decomposition[w] for i, w in enumerate(v2)
    }
    lam = Morphism(images, source=ds.alphabet, target=ds.alphabet)
    # defining identity: mapping letters through lam then theta1 must equal theta2
    theta1 = {ds.alphabet.letters[i]: w for i, w in enumerate(v1)}
    for i, w in enumerate(v2):
        expanded = "".join(theta1[c] for c in lam.image(ds.alphabet.letters[i]))
        if expanded != w:
            raise RuntimeError("derived morphism failed its defining identity")
    return lam
