"""Alphabets, words, free monoid morphisms and exact incidence matrices.

Words are plain Python strings over single-codepoint letters; an Alphabet
fixes the letter order used by every vector and matrix in the package.
Morphism images are kept run-length encoded internally so that images with
huge repeated blocks (millions of copies of one letter) stay representable;
they are only expanded to real strings on demand, behind a size guard.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import groupby
from typing import Iterable, Iterator, Mapping

# Refuse to materialize any single word longer than this.
MATERIALIZE_CAP = 50_000_000
# In compositions, a multi-run image is repeated at most this many times.
_REPEAT_CAP = 65_536

Runs = tuple[tuple[str, int], ...]


class Alphabet:
    """Ordered collection of distinct single-codepoint letters."""

    __slots__ = ("letters", "_index")

    def __init__(self, letters: Iterable[str]):
        letters = tuple(letters)
        if not letters:
            raise ValueError("alphabet needs at least one letter")
        for a in letters:
            if not isinstance(a, str) or len(a) != 1:
                raise ValueError(f"letters must be single codepoints, got {a!r}")
        if len(set(letters)) != len(letters):
            raise ValueError(f"duplicate letters in alphabet {letters!r}")
        self.letters = letters
        self._index = {a: i for i, a in enumerate(letters)}

    def index(self, a: str) -> int:
        try:
            return self._index[a]
        except KeyError:
            raise ValueError(f"letter {a!r} not in alphabet {self.letters!r}") from None

    def __contains__(self, a: object) -> bool:
        return a in self._index

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[str]:
        return iter(self.letters)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Alphabet) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __repr__(self) -> str:
        return f"Alphabet({''.join(self.letters)!r})"

    def check_word(self, w: str) -> str:
        for c in w:
            if c not in self._index:
                raise ValueError(f"letter {c!r} not in alphabet {self.letters!r}")
        return w


def count_occurrences(w: str, u: str) -> int:
    """Number of possibly overlapping occurrences of u in w."""
    if not u:
        raise ValueError("occurrence pattern must be non-empty")
    n = 0
    start = 0
    while True:
        hit = w.find(u, start)
        if hit < 0:
            return n
        n += 1
        start = hit + 1


def occurrence_positions(w: str, u: str) -> list[int]:
    """Start indices of all (possibly overlapping) occurrences of u in w."""
    if not u:
        raise ValueError("occurrence pattern must be non-empty")
    out = []
    start = 0
    while True:
        hit = w.find(u, start)
        if hit < 0:
            return out
        out.append(hit)
        start = hit + 1


def abelianization(alphabet: Alphabet, w: str) -> tuple[int, ...]:
    """Letter-count vector of w in alphabet order."""
    counts = [0] * len(alphabet)
    for c in w:
        counts[alphabet.index(c)] += 1
    return tuple(counts)


class IntMatrix:
    """Dense matrix over arbitrary-precision integers."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable[int]]):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and column")
        if len({len(r) for r in rows}) != 1:
            raise ValueError("ragged rows")
        self.rows = rows

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IntMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return f"IntMatrix({[list(r) for r in self.rows]!r})"

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("matrix shape mismatch")
        cols = other.transpose().rows
        return IntMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in self.rows]
        )

    def matvec(self, v: Iterable[int]) -> tuple[int, ...]:
        v = tuple(v)
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.rows)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(list(zip(*self.rows)))

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def column_sums(self) -> tuple[int, ...]:
        return tuple(sum(r[j] for r in self.rows) for j in range(self.ncols))

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for r in self.rows for x in r)

    def is_positive(self) -> bool:
        return all(x > 0 for r in self.rows for x in r)

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        m = [list(r) for r in self.rows]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[-1][-1]


@dataclass(frozen=True)
class Properness:
    """Common first/last letters of a morphism's images, when they exist."""

    left: str | None
    right: str | None

    @property
    def is_left_proper(self) -> bool:
        return self.left is not None

    @property
    def is_right_proper(self) -> bool:
        return self.right is not None

    @property
    def is_proper(self) -> bool:
        return self.left is not None and self.right is not None


def _runs_from_word(w: str) -> Runs:
    return tuple((c, len(list(g))) for c, g in groupby(w))


def _append_run(out: list[tuple[str, int]], run: tuple[str, int]) -> None:
    if out and out[-1][0] == run[0]:
        out[-1] = (run[0], out[-1][1] + run[1])
    else:
        out.append(run)


def _runs_length(runs: Runs) -> int:
    return sum(c for _, c in runs)


def _word_from_runs(runs: Runs) -> str:
    total = _runs_length(runs)
    if total > MATERIALIZE_CAP:
        raise ValueError(f"refusing to materialize a word of length {total}")
    return "".join(a * c for a, c in runs)


class Morphism:
    """Non-erasing morphism between free monoids, determined by letter images."""

    __slots__ = ("source", "target", "_runs")

    def __init__(
        self,
        images: Mapping[str, str | Runs],
        source: Alphabet | None = None,
        target: Alphabet | None = None,
    ):
        if source is None:
            source = Alphabet(images.keys())
        self.source = source
        runs: dict[str, Runs] = {}
        for a in source.letters:
            if a not in images:
                raise ValueError(f"no image given for letter {a!r}")
            img = images[a]
            r = _runs_from_word(img) if isinstance(img, str) else tuple(img)
            if _runs_length(r) == 0:
                raise ValueError(f"morphism must be non-erasing, image of {a!r} is empty")
            runs[a] = r
        if len(images) != len(source):
            raise ValueError("images given for letters outside the source alphabet")
        if target is None:
            target = source
        for a, r in runs.items():
            for c, _ in r:
                if c not in target:
                    raise ValueError(
                        f"image of {a!r} uses letter {c!r} outside target alphabet"
                    )
        self.target = target
        self._runs = runs

    # -- images ---------------------------------------------------------

    def image_runs(self, a: str) -> Runs:
        try:
            return self._runs[a]
        except KeyError:
            raise ValueError(f"letter {a!r} not in source alphabet") from None

    def image(self, a: str) -> str:
        return _word_from_runs(self.image_runs(a))

    def image_length(self, a: str) -> int:
        return _runs_length(self.image_runs(a))

    def __call__(self, w: str) -> str:
        total = 0
        for c in w:
            self.source.check_word(c)
            total += self.image_length(c)
        if total > MATERIALIZE_CAP:
            raise ValueError(f"refusing to materialize a word of length {total}")
        return "".join(self.image(c) for c in w)

    # -- structure ------------------------------------------------------

    def is_endomorphism(self) -> bool:
        return self.source == self.target

    def compose(self, inner: "Morphism") -> "Morphism":
        """Return self after inner: (self.compose(inner))(w) == self(inner(w))."""
        if inner.target != self.source:
            raise ValueError("alphabet mismatch in composition")
        images: dict[str, Runs] = {}
        for a in inner.source.letters:
            out: list[tuple[str, int]] = []
            for b, c in inner.image_runs(a):
                rb = self.image_runs(b)
                if len(rb) == 1:
                    _append_run(out, (rb[0][0], rb[0][1] * c))
                elif c <= _REPEAT_CAP:
                    for _ in range(c):
                        for run in rb:
                            _append_run(out, run)
                else:
                    raise ValueError("composed image too large to represent")
            images[a] = tuple(out)
        return Morphism(images, source=inner.source, target=self.target)

    def __mul__(self, inner: "Morphism") -> "Morphism":
        return self.compose(inner)

    def incidence_matrix(self) -> IntMatrix:
        """Entry (b, a) counts occurrences of b in the image of a."""
        rows = []
        for b in self.target.letters:
            row = []
            for a in self.source.letters:
                row.append(sum(c for letter, c in self.image_runs(a) if letter == b))
            rows.append(row)
        return IntMatrix(rows)

    def first_letter_map(self) -> dict[str, str]:
        return {a: self.image_runs(a)[0][0] for a in self.source.letters}

    def last_letter_map(self) -> dict[str, str]:
        return {a: self.image_runs(a)[-1][0] for a in self.source.letters}

    def properness(self) -> Properness:
        firsts = set(self.first_letter_map().values())
        lasts = set(self.last_letter_map().values())
        return Properness(
            left=firsts.pop() if len(firsts) == 1 else None,
            right=lasts.pop() if len(lasts) == 1 else None,
        )

    def is_left_proper(self) -> bool:
        return self.properness().left is not None

    def is_right_proper(self) -> bool:
        return self.properness().right is not None

    def is_proper(self) -> bool:
        return self.properness().is_proper

    def is_unimodular(self) -> bool:
        if not self.is_endomorphism():
            raise ValueError("unimodularity is defined for endomorphisms only")
        return abs(self.incidence_matrix().det()) == 1

    def right_proper_conjugate(self) -> "Morphism":
        """Conjugate a left-proper morphism by its common first letter.

        If every image starts with b, the result r satisfies b r(a) = (image
        of a) b, so r is right proper, shares the incidence matrix of self,
        and products through it are unchanged.
        """
        p = self.properness()
        if p.left is None:
            raise ValueError("right_proper_conjugate needs a left-proper morphism")
        b = p.left
        images: dict[str, Runs] = {}
        for a in self.source.letters:
            runs = list(self.image_runs(a))
            head, count = runs[0]
            if count == 1:
                runs = runs[1:]
            else:
                runs[0] = (head, count - 1)
            _append_run(runs, (b, 1))
            images[a] = tuple(runs)
        return Morphism(images, source=self.source, target=self.target)

    # -- misc -----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Morphism)
            and self.source == other.source
            and self.target == other.target
            and self._runs == other._runs
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, tuple(sorted(self._runs.items()))))

    def __repr__(self) -> str:
        parts = []
        for a in self.source.letters:
            if self.image_length(a) <= 12:
                parts.append(f"{a}->{self.image(a)}")
            else:
                parts.append(f"{a}->[{self.image_length(a)} letters]")
        return f"Morphism({', '.join(parts)})"

    def to_json(self) -> dict:
        data = {
            "alphabet": list(self.source.letters),
            "images": {a: self.image(a) for a in self.source.letters},
        }
        if self.target != self.source:
            data["target"] = list(self.target.letters)
        return data

    @classmethod
    def from_json(cls, data: Mapping) -> "Morphism":
        if "alphabet" not in data or "images" not in data:
            raise ValueError("morphism JSON needs 'alphabet' and 'images'")
        source = Alphabet(data["alphabet"])
        target = Alphabet(data["target"]) if "target" in data else source
        return cls(dict(data["images"]), source=source, target=target)
