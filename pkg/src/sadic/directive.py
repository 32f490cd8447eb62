"""Directive sequences of substitutions and their exact certificates.

A directive sequence is either eventually periodic (prefix + repeating
period, an exact infinite object) or truncated (an explicit finite run of
morphisms up to a declared horizon, e.g. produced by a parameter
generator).  Certificates for truncated sequences are valid up to the
horizon and say so.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import Inconclusive
from .quadratic import Quad
from .words import Alphabet, IntMatrix, Morphism


def _exact_to_json(v):
    """Fraction as "p/q", quadratic surd as {"a","b","d"}."""
    if isinstance(v, Quad):
        return {"a": str(v.a), "b": str(v.b), "d": v.d}
    return str(Fraction(v))


def _exact_from_json(v):
    if isinstance(v, dict):
        return Quad(Fraction(v["a"]), Fraction(v["b"]), int(v["d"]))
    return Fraction(v)


class DirectiveSequence:
    """Sequence (tau_n) of non-erasing endomorphisms of a fixed alphabet."""

    def __init__(
        self,
        alphabet: Alphabet,
        prefix: tuple[Morphism, ...] | list[Morphism] = (),
        period: tuple[Morphism, ...] | list[Morphism] = (),
        horizon: int | None = None,
        meta: dict | None = None,
    ):
        if len(alphabet) < 2:
            raise ValueError("directive sequences need at least two letters")
        prefix = tuple(prefix)
        period = tuple(period)
        for m in prefix + period:
            if m.source != alphabet or m.target != alphabet:
                raise ValueError("all morphisms must be endomorphisms of the alphabet")
        if period:
            if horizon is not None:
                raise ValueError("horizon applies to truncated sequences only")
        else:
            if horizon is None:
                horizon = len(prefix)
            if horizon != len(prefix) or horizon < 1:
                raise ValueError("truncated sequence needs horizon == len(prefix) >= 1")
        self.alphabet = alphabet
        self.prefix = prefix
        self.period = period
        self.horizon = horizon  # None means infinite (eventually periodic)
        self.meta = dict(meta or {})
        self._matrices: dict[int, IntMatrix] = {}
        self._cumulative: list[IntMatrix] = [IntMatrix.identity(len(alphabet))]
        self._texts: dict[int, dict[str, str]] = {}
        self._certificates: dict[int, "SequenceCertificate"] = {}

    # -- indexing -------------------------------------------------------

    @property
    def periodic(self) -> bool:
        return bool(self.period)

    def morphism_at(self, n: int) -> Morphism:
        """The n-th morphism, 1-based."""
        if n < 1:
            raise ValueError("directive indices are 1-based")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        if self.periodic:
            return self.period[(n - len(self.prefix) - 1) % len(self.period)]
        raise ValueError(f"index {n} beyond declared horizon {self.horizon}")

    def matrix_at(self, n: int) -> IntMatrix:
        if n not in self._matrices:
            self._matrices[n] = self.morphism_at(n).incidence_matrix()
        return self._matrices[n]

    def cumulative_matrix(self, n: int) -> IntMatrix:
        """Incidence matrix of tau_1 ... tau_n (identity for n == 0)."""
        if n < 0:
            raise ValueError("depth must be >= 0")
        while len(self._cumulative) <= n:
            k = len(self._cumulative)
            self._cumulative.append(self._cumulative[-1] * self.matrix_at(k))
        return self._cumulative[n]

    def representative_starts(self) -> range:
        """Start indices whose tails cover all others (periodic case)."""
        if self.periodic:
            return range(1, len(self.prefix) + len(self.period) + 1)
        return range(1, self.horizon + 1)

    def level_texts(self, depth: int) -> dict[str, str]:
        """Images tau_1...tau_(depth-1) of each letter, as strings (cached)."""
        if depth < 1:
            raise ValueError("depth must be >= 1")
        if depth not in self._texts:
            best = max((k for k in self._texts if k < depth), default=1)
            texts = self._texts.get(best, {a: a for a in self.alphabet.letters})
            for n in range(best, depth):
                step = self.morphism_at(n)
                texts = {
                    a: "".join(texts[b] for b in step.image(a))
                    for a in self.alphabet.letters
                }
            self._texts[depth] = texts
        return self._texts[depth]

    def __repr__(self) -> str:
        kind = (
            f"prefix={len(self.prefix)}, period={len(self.period)}"
            if self.periodic
            else f"truncated at {self.horizon}"
        )
        name = self.meta.get("name")
        tag = f" {name!r}" if name else ""
        return f"DirectiveSequence({kind}{tag}, alphabet={''.join(self.alphabet.letters)!r})"

    # -- serialization --------------------------------------------------

    def to_json(self) -> dict:
        data: dict = {"alphabet": list(self.alphabet.letters)}
        if "name" in self.meta:
            data["name"] = self.meta["name"]
        if "generator" in self.meta:
            data["generator"] = dict(self.meta["generator"])
            return data
        data["prefix"] = [m.to_json() for m in self.prefix]
        data["period"] = [m.to_json() for m in self.period]
        if not self.periodic:
            data["horizon"] = self.horizon
        if "exact_measures" in self.meta:
            data["exact_measures"] = [
                [_exact_to_json(v) for v in vec]
                for vec in self.meta["exact_measures"]
            ]
        return data

    @classmethod
    def from_json(cls, data: dict) -> "DirectiveSequence":
        if "generator" in data:
            from . import families

            return families.from_generator_json(data)
        if "alphabet" not in data:
            raise ValueError("directive sequence JSON needs 'alphabet'")
        alphabet = Alphabet(data["alphabet"])

        def load(ms):
            out = []
            for m in ms:
                payload = dict(m)
                payload.setdefault("alphabet", data["alphabet"])
                out.append(Morphism.from_json(payload))
            return out

        prefix = load(data.get("prefix", []))
        period = load(data.get("period", []))
        meta: dict = {}
        if "name" in data:
            meta["name"] = data["name"]
        if "exact_measures" in data:
            meta["exact_measures"] = tuple(
                tuple(_exact_from_json(v) for v in vec)
                for vec in data["exact_measures"]
            )
        return cls(
            alphabet,
            prefix,
            period,
            horizon=data.get("horizon") if not period else None,
            meta=meta,
        )


def telescope(ds: DirectiveSequence, n: int, upto: int) -> Morphism:
    """Composition tau_n tau_(n+1) ... tau_(upto-1), applied right to left."""
    if not 1 <= n < upto:
        raise ValueError(f"need 1 <= n < upto, got [{n}, {upto})")
    result = ds.morphism_at(upto - 1)
    for k in range(upto - 2, n - 1, -1):
        result = ds.morphism_at(k).compose(result)
    return result


def telescope_matrix(ds: DirectiveSequence, n: int, upto: int) -> IntMatrix:
    """Incidence matrix of the telescoped window, without building words."""
    if not 1 <= n < upto:
        raise ValueError(f"need 1 <= n < upto, got [{n}, {upto})")
    result = ds.matrix_at(n)
    for k in range(n + 1, upto):
        result = result * ds.matrix_at(k)
    return result


# -- certification ------------------------------------------------------


@dataclass(frozen=True)
class SequenceCertificate:
    alphabet: Alphabet
    probe_depth: int
    primitive: bool
    primitive_window: tuple[int, int] | None
    obstruction: str | None
    unimodular: bool
    left_proper: bool
    right_proper: bool
    proper: bool
    level_first_letters: tuple[str | None, ...]
    level_last_letters: tuple[str | None, ...]
    left_proper_window: int | None
    right_proper_window: int | None
    proper_window: int | None
    growth_min: int
    growth_max: int
    truncated: bool
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def properizable(self) -> bool:
        """True when some telescoping yields a left-proper sequence."""
        return self.primitive and self.left_proper_window is not None


def _bool_rows(m: IntMatrix) -> tuple[int, ...]:
    """Row bitmasks of the positivity pattern."""
    return tuple(
        sum(1 << j for j, x in enumerate(row) if x > 0) for row in m.rows
    )


def _bool_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    out = []
    for row in a:
        acc = 0
        k = 0
        while row:
            if row & 1:
                acc |= b[k]
            row >>= 1
            k += 1
        out.append(acc)
    return tuple(out)


def _index_class(ds: DirectiveSequence, n: int):
    if n <= len(ds.prefix) or not ds.periodic:
        return ("abs", n)
    return ("per", (n - len(ds.prefix) - 1) % len(ds.period))


def _primitive_from(ds: DirectiveSequence, n: int, cap: int):
    """Smallest N with a positive product on [n, N), 'never', or None.

    None means the search was cut off (by the cap or by a truncated
    horizon) before reaching either a positive window or a cycle of
    positivity patterns.
    """
    d = len(ds.alphabet)
    full = (1 << d) - 1
    state = _bool_rows(ds.matrix_at(n))
    seen = {}
    m = 1
    while m <= cap:
        if all(r == full for r in state):
            return n + m
        if ds.periodic:
            key = (state, _index_class(ds, n + m))
            if key in seen:
                return "never"
            seen[key] = m
        if not ds.periodic and n + m > ds.horizon:
            return None
        try:
            nxt = ds.matrix_at(n + m)
        except ValueError:
            return None
        state = _bool_mul(state, _bool_rows(nxt))
        m += 1
    return None


def _letter_map_window(ds, n: int, width: int, which: str) -> dict[str, str] | None:
    """Composite first/last-letter map on [n, n+width), or None past horizon."""
    letters = ds.alphabet.letters
    try:
        mor = ds.morphism_at(n + width - 1)
    except ValueError:
        return None
    m = mor.first_letter_map() if which == "first" else mor.last_letter_map()
    for k in range(n + width - 2, n - 1, -1):
        mor = ds.morphism_at(k)
        step = mor.first_letter_map() if which == "first" else mor.last_letter_map()
        m = {a: step[m[a]] for a in letters}
    return m


def _proper_window(ds: DirectiveSequence, cap: int, which: str) -> int | None:
    """Smallest width making every probed window's letter map constant."""
    starts = list(ds.representative_starts())
    for width in range(1, cap + 1):
        ok = True
        seen_any = False
        for n in starts:
            m = _letter_map_window(ds, n, width, which)
            if m is None:
                continue
            seen_any = True
            if len(set(m.values())) != 1:
                ok = False
                break
        if ok and seen_any:
            return width
    return None


def certify(ds: DirectiveSequence, probe_depth: int = 12) -> SequenceCertificate:
    """Primitivity, unimodularity, properness and growth for a sequence.

    For eventually periodic input, primitivity is decided exactly: window
    positivity propagates to the right (incidence matrices have no zero
    column), and the positivity pattern of a window is a deterministic
    function of (pattern, position mod period), so a repeated pattern
    without positivity settles the question negatively.
    """
    if probe_depth < 1:
        raise ValueError("probe_depth must be >= 1")
    if not ds.periodic:
        probe_depth = min(probe_depth, ds.horizon)
    cached = ds._certificates.get(probe_depth)
    if cached is not None:
        return cached

    d = len(ds.alphabet)
    cap = 8 * d * d
    notes: list[str] = []
    truncated = not ds.periodic
    if truncated:
        notes.append(f"truncated sequence: certificate valid up to horizon {ds.horizon}")

    # unimodularity and per-level properness over one representative span
    levels = list(ds.representative_starts())
    unimodular = all(abs(ds.matrix_at(n).det()) == 1 for n in levels)
    firsts = []
    lasts = []
    for n in levels:
        p = ds.morphism_at(n).properness()
        firsts.append(p.left)
        lasts.append(p.right)
    left_proper = all(x is not None for x in firsts)
    right_proper = all(x is not None for x in lasts)

    # primitivity
    primitive = True
    primitive_window = None
    obstruction = None
    worst = None
    for n in levels:
        res = _primitive_from(ds, n, cap)
        if res == "never":
            primitive = False
            obstruction = f"no window starting at {n} ever has a positive product"
            break
        if res is None:
            if truncated:
                # starts too close to the horizon cannot be probed; they do
                # not refute primitivity of the declared finite run
                if n == 1:
                    primitive = False
                    obstruction = (
                        f"no positive window from start 1 within horizon {ds.horizon}"
                    )
                    break
                continue
            primitive = False
            obstruction = f"window search from {n} exhausted the cap {cap}"
            notes.append("primitivity search hit the window cap; treated as refuted")
            break
        if worst is None or res - n > worst[1] - worst[0]:
            worst = (n, res)
    if primitive and worst is None:
        primitive = False
        obstruction = "no start could be probed"
    if primitive:
        primitive_window = worst

    lpw = _proper_window(ds, cap, "first")
    rpw = _proper_window(ds, cap, "last")
    proper_window = None
    if lpw is not None and rpw is not None:
        proper_window = max(lpw, rpw)
        # both maps must be constant for one and the same width
        for width in range(proper_window, cap + 1):
            fm = _proper_window_width_ok(ds, width)
            if fm:
                proper_window = width
                break
        else:
            proper_window = None

    growth = ds.cumulative_matrix(probe_depth).column_sums()

    cert = SequenceCertificate(
        alphabet=ds.alphabet,
        probe_depth=probe_depth,
        primitive=primitive,
        primitive_window=primitive_window,
        obstruction=obstruction,
        unimodular=unimodular,
        left_proper=left_proper,
        right_proper=right_proper,
        proper=left_proper and right_proper,
        level_first_letters=tuple(firsts),
        level_last_letters=tuple(lasts),
        left_proper_window=lpw,
        right_proper_window=rpw,
        proper_window=proper_window,
        growth_min=min(growth),
        growth_max=max(growth),
        truncated=truncated,
        notes=tuple(notes),
    )
    ds._certificates[probe_depth] = cert
    return cert


def _proper_window_width_ok(ds: DirectiveSequence, width: int) -> bool:
    seen_any = False
    for n in ds.representative_starts():
        fm = _letter_map_window(ds, n, width, "first")
        lm = _letter_map_window(ds, n, width, "last")
        if fm is None or lm is None:
            continue
        seen_any = True
        if len(set(fm.values())) != 1 or len(set(lm.values())) != 1:
            return False
    return seen_any


def properize(ds: DirectiveSequence) -> DirectiveSequence:
    """Pair tau_(2n-1) with the conjugate of tau_(2n) to force properness.

    Needs a primitive sequence whose every morphism is left proper.  The
    n-th output is tau_(2n-1) composed with the right-proper conjugate of
    tau_(2n); incidence matrices of telescoped products, unimodularity and
    the generated subshift are unchanged.
    """
    cert = certify(ds)
    if not cert.left_proper:
        raise ValueError("properize needs every morphism left proper")
    if not cert.primitive:
        raise ValueError("properize needs a primitive sequence")

    def pair(k: int) -> Morphism:
        left = ds.morphism_at(2 * k - 1)
        right = ds.morphism_at(2 * k).right_proper_conjugate()
        return left.compose(right)

    meta = {"name": f"properized({ds.meta.get('name', '?')})"}
    if ds.periodic:
        p2 = (len(ds.prefix) + 1) // 2
        plen = len(ds.period)
        l2 = plen if plen % 2 == 1 else plen // 2
        prefix = [pair(k) for k in range(1, p2 + 1)]
        period = [pair(k) for k in range(p2 + 1, p2 + l2 + 1)]
        return DirectiveSequence(ds.alphabet, prefix, period, meta=meta)
    h2 = ds.horizon // 2
    if h2 < 1:
        raise ValueError("horizon too short to pair morphisms")
    prefix = [pair(k) for k in range(1, h2 + 1)]
    return DirectiveSequence(ds.alphabet, prefix, (), horizon=h2, meta=meta)


@dataclass(frozen=True)
class AperiodicityVerdict:
    kind: str  # "aperiodic" or "periodic"
    checked_up_to: int
    plateau: int | None = None  # complexity value where growth stopped


def aperiodicity_witness(ds: DirectiveSequence, max_len: int) -> AperiodicityVerdict:
    """Classify via complexity growth: p(n+1) == p(n) forces eventual periodicity."""
    from .language import build_language

    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    cert = certify(ds)
    if not cert.primitive:
        raise ValueError("aperiodicity probe needs a certified primitive sequence")
    lang = build_language(ds, max_len + 1)
    prev = 1
    for n in range(1, max_len + 2):
        cur = len(lang.factors(n))
        if cur == prev:
            return AperiodicityVerdict("periodic", max_len, plateau=cur)
        prev = cur
    for n in range(1, max_len + 1):
        if len(lang.factors(n)) < n + 1:
            raise RuntimeError(
                "complexity neither plateaued nor stayed above n+1; "
                "this contradicts factor-closure and is a bug"
            )
    return AperiodicityVerdict("aperiodic", max_len)
