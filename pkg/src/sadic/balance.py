"""Occurrence-count discrepancy diagnostics for letters and factors.

The profile of a target v records, for each n, the largest gap between
occurrence counts of v over pairs of equal-length factors of length at
most n (a running maximum, so profiles never decrease).  Boundedness is
only ever reported empirically over the probed range; refutations come
either from an observed growing profile or from an integer relation
among the letter frequencies, which rules out balance on letters for
aperiodic systems.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import log2

from .directive import DirectiveSequence, aperiodicity_witness
from .dimgroup import (
    DimensionGroupDescriptor,
    descriptor,
    infinitesimal_lattice,
)
from .errors import Inconclusive
from .language import LanguageTable, build_language


@dataclass(frozen=True)
class ClassifierConfig:
    """Thresholds for the growth classifier, echoed into every profile.

    Linear slopes catch polynomial growth; the log2 fit catches profiles
    that step up near length doublings, which is how slow (logarithmic)
    unbalance shows up at desk scale.
    """

    linear_slope_min: float = 0.05
    log_slope_min: float = 0.55
    min_peak: int = 5


DEFAULT_CONFIG = ClassifierConfig()


@dataclass(frozen=True)
class DiscrepancyProfile:
    target: str
    lengths: tuple[int, ...]
    values: tuple[int, ...]  # running maxima, non-decreasing
    classification: str  # "bounded" | "growing" | "inconclusive"
    bound: int | None
    linear_slope: float
    log_slope: float
    witness: tuple[str, str] | None
    config: ClassifierConfig

    @property
    def peak(self) -> int:
        return self.values[-1] if self.values else 0


def _least_squares_slope(xs, ys) -> float:
    n = len(xs)
    if n < 2:
        return 0.0
    mx = sum(xs) / n
    my = sum(ys) / n
    var = sum((x - mx) ** 2 for x in xs)
    if var == 0:
        return 0.0
    cov = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return cov / var


def _classify(lengths, running, config: ClassifierConfig):
    half = len(lengths) // 2
    lin = _least_squares_slope(lengths[half:], running[half:])
    logx = [log2(n) for n in lengths if n >= 2]
    logy = [v for n, v in zip(lengths, running) if n >= 2]
    logslope = _least_squares_slope(logx, logy)
    # running maxima are monotone, so a plateau on the final half is just
    # equality of its endpoints
    if len(lengths) >= 4 and running[half] == running[-1]:
        return "bounded", running[-1], lin, logslope
    peak = running[-1] if running else 0
    if peak >= config.min_peak and (
        lin > config.linear_slope_min or logslope >= config.log_slope_min
    ):
        return "growing", None, lin, logslope
    return "inconclusive", None, lin, logslope


def _start_counts(text: str, target: str) -> list[int]:
    """Prefix sums of occurrence starts: counts[i] = starts in text[:i]."""
    k = len(target)
    counts = [0] * (len(text) + 1)
    acc = 0
    last = len(text) - k
    for i in range(len(text)):
        counts[i] = acc
        if i <= last and text.startswith(target, i):
            acc += 1
    counts[len(text)] = acc
    return counts


def _extremes_at(texts, prefix_sums, target_len: int, n: int):
    """Extremal occurrence counts over all length-n windows, with positions."""
    best = worst = None
    for key, text in texts.items():
        if len(text) < n:
            continue
        counts = prefix_sums[key]
        span = n - target_len + 1
        for i in range(len(text) - n + 1):
            c = counts[i + span] - counts[i] if span > 0 else 0
            if best is None or c > best[0]:
                best = (c, key, i)
            if worst is None or c < worst[0]:
                worst = (c, key, i)
    return best, worst


def _discrepancy(
    lang: LanguageTable, target: str, up_to: int, config: ClassifierConfig
) -> DiscrepancyProfile:
    if up_to < 1:
        raise ValueError("up_to must be >= 1")
    if up_to > lang.max_len:
        raise ValueError(
            f"probe length {up_to} exceeds the table range {lang.max_len}"
        )
    texts = lang.texts
    k = len(target)
    prefix_sums = {key: _start_counts(text, target) for key, text in texts.items()}
    if all(ps[-1] == 0 for ps in prefix_sums.values()):
        raise ValueError(f"target {target!r} does not occur in the language")
    lengths = list(range(1, up_to + 1))
    raw: list[int] = []
    for n in lengths:
        if n < k:
            raw.append(0)
            continue
        best, worst = _extremes_at(texts, prefix_sums, k, n)
        raw.append(0 if best is None else best[0] - worst[0])
    running: list[int] = []
    peak = 0
    for v in raw:
        peak = max(peak, v)
        running.append(peak)
    classification, bound, lin, logslope = _classify(lengths, running, config)
    witness = None
    final = running[-1]
    if final > 0:
        n_star = lengths[raw.index(final)]
        best, worst = _extremes_at(texts, prefix_sums, k, n_star)
        witness = (
            texts[best[1]][best[2] : best[2] + n_star],
            texts[worst[1]][worst[2] : worst[2] + n_star],
        )
    return DiscrepancyProfile(
        target,
        tuple(lengths),
        tuple(running),
        classification,
        bound,
        lin,
        logslope,
        witness,
        config,
    )


def letter_discrepancy(
    lang: LanguageTable,
    letter: str,
    up_to: int,
    config: ClassifierConfig = DEFAULT_CONFIG,
) -> DiscrepancyProfile:
    """Discrepancy profile of a single letter over the factor table."""
    if letter not in lang.alphabet:
        raise ValueError(f"letter {letter!r} not in alphabet")
    return _discrepancy(lang, letter, up_to, config)


def factor_discrepancy(
    lang: LanguageTable,
    factor: str,
    up_to: int,
    config: ClassifierConfig = DEFAULT_CONFIG,
) -> DiscrepancyProfile:
    """Discrepancy profile of a factor; the factor must occur."""
    lang.alphabet.check_word(factor)
    if not factor:
        raise ValueError("factor must be non-empty")
    return _discrepancy(lang, factor, up_to, config)


def frequency_rank(D: DimensionGroupDescriptor) -> tuple[int, str]:
    """Rank over the rationals of the group generated by letter frequencies.

    Equals d minus the rank of the integer-relation lattice of the unique
    frequency vector.  The method tag records whether the lattice was exact
    or only a detection against interval enclosures.
    """
    if len(D.measures) != 1:
        raise ValueError("frequency rank needs a single (unique) measure")
    lattice = infinitesimal_lattice(D)
    method = lattice.method
    if lattice.notes:
        method += "; " + "; ".join(lattice.notes)
    return D.d - lattice.rank, method


@dataclass(frozen=True)
class BalanceReport:
    alphabet: tuple[str, ...]
    probed_to: int
    letter_profiles: tuple[DiscrepancyProfile, ...]
    factor_profiles: tuple[DiscrepancyProfile, ...]
    frequency_rank: int | None
    rank_method: str
    aperiodic: bool | None
    letters_verdict: str
    factors_verdict: str | None
    notes: tuple[str, ...]


def balance_dashboard(
    ds: DirectiveSequence,
    max_n: int = 300,
    factors: tuple[str, ...] = (),
    config: ClassifierConfig = DEFAULT_CONFIG,
    lang: LanguageTable | None = None,
    D: DimensionGroupDescriptor | None = None,
) -> BalanceReport:
    """Letter profiles, optional factor spot checks, and the frequency rank.

    The verdict for letters is refuted by a growing profile or, for
    aperiodic systems, by an integer relation among letter frequencies;
    bounded observations only ever yield an empirical verdict.
    """
    notes: list[str] = []
    if lang is None:
        lang = build_language(ds, max_n)
    elif max_n > lang.max_len:
        raise ValueError("supplied table is shorter than the probe range")

    letter_profiles = tuple(
        letter_discrepancy(lang, a, max_n, config) for a in ds.alphabet.letters
    )
    factor_profiles = tuple(
        factor_discrepancy(lang, w, max_n, config) for w in factors
    )

    aperiodic: bool | None = None
    try:
        probe_len = min(max_n, lang.max_len, 60)
        verdict = aperiodicity_witness(ds, probe_len)
        aperiodic = verdict.kind == "aperiodic"
    except (ValueError, Inconclusive) as exc:
        notes.append(f"aperiodicity probe unavailable: {exc}")

    rank: int | None = None
    rank_method = "unavailable"
    if D is None:
        try:
            D = descriptor(ds)
        except (ValueError, Inconclusive) as exc:
            notes.append(f"no descriptor for frequency rank: {exc}")
            D = None
    if D is not None:
        try:
            rank, rank_method = frequency_rank(D)
        except (ValueError, Inconclusive) as exc:
            notes.append(f"frequency rank not computed: {exc}")

    d = len(ds.alphabet)
    growing = [p for p in letter_profiles if p.classification == "growing"]
    reasons: list[str] = []
    if rank is not None and rank < d and aperiodic:
        reasons.append(
            f"letter frequencies admit an integer relation "
            f"(frequency rank {rank} < {d})"
        )
    if growing:
        w = growing[0]
        reasons.append(
            f"profile of {w.target!r} grows to {w.peak} "
            "(witness pair recorded on the profile)"
        )
    if reasons:
        letters_verdict = "not balanced on letters: " + "; ".join(reasons)
        if not growing and all(
            p.classification == "bounded" for p in letter_profiles
        ):
            notes.append(
                f"profiles plateau up to n={max_n}; the frequency-relation "
                "rule overrides the empirical reading"
            )
    elif all(p.classification == "bounded" for p in letter_profiles):
        bound = max(p.bound for p in letter_profiles)
        letters_verdict = (
            f"empirically balanced on letters up to n={max_n} "
            f"(bound {bound}; not a certification)"
        )
    else:
        letters_verdict = "inconclusive"

    factors_verdict = None
    if factor_profiles:
        fgrow = [p for p in factor_profiles if p.classification == "growing"]
        if fgrow:
            w = fgrow[0]
            factors_verdict = (
                f"not balanced on factors: profile of {w.target!r} grows "
                f"to {w.peak} (witness pair recorded on the profile)"
            )
        elif all(p.classification == "bounded" for p in factor_profiles):
            factors_verdict = (
                f"probed factors empirically balanced up to n={max_n}"
            )
        else:
            factors_verdict = "inconclusive"

    notes.append(
        f"classifier thresholds: linear slope > {config.linear_slope_min}, "
        f"log2 slope >= {config.log_slope_min}, peak >= {config.min_peak}"
    )
    return BalanceReport(
        ds.alphabet.letters,
        max_n,
        letter_profiles,
        factor_profiles,
        rank,
        rank_method,
        aperiodic,
        letters_verdict,
        factors_verdict,
        notes=tuple(notes),
    )
