"""Ordered-group descriptors built from letter measures.

The descriptor of a system on d letters is the group Z^d ordered by
positivity against every extreme invariant measure, with the all-ones
order unit.  Measures enter either exactly (rational or quadratic-surd
coordinates) or as exact rational interval boxes from the cone probe;
every verdict records which of the two it rests on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .errors import Inconclusive
from .measures import Box, ergodicity_probe
from .quadratic import Quad
from .words import Alphabet, IntMatrix

Exact = Fraction | int | Quad


@dataclass(frozen=True)
class ExactMeasure:
    """Letter-measure vector with exact coordinates."""

    values: tuple[Exact, ...]

    @property
    def dim(self) -> int:
        return len(self.values)

    def dot(self, x) -> Exact:
        acc = None
        for xi, vi in zip(x, self.values):
            term = vi * xi
            acc = term if acc is None else acc + term
        return acc

    def sign_of_dot(self, x) -> int:
        val = self.dot(x)
        if isinstance(val, Quad):
            return val.sign()
        return (val > 0) - (val < 0)


@dataclass(frozen=True)
class MeasureEnclosure:
    """Letter-measure vector known only inside a rational box."""

    intervals: Box

    @property
    def dim(self) -> int:
        return len(self.intervals)

    def dot(self, x) -> tuple[Fraction, Fraction]:
        lo = Fraction(0)
        hi = Fraction(0)
        for xi, (a, b) in zip(x, self.intervals):
            if xi >= 0:
                lo += xi * a
                hi += xi * b
            else:
                lo += xi * b
                hi += xi * a
        return lo, hi

    def midpoint(self) -> tuple[Fraction, ...]:
        return tuple((a + b) / 2 for a, b in self.intervals)

    def max_width(self) -> Fraction:
        return max(b - a for a, b in self.intervals)


Measure = ExactMeasure | MeasureEnclosure


@dataclass(frozen=True)
class DimensionGroupDescriptor:
    alphabet: Alphabet
    measures: tuple[Measure, ...]
    provenance: str

    @property
    def d(self) -> int:
        return len(self.alphabet)

    @property
    def unit(self) -> tuple[int, ...]:
        return (1,) * self.d

    @property
    def exact(self) -> bool:
        return all(isinstance(m, ExactMeasure) for m in self.measures)

    def __post_init__(self):
        if not self.measures:
            raise ValueError("descriptor needs at least one measure")
        if not 1 <= len(self.measures) <= max(1, self.d - 1):
            raise ValueError(
                f"{len(self.measures)} extreme measures violates the d-1 bound"
            )
        for m in self.measures:
            if m.dim != self.d:
                raise ValueError("measure dimension does not match alphabet")


def descriptor_from_measures(
    alphabet: Alphabet, measures, provenance: str
) -> DimensionGroupDescriptor:
    packed: list[Measure] = []
    for m in measures:
        if isinstance(m, (ExactMeasure, MeasureEnclosure)):
            packed.append(m)
        else:
            m = tuple(m)
            if m and isinstance(m[0], tuple):
                packed.append(MeasureEnclosure(tuple((Fraction(a), Fraction(b)) for a, b in m)))
            else:
                packed.append(ExactMeasure(m))
    return DimensionGroupDescriptor(alphabet, tuple(packed), provenance)


def descriptor(
    ds, max_depth: int = 80, eps="1e-12"
) -> DimensionGroupDescriptor:
    """Descriptor from attached exact measures or from the cone probe."""
    name = ds.meta.get("name", "directive sequence")
    exact = ds.meta.get("exact_measures")
    if exact is not None:
        measures = tuple(ExactMeasure(tuple(v)) for v in exact)
        _validate_exact_measures(ds, measures)
        return DimensionGroupDescriptor(
            ds.alphabet, measures, provenance=f"{name}: exact attached measures"
        )
    if not ds.periodic:
        max_depth = min(max_depth, ds.horizon)
    report = ergodicity_probe(ds, max_depth, eps)
    if report.verdict == "unique":
        return DimensionGroupDescriptor(
            ds.alphabet,
            (MeasureEnclosure(report.enclosure),),
            provenance=f"{name}: unique measure box at depth {max_depth}",
        )
    if report.verdict == "multiple":
        return DimensionGroupDescriptor(
            ds.alphabet,
            tuple(MeasureEnclosure(c.box) for c in report.clusters),
            provenance=(
                f"{name}: {len(report.clusters)} cluster boxes at depth "
                f"{max_depth} (empirical limit-point reading)"
            ),
        )
    raise Inconclusive(
        "measure probe was inconclusive; no descriptor built", report=report
    )


def _validate_exact_measures(ds, measures: tuple[ExactMeasure, ...]) -> None:
    """Exact measures must sum to one and sit inside the column box.

    The letter-measure vector is a convex combination of the normalized
    columns of any cumulative matrix, so componentwise min/max over the
    columns bounds it; this needs no unimodularity.
    """
    depth = min(24, ds.horizon) if not ds.periodic else 24
    M = ds.cumulative_matrix(depth)
    sums = M.column_sums()
    box = tuple(
        (
            min(Fraction(M.rows[i][j], sums[j]) for j in range(M.ncols)),
            max(Fraction(M.rows[i][j], sums[j]) for j in range(M.ncols)),
        )
        for i in range(M.nrows)
    )
    for m in measures:
        total = m.dot((1,) * m.dim)
        if not total == 1:
            raise ValueError("exact measure coordinates must sum to 1")
        for v, (lo, hi) in zip(m.values, box):
            if not (v >= lo and v <= hi):
                raise ValueError(
                    "attached exact measure falls outside the probed cone box"
                )


def cone_membership(D: DimensionGroupDescriptor, x) -> str:
    """Place an integer vector against the positive cone.

    Returns "positive", "zero", "negative-or-mixed", or "undecidable"
    (interval data straddling zero for a vector outside the detected
    relation lattice).
    """
    x = tuple(int(v) for v in x)
    if len(x) != D.d:
        raise ValueError("vector dimension mismatch")
    if all(v == 0 for v in x):
        return "zero"
    signs: list[int] = []
    straddle = False
    for m in D.measures:
        if isinstance(m, ExactMeasure):
            signs.append(m.sign_of_dot(x))
        else:
            lo, hi = m.dot(x)
            if lo > 0:
                signs.append(1)
            elif hi < 0:
                signs.append(-1)
            else:
                straddle = True
    if straddle:
        try:
            lattice = infinitesimal_lattice(D)
        except Inconclusive:
            return "undecidable"
        if not lattice.is_trivial and _in_span(lattice.basis, x):
            return "zero"
        return "undecidable"
    if all(s > 0 for s in signs):
        return "positive"
    if all(s == 0 for s in signs):
        return "zero"
    return "negative-or-mixed"


# -- integer linear algebra --------------------------------------------


def integer_kernel(rows) -> tuple[tuple[int, ...], ...]:
    """Basis of {x in Z^d : A x = 0} by unimodular column reduction."""
    if not rows:
        raise ValueError("need at least one constraint row")
    d = len(rows[0])
    work = [list(r) for r in rows] + [
        [1 if j == i else 0 for j in range(d)] for i in range(d)
    ]
    nrows = len(rows)
    pivot_cols: list[int] = []
    free = list(range(d))
    for r in range(nrows):
        live = [j for j in free if work[r][j] != 0]
        while len(live) > 1:
            live.sort(key=lambda j: abs(work[r][j]))
            j0 = live[0]
            for j in live[1:]:
                q = work[r][j] // work[r][j0]
                if q:
                    for i in range(len(work)):
                        work[i][j] -= q * work[i][j0]
            live = [j for j in free if work[r][j] != 0]
        if live:
            free = [j for j in free if j != live[0]]
            pivot_cols.append(live[0])
    basis = []
    for j in free:
        vec = tuple(work[nrows + i][j] for i in range(d))
        basis.append(_normalize_sign(vec))
    return tuple(sorted(basis))


def _normalize_sign(vec: tuple[int, ...]) -> tuple[int, ...]:
    for v in vec:
        if v > 0:
            return vec
        if v < 0:
            return tuple(-x for x in vec)
    return vec


def _in_span(basis, x) -> bool:
    """Whether x lies in the rational span of the basis rows."""
    if not basis:
        return False
    rows = [list(b) for b in basis]
    return _rank(rows + [list(x)]) == _rank(rows)


def _rank(rows) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for j in range(cols):
        pivot = next((i for i in range(rank, len(m)) if m[i][j] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = 1 / m[rank][j]
        m[rank] = [v * inv for v in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][j] != 0:
                factor = m[i][j]
                m[i] = [a - factor * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def lll_reduce(basis: list[list[int]], delta: Fraction = Fraction(3, 4)):
    """Classic LLL on integer row vectors, exact Fraction arithmetic."""
    b = [list(map(int, v)) for v in basis]
    n = len(b)

    def gram():
        mu = [[Fraction(0)] * n for _ in range(n)]
        ortho_sq = [Fraction(0)] * n
        ortho: list[list[Fraction]] = []
        for i in range(n):
            vec = [Fraction(x) for x in b[i]]
            for j in range(i):
                if ortho_sq[j] == 0:
                    continue
                mu[i][j] = sum(
                    Fraction(x) * y for x, y in zip(b[i], ortho[j])
                ) / ortho_sq[j]
                vec = [x - mu[i][j] * y for x, y in zip(vec, ortho[j])]
            ortho.append(vec)
            ortho_sq[i] = sum(x * x for x in vec)
        return mu, ortho_sq

    k = 1
    mu, ortho_sq = gram()
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                mu, ortho_sq = gram()
        if ortho_sq[k] >= (delta - mu[k][k - 1] ** 2) * ortho_sq[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            mu, ortho_sq = gram()
            k = max(k - 1, 1)
    return b


@dataclass(frozen=True)
class InfinitesimalLattice:
    basis: tuple[tuple[int, ...], ...]
    method: str
    notes: tuple[str, ...] = ()

    @property
    def is_trivial(self) -> bool:
        return not self.basis

    @property
    def rank(self) -> int:
        return len(self.basis)


def infinitesimal_lattice(
    D: DimensionGroupDescriptor, coeff_bound: int = 10**6
) -> InfinitesimalLattice:
    """Integer vectors pairing to zero with every extreme measure.

    Exact measures give the saturated kernel of an exact rational system.
    Interval measures get a lattice-reduction search on midpoints whose
    candidates are only kept when the rigorous interval pairing contains
    zero; that result is a detection, not a proof, and is tagged so.
    """
    if D.exact:
        rows: list[list[int]] = []
        for m in D.measures:
            rational = []
            surd = []
            has_surd = False
            for v in m.values:
                if isinstance(v, Quad):
                    rational.append(v.a)
                    surd.append(v.b)
                    has_surd = has_surd or v.b != 0
                else:
                    rational.append(Fraction(v))
                    surd.append(Fraction(0))
            rows.append(_clear_denominators(rational))
            if has_surd:
                rows.append(_clear_denominators(surd))
        basis = tuple(integer_kernel(rows))
        return InfinitesimalLattice(basis, "exact")

    boxes = [m for m in D.measures if isinstance(m, MeasureEnclosure)]
    width = max(m.max_width() for m in boxes)
    if width >= Fraction(1, 1000):
        raise Inconclusive(
            "interval measures too wide for integer-relation detection",
            width=str(width),
        )
    scale = 10 ** (len(str(width.denominator // max(1, width.numerator))) - 1)
    scale = min(scale, 10**40)
    candidates: list[tuple[int, ...]] = []
    for m in boxes:
        mid = m.midpoint()
        d = len(mid)
        lattice_rows = []
        for i in range(d):
            row = [0] * d + [0]
            row[i] = 1
            row[d] = int(round(mid[i] * scale))
            lattice_rows.append(row)
        reduced = lll_reduce(lattice_rows)
        for vec in reduced:
            x = tuple(vec[:d])
            if all(v == 0 for v in x):
                continue
            if max(abs(v) for v in x) > coeff_bound:
                continue
            ok = True
            for mm in boxes:
                lo, hi = mm.dot(x)
                if not (lo <= 0 <= hi):
                    ok = False
                    break
            if ok:
                candidates.append(_normalize_sign(x))
    if not candidates:
        return InfinitesimalLattice(
            (),
            f"integer-relation(scale={scale})",
            notes=(f"no relation with coefficients <= {coeff_bound} detected",),
        )
    basis = tuple(_row_lattice_basis(candidates))
    return InfinitesimalLattice(
        basis,
        f"integer-relation(scale={scale})",
        notes=("detected against interval enclosures; not a proof",),
    )


def _clear_denominators(values: list[Fraction]) -> list[int]:
    from math import lcm

    denom = lcm(*(v.denominator for v in values)) if values else 1
    return [int(v * denom) for v in values]


def _row_lattice_basis(vectors) -> list[tuple[int, ...]]:
    """Hermite-style row reduction of integer vectors; drops dependents."""
    rows = [list(v) for v in dict.fromkeys(tuple(v) for v in vectors)]
    d = len(rows[0])
    basis: list[list[int]] = []
    for j in range(d):
        live = [r for r in rows if r[j] != 0]
        if not live:
            continue
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[j]))
            r0 = live[0]
            for r in live[1:]:
                q = r[j] // r0[j]
                for t in range(d):
                    r[t] -= q * r0[t]
            live = [r for r in rows if r[j] != 0]
        pivot = live[0]
        basis.append(pivot)
        rows = [r for r in rows if r is not pivot and any(r)]
    return sorted(_normalize_sign(tuple(b)) for b in basis)


@dataclass(frozen=True)
class ImageSubgroupGenerators:
    per_measure: tuple[tuple, ...]
    unique: bool
    note: str


def image_subgroup_generators(D: DimensionGroupDescriptor) -> ImageSubgroupGenerators:
    """Per-letter measure values generating the trace of the unit interval."""
    lists = tuple(
        tuple(m.values) if isinstance(m, ExactMeasure) else tuple(m.intervals)
        for m in D.measures
    )
    if len(lists) == 1:
        note = "generators of the image subgroup for the unique measure"
        vals = lists[0]
        if D.exact and len(set(vals)) < len(vals):
            note += "; duplicate letter values collapse"
        return ImageSubgroupGenerators(lists, True, note)
    return ImageSubgroupGenerators(
        lists,
        False,
        "several extreme measures: per-measure generator lists only, "
        "their intersection is not computed",
    )


# -- strong orbit equivalence ------------------------------------------


@dataclass(frozen=True)
class SoeResult:
    status: str  # "witness" | "no_witness_within_bound" | "not_soe"
    matrix: tuple[tuple[int, ...], ...] | None
    note: str


def _rows_with_sum_one(d: int, bound: int):
    """All integer rows of length d, entries in [-bound, bound], summing to 1."""
    row = [0] * d

    def rec(i: int, remaining: int):
        if i == d - 1:
            if -bound <= remaining <= bound:
                row[i] = remaining
                yield tuple(row)
            return
        slots = d - 1 - i
        for v in range(-bound, bound + 1):
            rest = remaining - v
            if -bound * slots <= rest <= bound * slots:
                row[i] = v
                yield from rec(i + 1, rest)

    yield from rec(0, 1)


def _measure_coordinate_bounds(m: Measure):
    if isinstance(m, ExactMeasure):
        return m.values, m.values
    los = tuple(iv[0] for iv in m.intervals)
    his = tuple(iv[1] for iv in m.intervals)
    return los, his


def _compatible(mapped, target: Measure) -> bool:
    """mapped is (lo, hi) tuples; target exact or box: do they intersect?"""
    if isinstance(target, ExactMeasure):
        for (lo, hi), v in zip(mapped, target.values):
            if isinstance(v, Quad) or isinstance(lo, Quad) or isinstance(hi, Quad):
                if not (lo <= v and v <= hi):
                    return False
            elif not (lo <= v <= hi):
                return False
        return True
    for (lo, hi), (tlo, thi) in zip(mapped, target.intervals):
        if hi < tlo or thi < lo:
            return False
    return True


def _map_measure(matrix_rows, m: Measure):
    """Intervals for M^T mu, column by column; exact inputs give exact pairs."""
    d = len(matrix_rows)
    out = []
    for j in range(d):
        if isinstance(m, ExactMeasure):
            val = None
            for i in range(d):
                term = m.values[i] * matrix_rows[i][j]
                val = term if val is None else val + term
            out.append((val, val))
        else:
            lo = Fraction(0)
            hi = Fraction(0)
            for i in range(d):
                c = matrix_rows[i][j]
                a, b = m.intervals[i]
                if c >= 0:
                    lo += c * a
                    hi += c * b
                else:
                    lo += c * b
                    hi += c * a
            out.append((lo, hi))
    return tuple(out)


def soe_test(
    D1: DimensionGroupDescriptor,
    D2: DimensionGroupDescriptor,
    entry_bound: int = 3,
) -> SoeResult:
    """Search for a unimodular unit-preserving matrix carrying measures onto measures.

    A witness M has rows summing to one, |det M| = 1, and M^T maps the
    extreme measures of D1 onto those of D2 (exactly when both sides are
    exact, within interval tolerance otherwise).  The identity is tried
    first, so testing a descriptor against itself reports the identity
    even when ties between measure coordinates admit smaller witnesses
    in lexicographic order.  After that the search is exhaustive over
    entries in [-entry_bound, entry_bound] in row-major lexicographic
    order.  Failure within the bound is one-sided evidence only.
    """
    if entry_bound < 1:
        raise ValueError("entry_bound must be >= 1")
    if D1.d != D2.d:
        return SoeResult(
            "not_soe",
            None,
            f"alphabet sizes {D1.d} and {D2.d} differ; the ordered groups "
            "cannot be unit-isomorphic",
        )
    if len(D1.measures) != len(D2.measures):
        raise ValueError(
            "extreme measure counts differ; refine the descriptors before testing"
        )
    d = D1.d
    rows = list(_rows_with_sum_one(d, entry_bound))
    k = len(D1.measures)
    ident = [tuple(1 if i == j else 0 for j in range(d)) for i in range(d)]
    for assignment in permutations(range(k)):
        targets = [D2.measures[assignment[i]] for i in range(k)]
        if all(
            _compatible(_map_measure(ident, m), t)
            for m, t in zip(D1.measures, targets)
        ):
            return SoeResult(
                "witness",
                tuple(ident),
                "identity already carries extreme measures onto extreme measures",
            )
    for assignment in permutations(range(k)):
        targets = [D2.measures[assignment[i]] for i in range(k)]

        def feasible(chosen: list[tuple[int, ...]]) -> bool:
            depth = len(chosen)
            for m, target in zip(D1.measures, targets):
                los, his = _measure_coordinate_bounds(m)
                tail_hi = Fraction(0)
                for h in his[depth:]:
                    tail_hi = tail_hi + h
                for j in range(d):
                    lo = hi = None
                    for i in range(depth):
                        c = chosen[i][j]
                        a, b = los[i], his[i]
                        term_lo = c * a if c >= 0 else c * b
                        term_hi = c * b if c >= 0 else c * a
                        lo = term_lo if lo is None else lo + term_lo
                        hi = term_hi if hi is None else hi + term_hi
                    if lo is None:
                        lo = hi = 0
                    spread_lo = lo - entry_bound * tail_hi
                    spread_hi = hi + entry_bound * tail_hi
                    if isinstance(target, ExactMeasure):
                        t = target.values[j]
                        if t < spread_lo or t > spread_hi:
                            return False
                    else:
                        tlo, thi = target.intervals[j]
                        if thi < spread_lo or tlo > spread_hi:
                            return False
            return True

        def search(chosen: list[tuple[int, ...]]):
            if len(chosen) == d:
                matrix = IntMatrix(chosen)
                if abs(matrix.det()) != 1:
                    return None
                for m, target in zip(D1.measures, targets):
                    if not _compatible(_map_measure(chosen, m), target):
                        return None
                return tuple(chosen)
            for row in rows:
                chosen.append(row)
                if feasible(chosen):
                    hit = search(chosen)
                    if hit is not None:
                        return hit
                chosen.pop()
            return None

        found = search([])
        if found is not None:
            return SoeResult(
                "witness",
                found,
                "unit-preserving unimodular matrix carrying extreme measures "
                "onto extreme measures",
            )
    return SoeResult(
        "no_witness_within_bound",
        None,
        f"no witness with entries in [-{entry_bound}, {entry_bound}]; "
        "this does not refute orbit equivalence",
    )


def matrix_inverse_unimodular(rows: tuple[tuple[int, ...], ...]):
    """Exact inverse of a unimodular integer matrix via the adjugate."""
    m = IntMatrix(rows)
    det = m.det()
    if abs(det) != 1:
        raise ValueError("matrix is not unimodular")
    n = m.nrows
    cof = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = [
                [m[r, c] for c in range(n) if c != j] for r in range(n) if r != i
            ]
            row.append(((-1) ** (i + j)) * IntMatrix(minor).det())
        cof.append(row)
    adj = IntMatrix(cof).transpose()
    inv = [[det * adj[i, j] for j in range(n)] for i in range(n)]
    return tuple(tuple(r) for r in inv)
