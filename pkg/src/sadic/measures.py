"""Letter-measure cones: exact rational enclosures of invariant measures.

The cone at depth n is spanned by the normalized columns of the cumulative
incidence matrix; deeper cones are convex combinations of shallower ones,
so every shift-invariant probability measure's letter vector lies in every
cone.  All coordinates are exact fractions; verdicts never rest on floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .directive import DirectiveSequence, certify
from .words import Alphabet

RationalVector = tuple[Fraction, ...]
Box = tuple[tuple[Fraction, Fraction], ...]


def parse_rational(value) -> Fraction:
    """Exact Fraction from int, Fraction or decimal/scientific string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise ValueError("refusing a float tolerance; pass a string or Fraction")
    return Fraction(str(value))


def l1_distance(u: RationalVector, v: RationalVector) -> Fraction:
    return sum((abs(a - b) for a, b in zip(u, v)), Fraction(0))


@dataclass(frozen=True)
class MeasureCone:
    depth: int
    columns: tuple[RationalVector, ...]
    diameter: Fraction

    @classmethod
    def from_columns(cls, depth: int, columns) -> "MeasureCone":
        columns = tuple(tuple(c) for c in columns)
        diam = Fraction(0)
        for i in range(len(columns)):
            for j in range(i + 1, len(columns)):
                diam = max(diam, l1_distance(columns[i], columns[j]))
        return cls(depth, columns, diam)

    def box(self) -> Box:
        """Per-coordinate min/max hull of the columns."""
        d = len(self.columns[0])
        return tuple(
            (min(c[i] for c in self.columns), max(c[i] for c in self.columns))
            for i in range(d)
        )


def _gate(ds: DirectiveSequence, *, need_proper: bool) -> None:
    cert = certify(ds)
    if not cert.primitive:
        raise ValueError("measure cone needs a certified primitive sequence")
    if not cert.unimodular:
        raise ValueError("measure cone needs a certified unimodular sequence")
    if need_proper and cert.left_proper_window is None:
        raise ValueError(
            "ergodicity probe needs a sequence telescopable to a proper one "
            "(no left-proper window found)"
        )


def cone_at(ds: DirectiveSequence, depth: int) -> MeasureCone:
    """Normalized columns of the cumulative incidence matrix at this depth."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    _gate(ds, need_proper=False)
    if not ds.periodic and depth > ds.horizon:
        raise ValueError(f"depth {depth} beyond declared horizon {ds.horizon}")
    m = ds.cumulative_matrix(depth)
    sums = m.column_sums()
    columns = [
        tuple(Fraction(m[i, j], sums[j]) for i in range(m.nrows))
        for j in range(m.ncols)
    ]
    return MeasureCone.from_columns(depth, columns)


def cone_sweep(ds: DirectiveSequence, max_depth: int) -> list[MeasureCone]:
    return [cone_at(ds, n) for n in range(1, max_depth + 1)]


def _solve_exact(a_cols, b_cols):
    """Solve A X = B columnwise in exact rationals; A given by columns."""
    d = len(a_cols)
    rows = [[Fraction(a_cols[j][i]) for j in range(d)] for i in range(d)]
    rhs = [[Fraction(b_cols[j][i]) for j in range(len(b_cols))] for i in range(d)]
    for c in range(d):
        p = next((r for r in range(c, d) if rows[r][c] != 0), None)
        if p is None:
            raise ValueError("cone columns are linearly dependent")
        rows[c], rows[p] = rows[p], rows[c]
        rhs[c], rhs[p] = rhs[p], rhs[c]
        inv = 1 / rows[c][c]
        rows[c] = [v * inv for v in rows[c]]
        rhs[c] = [v * inv for v in rhs[c]]
        for r in range(d):
            if r != c and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [v - f * w for v, w in zip(rows[r], rows[c])]
                rhs[r] = [v - f * w for v, w in zip(rhs[r], rhs[c])]
    return tuple(tuple(rhs[i][j] for j in range(len(b_cols))) for i in range(d))


def nesting_coefficients(ds: DirectiveSequence, depth: int):
    """Convex weights writing the depth+1 cone columns in the depth columns.

    Solves the exact linear system between the two normalized column
    families; weights[i][j] is the coefficient of old column i in new
    column j.  All weights non-negative with unit column sums certifies
    that the deeper cone nests inside the shallower one.
    """
    older = cone_at(ds, depth)
    newer = cone_at(ds, depth + 1)
    return _solve_exact(older.columns, newer.columns)


def _single_linkage(columns, threshold: Fraction) -> list[tuple[int, ...]]:
    """Partition column indices, merging any pair at L1 distance <= threshold."""
    n = len(columns)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if l1_distance(columns[i], columns[j]) <= threshold:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(tuple(g) for g in groups.values())


def _cluster_gap(columns, partition) -> Fraction | None:
    """Minimal L1 distance between columns in different parts."""
    gap = None
    for gi in range(len(partition)):
        for gj in range(gi + 1, len(partition)):
            for i in partition[gi]:
                for j in partition[gj]:
                    dist = l1_distance(columns[i], columns[j])
                    if gap is None or dist < gap:
                        gap = dist
    return gap


@dataclass(frozen=True)
class Cluster:
    members: tuple[int, ...]
    box: Box


@dataclass(frozen=True)
class ProbeReport:
    verdict: str  # "unique" | "multiple" | "inconclusive"
    alphabet: Alphabet
    max_depth: int
    eps: Fraction
    diameters: tuple[Fraction, ...]
    certified_depth: int | None = None
    enclosure: Box | None = None
    clusters: tuple[Cluster, ...] = ()
    cluster_gap: Fraction | None = None
    notes: tuple[str, ...] = ()


def ergodicity_probe(ds: DirectiveSequence, max_depth: int, eps) -> ProbeReport:
    """Sweep cones and classify the limit structure of invariant measures.

    "unique": the cone diameter fell below eps, giving a rigorous box
    around the single letter-measure vector.  "multiple": a fixed partition
    of the columns stayed separated by more than 4*eps over the last
    quarter of the sweep (an empirical reading, capped at d-1 clusters).
    Anything else is inconclusive.
    """
    if max_depth < 3:
        raise ValueError("max_depth must be >= 3")
    eps = parse_rational(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    _gate(ds, need_proper=True)
    if not ds.periodic and max_depth > ds.horizon:
        raise ValueError(f"max_depth {max_depth} beyond declared horizon {ds.horizon}")
    d = len(ds.alphabet)
    cones = cone_sweep(ds, max_depth)
    diameters = tuple(c.diameter for c in cones)

    if diameters[-1] < eps:
        certified = next(n for n, diam in enumerate(diameters, start=1) if diam < eps)
        return ProbeReport(
            "unique",
            ds.alphabet,
            max_depth,
            eps,
            diameters,
            certified_depth=certified,
            enclosure=cones[-1].box(),
        )

    tail = range(max_depth - max_depth // 4, max_depth + 1)
    partition = _single_linkage(cones[-1].columns, 2 * eps)
    persistent = 1 < len(partition)
    gap = None
    if persistent:
        for n in tail:
            cone = cones[n - 1]
            if _single_linkage(cone.columns, 2 * eps) != partition:
                persistent = False
                break
            this_gap = _cluster_gap(cone.columns, partition)
            if this_gap is None or this_gap <= 4 * eps:
                persistent = False
                break
            gap = this_gap if gap is None else min(gap, this_gap)
    notes: list[str] = []
    if persistent and len(partition) > d - 1:
        persistent = False
        notes.append(
            f"{len(partition)} separated clusters exceed the d-1 bound; "
            "treated as unresolved"
        )
    if persistent:
        final = cones[-1]
        clusters = tuple(
            Cluster(
                members=part,
                box=MeasureCone.from_columns(final.depth, [final.columns[i] for i in part]).box(),
            )
            for part in partition
        )
        return ProbeReport(
            "multiple",
            ds.alphabet,
            max_depth,
            eps,
            diameters,
            clusters=clusters,
            cluster_gap=gap,
            notes=(
                "cluster structure is an empirical limit-point reading, "
                "not a certificate",
            ),
        )
    notes.append("diameter never fell below eps and no stable cluster split emerged")
    return ProbeReport(
        "inconclusive",
        ds.alphabet,
        max_depth,
        eps,
        diameters,
        notes=tuple(notes),
    )


class ProbeNotUnique(ValueError):
    def __init__(self, report: ProbeReport):
        super().__init__(f"measure probe verdict was {report.verdict!r}, not 'unique'")
        self.report = report


def letter_measure_enclosure(
    ds: DirectiveSequence, max_depth: int, eps
) -> dict[str, tuple[Fraction, Fraction]]:
    """Per-letter exact interval enclosing the unique measure's letter values."""
    report = ergodicity_probe(ds, max_depth, eps)
    if report.verdict != "unique":
        raise ProbeNotUnique(report)
    assert report.enclosure is not None
    return {
        a: report.enclosure[i] for i, a in enumerate(ds.alphabet.letters)
    }
