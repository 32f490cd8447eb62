"""Command line front end emitting deterministic JSON reports.

Numeric values appear twice: an exact fraction or surd payload and a
decimal rendering computed with integer arithmetic only.  Repeated runs
of the same command produce byte-identical output; nothing in a payload
depends on time, environment, or dict iteration order.

Exit codes: 0 success or positive verdict, 1 negative verdict for
check-style commands, 2 input error, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from math import isqrt

from . import __version__, families
from .balance import balance_dashboard
from .dimgroup import (
    DimensionGroupDescriptor,
    ExactMeasure,
    cone_membership,
    descriptor,
    descriptor_from_measures,
    image_subgroup_generators,
    infinitesimal_lattice,
    matrix_inverse_unimodular,
    soe_test,
)
from .directive import DirectiveSequence, _exact_from_json, certify
from .errors import Inconclusive
from .language import (
    build_language,
    complexity,
    extension_graph,
    free_basis_check,
    is_dendric,
    return_words,
)
from .measures import ergodicity_probe, parse_rational
from .quadratic import Quad
from .words import Alphabet

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_INCONCLUSIVE = 3

_PLACES = 12


def _decimal_of_fraction(x: Fraction, places: int = _PLACES) -> str:
    sign = "-" if x < 0 else ""
    x = -x if x < 0 else x
    scaled = (x.numerator * 10**places * 2 + x.denominator) // (2 * x.denominator)
    whole, frac = divmod(scaled, 10**places)
    return f"{sign}{whole}.{str(frac).zfill(places)}"


def _decimal_of_quad(q: Quad, places: int = _PLACES) -> str:
    # floor(sqrt(d) * 10^extra) is off by < 10^-extra, far below the
    # rounding place; surds are irrational so no rounding ties arise
    extra = places + 8
    root = isqrt(q.d * 10 ** (2 * extra))
    approx = Fraction(q.a) + Fraction(q.b) * Fraction(root, 10**extra)
    return _decimal_of_fraction(approx, places)


def render(v):
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, float):
        return f"{v:.6f}"
    if isinstance(v, Fraction):
        return {"exact": str(v), "decimal": _decimal_of_fraction(v)}
    if isinstance(v, Quad):
        return {
            "exact": {"a": str(v.a), "b": str(v.b), "d": v.d},
            "decimal": _decimal_of_quad(v),
        }
    if isinstance(v, dict):
        return {str(k): render(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [render(x) for x in v]
    raise TypeError(f"cannot render {type(v).__name__}")


def emit(data, pretty: bool) -> None:
    payload = render(data)
    if pretty:
        text = json.dumps(payload, sort_keys=True, indent=2)
    else:
        text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    print(text)


class UsageError(Exception):
    pass


def _check_threads() -> None:
    raw = os.environ.get("SADIC_THREADS")
    if raw is None:
        return
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"SADIC_THREADS must be a positive integer, got {raw!r}")
    if value < 1:
        raise UsageError(f"SADIC_THREADS must be >= 1, got {value}")
    # caps parallelism only; this implementation is single-threaded, so
    # any valid value leaves output unchanged


def load_ds(token: str) -> DirectiveSequence:
    if os.path.exists(token):
        with open(token) as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise UsageError(f"{token}: not valid JSON ({exc})")
        return DirectiveSequence.from_json(data)
    if token.endswith(".json"):
        raise UsageError(f"file {token!r} not found")
    return families.builtin(token)


def _measure_payload(m) -> dict:
    if isinstance(m, ExactMeasure):
        return {"type": "exact", "values": list(m.values)}
    return {"type": "box", "intervals": [[lo, hi] for lo, hi in m.intervals]}


def load_descriptor(token: str) -> DimensionGroupDescriptor:
    """Descriptor from a builtin name, a directive sequence file, or a
    descriptor file {"alphabet": [...], "measures": [{"exact": [...]} |
    {"box": [[lo, hi], ...]}]}."""
    if not os.path.exists(token):
        if token.endswith(".json"):
            raise UsageError(f"file {token!r} not found")
        return descriptor(families.builtin(token))
    with open(token) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{token}: not valid JSON ({exc})")
    if "measures" in data:
        alphabet = Alphabet(data["alphabet"])
        packed = []
        for m in data["measures"]:
            if "exact" in m:
                packed.append(tuple(_exact_from_json(v) for v in m["exact"]))
            elif "box" in m:
                packed.append(
                    tuple(
                        (parse_rational(lo), parse_rational(hi))
                        for lo, hi in m["box"]
                    )
                )
            else:
                raise UsageError(f"{token}: measure needs 'exact' or 'box'")
        name = os.path.basename(token)
        return descriptor_from_measures(alphabet, packed, provenance=f"file {name}")
    return descriptor(DirectiveSequence.from_json(data))


# -- subcommands --------------------------------------------------------


def cmd_family(args) -> int:
    ds = load_ds(args.name)
    emit(ds.to_json(), args.pretty)
    return EXIT_OK


def cmd_certify(args) -> int:
    ds = load_ds(args.ds)
    cert = certify(ds)
    data = {
        "name": ds.meta.get("name"),
        "alphabet": list(ds.alphabet.letters),
        "primitive": cert.primitive,
        "primitive_window": list(cert.primitive_window)
        if cert.primitive_window
        else None,
        "obstruction": cert.obstruction,
        "unimodular": cert.unimodular,
        "left_proper": cert.left_proper,
        "right_proper": cert.right_proper,
        "proper": cert.proper,
        "left_proper_window": cert.left_proper_window,
        "properizable": cert.properizable,
        "growth": [cert.growth_min, cert.growth_max],
        "truncated": cert.truncated,
        "notes": list(cert.notes),
    }
    emit(data, args.pretty)
    return EXIT_OK if cert.primitive else EXIT_NEGATIVE


def cmd_language(args) -> int:
    ds = load_ds(args.ds)
    lang = build_language(ds, max_len=args.max_len)
    data = {
        "name": ds.meta.get("name"),
        "max_len": args.max_len,
        "complexity": [complexity(lang, n) for n in range(args.max_len + 1)],
        "texts": len(lang.texts),
    }
    emit(data, args.pretty)
    return EXIT_OK


def cmd_dendric(args) -> int:
    ds = load_ds(args.ds)
    lang = build_language(ds, max_len=args.max_len + 2)
    verdict = is_dendric(lang, args.max_len)
    data = {
        "name": ds.meta.get("name"),
        "dendric": verdict.dendric,
        "checked_up_to": verdict.checked_up_to,
        "witness": verdict.witness,
    }
    emit(data, args.pretty)
    return EXIT_OK if verdict.dendric else EXIT_NEGATIVE


def cmd_returns(args) -> int:
    ds = load_ds(args.ds)
    words = return_words(ds, args.word)
    basis = free_basis_check(words, ds.alphabet)
    data = {
        "name": ds.meta.get("name"),
        "word": args.word,
        "return_words": list(words),
        "count": len(words),
        "free_basis": basis.basis,
        "abelian_det": basis.abelian_det,
        "note": basis.note,
    }
    emit(data, args.pretty)
    return EXIT_OK if basis.basis else EXIT_NEGATIVE


def cmd_measures(args) -> int:
    ds = load_ds(args.ds)
    depth = args.depth
    if not ds.periodic:
        depth = min(depth, ds.horizon)
    report = ergodicity_probe(ds, depth, args.eps)
    data = {
        "name": ds.meta.get("name"),
        "verdict": report.verdict,
        "max_depth": report.max_depth,
        "eps": report.eps,
        "certified_depth": report.certified_depth,
        "final_diameter": report.diameters[-1] if report.diameters else None,
        "enclosure": {
            a: [report.enclosure[i][0], report.enclosure[i][1]]
            for i, a in enumerate(ds.alphabet.letters)
        }
        if report.enclosure
        else None,
        "clusters": [
            {"members": list(c.members), "box": [[lo, hi] for lo, hi in c.box]}
            for c in report.clusters
        ],
        "cluster_gap": report.cluster_gap,
        "notes": list(report.notes),
    }
    emit(data, args.pretty)
    return EXIT_OK if report.verdict != "inconclusive" else EXIT_INCONCLUSIVE


def cmd_dimgroup(args) -> int:
    ds = load_ds(args.ds)
    D = descriptor(ds, max_depth=args.depth, eps=args.eps)
    data = {
        "name": ds.meta.get("name"),
        "alphabet": list(D.alphabet.letters),
        "provenance": D.provenance,
        "unit": list(D.unit),
        "measures": [_measure_payload(m) for m in D.measures],
    }
    try:
        lattice = infinitesimal_lattice(D)
        data["infinitesimal_lattice"] = {
            "basis": [list(row) for row in lattice.basis],
            "rank": lattice.rank,
            "method": lattice.method,
            "notes": list(lattice.notes),
        }
    except Inconclusive as exc:
        data["infinitesimal_lattice"] = {"status": "inconclusive", "reason": str(exc)}
    generators = image_subgroup_generators(D)
    data["image_subgroup"] = {
        "per_measure": [list(g) for g in generators.per_measure],
        "unique": generators.unique,
        "note": generators.note,
    }
    if args.cone:
        try:
            vector = tuple(int(x) for x in args.cone.split(","))
        except ValueError:
            raise UsageError(f"--cone wants comma-separated integers, got {args.cone!r}")
        data["cone"] = {
            "vector": list(vector),
            "membership": cone_membership(D, vector),
        }
    emit(data, args.pretty)
    return EXIT_OK


def cmd_soe(args) -> int:
    left = load_descriptor(args.left)
    right = load_descriptor(args.right)
    result = soe_test(left, right, entry_bound=args.bound)
    data = {
        "left": left.provenance,
        "right": right.provenance,
        "entry_bound": args.bound,
        "status": result.status,
        "matrix": [list(r) for r in result.matrix] if result.matrix else None,
        "note": result.note,
    }
    if result.matrix:
        data["inverse"] = [list(r) for r in matrix_inverse_unimodular(result.matrix)]
    emit(data, args.pretty)
    if result.status == "witness":
        return EXIT_OK
    if result.status == "not_soe":
        return EXIT_NEGATIVE
    return EXIT_INCONCLUSIVE


def _profile_payload(p) -> dict:
    return {
        "target": p.target,
        "values": list(p.values),
        "classification": p.classification,
        "bound": p.bound,
        "linear_slope": p.linear_slope,
        "log_slope": p.log_slope,
        "witness": list(p.witness) if p.witness else None,
    }


def cmd_balance(args) -> int:
    ds = load_ds(args.ds)
    factors = tuple(f for f in args.factors.split(",") if f) if args.factors else ()
    report = balance_dashboard(ds, max_n=args.max_n, factors=factors)
    data = {
        "name": ds.meta.get("name"),
        "alphabet": list(report.alphabet),
        "probed_to": report.probed_to,
        "letter_profiles": [_profile_payload(p) for p in report.letter_profiles],
        "factor_profiles": [_profile_payload(p) for p in report.factor_profiles],
        "frequency_rank": report.frequency_rank,
        "rank_method": report.rank_method,
        "aperiodic": report.aperiodic,
        "letters_verdict": report.letters_verdict,
        "factors_verdict": report.factors_verdict,
        "notes": list(report.notes),
    }
    emit(data, args.pretty)
    if report.letters_verdict.startswith("not balanced"):
        return EXIT_NEGATIVE
    if report.letters_verdict == "inconclusive":
        return EXIT_INCONCLUSIVE
    return EXIT_OK


# -- reproduce targets --------------------------------------------------


def _reproduce_fig1(pretty: bool) -> int:
    ds = families.fibonacci()
    lang = build_language(ds, max_len=52)
    expected = {
        "": {("a", "a"), ("a", "b"), ("b", "a")},
        "a": {("a", "b"), ("b", "a"), ("b", "b")},
        "b": {("a", "a")},
    }
    graphs = {}
    checks = {}
    for w, want in expected.items():
        g = extension_graph(lang, w)
        graphs[w or "epsilon"] = sorted([a, b] for a, b in g.edges)
        checks[f"edges({w or 'epsilon'})"] = set(g.edges) == want
        checks[f"tree({w or 'epsilon'})"] = g.is_tree()
    checks["fibonacci_dendric_50"] = is_dendric(lang, 50).dendric
    trib = build_language(families.tribonacci(), max_len=52)
    checks["tribonacci_dendric_50"] = is_dendric(trib, 50).dendric
    ok = all(checks.values())
    emit({"target": "fig1", "graphs": graphs, "checks": checks, "ok": ok}, pretty)
    return EXIT_OK if ok else EXIT_NEGATIVE


def _reproduce_ex63(pretty: bool) -> int:
    D = descriptor(families.iet3_ex63())
    mu = D.measures[0].values
    lattice = infinitesimal_lattice(D)
    checks = {
        "equal_measures_2_3": mu[1] == mu[2],
        "lattice_is_0_1_minus1": lattice.basis == ((0, 1, -1),),
        "membership_zero": cone_membership(D, (0, 1, -1)) == "zero",
    }
    ok = all(checks.values())
    emit(
        {
            "target": "ex6.3",
            "measure": list(mu),
            "lattice_basis": [list(r) for r in lattice.basis],
            "method": lattice.method,
            "checks": checks,
            "ok": ok,
        },
        pretty,
    )
    return EXIT_OK if ok else EXIT_NEGATIVE


def _reproduce_ex64(pretty: bool) -> int:
    # the three-letter exchange carries the same measure vector as the
    # Tribonacci system, so its descriptor is rebuilt from that box
    trib = descriptor(families.tribonacci())
    box = [list(iv) for m in trib.measures for iv in m.intervals]
    other = descriptor_from_measures(
        trib.alphabet,
        [tuple((lo, hi) for lo, hi in box)],
        provenance="exchange descriptor with the Tribonacci measure box",
    )
    result = soe_test(trib, other)
    identity = tuple(
        tuple(1 if i == j else 0 for j in range(trib.d)) for i in range(trib.d)
    )
    checks = {
        "witness_found": result.status == "witness",
        "witness_is_identity": result.matrix == identity,
        "unit_preserved": result.matrix is not None
        and all(sum(row) == 1 for row in result.matrix),
    }
    ok = all(checks.values())
    emit(
        {
            "target": "ex6.4",
            "status": result.status,
            "matrix": [list(r) for r in result.matrix] if result.matrix else None,
            "checks": checks,
            "ok": ok,
        },
        pretty,
    )
    return EXIT_OK if ok else EXIT_NEGATIVE


def _reproduce_ex65(pretty: bool) -> int:
    ds = families.sec65()
    horizon = ds.horizon
    cols = {0: (1, 0, 0), -1: (0, 1, 0), -2: (0, 0, 1)}
    for n in range(1, horizon + 1):
        cols[n] = ds.cumulative_matrix(n).col(0)
    recurrence = all(
        cols[n]
        == tuple(
            families.sec65_parameter(n) * x + y
            for x, y in zip(cols[n - 2], cols[n - 3])
        )
        for n in range(1, horizon + 1)
    )
    contraction = all(
        Fraction(sum(cols[n - 3]), sum(cols[n]))
        <= Fraction(1, families.sec65_parameter(n))
        for n in range(1, horizon + 1)
    )
    report = ergodicity_probe(ds, horizon, "1/100")
    def normalized(n):
        s = sum(cols[n])
        return tuple(Fraction(x, s) for x in cols[n])
    alpha = normalized(horizon - 1)
    beta = normalized(horizon)
    gap = sum(abs(a - b) for a, b in zip(alpha, beta))
    bound = 2 - 2 * sum(
        Fraction(1, families.sec65_parameter(k)) for k in range(1, horizon + 1)
    )
    checks = {
        "column_recurrence": recurrence,
        "contraction_bound": contraction,
        "two_clusters": report.verdict == "multiple" and len(report.clusters) == 2,
        "l1_gap_at_least_bound": gap >= bound,
        "bound_at_least_one": bound >= 1,
    }
    ok = all(checks.values())
    emit(
        {
            "target": "ex6.5",
            "horizon": horizon,
            "verdict": report.verdict,
            "clusters": [list(c.members) for c in report.clusters],
            "l1_gap": gap,
            "gap_bound": bound,
            "checks": checks,
            "ok": ok,
        },
        pretty,
    )
    return EXIT_OK if ok else EXIT_NEGATIVE


def _reproduce_sec5(pretty: bool) -> int:
    report = balance_dashboard(families.thue_morse_conjugate(), max_n=500)
    growing = [
        p for p in report.letter_profiles if p.classification == "growing"
    ]
    checks = {
        "not_balanced_on_letters": report.letters_verdict.startswith(
            "not balanced on letters"
        ),
        "growing_letter_profile": bool(growing),
        "witness_pair_present": bool(growing) and growing[0].witness is not None,
    }
    ok = all(checks.values())
    emit(
        {
            "target": "sec5",
            "letters_verdict": report.letters_verdict,
            "growing_letters": [p.target for p in growing],
            "witness_lengths": [len(w) for w in growing[0].witness]
            if growing and growing[0].witness
            else None,
            "frequency_rank": report.frequency_rank,
            "checks": checks,
            "ok": ok,
        },
        pretty,
    )
    return EXIT_OK if ok else EXIT_NEGATIVE


_TARGETS = {
    "fig1": _reproduce_fig1,
    "ex6.3": _reproduce_ex63,
    "ex6.4": _reproduce_ex64,
    "ex6.5": _reproduce_ex65,
    "sec5": _reproduce_sec5,
}


def cmd_reproduce(args) -> int:
    return _TARGETS[args.target](args.pretty)


# -- parser -------------------------------------------------------------


def _add_output_flags(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group()
    group.add_argument(
        "--json", action="store_true", help="compact JSON output (default)"
    )
    group.add_argument(
        "--pretty", action="store_true", help="indented JSON output"
    )
    p.add_argument(
        "--exact-field",
        choices=["sqrt5"],
        default="sqrt5",
        help="quadratic field used for exact surd coordinates",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sadic",
        description="exact certificates and invariants for substitution subshifts",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("family", help="print a built-in directive sequence as JSON")
    p.add_argument("name", help="builtin token, e.g. fibonacci or brun:12,23,31")
    _add_output_flags(p)
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("certify", help="primitivity and properness certificate")
    p.add_argument("--ds", required=True, help="builtin name or JSON file")
    _add_output_flags(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("language", help="factor complexity table")
    p.add_argument("--ds", required=True)
    p.add_argument("--max-len", type=int, default=20)
    _add_output_flags(p)
    p.set_defaults(func=cmd_language)

    p = sub.add_parser("dendric", help="extension graph tree test")
    p.add_argument("--ds", required=True)
    p.add_argument("--max-len", type=int, default=20)
    _add_output_flags(p)
    p.set_defaults(func=cmd_dendric)

    p = sub.add_parser("returns", help="return words and free basis check")
    p.add_argument("--ds", required=True)
    p.add_argument("--word", required=True)
    _add_output_flags(p)
    p.set_defaults(func=cmd_returns)

    p = sub.add_parser("measures", help="letter measure probe")
    p.add_argument("--ds", required=True)
    p.add_argument("--depth", type=int, default=60)
    p.add_argument("--eps", default="1/1000000")
    _add_output_flags(p)
    p.set_defaults(func=cmd_measures)

    p = sub.add_parser("dimgroup", help="ordered group descriptor")
    p.add_argument("--ds", required=True)
    p.add_argument("--depth", type=int, default=80)
    p.add_argument("--eps", default="1e-12")
    p.add_argument("--cone", help="comma-separated integer vector to test")
    _add_output_flags(p)
    p.set_defaults(func=cmd_dimgroup)

    p = sub.add_parser("soe", help="strong orbit equivalence witness search")
    p.add_argument("--left", required=True, help="builtin or JSON file")
    p.add_argument("--right", required=True, help="builtin or JSON file")
    p.add_argument("--bound", type=int, default=3)
    _add_output_flags(p)
    p.set_defaults(func=cmd_soe)

    p = sub.add_parser("balance", help="discrepancy profiles and verdicts")
    p.add_argument("--ds", required=True)
    p.add_argument("--max-n", type=int, default=300)
    p.add_argument("--factors", help="comma-separated factors to spot-check")
    _add_output_flags(p)
    p.set_defaults(func=cmd_balance)

    p = sub.add_parser("reproduce", help="run a frozen report")
    p.add_argument("target", choices=sorted(_TARGETS))
    _add_output_flags(p)
    p.set_defaults(func=cmd_reproduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _check_threads()
        return args.func(args)
    except UsageError as exc:
        print(f"sadic: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, OSError, KeyError) as exc:
        print(f"sadic: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Inconclusive as exc:
        print(f"sadic: inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
