"""Command-line front end: analyze, census, generate, verify.

Exit codes: 0 success, 1 verification failure, 2 input outside the
bound's hypotheses, 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import enum
import json
import sys
from collections import Counter
from dataclasses import asdict, dataclass, fields
from fractions import Fraction

import numpy as np

from . import __version__
from . import digraph as dg
from .census import CensusError, class_codes, compare_with_reference, decode, census_row
from .eig import CLUSTER_TOL, DEFAULT_TOL, EigenError
from .exact import is_normal_adjacency, is_normal_laplacian, normality_combinatorial
from .generators import (RNG_ALGORITHM, AbelianGroupSpec, cayley_abelian, complete_digraph,
                         directed_cycle, family_suite, random_connection_set, random_eulerian,
                         rng_for, rotational_tournament)
from .oracle import MAX_SCAN_ORDER, max_separation_lhs, run_suite
from .spectral import COMPARE_TOL, Status, separation_bound

EXIT_OK, EXIT_FAIL, EXIT_NOT_APPLICABLE, EXIT_USAGE = 0, 1, 2, 3
MAX_VERIFY_ORDER = 5
FAMILY_MAX_N = {"tournaments": 11, "cayley": 12, "random": 9}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# JSON ------------------------------------------------------------------------------

def to_jsonable(obj):
    """Plain JSON data: complex as {re, im}, Fraction as {num, den, value}."""
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator, "value": float(obj)}
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, dg.Separation):
        return {"Y": sorted(obj.Y), "Z": sorted(obj.Z)}
    if isinstance(obj, dg.Digraph):
        return {"n": obj.n, "arcs": [list(a) for a in obj.arcs]}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset, np.ndarray)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v) for v in items]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    # json writes floats with repr, the shortest string that reads back exactly
    return json.dumps(to_jsonable(obj), indent=2, allow_nan=False, ensure_ascii=False)


def tolerances(tol: float = DEFAULT_TOL) -> dict:
    return {"eigen": tol, "cluster": CLUSTER_TOL, "compare": COMPARE_TOL}


# analyze ---------------------------------------------------------------------------

@dataclass
class AnalysisDocument:
    """Everything ``analyze`` reports about one digraph, as JSON-ready data.

    spectrum, selection and rhs are None exactly when verdict is
    "not-applicable", and reason then says why.  lhs, witness and
    separations are None unless a brute-force scan was requested.
    """

    version: str
    tolerances: dict
    vertices: int
    arcs: int
    structure: dict
    normality: dict
    spectrum: list | None
    selection: dict | None
    rhs: float | None
    lhs: dict | None
    witness: dict | None
    separations: int | None
    verdict: str
    reason: str | None = None

    def to_json(self) -> str:
        return dumps(asdict(self))

    @classmethod
    def from_json(cls, text: str) -> "AnalysisDocument":
        data = json.loads(text)
        names = {f.name for f in fields(cls)}
        if set(data) != names:
            raise ValueError(f"unexpected fields {sorted(set(data) ^ names)}")
        return cls(**data)

    def to_text(self) -> str:
        lines = [f"vertices: {self.vertices}", f"arcs: {self.arcs}"]
        lines += [f"{k}: {v}" for k, v in self.structure.items()]
        lines += [f"normal {k}: {v}" for k, v in self.normality.items()]
        if self.spectrum is not None:
            for e in self.spectrum:
                im = f"{'+-' if e['conjugate_pair'] else '+'}{abs(e['im']):.12g}i"
                lines.append(f"eigenvalue: {e['re']:.12g} {im}  x{e['multiplicity']}")
        if self.selection is not None:
            s = self.selection
            lines.append(f"branch: {s['branch']}")
            for key in ("theta", "nu", "mu"):
                lines.append(f"{key}: {s[key]['re']:.12g} {s[key]['im']:+.12g}i")
            lines.append(f"alpha: {s['alpha']:.17g}")
            lines.append(f"rhs: {self.rhs:.17g}")
        if self.lhs is not None:
            lines.append(f"lhs: {self.lhs['num']}/{self.lhs['den']}")
            lines.append(f"separations: {self.separations}")
            if self.witness is not None:
                lines.append(f"witness: Y={self.witness['Y']} Z={self.witness['Z']}")
        lines.append(f"verdict: {self.verdict}")
        if self.reason:
            lines.append(f"reason: {self.reason}")
        return "\n".join(lines)


def analyze(g: dg.Digraph, brute_force: bool = False, tol: float = DEFAULT_TOL) -> AnalysisDocument:
    lap_normal = is_normal_laplacian(g)
    comb = normality_combinatorial(g)
    structure = {
        "eulerian": dg.is_eulerian(g),
        "balanced": dg.is_balanced(g),
        "connected": dg.is_weakly_connected(g),
        "strongly_connected": dg.is_strongly_connected(g),
        "undirected": dg.is_undirected(g),
        "regular": dg.is_regular(g),
    }
    normality = {
        "laplacian": lap_normal,
        "adjacency": is_normal_adjacency(g),
        "combinatorial": comb,
        "criterion_agrees": comb == lap_normal,
    }
    lhs = witness = count = None
    if brute_force:
        if g.n > MAX_SCAN_ORDER:
            raise UsageError(f"--brute-force is limited to n <= {MAX_SCAN_ORDER}")
        scan = max_separation_lhs(g)
        lhs, witness, count = scan.best_lhs, scan.witness, scan.count
    report = separation_bound(g, lhs, tol=tol)
    spectrum = selection = None
    if report.spectrum is not None:
        # a conjugate pair is listed once, by the member with positive imaginary part
        spectrum = [{"re": e.re, "im": e.im, "multiplicity": e.multiplicity,
                     "conjugate_pair": e.conjugate_pair}
                    for e in report.spectrum.entries()]
        selection = to_jsonable(asdict(report.selection))
    return AnalysisDocument(
        version=__version__,
        tolerances=tolerances(tol),
        vertices=g.n,
        arcs=g.num_arcs,
        structure=structure,
        normality=normality,
        spectrum=spectrum,
        selection=selection,
        rhs=report.rhs,
        lhs=to_jsonable(lhs),
        witness=to_jsonable(witness),
        separations=count,
        verdict=report.status.value,
        reason=report.reason,
    )


def cmd_analyze(args) -> int:
    try:
        with open(args.path, encoding="utf-8") as fh:
            g = dg.parse_text(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {args.path}: {exc.strerror}") from exc
    doc = analyze(g, args.brute_force, args.tol)
    print(doc.to_text() if args.text else doc.to_json())
    if doc.verdict == Status.NOT_APPLICABLE.value:
        return EXIT_NOT_APPLICABLE
    return EXIT_OK if doc.verdict == Status.HOLDS.value else EXIT_FAIL


# census ----------------------------------------------------------------------------

def cmd_census(args) -> int:
    if not 2 <= args.order <= 6:
        raise UsageError("--order must be between 2 and 6")
    row = census_row(args.order, long=args.long, shards=args.shards, jobs=args.jobs)
    doc = {
        "version": __version__,
        "mode": "long" if args.long else "balanced",
        "skipped": [] if row.digraphs is not None else ["digraphs"],
        "row": row.to_dict(),
        "comparison": compare_with_reference(row),
    }
    print(dumps(doc))
    return EXIT_OK


# generate --------------------------------------------------------------------------

def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def cmd_generate(args) -> int:
    kind = args.kind
    if kind == "cayley":
        if args.conn:
            conn = [tuple(c) for c in args.conn]
        else:
            conn = random_connection_set(args.orders, rng_for(args.seed))
        g = cayley_abelian(AbelianGroupSpec(tuple(args.orders), tuple(conn)))
    elif kind == "tournament":
        g = rotational_tournament(args.n, args.set)
    elif kind == "random":
        g = random_eulerian(args.n, args.cycles, args.seed)
    elif kind == "cycle":
        g = directed_cycle(args.n)
    else:
        g = complete_digraph(args.n)
    sys.stdout.write(dg.format_text(g))
    return EXIT_OK


# verify ----------------------------------------------------------------------------

def _universe(args):
    if args.order is not None:
        if not 1 <= args.order <= MAX_VERIFY_ORDER:
            raise UsageError(f"--order must be between 1 and {MAX_VERIFY_ORDER}")
        for code in class_codes(args.order):
            yield f"class n={args.order} code={int(code)}", decode(int(code), args.order)
        return
    max_n = args.max_n if args.max_n is not None else FAMILY_MAX_N[args.family]
    yield from family_suite(args.family, max_n, rng_for(args.seed), args.count)


def cmd_verify(args) -> int:
    rng = rng_for(args.seed)
    tally: Counter = Counter()
    failures = []
    checked = 0
    for label, g in _universe(args):
        checked += 1
        for v in run_suite(g, rng, random_alphas=args.alphas, invert_bound=args.inject_fault):
            tally[(v.check, v.status.value)] += 1
            if v.status is Status.VIOLATED:
                failures.append({"digraph": label, "graph": g, "check": v.check, "details": v.details})
    summary: dict[str, dict[str, int]] = {}
    for (check, status), k in sorted(tally.items()):
        summary.setdefault(check, {})[status] = k
    doc = {
        "version": __version__,
        "universe": f"order {args.order}" if args.order is not None else args.family,
        "seed": args.seed,
        "rng": RNG_ALGORITHM,
        "tolerances": tolerances(),
        "checked": checked,
        "summary": summary,
        "failures": failures,
    }
    print(dumps(doc))
    return EXIT_FAIL if failures else EXIT_OK


# parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="normlap", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="spectrum, alpha and bound for one digraph file")
    a.add_argument("path")
    a.add_argument("--brute-force", action="store_true",
                   help=f"also scan every separation (n <= {MAX_SCAN_ORDER})")
    a.add_argument("--tol", type=float, default=DEFAULT_TOL, help="eigensolver tolerance")
    out = a.add_mutually_exclusive_group()
    out.add_argument("--json", dest="text", action="store_false", help="JSON output (default)")
    out.add_argument("--text", dest="text", action="store_true", help="plain text output")
    a.set_defaults(func=cmd_analyze, text=False)

    c = sub.add_parser("census", help="class counts for one order with the reference comparison")
    c.add_argument("--order", type=int, required=True)
    c.add_argument("--long", action="store_true", help="also count every class at n = 6")
    c.add_argument("--shards", type=int, default=1)
    c.add_argument("--jobs", type=int, default=1)
    c.set_defaults(func=cmd_census)

    g = sub.add_parser("generate", help="write a witness digraph in the text format")
    gk = g.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    cay = gk.add_parser("cayley", help="Cayley digraph of Z_n1 x ... x Z_nk")
    cay.add_argument("--orders", type=_int_list, required=True, help="e.g. 2,4")
    cay.add_argument("--conn", type=_int_list, action="append",
                     help="connection element, repeatable; random when omitted")
    cay.add_argument("--seed", type=int, default=0)
    tour = gk.add_parser("tournament", help="rotational tournament on Z_n")
    tour.add_argument("--n", type=int, required=True)
    tour.add_argument("--set", type=_int_list, required=True, help="e.g. 1,2")
    rnd = gk.add_parser("random", help="union of random arc-disjoint cycles")
    rnd.add_argument("--n", type=int, required=True)
    rnd.add_argument("--cycles", type=int, required=True)
    rnd.add_argument("--seed", type=int, default=0)
    for kind in ("cycle", "complete"):
        k = gk.add_parser(kind)
        k.add_argument("--n", type=int, required=True)
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("verify", help="run every check over a universe of digraphs")
    which = v.add_mutually_exclusive_group(required=True)
    which.add_argument("--order", type=int, help=f"every class of this order (<= {MAX_VERIFY_ORDER})")
    which.add_argument("--family", choices=sorted(FAMILY_MAX_N))
    v.add_argument("--max-n", type=int)
    v.add_argument("--count", type=int, default=20, help="samples per group or random digraphs")
    v.add_argument("--alphas", type=int, default=3, help="random alpha values per digraph")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except dg.ParseError as exc:
        print(f"normlap: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, CensusError, dg.DigraphError, ValueError) as exc:
        print(f"normlap: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EigenError as exc:
        print(f"normlap: numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
