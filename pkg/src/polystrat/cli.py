"""Command-line interface: reproducible analysis, homology, and harness runs.

Commands: analyze, ih, harness, example32, selftest.  All randomness flows
from --seed (default 0); identical inputs and seed produce byte-identical
JSON reports.  Text reports end with a machine-readable trailer recording
the version and seed.

Exit codes: 0 success (harness: consistent), 1 malformed input, 2 analysis
or complex error, 3 harness inconsistency.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import __version__
from .asymptotics import (AnalysisError, analyze_map, load_map_file)
from .complexes import ComplexError, FilteredComplex, barycentric_subdivision
from .ih import IHError, duality_check, homology, ih_betti, invariance_check
from .nf_models import ModelError, builtin_example, equivalence_harness
from .polynomials import PolyError
from .strata import (Perversity, PerversityError, make_perversity,
                     standard_perversities)

EXIT_OK = 0
EXIT_BAD_INPUT = 1
EXIT_ANALYSIS = 2
EXIT_INCONSISTENT = 3


def _trailer(args) -> str:
    return f"# polystrat {__version__} seed={args.seed}"


def _emit(args, text_lines: List[str], doc: dict) -> None:
    if args.format == "json":
        doc = dict(doc)
        doc["seed"] = args.seed
        doc["version"] = __version__
        sys.stdout.write(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    else:
        for line in text_lines:
            sys.stdout.write(line + "\n")
        sys.stdout.write(_trailer(args) + "\n")


def _parse_perversities(specs: Optional[List[str]], m: int) -> List[Perversity]:
    if not specs:
        return standard_perversities(m)
    out: List[Perversity] = []
    for s in specs:
        if s.startswith("custom:"):
            values = [int(v) for v in s[len("custom:"):].split(",") if v]
            out.append(make_perversity("custom", m, values))
        else:
            out.append(make_perversity(s, m))
    return out


def cmd_analyze(args) -> int:
    try:
        F = load_map_file(args.mapfile)
    except (OSError, PolyError, AnalysisError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BAD_INPUT
    try:
        analysis = analyze_map(F, seed=args.seed)
    except (AnalysisError, PolyError) as exc:
        sys.stderr.write(f"analysis error: {exc}\n")
        return EXIT_ANALYSIS
    lines = [
        f"map: F = ({', '.join(str(c) for c in F.components)})",
        f"singular locus: {analysis.singular.describe()}",
        f"critical values: {analysis.critical.describe()}",
        f"non-properness set (complex): {analysis.jelonek_complex.describe()}",
    ]
    if analysis.jelonek_real is not None:
        lines.append(
            f"non-properness set (real):  {analysis.jelonek_real.describe()}")
    lines.append(
        f"leading rank: {analysis.leading_rank.rank} "
        f"(> n-2: {analysis.leading_rank.condition_holds})")
    lines.append(f"properness: {analysis.properness.verdict}")
    if analysis.properness.witness is not None:
        lines.append(f"witness arc: {analysis.properness.witness.describe()}")
    if analysis.properness.note:
        lines.append(f"note: {analysis.properness.note}")
    _emit(args, lines, analysis.to_json())
    return EXIT_OK


def cmd_ih(args) -> int:
    try:
        K = FilteredComplex.load(args.complexfile)
    except (OSError, ComplexError, KeyError, ValueError) as exc:
        sys.stderr.write(f"error: malformed complex file: {exc}\n")
        return EXIT_BAD_INPUT
    try:
        K.validate()
    except ComplexError as exc:
        sys.stderr.write(f"error: invalid complex: {exc}\n")
        return EXIT_ANALYSIS
    for _ in range(args.subdivide):
        try:
            K = barycentric_subdivision(K)
        except ComplexError as exc:
            sys.stderr.write(
                f"error: cannot subdivide (no simplicial structure): {exc}\n")
            return EXIT_ANALYSIS
    try:
        perversities = _parse_perversities(args.perversity, K.dim)
    except PerversityError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BAD_INPUT
    lines = [f"complex: dimension {K.dim}, cells "
             f"{[K.n_cells(d) for d in range(K.dim + 1)]}"]
    doc: dict = {"dimension": K.dim,
                 "cells": [K.n_cells(d) for d in range(K.dim + 1)]}
    h = homology(K)
    lines.append(f"ordinary H: {list(h.betti)}")
    doc["homology"] = list(h.betti)
    doc["ih"] = {}
    for p in perversities:
        try:
            res = ih_betti(K, p, args.variant)
        except IHError as exc:
            sys.stderr.write(f"error: {exc}\n")
            return EXIT_ANALYSIS
        lines.append(f"IH^{p.name()} [{args.variant}]: {list(res.betti)}")
        doc["ih"][p.name()] = list(res.betti)
    if args.duality:
        doc["duality"] = {}
        lines.append("duality checks:")
        for p in perversities:
            q = p.complement()
            try:
                rep = duality_check(K, p, q)
            except IHError as exc:
                lines.append(f"  {p.name()} vs {q.name()}: refused ({exc})")
                doc["duality"][p.name()] = f"refused: {exc}"
                continue
            lines.append(
                f"  {p.name()} vs {q.name()}: "
                f"{'PASS' if rep.passed else 'FAIL'}")
            doc["duality"][p.name()] = "PASS" if rep.passed else "FAIL"
        # ordinary-homology palindrome for contrast
        pal = all(h.betti[k] == h.betti[K.dim - k] for k in range(K.dim + 1))
        lines.append(f"  ordinary palindrome: {'PASS' if pal else 'FAIL'}")
        doc["duality"]["ordinary-palindrome"] = "PASS" if pal else "FAIL"
    if args.invariance:
        doc["invariance"] = {}
        lines.append("invariance checks (one subdivision):")
        for p in perversities:
            rep = invariance_check(K, p)
            lines.append(
                f"  {p.name()}: {'PASS' if rep.passed else 'FAIL'} "
                f"({rep.detail})")
            doc["invariance"][p.name()] = "PASS" if rep.passed else "FAIL"
    _emit(args, lines, doc)
    return EXIT_OK


def cmd_harness(args) -> int:
    try:
        F = load_map_file(args.mapfile)
    except (OSError, PolyError, AnalysisError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BAD_INPUT
    try:
        report, model, K = equivalence_harness(
            F, seed=args.seed, perversity_kinds=args.perversity,
            radius=args.radius)
    except (ModelError, AnalysisError, IHError) as exc:
        sys.stderr.write(f"harness error: {exc}\n")
        return EXIT_ANALYSIS
    lines = [
        f"model kind: {report.model_kind} (complex dimension {report.m})",
        f"properness: {report.verdict}",
        f"leading rank {report.rank}, condition holds: {report.rank_condition}",
        f"Jacobian nowhere zero: {report.jacobian_nowhere_zero}",
        f"ordinary H: {list(report.h_betti)}  (H_2 = {report.h2})",
    ]
    for name, betti in sorted(report.ih_closed.items()):
        lines.append(f"IH^{name} closed: {list(betti)}  "
                     f"(IH_2 = {report.ih2[name]})")
    for name, betti in sorted(report.ih_relative.items()):
        lines.append(f"IH^{name} relative: {list(betti)}  "
                     f"(top-2 = {report.ih_relative_top[name]})")
    lines.append(f"sheets: {model.total_sheets}; "
                 f"gluing pairs: {model.gluing_pairs()}")
    for note in report.notes:
        lines.append(f"note: {note}")
    lines.append(f"consistency: {report.consistency}")
    doc = report.to_json()
    doc["model"] = model.to_json()
    _emit(args, lines, doc)
    return EXIT_OK if report.consistency == "consistent" else EXIT_INCONSISTENT


def cmd_example32(args) -> int:
    F, model, K = builtin_example()
    analysis = model.analysis
    lines = [
        f"map: F = ({', '.join(str(c) for c in F.components)})",
        f"singular locus: {analysis.singular.describe()}",
        f"critical values: {analysis.critical.describe()}",
        f"non-properness set (real): {analysis.jelonek_real.describe()}",
        f"sheets: {model.total_sheets}",
        f"gluing pairs: {model.gluing_pairs()}",
        f"complex cells: {[K.n_cells(d) for d in range(K.dim + 1)]}",
    ]
    doc = {
        "analysis": analysis.to_json(),
        "model": model.to_json(),
        "complex": K.to_json(),
    }
    _emit(args, lines, doc)
    return EXIT_OK


def cmd_selftest(args) -> int:
    """Quick smoke checks of both halves; exit 0 iff everything passes."""
    from .polynomials import parse_poly, PolyMap
    from .complexes import pinched_torus, sphere
    ok = True
    lines = []

    def check(name: str, cond: bool):
        nonlocal ok
        lines.append(f"{'PASS' if cond else 'FAIL'}  {name}")
        ok = ok and cond

    F = PolyMap((parse_poly("x", ("x", "y")),
                 parse_poly("x^2*y*(y+2)", ("x", "y"))))
    from .asymptotics import singular_locus, critical_values, jelonek_set
    check("singular locus of the worked example",
          str(singular_locus(F).generators[0]) == "x*y + x")
    check("critical values of the worked example",
          str(critical_values(F).generators[0]) == "alpha^2 + beta")
    check("non-properness set of the worked example",
          str(jelonek_set(F).generators[0]) == "alpha")
    P = pinched_torus()
    check("pinched torus ordinary homology",
          homology(P).betti == (1, 1, 1))
    check("pinched torus intersection homology",
          ih_betti(P, make_perversity("zero", 2)).betti == (1, 0, 1))
    check("sphere duality",
          duality_check(sphere(2), make_perversity("zero", 2),
                        make_perversity("zero", 2)).passed)
    _emit(args, lines, {"checks": lines, "passed": ok})
    return EXIT_OK if ok else EXIT_BAD_INPUT


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="polystrat",
        description="asymptotics of polynomial maps and intersection "
                    "homology of filtered complexes")
    ap.add_argument("--seed", type=int, default=0,
                    help="seed for all randomized steps (default 0)")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="analyze a polynomial map file")
    a.add_argument("mapfile")
    a.set_defaults(func=cmd_analyze)

    i = sub.add_parser("ih", help="betti tables of a filtered complex file")
    i.add_argument("complexfile")
    i.add_argument("--perversity", action="append",
                   help="zero|max|lower-middle|upper-middle|custom:p2,p3,... "
                        "(repeatable; default: all standard)")
    i.add_argument("--variant", choices=("closed", "relative"),
                   default="closed")
    i.add_argument("--subdivide", type=int, default=1,
                   help="barycentric subdivisions before computing "
                        "(default 1; allowability is read combinatorially, "
                        "which is exact on subdivided triangulations)")
    i.add_argument("--duality", action="store_true",
                   help="add duality check section")
    i.add_argument("--invariance", action="store_true",
                   help="add invariance check section")
    i.set_defaults(func=cmd_ih)

    h = sub.add_parser("harness", help="equivalence harness for a map file")
    h.add_argument("mapfile")
    h.add_argument("--perversity", action="append")
    h.add_argument("--radius", type=float, default=None,
                   help="override the automatic compactification radius")
    h.set_defaults(func=cmd_harness)

    e = sub.add_parser("example32", help="built-in worked example report")
    e.set_defaults(func=cmd_example32)

    s = sub.add_parser("selftest", help="quick smoke checks")
    s.set_defaults(func=cmd_selftest)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
