"""Command-line interface: parse designs, run analyses, emit text or JSON.

Exit codes: 0 success, 1 usage error, 2 data/parse error, 3 verification
failure (an invariance deviation above tolerance, which a correct build
should never produce).  Human-readable diagnostics go to stderr; reports go
to stdout or to ``--output``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import render
from .design import Design, margins, parse_design
from .errors import DesignParseError, InconsistentSpectrumError, ResourceLimitError
from .groups import AbelianStructure, enumerate_structures, parse_structure
from .invariance import (
    CROSS_ROUTE_TOL,
    compare_aberration,
    gwlp_margin,
    resolution_and_strength,
    subset_norm,
    verify_invariance,
)
from .spectra import (
    INTERNAL_TOL,
    JCharVector,
    check_assignment,
    gwlp_char,
    j_characteristics,
    reconstruct,
)

USAGE_ERROR, DATA_ERROR, VERIFICATION_FAILURE = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on usage errors; we reserve 2 for data errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="wordlength",
        description="Wordlength patterns and J-characteristics of factorial designs.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_common(p, tol_help=None):
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        p.add_argument("--output", metavar="PATH", help="write the report to a file")
        if tol_help:
            p.add_argument("--tol", type=float, default=None, help=tol_help)

    p = sub.add_parser("gwlp", help="generalized wordlength pattern of a design")
    p.add_argument("design", help="design file")
    p.add_argument("--groups", help="per-factor structure literals, e.g. 4,2x2,4")
    p.add_argument(
        "--algorithm",
        choices=["dense", "factorized", "margin"],
        help="margin (default without --groups) needs no group structures",
    )
    add_common(p, "clamping/reporting tolerance (default 1e-9)")

    p = sub.add_parser("jchar", help="J-characteristics under a structure assignment")
    p.add_argument("design", help="design file")
    p.add_argument("--groups", required=True, help="per-factor structure literals")
    p.add_argument("--algorithm", choices=["dense", "factorized"], default="factorized")
    add_common(p)

    p = sub.add_parser("reconstruct", help="recover a design from a jchar JSON report")
    p.add_argument("spectrum", help="JSON file produced by `jchar --json`")
    p.add_argument("--groups", help="override the structure assignment")
    add_common(p, "max distance from integers (default 1e-6 * s)")

    p = sub.add_parser("invariance", help="verify GWLP invariance across assignments")
    p.add_argument("design", help="design file")
    p.add_argument(
        "--groups",
        action="append",
        help="assignment literal (repeatable) or `all`; default all",
    )
    add_common(p, "cross-route tolerance (default 1e-8)")

    p = sub.add_parser("margins", help="margin counts over a factor subset")
    p.add_argument("design", help="design file")
    p.add_argument("--subset", default="", help="1-based factor positions, e.g. 1,3")
    add_common(p)

    p = sub.add_parser("compare", help="rank two designs by aberration")
    p.add_argument("first", help="first design file")
    p.add_argument("second", help="second design file")
    p.add_argument("--groups", help="structure literals applied to both designs")
    add_common(p, "comparison tolerance (default 1e-9)")

    p = sub.add_parser("enumerate-groups", help="abelian structures of a given order")
    p.add_argument("order", type=int)
    add_common(p)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {
        "gwlp": _run_gwlp,
        "jchar": _run_jchar,
        "reconstruct": _run_reconstruct,
        "invariance": _run_invariance,
        "margins": _run_margins,
        "compare": _run_compare,
        "enumerate-groups": _run_enumerate,
    }[args.command]
    try:
        code, report = handler(args)
    except (DesignParseError, InconsistentSpectrumError, OSError, json.JSONDecodeError) as exc:
        print(f"wordlength: {exc}", file=sys.stderr)
        return DATA_ERROR
    except (ResourceLimitError, ValueError) as exc:
        print(f"wordlength: {exc}", file=sys.stderr)
        return USAGE_ERROR
    if args.output:
        Path(args.output).write_text(report, encoding="utf-8")
    else:
        sys.stdout.write(report)
    return code


def _load_design(path: str) -> Design:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DesignParseError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return parse_design(text)


def _design_summary(path: str, design: Design) -> dict:
    return {
        "path": path,
        "k": design.k,
        "sizes": list(design.sizes),
        "n_runs": design.n_runs,
    }


def _parse_assignment(literal: str) -> list[AbelianStructure]:
    return [parse_structure(chunk) for chunk in literal.split(",")]


def _assignment_literal(structures) -> str:
    return ",".join(st.literal() for st in structures)


def _labels(design: Design):
    sizes = design.sizes
    for index in range(design.space_size):
        components = []
        rem = index
        for size in reversed(sizes):
            rem, r = divmod(rem, size)
            components.append(r)
        yield index, tuple(reversed(components))


def _run_gwlp(args) -> tuple[int, str]:
    design = _load_design(args.design)
    tol = args.tol if args.tol is not None else INTERNAL_TOL
    algorithm = args.algorithm or ("factorized" if args.groups else "margin")
    if algorithm == "margin":
        if args.groups:
            raise ValueError("the margin algorithm takes no --groups")
        pattern = gwlp_margin(design, tol=tol)
        groups = None
    else:
        if not args.groups:
            raise ValueError(f"--groups is required for the {algorithm} algorithm")
        assignment = check_assignment(design, _parse_assignment(args.groups))
        jchar = j_characteristics(design, assignment, algorithm)
        pattern = gwlp_char(jchar, assignment, tol=tol)
        groups = [st.literal() for st in assignment]
    resolution, strength = resolution_and_strength(pattern)
    if args.json:
        payload = {
            "design": _design_summary(args.design, design),
            "algorithm": algorithm,
            "groups": groups,
            "gwlp": [float(a) for a in pattern],
            "resolution": resolution,
            "strength": strength,
            "tolerance": tol,
        }
        return 0, render.dumps(payload) + "\n"
    lines = [
        f"A = {render.gwlp_text(pattern)}",
        f"resolution = {'none' if resolution is None else resolution}, strength = {strength}",
    ]
    return 0, "\n".join(lines) + "\n"


def _run_jchar(args) -> tuple[int, str]:
    design = _load_design(args.design)
    assignment = check_assignment(design, _parse_assignment(args.groups))
    jchar = j_characteristics(design, assignment, args.algorithm)
    if args.json:
        values = []
        for index, comps in _labels(design):
            z = jchar.values[index]
            values.append(
                {
                    "g": render.element_label(design.levels, comps),
                    "re": float(z.real),
                    "im": float(z.imag),
                }
            )
        payload = {
            "design": {
                **_design_summary(args.design, design),
                "symbols": [list(a) for a in design.levels],
            },
            "groups": [st.literal() for st in assignment],
            "algorithm": args.algorithm,
            "n_runs": jchar.n_runs,
            "values": values,
        }
        return 0, render.dumps(payload) + "\n"
    lines = []
    for index, comps in _labels(design):
        z = complex(jchar.values[index])
        if abs(z) <= INTERNAL_TOL:
            continue  # zero entries are omitted, as spectrum tables usually are
        lines.append(f"{render.element_label(design.levels, comps)} {render.fmt_complex(z)}")
    return 0, "\n".join(lines) + "\n"


def _run_reconstruct(args) -> tuple[int, str]:
    try:
        raw = Path(args.spectrum).read_text(encoding="utf-8")
    except OSError as exc:
        raise DesignParseError(f"cannot read {args.spectrum}: {exc.strerror or exc}") from exc
    doc = json.loads(raw)
    try:
        group_literals = doc["groups"]
        entries = doc["values"]
        n_runs = doc["n_runs"]
        symbols = doc.get("design", {}).get("symbols")
        values = np.array(
            [complex(e["re"], e["im"]) for e in entries], dtype=np.complex128
        )
    except (KeyError, TypeError) as exc:
        raise DesignParseError(f"{args.spectrum} is not a jchar report: {exc}") from exc
    structures = tuple(parse_structure(lit) for lit in group_literals)
    jchar = JCharVector(values, int(n_runs), structures)
    override = _parse_assignment(args.groups) if args.groups else None
    counts = reconstruct(jchar, override, tol=args.tol)
    if not counts:
        raise InconsistentSpectrumError("spectrum reconstructs to an empty design")
    used = override if override is not None else structures
    if symbols is None:
        symbols = [[str(j) for j in range(st.order)] for st in used]
    design = Design(tuple(tuple(a) for a in symbols), counts)
    if args.json:
        payload = {
            "groups": [st.literal() for st in used],
            "n_runs": design.n_runs,
            "counts": [
                {
                    "run": [design.levels[i][r] for i, r in enumerate(run)],
                    "multiplicity": mult,
                }
                for run, mult in design.runs()
            ],
        }
        return 0, render.dumps(payload) + "\n"
    return 0, design.serialize()


def _run_invariance(args) -> tuple[int, str]:
    design = _load_design(args.design)
    tol = args.tol if args.tol is not None else CROSS_ROUTE_TOL
    specs = args.groups or ["all"]
    if "all" in specs:
        if len(specs) > 1:
            raise ValueError("--groups all cannot be combined with explicit assignments")
        assignments = "all"
    else:
        assignments = [_parse_assignment(lit) for lit in specs]
    report = verify_invariance(design, assignments, tol=tol)
    witness = report.witness
    witness_payload = None
    witness_text = f"J-characteristics agree across all assignments (within {render.fmt_float(INTERNAL_TOL)})"
    if witness is not None:
        label = render.element_label(design.levels, witness.components)
        witness_payload = {
            "g": label,
            "first_assignment": _assignment_literal(witness.first_assignment),
            "other_assignment": _assignment_literal(witness.other_assignment),
            "first_value": render.complex_json(witness.first_value),
            "other_value": render.complex_json(witness.other_value),
        }
        witness_text = (
            "J-characteristics differ (witness "
            f"{label}: {render.fmt_complex(witness.first_value)} vs "
            f"{render.fmt_complex(witness.other_value)})"
        )
    code = 0 if report.invariant else VERIFICATION_FAILURE
    if args.json:
        payload = {
            "design": _design_summary(args.design, design),
            "assignments": [_assignment_literal(a) for a in report.assignments],
            "gwlps": [[float(x) for x in g] for g in report.gwlps],
            "margin_gwlp": [float(x) for x in report.margin_gwlp],
            "max_deviation_by_j": [float(x) for x in report.max_deviation_by_j],
            "max_deviation": report.max_deviation,
            "tolerance": tol,
            "invariant": report.invariant,
            "witness": witness_payload,
            "resolution": report.resolution,
            "strength": report.strength,
        }
        return code, render.dumps(payload) + "\n"
    if report.invariant:
        deviation = f"max GWLP deviation < {render.fmt_float(tol)}"
    else:
        deviation = (
            f"max GWLP deviation {render.fmt_float(report.max_deviation)} "
            f"EXCEEDS {render.fmt_float(tol)}"
        )
    lines = [
        f"{len(report.assignments)} assignments + margin route, {deviation}; {witness_text}",
        f"A = {render.gwlp_text(report.margin_gwlp)}",
        f"resolution = {'none' if report.resolution is None else report.resolution}, "
        f"strength = {report.strength}",
    ]
    return code, "\n".join(lines) + "\n"


def _run_margins(args) -> tuple[int, str]:
    design = _load_design(args.design)
    if args.subset.strip():
        try:
            positions = [int(tok) - 1 for tok in args.subset.split(",")]
        except ValueError:
            raise ValueError(f"bad subset {args.subset!r}; want 1-based positions like 1,3")
        if any(p < 0 for p in positions):
            raise ValueError("subset positions are 1-based")
    else:
        positions = []
    table = margins(design, positions)
    norm = subset_norm(design, positions)
    if args.json:
        payload = {
            "design": _design_summary(args.design, design),
            "subset": [i + 1 for i in table.subset],
            "cells": [
                {
                    "levels": [design.levels[i][r] for i, r in zip(table.subset, cell)],
                    "count": count,
                }
                for cell, count in table.cells()
            ],
            "n_runs": table.n_runs,
            "subset_norm": norm.value,
        }
        return 0, render.dumps(payload) + "\n"
    lines = []
    for cell, count in table.cells():
        symbols = [design.levels[i][r] for i, r in zip(table.subset, cell)]
        label = "()" if not symbols else " ".join(symbols)
        lines.append(f"{label} {count}")
    lines.append(f"subset_norm = {render.fmt_float(norm.value)}")
    return 0, "\n".join(lines) + "\n"


def _run_compare(args) -> tuple[int, str]:
    tol = args.tol if args.tol is not None else INTERNAL_TOL
    patterns = []
    for path in (args.first, args.second):
        design = _load_design(path)
        if args.groups:
            assignment = check_assignment(design, _parse_assignment(args.groups))
            jchar = j_characteristics(design, assignment)
            patterns.append(gwlp_char(jchar, assignment, tol=tol))
        else:
            patterns.append(gwlp_margin(design, tol=tol))
    verdict = compare_aberration(patterns[0], patterns[1], tol=tol)
    if args.json:
        payload = {
            "first": {"path": args.first, "gwlp": [float(a) for a in patterns[0]]},
            "second": {"path": args.second, "gwlp": [float(a) for a in patterns[1]]},
            "verdict": verdict.ordering,
            "index": verdict.index,
            "tolerance": tol,
        }
        return 0, render.dumps(payload) + "\n"
    lines = [
        f"A(first)  = {render.gwlp_text(patterns[0])}",
        f"A(second) = {render.gwlp_text(patterns[1])}",
        verdict.ordering
        + ("" if verdict.index is None else f" (first difference at A_{verdict.index})"),
    ]
    return 0, "\n".join(lines) + "\n"


def _run_enumerate(args) -> tuple[int, str]:
    structures = enumerate_structures(args.order)
    literals = [st.literal() for st in structures]
    if args.json:
        payload = {"order": args.order, "structures": literals}
        return 0, render.dumps(payload) + "\n"
    return 0, "; ".join(literals) + "\n"


if __name__ == "__main__":
    sys.exit(main())
