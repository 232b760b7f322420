#!/usr/bin/env python3
"""
CLI for Reeb digraph surgery.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from .errors import EmbeddingError, PreconditionError, ReebSurgeryError
from .formats_io import (
    export_dot,
    export_obj,
    parse_annotation,
    parse_document,
    parse_embedding,
    parse_graph,
    parse_mesh,
    serialize_annotation,
    serialize_embedding,
    serialize_graph,
    serialize_mesh,
    serialize_report,
)
from .pl_engine import (
    CIRCLE_SEGMENTS,
    MAX_REFINEMENT_ROUNDS,
    connected_sum_surfaces,
    dense_sampling_reeb,
    find_regular_strip,
    pl_reeb,
    realize,
)
from .reeb_core import digraph_isomorphic, parse_point, validate_good_digraph
from .suite import DEFAULT_SEED, format_table, run_suite
from .surgery import (
    check_embedding,
    glue_gs_counts,
    gs_check,
    host_hypotheses,
    remark5_count,
    theorem3_augment,
    theorem3_connected_sum,
    theorem3_count,
    wedge_connected_sum,
)


def read_input(filepath: str) -> str:
    """Read an input document."""
    path = Path(filepath)

    if not path.exists():
        raise FileNotFoundError(
            f"Input file not found: {filepath}\n"
            f"Please check:\n"
            f"  1. The file path is correct\n"
            f"  2. The file exists relative to the current directory: {Path.cwd()}\n"
            f"  3. You have read permissions for the file"
        )
    return path.read_text(encoding="utf-8")


def _emit(args: argparse.Namespace, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _render_graph(g, fmt: str) -> str:
    if fmt == "json":
        return serialize_graph(g)
    if fmt == "dot":
        return export_dot(g)
    raise PreconditionError(f"Format {fmt!r} does not apply to graphs; use json or dot")


def _render_mesh(s, f, fmt: str) -> str:
    if fmt == "json":
        return serialize_mesh(s, f)
    if fmt == "obj":
        return export_obj(s, f)
    raise PreconditionError(f"Format {fmt!r} does not apply to meshes; use json or obj")


def _graph(args: argparse.Namespace, filepath: str):
    return parse_graph(read_input(filepath), strict=args.strict)


def _mesh(args: argparse.Namespace, filepath: str):
    return parse_mesh(read_input(filepath), strict=args.strict)


def _embedding(args: argparse.Namespace, filepath: str):
    return parse_embedding(read_input(filepath), strict=args.strict)


# Verbs ---------------------------------------------------------------------


def cmd_validate(args: argparse.Namespace) -> int:
    report = validate_good_digraph(_graph(args, args.graph))
    _emit(
        args,
        serialize_report(
            {
                "verb": "validate",
                "is_good": report.is_good,
                "violations": report.violations,
                "certificate": report.certificate,
            }
        ),
    )
    return 0 if report.is_good else 1


def cmd_glue(args: argparse.Namespace) -> int:
    w1, w2 = _graph(args, args.first), _graph(args, args.second)
    p1, p2 = parse_point(args.first_point), parse_point(args.second_point)
    result, vertex = wedge_connected_sum(w1, p1, w2, p2)
    if not args.annotations:
        _emit(args, _render_graph(result, args.format or "json"))
        return 0
    ann1, ann2 = (
        parse_annotation(read_input(path), strict=args.strict) for path in args.annotations
    )
    counts = glue_gs_counts(w1, ann1, w2, ann2, p1, p2)
    _emit(
        args,
        serialize_report(
            {
                "verb": "glue",
                "wedge_vertex": vertex,
                "graph": result,
                "annotation": counts.counts,
            }
        ),
    )
    return 0


def cmd_gs_check(args: argparse.Namespace) -> int:
    g = _graph(args, args.graph)
    report = gs_check(g, parse_annotation(read_input(args.annotation), strict=args.strict))
    _emit(
        args,
        serialize_report(
            {
                "verb": "gs-check",
                "passed": report.passed,
                "expected": report.expected,
                "actual": report.actual,
                "failures": report.failures,
            }
        ),
    )
    return 0 if report.passed else 1


def cmd_embed_check(args: argparse.Namespace) -> int:
    w, g = _graph(args, args.embedded), _graph(args, args.host)
    report = check_embedding(w, g, _embedding(args, args.embedding), args.remark5)
    _emit(
        args,
        serialize_report(
            {
                "verb": "embed-check",
                "ok": report.ok,
                "violations": report.violations,
                "v_gw2": report.v_gw2,
                "host_hypotheses": host_hypotheses(g),
            }
        ),
    )
    return 0 if report.ok else 1


def cmd_count(args: argparse.Namespace) -> int:
    w = _graph(args, args.graph)
    if not args.remark5:
        _emit(args, f"{theorem3_count(w)}\n")
        return 0
    if not (args.host and args.embedding):
        raise PreconditionError(
            "count --remark5 needs the embedding\n"
            "Solutions:\n"
            "  - Pass --host HOST.reeb.json --embedding MAP.emb.json\n"
            "  - Drop --remark5 to use the plain count"
        )
    report = check_embedding(w, _graph(args, args.host), _embedding(args, args.embedding), True)
    if not report.ok:
        raise EmbeddingError(
            "Invalid embedding:\n" + "\n".join(f"  - {v}" for v in report.violations),
            violations=report.violations,
        )
    _emit(args, f"{remark5_count(w, report.v_gw2)}\n")
    return 0


def cmd_augment(args: argparse.Namespace) -> int:
    g, w = _graph(args, args.host), _graph(args, args.embedded)
    result, _ = theorem3_augment(g, w, _embedding(args, args.embedding), args.remark5)
    _emit(args, _render_graph(result, args.format or "json"))
    return 0


def cmd_consum_count(args: argparse.Namespace) -> int:
    g = _graph(args, args.host)
    w1, w2 = _graph(args, args.first), _graph(args, args.second)
    phi1, phi2 = _embedding(args, args.first_embedding), _embedding(args, args.second_embedding)
    result, new = theorem3_connected_sum(g, w1, phi1, w2, phi2, args.remark5)
    _emit(
        args,
        serialize_report(
            {"verb": "consum-count", "count": len(new), "new_vertices": new, "graph": result}
        ),
    )
    return 0


def cmd_realize(args: argparse.Namespace) -> int:
    r = realize(_graph(args, args.graph), segments=args.segments)
    _emit(args, _render_mesh(r.surface, r.heights, args.format or "json"))
    return 0


def cmd_reeb(args: argparse.Namespace) -> int:
    s, f = _mesh(args, args.mesh)
    g = dense_sampling_reeb(s, f) if args.oracle else pl_reeb(s, f)[0]
    _emit(args, _render_graph(g, args.format or "json"))
    return 0


def cmd_consum(args: argparse.Namespace) -> int:
    s1, f1 = _mesh(args, args.first)
    s2, f2 = _mesh(args, args.second)
    strip1 = find_regular_strip(s1, f1, parse_point(args.first_point), max_rounds=args.max_rounds)
    strip2 = find_regular_strip(s2, f2, parse_point(args.second_point), max_rounds=args.max_rounds)
    s, f = connected_sum_surfaces(s1, f1, strip1, s2, f2, strip2, reverse=args.reverse)
    _emit(args, _render_mesh(s, f, args.format or "json"))
    return 0


def cmd_iso(args: argparse.Namespace) -> int:
    iso = digraph_isomorphic(_graph(args, args.first), _graph(args, args.second))
    _emit(
        args,
        serialize_report(
            {
                "verb": "iso",
                "isomorphic": iso is not None,
                "vertex_map": iso.vertex_map if iso else None,
                "edge_map": iso.edge_map if iso else None,
            }
        ),
    )
    return 0 if iso else 1


def cmd_export(args: argparse.Namespace) -> int:
    kind, value = parse_document(read_input(args.document), strict=args.strict)
    fmt = args.format or "json"
    if kind == "graph":
        text = _render_graph(value, fmt)
    elif kind == "mesh":
        text = _render_mesh(*value, fmt)
    elif fmt != "json":
        raise PreconditionError(f"Only json export applies to {kind} documents")
    elif kind == "embedding":
        text = serialize_embedding(value)
    elif kind == "annotation":
        text = serialize_annotation(value)
    else:
        text = serialize_report(value)
    _emit(args, text)
    return 0


def cmd_verify_suite(args: argparse.Namespace) -> int:
    results = run_suite(args.seed, quick=args.quick, only=args.only)
    if args.format == "json":
        # timings are left out so that reruns are byte-identical
        text = serialize_report(
            {
                "verb": "verify-suite",
                "seed": args.seed,
                "quick": args.quick,
                "criteria": [
                    {
                        "number": r.number,
                        "title": r.title,
                        "cases": r.cases,
                        "failures": list(r.failures),
                        "passed": r.passed,
                    }
                    for r in results
                ],
            }
        )
    else:
        text = format_table(results)
    _emit(args, text)
    return 0 if all(r.passed for r in results) else 1


# Parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    strictness = common.add_mutually_exclusive_group()
    strictness.add_argument(
        "--strict", dest="strict", action="store_true", default=True,
        help="Reject unknown document fields (default)",
    )
    strictness.add_argument(
        "--lax", dest="strict", action="store_false", help="Ignore unknown document fields"
    )
    common.add_argument("--out", help="Write the result to this file instead of stdout")
    common.add_argument(
        "--format", choices=("json", "dot", "obj", "table"),
        help="Output format (default: json; table for verify-suite)",
    )
    common.add_argument(
        "--remark5", action="store_true",
        help="Allow degree-2 vertices to map onto host vertices",
    )
    common.add_argument(
        "--seed", type=int, default=DEFAULT_SEED,
        help=f"Seed for randomized runs (default: {DEFAULT_SEED})",
    )
    common.add_argument("--verbose", "-v", action="store_true", help="Debug logging")

    parser = argparse.ArgumentParser(
        prog="hitoshura25-reeb-surgery",
        description="Surgery on Reeb digraphs and verification on triangulated surfaces",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Check a digraph
  %(prog)s validate sphere.reeb.json

  # Wedge two digraphs at edge midpoints
  %(prog)s glue a.reeb.json e:e1@1/2 b.reeb.json e:e1@1/2

  # Count the new degree-2 vertices of an embedded digraph
  %(prog)s count path3.reeb.json

  # Realize a digraph and read its Reeb digraph back
  %(prog)s realize x.reeb.json --out x.mesh.json
  %(prog)s reeb x.mesh.json --format dot

  # Run the acceptance suite
  %(prog)s verify-suite --quick
        """,
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name, handler, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler)
        return p

    p = verb("validate", cmd_validate, "Decide whether a digraph is a good Reeb digraph")
    p.add_argument("graph")

    p = verb("glue", cmd_glue, "Wedge connected sum of two digraphs")
    p.add_argument("first")
    p.add_argument("first_point", help="v:<vertex> or e:<edge>@<p/q>")
    p.add_argument("second")
    p.add_argument("second_point")
    p.add_argument(
        "--annotations", nargs=2, metavar=("ANN1", "ANN2"),
        help="Glue G-simple critical-point counts too",
    )

    p = verb("gs-check", cmd_gs_check, "Check G-simple critical-point counts")
    p.add_argument("graph")
    p.add_argument("annotation")

    p = verb("embed-check", cmd_embed_check, "Check an embedding into a host digraph")
    p.add_argument("embedded")
    p.add_argument("host")
    p.add_argument("embedding")

    p = verb("count", cmd_count, "Number of new degree-2 vertices from an embedded digraph")
    p.add_argument("graph")
    p.add_argument("--host", help="Host digraph (needed with --remark5)")
    p.add_argument("--embedding", help="Embedding map (needed with --remark5)")

    p = verb("augment", cmd_augment, "Insert the new degree-2 vertices into a tree host")
    p.add_argument("host")
    p.add_argument("embedded")
    p.add_argument("embedding")

    p = verb("consum-count", cmd_consum_count, "Augment a host for two disjoint embeddings")
    p.add_argument("host")
    p.add_argument("first")
    p.add_argument("first_embedding")
    p.add_argument("second")
    p.add_argument("second_embedding")

    p = verb("realize", cmd_realize, "Build a surface realizing a digraph")
    p.add_argument("graph")
    p.add_argument(
        "--segments", type=int, default=CIRCLE_SEGMENTS,
        help=f"Vertices per tube ring (default: {CIRCLE_SEGMENTS})",
    )

    p = verb("reeb", cmd_reeb, "Reeb digraph of a height function on a mesh")
    p.add_argument("mesh")
    p.add_argument("--oracle", action="store_true", help="Use dense level sampling")

    p = verb("consum", cmd_consum, "Connected sum of two meshes at Reeb points")
    p.add_argument("first")
    p.add_argument("first_point", help="Point of the first mesh's Reeb digraph")
    p.add_argument("second")
    p.add_argument("second_point")
    p.add_argument("--reverse", action="store_true", help="Glue with reversed orientation")
    p.add_argument(
        "--max-rounds", type=int, default=MAX_REFINEMENT_ROUNDS,
        help=f"Subdivision rounds allowed when searching strips (default: {MAX_REFINEMENT_ROUNDS})",
    )

    p = verb("iso", cmd_iso, "Test two digraphs for isomorphism")
    p.add_argument("first")
    p.add_argument("second")

    p = verb("export", cmd_export, "Re-export a document as json, dot or obj")
    p.add_argument("document")

    p = verb("verify-suite", cmd_verify_suite, "Run the acceptance criteria")
    p.add_argument("--quick", action="store_true", help="Reduced case counts")
    p.add_argument(
        "--only", type=int, nargs="+", metavar="N", help="Run only these criteria"
    )

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)

    try:
        return args.handler(args)
    except (ReebSurgeryError, OSError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
