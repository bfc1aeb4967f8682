"""Command-line interface.

Subcommands: build (persist an index), query, locate (tree anchors),
oracle (brute-force references), bench (timings + CSV + figure).

Exit codes: 0 success, 1 usage, 2 parse error, 3 validation error,
4 internal error.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import io as jio
from .bench import (TREE_SHAPES, bench_string, bench_tree, format_table,
                    render_plot, summarize, write_csv)
from .bitseq import build_chunk_tables
from .grammar import build_global_index
from .graphs import all_queries
from .strings import build_minmax_packed
from .trees import (CentroidIndex, binarize, build_anchored_arrays,
                    build_centroid_index, build_index_micro_macro, locate_anchor)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_INTERNAL = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="jpmx", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build an index file from an input file")
    b.add_argument("--kind", required=True, choices=jio.KINDS)
    b.add_argument("input")
    b.add_argument("output")
    b.add_argument("--chunk-bits", type=int, default=None,
                   help="chunk width for the packed builders (default: adaptive)")
    b.add_argument("--micro-cap", type=int, default=None,
                   help="micro tree size cap (tree kind)")
    b.add_argument("--builder", choices=("micro", "quadratic"), default="micro",
                   help="tree index builder (default micro-macro)")
    b.add_argument("--block-len", type=int, default=None,
                   help="block length (grammar kind; default from n and g)")
    b.add_argument("--with-locator", action="store_true",
                   help="store a centroid locator index (tree kind)")
    b.add_argument("--td-file", default=None,
                   help="PACE-style tree decomposition (graph kind)")

    q = sub.add_parser("query", help="answer (i, j) from an index file")
    q.add_argument("index")
    q.add_argument("i", type=int)
    q.add_argument("j", type=int)

    loc = sub.add_parser("locate", help="print an anchor node for (i, j)")
    loc.add_argument("index")
    loc.add_argument("i", type=int)
    loc.add_argument("j", type=int)

    o = sub.add_parser("oracle", help="run the brute-force reference")
    o.add_argument("--kind", required=True, choices=("string", "tree", "graph"))
    o.add_argument("input")

    be = sub.add_parser("bench", help="time builder variants; write CSV and figure")
    be.add_argument("--kind", required=True, choices=("string", "tree"))
    be.add_argument("--sizes", required=True,
                    help="comma-separated input sizes, e.g. 1024,4096,16384")
    be.add_argument("--reps", type=int, default=3)
    be.add_argument("--seed", type=int, default=7)
    be.add_argument("--generator", default="random", choices=TREE_SHAPES,
                    help="tree shape (tree kind)")
    be.add_argument("--micro-cap", type=int, default=None)
    be.add_argument("--chunk-bits", type=int, default=None)
    be.add_argument("--csv", default=None, help="CSV path (default: bench_<kind>.csv)")
    be.add_argument("--plot", default=None,
                    help="figure path (default: next to the CSV)")
    return p


def _cmd_build(args) -> int:
    table = build_chunk_tables(args.chunk_bits) if args.chunk_bits else None
    if args.kind == "string":
        seq = jio.read_string_file(args.input)
        idx = build_minmax_packed(seq, table)
        jio.save_index(args.output, "string", idx)
    elif args.kind == "tree":
        tree = jio.read_tree_file(args.input)
        if args.with_locator:
            obj = build_centroid_index(tree, builder=args.builder,
                                       cap=args.micro_cap, table=table)
        elif args.builder == "quadratic":
            obj = build_anchored_arrays(binarize(tree))
        else:
            obj = build_index_micro_macro(binarize(tree), cap=args.micro_cap,
                                          table=table)
        jio.save_index(args.output, "tree", obj)
    elif args.kind == "grammar":
        slp = jio.read_slp_file(args.input)
        idx = build_global_index(slp, args.block_len, table)
        jio.save_index(args.output, "grammar", idx)
    else:
        graph = jio.read_graph_file(args.input)
        td = jio.read_pace_decomposition(args.td_file) if args.td_file else None
        pairs = all_queries(graph, td)
        jio.save_index(args.output, "graph", pairs)
    return EXIT_OK


def _cmd_query(args) -> int:
    kind, obj = jio.load_index(args.index)
    if kind == "graph":
        answer = (args.i, args.j) in obj
    else:
        answer = obj.query(args.i, args.j)
    print("yes" if answer else "no")
    return EXIT_OK


def _cmd_locate(args) -> int:
    kind, obj = jio.load_index(args.index)
    from .trees import CentroidIndex
    if kind != "tree" or not isinstance(obj, CentroidIndex):
        raise jio.ValidationError(
            f"{args.index}: locate needs a tree index built with --with-locator")
    node = locate_anchor(obj, args.i, args.j)
    print("none" if node is None else node)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    from .oracle import graph_enum_oracle, string_oracle, tree_enum_oracle
    if args.kind == "string":
        idx = string_oracle(jio.read_string_file(args.input))
        mn, mx = idx.to_lists()
        for i in range(idx.n + 1):
            print(f"{i} {mn[i]} {mx[i]}")
    elif args.kind == "tree":
        qs = tree_enum_oracle(jio.read_tree_file(args.input))
        for i, j in sorted(qs):
            print(f"{i} {j}")
    else:
        qs = graph_enum_oracle(jio.read_graph_file(args.input))
        for i, j in sorted(qs):
            print(f"{i} {j}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    if not sizes or any(n < 1 for n in sizes):
        raise _UsageError("sizes must be positive integers")
    if args.kind == "string":
        rows = bench_string(sizes, args.reps, args.seed, args.chunk_bits)
    else:
        rows = bench_tree(sizes, args.reps, args.seed, args.generator,
                          args.micro_cap, args.chunk_bits or 8)
    csv_path = args.csv or f"bench_{args.kind}.csv"
    plot_path = args.plot or os.path.splitext(csv_path)[0] + ".png"
    write_csv(rows, csv_path)
    render_plot(rows, plot_path)
    print(format_table(summarize(rows)))
    print(f"csv: {csv_path}")
    print(f"figure: {plot_path}")
    return EXIT_OK


_COMMANDS = {"build": _cmd_build, "query": _cmd_query, "locate": _cmd_locate,
             "oracle": _cmd_oracle, "bench": _cmd_bench}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(f"jpmx: {e}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as e:
        print(f"jpmx: {e}", file=sys.stderr)
        return EXIT_USAGE
    except jio.ParseError as e:
        print(f"jpmx: parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except FileNotFoundError as e:
        print(f"jpmx: parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (jio.ValidationError, ValueError) as e:
        print(f"jpmx: validation error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as e:  # pragma: no cover - last resort
        print(f"jpmx: internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
