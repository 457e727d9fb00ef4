"""Command line front end.

Subcommands::

    cardtw solve PROGRAM [--mode M] [--query A] [--td H|import:PATH] [--oracle] ...
    cardtw gen partition --values 1 2 3 [--out FILE] [--meta FILE]
    cardtw gen mmo --graph FILE --bound R [--out FILE] [--meta FILE]
    cardtw decompose PROGRAM [--td H] [--seed N] [--nice]
    cardtw trace PROGRAM [--td H|import:PATH] [--out FILE]

Exit codes: 0 for CONSISTENT/YES, 1 for INCONSISTENT/NO, 2 for errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .decomposition import (
    DecompositionFormatError,
    build_incidence_graph,
    heuristic_decompose,
    normalize,
    write_td,
)
from .dp import BudgetExceeded, compute_tables, format_trace
from .pipeline import HEURISTICS, MODES, RequestError, SolveRequest, WeightScaleError, prepare, run
from .program import CapacityError, ProgramError
from .syntax import ParseError, parse_program, print_program
from .transforms import (
    MmoInstance,
    ReductionError,
    mmo_orientation_bruteforce,
    mmo_to_pcc,
    partition_to_pwc,
    subset_sum_half,
)

EXPECTED_ERRORS = (
    ParseError,
    ProgramError,
    CapacityError,
    ReductionError,
    DecompositionFormatError,
    RequestError,
    WeightScaleError,
    BudgetExceeded,
    OSError,
    ValueError,
)


def _td_choice(value: str) -> str:
    if value in HEURISTICS or value.startswith("import:") and len(value) > len("import:"):
        return value
    raise argparse.ArgumentTypeError(f"expected one of {', '.join(HEURISTICS)} or import:<path>")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cardtw", description="Answer-set reasoning for weight and cardinality programs by tree decomposition.")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="decide consistency or reason about an atom")
    solve.add_argument("program", nargs="?", default="-", help="program file, '-' for standard input")
    solve.add_argument("--mode", choices=MODES, default="consistency")
    solve.add_argument("--query", help="atom for credulous/skeptical reasoning")
    solve.add_argument("--td", type=_td_choice, default="min-fill", help="min-fill, min-degree or import:<path>")
    solve.add_argument("--oracle", action="store_true", help="cross-check with exhaustive enumeration")
    solve.add_argument("--seed", type=int)
    solve.add_argument("--trace-out", metavar="PATH", help="write every DP table to PATH")
    solve.add_argument("--allow-large-weights", action="store_true", help="solve binary-scale weight programs by the oracle")
    solve.add_argument("--budget", type=int, help="cap on the total number of table entries")

    gen = sub.add_parser("gen", help="generate reduction instances")
    gsub = gen.add_subparsers(dest="generator", required=True)
    part = gsub.add_parser("partition", help="weight program for a partition instance")
    part.add_argument("--values", type=int, nargs="+", required=True)
    mmo = gsub.add_parser("mmo", help="cardinality program for a minimum-maximum-outdegree instance")
    mmo.add_argument("--graph", required=True, help="edge list: 'u v [weight]' per line, a lone name is an isolated vertex")
    mmo.add_argument("--bound", type=int, required=True)
    for g in (part, mmo):
        g.add_argument("--out", help="program file (default: standard output)")
        g.add_argument("--meta", help="sidecar JSON with ground truth (default: <out>.json when --out is given)")

    dec = sub.add_parser("decompose", help="print a tree decomposition of the incidence graph")
    dec.add_argument("program", nargs="?", default="-")
    dec.add_argument("--td", choices=HEURISTICS, default="min-fill")
    dec.add_argument("--seed", type=int)
    dec.add_argument("--nice", action="store_true", help="print the normalized decomposition instead")

    tr = sub.add_parser("trace", help="print every DP table")
    tr.add_argument("program", nargs="?", default="-")
    tr.add_argument("--td", type=_td_choice, default="min-fill")
    tr.add_argument("--seed", type=int)
    tr.add_argument("--out", help="file for the trace (default: standard output)")
    return parser


def _read(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def read_graph(text: str) -> tuple[list[str], dict[frozenset, int]]:
    vertices: list[str] = []
    weights: dict[frozenset, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split("#", 1)[0].split()
        if not parts:
            continue
        if len(parts) > 3:
            raise ValueError(f"graph line {lineno}: expected 'u v [weight]'")
        for v in parts[:2]:
            if v not in vertices:
                vertices.append(v)
        if len(parts) >= 2:
            if parts[0] == parts[1]:
                raise ValueError(f"graph line {lineno}: self-loop")
            weights[frozenset(parts[:2])] = int(parts[2]) if len(parts) == 3 else 1
    return vertices, weights


def _emit(program_text: str, meta: dict, out: str | None, meta_path: str | None) -> None:
    if out:
        Path(out).write_text(program_text)
        meta_path = meta_path or out + ".json"
    else:
        sys.stdout.write(program_text)
    if meta_path:
        Path(meta_path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def cmd_solve(args) -> int:
    request = SolveRequest(
        source=args.program,
        mode=args.mode,
        query=args.query,
        td=args.td,
        oracle=args.oracle,
        trace=args.trace_out,
        seed=args.seed,
        allow_large_weights=args.allow_large_weights,
        budget=args.budget,
    )
    report = run(request)
    sys.stdout.write(report.text)
    return report.exit_code


def cmd_gen(args) -> int:
    if args.generator == "partition":
        values = list(args.values)
        program = partition_to_pwc(values)
        half = subset_sum_half(values)
        meta = {
            "generator": "partition",
            "values": values,
            "expected": "CONSISTENT" if half is not None else "INCONSISTENT",
            "half": sorted(half) if half is not None else None,
        }
    else:
        vertices, weights = read_graph(Path(args.graph).read_text())
        inst = MmoInstance(tuple(vertices), weights, args.bound)
        program = mmo_to_pcc(inst)
        orientation = mmo_orientation_bruteforce(inst)
        meta = {
            "generator": "mmo",
            "vertices": vertices,
            "edges": [[u, v, weights[frozenset((u, v))]] for u, v in inst.ordered_edges()],
            "bound": args.bound,
            "expected": "CONSISTENT" if orientation is not None else "INCONSISTENT",
            "orientation": (
                [[t, next(iter(e - {t}), t)] for e, t in sorted(orientation.items(), key=lambda kv: sorted(kv[0]))]
                if orientation is not None
                else None
            ),
        }
    _emit(print_program(program), meta, args.out, args.meta)
    return 0


def cmd_decompose(args) -> int:
    program = parse_program(_read(args.program))
    graph = build_incidence_graph(program)
    td = heuristic_decompose(graph, args.td, args.seed)
    if args.nice:
        td = normalize(td, graph).as_tree_decomposition()
    sys.stdout.write(write_td(td, graph))
    return 0


def cmd_trace(args) -> int:
    program = parse_program(_read(args.program))
    request = SolveRequest(source=args.program, td=args.td, seed=args.seed)
    prep = prepare(request, program)
    graph = build_incidence_graph(prep.pcc)
    nice = normalize(prep.td, graph)
    result = compute_tables(prep.pcc, nice, saturate=True)
    names = {nid: f"n{src}" for src, nid in nice.by_source().items()}
    text = format_trace(result, graph, names)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


COMMANDS = {"solve": cmd_solve, "gen": cmd_gen, "decompose": cmd_decompose, "trace": cmd_trace}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except EXPECTED_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
