"""Parse, transform, decompose and solve one request; render the textual report."""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .decomposition import (
    TreeDecomposition,
    build_incidence_graph,
    heuristic_decompose,
    normalize,
    read_td,
    validate_td,
)
from .dp import BudgetExceeded, Verdict, format_trace, solve_consistency, solve_reasoning
from .program import (
    DEFAULT_EXHAUSTIVE_LIMIT,
    Constraint,
    Literal,
    Program,
    ProgramError,
    Rule,
    enumerate_answer_sets,
    program_size,
)
from .syntax import parse_program
from .transforms import (
    clamp_weights,
    extend_td_for_split,
    extend_td_for_unary,
    separate_constraint_roles,
    unary_pwc_to_pcc,
)

MODES = ("consistency", "credulous", "skeptical", "enumerate", "witness")
HEURISTICS = ("min-fill", "min-degree")


class RequestError(ValueError):
    """The request itself is malformed (bad mode/query combination, unknown atom, ...)."""


class WeightScaleError(ValueError):
    """A weight is too large for the unary transform to stay polynomial."""


@dataclass
class SolveRequest:
    source: str = "-"  # path, or "-" for standard input
    mode: str = "consistency"
    query: str | None = None
    td: str = "min-fill"  # heuristic name or "import:<path>"
    oracle: bool = False
    trace: str | None = None  # path for the table dump
    seed: int | None = None
    allow_large_weights: bool = False
    budget: int | None = None
    text: str | None = None  # program text; overrides ``source``

    def validate(self) -> None:
        if self.mode not in MODES:
            raise RequestError(f"unknown mode {self.mode!r}")
        needs_query = self.mode in ("credulous", "skeptical")
        if needs_query and not self.query:
            raise RequestError(f"mode {self.mode} needs --query")
        if not needs_query and self.query:
            raise RequestError(f"--query is only meaningful with credulous or skeptical mode")
        if not (self.td in HEURISTICS or self.td.startswith("import:")):
            raise RequestError(f"unknown decomposition {self.td!r}")


@dataclass
class Report:
    answer: bool | None
    lines: list[str]
    exit_code: int
    witness: frozenset[str] | None = None
    models: list[frozenset[str]] | None = None
    decided_by: str = "dp"
    oracle_agrees: bool | None = None
    stats: dict = field(default_factory=dict)

    @property
    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def format_set(atoms) -> str:
    return "{" + ", ".join(sorted(atoms)) + "}"


def _headline(mode: str, answer: bool) -> str:
    if mode in ("credulous", "skeptical"):
        return "YES" if answer else "NO"
    return "CONSISTENT" if answer else "INCONSISTENT"


def _read_source(request: SolveRequest) -> str:
    if request.text is not None:
        return request.text
    if request.source == "-":
        return sys.stdin.read()
    return Path(request.source).read_text()


# --- answer-set filters used by enumeration -----------------------------------


def _filter_names(atom: str) -> tuple[str, str, str]:
    return f"{atom}__fix", f"{atom}__bot", f"{atom}__kill"


def with_filters(program: Program, fixed: dict[str, bool]) -> Program:
    """Add one headless-style rule per fixed atom that kills answer sets disagreeing with it.

    The head constraint has an empty clause and lower bound 1, so it never
    holds and the rule only demands that its body fails.
    """
    constraints = list(program.constraints)
    rules = list(program.rules)
    taken = {c.id for c in constraints} | {r.id for r in rules} | set(program.atoms)
    for a, value in fixed.items():
        fix, bot, kill = _filter_names(a)
        if {fix, bot, kill} & taken:
            raise ProgramError(f"filter names for {a!r} collide with existing elements")
        # body holds exactly when ``a`` has the wrong value
        body = Constraint(fix, (Literal(a),), 0, 0) if value else Constraint(fix, (Literal(a),), 1, None)
        constraints += [body, Constraint(bot, (), 1, 1)]
        rules.append(Rule(kill, bot, (fix,)))
    return Program(program.atoms, tuple(constraints), tuple(rules))


def extend_td_for_filters(td: TreeDecomposition, fixed: dict[str, bool]) -> TreeDecomposition:
    bags = dict(td.bags)
    edges = list(td.edges)
    next_id = max(bags, default=-1) + 1
    for a in fixed:
        fix, bot, kill = _filter_names(a)
        host = next(n for n in sorted(td.bags) if a in td.bags[n])
        bags[next_id] = frozenset({a, fix})
        bags[next_id + 1] = frozenset({fix, bot, kill})
        edges += [(host, next_id), (next_id, next_id + 1)]
        next_id += 2
    return TreeDecomposition(bags, edges, td.root)


# --- the pipeline ---------------------------------------------------------------


@dataclass
class _Prepared:
    original: Program
    pcc: Program  # cardinality program with head and body roles separated
    td: TreeDecomposition  # decomposition of ``pcc``'s incidence graph


def prepare(request: SolveRequest, program: Program) -> _Prepared:
    """Unary transform for weight programs, then a decomposition of the cardinality program."""
    pcc, gadgets = program, []
    if not program.is_pcc:
        clamped = clamp_weights(program)
        limit = program_size(program)
        heavy = max((lit.weight for c in clamped.constraints for lit in c.clause), default=0)
        if heavy > limit:
            raise WeightScaleError(
                f"weight {heavy} exceeds the program size {limit}; "
                "binary-scale weights are refused (use --allow-large-weights for oracle-only solving)"
            )
        pcc, gadgets = unary_pwc_to_pcc(clamped)
    # splitting before decomposing gives narrower heuristic decompositions
    split, record = separate_constraint_roles(pcc)
    if request.td.startswith("import:"):
        path = request.td[len("import:"):]
        graph = build_incidence_graph(program)
        td = read_td(Path(path).read_text(), graph)
        if not validate_td(graph, td):
            raise ValueError(f"{path}: not a tree decomposition of the program")
        if gadgets:
            td = extend_td_for_unary(td, gadgets)
        if record:
            td = extend_td_for_split(td, record)
    else:
        td = heuristic_decompose(build_incidence_graph(split), request.td, request.seed)
    return _Prepared(program, split, td)


def _solve(prep: _Prepared, mode: str, query: str | None, fixed: dict[str, bool], budget: int | None) -> Verdict:
    prog = with_filters(prep.pcc, fixed) if fixed else prep.pcc
    td = extend_td_for_filters(prep.td, fixed) if fixed else prep.td
    nice = normalize(td, build_incidence_graph(prog))
    if mode in ("credulous", "skeptical"):
        return solve_reasoning(prog, query, mode, nice=nice, budget=budget)
    return solve_consistency(prog, nice=nice, budget=budget)


def enumerate_with_dp(prep: _Prepared, budget: int | None = None) -> tuple[list[frozenset[str]], Verdict]:
    """All answer sets (restricted to the original atoms) by witness-guided branching.

    Each found answer set ``W`` fixes atoms one at a time to their value in
    ``W``; before fixing, the opposite value is explored as a new branch.
    Returns the sorted answer sets and the verdict of the unfiltered run.
    """
    atoms = list(prep.original.atoms)
    found: list[frozenset[str]] = []
    first = _solve(prep, "consistency", None, {}, budget)

    def explore(fixed: dict[str, bool], verdict: Verdict) -> None:
        if not verdict.answer:
            return
        w = verdict.witness & frozenset(atoms)
        fixed = dict(fixed)
        for a in atoms:
            if a in fixed:
                continue
            other = dict(fixed)
            other[a] = a not in w
            explore(other, _solve(prep, "consistency", None, other, budget))
            fixed[a] = a in w
        found.append(w)

    explore({}, first)
    return sorted(found, key=lambda s: (len(s), sorted(s))), first


def _oracle_answer(models: set[frozenset[str]], mode: str, query: str | None) -> bool:
    if mode == "credulous":
        return any(query in m for m in models)
    if mode == "skeptical":
        return all(query in m for m in models)
    return bool(models)


def _node_names(verdict: Verdict) -> dict[int, str]:
    nice = verdict.extra["result"].nice
    return {nid: f"n{src}" for src, nid in nice.by_source().items()}


def run(request: SolveRequest) -> Report:
    """Execute a request; errors propagate as exceptions (the CLI maps them to exit code 2)."""
    request.validate()
    program = parse_program(_read_source(request))
    if request.query and request.query not in program.atoms:
        raise RequestError(f"unknown query atom {request.query!r}")

    oracle_models = None
    oracle_note = None
    if request.oracle or request.allow_large_weights:
        if len(program.atoms) <= DEFAULT_EXHAUSTIVE_LIMIT:
            oracle_models = enumerate_answer_sets(program)
        else:
            oracle_note = f"skipped ({len(program.atoms)} atoms exceed the limit of {DEFAULT_EXHAUSTIVE_LIMIT})"

    start = time.perf_counter()
    try:
        prep = prepare(request, program)
    except WeightScaleError:
        if not request.allow_large_weights:
            raise
        if oracle_models is None:
            raise
        return _oracle_only_report(request, oracle_models, start)

    mode = request.mode
    models = None
    try:
        if mode == "enumerate":
            models, verdict = enumerate_with_dp(prep, request.budget)
            answer = bool(models)
        else:
            verdict = _solve(prep, mode, request.query, {}, request.budget)
            answer = verdict.answer
    except BudgetExceeded:
        if oracle_models is None:
            raise
        return _oracle_only_report(request, oracle_models, start, note="decided (dp budget exceeded)")

    lines = [_headline(mode, answer)]
    witness = None
    if verdict.witness is not None and (
        mode == "witness" or mode == "credulous" and answer or mode == "skeptical" and not answer
    ):
        witness = verdict.witness & frozenset(program.atoms)
    if models is not None:
        lines += [f"witness: {format_set(m)}" for m in models]
    elif witness is not None:
        lines.append(f"witness: {format_set(witness)}")
    st = verdict.stats
    stats = {"width": st.width, "nodes": st.nodes, "table_max": st.table_max, "time_ms": st.time_ms}
    lines.append(f"stats: width={st.width} nodes={st.nodes} table_max={st.table_max} time_ms={st.time_ms:.1f}")

    agrees = None
    if oracle_models is not None:
        if mode == "enumerate":
            agrees = set(models) == oracle_models
        else:
            agrees = _oracle_answer(oracle_models, mode, request.query) == answer
        lines.append("oracle: agree" if agrees else "oracle: DISAGREE")
    elif oracle_note:
        lines.append(f"oracle: {oracle_note}")

    if request.trace:
        result = verdict.extra["result"]
        graph = build_incidence_graph(result.program)
        Path(request.trace).write_text(format_trace(result, graph, _node_names(verdict)))

    code = 2 if agrees is False else (0 if answer else 1)
    return Report(answer, lines, code, witness, models, "dp", agrees, stats)


def _oracle_only_report(request: SolveRequest, models: set[frozenset[str]], start: float, note: str = "decided") -> Report:
    mode = request.mode
    answer = _oracle_answer(models, mode, request.query)
    ordered = sorted(models, key=lambda s: (len(s), sorted(s)))
    lines = [_headline(mode, answer)]
    witness = None
    if mode == "enumerate":
        lines += [f"witness: {format_set(m)}" for m in ordered]
    else:
        if mode == "witness" and answer:
            witness = ordered[0]
        elif mode == "credulous" and answer:
            witness = next(m for m in ordered if request.query in m)
        elif mode == "skeptical" and not answer:
            witness = next(m for m in ordered if request.query not in m)
        if witness is not None:
            lines.append(f"witness: {format_set(witness)}")
    elapsed = (time.perf_counter() - start) * 1000
    stats = {"width": None, "nodes": 0, "table_max": 0, "time_ms": elapsed}
    lines.append(f"stats: width=- nodes=0 table_max=0 time_ms={elapsed:.1f}")
    lines.append(f"oracle: {note}")
    return Report(answer, lines, 0 if answer else 1, witness, ordered if mode == "enumerate" else None, "oracle", None, stats)
