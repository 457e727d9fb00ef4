"""Bottom-up dynamic programming over a nice tree decomposition.

Each table entry is a :class:`BagAssignment`: a guess restricted to the
current bag of which atoms are true (``M``), which constraints will hold
(``C``), which rules are already satisfied (``R``), a linear order over
``M``, ``C`` and the bag rules, constraint counts ``rho`` (all literals) and
``lam`` (only atoms placed before the constraint), and a derivation witness
(``RD``, ``AD``, ``DH``, ``DB``, ``phi``) recording which rules derive which
atoms.  The empty assignment survives at the empty root bag iff the program
has an answer set.
"""

from __future__ import annotations

import math
import time
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

from .decomposition import (
    BRANCH,
    LEAF,
    IncidenceGraph,
    NiceDecomposition,
    build_incidence_graph,
)
from .orders import order_insertions, order_remove
from .program import Program, constraint_width

Pairs = tuple  # sorted tuple of (name, int)


class BagAssignment(NamedTuple):
    M: frozenset
    C: frozenset
    R: frozenset
    order: tuple
    rho: Pairs
    lam: Pairs
    RD: frozenset
    AD: frozenset
    DH: frozenset
    DB: frozenset
    phi: Pairs
    query: bool = False


EMPTY = BagAssignment(frozenset(), frozenset(), frozenset(), (), (), (), frozenset(), frozenset(), frozenset(), frozenset(), ())


def _pairs(d: dict) -> Pairs:
    return tuple(sorted(d.items()))


class BudgetExceeded(RuntimeError):
    """The total number of table entries passed the caller's budget."""


class TableSizeExceeded(AssertionError):
    pass


def table_ceiling(bag_size: int, k: int) -> int:
    """Sanity ceiling on the number of assignments for a bag of the given size."""
    return 2 ** (4 * bag_size) * math.factorial(bag_size) * k ** (2 * bag_size)


@dataclass
class _ConstraintInfo:
    pos: frozenset
    neg: frozenset
    lower: int
    upper: int | None


class BagDP:
    """Transition relation for one program.

    ``saturate=True`` caps stored counts at constraint-width + 1; every guard
    compares counts against bounds no larger than that, so capped values
    behave identically.  ``query`` names an atom whose truth is tracked in the
    ``query`` field of each assignment.
    """

    def __init__(self, program: Program, saturate: bool = True, query: str | None = None):
        program.require_pcc()
        if query is not None and query not in program.atoms:
            raise ValueError(f"unknown atom {query!r}")
        self.program = program
        self.query = query
        self.cap = constraint_width(program) + 1 if saturate else None
        self.cons = {
            c.id: _ConstraintInfo(c.positive_atoms, c.negative_atoms, c.lower, c.upper) for c in program.constraints
        }
        self.head = {r.id: r.head for r in program.rules}
        self.body = {r.id: frozenset(r.body) for r in program.rules}
        self.kind = {a: "atom" for a in program.atoms}
        self.kind.update({c: "constraint" for c in self.cons})
        self.kind.update({r: "rule" for r in self.head})

    # -- helpers --------------------------------------------------------

    def _add(self, value: int, delta: int) -> int:
        value += delta
        return value if self.cap is None else min(value, self.cap)

    def split_bag(self, bag: Iterable[str]) -> tuple[frozenset, frozenset, frozenset]:
        atoms, cons, rules = [], [], []
        for v in bag:
            {"atom": atoms, "constraint": cons, "rule": rules}[self.kind[v]].append(v)
        return frozenset(atoms), frozenset(cons), frozenset(rules)

    def car(self, c: str, M: frozenset, bag_atoms: frozenset) -> int:
        info = self.cons[c]
        return len(info.pos & M) + len(info.neg & (bag_atoms - M))

    def car_ord(self, c: str, M: frozenset, bag_atoms: frozenset, order: tuple) -> int:
        info = self.cons[c]
        before = order[: order.index(c)]
        return sum(1 for b in before if b in info.pos and b in M) + len(info.neg & (bag_atoms - M))

    def rule_satisfied(self, r: str, C: frozenset, bag_cons: frozenset) -> bool:
        return self.head[r] in C or not (self.body[r] & bag_cons) <= C

    # -- transitions ----------------------------------------------------

    def leaf_assignments(self, bag: frozenset = frozenset()) -> list[BagAssignment]:
        if bag:
            raise ValueError("leaf bags must be empty")
        return [EMPTY]

    def apply_transition(self, kind: str, element: str, bag: frozenset, t: BagAssignment) -> Iterator[BagAssignment]:
        """All assignments derivable from child assignment ``t`` at a node of the given kind.

        ``bag`` is the bag of the node itself (after the change).
        """
        if self.kind.get(element) is None:
            raise ValueError(f"unknown element {element!r}")
        expected = {"atom": ("AI", "AR"), "constraint": ("CI", "CR"), "rule": ("RI", "RR")}[self.kind[element]]
        if kind not in expected:
            raise ValueError(f"node kind {kind} does not fit element {element!r}")
        return getattr(self, "_" + kind)(element, bag, t)

    def _RR(self, r: str, bag: frozenset, t: BagAssignment):
        if r not in t.R:
            return
        yield t._replace(R=t.R - {r}, order=order_remove(t.order, r), RD=t.RD - {r})

    def _RI(self, r: str, bag: frozenset, t: BagAssignment):
        _, bag_cons, _ = self.split_bag(bag)
        R = t.R | {r} if self.rule_satisfied(r, t.C, bag_cons) else t.R
        head = self.head[r]
        head_in_bag = head in bag_cons
        bag_body = self.body[r] & bag_cons
        body_ok = bag_body <= t.C
        head_ok = not head_in_bag or head in t.DH
        for order in order_insertions(t.order, r):
            base = t._replace(R=R, order=order)
            yield base  # r not used
            if not (body_ok and head_ok):
                continue
            pos = order.index(r)
            if head_in_bag and order.index(head) < pos:
                continue
            if any(order.index(b) > pos for b in bag_body):
                continue
            phi = t.phi
            if head_in_bag:
                d = dict(phi)
                d[head] = 1
                phi = _pairs(d)
            yield base._replace(RD=t.RD | {r}, DB=t.DB | bag_body, phi=phi)

    def _AR(self, a: str, bag: frozenset, t: BagAssignment):
        if a in t.M:
            if a not in t.AD:
                return
            yield t._replace(M=t.M - {a}, order=order_remove(t.order, a), AD=t.AD - {a})
        else:
            yield t

    def _AI(self, a: str, bag: frozenset, t: BagAssignment):
        _, bag_cons, _ = self.split_bag(bag)
        # false
        rho = dict(t.rho)
        lam = dict(t.lam)
        for c in bag_cons:
            if a in self.cons[c].neg:
                rho[c] = self._add(rho[c], 1)
                if c in t.C:
                    lam[c] = self._add(lam[c], 1)
        yield t._replace(rho=_pairs(rho), lam=_pairs(lam))
        # true
        rho = dict(t.rho)
        for c in bag_cons:
            if a in self.cons[c].pos:
                rho[c] = self._add(rho[c], 1)
        rho_t = _pairs(rho)
        M = t.M | {a}
        query = t.query or a == self.query
        for order in order_insertions(t.order, a):
            pos = order.index(a)
            lam = dict(t.lam)
            for c in t.C:
                if a in self.cons[c].pos and pos < order.index(c):
                    lam[c] = self._add(lam[c], 1)
            derived = any(a in self.cons[c].pos and order.index(c) < pos for c in t.DH)
            yield t._replace(
                M=M, order=order, rho=rho_t, lam=_pairs(lam), AD=t.AD | {a} if derived else t.AD, query=query
            )

    def _CR(self, c: str, bag: frozenset, t: BagAssignment):
        info = self.cons[c]
        rho = dict(t.rho)
        value = rho.pop(c)
        sat = info.lower <= value and (info.upper is None or value <= info.upper)
        if sat != (c in t.C):
            return
        phi = dict(t.phi)
        if c in t.DH and phi[c] != 1:
            return
        lam = dict(t.lam)
        if c in t.DB and lam[c] < info.lower:
            return
        lam.pop(c, None)
        phi.pop(c, None)
        order = order_remove(t.order, c) if c in t.C else t.order
        yield t._replace(
            C=t.C - {c}, order=order, rho=_pairs(rho), lam=_pairs(lam), DH=t.DH - {c}, DB=t.DB - {c}, phi=_pairs(phi)
        )

    def _CI(self, c: str, bag: frozenset, t: BagAssignment):
        bag_atoms, bag_cons, bag_rules = self.split_bag(bag)
        count = self.car(c, t.M, bag_atoms)
        rho = dict(t.rho)
        rho[c] = count if self.cap is None else min(count, self.cap)
        rho_t = _pairs(rho)
        in_body = [r for r in t.RD if c in self.body[r]]
        is_head = [r for r in t.RD if self.head[r] == c]
        # false
        if not in_body and not is_head:
            R = t.R | {r for r in bag_rules if self.rule_satisfied(r, t.C, bag_cons)}
            yield t._replace(R=R, rho=rho_t)
        # true
        C = t.C | {c}
        R = t.R | {r for r in bag_rules if self.rule_satisfied(r, C, bag_cons)}
        DB = t.DB | {c} if in_body else t.DB
        head_options = [True] if is_head else [False, True]
        for order in order_insertions(t.order, c):
            pos = order.index(c)
            if any(order.index(r) < pos for r in in_body) or any(order.index(r) > pos for r in is_head):
                continue
            lam = dict(t.lam)
            lam[c] = self.car_ord(c, t.M, bag_atoms, order)
            if self.cap is not None:
                lam[c] = min(lam[c], self.cap)
            lam_t = _pairs(lam)
            for as_head in head_options:
                if as_head:
                    AD = t.AD | {a for a in t.M if a in self.cons[c].pos and order.index(a) > pos}
                    phi = dict(t.phi)
                    phi[c] = 1 if is_head else 0
                    yield t._replace(
                        C=C, R=R, order=order, rho=rho_t, lam=lam_t, AD=AD, DH=t.DH | {c}, DB=DB, phi=_pairs(phi)
                    )
                else:
                    yield t._replace(C=C, R=R, order=order, rho=rho_t, lam=lam_t, DB=DB)

    def join_key(self, t: BagAssignment) -> tuple:
        return (t.M, t.C, t.order, t.RD, t.DH)

    def combine_branch(self, bag: frozenset, left: BagAssignment, right: BagAssignment) -> BagAssignment | None:
        if self.join_key(left) != self.join_key(right):
            return None
        bag_atoms, _, _ = self.split_bag(bag)
        lrho, rrho = dict(left.rho), dict(right.rho)
        rho = {c: self._merge(lrho[c], rrho[c], self.car(c, left.M, bag_atoms)) for c in lrho}
        llam, rlam = dict(left.lam), dict(right.lam)
        lam = {c: self._merge(llam[c], rlam[c], self.car_ord(c, left.M, bag_atoms, left.order)) for c in llam}
        lphi, rphi = dict(left.phi), dict(right.phi)
        phi = {c: max(lphi[c], rphi[c]) for c in lphi}
        return left._replace(
            R=left.R | right.R,
            rho=_pairs(rho),
            lam=_pairs(lam),
            AD=left.AD | right.AD,
            DB=left.DB | right.DB,
            phi=_pairs(phi),
            query=left.query or right.query,
        )

    def _merge(self, x: int, y: int, shared: int) -> int:
        # a capped side already exceeds every bound; the merged value does too
        if self.cap is not None and (x >= self.cap or y >= self.cap):
            return self.cap
        value = x + y - shared
        return value if self.cap is None else min(value, self.cap)


# --- table computation ----------------------------------------------------


@dataclass
class DPResult:
    tables: dict[int, dict[BagAssignment, tuple]]  # entry -> backpointer (child entries)
    nice: NiceDecomposition
    program: Program
    time_ms: float
    table_max: int
    retained: bool = True

    @property
    def root_table(self) -> dict[BagAssignment, tuple]:
        return self.tables[self.nice.root]


def compute_tables(
    program: Program,
    nice: NiceDecomposition,
    saturate: bool = True,
    query: str | None = None,
    check_ceiling: bool = False,
    keep_all: bool = True,
    budget: int | None = None,
) -> DPResult:
    """Fill every node table in post-order.

    With ``keep_all=False`` child tables are dropped once their parent is
    done, which keeps memory low but disables witness extraction.
    ``budget`` bounds the total number of entries over all tables.
    """
    dp = BagDP(program, saturate=saturate, query=query)
    start = time.perf_counter()
    tables: dict[int, dict[BagAssignment, tuple]] = {}
    table_max = 0
    total = 0
    k = constraint_width(program) + 1
    for nid in nice.postorder():
        node = nice.nodes[nid]
        table: dict[BagAssignment, tuple] = {}
        if node.kind == LEAF:
            for t in dp.leaf_assignments(node.bag):
                table[t] = ()
        elif node.kind == BRANCH:
            left, right = (tables[c] for c in node.children)
            index: dict[tuple, list[BagAssignment]] = defaultdict(list)
            for t in right:
                index[dp.join_key(t)].append(t)
            for t in left:
                for u in index.get(dp.join_key(t), ()):
                    merged = dp.combine_branch(node.bag, t, u)
                    if merged not in table:
                        table[merged] = (t, u)
        else:
            (child,) = node.children
            for t in tables[child]:
                for u in dp.apply_transition(node.kind, node.element, node.bag, t):
                    if u not in table:
                        table[u] = (t,)
        if check_ceiling and len(table) > table_ceiling(len(node.bag), k):
            raise TableSizeExceeded(f"node {nid}: {len(table)} assignments exceed the ceiling")
        tables[nid] = table
        table_max = max(table_max, len(table))
        total += len(table)
        if budget is not None and total > budget:
            raise BudgetExceeded(f"more than {budget} table entries")
        if not keep_all:
            for c in node.children:
                del tables[c]
    elapsed = (time.perf_counter() - start) * 1000
    return DPResult(tables, nice, program, elapsed, table_max, keep_all)


def root_accepts(result: DPResult) -> bool:
    return any(t.M == frozenset() for t in result.root_table)


def extract_witness(result: DPResult, query_value: bool | None = None) -> frozenset[str] | None:
    """Collect the atoms of one derivation of a root entry (optionally with a fixed query flag)."""
    if not result.retained:
        raise ValueError("tables were not retained")
    roots = [t for t in result.root_table if query_value is None or t.query == query_value]
    if not roots:
        return None
    atoms: set[str] = set()
    stack = [(result.nice.root, min(roots, key=_entry_sort_key))]
    while stack:
        nid, entry = stack.pop()
        atoms |= entry.M
        back = result.tables[nid][entry]
        for child, sub in zip(result.nice.nodes[nid].children, back):
            stack.append((child, sub))
    return frozenset(atoms)


def _entry_sort_key(t: BagAssignment):
    return (t.query, repr(t))


# --- high level -------------------------------------------------------------


@dataclass
class SolveStats:
    width: int
    nodes: int
    table_max: int
    time_ms: float


@dataclass
class Verdict:
    answer: bool
    witness: frozenset[str] | None
    stats: SolveStats
    extra: dict = field(default_factory=dict)


def _prepare(program: Program, nice: NiceDecomposition | None, heuristic: str = "min-fill", seed: int | None = None):
    """Make the program safe for the transition relation and return a matching decomposition.

    Constraints used both as a rule head and inside a rule body get a body
    copy (see :func:`separate_constraint_roles`); the decomposition is
    extended accordingly.
    """
    from .decomposition import heuristic_decompose, normalize
    from .transforms import extend_td_for_split, separate_constraint_roles

    split, record = separate_constraint_roles(program)
    if nice is None:
        graph = build_incidence_graph(split)
        td = heuristic_decompose(graph, heuristic, seed)
        return split, normalize(td, graph)
    if not record:
        return program, nice
    graph = build_incidence_graph(split)
    td = extend_td_for_split(nice.as_tree_decomposition(), record)
    return split, normalize(td, graph, root=nice.root)


def _stats(nice: NiceDecomposition, result: DPResult) -> SolveStats:
    return SolveStats(nice.width, len(nice.nodes), result.table_max, result.time_ms)


def solve_consistency(
    program: Program,
    nice: NiceDecomposition | None = None,
    saturate: bool = True,
    witness: bool = True,
    heuristic: str = "min-fill",
    seed: int | None = None,
    budget: int | None = None,
) -> Verdict:
    """Decide whether the cardinality program has an answer set."""
    program.require_pcc()
    prog, nd = _prepare(program, nice, heuristic, seed)
    result = compute_tables(prog, nd, saturate=saturate, keep_all=witness, budget=budget)
    ok = root_accepts(result)
    wit = extract_witness(result) if (ok and witness) else None
    if wit is not None:
        wit = wit & frozenset(program.atoms)
    return Verdict(ok, wit, _stats(nd, result), {"result": result})


def solve_reasoning(
    program: Program,
    atom: str,
    mode: str,
    nice: NiceDecomposition | None = None,
    saturate: bool = True,
    witness: bool = True,
    heuristic: str = "min-fill",
    seed: int | None = None,
    budget: int | None = None,
) -> Verdict:
    """Credulous: ``atom`` is in some answer set.  Skeptical: in every one (vacuously true without any)."""
    program.require_pcc()
    if atom not in program.atoms:
        raise ValueError(f"unknown atom {atom!r}")
    if mode not in ("credulous", "skeptical"):
        raise ValueError(f"unknown reasoning mode {mode!r}")
    prog, nd = _prepare(program, nice, heuristic, seed)
    result = compute_tables(prog, nd, saturate=saturate, query=atom, keep_all=witness, budget=budget)
    flags = {t.query for t in result.root_table}
    consistent = bool(flags)
    wit = None
    if mode == "credulous":
        answer = True in flags
        if answer and witness:
            wit = extract_witness(result, query_value=True)
    else:
        answer = False not in flags
        if not answer and witness:
            # a counter-model: an answer set without the atom
            wit = extract_witness(result, query_value=False)
    if wit is not None:
        wit = wit & frozenset(program.atoms)
    return Verdict(answer, wit, _stats(nd, result), {"consistent": consistent, "result": result})


# --- trace output -----------------------------------------------------------


def format_assignment(t: BagAssignment, graph: IncidenceGraph, node_label: str | None = None) -> str:
    """Render an assignment as ``(M, C, R, [order], rho, lam, (RD, AD, DH, DB, phi))``."""

    def s(items) -> str:
        return "{" + ", ".join(graph.sorted(items)) + "}"

    def p(pairs) -> str:
        d = dict(pairs)
        return "{" + ", ".join(f"({k},{d[k]})" for k in graph.sorted(d)) + "}"

    parts = [
        s(t.M),
        s(t.C),
        s(t.R),
        "[" + ",".join(t.order) + "]",
        p(t.rho),
        p(t.lam),
        f"({s(t.RD)}, {s(t.AD)}, {s(t.DH)}, {s(t.DB)}, {p(t.phi)})",
    ]
    if node_label is not None:
        parts.insert(0, node_label)
    return "(" + ", ".join(parts) + ")"


def format_trace(result: DPResult, graph: IncidenceGraph, names: dict[int, str] | None = None) -> str:
    """Deterministic per-node listing of every table, children before parents."""
    lines = []
    for nid in result.nice.postorder():
        node = result.nice.nodes[nid]
        name = names.get(nid, f"n{nid}") if names else f"n{nid}"
        bag = ",".join(graph.sorted(node.bag))
        lines.append(f"node {name} {node.label()} bag={{{bag}}} size={len(result.tables[nid])}")
        rendered = sorted(format_assignment(t, graph) for t in result.tables[nid])
        lines += ["  " + r for r in rendered]
    return "\n".join(lines) + "\n"
