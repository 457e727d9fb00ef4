"""Incidence graphs, tree decompositions and nice (normalized) decompositions.

Vertices are element names (atom, constraint and rule names are unique
across kinds).  Bags are frozensets of names.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_degree, treewidth_min_fill_in

from .program import Program

ATOM, CONSTRAINT, RULE = "atom", "constraint", "rule"
_KIND_RANK = {ATOM: 0, CONSTRAINT: 1, RULE: 2}

# nice node kinds
LEAF, BRANCH = "L", "B"
INTRODUCE = {ATOM: "AI", CONSTRAINT: "CI", RULE: "RI"}
REMOVE = {ATOM: "AR", CONSTRAINT: "CR", RULE: "RR"}


@dataclass(frozen=True)
class EdgeLabel:
    """Polarity/weight labels on atom-constraint edges, role labels on constraint-rule edges."""

    polarity: frozenset[str] = frozenset()  # subset of {"+", "-"}
    weight: tuple[int, ...] = ()
    role: frozenset[str] = frozenset()  # subset of {"h", "b"}


@dataclass(frozen=True)
class IncidenceGraph:
    vertices: tuple[str, ...]
    kinds: dict[str, str]
    adjacency: dict[str, frozenset[str]]
    labels: dict[frozenset, EdgeLabel]

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @property
    def edges(self) -> list[tuple[str, str]]:
        out = []
        for v in self.vertices:
            for w in self.adjacency[v]:
                if self.index[v] < self.index[w]:
                    out.append((v, w))
        return out

    def sort_key(self, v: str) -> tuple[int, int]:
        return (_KIND_RANK[self.kinds[v]], self.index[v])

    def sorted(self, vertices: Iterable[str]) -> list[str]:
        return sorted(vertices, key=self.sort_key)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g


def build_incidence_graph(program: Program) -> IncidenceGraph:
    vertices = (*program.atoms, *(c.id for c in program.constraints), *(r.id for r in program.rules))
    kinds = {a: ATOM for a in program.atoms}
    kinds.update({c.id: CONSTRAINT for c in program.constraints})
    kinds.update({r.id: RULE for r in program.rules})
    adjacency: dict[str, set[str]] = {v: set() for v in vertices}
    polarity: dict[frozenset, set[str]] = {}
    weights: dict[frozenset, list[int]] = {}
    roles: dict[frozenset, set[str]] = {}
    for c in program.constraints:
        for lit in c.clause:
            e = frozenset((lit.atom, c.id))
            adjacency[lit.atom].add(c.id)
            adjacency[c.id].add(lit.atom)
            polarity.setdefault(e, set()).add("-" if lit.negative else "+")
            weights.setdefault(e, []).append(lit.weight)
    for r in program.rules:
        for cid, role in [(r.head, "h"), *((b, "b") for b in r.body)]:
            e = frozenset((cid, r.id))
            adjacency[cid].add(r.id)
            adjacency[r.id].add(cid)
            roles.setdefault(e, set()).add(role)
    labels = {e: EdgeLabel(frozenset(p), tuple(weights[e])) for e, p in polarity.items()}
    labels.update({e: EdgeLabel(role=frozenset(rs)) for e, rs in roles.items()})
    return IncidenceGraph(
        tuple(vertices), kinds, {v: frozenset(ns) for v, ns in adjacency.items()}, labels
    )


@dataclass
class TreeDecomposition:
    """A tree decomposition: node id -> bag, plus the tree edges.

    ``root`` is an optional hint used by :func:`normalize`.
    """

    bags: dict[int, frozenset[str]]
    edges: list[tuple[int, int]] = field(default_factory=list)
    root: int | None = None

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def neighbors(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {n: [] for n in self.bags}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for n in adj:
            adj[n].sort()
        return adj


def heuristic_decompose(graph: IncidenceGraph, heuristic: str = "min-fill", seed: int | None = None) -> TreeDecomposition:
    """Tree decomposition from a greedy elimination ordering (networkx).

    A seed shuffles vertex insertion order, which changes tie-breaking.
    """
    vertices = list(graph.vertices)
    if seed is not None:
        random.Random(seed).shuffle(vertices)
    g = nx.Graph()
    g.add_nodes_from(vertices)
    g.add_edges_from((v, w) for v in vertices for w in graph.adjacency[v] if v < w)
    if g.number_of_nodes() == 0:
        return TreeDecomposition({0: frozenset()}, [], 0)
    if heuristic == "min-fill":
        _, tree = treewidth_min_fill_in(g)
    elif heuristic == "min-degree":
        _, tree = treewidth_min_degree(g)
    else:
        raise ValueError(f"unknown heuristic {heuristic!r}")
    ordered = sorted(tree.nodes, key=lambda b: sorted(graph.sort_key(v) for v in b))
    ids = {bag: i for i, bag in enumerate(ordered)}
    edges = sorted(tuple(sorted((ids[u], ids[v]))) for u, v in tree.edges)
    td = TreeDecomposition({ids[b]: frozenset(b) for b in ordered}, edges)
    return _connect_forest(td)


def _connect_forest(td: TreeDecomposition) -> TreeDecomposition:
    # networkx returns one tree per component; link components by arbitrary edges
    adj = td.neighbors()
    seen: set[int] = set()
    comps = []
    for n in sorted(td.bags):
        if n in seen:
            continue
        comp = []
        queue = deque([n])
        seen.add(n)
        while queue:
            x = queue.popleft()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        comps.append(min(comp))
    edges = list(td.edges) + [(comps[0], c) for c in comps[1:]]
    return TreeDecomposition(td.bags, edges, td.root)


def is_tree(td: TreeDecomposition) -> bool:
    n = len(td.bags)
    if n == 0 or len(td.edges) != n - 1:
        return False
    if any(u not in td.bags or v not in td.bags or u == v for u, v in td.edges):
        return False
    adj = td.neighbors()
    start = next(iter(td.bags))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == n


def validate_td(graph: IncidenceGraph, td: TreeDecomposition) -> bool:
    if not is_tree(td):
        return False
    vertices = set(graph.vertices)
    if any(not bag <= vertices for bag in td.bags.values()):
        return False
    covered = set().union(*td.bags.values())
    if covered != vertices:
        return False
    for v, w in graph.edges:
        if not any(v in bag and w in bag for bag in td.bags.values()):
            return False
    # connectedness: the nodes holding a vertex induce a subtree
    adj = td.neighbors()
    for v in vertices:
        holders = {n for n, bag in td.bags.items() if v in bag}
        start = next(iter(holders))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in holders and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != holders:
            return False
    return True


# --- nice decompositions ---------------------------------------------------


@dataclass
class NiceNode:
    id: int
    kind: str
    bag: frozenset[str]
    children: tuple[int, ...] = ()
    element: str | None = None
    source: int | None = None  # node of the input decomposition this node stands for

    def label(self) -> str:
        if self.kind in (LEAF, BRANCH):
            return f"({self.kind})"
        return f"({self.element}-{self.kind})"


@dataclass
class NiceDecomposition:
    nodes: dict[int, NiceNode]
    root: int

    @property
    def width(self) -> int:
        return max(len(n.bag) for n in self.nodes.values()) - 1

    def postorder(self) -> list[int]:
        order: list[int] = []
        stack = [(self.root, False)]
        while stack:
            n, done = stack.pop()
            if done:
                order.append(n)
                continue
            stack.append((n, True))
            for c in reversed(self.nodes[n].children):
                stack.append((c, False))
        return order

    def parents(self) -> dict[int, int]:
        return {c: n.id for n in self.nodes.values() for c in n.children}

    def subtree(self, node: int) -> list[int]:
        out = []
        stack = [node]
        while stack:
            n = stack.pop()
            out.append(n)
            stack.extend(self.nodes[n].children)
        return out

    def by_source(self) -> dict[int, int]:
        return {n.source: n.id for n in self.nodes.values() if n.source is not None}

    def as_tree_decomposition(self) -> TreeDecomposition:
        edges = [(n.id, c) for n in self.nodes.values() for c in n.children]
        return TreeDecomposition({n.id: n.bag for n in self.nodes.values()}, edges, self.root)


def normalize(td: TreeDecomposition, graph: IncidenceGraph, root: int | None = None) -> NiceDecomposition:
    """Turn a tree decomposition into a nice one with empty root and leaf bags.

    Between a node and its parent, elements are first removed, then
    introduced; within each chain atoms come before constraints before rules.
    """
    if root is None:
        root = td.root if td.root is not None else min(td.bags)
    adj = td.neighbors()
    parent = {root: None}
    order = [root]
    for x in order:
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)
    children = {x: [y for y in adj[x] if parent.get(y) == x] for x in td.bags}

    nodes: dict[int, NiceNode] = {}

    def new(kind, bag, kids=(), element=None) -> int:
        nid = len(nodes)
        nodes[nid] = NiceNode(nid, kind, frozenset(bag), tuple(kids), element)
        return nid

    def chain(start: int, src: frozenset[str], dst: frozenset[str]) -> int:
        cur, bag = start, set(src)
        for v in graph.sorted(src - dst):
            bag.discard(v)
            cur = new(REMOVE[graph.kinds[v]], bag, (cur,), v)
        for v in graph.sorted(dst - src):
            bag.add(v)
            cur = new(INTRODUCE[graph.kinds[v]], bag, (cur,), v)
        return cur

    top: dict[int, int] = {}
    for t in reversed(order):
        bag = td.bags[t]
        kids = children[t]
        if not kids:
            cur = chain(new(LEAF, ()), frozenset(), bag)
        else:
            ends = [chain(top[k], td.bags[k], bag) for k in kids]
            cur = ends[0]
            for e in ends[1:]:
                cur = new(BRANCH, bag, (cur, e))
        nodes[cur].source = t
        top[t] = cur
    final = chain(top[root], td.bags[root], frozenset())
    return NiceDecomposition(nodes, final)


def validate_nice(graph: IncidenceGraph, nice: NiceDecomposition) -> bool:
    """Check the structural conditions of a nice decomposition and its validity."""
    if nice.nodes[nice.root].bag:
        return False
    seen = nice.postorder()
    if len(seen) != len(nice.nodes) or len(set(seen)) != len(seen):
        return False
    for n in nice.nodes.values():
        kids = [nice.nodes[c] for c in n.children]
        if not kids:
            if n.kind != LEAF or n.bag:
                return False
        elif len(kids) == 2:
            if n.kind != BRANCH or kids[0].bag != n.bag or kids[1].bag != n.bag:
                return False
        elif len(kids) == 1:
            child = kids[0].bag
            if len(n.bag ^ child) != 1:
                return False
            (e,) = n.bag ^ child
            expected = INTRODUCE[graph.kinds[e]] if e in n.bag else REMOVE[graph.kinds[e]]
            if n.kind != expected or n.element != e:
                return False
        else:
            return False
    return validate_td(graph, nice.as_tree_decomposition())


# --- PACE-style text format ------------------------------------------------


def write_td(td: TreeDecomposition, graph: IncidenceGraph) -> str:
    ids = {v: i + 1 for i, v in enumerate(graph.vertices)}
    lines = [f"c v {ids[v]} {graph.kinds[v]} {v}" for v in graph.vertices]
    if td.root is not None:
        lines.append(f"c root {td.root}")
    lines.append(f"s td {len(td.bags)} {td.width + 1} {len(graph.vertices)}")
    for n in sorted(td.bags):
        members = " ".join(str(ids[v]) for v in graph.sorted(td.bags[n]))
        lines.append(f"b {n} {members}".rstrip())
    lines += [f"{u} {v}" for u, v in td.edges]
    return "\n".join(lines) + "\n"


class DecompositionFormatError(ValueError):
    pass


def read_td(text: str, graph: IncidenceGraph) -> TreeDecomposition:
    """Parse the PACE-style format; vertex ``i`` is the i-th graph vertex (1-based).

    Legend lines ``c v <id> <kind> <name>`` are checked against the graph when
    present; ``c root <bag-id>`` sets the root hint.
    """
    header = None
    bags: dict[int, frozenset[str]] = {}
    edges: list[tuple[int, int]] = []
    root = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts:
            continue
        try:
            if parts[0] == "c":
                if len(parts) >= 5 and parts[1] == "v":
                    i, name = int(parts[2]), parts[4]
                    if i < 1 or i > len(graph.vertices) or graph.vertices[i - 1] != name:
                        raise DecompositionFormatError(f"line {lineno}: legend entry {i}={name} does not match the program")
                elif len(parts) == 3 and parts[1] == "root":
                    root = int(parts[2])
                continue
            if parts[0] == "s":
                if len(parts) != 5 or parts[1] != "td":
                    raise DecompositionFormatError(f"line {lineno}: malformed header")
                header = tuple(int(x) for x in parts[2:])
                if header[2] != len(graph.vertices):
                    raise DecompositionFormatError(
                        f"line {lineno}: header declares {header[2]} vertices, program has {len(graph.vertices)}"
                    )
                continue
            if header is None:
                raise DecompositionFormatError(f"line {lineno}: content before 's td' header")
            if parts[0] == "b":
                members = [int(x) for x in parts[2:]]
                if any(m < 1 or m > len(graph.vertices) for m in members):
                    raise DecompositionFormatError(f"line {lineno}: vertex id out of range")
                bags[int(parts[1])] = frozenset(graph.vertices[m - 1] for m in members)
            else:
                if len(parts) != 2:
                    raise DecompositionFormatError(f"line {lineno}: expected an edge '<bag> <bag>'")
                edges.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            if isinstance(exc, DecompositionFormatError):
                raise
            raise DecompositionFormatError(f"line {lineno}: {exc}") from exc
    if header is None:
        raise DecompositionFormatError("missing 's td' header")
    if len(bags) != header[0]:
        raise DecompositionFormatError(f"header declares {header[0]} bags, found {len(bags)}")
    return TreeDecomposition(bags, edges, root)
