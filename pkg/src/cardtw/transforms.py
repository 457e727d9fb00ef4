"""Program transformations, reduction generators and their independent checkers."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .decomposition import TreeDecomposition
from .program import Constraint, Literal, Program, ProgramError, Rule


# --- weight clamping --------------------------------------------------------


def clamp_weights(program: Program) -> Program:
    """Cap literal weights at ``u + 1`` in constraints with a finite upper bound ``u``.

    Every weighted sum is only compared with bounds ``<= u``, and a single
    literal of weight ``u + 1`` already exceeds all of them, so satisfaction
    and reduct lower bounds are unchanged.
    """
    constraints = []
    for c in program.constraints:
        if c.upper is None:
            constraints.append(c)
            continue
        cap = c.upper + 1
        clause = tuple(Literal(l.atom, l.negative, min(l.weight, cap)) for l in c.clause)
        constraints.append(Constraint(c.id, clause, c.lower, c.upper))
    return Program(program.atoms, tuple(constraints), program.rules)


def _weight_cap(c: Constraint) -> int:
    # lower-bound-only constraints saturate at the lower bound
    return c.upper + 1 if c.upper is not None else max(c.lower, 1)


# --- unary weights to cardinality constraints -------------------------------


@dataclass(frozen=True)
class UnaryGadget:
    """Fresh material for an atom occurring with weight ``weight > 1`` in one constraint.

    The fresh atoms copy ``atom``: rule ``rule_up`` (body ``on``: atom true)
    forces and supports all copies, rule ``rule_down`` (body ``off``: atom
    false) forbids them.
    """

    atom: str
    constraint: str
    weight: int
    fresh: tuple[str, ...]
    up: str
    on: str
    rule_up: str
    down: str
    off: str
    rule_down: str

    def constraints(self) -> tuple[str, ...]:
        return (self.up, self.on, self.down, self.off)

    def rules(self) -> tuple[str, str]:
        return (self.rule_up, self.rule_down)


def unary_pwc_to_pcc(program: Program) -> tuple[Program, list[UnaryGadget]]:
    """Rewrite a weight program (unary-scale weights) into a cardinality program.

    A literal ``(l, j)`` over atom ``a`` becomes ``j`` weight-1 literals of the
    same polarity over ``a`` and fresh atoms ``a__w2@c … a__wj@c``.  Each
    fresh atom equals ``a`` in every answer set.  Weights are first capped at
    the constraint's saturation point, so no gadget bound exceeds the
    original constraint-width.
    """
    names = set(program.atoms) | {c.id for c in program.constraints} | {r.id for r in program.rules}
    atoms = list(program.atoms)
    constraints: list[Constraint] = []
    extra_constraints: list[Constraint] = []
    rules = list(program.rules)
    gadgets: list[UnaryGadget] = []

    def fresh(name: str) -> str:
        if name in names:
            raise ProgramError(f"generated name {name!r} collides with an existing element")
        names.add(name)
        return name

    for c in program.constraints:
        cap = _weight_cap(c)
        # copies are shared by the positive and negative literal over one atom
        need: dict[str, int] = {}
        for lit in c.clause:
            need[lit.atom] = max(need.get(lit.atom, 1), min(lit.weight, cap))
        copies_of: dict[str, tuple[str, ...]] = {}
        suffix = f"@{c.id}"
        for a, j in need.items():
            if j == 1:
                continue
            copies = tuple(fresh(f"{a}__w{alpha}{suffix}") for alpha in range(2, j + 1))
            copies_of[a] = copies
            atoms.extend(copies)
            g = UnaryGadget(
                a,
                c.id,
                j,
                copies,
                up=fresh(f"{a}__up{suffix}"),
                on=fresh(f"{a}__on{suffix}"),
                rule_up=fresh(f"{a}__rup{suffix}"),
                down=fresh(f"{a}__down{suffix}"),
                off=fresh(f"{a}__off{suffix}"),
                rule_down=fresh(f"{a}__rdown{suffix}"),
            )
            m = len(copies)
            ones = tuple(Literal(x) for x in copies)
            extra_constraints += [
                Constraint(g.up, ones, m, m),
                Constraint(g.on, (Literal(a),), 1, None),
                Constraint(g.down, ones, 0, 0),
                Constraint(g.off, (Literal(a),), 0, 0),
            ]
            rules += [Rule(g.rule_up, g.up, (g.on,)), Rule(g.rule_down, g.down, (g.off,))]
            gadgets.append(g)
        clause: list[Literal] = []
        for lit in c.clause:
            j = min(lit.weight, cap)
            clause.append(Literal(lit.atom, lit.negative, 1))
            clause.extend(Literal(x, lit.negative, 1) for x in copies_of.get(lit.atom, ())[: j - 1])
        constraints.append(Constraint(c.id, tuple(clause), c.lower, c.upper))
    return Program(tuple(atoms), tuple(constraints + extra_constraints), tuple(rules)), gadgets


def extend_td_for_unary(td: TreeDecomposition, gadgets: list[UnaryGadget]) -> TreeDecomposition:
    """Attach a pendant subtree per gadget at a bag holding both the atom and its constraint.

    Bags: ``{a, c, up, down}`` joined to ``{c, up, down, x}`` per copy ``x``
    (chained), ``{a, up, on, rule_up}`` and ``{a, down, off, rule_down}``;
    the width stays at most ``max(3, width)``.
    """
    bags = dict(td.bags)
    edges = list(td.edges)
    next_id = max(bags, default=-1) + 1

    def add(bag, parent) -> int:
        nonlocal next_id
        nid = next_id
        next_id += 1
        bags[nid] = frozenset(bag)
        edges.append((parent, nid))
        return nid

    for g in gadgets:
        host = next((n for n in sorted(td.bags) if {g.atom, g.constraint} <= td.bags[n]), None)
        if host is None:
            raise ValueError(f"no bag holds both {g.atom} and {g.constraint}")
        hub = add({g.atom, g.constraint, g.up, g.down}, host)
        prev = hub
        for x in g.fresh:
            prev = add({g.constraint, g.up, g.down, x}, prev)
        add({g.atom, g.up, g.on, g.rule_up}, hub)
        add({g.atom, g.down, g.off, g.rule_down}, hub)
    return TreeDecomposition(bags, edges, td.root)


# --- separating head and body roles -----------------------------------------


def separate_constraint_roles(program: Program) -> tuple[Program, dict[str, str]]:
    """Give every constraint that is both a rule head and a body member a body-only copy.

    The copy ``<cid>@body`` has the same clause and bounds and replaces the
    original in all rule bodies, so models and answer sets are unchanged.
    Returns the new program and the map original id -> copy id.
    """
    heads = {r.head for r in program.rules}
    bodies = {b for r in program.rules for b in r.body}
    dual = [c.id for c in program.constraints if c.id in heads and c.id in bodies]
    if not dual:
        return program, {}
    names = set(program.atoms) | {c.id for c in program.constraints} | {r.id for r in program.rules}
    record = {}
    for cid in dual:
        copy = f"{cid}@body"
        if copy in names:
            raise ProgramError(f"generated name {copy!r} collides with an existing element")
        record[cid] = copy
    constraints = []
    for c in program.constraints:
        constraints.append(c)
        if c.id in record:
            constraints.append(Constraint(record[c.id], c.clause, c.lower, c.upper))
    rules = tuple(Rule(r.id, r.head, tuple(record.get(b, b) for b in r.body)) for r in program.rules)
    return Program(program.atoms, tuple(constraints), rules), record


def extend_td_for_split(td: TreeDecomposition, record: dict[str, str]) -> TreeDecomposition:
    """Place each body copy in every bag holding its original."""
    bags = {n: bag | {record[v] for v in bag if v in record} for n, bag in td.bags.items()}
    return TreeDecomposition(bags, list(td.edges), td.root)


# --- Partition ----------------------------------------------------------------


class ReductionError(ValueError):
    pass


def partition_to_pwc(values: list[int] | tuple[int, ...]) -> Program:
    """Weight program that is consistent iff ``values`` splits into two equal halves."""
    if not values:
        raise ReductionError("need at least one value")
    if any(v < 1 for v in values):
        raise ReductionError("values must be positive integers")
    total = sum(values)
    if total % 2:
        raise ReductionError(f"total {total} is odd, so no equal split exists")
    atoms = tuple(f"a{i}" for i in range(1, len(values) + 1))
    c = Constraint("c", tuple(Literal(a, False, v) for a, v in zip(atoms, values)), total // 2, total // 2)
    return Program(atoms, (c,), (Rule("r", "c", ()),))


def subset_sum_half(values: list[int] | tuple[int, ...]) -> frozenset[int] | None:
    """Indices of a subset summing to half the total, by table-based subset sum."""
    total = sum(values)
    if total % 2:
        return None
    target = total // 2
    reach: dict[int, tuple[int, ...]] = {0: ()}
    for i, v in enumerate(values):
        for s, chosen in list(reach.items()):
            if s + v <= target and s + v not in reach:
                reach[s + v] = chosen + (i,)
    return frozenset(reach[target]) if target in reach else None


# --- Minimum Maximum Outdegree -------------------------------------------------


@dataclass(frozen=True)
class MmoInstance:
    """Weighted simple graph and outdegree bound; vertices are ordered ascending."""

    vertices: tuple
    weights: dict = field(hash=False)  # frozenset({u, v}) -> positive int
    bound: int

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ReductionError("duplicate vertex")
        if self.bound < 0:
            raise ReductionError("bound must be nonnegative")
        for e, w in self.weights.items():
            if len(e) != 2 or not e <= set(self.vertices):
                raise ReductionError(f"edge {sorted(e)} is a loop or uses an unknown vertex")
            if w < 1:
                raise ReductionError("edge weights must be positive")

    @property
    def ordered_vertices(self) -> list:
        return sorted(self.vertices)

    def ordered_edges(self) -> list[tuple]:
        rank = {v: i for i, v in enumerate(self.ordered_vertices)}
        return sorted((tuple(sorted(e, key=rank.get)) for e in self.weights), key=lambda uv: (rank[uv[0]], rank[uv[1]]))


def mmo_atom(u, v) -> str:
    return f"a_{u}_{v}"


def mmo_to_pwc(inst: MmoInstance) -> Program:
    """Atom ``a_u_v`` (``u`` before ``v``) true means the edge points from ``u`` to ``v``.

    Edges heavier than the bound are refused, except unit edges: they need
    no weight expansion and simply make the program inconsistent at bound 0.
    """
    heavy = [e for e, w in inst.weights.items() if w > max(inst.bound, 1)]
    if heavy:
        raise ReductionError(f"edge {sorted(heavy[0])} is heavier than the bound {inst.bound}")
    edges = inst.ordered_edges()
    atoms = tuple(mmo_atom(u, v) for u, v in edges)
    constraints, rules = [], []
    for v in inst.ordered_vertices:
        clause = []
        for u, w in edges:
            weight = inst.weights[frozenset((u, w))]
            if u == v:
                clause.append(Literal(mmo_atom(u, w), False, weight))
            elif w == v:
                clause.append(Literal(mmo_atom(u, w), True, weight))
        constraints.append(Constraint(f"c_{v}", tuple(clause), 0, inst.bound))
        rules.append(Rule(f"r_{v}", f"c_{v}", ()))
    return Program(atoms, tuple(constraints), tuple(rules))


def mmo_to_pcc(inst: MmoInstance) -> Program:
    return unary_pwc_to_pcc(mmo_to_pwc(inst))[0]


def extend_td_for_mmo(td_graph: TreeDecomposition, inst: MmoInstance) -> TreeDecomposition:
    """Turn a decomposition of the graph (bags of vertices) into one of the weight program.

    Vertex ``v`` becomes constraint ``c_v``; each edge and each vertex rule
    gets a pendant bag.  Width is at most ``max(2, width)``.
    """
    bags = {n: frozenset(f"c_{v}" for v in bag) for n, bag in td_graph.bags.items()}
    edges = list(td_graph.edges)
    next_id = max(bags, default=-1) + 1
    for u, v in inst.ordered_edges():
        host = next(n for n in sorted(td_graph.bags) if {u, v} <= td_graph.bags[n])
        bags[next_id] = frozenset({f"c_{u}", f"c_{v}", mmo_atom(u, v)})
        edges.append((host, next_id))
        next_id += 1
    for v in inst.ordered_vertices:
        host = next(n for n in sorted(td_graph.bags) if v in td_graph.bags[n])
        bags[next_id] = frozenset({f"c_{v}", f"r_{v}"})
        edges.append((host, next_id))
        next_id += 1
    return TreeDecomposition(bags, edges, td_graph.root)


def mmo_orientation_bruteforce(inst: MmoInstance) -> dict | None:
    """An orientation (edge -> tail vertex) with every weighted outdegree <= bound, or None."""
    edges = inst.ordered_edges()
    for choice in itertools.product((0, 1), repeat=len(edges)):
        out = {v: 0 for v in inst.vertices}
        for (u, v), flip in zip(edges, choice):
            out[v if flip else u] += inst.weights[frozenset((u, v))]
        if max(out.values(), default=0) <= inst.bound:
            return {frozenset(e): (e[1] if flip else e[0]) for e, flip in zip(edges, choice)}
    return None
