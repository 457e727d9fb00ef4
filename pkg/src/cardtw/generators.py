"""Seeded random instance generators."""

from __future__ import annotations

import random

from .program import Constraint, Literal, Program, Rule
from .transforms import MmoInstance


def random_program(
    seed: int,
    max_atoms: int = 6,
    max_constraints: int = 6,
    max_rules: int = 5,
    max_bound: int = 3,
    max_weight: int = 1,
    max_clause: int = 3,
    max_body: int = 2,
) -> Program:
    """Random program; ``max_weight=1`` gives a cardinality program."""
    rng = random.Random(seed)
    atoms = tuple(f"p{i}" for i in range(1, rng.randint(1, max_atoms) + 1))
    constraints = []
    for j in range(1, rng.randint(1, max_constraints) + 1):
        size = rng.randint(0, min(max_clause, 2 * len(atoms)))
        pairs = rng.sample([(a, neg) for a in atoms for neg in (False, True)], size)
        clause = tuple(Literal(a, neg, rng.randint(1, max_weight)) for a, neg in pairs)
        lower = rng.randint(0, max_bound)
        upper = None if rng.random() < 0.3 else rng.randint(lower, max_bound)
        constraints.append(Constraint(f"c{j}", clause, lower, upper))
    ids = [c.id for c in constraints]
    rules = []
    for k in range(1, rng.randint(0, max_rules) + 1):
        body = tuple(rng.sample(ids, rng.randint(0, min(max_body, len(ids)))))
        rules.append(Rule(f"r{k}", rng.choice(ids), body))
    return Program(atoms, tuple(constraints), tuple(rules))


def chain_program(steps: int = 10, seed: int | None = None) -> Program:
    """Path-like program with ``4 * steps`` elements and treewidth at most 2.

    Step ``i`` has atom ``a<i>``, body constraint ``b<i>`` over the previous
    atom, head constraint ``h<i>`` over ``a<i>`` and the previous atom, and
    rule ``r<i>: h<i> :- b<i>``.  Without a seed every atom is derived in
    turn; a seed flips polarities and bounds at random.
    """
    rng = random.Random(seed) if seed is not None else None
    atoms, constraints, rules = [], [], []
    for i in range(steps):
        a = f"a{i}"
        atoms.append(a)
        if i == 0:
            body = Constraint("b0", (), 0, None)
            head = Constraint("h0", (Literal(a),), 1, 1)
        else:
            prev = f"a{i - 1}"
            neg = rng is not None and rng.random() < 0.3
            body = Constraint(f"b{i}", (Literal(prev, neg),), 1, None)
            upper = 2 if rng is None else rng.choice([1, 2])
            head = Constraint(f"h{i}", (Literal(a), Literal(prev, True)), 1, upper)
        constraints += [body, head]
        rules.append(Rule(f"r{i}", head.id, (body.id,)))
    return Program(tuple(atoms), tuple(constraints), tuple(rules))


def random_partition_values(seed: int, max_n: int = 12, max_value: int = 20) -> list[int]:
    """Random multiset of positive integers with an even total."""
    rng = random.Random(seed)
    values = [rng.randint(1, max_value) for _ in range(rng.randint(1, max_n))]
    if sum(values) % 2:
        values[-1] += -1 if values[-1] == max_value or values[-1] > 1 and rng.random() < 0.5 else 1
    return values


def random_mmo(seed: int, max_vertices: int = 6, max_weight: int = 3, density: float = 0.5) -> MmoInstance:
    """Random weighted graph; the bound is the heaviest edge or one more, so both answers occur."""
    rng = random.Random(seed)
    n = rng.randint(2, max_vertices)
    vertices = tuple(range(n))
    weights = {}
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < density:
                weights[frozenset((u, v))] = rng.randint(1, max_weight)
    top = max(weights.values(), default=1)
    bound = rng.randint(top, top + 1)
    return MmoInstance(vertices, weights, bound)
