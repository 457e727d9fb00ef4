"""Programs with weight/cardinality constraints and their stable-model semantics.

A program is a triple of atoms, constraints and rules.  Every element is
identified by its name; names are unique across all three kinds so that a
name doubles as the vertex label in the incidence graph and as an item of a
linear order.

This module also hosts the exhaustive reference oracles (subset enumeration,
least fixpoint, order-based characterization) used to check the solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

Interpretation = frozenset  # frozenset[str] of atom names

DEFAULT_EXHAUSTIVE_LIMIT = 20


class ProgramError(ValueError):
    """Raised for malformed programs (unknown names, bad bounds, duplicates)."""


class CapacityError(RuntimeError):
    """Raised when an exhaustive procedure would exceed its configured limit."""


class NotPCCError(ValueError):
    """Raised when an operation defined for cardinality programs gets weights."""


@dataclass(frozen=True, order=True)
class Literal:
    atom: str
    negative: bool = False
    weight: int = 1

    def __post_init__(self):
        if not isinstance(self.weight, int) or self.weight < 1:
            raise ProgramError(f"literal over {self.atom!r} has nonpositive weight {self.weight!r}")

    def __str__(self) -> str:
        return f"{self.weight}*{'~' if self.negative else ''}{self.atom}"


@dataclass(frozen=True)
class Constraint:
    """A weight constraint ``(clause, lower, upper)``; ``upper=None`` means unbounded."""

    id: str
    clause: tuple[Literal, ...] = ()
    lower: int = 0
    upper: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "clause", tuple(self.clause))
        if self.lower < 0 or (self.upper is not None and self.upper < 0):
            raise ProgramError(f"constraint {self.id}: negative bound")
        if self.upper is not None and self.lower > self.upper:
            raise ProgramError(f"constraint {self.id}: lower bound {self.lower} exceeds upper bound {self.upper}")
        seen = set()
        for lit in self.clause:
            key = (lit.atom, lit.negative)
            if key in seen:
                raise ProgramError(
                    f"constraint {self.id}: duplicate literal {'~' if lit.negative else ''}{lit.atom}"
                )
            seen.add(key)

    @property
    def positive_atoms(self) -> frozenset[str]:
        return frozenset(lit.atom for lit in self.clause if not lit.negative)

    @property
    def negative_atoms(self) -> frozenset[str]:
        return frozenset(lit.atom for lit in self.clause if lit.negative)

    def atoms(self) -> frozenset[str]:
        return frozenset(lit.atom for lit in self.clause)


@dataclass(frozen=True)
class Rule:
    id: str
    head: str
    body: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "body", tuple(dict.fromkeys(self.body)))


@dataclass(frozen=True)
class Program:
    atoms: tuple[str, ...] = ()
    constraints: tuple[Constraint, ...] = ()
    rules: tuple[Rule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "rules", tuple(self.rules))
        names: set[str] = set()
        for name in (*self.atoms, *(c.id for c in self.constraints), *(r.id for r in self.rules)):
            if name in names:
                raise ProgramError(f"name {name!r} is declared twice")
            names.add(name)
        atoms = set(self.atoms)
        for c in self.constraints:
            for lit in c.clause:
                if lit.atom not in atoms:
                    raise ProgramError(f"constraint {c.id} mentions unknown atom {lit.atom!r}")
        cids = {c.id for c in self.constraints}
        for r in self.rules:
            for cid in (r.head, *r.body):
                if cid not in cids:
                    raise ProgramError(f"rule {r.id} mentions unknown constraint {cid!r}")

    @cached_property
    def constraint_map(self) -> dict[str, Constraint]:
        return {c.id: c for c in self.constraints}

    @cached_property
    def rule_map(self) -> dict[str, Rule]:
        return {r.id: r for r in self.rules}

    def constraint(self, cid: str) -> Constraint:
        return self.constraint_map[cid]

    @property
    def kind(self) -> str:
        if all(lit.weight == 1 for c in self.constraints for lit in c.clause):
            return "PCC"
        return "PWC"

    @property
    def is_pcc(self) -> bool:
        return self.kind == "PCC"

    def require_pcc(self) -> None:
        if not self.is_pcc:
            raise NotPCCError("operation requires a program with cardinality constraints (all weights 1)")


def constraint_width(program: Program) -> int:
    """Largest finite lower or upper bound in the program (0 if there is none)."""
    bounds = [0]
    for c in program.constraints:
        bounds.append(c.lower)
        if c.upper is not None:
            bounds.append(c.upper)
    return max(bounds)


# --- classical semantics -------------------------------------------------


def weight_of(c: Constraint, interpretation: Iterable[str]) -> int:
    true = interpretation if isinstance(interpretation, (set, frozenset)) else set(interpretation)
    return sum(lit.weight for lit in c.clause if (lit.atom in true) != lit.negative)


def satisfies_constraint(interpretation: Iterable[str], c: Constraint) -> bool:
    w = weight_of(c, interpretation)
    return c.lower <= w and (c.upper is None or w <= c.upper)


def satisfied_constraints(interpretation: Iterable[str], program: Program) -> frozenset[str]:
    true = frozenset(interpretation)
    return frozenset(c.id for c in program.constraints if satisfies_constraint(true, c))


def is_model(interpretation: Iterable[str], program: Program) -> bool:
    sat = satisfied_constraints(interpretation, program)
    return all(r.head in sat or not set(r.body) <= sat for r in program.rules)


# --- reduct and stability --------------------------------------------------


@dataclass(frozen=True)
class ReductConstraint:
    """Positive, upper-bound-free constraint: ``lower <= sum of weights of true atoms``."""

    clause: tuple[tuple[str, int], ...]
    lower: int

    def holds(self, interpretation: frozenset[str] | set[str]) -> bool:
        return sum(w for a, w in self.clause if a in interpretation) >= self.lower


@dataclass(frozen=True)
class ReductRule:
    head: str
    body: tuple[ReductConstraint, ...]


@dataclass(frozen=True)
class ReductProgram:
    rules: tuple[ReductRule, ...]


def reduct_constraint(c: Constraint, interpretation: frozenset[str]) -> ReductConstraint:
    false_negative = sum(lit.weight for lit in c.clause if lit.negative and lit.atom not in interpretation)
    positive = tuple((lit.atom, lit.weight) for lit in c.clause if not lit.negative)
    return ReductConstraint(positive, max(0, c.lower - false_negative))


def reduct(program: Program, interpretation: Iterable[str]) -> ReductProgram:
    true = frozenset(interpretation)
    out: list[ReductRule] = []
    for r in program.rules:
        body = [program.constraint(cid) for cid in r.body]
        if any(c.upper is not None and weight_of(c, true) > c.upper for c in body):
            continue
        reduced = tuple(reduct_constraint(c, true) for c in body)
        head = program.constraint(r.head)
        for lit in head.clause:
            if not lit.negative and lit.atom in true:
                out.append(ReductRule(lit.atom, reduced))
    return ReductProgram(tuple(out))


def models_reduct(j: Iterable[str], reduct_program: ReductProgram) -> bool:
    true = frozenset(j)
    return all(rule.head in true or not all(b.holds(true) for b in rule.body) for rule in reduct_program.rules)


def least_model(reduct_program: ReductProgram) -> frozenset[str]:
    derived: set[str] = set()
    changed = True
    while changed:
        changed = False
        for rule in reduct_program.rules:
            if rule.head not in derived and all(b.holds(derived) for b in rule.body):
                derived.add(rule.head)
                changed = True
    return frozenset(derived)


def is_stable(interpretation: Iterable[str], program: Program, method: str = "fixpoint") -> bool:
    """Stable-model test.

    ``method="enumerate"`` checks every proper subset of the interpretation
    against the reduct (the definition itself); ``method="fixpoint"`` uses the
    least model of the reduct, which is sound because reduct models are closed
    under intersection.
    """
    true = frozenset(interpretation)
    if not is_model(true, program):
        return False
    red = reduct(program, true)
    if method == "fixpoint":
        return not (least_model(red) < true)
    if method == "enumerate":
        atoms = sorted(true)
        for size in range(len(atoms)):
            for subset in combinations(atoms, size):
                if models_reduct(subset, red):
                    return False
        return True
    raise ValueError(f"unknown stability method {method!r}")


def is_stable_ordered(interpretation: Iterable[str], program: Program) -> bool:
    """Order-based answer-set test for cardinality programs.

    An interpretation is stable iff it is a model and its atoms can be listed
    so that each one has a rule whose head contains it positively, whose body
    holds, and whose body lower bounds are met by earlier atoms plus false
    negative literals.  The body condition only grows with the set of earlier
    atoms, so a saturation loop finds such a listing whenever one exists.
    """
    program.require_pcc()
    true = frozenset(interpretation)
    if not is_model(true, program):
        return False
    sat = satisfied_constraints(true, program)
    usable = []
    for r in program.rules:
        if all(cid in sat for cid in r.body):
            heads = program.constraint(r.head).positive_atoms & true
            if heads:
                usable.append((heads, [program.constraint(cid) for cid in r.body]))
    derived: set[str] = set()
    changed = True
    while changed and derived != true:
        changed = False
        for heads, body in usable:
            if heads <= derived:
                continue
            if all(c.lower <= car(c, derived, program.atoms, universe_false=true) for c in body):
                derived |= heads
                changed = True
    return derived == true


def is_stable_ordered_bruteforce(interpretation: Iterable[str], program: Program) -> bool:
    """Same test as :func:`is_stable_ordered` but trying every linear order."""
    from itertools import permutations

    program.require_pcc()
    true = frozenset(interpretation)
    if not is_model(true, program):
        return False
    sat = satisfied_constraints(true, program)
    for order in permutations(sorted(true)):
        earlier: set[str] = set()
        ok = True
        for a in order:
            found = False
            for r in program.rules:
                if a not in program.constraint(r.head).positive_atoms or not set(r.body) <= sat:
                    continue
                body = [program.constraint(cid) for cid in r.body]
                if all(c.lower <= car(c, earlier, program.atoms, universe_false=true) for c in body):
                    found = True
                    break
            if not found:
                ok = False
                break
            earlier.add(a)
        if ok:
            return True
    return False


def enumerate_answer_sets(
    program: Program, limit: int = DEFAULT_EXHAUSTIVE_LIMIT, method: str = "fixpoint"
) -> set[frozenset[str]]:
    if len(program.atoms) > limit:
        raise CapacityError(
            f"exhaustive answer-set enumeration refused: {len(program.atoms)} atoms exceed the limit of {limit}"
        )
    return {i for i in all_interpretations(program.atoms) if is_stable(i, program, method)}


def all_interpretations(atoms: Sequence[str]) -> Iterator[frozenset[str]]:
    atoms = list(atoms)
    for mask in range(1 << len(atoms)):
        yield frozenset(a for i, a in enumerate(atoms) if mask >> i & 1)


# --- universe-relative cardinalities --------------------------------------


def car(
    c: Constraint,
    interpretation: Iterable[str],
    universe: Iterable[str],
    universe_false: Iterable[str] | None = None,
) -> int:
    """Cardinality of ``c`` under ``interpretation`` relative to ``universe``.

    Positive literals count when their atom is in the interpretation, negative
    literals when their atom is in ``universe`` but outside the interpretation.
    ``universe_false`` overrides the set used for the negative part (the
    order-based test counts negatives against the full model, not the
    derived prefix).
    """
    true = set(interpretation)
    uni = set(universe)
    neg_ref = true if universe_false is None else set(universe_false)
    pos = sum(1 for lit in c.clause if not lit.negative and lit.atom in true)
    neg = sum(1 for lit in c.clause if lit.negative and lit.atom in uni and lit.atom not in neg_ref)
    return pos + neg


def car_ord(c: Constraint, interpretation: Iterable[str], universe: Iterable[str], order: Sequence[str]) -> int:
    """Like :func:`car` but positive atoms only count when they precede ``c`` in ``order``."""
    true = set(interpretation)
    position = {x: i for i, x in enumerate(order)}
    if c.id not in position:
        raise ValueError(f"order does not contain constraint {c.id}")
    missing = true - position.keys()
    if missing:
        raise ValueError(f"order does not contain atoms {sorted(missing)}")
    uni = set(universe)
    pos = sum(1 for lit in c.clause if not lit.negative and lit.atom in true and position[lit.atom] < position[c.id])
    neg = sum(1 for lit in c.clause if lit.negative and lit.atom in uni and lit.atom not in true)
    return pos + neg


def program_size(program: Program, unary: bool = False) -> int:
    """Encoding size; weights and bounds count by bit length, or by magnitude if ``unary``."""

    def num(x: int | None) -> int:
        if x is None:
            return 0
        return x if unary else max(1, x.bit_length())

    size = len(program.atoms)
    for c in program.constraints:
        size += 1 + num(c.lower) + num(c.upper) + sum(1 + num(lit.weight) for lit in c.clause)
    size += sum(1 + len(r.body) for r in program.rules)
    return size
