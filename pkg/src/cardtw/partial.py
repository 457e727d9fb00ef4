"""Subtree-scoped ground truth for the dynamic program (test oracle only).

A partial solution for node ``n`` fixes a model part, satisfied constraints
and rules, a linear order and a derivation witness over everything that
occurs in the subtree of ``n``.  Elements already forgotten below ``n`` must
behave exactly as in an answer set; elements still in the bag are guesses.
Projecting partial solutions onto the bag gives the bag models, which the
DP tables must reproduce exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .decomposition import NiceDecomposition
from .dp import BagAssignment, _pairs
from .program import CapacityError, Program

DEFAULT_PARTIAL_LIMIT = 8


@dataclass(frozen=True)
class PartialSolution:
    M: frozenset
    C: frozenset
    R: frozenset
    order: tuple
    rho: tuple
    lam: tuple
    RD: frozenset
    AD: frozenset
    DH: frozenset
    DB: frozenset
    phi: tuple


@dataclass(frozen=True)
class Scope:
    """Elements of a subtree: all of them (``*_all``) and those no longer in the bag (``*_gone``)."""

    bag: frozenset
    atoms_all: frozenset
    cons_all: frozenset
    rules_all: frozenset

    @property
    def atoms_gone(self):
        return self.atoms_all - self.bag

    @property
    def cons_gone(self):
        return self.cons_all - self.bag

    @property
    def rules_gone(self):
        return self.rules_all - self.bag


def subtree_scope(program: Program, nice: NiceDecomposition, node: int) -> Scope:
    seen = frozenset().union(*(nice.nodes[m].bag for m in nice.subtree(node)))
    return Scope(
        nice.nodes[node].bag,
        seen & frozenset(program.atoms),
        seen & frozenset(c.id for c in program.constraints),
        seen & frozenset(r.id for r in program.rules),
    )


def _car(c, M, universe) -> int:
    return sum(
        1 for lit in c.clause if (not lit.negative and lit.atom in M) or (lit.negative and lit.atom in universe and lit.atom not in M)
    )


def _car_before(c, M, universe, order) -> int:
    pos = {x: i for i, x in enumerate(order)}
    return sum(
        1
        for lit in c.clause
        if (not lit.negative and lit.atom in M and pos[lit.atom] < pos[c.id])
        or (lit.negative and lit.atom in universe and lit.atom not in M)
    )


def _sat(c, value) -> bool:
    return c.lower <= value and (c.upper is None or value <= c.upper)


def check_partial_solution(program: Program, scope: Scope, e: PartialSolution, tied_heads: bool = False) -> list[int]:
    """Return the numbers of the violated conditions (empty list: a partial solution).

    With ``tied_heads`` an extra condition 11 is checked: every rule in
    ``RD`` whose head occurs in the subtree has that head in ``DH``, placed
    after the rule.  The transition relation maintains this; the ten base
    conditions alone do not require it.
    """
    cons = program.constraint_map
    rules = program.rule_map
    U = scope.atoms_all
    bad = []
    # typing
    if not (e.M <= U and e.C <= scope.cons_all and e.R <= scope.rules_all):
        return [0]
    if sorted(e.order) != sorted(e.M | e.C | scope.rules_all) or len(set(e.order)) != len(e.order):
        return [0]
    if not (e.RD <= scope.rules_all and e.AD <= e.M and e.DH <= e.C and e.DB <= e.C):
        return [0]
    rho, lam, phi = dict(e.rho), dict(e.lam), dict(e.phi)
    if set(rho) != set(scope.cons_all) or set(lam) != set(e.C) or set(phi) != set(e.DH):
        return [0]
    pos = {x: i for i, x in enumerate(e.order)}
    # 1
    if e.C & scope.cons_gone != {c for c in scope.cons_gone if _sat(cons[c], _car(cons[c], e.M, U))}:
        bad.append(1)
    # 2
    sat_rules = {
        r for r in scope.rules_all if rules[r].head in e.C or not (set(rules[r].body) & scope.cons_all) <= e.C
    }
    if e.R != sat_rules or not scope.rules_gone <= e.R:
        bad.append(2)
    # 3
    if any(rho[c] != _car(cons[c], e.M, U) for c in scope.cons_all):
        bad.append(3)
    # 4
    if any(lam[c] != _car_before(cons[c], e.M, U, e.order) for c in e.C):
        bad.append(4)
    # 5
    derived = {a for a in e.M for c in e.DH if a in cons[c].positive_atoms and pos[a] > pos[c]}
    if e.AD != derived or not (e.M & scope.atoms_gone) <= e.AD:
        bad.append(5)
    # 6
    bodies = set().union(*(set(rules[r].body) & scope.cons_all for r in e.RD)) if e.RD else set()
    if e.DB != bodies or not e.DB <= e.C:
        bad.append(6)
    # 7
    if any(c in rules[r].body and pos[r] < pos[c] for c in e.DB for r in e.RD):
        bad.append(7)
    # 8
    if any(cons[c].lower > lam[c] for c in e.DB & scope.cons_gone):
        bad.append(8)
    # 9
    for c in e.DH:
        real = any(rules[r].head == c and pos[c] > pos[r] for r in e.RD)
        if (phi[c] == 1) != real:
            bad.append(9)
            break
    # 10
    if any(phi[c] != 1 for c in e.DH & scope.cons_gone):
        bad.append(10)
    # 11
    if tied_heads:
        for r in e.RD:
            h = rules[r].head
            if h in scope.cons_all and (h not in e.DH or pos[h] < pos[r]):
                bad.append(11)
                break
    return bad


def project(e: PartialSolution, bag: frozenset) -> BagAssignment:
    rho = {c: v for c, v in e.rho if c in bag}
    lam = {c: v for c, v in e.lam if c in bag}
    phi = {c: v for c, v in e.phi if c in bag}
    return BagAssignment(
        e.M & bag,
        e.C & bag,
        e.R & bag,
        tuple(x for x in e.order if x in bag),
        _pairs(rho),
        _pairs(lam),
        e.RD & bag,
        e.AD & bag,
        e.DH & bag,
        e.DB & bag,
        _pairs(phi),
    )


def _subsets(items):
    items = sorted(items)
    for k in range(len(items) + 1):
        yield from (frozenset(s) for s in itertools.combinations(items, k))


def enumerate_partial_solutions(
    program: Program, nice: NiceDecomposition, node: int, limit: int = DEFAULT_PARTIAL_LIMIT, tied_heads: bool = False
):
    """Every partial solution for ``node``, by plain enumeration of all free components.

    Only usable on very small subtrees: ``limit`` caps the number of atoms,
    constraints and rules in the subtree.
    """
    program.require_pcc()
    scope = subtree_scope(program, nice, node)
    size = len(scope.atoms_all) + len(scope.cons_all) + len(scope.rules_all)
    if size > limit:
        raise CapacityError(f"subtree holds {size} elements, above the limit of {limit}")
    cons = program.constraint_map
    rules = program.rule_map
    U = scope.atoms_all
    for M in _subsets(U):
        for C in _subsets(scope.cons_all):
            R = frozenset(
                r for r in scope.rules_all if rules[r].head in C or not (set(rules[r].body) & scope.cons_all) <= C
            )
            rho = _pairs({c: _car(cons[c], M, U) for c in scope.cons_all})
            for order in itertools.permutations(sorted(M | C | scope.rules_all)):
                pos = {x: i for i, x in enumerate(order)}
                lam = _pairs({c: _car_before(cons[c], M, U, order) for c in C})
                for RD in _subsets(scope.rules_all):
                    DB = frozenset().union(*(frozenset(rules[r].body) & scope.cons_all for r in RD)) if RD else frozenset()
                    for DH in _subsets(C):
                        AD = frozenset(
                            a for a in M for c in DH if a in cons[c].positive_atoms and pos[a] > pos[c]
                        )
                        phi = _pairs(
                            {c: int(any(rules[r].head == c and pos[r] < pos[c] for r in RD)) for c in DH}
                        )
                        e = PartialSolution(M, C, R, order, rho, lam, RD, AD, DH, DB, phi)
                        if not check_partial_solution(program, scope, e, tied_heads):
                            yield e


def bag_model_projections(
    program: Program, nice: NiceDecomposition, node: int, limit: int = 24, tied_heads: bool = False
) -> set[BagAssignment]:
    """The bag models of ``node``: projections of all partial solutions onto its bag.

    Instead of listing whole partial solutions this builds the linear order
    left to right, deciding witness membership of each element when it is
    placed, and memoizes on what the rest of the order can still observe.
    Forgotten constraints outside the witness and forgotten rules outside
    ``RD`` impose no condition and never enter the projection, so they are
    left out of the order.
    """
    program.require_pcc()
    scope = subtree_scope(program, nice, node)
    size = len(scope.atoms_all) + len(scope.cons_all) + len(scope.rules_all)
    if size > limit:
        raise CapacityError(f"subtree holds {size} elements, above the limit of {limit}")
    cons = program.constraint_map
    rules = program.rule_map
    U = scope.atoms_all
    bag = scope.bag
    out: set[BagAssignment] = set()
    bag_cons = scope.cons_all & bag
    for M in _subsets(U):
        gone_sat = frozenset(c for c in scope.cons_gone if _sat(cons[c], _car(cons[c], M, U)))
        for C_bag in _subsets(bag_cons):
            C = gone_sat | C_bag
            R = frozenset(
                r for r in scope.rules_all if rules[r].head in C or not (set(rules[r].body) & scope.cons_all) <= C
            )
            if not scope.rules_gone <= R:
                continue
            rho = _pairs({c: _car(cons[c], M, U) for c in bag_cons})
            for suffix in _orders(program, scope, M, C, tied_heads):
                sigma, lam, AD, phi, RD, DH, DB = suffix
                out.add(BagAssignment(M & bag, C_bag, R & bag, sigma, rho, lam, RD, AD, DH, DB, phi))
    return out


def _orders(program: Program, scope: Scope, M: frozenset, C: frozenset, tied_heads: bool):
    """Projected outcomes of all valid order/witness choices for fixed ``M`` and ``C``."""
    cons = program.constraint_map
    rules = program.rule_map
    U = scope.atoms_all
    bag = scope.bag
    neg_false = {c: sum(1 for lit in cons[c].clause if lit.negative and lit.atom in U and lit.atom not in M) for c in C}
    mandatory = frozenset(M | (C & bag) | (scope.rules_all & bag))
    optional = frozenset((C - bag) | scope.rules_gone)
    # rules usable at all: bodies must be satisfied constraints
    body_in = {r: frozenset(rules[r].body) & scope.cons_all for r in scope.rules_all}
    usable = {r for r in scope.rules_all if body_in[r] <= C}
    body_users = {c: [r for r in usable if c in rules[r].body] for c in C}

    @lru_cache(maxsize=None)
    def rest(placed: frozenset, RD: frozenset, DH: frozenset, DB: frozenset) -> frozenset:
        results = set()
        if mandatory <= placed:
            needed = frozenset().union(*(body_in[r] for r in RD)) if RD else frozenset()
            tied = not tied_heads or all(rules[r].head in DH for r in RD if rules[r].head in scope.cons_all)
            if needed == DB and tied:
                results.add(((), (), (), (), (), (), ()))
        for x in (mandatory | optional) - placed:
            for step in _place(x, placed, RD, DH, DB):
                item, (RD2, DH2, DB2) = step
                for tail in rest(placed | {x}, RD2, DH2, DB2):
                    results.add(_prepend(item, tail))
        return frozenset(results)

    def _place(x, placed, RD, DH, DB):
        in_bag = x in bag
        if x in M:
            derived = any(x in cons[c].positive_atoms for c in DH)
            if not in_bag and not derived:
                return
            yield (("atom", x, derived), (RD, DH, DB))
        elif x in C:
            lam = sum(1 for a in cons[x].positive_atoms if a in M and a in placed) + neg_false[x]
            real = int(any(rules[r].head == x for r in RD))
            for as_head, as_body in itertools.product((False, True), repeat=2):
                if tied_heads and real and not as_head:
                    continue
                if as_body and not body_users[x]:
                    continue
                if not in_bag:
                    if not (as_head or as_body):
                        continue  # an unmarked forgotten constraint is irrelevant
                    if as_body and lam < cons[x].lower:
                        continue
                    if as_head and not real:
                        continue
                yield (
                    ("cons", x, lam, as_head, real, as_body),
                    (RD, DH | {x} if as_head else DH, DB | {x} if as_body else DB),
                )
        else:
            if in_bag:
                yield (("rule", x, False), (RD, DH, DB))
            h = rules[x].head
            head_free = not tied_heads or h not in scope.cons_all or (h in C and h not in placed)
            if x in usable and body_in[x] <= DB and head_free:
                yield (("rule", x, True), (RD | {x}, DH, DB))

    def _prepend(item, tail):
        sigma, lam, AD, phi, RD, DH, DB = tail
        kind, x = item[0], item[1]
        if x not in bag:
            return tail
        sigma = (x,) + sigma
        if kind == "atom":
            if item[2]:
                AD = tuple(sorted(AD + (x,)))
        elif kind == "cons":
            _, _, value, as_head, real, as_body = item
            lam = tuple(sorted(lam + ((x, value),)))
            if as_head:
                DH = tuple(sorted(DH + (x,)))
                phi = tuple(sorted(phi + ((x, real),)))
            if as_body:
                DB = tuple(sorted(DB + (x,)))
        elif item[2]:
            RD = tuple(sorted(RD + (x,)))
        return (sigma, lam, AD, phi, RD, DH, DB)

    for sigma, lam, AD, phi, RD, DH, DB in rest(frozenset(), frozenset(), frozenset(), frozenset()):
        yield sigma, lam, frozenset(AD), phi, frozenset(RD), frozenset(DH), frozenset(DB)
