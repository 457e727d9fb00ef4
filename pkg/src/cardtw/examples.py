"""The two worked example programs and their hand-made decompositions."""

from __future__ import annotations

from .decomposition import TreeDecomposition
from .program import Program
from .syntax import parse_program

CONFIG_PROGRAM = """\
# parts p1, p2, p3 with costs 4, 2, 1; budget 5; one of p1/p2; p3 requires p2
atom p1
atom p2
atom p3
constraint c1 { 0 <= 4*p1 + 2*p2 + 1*p3 <= 5 }
constraint c2 { 1 <= 1*p1 + 1*p2 <= 2 }
constraint c3 { 1 <= 1*p2 <= 1 }
constraint c4 { 1 <= 1*p3 <= 1 }
rule r1: c1.
rule r2: c2.
rule r3: c3 :- c4.
"""

SMALL_PROGRAM = """\
atom p1
atom p2
constraint c1 { 1 <= 1*p1 <= 1 }
constraint c2 { 1 <= 1*~p2 <= 1 }
rule r1: c1 :- c2.
"""


def config_program() -> Program:
    return parse_program(CONFIG_PROGRAM)


def small_program() -> Program:
    return parse_program(SMALL_PROGRAM)


def config_decomposition() -> TreeDecomposition:
    """Width-2 decomposition of the configuration program (root is node 0)."""
    bags = [
        {"p2", "c1", "c3"},  # 0 root
        {"p2", "c1", "c3"},  # 1
        {"c1", "c3"},  # 2
        {"p3", "c1", "c3"},  # 3
        {"p3", "c3"},  # 4
        {"p3", "c3", "c4"},  # 5
        {"c3", "c4"},  # 6
        {"c3", "c4", "r3"},  # 7
        {"p2", "c1", "c3"},  # 8
        {"p2", "c1"},  # 9
        {"p2", "c1", "c2"},  # 10
        {"c1", "c2"},  # 11
        {"c1", "c2"},  # 12
        {"p1", "c1", "c2"},  # 13
        {"c1", "c2"},  # 14
        {"c1", "c2"},  # 15
        {"c1", "c2", "r1"},  # 16
        {"c1", "c2"},  # 17
        {"c1", "c2", "r2"},  # 18
    ]
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (0, 8), (8, 9), (9, 10), (10, 11)]
    edges += [(11, 12), (12, 13), (11, 14), (14, 15), (15, 16), (14, 17), (17, 18)]
    return TreeDecomposition({i: frozenset(b) for i, b in enumerate(bags)}, edges, 0)


# node ids follow the labels n1..n14 of the width-1 decomposition
SMALL_BAGS = {
    1: set(),
    2: {"p1"},
    3: {"p1", "c1"},
    4: {"c1"},
    5: {"c1", "r1"},
    6: {"r1"},
    7: set(),
    8: {"p2"},
    9: {"p2", "c2"},
    10: {"c2"},
    11: {"c2", "r1"},
    12: {"r1"},
    13: {"r1"},
    14: set(),
}
SMALL_EDGES = [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 13), (7, 8), (8, 9), (9, 10), (10, 11), (11, 12), (12, 13), (13, 14)]


def small_decomposition() -> TreeDecomposition:
    return TreeDecomposition({n: frozenset(b) for n, b in SMALL_BAGS.items()}, list(SMALL_EDGES), 14)
