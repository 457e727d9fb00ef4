import pytest

from cardtw.decomposition import (
    ATOM,
    BRANCH,
    CONSTRAINT,
    LEAF,
    RULE,
    DecompositionFormatError,
    TreeDecomposition,
    build_incidence_graph,
    heuristic_decompose,
    normalize,
    read_td,
    validate_nice,
    validate_td,
    write_td,
)
from cardtw.examples import config_decomposition, small_decomposition
from cardtw.generators import chain_program, random_program
from cardtw.program import Program

LEGAL_KINDS = {LEAF, BRANCH, "AI", "AR", "CI", "CR", "RI", "RR"}


def test_incidence_graph_of_config(config):
    g = build_incidence_graph(config)
    assert g.kinds["p1"] == ATOM and g.kinds["c4"] == CONSTRAINT and g.kinds["r3"] == RULE
    assert g.adjacency["c1"] == {"p1", "p2", "p3", "r1"}
    assert g.adjacency["r3"] == {"c3", "c4"}
    assert g.labels[frozenset(("p1", "c1"))].weight == (4,)
    assert g.labels[frozenset(("c4", "r3"))].role == {"b"}
    assert g.labels[frozenset(("c3", "r3"))].role == {"h"}
    # 3 + 2 + 1 + 1 atom edges, 1 + 1 + 2 rule edges
    assert len(g.edges) == 11


def test_edge_with_both_polarities():
    from cardtw.syntax import parse_program

    p = parse_program("atom a\nconstraint c { a + ~a }\nrule r: c :- c.\n")
    g = build_incidence_graph(p)
    assert g.labels[frozenset(("a", "c"))].polarity == {"+", "-"}
    assert g.labels[frozenset(("c", "r"))].role == {"h", "b"}


def test_hand_decompositions_are_valid(config, small):
    td = config_decomposition()
    assert validate_td(build_incidence_graph(config), td)
    assert td.width == 2
    td2 = small_decomposition()
    assert validate_td(build_incidence_graph(small), td2)
    assert td2.width == 1


def test_validation_catches_each_violation(small):
    g = build_incidence_graph(small)
    good = small_decomposition()
    # missing vertex
    bags = dict(good.bags)
    bags[9] = frozenset({"p2"})
    assert not validate_td(g, TreeDecomposition(bags, good.edges))
    # broken connectedness: c1 appears again far away
    bags = dict(good.bags)
    bags[12] = frozenset({"r1", "c1"})
    assert not validate_td(g, TreeDecomposition(bags, good.edges))
    # not a tree
    assert not validate_td(g, TreeDecomposition(good.bags, good.edges[:-1]))
    assert not validate_td(g, TreeDecomposition(good.bags, good.edges + [(1, 14)]))


@pytest.mark.parametrize("heuristic", ["min-fill", "min-degree"])
def test_heuristics_produce_valid_decompositions(config, heuristic):
    g = build_incidence_graph(config)
    for seed in (None, 0, 1, 2):
        td = heuristic_decompose(g, heuristic, seed)
        assert validate_td(g, td)
        assert td.width <= 3


def test_heuristic_is_deterministic(config):
    g = build_incidence_graph(config)
    a = heuristic_decompose(g, "min-fill", 5)
    b = heuristic_decompose(g, "min-fill", 5)
    assert a.bags == b.bags and a.edges == b.edges


def test_disconnected_and_empty_graphs():
    p = random_program(3)
    g = build_incidence_graph(Program(("x", "y"), (), ()))
    td = heuristic_decompose(g)
    assert validate_td(g, td)
    empty = build_incidence_graph(Program())
    assert validate_td(empty, heuristic_decompose(empty))
    assert validate_td(build_incidence_graph(p), heuristic_decompose(build_incidence_graph(p)))


def test_unknown_heuristic(config):
    with pytest.raises(ValueError):
        heuristic_decompose(build_incidence_graph(config), "max-magic")


def test_normalize_small_decomposition_keeps_node_numbers(small):
    g = build_incidence_graph(small)
    nice = normalize(small_decomposition(), g)
    assert validate_nice(g, nice)
    assert len(nice.nodes) == 14
    labels = {src: nice.nodes[nid].label() for src, nid in nice.by_source().items()}
    assert labels == {
        1: "(L)", 2: "(p1-AI)", 3: "(c1-CI)", 4: "(p1-AR)", 5: "(r1-RI)", 6: "(c1-CR)",
        7: "(L)", 8: "(p2-AI)", 9: "(c2-CI)", 10: "(p2-AR)", 11: "(r1-RI)", 12: "(c2-CR)",
        13: "(B)", 14: "(r1-RR)",
    }


def test_normalize_config_decomposition(config):
    g = build_incidence_graph(config)
    td = config_decomposition()
    nice = normalize(td, g)
    assert validate_nice(g, nice)
    assert nice.width == td.width
    assert nice.nodes[nice.root].bag == frozenset()
    for n in nice.nodes.values():
        assert n.kind in LEGAL_KINDS
        if not n.children:
            assert n.bag == frozenset()
        assert len(n.children) <= 2


def test_validate_nice_rejects_wrong_kind(small):
    g = build_incidence_graph(small)
    nice = normalize(small_decomposition(), g)
    nid = nice.by_source()[2]
    nice.nodes[nid].kind = "AR"
    assert not validate_nice(g, nice)


def test_td_text_round_trip(config):
    g = build_incidence_graph(config)
    td = config_decomposition()
    back = read_td(write_td(td, g), g)
    assert back.bags == td.bags
    assert sorted(map(tuple, map(sorted, back.edges))) == sorted(map(tuple, map(sorted, td.edges)))
    assert back.root == 0


def test_plain_pace_without_legend(small):
    g = build_incidence_graph(small)
    text = "s td 2 3 5\nb 1 1 3 5\nb 2 2 4 5\n1 2\n"
    td = read_td(text, g)
    assert validate_td(g, td)
    assert td.bags[1] == {"p1", "c1", "r1"}


@pytest.mark.parametrize(
    "text",
    [
        "b 1 1\n",
        "s td 1 1 4\nb 1 1\n",
        "s td 2 1 5\nb 1 1\n",
        "s td 1 1 5\nb 1 9\n",
        "c v 1 atom zz\ns td 1 1 5\nb 1 1\n",
        "s td 1 1 5\nb 1 x\n",
        "s td 1 1 5\nb 1 1\n1 2 3\n",
    ],
)
def test_malformed_td_files(small, text):
    with pytest.raises(DecompositionFormatError):
        read_td(text, build_incidence_graph(small))


def test_chain_programs_have_small_width():
    for steps in (3, 10, 25):
        p = chain_program(steps)
        g = build_incidence_graph(p)
        nice = normalize(heuristic_decompose(g), g)
        assert validate_nice(g, nice)
        assert nice.width <= 3
