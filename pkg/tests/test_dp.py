import time

import pytest

from cardtw.decomposition import build_incidence_graph, normalize
from cardtw.dp import (
    BudgetExceeded,
    EMPTY,
    BagDP,
    compute_tables,
    extract_witness,
    format_assignment,
    format_trace,
    root_accepts,
    solve_consistency,
    solve_reasoning,
    table_ceiling,
)
from cardtw.examples import small_decomposition
from cardtw.generators import chain_program, random_program
from cardtw.program import NotPCCError, enumerate_answer_sets
from cardtw.syntax import parse_program
from golden_tables import GOLDEN


@pytest.fixture
def small_nice(small):
    return normalize(small_decomposition(), build_incidence_graph(small))


def rendered_tables(program, nice, **kw):
    graph = build_incidence_graph(program)
    result = compute_tables(program, nice, **kw)
    return {src: {format_assignment(t, graph) for t in result.tables[nid]} for src, nid in nice.by_source().items()}


@pytest.mark.parametrize("node", sorted(GOLDEN))
def test_golden_tables(small, small_nice, node):
    tables = rendered_tables(small, small_nice)
    assert tables[node] == GOLDEN[node]


def test_tables_of_unlisted_nodes(small, small_nice):
    # second branch, checked against the bag-model oracle in test_partial
    tables = rendered_tables(small, small_nice)
    assert {n: len(tables[n]) for n in (7, 8, 9, 10, 11)} == {7: 1, 8: 2, 9: 8, 10: 3, 11: 7}


def test_saturation_does_not_change_small_tables(small, small_nice):
    assert rendered_tables(small, small_nice, saturate=True) == rendered_tables(small, small_nice, saturate=False)


def test_golden_run_is_fast(small, small_nice):
    start = time.perf_counter()
    compute_tables(small, small_nice)
    assert time.perf_counter() - start < 1.0


def test_small_consistency_and_witness(small, small_nice):
    v = solve_consistency(small, nice=small_nice)
    assert v.answer and v.witness == {"p1"}
    assert v.stats.width == 1 and v.stats.nodes == 14 and v.stats.table_max == 9


@pytest.mark.parametrize(
    "atom, mode, expected",
    [("p1", "credulous", True), ("p1", "skeptical", True), ("p2", "credulous", False), ("p2", "skeptical", False)],
)
def test_small_reasoning(small, small_nice, atom, mode, expected):
    assert solve_reasoning(small, atom, mode, nice=small_nice).answer is expected


def test_skeptical_counter_witness(config):
    from cardtw.transforms import unary_pwc_to_pcc

    pcc, _ = unary_pwc_to_pcc(config)
    v = solve_reasoning(pcc, "p2", "skeptical")
    assert not v.answer
    assert v.witness & {"p1", "p2", "p3"} == {"p1"}


def test_inconsistent_program():
    p = parse_program("atom a\nconstraint c { 1 <= a }\nconstraint t { }\nrule r: c :- t.\nrule s: t.\n")
    # t always holds, so r derives a
    assert enumerate_answer_sets(p) == {frozenset({"a"})}
    q = parse_program("atom a\nconstraint c { 1 <= a }\nconstraint bad { 1 <= ~a }\nrule r: c.\nrule s: bad.\n")
    assert enumerate_answer_sets(q) == set()
    v = solve_consistency(q)
    assert not v.answer and v.witness is None
    sk = solve_reasoning(q, "a", "skeptical")
    assert sk.answer and not sk.extra["consistent"]
    assert not solve_reasoning(q, "a", "credulous").answer


def test_dual_role_constraint_is_handled():
    # c is both a head and a body: its copy keeps the roles apart
    p = parse_program(
        "atom a\natom b\nconstraint c { 1 <= a }\nconstraint d { 1 <= b }\n"
        "constraint t { }\nrule r1: c :- t.\nrule r2: d :- c.\n"
    )
    truth = enumerate_answer_sets(p)
    assert truth == {frozenset({"a", "b"})}
    v = solve_consistency(p)
    assert v.answer and v.witness == {"a", "b"}


def test_weights_are_rejected(config):
    with pytest.raises(NotPCCError):
        solve_consistency(config)


def test_root_accepts_and_witness_on_chain():
    p = chain_program(6)
    v = solve_consistency(p)
    assert v.answer
    assert v.witness == frozenset(p.atoms)


def test_no_table_exceeds_ceiling():
    for seed in range(20):
        p = random_program(seed)
        v = solve_consistency(p, witness=False)
        assert v.stats.table_max <= table_ceiling(v.stats.width + 1, 4)


def test_ceiling_check_runs(small, small_nice):
    result = compute_tables(small, small_nice, check_ceiling=True)
    assert root_accepts(result)


def test_budget(small, small_nice):
    with pytest.raises(BudgetExceeded):
        compute_tables(small, small_nice, budget=10)
    assert root_accepts(compute_tables(small, small_nice, budget=1000))


def test_query_flag_at_root(small, small_nice):
    result = compute_tables(small, small_nice, query="p1")
    assert {t.query for t in result.root_table} == {True}
    assert extract_witness(result, query_value=True) == {"p1"}
    assert extract_witness(result, query_value=False) is None


def test_dropping_tables_disables_witness(small, small_nice):
    result = compute_tables(small, small_nice, keep_all=False)
    assert root_accepts(result)
    with pytest.raises(ValueError):
        extract_witness(result)


def test_leaf_must_be_empty(small):
    dp = BagDP(small)
    assert dp.leaf_assignments() == [EMPTY]
    with pytest.raises(ValueError):
        dp.leaf_assignments(frozenset({"p1"}))


def test_trace_listing(small, small_nice):
    graph = build_incidence_graph(small)
    result = compute_tables(small, small_nice)
    names = {nid: f"n{src}" for src, nid in small_nice.by_source().items()}
    text = format_trace(result, graph, names)
    assert text.splitlines()[0] == "node n1 (L) bag={} size=1"
    assert "node n5 (r1-RI) bag={c1,r1} size=9" in text
    assert text == format_trace(compute_tables(small, small_nice), graph, names)
