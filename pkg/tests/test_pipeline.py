import pytest

from cardtw.decomposition import build_incidence_graph, write_td
from cardtw.examples import CONFIG_PROGRAM, SMALL_PROGRAM, small_decomposition, small_program
from cardtw.generators import random_program
from cardtw.pipeline import (
    RequestError,
    SolveRequest,
    WeightScaleError,
    enumerate_with_dp,
    prepare,
    run,
    with_filters,
)
from cardtw.program import enumerate_answer_sets
from cardtw.syntax import print_program
from cardtw.transforms import partition_to_pwc


def solve(text, **kw):
    return run(SolveRequest(text=text, **kw))


def test_small_consistency():
    r = solve(SMALL_PROGRAM)
    assert r.lines[0] == "CONSISTENT" and r.exit_code == 0
    assert r.lines[1].startswith("stats: width=1 ")


def test_small_witness_mode():
    r = solve(SMALL_PROGRAM, mode="witness")
    assert r.lines[:2] == ["CONSISTENT", "witness: {p1}"]


def test_small_enumerate():
    r = solve(SMALL_PROGRAM, mode="enumerate", oracle=True)
    assert r.models == [frozenset({"p1"})]
    assert r.lines[-1] == "oracle: agree"


@pytest.mark.parametrize(
    "mode, query, head, code",
    [("credulous", "p1", "YES", 0), ("skeptical", "p1", "YES", 0), ("credulous", "p2", "NO", 1), ("skeptical", "p2", "NO", 1)],
)
def test_small_reasoning(mode, query, head, code):
    r = solve(SMALL_PROGRAM, mode=mode, query=query, oracle=True)
    assert (r.lines[0], r.exit_code, r.oracle_agrees) == (head, code, True)


def test_imported_decomposition(tmp_path):
    path = tmp_path / "small.td"
    path.write_text(write_td(small_decomposition(), build_incidence_graph(small_program())))
    r = solve(SMALL_PROGRAM, td=f"import:{path}", mode="witness")
    assert r.witness == {"p1"}
    assert r.stats["nodes"] == 14


def test_imported_decomposition_must_fit(tmp_path):
    path = tmp_path / "bad.td"
    path.write_text("s td 1 2 5\nb 1 1 2\n")
    with pytest.raises(ValueError):
        solve(SMALL_PROGRAM, td=f"import:{path}")


def test_weight_program_goes_through_unary_transform():
    r = solve(CONFIG_PROGRAM, mode="enumerate", oracle=True)
    assert r.models == [frozenset({"p1"}), frozenset({"p2"}), frozenset({"p2", "p3"})]
    assert r.oracle_agrees


def test_partition_program():
    r = solve(print_program(partition_to_pwc([1, 2, 3])), oracle=True)
    assert r.answer and r.oracle_agrees


def test_binary_scale_weights_are_refused():
    text = "atom a\natom b\nconstraint c { 1000*a + 1*b <= 2000 }\nrule r: c.\n"
    with pytest.raises(WeightScaleError):
        solve(text)
    r = solve(text, allow_large_weights=True, mode="witness")
    assert r.decided_by == "oracle" and r.answer
    assert r.lines[-1] == "oracle: decided"


def test_budget_fallback_to_oracle():
    r = solve(CONFIG_PROGRAM, oracle=True, budget=10)
    assert r.decided_by == "oracle" and r.answer
    assert r.lines[-1] == "oracle: decided (dp budget exceeded)"


@pytest.mark.parametrize(
    "kw",
    [{"mode": "credulous"}, {"mode": "consistency", "query": "p1"}, {"mode": "nonsense"}, {"td": "best"}],
)
def test_malformed_requests(kw):
    with pytest.raises(RequestError):
        solve(SMALL_PROGRAM, **kw)


def test_unknown_query_atom():
    with pytest.raises(RequestError):
        solve(SMALL_PROGRAM, mode="credulous", query="zz")


def test_trace_file(tmp_path):
    out = tmp_path / "trace.txt"
    solve(SMALL_PROGRAM, trace=str(out))
    assert out.read_text().startswith("node ")


def test_filters_select_answer_sets(config):
    from cardtw.transforms import unary_pwc_to_pcc

    pcc, _ = unary_pwc_to_pcc(config)
    filtered = with_filters(pcc, {"p2": True, "p3": False})
    assert {m & {"p1", "p2", "p3"} for m in enumerate_answer_sets(filtered)} == {frozenset({"p2"})}


@pytest.mark.parametrize("seed", range(15))
def test_enumeration_matches_oracle(seed):
    p = random_program(seed, max_atoms=4)
    prep = prepare(SolveRequest(), p)
    models, _ = enumerate_with_dp(prep)
    assert set(models) == enumerate_answer_sets(p)


def test_reports_are_deterministic():
    a = solve(CONFIG_PROGRAM, mode="witness", seed=3)
    b = solve(CONFIG_PROGRAM, mode="witness", seed=3)
    strip = lambda r: [l.split(" time_ms=")[0] for l in r.lines]
    assert strip(a) == strip(b)
