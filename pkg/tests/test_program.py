import pytest

from cardtw.program import (
    CapacityError,
    Constraint,
    Literal,
    NotPCCError,
    Program,
    ProgramError,
    Rule,
    car,
    car_ord,
    constraint_width,
    enumerate_answer_sets,
    is_model,
    is_stable,
    is_stable_ordered,
    is_stable_ordered_bruteforce,
    least_model,
    program_size,
    reduct,
    satisfied_constraints,
    weight_of,
)


def test_weight_counts_true_positive_and_false_negative(config):
    c1 = config.constraint("c1")
    assert weight_of(c1, {"p1"}) == 4
    assert weight_of(c1, {"p2", "p3"}) == 3
    neg = Constraint("n", (Literal("a", True, 2), Literal("b")), 0, None)
    assert weight_of(neg, set()) == 2
    assert weight_of(neg, {"a", "b"}) == 1


def test_missing_upper_bound_is_unbounded():
    c = Constraint("c", (Literal("a"), Literal("b")), 1)
    p = Program(("a", "b"), (c,), ())
    assert satisfied_constraints({"a", "b"}, p) == {"c"}
    assert satisfied_constraints(set(), p) == frozenset()


def test_models_of_config_program(config):
    assert is_model({"p1"}, config)
    assert not is_model({"p1", "p2"}, config)  # cost 6 breaks c1
    assert not is_model({"p1", "p3"}, config)  # p3 without p2
    assert not is_model(set(), config)


def test_config_answer_sets(config):
    # hand check: {p2,p3} is supported through the choice head c1
    assert enumerate_answer_sets(config) == {frozenset({"p1"}), frozenset({"p2"}), frozenset({"p2", "p3"})}


def test_small_program_has_exactly_one_answer_set(small):
    assert enumerate_answer_sets(small) == {frozenset({"p1"})}


def test_reduct_drops_rules_with_overfull_body():
    a = Constraint("a", (Literal("x"),), 1, 1)
    body = Constraint("b", (Literal("x"), Literal("y")), 0, 1)
    p = Program(("x", "y"), (a, body), (Rule("r", "a", ("b",)),))
    assert reduct(p, {"x", "y"}).rules == ()
    red = reduct(p, {"x"})
    assert len(red.rules) == 1
    assert least_model(red) == {"x"}


def test_reduct_lower_bound_subtracts_false_negatives():
    c = Constraint("c", (Literal("x", True, 2), Literal("y")), 3, None)
    head = Constraint("h", (Literal("y"),), 0, None)
    p = Program(("x", "y"), (c, head), (Rule("r", "h", ("c",)),))
    (rule,) = reduct(p, {"y"}).rules
    (b,) = rule.body
    assert b.lower == 1


def test_unsupported_atom_is_not_stable():
    c = Constraint("c", (Literal("a"),), 1, 1)
    p = Program(("a",), (c,), (Rule("r", "c", ("c",)),))
    assert is_model({"a"}, p)
    assert not is_stable({"a"}, p)
    assert enumerate_answer_sets(p) == {frozenset()}


def test_negation_loop_has_two_answer_sets():
    na = Constraint("na", (Literal("a", True),), 1, None)
    nb = Constraint("nb", (Literal("b", True),), 1, None)
    ha = Constraint("ha", (Literal("a"),), 1, None)
    hb = Constraint("hb", (Literal("b"),), 1, None)
    p = Program(("a", "b"), (na, nb, ha, hb), (Rule("r1", "ha", ("nb",)), Rule("r2", "hb", ("na",))))
    assert enumerate_answer_sets(p) == {frozenset({"a"}), frozenset({"b"})}


@pytest.mark.parametrize("interp", [set(), {"p1"}, {"p2"}, {"p1", "p2"}])
def test_stability_methods_agree(small, interp):
    expected = interp == {"p1"}
    assert is_stable(interp, small) is expected
    assert is_stable(interp, small, method="enumerate") is expected
    assert is_stable_ordered(interp, small) is expected
    assert is_stable_ordered_bruteforce(interp, small) is expected


def test_ordered_test_rejects_weights(config):
    with pytest.raises(NotPCCError):
        is_stable_ordered({"p1"}, config)


def test_car_relative_to_universe():
    c = Constraint("c", (Literal("a"), Literal("b", True), Literal("d", True)), 0, None)
    assert car(c, {"a"}, {"a", "b"}) == 2
    assert car(c, set(), {"a"}) == 0
    assert car_ord(c, {"a"}, {"a", "b", "d"}, ["c", "a"]) == 2
    assert car_ord(c, {"a"}, {"a", "b", "d"}, ["a", "c"]) == 3


def test_constraint_width_and_size(config):
    assert constraint_width(config) == 5
    assert program_size(config, unary=True) > program_size(config)


def test_invalid_programs():
    with pytest.raises(ProgramError):
        Constraint("c", (Literal("a"),), 2, 1)
    with pytest.raises(ProgramError):
        Literal("a", False, 0)
    with pytest.raises(ProgramError):
        Program(("a",), (Constraint("c", (Literal("b"),)),), ())
    with pytest.raises(ProgramError):
        Program(("a",), (Constraint("a"),), ())
    with pytest.raises(ProgramError):
        Program((), (Constraint("c"),), (Rule("r", "d"),))


def test_enumeration_refuses_large_programs():
    p = Program(tuple(f"a{i}" for i in range(21)), (), ())
    with pytest.raises(CapacityError):
        enumerate_answer_sets(p)
    assert enumerate_answer_sets(Program(("a",), (), ()), limit=1) == {frozenset()}
