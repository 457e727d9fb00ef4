import pytest

from cardtw.examples import CONFIG_PROGRAM
from cardtw.generators import random_program
from cardtw.program import Constraint, Literal
from cardtw.syntax import ParseError, format_constraint, parse_program, print_program


def test_config_source(config):
    assert config.atoms == ("p1", "p2", "p3")
    assert [c.id for c in config.constraints] == ["c1", "c2", "c3", "c4"]
    assert len(config.rules) == 3
    assert config.kind == "PWC"
    assert config.constraint("c1").clause == (Literal("p1", False, 4), Literal("p2", False, 2), Literal("p3"))
    assert config.rule_map["r3"].body == ("c4",)


def test_small_source_is_cardinality(small):
    assert small.kind == "PCC"
    assert small.constraint("c2").clause == (Literal("p2", True),)


def test_empty_file_gives_empty_program():
    p = parse_program("")
    assert p.atoms == () and p.constraints == () and p.rules == ()
    assert parse_program("# only a comment\n\n").atoms == ()


def test_default_bounds():
    p = parse_program("atom a\nconstraint c { a }\nconstraint d { 2 <= a }\nconstraint e { a <= 1 }\n")
    assert p.constraint("c") == Constraint("c", (Literal("a"),), 0, None)
    assert (p.constraint("d").lower, p.constraint("d").upper) == (2, None)
    assert (p.constraint("e").lower, p.constraint("e").upper) == (0, 1)


def test_lower_above_upper_is_reported_with_position():
    with pytest.raises(ParseError) as err:
        parse_program("atom a\nconstraint c { 2 <= 1*a <= 1 }\n")
    assert err.value.line == 2
    assert "exceeds" in str(err.value)


@pytest.mark.parametrize(
    "text, line",
    [
        ("atom a\nconstraint c { 1*b }\n", 2),
        ("atom a\nrule r: c.\n", 2),
        ("atom a\natom a\n", 2),
        ("atom a\nconstraint c { 0*a }\n", 2),
        ("atom a\nconstraint c { a }\nrule r: c :- c\n", 3),
        ("bogus x\n", 1),
        ("atom a b\n", 1),
    ],
)
def test_syntax_errors(text, line):
    with pytest.raises(ParseError) as err:
        parse_program(text)
    assert err.value.line == line


def test_column_points_at_offending_token():
    with pytest.raises(ParseError) as err:
        parse_program("atom a\nconstraint c { 1*zz }\n")
    assert err.value.column == 18  # 1-based


def test_empty_clause_and_rule_forms():
    p = parse_program("constraint c { 1 <= 0 <= 1 }\nrule r: c.\nrule s: c :- .\nrule t: c :- c.\n")
    assert p.constraint("c").clause == ()
    assert [r.body for r in p.rules] == [(), (), ("c",)]


def test_print_is_parseable(config):
    assert parse_program(print_program(config)) == config
    assert format_constraint(config.constraint("c3")) == "constraint c3 { 1 <= 1*p2 <= 1 }"


def test_round_trip_generated_programs():
    for seed in range(50):
        p = random_program(seed, max_weight=3)
        assert parse_program(print_program(p)) == p


def test_source_text_is_stable():
    assert print_program(parse_program(CONFIG_PROGRAM)) == print_program(parse_program(print_program(parse_program(CONFIG_PROGRAM))))
