"""Line-oriented text format for programs.

::

    # comment
    atom p1
    constraint c1 { 0 <= 4*p1 + 2*p2 + 1*p3 <= 5 }
    constraint c5 { 1 <= 1*~p2 }          # no upper bound
    constraint c6 { 1 <= 0 <= 1 }         # empty clause
    rule r1: c1.
    rule r3: c3 :- c4.

The weight prefix ``<w>*`` may be omitted (weight 1); ``~`` marks a negative
literal.  A missing lower bound means 0, a missing upper bound means no upper
bound.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .program import Constraint, Literal, Program, ProgramError, Rule


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_@']*)|(?P<op><=|:-|[{}+*~:,.]))"
)


@dataclass
class _Tok:
    kind: str
    text: str
    col: int


def _tokenize(line: str, lineno: int) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(line):
        if line[pos:].strip() == "":
            break
        m = _TOKEN.match(line, pos)
        if not m or m.end() == pos:
            col = pos + len(line[pos:]) - len(line[pos:].lstrip()) + 1
            raise ParseError(f"unexpected character {line[col - 1]!r}", lineno, col)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    return toks


class _Line:
    def __init__(self, toks: list[_Tok], lineno: int, length: int):
        self.toks = toks
        self.i = 0
        self.lineno = lineno
        self.length = length

    def peek(self, offset: int = 0) -> _Tok | None:
        j = self.i + offset
        return self.toks[j] if j < len(self.toks) else None

    def error(self, message: str, tok: _Tok | None = None):
        tok = tok if tok is not None else self.peek()
        col = tok.col if tok is not None else self.length + 1
        raise ParseError(message, self.lineno, col)

    def take(self, kind: str, text: str | None = None) -> _Tok:
        tok = self.peek()
        if tok is None or tok.kind != kind or (text is not None and tok.text != text):
            want = repr(text) if text is not None else kind
            got = repr(tok.text) if tok is not None else "end of line"
            self.error(f"expected {want}, found {got}", tok)
        self.i += 1
        return tok

    def accept(self, text: str) -> bool:
        tok = self.peek()
        if tok is not None and tok.kind == "op" and tok.text == text:
            self.i += 1
            return True
        return False

    def done(self):
        if self.peek() is not None:
            self.error(f"unexpected {self.peek().text!r}")


def parse_program(text: str) -> Program:
    atoms: list[str] = []
    constraints: list[Constraint] = []
    rules: list[Rule] = []
    declared: dict[str, tuple[str, int]] = {}

    def declare(name: str, kind: str, line: _Line, tok: _Tok):
        if name in declared:
            line.error(f"{name!r} already declared as {declared[name][0]} on line {declared[name][1]}", tok)
        declared[name] = (kind, line.lineno)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0]
        toks = _tokenize(content, lineno)
        if not toks:
            continue
        line = _Line(toks, lineno, len(content.rstrip()))
        keyword = line.take("name")
        if keyword.text == "atom":
            tok = line.take("name")
            declare(tok.text, "atom", line, tok)
            atoms.append(tok.text)
            line.done()
        elif keyword.text == "constraint":
            tok = line.take("name")
            declare(tok.text, "constraint", line, tok)
            constraints.append(_parse_constraint(tok.text, line, declared))
        elif keyword.text == "rule":
            tok = line.take("name")
            declare(tok.text, "rule", line, tok)
            line.take("op", ":")
            head_tok = line.take("name")
            _expect_constraint(head_tok, line, declared)
            body = []
            if line.accept(":-"):
                if line.peek() is not None and line.peek().text != ".":
                    while True:
                        b = line.take("name")
                        _expect_constraint(b, line, declared)
                        body.append(b.text)
                        if not line.accept(","):
                            break
            line.take("op", ".")
            line.done()
            rules.append(Rule(tok.text, head_tok.text, tuple(body)))
        else:
            line.error(f"unknown statement {keyword.text!r}", keyword)
    try:
        return Program(tuple(atoms), tuple(constraints), tuple(rules))
    except ProgramError as exc:
        raise ParseError(str(exc), 0, 0) from exc


def _expect_constraint(tok: _Tok, line: _Line, declared):
    kind = declared.get(tok.text, (None,))[0]
    if kind != "constraint":
        line.error(f"unknown constraint {tok.text!r}", tok)


def _parse_constraint(cid: str, line: _Line, declared) -> Constraint:
    start = line.take("op", "{")
    lower = 0
    upper = None
    if line.peek() is not None and line.peek().kind == "num" and _is_op(line.peek(1), "<="):
        lower = int(line.take("num").text)
        line.take("op", "<=")
    literals: list[Literal] = []
    if line.peek() is not None and line.peek().kind == "num" and line.peek().text == "0" and not _is_op(
        line.peek(1), "*"
    ):
        line.take("num")
    elif not (_is_op(line.peek(), "<=") or _is_op(line.peek(), "}")):
        while True:
            weight = 1
            wtok = line.peek()
            if wtok is not None and wtok.kind == "num":
                weight = int(line.take("num").text)
                line.take("op", "*")
                if weight < 1:
                    line.error("weights must be positive", wtok)
            negative = line.accept("~")
            atok = line.take("name")
            if declared.get(atok.text, (None,))[0] != "atom":
                line.error(f"unknown atom {atok.text!r}", atok)
            if any(l.atom == atok.text and l.negative == negative for l in literals):
                line.error(f"duplicate literal {'~' if negative else ''}{atok.text}", atok)
            literals.append(Literal(atok.text, negative, weight))
            if not line.accept("+"):
                break
    if line.accept("<="):
        upper = int(line.take("num").text)
    line.take("op", "}")
    line.done()
    if upper is not None and lower > upper:
        line.error(f"constraint {cid}: lower bound {lower} exceeds upper bound {upper}", start)
    return Constraint(cid, tuple(literals), lower, upper)


def _is_op(tok: _Tok | None, text: str) -> bool:
    return tok is not None and tok.kind == "op" and tok.text == text


def format_constraint(c: Constraint) -> str:
    clause = " + ".join(str(lit) for lit in c.clause) or "0"
    text = f"{c.lower} <= {clause}"
    if c.upper is not None:
        text += f" <= {c.upper}"
    return f"constraint {c.id} {{ {text} }}"


def format_rule(r: Rule) -> str:
    if r.body:
        return f"rule {r.id}: {r.head} :- {', '.join(r.body)}."
    return f"rule {r.id}: {r.head}."


def print_program(program: Program) -> str:
    lines = [f"atom {a}" for a in program.atoms]
    lines += [format_constraint(c) for c in program.constraints]
    lines += [format_rule(r) for r in program.rules]
    return "\n".join(lines) + ("\n" if lines else "")
