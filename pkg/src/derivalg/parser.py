"""Tokenizer, expression parser, and session-statement parser for the CLI.

Grammar (one statement per line, `#` starts a comment):

    ring R = QQ[x, y]                  ring R = GF(5)[x, y]
    ideal I in R : f1, f2, ...
    quotient Q = R / I
    der d on R : x -> -y, y -> x       (missing variables map to 0)
    skew S = R[t1; d1][t2; d2]
    weyl N [as NAME]
    let name = EXPR [in RING]
    mul EXPR [in RING]
    apply DER EXPR
    gb IDEAL                           member EXPR in IDEAL [with cofactors]
    dim IDEAL
    certificate EXPR [in RING]
    darboux EXPR bound N
    check commute D1 D2
    check dideal IDEAL D1 [D2 ...]
    check dsimple RING D1 [D2 ...] [--dim1]
    check simple SKEWRING
    inner EXPR [in SKEWRING]
    extend DER into SKEWRING

Expressions: integers, `a/b` rationals, identifiers, `+ - * ^`, parentheses;
`*` is mandatory between factors and `^` takes a non-negative integer.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .errors import ParseError

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<number>\d+)
  | (?P<flag>--[A-Za-z][A-Za-z0-9_]*)
  | (?P<arrow>->)
  | (?P<ident>[A-Za-z][A-Za-z0-9_]*)
  | (?P<op>[-+*^/()\[\],:;=])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str      # number | ident | flag | arrow | op | newline | eof
    text: str
    line: int
    col: int


def tokenize(text: str):
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, chunk, line, col))
        if kind == "newline":
            line += 1
            col = 1
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


# --------------------------------------------------------------------------
# expression AST
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    numerator: int
    denominator: int
    line: int
    col: int


@dataclass(frozen=True)
class Name:
    text: str
    line: int
    col: int


@dataclass(frozen=True)
class Unary:
    op: str
    operand: object


@dataclass(frozen=True)
class Binary:
    op: str             # + - * ^
    left: object
    right: object


class _Stream:
    def __init__(self, tokens, start=0):
        self.tokens = tokens
        self.i = start

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, text: str | None = None) -> Token:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            want = text if text is not None else kind
            raise ParseError(f"expected {want!r}, found {t.text or t.kind!r}",
                             t.line, t.col)
        return self.next()

    def at_op(self, text: str) -> bool:
        t = self.peek()
        return t.kind == "op" and t.text == text

    def at_end_of_statement(self) -> bool:
        return self.peek().kind in ("newline", "eof")


def parse_expression(stream: _Stream):
    node = _parse_term(stream)
    while stream.at_op("+") or stream.at_op("-"):
        op = stream.next().text
        node = Binary(op, node, _parse_term(stream))
    return node


def _parse_term(stream: _Stream):
    node = _parse_unary(stream)
    while stream.at_op("*"):
        stream.next()
        node = Binary("*", node, _parse_unary(stream))
    return node


def _parse_unary(stream: _Stream):
    if stream.at_op("-"):
        stream.next()
        return Unary("-", _parse_unary(stream))
    return _parse_power(stream)


def _parse_power(stream: _Stream):
    base = _parse_atom(stream)
    if stream.at_op("^"):
        stream.next()
        t = stream.expect("number")
        return Binary("^", base, Num(int(t.text), 1, t.line, t.col))
    return base


def _parse_atom(stream: _Stream):
    t = stream.peek()
    if t.kind == "number":
        stream.next()
        if stream.at_op("/"):
            stream.next()
            d = stream.expect("number")
            if int(d.text) == 0:
                raise ParseError("zero denominator in rational literal",
                                 d.line, d.col)
            return Num(int(t.text), int(d.text), t.line, t.col)
        return Num(int(t.text), 1, t.line, t.col)
    if t.kind == "ident":
        stream.next()
        return Name(t.text, t.line, t.col)
    if t.kind == "op" and t.text == "(":
        stream.next()
        node = parse_expression(stream)
        stream.expect("op", ")")
        return node
    raise ParseError(f"expected an expression, found {t.text or t.kind!r}",
                     t.line, t.col)


# --------------------------------------------------------------------------
# statements
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldDesignator:
    p: Optional[int]    # None = QQ


@dataclass(frozen=True)
class Statement:
    line: int


@dataclass(frozen=True)
class DefineRing(Statement):
    name: str
    field_spec: FieldDesignator
    variables: tuple


@dataclass(frozen=True)
class DefineIdeal(Statement):
    name: str
    ring: str
    generators: tuple


@dataclass(frozen=True)
class DefineQuotient(Statement):
    name: str
    ring: str
    ideal: str


@dataclass(frozen=True)
class DefineDerivation(Statement):
    name: str
    ring: str
    assignments: tuple  # ((varname, expr), ...)


@dataclass(frozen=True)
class DefineSkew(Statement):
    name: str
    base: str
    steps: tuple        # ((varname, dername), ...)


@dataclass(frozen=True)
class DefineWeyl(Statement):
    n: int
    name: str


@dataclass(frozen=True)
class LetElement(Statement):
    name: str
    expr: object
    ring: Optional[str]


@dataclass(frozen=True)
class MulCommand(Statement):
    expr: object
    ring: Optional[str]


@dataclass(frozen=True)
class ApplyCommand(Statement):
    derivation: str
    expr: object


@dataclass(frozen=True)
class GbCommand(Statement):
    ideal: str


@dataclass(frozen=True)
class MemberCommand(Statement):
    expr: object
    ideal: str
    cofactors: bool


@dataclass(frozen=True)
class DimCommand(Statement):
    ideal: str


@dataclass(frozen=True)
class CertificateCommand(Statement):
    expr: object
    ring: Optional[str]


@dataclass(frozen=True)
class DarbouxCommand(Statement):
    expr: object
    bound: int
    ring: Optional[str]


@dataclass(frozen=True)
class CheckCommute(Statement):
    first: str
    second: str


@dataclass(frozen=True)
class CheckDideal(Statement):
    ideal: str
    derivations: tuple


@dataclass(frozen=True)
class CheckDsimple(Statement):
    ring: str
    derivations: tuple
    dim1: bool


@dataclass(frozen=True)
class CheckSimple(Statement):
    ring: str


@dataclass(frozen=True)
class InnerCommand(Statement):
    expr: object
    ring: Optional[str]


@dataclass(frozen=True)
class ExtendCommand(Statement):
    derivation: str
    ring: str


def parse_session(text: str):
    """Parse a full session; any syntax error aborts with its line/column."""
    tokens = tokenize(text)
    stream = _Stream(tokens)
    statements = []
    while stream.peek().kind != "eof":
        if stream.peek().kind == "newline":
            stream.next()
            continue
        statements.append(_parse_statement(stream))
        t = stream.peek()
        if t.kind not in ("newline", "eof"):
            raise ParseError(f"unexpected trailing {t.text!r}", t.line, t.col)
    return statements


def parse_statement_line(line: str):
    """Parse a single statement (REPL); returns None for blank input."""
    statements = parse_session(line)
    if not statements:
        return None
    if len(statements) > 1:
        raise ParseError("one statement per line", 1, 1)
    return statements[0]


def _parse_statement(stream: _Stream):
    t = stream.peek()
    if t.kind != "ident":
        raise ParseError(f"expected a statement keyword, found {t.text!r}",
                         t.line, t.col)
    keyword = t.text
    handler = _STATEMENTS.get(keyword)
    if handler is None:
        raise ParseError(f"unknown statement {keyword!r}", t.line, t.col)
    stream.next()
    return handler(stream, t.line)


def _ident(stream: _Stream) -> str:
    return stream.expect("ident").text


def _parse_ring_stmt(stream, line):
    name = _ident(stream)
    stream.expect("op", "=")
    spec = _parse_field(stream)
    stream.expect("op", "[")
    variables = [_ident(stream)]
    while stream.at_op(","):
        stream.next()
        variables.append(_ident(stream))
    stream.expect("op", "]")
    return DefineRing(line, name, spec, tuple(variables))


def _parse_field(stream: _Stream) -> FieldDesignator:
    t = stream.expect("ident")
    if t.text == "QQ":
        return FieldDesignator(None)
    if t.text == "GF":
        stream.expect("op", "(")
        p = stream.expect("number")
        stream.expect("op", ")")
        return FieldDesignator(int(p.text))
    raise ParseError(f"unknown field {t.text!r} (use QQ or GF(p))",
                     t.line, t.col)


def _parse_ideal_stmt(stream, line):
    name = _ident(stream)
    stream.expect("ident", "in")
    ring = _ident(stream)
    stream.expect("op", ":")
    gens = [parse_expression(stream)]
    while stream.at_op(","):
        stream.next()
        gens.append(parse_expression(stream))
    return DefineIdeal(line, name, ring, tuple(gens))


def _parse_quotient_stmt(stream, line):
    name = _ident(stream)
    stream.expect("op", "=")
    ring = _ident(stream)
    stream.expect("op", "/")
    ideal = _ident(stream)
    return DefineQuotient(line, name, ring, ideal)


def _parse_der_stmt(stream, line):
    name = _ident(stream)
    stream.expect("ident", "on")
    ring = _ident(stream)
    stream.expect("op", ":")
    assignments = []
    while True:
        var = _ident(stream)
        stream.expect("arrow")
        assignments.append((var, parse_expression(stream)))
        if stream.at_op(","):
            stream.next()
            continue
        break
    return DefineDerivation(line, name, ring, tuple(assignments))


def _parse_skew_stmt(stream, line):
    name = _ident(stream)
    stream.expect("op", "=")
    base = _ident(stream)
    steps = []
    while stream.at_op("["):
        stream.next()
        var = _ident(stream)
        stream.expect("op", ";")
        der = _ident(stream)
        stream.expect("op", "]")
        steps.append((var, der))
    if not steps:
        t = stream.peek()
        raise ParseError("a skew ring needs at least one [var; derivation] step",
                         t.line, t.col)
    return DefineSkew(line, name, base, tuple(steps))


def _parse_weyl_stmt(stream, line):
    n = int(stream.expect("number").text)
    name = f"A{n}"
    if stream.peek().kind == "ident" and stream.peek().text == "as":
        stream.next()
        name = _ident(stream)
    return DefineWeyl(line, n, name)


def _parse_let_stmt(stream, line):
    name = _ident(stream)
    stream.expect("op", "=")
    expr = parse_expression(stream)
    ring = _opt_in_ring(stream)
    return LetElement(line, name, expr, ring)


def _opt_in_ring(stream: _Stream) -> Optional[str]:
    if stream.peek().kind == "ident" and stream.peek().text == "in":
        stream.next()
        return _ident(stream)
    return None


def _parse_mul_stmt(stream, line):
    expr = parse_expression(stream)
    return MulCommand(line, expr, _opt_in_ring(stream))


def _parse_apply_stmt(stream, line):
    der = _ident(stream)
    expr = parse_expression(stream)
    return ApplyCommand(line, der, expr)


def _parse_gb_stmt(stream, line):
    return GbCommand(line, _ident(stream))


def _parse_member_stmt(stream, line):
    expr = parse_expression(stream)
    stream.expect("ident", "in")
    ideal = _ident(stream)
    cof = False
    if stream.peek().kind == "ident" and stream.peek().text == "with":
        stream.next()
        stream.expect("ident", "cofactors")
        cof = True
    return MemberCommand(line, expr, ideal, cof)


def _parse_dim_stmt(stream, line):
    return DimCommand(line, _ident(stream))


def _parse_certificate_stmt(stream, line):
    expr = parse_expression(stream)
    return CertificateCommand(line, expr, _opt_in_ring(stream))


def _parse_darboux_stmt(stream, line):
    expr = parse_expression(stream)
    stream.expect("ident", "bound")
    n = int(stream.expect("number").text)
    return DarbouxCommand(line, expr, n, _opt_in_ring(stream))


def _parse_check_stmt(stream, line):
    what = stream.expect("ident")
    if what.text == "commute":
        return CheckCommute(line, _ident(stream), _ident(stream))
    if what.text == "dideal":
        ideal = _ident(stream)
        ders = [_ident(stream)]
        while stream.peek().kind == "ident":
            ders.append(_ident(stream))
        return CheckDideal(line, ideal, tuple(ders))
    if what.text == "dsimple":
        ring = _ident(stream)
        ders = [_ident(stream)]
        dim1 = False
        while True:
            t = stream.peek()
            if t.kind == "ident":
                ders.append(_ident(stream))
            elif t.kind == "flag" and t.text == "--dim1":
                stream.next()
                dim1 = True
            else:
                break
        return CheckDsimple(line, ring, tuple(ders), dim1)
    if what.text == "simple":
        return CheckSimple(line, _ident(stream))
    raise ParseError(f"unknown check {what.text!r}", what.line, what.col)


def _parse_inner_stmt(stream, line):
    expr = parse_expression(stream)
    return InnerCommand(line, expr, _opt_in_ring(stream))


def _parse_extend_stmt(stream, line):
    der = _ident(stream)
    stream.expect("ident", "into")
    ring = _ident(stream)
    return ExtendCommand(line, der, ring)


_STATEMENTS = {
    "ring": _parse_ring_stmt,
    "ideal": _parse_ideal_stmt,
    "quotient": _parse_quotient_stmt,
    "der": _parse_der_stmt,
    "skew": _parse_skew_stmt,
    "weyl": _parse_weyl_stmt,
    "let": _parse_let_stmt,
    "mul": _parse_mul_stmt,
    "apply": _parse_apply_stmt,
    "gb": _parse_gb_stmt,
    "member": _parse_member_stmt,
    "dim": _parse_dim_stmt,
    "certificate": _parse_certificate_stmt,
    "darboux": _parse_darboux_stmt,
    "check": _parse_check_stmt,
    "inner": _parse_inner_stmt,
    "extend": _parse_extend_stmt,
}
