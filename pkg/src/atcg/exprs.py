"""Guard/constraint expressions: atoms, AST, parser, printer, evaluator.

The expression language is a small boolean/comparison subset used for
operation pre/post conditions, fragment guards, and transition guards.
Grammar (lowest precedence first)::

    expr    := orExpr
    orExpr  := andExpr { "or" andExpr }
    andExpr := notExpr { "and" notExpr }
    notExpr := [ "not" ] cmp
    cmp     := term [ ("="|"<>"|"<"|"<="|">"|">=") term ]
    term    := IDENT | INT | STRING | "true" | "false" | "(" expr ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Union


# ---------------------------------------------------------------------------
# Atoms


@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Int:
    value: int


@dataclass(frozen=True)
class Text:
    value: str


@dataclass(frozen=True)
class Bool:
    value: bool


Atom = Union[Sym, Int, Text, Bool]

Token = tuple  # tuple of Atom; empty tuple is the Default token

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

_KEYWORDS = {"and", "or", "not", "true", "false"}


def atom_key(a: Atom):
    """Total order over atoms, used wherever determinism requires sorting."""
    if isinstance(a, Bool):
        return (0, a.value)
    if isinstance(a, Int):
        return (1, a.value)
    if isinstance(a, Sym):
        return (2, a.name)
    return (3, a.value)


def token_key(t: Token):
    return tuple(atom_key(a) for a in t)


def format_atom(a: Atom) -> str:
    if isinstance(a, Sym):
        return a.name
    if isinstance(a, Int):
        return str(a.value)
    if isinstance(a, Bool):
        return "true" if a.value else "false"
    return '"%s"' % a.value


def parse_atom(text: str) -> Atom:
    """Parse a single atom literal (bare identifiers become Sym)."""
    s = text.strip()
    if s in ("true", "false"):
        return Bool(s == "true")
    if re.fullmatch(r"-?[0-9]+", s):
        return Int(int(s))
    if len(s) >= 2 and s[0] == '"' and s[-1] == '"' and '"' not in s[1:-1]:
        return Text(s[1:-1])
    if IDENT_RE.fullmatch(s) and s not in _KEYWORDS:
        return Sym(s)
    raise ExprError("bad atom: %r" % text, 0)


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Lit:
    atom: Atom


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Cmp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class And:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Or:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Not:
    operand: "Expr"


Expr = Union[Lit, Var, Cmp, And, Or, Not]

CMP_OPS = ("<>", "<=", ">=", "=", "<", ">")


class ExprError(Exception):
    """Lexical or parse failure, with the offending input offset."""

    def __init__(self, message: str, offset: int):
        super().__init__("%s (at offset %d)" % (message, offset))
        self.offset = offset


class EvalError(Exception):
    """Raised for unbound variables or ordering on non-integers."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def free_vars(e: Expr) -> set:
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Lit):
        return set()
    if isinstance(e, Not):
        return free_vars(e.operand)
    return free_vars(e.left) | free_vars(e.right)


# ---------------------------------------------------------------------------
# Parser

_TOKEN_RE = re.compile(
    r"""\s*(?:
        (?P<op><>|<=|>=|=|<|>)
      | (?P<lpar>\()
      | (?P<rpar>\))
      | (?P<int>-?[0-9]+)
      | (?P<str>"[^"]*")
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    )""",
    re.VERBOSE,
)


def _lex(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ExprError("unexpected character %r" % stripped[0],
                            len(text) - len(stripped))
        start = m.start(m.lastgroup)
        tokens.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _lex(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_ident(self, word):
        kind, value, _ = self.peek()
        if kind == "ident" and value == word:
            self.advance()
            return True
        return False

    def parse(self) -> Expr:
        e = self.or_expr()
        kind, value, offset = self.peek()
        if kind != "eof":
            raise ExprError("trailing input %r" % value, offset)
        return e

    def or_expr(self) -> Expr:
        e = self.and_expr()
        while self.expect_ident("or"):
            e = Or(e, self.and_expr())
        return e

    def and_expr(self) -> Expr:
        e = self.not_expr()
        while self.expect_ident("and"):
            e = And(e, self.not_expr())
        return e

    def not_expr(self) -> Expr:
        if self.expect_ident("not"):
            return Not(self.cmp())
        return self.cmp()

    def cmp(self) -> Expr:
        left = self.term()
        kind, value, _ = self.peek()
        if kind == "op":
            self.advance()
            return Cmp(value, left, self.term())
        return left

    def term(self) -> Expr:
        kind, value, offset = self.advance()
        if kind == "int":
            return Lit(Int(int(value)))
        if kind == "str":
            return Lit(Text(value[1:-1]))
        if kind == "ident":
            if value == "true":
                return Lit(Bool(True))
            if value == "false":
                return Lit(Bool(False))
            if value in _KEYWORDS:
                raise ExprError("unexpected keyword %r" % value, offset)
            return Var(value)
        if kind == "lpar":
            e = self.or_expr()
            kind, _, offset = self.advance()
            if kind != "rpar":
                raise ExprError("expected ')'", offset)
            return e
        raise ExprError("expected a term", offset)


def parse_expr(text: str) -> Expr:
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# Printer (inverse of parse_expr up to structural equality)


def format_expr(e: Expr) -> str:
    return _fmt_or(e)


def _fmt_or(e):
    if isinstance(e, Or):
        return _fmt_or(e.left) + " or " + _fmt_and(e.right)
    return _fmt_and(e)


def _fmt_and(e):
    if isinstance(e, Or):
        return "(" + _fmt_or(e) + ")"
    if isinstance(e, And):
        return _fmt_and(e.left) + " and " + _fmt_not(e.right)
    return _fmt_not(e)


def _fmt_not(e):
    if isinstance(e, (Or, And)):
        return "(" + _fmt_or(e) + ")"
    if isinstance(e, Not):
        return "not " + _fmt_cmp(e.operand)
    return _fmt_cmp(e)


def _fmt_cmp(e):
    if isinstance(e, (Or, And, Not)):
        return "(" + _fmt_or(e) + ")"
    if isinstance(e, Cmp):
        return "%s %s %s" % (_fmt_term(e.left), e.op, _fmt_term(e.right))
    return _fmt_term(e)


def _fmt_term(e):
    if isinstance(e, Lit):
        return format_atom(e.atom)
    if isinstance(e, Var):
        return e.name
    return "(" + _fmt_or(e) + ")"


# ---------------------------------------------------------------------------
# Evaluator


def _eval_value(e: Expr, b: Mapping[str, Atom]) -> Atom:
    if isinstance(e, Lit):
        return e.atom
    if isinstance(e, Var):
        if e.name not in b:
            raise EvalError("unbound-variable", "unbound variable %r" % e.name)
        return b[e.name]
    return Bool(_eval_bool(e, b))


def _text_of(a: Atom):
    if isinstance(a, Sym):
        return a.name
    if isinstance(a, Text):
        return a.value
    return None


def _atoms_equal(x: Atom, y: Atom) -> bool:
    # Text and Sym compare by their string content, so a quoted constant can
    # match a symbolic token value; all other cross-kind pairs are unequal.
    tx, ty = _text_of(x), _text_of(y)
    if tx is not None and ty is not None:
        return tx == ty
    if type(x) is not type(y):
        return False
    return x == y


def _eval_bool(e: Expr, b: Mapping[str, Atom]) -> bool:
    if isinstance(e, And):
        return _eval_bool(e.left, b) and _eval_bool(e.right, b)
    if isinstance(e, Or):
        return _eval_bool(e.left, b) or _eval_bool(e.right, b)
    if isinstance(e, Not):
        return not _eval_bool(e.operand, b)
    if isinstance(e, Cmp):
        x = _eval_value(e.left, b)
        y = _eval_value(e.right, b)
        if e.op == "=":
            return _atoms_equal(x, y)
        if e.op == "<>":
            return not _atoms_equal(x, y)
        if not (isinstance(x, Int) and isinstance(y, Int)):
            raise EvalError(
                "type-mismatch",
                "ordering needs integers, got %s %s %s"
                % (format_atom(x), e.op, format_atom(y)),
            )
        if e.op == "<":
            return x.value < y.value
        if e.op == "<=":
            return x.value <= y.value
        if e.op == ">":
            return x.value > y.value
        return x.value >= y.value
    v = _eval_value(e, b)
    if not isinstance(v, Bool):
        raise EvalError("type-mismatch",
                        "expected a boolean, got %s" % format_atom(v))
    return v.value


def eval_expr(e: Expr, b: Mapping[str, Atom]) -> bool:
    """Evaluate an expression to a boolean under a variable binding."""
    return _eval_bool(e, b)
