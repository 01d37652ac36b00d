"""Abstract syntax, parser and pretty-printer for the while-language.

Grammar::

    program := decl* [stmts]
    decl    := "var" ident ":" width ";"
    stmts   := stmt (";" stmt)* [";"]
    stmt    := "skip" | ident ":=" expr
             | "if" expr "then" stmts "else" stmts "fi"
             | "while" expr "do" stmts "od"
    expr    := or-expr over +, -, *, <, <=, =, and, or, not, true, false

``#`` starts a comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator

Loc = tuple[int, int]


class ProgramError(Exception):
    """Base class for errors in a program text; carries a 1-based location."""

    def __init__(self, message: str, loc: Loc | None = None):
        self.message = message
        self.loc = loc
        where = f"{loc[0]}:{loc[1]}: " if loc else ""
        super().__init__(where + message)

    @property
    def line(self):
        return self.loc[0] if self.loc else None

    @property
    def col(self):
        return self.loc[1] if self.loc else None


class WhileSyntaxError(ProgramError):
    pass


class UndeclaredVariable(ProgramError):
    def __init__(self, name: str, loc: Loc | None = None):
        self.name = name
        super().__init__(f"undeclared variable {name!r}", loc)


class WhileTypeError(ProgramError):
    pass


# -- AST -------------------------------------------------------------------
# Locations never take part in equality, so parse(pretty(p)) == p.


@dataclass(frozen=True)
class Num:
    value: int
    loc: Loc | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Bool:
    value: bool
    loc: Loc | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    loc: Loc | None = field(default=None, compare=False)


@dataclass(frozen=True)
class UnOp:
    op: str  # "-" or "not"
    arg: "Expr"
    loc: Loc | None = field(default=None, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    loc: Loc | None = field(default=None, compare=False)


Expr = Num | Bool | Var | UnOp | BinOp


@dataclass(frozen=True)
class Skip:
    loc: Loc | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Assign:
    var: str
    expr: Expr
    loc: Loc | None = field(default=None, compare=False)


@dataclass(frozen=True)
class If:
    cond: Expr
    then: tuple
    orelse: tuple
    loc: Loc | None = field(default=None, compare=False)


@dataclass(frozen=True)
class While:
    cond: Expr
    body: tuple
    loc: Loc | None = field(default=None, compare=False)


Stmt = Skip | Assign | If | While


@dataclass(frozen=True)
class Decl:
    name: str
    width: int
    loc: Loc | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Program:
    decls: tuple
    body: tuple

    def widths(self) -> dict[str, int]:
        return {d.name: d.width for d in self.decls}


INT_OPS = {"+", "-", "*"}
CMP_OPS = {"<", "<=", "="}
BOOL_OPS = {"and", "or"}

# binding strength; higher binds tighter
PRECEDENCE = {"or": 1, "and": 2, "not": 3, "<": 4, "<=": 4, "=": 4, "+": 5, "-": 5, "*": 6, "neg": 7}

# -- lexer -----------------------------------------------------------------

KEYWORDS = {"var", "skip", "if", "then", "else", "fi", "while", "do", "od", "and", "or", "not", "true", "false"}

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>#[^\n]*)"
    r"|(?P<num>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<sym>:=|<=|[<=+\-*();:])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "ident", "kw", "sym", "eof"
    text: str
    loc: Loc


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        loc = (line, pos - line_start + 1)
        if m is None:
            raise WhileSyntaxError(f"unexpected character {text[pos]!r}", loc)
        kind = m.lastgroup
        tok = m.group()
        pos = m.end()
        if kind == "nl":
            line += 1
            line_start = pos
        elif kind in ("ws", "comment"):
            continue
        elif kind == "ident" and tok in KEYWORDS:
            tokens.append(Token("kw", tok, loc))
        else:
            tokens.append(Token(kind, tok, loc))
    tokens.append(Token("eof", "", (line, pos - line_start + 1)))
    return tokens


# -- parser ----------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def at(self, text: str) -> bool:
        return self.tok.kind in ("kw", "sym") and self.tok.text == text

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = "end of input" if self.tok.kind == "eof" else repr(self.tok.text)
            raise WhileSyntaxError(f"expected {text!r}, found {found}", self.tok.loc)
        return self.advance()

    def ident(self) -> Token:
        if self.tok.kind != "ident":
            raise WhileSyntaxError(f"expected identifier, found {self.tok.text or 'end of input'!r}", self.tok.loc)
        return self.advance()

    def program(self) -> Program:
        decls = []
        while self.at("var"):
            loc = self.advance().loc
            name = self.ident().text
            self.expect(":")
            if self.tok.kind != "num":
                raise WhileSyntaxError("expected a bit-width", self.tok.loc)
            wtok = self.advance()
            width = int(wtok.text)
            if width < 1:
                raise WhileSyntaxError("bit-width must be positive", wtok.loc)
            if any(d.name == name for d in decls):
                raise WhileSyntaxError(f"variable {name!r} declared twice", loc)
            self.expect(";")
            decls.append(Decl(name, width, loc))
        body = () if self.tok.kind == "eof" else self.stmts()
        if self.tok.kind != "eof":
            raise WhileSyntaxError(f"unexpected {self.tok.text!r}", self.tok.loc)
        return Program(tuple(decls), body)

    def stmts(self) -> tuple:
        out = [self.stmt()]
        while self.at(";"):
            self.advance()
            if self.tok.kind == "eof" or self.at("od") or self.at("fi") or self.at("else"):
                break
            out.append(self.stmt())
        return tuple(out)

    def stmt(self) -> Stmt:
        t = self.tok
        if self.at("skip"):
            self.advance()
            return Skip(t.loc)
        if self.at("if"):
            self.advance()
            cond = self.expr()
            self.expect("then")
            then = self.stmts()
            self.expect("else")
            orelse = self.stmts()
            self.expect("fi")
            return If(cond, then, orelse, t.loc)
        if self.at("while"):
            self.advance()
            cond = self.expr()
            self.expect("do")
            body = self.stmts()
            self.expect("od")
            return While(cond, body, t.loc)
        if t.kind == "ident":
            self.advance()
            self.expect(":=")
            return Assign(t.text, self.expr(), t.loc)
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise WhileSyntaxError(f"expected a statement, found {found}", t.loc)

    def expr(self, level: int = 1) -> Expr:
        if level == 1 or level == 2:
            op = "or" if level == 1 else "and"
            left = self.expr(level + 1)
            while self.at(op):
                t = self.advance()
                left = BinOp(op, left, self.expr(level + 1), t.loc)
            return left
        if level == 3:
            if self.at("not"):
                t = self.advance()
                return UnOp("not", self.expr(3), t.loc)
            return self.expr(4)
        if level == 4:
            left = self.expr(5)
            if self.tok.kind == "sym" and self.tok.text in CMP_OPS:
                t = self.advance()
                left = BinOp(t.text, left, self.expr(5), t.loc)
                if self.tok.kind == "sym" and self.tok.text in CMP_OPS:
                    raise WhileSyntaxError("comparisons do not chain", self.tok.loc)
            return left
        if level == 5 or level == 6:
            ops = ("+", "-") if level == 5 else ("*",)
            left = self.expr(level + 1)
            while self.tok.kind == "sym" and self.tok.text in ops:
                t = self.advance()
                left = BinOp(t.text, left, self.expr(level + 1), t.loc)
            return left
        return self.atom()

    def atom(self) -> Expr:
        t = self.tok
        if self.at("-"):
            self.advance()
            return UnOp("-", self.atom(), t.loc)
        if self.at("("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "num":
            self.advance()
            return Num(int(t.text), t.loc)
        if self.at("true") or self.at("false"):
            self.advance()
            return Bool(t.text == "true", t.loc)
        if t.kind == "ident":
            self.advance()
            return Var(t.text, t.loc)
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise WhileSyntaxError(f"expected an expression, found {found}", t.loc)


def parse(text: str, check: bool = True) -> Program:
    """Parse and (by default) scope- and type-check a program."""
    program = _Parser(text).program()
    if check:
        check_program(program)
    return program


# -- static checks ---------------------------------------------------------


def type_of(e: Expr, widths: dict[str, int]) -> str:
    if isinstance(e, Num):
        return "int"
    if isinstance(e, Bool):
        return "bool"
    if isinstance(e, Var):
        if e.name not in widths:
            raise UndeclaredVariable(e.name, e.loc)
        return "int"
    if isinstance(e, UnOp):
        want = "bool" if e.op == "not" else "int"
        _expect(e.arg, want, widths, e.op)
        return want
    if e.op in INT_OPS:
        _expect(e.left, "int", widths, e.op)
        _expect(e.right, "int", widths, e.op)
        return "int"
    if e.op in CMP_OPS:
        _expect(e.left, "int", widths, e.op)
        _expect(e.right, "int", widths, e.op)
        return "bool"
    _expect(e.left, "bool", widths, e.op)
    _expect(e.right, "bool", widths, e.op)
    return "bool"


def _expect(e: Expr, want: str, widths, op: str) -> None:
    got = type_of(e, widths)
    if got != want:
        raise WhileTypeError(f"operand of {op!r} must be {want}, not {got}", e.loc)


def check_program(program: Program) -> None:
    widths = program.widths()
    for s in walk(program.body):
        if isinstance(s, Assign):
            if s.var not in widths:
                raise UndeclaredVariable(s.var, s.loc)
            if type_of(s.expr, widths) != "int":
                raise WhileTypeError(f"cannot assign a bool to {s.var!r}", s.expr.loc)
        elif isinstance(s, (If, While)):
            if type_of(s.cond, widths) != "bool":
                raise WhileTypeError("condition must be bool", s.cond.loc)


def walk(stmts) -> Iterator[Stmt]:
    """Pre-order traversal of statements."""
    for s in stmts:
        yield s
        if isinstance(s, If):
            yield from walk(s.then)
            yield from walk(s.orelse)
        elif isinstance(s, While):
            yield from walk(s.body)


# -- pretty-printer --------------------------------------------------------


def pretty_expr(e: Expr, parent: int = 0) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Bool):
        return "true" if e.value else "false"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, UnOp):
        if e.op == "-":
            inner = pretty_expr(e.arg, PRECEDENCE["neg"] + 1)
            text = "-" + inner
            prec = PRECEDENCE["neg"]
        else:
            text = "not " + pretty_expr(e.arg, PRECEDENCE["not"])
            prec = PRECEDENCE["not"]
        return f"({text})" if prec < parent else text
    prec = PRECEDENCE[e.op]
    if e.op in CMP_OPS:
        left = pretty_expr(e.left, prec + 1)
        right = pretty_expr(e.right, prec + 1)
    else:
        left = pretty_expr(e.left, prec)
        right = pretty_expr(e.right, prec + 1)
    text = f"{left} {e.op} {right}"
    return f"({text})" if prec < parent else text


def _pretty_stmts(stmts, indent: int) -> list[str]:
    lines: list[str] = []
    for k, s in enumerate(stmts):
        chunk = _pretty_stmt(s, indent)
        if k < len(stmts) - 1:
            chunk[-1] += ";"
        lines.extend(chunk)
    return lines


def _pretty_stmt(s: Stmt, indent: int) -> list[str]:
    pad = "  " * indent
    if isinstance(s, Skip):
        return [pad + "skip"]
    if isinstance(s, Assign):
        return [f"{pad}{s.var} := {pretty_expr(s.expr)}"]
    if isinstance(s, If):
        return ([f"{pad}if {pretty_expr(s.cond)} then"] + _pretty_stmts(s.then, indent + 1)
                + [pad + "else"] + _pretty_stmts(s.orelse, indent + 1) + [pad + "fi"])
    return [f"{pad}while {pretty_expr(s.cond)} do"] + _pretty_stmts(s.body, indent + 1) + [pad + "od"]


def pretty(program: Program) -> str:
    lines = [f"var {d.name}:{d.width};" for d in program.decls]
    lines.extend(_pretty_stmts(program.body, 0))
    return "\n".join(lines) + "\n"
