"""Tokenizer, parser and canonical printer for the equational graphics language.

A program is a list of lines that read ``head = body``.  Heads may carry a
parameter list and a guard (``name(x) | x < 0 = -x``); a line indented deeper
than column 1 continues the definition started on the line above it, and an
indented trailing ``where`` clause introduces local definitions.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from typing import Optional

from .diagnostics import Diagnostic, error
from .numfmt import format_number

# Token kinds
IDENT = "ident"
NUMBER = "number"
TEXT = "text"
OP = "op"
LPAREN = "lparen"
RPAREN = "rparen"
LBRACKET = "lbracket"
RBRACKET = "rbracket"
COMMA = "comma"
EQUALS = "equals"
VBAR = "vbar"
NEWLINE = "newline"
INDENT = "indent"
END = "end"  # synthetic stream terminator

WHERE_KEYWORD = "where"

COMPARISON_OPS = ("<", "<=", ">", ">=", "==", "/=")
TWO_CHAR_OPS = ("<=", ">=", "==", "/=")
SINGLE_CHAR_OPS = "+-*/&<>#"


@dataclass(frozen=True)
class Token:
    kind: str
    lexeme: str
    line: int
    col: int

    @property
    def pos(self) -> tuple[int, int]:
        return (self.line, self.col)


def tokenize(source: str) -> tuple[list[Token], list[Diagnostic]]:
    """Scan source text into tokens.

    Comment text (``--`` to end of line) and blank lines produce nothing.
    Every content line ends with a newline token, and lines whose first
    character sits right of column 1 start with an indent marker.
    """
    tokens: list[Token] = []
    diags: list[Diagnostic] = []
    lines = source.split("\n")
    for lineno, raw in enumerate(lines, start=1):
        line = raw[:-1] if raw.endswith("\r") else raw
        i = 0
        while i < len(line) and line[i] == " ":
            i += 1
        if i < len(line) and line[i] == "\t":
            diags.append(error("illegal-character", "tab character in indentation; use spaces", (lineno, i + 1)))
            return tokens, diags
        if i >= len(line) or line.startswith("--", i):
            continue
        if i > 0:
            tokens.append(Token(INDENT, line[:i], lineno, 1))
        start_count = len(tokens)
        i = _scan_line(line, i, lineno, tokens, diags)
        if len(tokens) > start_count:
            tokens.append(Token(NEWLINE, "", lineno, i + 1))
        elif tokens and tokens[-1].kind == INDENT:
            tokens.pop()  # line held nothing but rejected characters
    return tokens, diags


def _scan_line(line: str, i: int, lineno: int, tokens: list[Token], diags: list[Diagnostic]) -> int:
    n = len(line)
    while i < n:
        ch = line[i]
        if ch == " ":
            i += 1
            continue
        if ch == "-" and line.startswith("--", i):
            break
        col = i + 1
        if ch.isalpha():
            j = i + 1
            while j < n and (line[j].isalnum() or line[j] == "_"):
                j += 1
            tokens.append(Token(IDENT, line[i:j], lineno, col))
            i = j
        elif ch.isdigit():
            j = i + 1
            while j < n and line[j].isdigit():
                j += 1
            if j < n and line[j] == "." and j + 1 < n and line[j + 1].isdigit():
                j += 1
                while j < n and line[j].isdigit():
                    j += 1
            if j < n and line[j] in "eE":
                k = j + 1
                if k < n and line[k] in "+-":
                    k += 1
                if k < n and line[k].isdigit():
                    j = k + 1
                    while j < n and line[j].isdigit():
                        j += 1
            lexeme = line[i:j]
            if not math.isfinite(float(lexeme)):
                diags.append(error("invalid-number", f"number literal '{lexeme}' is too large", (lineno, col)))
            else:
                tokens.append(Token(NUMBER, lexeme, lineno, col))
            i = j
        elif ch == '"':
            value, j, ok = _scan_text(line, i)
            if not ok:
                diags.append(error("unterminated-text", "text literal is missing its closing quote", (lineno, col)))
            else:
                tokens.append(Token(TEXT, value, lineno, col))
            i = j
        elif line.startswith(TWO_CHAR_OPS, i):
            tokens.append(Token(OP, line[i : i + 2], lineno, col))
            i += 2
        elif ch in SINGLE_CHAR_OPS:
            tokens.append(Token(OP, ch, lineno, col))
            i += 1
        elif ch == "(":
            tokens.append(Token(LPAREN, ch, lineno, col))
            i += 1
        elif ch == ")":
            tokens.append(Token(RPAREN, ch, lineno, col))
            i += 1
        elif ch == "[":
            tokens.append(Token(LBRACKET, ch, lineno, col))
            i += 1
        elif ch == "]":
            tokens.append(Token(RBRACKET, ch, lineno, col))
            i += 1
        elif ch == ",":
            tokens.append(Token(COMMA, ch, lineno, col))
            i += 1
        elif ch == "=":
            tokens.append(Token(EQUALS, ch, lineno, col))
            i += 1
        elif ch == "|":
            tokens.append(Token(VBAR, ch, lineno, col))
            i += 1
        else:
            diags.append(error("illegal-character", f"unexpected character {ch!r}", (lineno, col)))
            i += 1
    return i


_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}


def _scan_text(line: str, i: int) -> tuple[str, int, bool]:
    out: list[str] = []
    j = i + 1
    while j < len(line):
        ch = line[j]
        if ch == '"':
            return "".join(out), j + 1, True
        if ch == "\\" and j + 1 < len(line) and line[j + 1] in _ESCAPES:
            out.append(_ESCAPES[line[j + 1]])
            j += 2
        else:
            out.append(ch)
            j += 1
    return "".join(out), len(line), False


# --- syntax tree ---


@dataclass(eq=False)
class Expr:
    pos: tuple[int, int]
    ty: object = field(default=None, compare=False, repr=False)


@dataclass(eq=False)
class Num(Expr):
    value: float = 0.0


@dataclass(eq=False)
class TextLit(Expr):
    value: str = ""


@dataclass(eq=False)
class Ident(Expr):
    name: str = ""


@dataclass(eq=False)
class Call(Expr):
    name: str = ""
    args: list[Expr] = field(default_factory=list)


@dataclass(eq=False)
class Neg(Expr):
    operand: Expr = None  # type: ignore[assignment]


@dataclass(eq=False)
class BinOp(Expr):
    op: str = ""
    left: Expr = None  # type: ignore[assignment]
    right: Expr = None  # type: ignore[assignment]


@dataclass(eq=False)
class ListLit(Expr):
    items: list[Expr] = field(default_factory=list)


@dataclass(eq=False)
class TupleLit(Expr):
    items: list[Expr] = field(default_factory=list)


@dataclass(eq=False)
class Index(Expr):
    seq: Expr = None  # type: ignore[assignment]
    index: Expr = None  # type: ignore[assignment]


@dataclass(eq=False)
class Param:
    name: str
    pos: tuple[int, int]


@dataclass(eq=False)
class Definition:
    name: str
    pos: tuple[int, int]
    params: list[Param]
    guard: Optional[Expr]
    body: Expr
    where_locals: list["Definition"] = field(default_factory=list)
    indents: list[int] = field(default_factory=list)  # continuation columns, for style checks

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(eq=False)
class SyntaxTree:
    definitions: list[Definition]


def children(expr: Expr) -> list[Expr]:
    if isinstance(expr, Call):
        return list(expr.args)
    if isinstance(expr, Neg):
        return [expr.operand]
    if isinstance(expr, BinOp):
        return [expr.left, expr.right]
    if isinstance(expr, (ListLit, TupleLit)):
        return list(expr.items)
    if isinstance(expr, Index):
        return [expr.seq, expr.index]
    return []


def walk(expr: Expr):
    yield expr
    for child in children(expr):
        yield from walk(child)


def trees_equal(a: object, b: object) -> bool:
    """Structural equality of trees, ignoring source positions and types."""
    if isinstance(a, SyntaxTree) and isinstance(b, SyntaxTree):
        return len(a.definitions) == len(b.definitions) and all(
            trees_equal(x, y) for x, y in zip(a.definitions, b.definitions)
        )
    if isinstance(a, Definition) and isinstance(b, Definition):
        return (
            a.name == b.name
            and [p.name for p in a.params] == [p.name for p in b.params]
            and trees_equal(a.guard, b.guard)
            and trees_equal(a.body, b.body)
            and len(a.where_locals) == len(b.where_locals)
            and all(trees_equal(x, y) for x, y in zip(a.where_locals, b.where_locals))
        )
    if a is None or b is None:
        return a is None and b is None
    if type(a) is not type(b):
        return False
    if isinstance(a, Num):
        return a.value == b.value or (math.isnan(a.value) and math.isnan(b.value))  # type: ignore[union-attr]
    if isinstance(a, TextLit):
        return a.value == b.value  # type: ignore[union-attr]
    if isinstance(a, Ident):
        return a.name == b.name  # type: ignore[union-attr]
    if isinstance(a, Call) and a.name != b.name:  # type: ignore[union-attr]
        return False
    if isinstance(a, BinOp) and a.op != b.op:  # type: ignore[union-attr]
        return False
    ca, cb = children(a), children(b)  # type: ignore[arg-type]
    return len(ca) == len(cb) and all(trees_equal(x, y) for x, y in zip(ca, cb))


# --- parser ---


class _ParseError(Exception):
    def __init__(self, diag: Diagnostic):
        super().__init__(diag.message)
        self.diag = diag


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.i = 0
        self.cont_min = 1  # continuation lines must be indented past this column
        self.depth = 0  # open brackets suspend the layout rule
        self.indents: list[int] = []  # continuation columns of the current definition
        self.in_where = False

    # Layout: between tokens, a newline followed by a line indented past
    # cont_min is invisible; inside brackets every line break is invisible.
    def _sync(self) -> None:
        while self.i < len(self.toks):
            tok = self.toks[self.i]
            if tok.kind == NEWLINE:
                nxt = self.toks[self.i + 1] if self.i + 1 < len(self.toks) else None
                if self.depth > 0:
                    self.i += 1
                    if nxt is not None and nxt.kind == INDENT:
                        if not self.in_where:
                            self.indents.append(_indent_col(nxt))
                        self.i += 1
                    continue
                if nxt is not None and nxt.kind == INDENT and _indent_col(nxt) > self.cont_min:
                    if not self.in_where:
                        self.indents.append(_indent_col(nxt))
                    self.i += 2
                    continue
            return

    def peek(self) -> Token:
        self._sync()
        if self.i >= len(self.toks):
            return Token(END, "", self._last_line(), 1)
        tok = self.toks[self.i]
        if tok.kind in (NEWLINE, INDENT):
            return Token(END, "", tok.line, tok.col)
        return tok

    def advance(self) -> Token:
        tok = self.peek()
        if tok.kind != END:
            self.i += 1
        return tok

    def _last_line(self) -> int:
        return self.toks[-1].line if self.toks else 1

    def at_boundary(self) -> bool:
        return self.peek().kind == END

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise _ParseError(error("unexpected-token", f"expected {what}", tok.pos))
        return self.advance()

    def skip_line_breaks(self) -> None:
        while self.i < len(self.toks) and self.toks[self.i].kind == NEWLINE:
            self.i += 1

    # -- grammar --

    def parse_program(self) -> tuple[SyntaxTree, list[Diagnostic]]:
        defs: list[Definition] = []
        diags: list[Diagnostic] = []
        self.skip_line_breaks()
        while self.i < len(self.toks):
            tok = self.toks[self.i]
            if tok.kind == INDENT:
                diags.append(error("unexpected-indent", "line is indented but no definition precedes it", tok.pos))
                self._recover()
                self.skip_line_breaks()
                continue
            try:
                self.indents = []
                defn = self.parse_definition()
                defn.indents = self.indents
                defs.append(defn)
                tail = self.peek()
                if tail.kind != END:
                    raise _ParseError(error("unexpected-token", f"unexpected '{tail.lexeme}' after definition", tail.pos))
            except _ParseError as exc:
                diags.append(exc.diag)
                self._recover()
            self.skip_line_breaks()
        return SyntaxTree(defs), diags

    def _recover(self) -> None:
        # Skip to the start of the next unindented line.
        self.depth = 0
        self.in_where = False
        while self.i < len(self.toks):
            if self.toks[self.i].kind == NEWLINE:
                nxt = self.toks[self.i + 1] if self.i + 1 < len(self.toks) else None
                if nxt is None or nxt.kind != INDENT:
                    self.i += 1
                    return
            self.i += 1

    def parse_definition(self) -> Definition:
        head = self.peek()
        if head.kind != IDENT:
            raise _ParseError(error("unexpected-token", "expected a definition head name", head.pos))
        if head.lexeme == WHERE_KEYWORD:
            raise _ParseError(error("reserved-name", "'where' cannot be used as a name", head.pos))
        self.advance()
        params: list[Param] = []
        if self.peek().kind == LPAREN:
            params = self._parse_params()
        guard: Optional[Expr] = None
        if self.peek().kind == VBAR:
            self.advance()
            guard = self.parse_expr()
        eq = self.peek()
        if eq.kind != EQUALS:
            raise _ParseError(error("missing-equals", f"definition of '{head.lexeme}' is missing '='", eq.pos if eq.kind != END else head.pos))
        self.advance()
        if self.at_boundary() or self._at_where():
            raise _ParseError(error("empty-body", f"definition of '{head.lexeme}' has no body", eq.pos))
        body = self.parse_expr()
        where_locals: list[Definition] = []
        if self._at_where():
            where_locals = self._parse_where()
        return Definition(head.lexeme, head.pos, params, guard, body, where_locals)

    def _at_where(self) -> bool:
        tok = self.peek()
        return tok.kind == IDENT and tok.lexeme == WHERE_KEYWORD

    def _parse_params(self) -> list[Param]:
        self.advance()  # (
        self.depth += 1
        params: list[Param] = []
        if self.peek().kind != RPAREN:
            while True:
                tok = self.expect(IDENT, "a parameter name")
                if tok.lexeme == WHERE_KEYWORD:
                    raise _ParseError(error("reserved-name", "'where' cannot be used as a name", tok.pos))
                params.append(Param(tok.lexeme, tok.pos))
                if self.peek().kind == COMMA:
                    self.advance()
                    continue
                break
        tok = self.peek()
        if tok.kind != RPAREN:
            raise _ParseError(error("unbalanced-brackets", "parameter list is missing ')'", tok.pos))
        self.advance()
        self.depth -= 1
        return params

    def _parse_where(self) -> list[Definition]:
        self.advance()  # where
        saved_where = self.in_where
        self.in_where = True
        try:
            first = self.peek()
            if first.kind != IDENT:
                raise _ParseError(error("unexpected-token", "expected a local definition after 'where'", first.pos))
            block_col = first.col
            outer_min = self.cont_min
            locals_: list[Definition] = []
            while True:
                self.cont_min = block_col
                try:
                    locals_.append(self.parse_definition())
                finally:
                    self.cont_min = outer_min
                # A following line at exactly the block column starts the next local.
                if self.i < len(self.toks) and self.toks[self.i].kind == NEWLINE:
                    nxt = self.toks[self.i + 1] if self.i + 1 < len(self.toks) else None
                    if nxt is not None and nxt.kind == INDENT:
                        col = _indent_col(nxt)
                        if col == block_col:
                            self.i += 2
                            continue
                        if 1 < col < block_col:
                            raise _ParseError(
                                error("inconsistent-indent",
                                      "local definition is indented less than the first one", nxt.pos)
                            )
                return locals_
        finally:
            self.in_where = saved_where

    # Precedence, loosest first: & | comparisons | + - | * / | unary - | # | atoms
    def parse_expr(self) -> Expr:
        return self._parse_overlay()

    def _parse_overlay(self) -> Expr:
        left = self._parse_comparison()
        tok = self.peek()
        if tok.kind == OP and tok.lexeme == "&":
            self.advance()
            right = self._parse_overlay()  # right-associative
            return BinOp(tok.pos, None, "&", left, right)
        return left

    def _parse_comparison(self) -> Expr:
        left = self._parse_additive()
        tok = self.peek()
        if tok.kind == OP and tok.lexeme in COMPARISON_OPS:
            self.advance()
            right = self._parse_additive()
            after = self.peek()
            if after.kind == OP and after.lexeme in COMPARISON_OPS:
                raise _ParseError(error("chained-comparison", "comparisons cannot be chained; use parentheses", after.pos))
            return BinOp(tok.pos, None, tok.lexeme, left, right)
        return left

    def _parse_additive(self) -> Expr:
        left = self._parse_multiplicative()
        while True:
            tok = self.peek()
            if tok.kind == OP and tok.lexeme in ("+", "-"):
                self.advance()
                right = self._parse_multiplicative()
                left = BinOp(tok.pos, None, tok.lexeme, left, right)
            else:
                return left

    def _parse_multiplicative(self) -> Expr:
        left = self._parse_unary()
        while True:
            tok = self.peek()
            if tok.kind == OP and tok.lexeme in ("*", "/"):
                self.advance()
                right = self._parse_unary()
                left = BinOp(tok.pos, None, tok.lexeme, left, right)
            else:
                return left

    def _parse_unary(self) -> Expr:
        tok = self.peek()
        if tok.kind == OP and tok.lexeme == "-":
            self.advance()
            return Neg(tok.pos, None, self._parse_unary())
        return self._parse_index()

    def _parse_index(self) -> Expr:
        left = self._parse_atom()
        while True:
            tok = self.peek()
            if tok.kind == OP and tok.lexeme == "#":
                self.advance()
                right = self._parse_atom()
                left = Index(tok.pos, None, left, right)
            else:
                return left

    def _parse_atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == NUMBER:
            self.advance()
            return Num(tok.pos, None, float(tok.lexeme))
        if tok.kind == TEXT:
            self.advance()
            return TextLit(tok.pos, None, tok.lexeme)
        if tok.kind == IDENT:
            if tok.lexeme == WHERE_KEYWORD:
                raise _ParseError(error("unexpected-token", "'where' is not allowed here", tok.pos))
            self.advance()
            if self.peek().kind == LPAREN:
                args = self._parse_args()
                return Call(tok.pos, None, tok.lexeme, args)
            return Ident(tok.pos, None, tok.lexeme)
        if tok.kind == LPAREN:
            self.advance()
            self.depth += 1
            items = [self.parse_expr()]
            while self.peek().kind == COMMA:
                self.advance()
                items.append(self.parse_expr())
            close = self.peek()
            if close.kind != RPAREN:
                raise _ParseError(error("unbalanced-brackets", "expected ')'", close.pos))
            self.advance()
            self.depth -= 1
            if len(items) == 1:
                return items[0]
            return TupleLit(tok.pos, None, items)
        if tok.kind == LBRACKET:
            self.advance()
            self.depth += 1
            items: list[Expr] = []
            if self.peek().kind != RBRACKET:
                items.append(self.parse_expr())
                while self.peek().kind == COMMA:
                    self.advance()
                    items.append(self.parse_expr())
            close = self.peek()
            if close.kind != RBRACKET:
                raise _ParseError(error("unbalanced-brackets", "expected ']'", close.pos))
            self.advance()
            self.depth -= 1
            return ListLit(tok.pos, None, items)
        if tok.kind in (RPAREN, RBRACKET):
            raise _ParseError(error("unbalanced-brackets", f"unmatched '{tok.lexeme}'", tok.pos))
        what = "end of line" if tok.kind == END else f"'{tok.lexeme}'"
        raise _ParseError(error("unexpected-token", f"expected an expression, found {what}", tok.pos))

    def _parse_args(self) -> list[Expr]:
        self.advance()  # (
        self.depth += 1
        args: list[Expr] = []
        if self.peek().kind != RPAREN:
            args.append(self.parse_expr())
            while self.peek().kind == COMMA:
                self.advance()
                args.append(self.parse_expr())
        close = self.peek()
        if close.kind != RPAREN:
            raise _ParseError(error("unbalanced-brackets", "call is missing ')'", close.pos))
        self.advance()
        self.depth -= 1
        return args


def _indent_col(tok: Token) -> int:
    return len(tok.lexeme) + 1


def parse(tokens: list[Token]) -> tuple[SyntaxTree, list[Diagnostic]]:
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 12_000))
    return _Parser(tokens).parse_program()


def parse_source(source: str) -> tuple[SyntaxTree, list[Diagnostic]]:
    tokens, diags = tokenize(source)
    if diags:
        return SyntaxTree([]), diags
    return parse(tokens)


# --- canonical printer ---

_PREC = {"&": 1, "<": 2, "<=": 2, ">": 2, ">=": 2, "==": 2, "/=": 2, "+": 3, "-": 3, "*": 4, "/": 4}
_NEG_PREC = 5
_INDEX_PREC = 6
_ATOM_PREC = 9


def print_expr(expr: Expr) -> str:
    return _print(expr, 0)


def _print(expr: Expr, context: int) -> str:
    if isinstance(expr, Num):
        return format_number(expr.value)
    if isinstance(expr, TextLit):
        return '"' + expr.value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t") + '"'
    if isinstance(expr, Ident):
        return expr.name
    if isinstance(expr, Call):
        return expr.name + "(" + ", ".join(_print(a, 0) for a in expr.args) + ")"
    if isinstance(expr, ListLit):
        return "[" + ", ".join(_print(a, 0) for a in expr.items) + "]"
    if isinstance(expr, TupleLit):
        return "(" + ", ".join(_print(a, 0) for a in expr.items) + ")"
    if isinstance(expr, Neg):
        inner = _print(expr.operand, _NEG_PREC)
        if isinstance(expr.operand, Neg):
            inner = "(" + inner + ")"  # avoid '--', which would read as a comment
        text = "-" + inner
        return "(" + text + ")" if context > _NEG_PREC else text
    if isinstance(expr, Index):
        left = _print(expr.seq, _INDEX_PREC)
        right = _print(expr.index, _INDEX_PREC + 1)
        text = f"{left} # {right}"
        return "(" + text + ")" if context > _INDEX_PREC else text
    if isinstance(expr, BinOp):
        prec = _PREC[expr.op]
        if expr.op == "&":
            left = _print(expr.left, prec + 1)
            right = _print(expr.right, prec)
        elif prec == 2:
            left = _print(expr.left, prec + 1)
            right = _print(expr.right, prec + 1)
        else:
            left = _print(expr.left, prec)
            right = _print(expr.right, prec + 1)
        text = f"{left} {expr.op} {right}"
        return "(" + text + ")" if context > prec else text
    raise TypeError(f"cannot print {type(expr).__name__}")


def print_definition(d: Definition, indent: int = 0) -> str:
    pad = " " * indent
    head = d.name
    if d.params:
        head += "(" + ", ".join(p.name for p in d.params) + ")"
    guard = f" | {print_expr(d.guard)}" if d.guard is not None else ""
    lines = [f"{pad}{head}{guard} = {print_expr(d.body)}"]
    if d.where_locals:
        lines.append(f"{pad}  where")
        for local in d.where_locals:
            lines.append(print_definition(local, indent + 4))
    return "\n".join(lines)


def print_tree(tree: SyntaxTree) -> str:
    return "\n".join(print_definition(d) for d in tree.definitions) + "\n"
