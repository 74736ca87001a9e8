"""Concrete textual syntax for terms.

Grammar (ASCII)::

    term   := IDENT | STRING | OP '(' term (',' term)* ')'
    OP     := or_p | and_p | or_o | and_o | c_p | c_o
    IDENT  := [A-Za-z_][A-Za-z0-9_]*
    STRING := double-quoted, backslash escapes for quote and backslash

Whitespace and newlines between tokens are insignificant; the encoding is
UTF-8. Operator names are reserved: a bare operator name is not a valid
basic-action identifier (the printer quotes such labels, keeping the
parse/print round-trip exact).

Player types are inferred during the descent: the root is proponent-typed,
basic actions inherit the type their context forces, and a conflicting
operator raises a positioned error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterator

from .errors import PlayerTypeError, StructureError, TermParseError
from .model import Player
from .terms import Apply, Basic, TermNode, TermOp

MAX_NESTING = 512

_OP_NAMES = {op.value: op for op in TermOp}
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class SourceSpan:
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __str__(self) -> str:
        return f"{self.start_line}:{self.start_col}-{self.end_line}:{self.end_col}"


class _Kind(Enum):
    IDENT = "identifier"
    STRING = "string"
    LPAREN = "'('"
    RPAREN = "')'"
    COMMA = "','"
    EOF = "end of input"


@dataclass(frozen=True)
class _Token:
    kind: _Kind
    text: str
    value: str
    span: SourceSpan


def _lex(text: str) -> Iterator[_Token]:
    i = 0
    line = 1
    col = 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        start_line, start_col = line, col
        if ch == "(":
            yield _Token(_Kind.LPAREN, "(", "(", SourceSpan(line, col, line, col))
            i += 1
            col += 1
        elif ch == ")":
            yield _Token(_Kind.RPAREN, ")", ")", SourceSpan(line, col, line, col))
            i += 1
            col += 1
        elif ch == ",":
            yield _Token(_Kind.COMMA, ",", ",", SourceSpan(line, col, line, col))
            i += 1
            col += 1
        elif ch == '"':
            i += 1
            col += 1
            chars: list[str] = []
            while True:
                if i >= n:
                    span = SourceSpan(line, col, line, col)
                    raise TermParseError(span, ["closing '\"'"], "end of input")
                ch = text[i]
                if ch == '"':
                    yield _Token(
                        _Kind.STRING,
                        text[:0],  # raw text unused for strings
                        "".join(chars),
                        SourceSpan(start_line, start_col, line, col),
                    )
                    i += 1
                    col += 1
                    break
                if ch == "\\":
                    if i + 1 >= n or text[i + 1] not in ('"', "\\"):
                        span = SourceSpan(line, col, line, col)
                        found = text[i : i + 2] if i + 1 < n else "end of input"
                        raise TermParseError(span, ["escape sequence \\\" or \\\\"], found)
                    chars.append(text[i + 1])
                    i += 2
                    col += 2
                elif ch == "\n":
                    chars.append(ch)
                    i += 1
                    line += 1
                    col = 1
                else:
                    chars.append(ch)
                    i += 1
                    col += 1
        else:
            match = _IDENT.match(text, i)
            if not match:
                span = SourceSpan(line, col, line, col)
                raise TermParseError(span, ["identifier, string, '(', ')' or ','"], ch)
            word = match.group(0)
            end_col = col + len(word) - 1
            yield _Token(_Kind.IDENT, word, word, SourceSpan(line, col, line, end_col))
            i = match.end()
            col = end_col + 1
    yield _Token(_Kind.EOF, "", "", SourceSpan(line, col, line, col))


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self._tokens = tokens
        self._pos = 0

    def peek(self) -> _Token:
        return self._tokens[self._pos]

    def advance(self) -> _Token:
        token = self._tokens[self._pos]
        if token.kind is not _Kind.EOF:
            self._pos += 1
        return token

    def expect(self, kind: _Kind) -> _Token:
        token = self.peek()
        if token.kind is not kind:
            raise TermParseError(token.span, [kind.value], token.text or token.kind.value)
        return self.advance()

    def term(self, want: Player, depth: int) -> tuple[TermNode, SourceSpan]:
        token = self.peek()
        if token.kind is _Kind.STRING:
            self.advance()
            return Basic(want, token.value), token.span
        if token.kind is not _Kind.IDENT:
            raise TermParseError(token.span, ["a term"], token.text or token.kind.value)
        self.advance()
        op = _OP_NAMES.get(token.value)
        if self.peek().kind is not _Kind.LPAREN:
            if op is not None:
                next_token = self.peek()
                raise TermParseError(
                    next_token.span, ["'('"], next_token.text or next_token.kind.value
                )
            return Basic(want, token.value), token.span
        if op is None:
            raise TermParseError(
                token.span,
                ["an operator (or_p, and_p, or_o, and_o, c_p, c_o)"],
                token.text,
            )
        if depth >= MAX_NESTING:
            raise TermParseError(token.span, [f"nesting depth below {MAX_NESTING}"], token.text)
        if op.player is not want:
            raise PlayerTypeError(
                f"{op.value} yields a {op.player.value}-typed term where "
                f"{want.value} is required",
                span=token.span,
            )
        self.expect(_Kind.LPAREN)
        args: list[TermNode] = []
        spans: list[SourceSpan] = []
        while True:
            arg_want = self._arg_player(op, len(args), token.span)
            arg, span = self.term(arg_want, depth + 1)
            args.append(arg)
            spans.append(span)
            if self.peek().kind is _Kind.COMMA:
                self.advance()
                continue
            close = self.expect(_Kind.RPAREN)
            break
        if op.is_counter:
            if len(args) != 2:
                raise StructureError(
                    f"{op.value} takes exactly 2 arguments, got {len(args)}", span=token.span
                )
            first = args[0]
            if isinstance(first, Apply) and first.op is op:
                raise StructureError(
                    f"{op.value} may not be applied directly to a {op.value} term",
                    span=spans[0],
                )
        full = SourceSpan(
            token.span.start_line, token.span.start_col, close.span.end_line, close.span.end_col
        )
        return Apply(op, tuple(args)), full

    @staticmethod
    def _arg_player(op: TermOp, index: int, span: SourceSpan) -> Player:
        if not op.is_counter:
            return op.player
        if index == 0:
            return op.player
        if index == 1:
            return op.player.opposite
        raise StructureError(f"{op.value} takes exactly 2 arguments", span=span)


def parse_term(text: str) -> TermNode:
    """Parse and type a term; raises TermParseError, PlayerTypeError or
    StructureError, each carrying the offending source span."""
    tokens = list(_lex(text))
    parser = _Parser(tokens)
    term, _ = parser.term(Player.PROPONENT, 0)
    trailing = parser.peek()
    if trailing.kind is not _Kind.EOF:
        raise TermParseError(trailing.span, ["end of input"], trailing.text)
    return term


def format_label(label: str) -> str:
    """Bare identifier when the lexeme allows it, else a quoted string."""
    if _IDENT.fullmatch(label) and label not in _OP_NAMES:
        return label
    escaped = label.replace("\\", "\\\\").replace('"', '\\"')
    return f'"{escaped}"'


def print_term(term: TermNode) -> str:
    """Canonical rendering: one space after commas, none inside parentheses.

    ``parse_term(print_term(t))`` is structurally equal to ``t`` for every
    well-typed term.
    """
    out: list[str] = []
    work: list[object] = [term]
    while work:
        item = work.pop()
        if isinstance(item, str):
            out.append(item)
        elif isinstance(item, Basic):
            out.append(format_label(item.label))
        else:
            out.append(item.op.value + "(")
            tail: list[object] = []
            for i, arg in enumerate(item.args):
                if i:
                    tail.append(", ")
                tail.append(arg)
            tail.append(")")
            work.extend(reversed(tail))
    return "".join(out)


def lint_term(term: TermNode) -> list[str]:
    """Non-fatal style findings; currently flags single-child refinements."""
    findings: list[str] = []
    stack: list[tuple[TermNode, tuple[int, ...]]] = [(term, ())]
    while stack:
        t, path = stack.pop()
        if isinstance(t, Apply):
            if not t.op.is_counter and len(t.args) == 1:
                where = ".".join(str(i) for i in path) or "root"
                findings.append(f"{t.op.value} with a single argument at {where}")
            for i, arg in enumerate(t.args):
                stack.append((arg, path + (i,)))
    return findings
