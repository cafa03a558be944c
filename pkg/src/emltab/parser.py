"""Recursive-descent parser for the formula surface syntax.

Grammar (whitespace is insignificant)::

    formula := iff
    iff     := imp ("<->" imp)*
    imp     := or ("->" imp)?            right associative
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "~" unary | "D{" agents "}" unary | "C{" agents "}" unary
             | "K{" agent "}" unary | "(" formula ")" | atom
    agents  := agent ("," agent)*
    atom, agent := [a-zA-Z][a-zA-Z0-9_]*

Sugar is expanded while parsing: ``|``, ``->`` and ``<->`` become negated
conjunctions and ``K{a}`` becomes ``D{a}``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .formula import (
    Atom,
    Coalition,
    Common,
    Dist,
    Formula,
    Not,
    And,
    disj,
    iff,
    implies,
)

_TOKEN = re.compile(
    r"\s*(?:(?P<op><->|->|[~&|(){},])|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<bad>\S))"
)
_MODAL_PREFIXES = {"D", "C", "K"}


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass
class _Token:
    kind: str  # "op", "name", "end"
    text: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.group("bad") is not None:
            raise ParseError(f"unexpected character {m.group('bad')!r}", m.start("bad"))
        kind = "op" if m.group("op") is not None else "name"
        tokens.append(_Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def _peek(self, offset: int = 1) -> _Token:
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            found = self.tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {found!r}", self.tok.pos)

    def formula(self) -> Formula:
        f = self.imp()
        while self.accept("<->"):
            f = iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.disj()
        if self.accept("->"):
            return implies(f, self.imp())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.accept("|"):
            f = disj(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.accept("&"):
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.tok
        if self.accept("~"):
            return Not(self.unary())
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        if tok.kind == "name":
            nxt = self._peek()
            if tok.text in _MODAL_PREFIXES and nxt.kind == "op" and nxt.text == "{":
                self.i += 2
                coalition = self.agents(tok)
                body = self.unary()
                if tok.text == "C":
                    return Common(coalition, body)
                return Dist(coalition, body)
            self.i += 1
            return Atom(tok.text)
        found = tok.text or "end of input"
        raise ParseError(f"unexpected {found!r}", tok.pos)

    def agents(self, op: _Token) -> Coalition:
        if self.tok.kind == "op" and self.tok.text == "}":
            raise ParseError("empty coalition", self.tok.pos)
        names = [self.agent()]
        while self.accept(","):
            names.append(self.agent())
        self.expect("}")
        if op.text == "K" and len(names) != 1:
            raise ParseError("K{...} takes exactly one agent", op.pos)
        return Coalition(names)

    def agent(self) -> str:
        tok = self.tok
        if tok.kind != "name":
            found = tok.text or "end of input"
            raise ParseError(f"expected agent name, found {found!r}", tok.pos)
        self.i += 1
        return tok.text


def parse(text: str) -> Formula:
    """Parse ``text`` into a core formula.

    Raises :class:`ParseError` (a ``ValueError``) carrying the offending
    character position.
    """
    p = _Parser(text)
    f = p.formula()
    if p.tok.kind != "end":
        raise ParseError(f"unexpected {p.tok.text!r}", p.tok.pos)
    return f


def parse_set(lines: str) -> list[Formula]:
    """Parse one formula per non-blank line; ``#`` starts a comment."""
    out = []
    for raw in lines.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(parse(line))
    return out
