"""
LTLf Formula Parser

Recursive-descent parser for the ASCII surface syntax

    !  &  |  ->  <->  X  WX  G  F  U  R  true  false  ( )

(the Unicode operators printed by `to_text(..., unicode=True)` are accepted
as well). Binding, from loosest to tightest: <->, -> (right associative),
|, &, U and R (right associative), then the unary operators.
"""

import re
from dataclasses import dataclass
from typing import AbstractSet, List, Optional

from ltlf_datagen.exceptions import FormulaSyntaxError, UnknownAtomError
from .formula import (
    Formula, TRUE, FALSE, Atom, Not, Next, WeakNext, Globally, Finally,
    And, Or, Implies, Iff, Until, Release,
)

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<op><->|->|&&|\|\||[!&|()~]|[¬∧∨→↔◯●□◊⊤⊥])|(?P<word>[A-Za-z_][A-Za-z0-9_]*))"
)

_ALIASES = {
    "&&": "&", "||": "|", "~": "!", "¬": "!", "∧": "&", "∨": "|", "→": "->",
    "↔": "<->", "◯": "X", "●": "WX", "□": "G", "◊": "F", "⊤": "true", "⊥": "false",
}

KEYWORDS = frozenset({"X", "WX", "G", "F", "U", "R", "true", "false"})

_UNARY = {"!": Not, "X": Next, "WX": WeakNext, "G": Globally, "F": Finally}


@dataclass(frozen=True)
class _Token:
    kind: str  # "op", "word" or "end"
    text: str
    position: int


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN_RE.match(text, pos)
        if match is None or match.end() == pos:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = "op" if match.group("op") else "word"
        raw = match.group(kind)
        start = match.start(kind)
        value = _ALIASES.get(raw, raw)
        if value in KEYWORDS:
            kind = "op"
        tokens.append(_Token(kind, value, start))
        pos = match.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, known_atoms: Optional[AbstractSet[str]]):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0
        self.known_atoms = known_atoms

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def accept(self, *texts: str) -> Optional[_Token]:
        token = self.current
        if token.kind == "op" and token.text in texts:
            self.index += 1
            return token
        return None

    def fail(self, message: str):
        raise FormulaSyntaxError(message, self.text, self.current.position)

    def parse(self) -> Formula:
        formula = self.parse_iff()
        if self.current.kind != "end":
            self.fail(f"unexpected token {self.current.text!r}")
        return formula

    def parse_iff(self) -> Formula:
        left = self.parse_implies()
        while self.accept("<->"):
            left = Iff(left, self.parse_implies())
        return left

    def parse_implies(self) -> Formula:
        left = self.parse_or()
        if self.accept("->"):
            return Implies(left, self.parse_implies())
        return left

    def parse_or(self) -> Formula:
        left = self.parse_and()
        while self.accept("|"):
            left = Or(left, self.parse_and())
        return left

    def parse_and(self) -> Formula:
        left = self.parse_until()
        while self.accept("&"):
            left = And(left, self.parse_until())
        return left

    def parse_until(self) -> Formula:
        left = self.parse_unary()
        token = self.accept("U", "R")
        if token is None:
            return left
        right = self.parse_until()
        return Until(left, right) if token.text == "U" else Release(left, right)

    def parse_unary(self) -> Formula:
        token = self.accept(*_UNARY)
        if token is not None:
            return _UNARY[token.text](self.parse_unary())
        return self.parse_primary()

    def parse_primary(self) -> Formula:
        token = self.current
        if self.accept("true"):
            return TRUE
        if self.accept("false"):
            return FALSE
        if self.accept("("):
            inner = self.parse_iff()
            if not self.accept(")"):
                self.fail("expected ')'")
            return inner
        if token.kind == "word":
            self.index += 1
            if self.known_atoms is not None and token.text not in self.known_atoms:
                raise UnknownAtomError(token.text)
            return Atom(token.text)
        if token.kind == "end":
            self.fail("unexpected end of formula")
        self.fail(f"unexpected token {token.text!r}")
        return TRUE  # unreachable, keeps linters quiet


def parse_formula(text: str, known_atoms: Optional[AbstractSet[str]] = None) -> Formula:
    """
    Parse an LTLf formula.

    Args:
        text: Formula source text
        known_atoms: If given, every atom must belong to this set

    Returns:
        Formula: The syntax tree

    Raises:
        FormulaSyntaxError: If the text is empty or malformed (carries the position)
        UnknownAtomError: If an atom is not in known_atoms
    """
    if not text or not text.strip():
        raise FormulaSyntaxError("empty formula", text or "", 0)
    return _Parser(text, known_atoms).parse()
