"""
LTLf Formula Models

Immutable syntax tree for linear temporal logic over finite traces. Nodes are
frozen dataclasses, so structural equality and hashing come for free and
formulas can be used as dictionary keys (automaton states do this).
"""

from dataclasses import dataclass
from typing import Iterator, List


@dataclass(frozen=True)
class Formula:
    """Base class for all LTLf formulas."""

    def children(self) -> tuple:
        return ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class TrueFormula(Formula):
    pass


@dataclass(frozen=True)
class FalseFormula(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Unary(Formula):
    operand: Formula

    def children(self) -> tuple:
        return (self.operand,)


@dataclass(frozen=True)
class Binary(Formula):
    left: Formula
    right: Formula

    def children(self) -> tuple:
        return (self.left, self.right)


@dataclass(frozen=True)
class Not(Unary):
    pass


@dataclass(frozen=True)
class Next(Unary):
    pass


@dataclass(frozen=True)
class WeakNext(Unary):
    pass


@dataclass(frozen=True)
class Globally(Unary):
    pass


@dataclass(frozen=True)
class Finally(Unary):
    pass


@dataclass(frozen=True)
class And(Binary):
    pass


@dataclass(frozen=True)
class Or(Binary):
    pass


@dataclass(frozen=True)
class Implies(Binary):
    pass


@dataclass(frozen=True)
class Iff(Binary):
    pass


@dataclass(frozen=True)
class Until(Binary):
    pass


@dataclass(frozen=True)
class Release(Binary):
    pass


TRUE = TrueFormula()
FALSE = FalseFormula()

ASCII_SYMBOLS = {
    Not: "!", Next: "X ", WeakNext: "WX ", Globally: "G ", Finally: "F ",
    And: "&", Or: "|", Implies: "->", Iff: "<->", Until: "U", Release: "R",
}

UNICODE_SYMBOLS = {
    Not: "¬", Next: "◯", WeakNext: "●", Globally: "□", Finally: "◊",
    And: "∧", Or: "∨", Implies: "→", Iff: "↔", Until: "U", Release: "R",
}


def walk(formula: Formula) -> Iterator[Formula]:
    """Yield every node of the tree in pre-order, left to right."""
    stack = [formula]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))


def atoms_of(formula: Formula) -> List[str]:
    """Return the sorted names of all atoms occurring in the formula."""
    return sorted({node.name for node in walk(formula) if isinstance(node, Atom)})


def conjunction(*parts: Formula) -> Formula:
    """Fold formulas with And; the empty conjunction is true."""
    if not parts:
        return TRUE
    result = parts[0]
    for part in parts[1:]:
        result = And(result, part)
    return result


def disjunction(*parts: Formula) -> Formula:
    """Fold formulas with Or; the empty disjunction is false."""
    if not parts:
        return FALSE
    result = parts[0]
    for part in parts[1:]:
        result = Or(result, part)
    return result


def to_text(formula: Formula, unicode: bool = False) -> str:
    """
    Render a formula in the ASCII surface syntax (or with Unicode operators).

    Binary subterms are always parenthesised, so parsing the output yields
    the same tree.
    """
    symbols = UNICODE_SYMBOLS if unicode else ASCII_SYMBOLS

    def render(node: Formula, top: bool) -> str:
        if isinstance(node, TrueFormula):
            return "⊤" if unicode else "true"
        if isinstance(node, FalseFormula):
            return "⊥" if unicode else "false"
        if isinstance(node, Atom):
            return node.name
        if isinstance(node, Unary):
            return f"{symbols[type(node)]}{render(node.operand, False)}"
        if isinstance(node, Binary):
            text = f"{render(node.left, False)} {symbols[type(node)]} {render(node.right, False)}"
            return text if top else f"({text})"
        raise TypeError(f"Unsupported formula node: {node!r}")

    return render(formula, True)
