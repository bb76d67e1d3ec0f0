"""
Negation normal form.

Rewrites any formula into the core {!, &, |, X, WX, U, R} with negations
pushed onto atoms. Finite-trace duality: !X f == WX !f.
"""

from .formula import (
    Formula, TrueFormula, FalseFormula, TRUE, FALSE, Atom, Not, And, Or, Implies,
    Iff, Next, WeakNext, Globally, Finally, Until, Release,
)


def to_nnf(formula: Formula) -> Formula:
    """Return an equivalent formula in negation normal form."""
    return _positive(formula)


def _positive(node: Formula) -> Formula:
    if isinstance(node, (TrueFormula, FalseFormula, Atom)):
        return node
    if isinstance(node, Not):
        return _negative(node.operand)
    if isinstance(node, And):
        return And(_positive(node.left), _positive(node.right))
    if isinstance(node, Or):
        return Or(_positive(node.left), _positive(node.right))
    if isinstance(node, Implies):
        return Or(_negative(node.left), _positive(node.right))
    if isinstance(node, Iff):
        return Or(
            And(_positive(node.left), _positive(node.right)),
            And(_negative(node.left), _negative(node.right)),
        )
    if isinstance(node, Next):
        return Next(_positive(node.operand))
    if isinstance(node, WeakNext):
        return WeakNext(_positive(node.operand))
    if isinstance(node, Globally):
        return Release(FALSE, _positive(node.operand))
    if isinstance(node, Finally):
        return Until(TRUE, _positive(node.operand))
    if isinstance(node, Until):
        return Until(_positive(node.left), _positive(node.right))
    if isinstance(node, Release):
        return Release(_positive(node.left), _positive(node.right))
    raise TypeError(f"Unsupported formula node: {node!r}")


def _negative(node: Formula) -> Formula:
    """NNF of the negation of node."""
    if isinstance(node, TrueFormula):
        return FALSE
    if isinstance(node, FalseFormula):
        return TRUE
    if isinstance(node, Atom):
        return Not(node)
    if isinstance(node, Not):
        return _positive(node.operand)
    if isinstance(node, And):
        return Or(_negative(node.left), _negative(node.right))
    if isinstance(node, Or):
        return And(_negative(node.left), _negative(node.right))
    if isinstance(node, Implies):
        return And(_positive(node.left), _negative(node.right))
    if isinstance(node, Iff):
        return Or(
            And(_positive(node.left), _negative(node.right)),
            And(_negative(node.left), _positive(node.right)),
        )
    if isinstance(node, Next):
        return WeakNext(_negative(node.operand))
    if isinstance(node, WeakNext):
        return Next(_negative(node.operand))
    if isinstance(node, Globally):
        return Until(TRUE, _negative(node.operand))
    if isinstance(node, Finally):
        return Release(FALSE, _negative(node.operand))
    if isinstance(node, Until):
        return Release(_negative(node.left), _negative(node.right))
    if isinstance(node, Release):
        return Until(_negative(node.left), _negative(node.right))
    raise TypeError(f"Unsupported formula node: {node!r}")


def is_nnf(formula: Formula) -> bool:
    """True when the formula uses only the core operators with negation on atoms."""
    if isinstance(formula, (TrueFormula, FalseFormula, Atom)):
        return True
    if isinstance(formula, Not):
        return isinstance(formula.operand, Atom)
    if isinstance(formula, (Implies, Iff, Globally, Finally)):
        return False
    return all(is_nnf(child) for child in formula.children())


def empty_trace_value(formula: Formula) -> bool:
    """
    Truth of an NNF formula on the empty suffix (past the last step).

    Atoms, X and U are false there; WX and R are true.
    """
    if isinstance(formula, TrueFormula):
        return True
    if isinstance(formula, (FalseFormula, Atom, Not, Next, Until, Finally)):
        if isinstance(formula, Not) and not isinstance(formula.operand, Atom):
            raise ValueError("empty_trace_value expects a formula in negation normal form")
        return False
    if isinstance(formula, (WeakNext, Release, Globally)):
        return True
    if isinstance(formula, And):
        return empty_trace_value(formula.left) and empty_trace_value(formula.right)
    if isinstance(formula, Or):
        return empty_trace_value(formula.left) or empty_trace_value(formula.right)
    raise ValueError("empty_trace_value expects a formula in negation normal form")
