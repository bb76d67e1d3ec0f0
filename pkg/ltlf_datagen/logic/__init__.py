"""
LTLf formulas: syntax tree, parser, normal form and trace semantics.
"""

from .formula import (
    Formula, TrueFormula, FalseFormula, TRUE, FALSE, Atom, Not, And, Or, Implies,
    Iff, Next, WeakNext, Globally, Finally, Until, Release,
    atoms_of, to_text, walk, conjunction, disjunction,
)
from .parser import parse_formula
from .nnf import to_nnf, is_nnf, empty_trace_value
from .semantics import eval_trace, eval_batch, Trace, Valuation

__all__ = [
    'Formula', 'TrueFormula', 'FalseFormula', 'TRUE', 'FALSE', 'Atom', 'Not',
    'And', 'Or', 'Implies', 'Iff', 'Next', 'WeakNext', 'Globally', 'Finally',
    'Until', 'Release', 'atoms_of', 'to_text', 'walk', 'conjunction',
    'disjunction', 'parse_formula', 'to_nnf', 'is_nnf', 'empty_trace_value',
    'eval_trace', 'eval_batch', 'Trace', 'Valuation',
]
