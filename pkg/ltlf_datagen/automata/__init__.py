"""
Symbolic finite automata: compilation from LTLf, minimisation, runs and export.
"""

from .guards import Guard, TRUE_GUARD, FALSE_GUARD, guard_from_minterms, guard_from_formula, parse_guard
from .sfa import (
    Sfa, Transition, RunResult, run, run_symbols, check_equiv, export, to_json,
    to_dot, from_json, from_table, build_sfa, reachable_states,
)
from .minimize import minimize, minimize_table
from .compiler import compile_formula

__all__ = [
    'Guard', 'TRUE_GUARD', 'FALSE_GUARD', 'guard_from_minterms', 'guard_from_formula',
    'parse_guard', 'Sfa', 'Transition', 'RunResult', 'run', 'run_symbols',
    'check_equiv', 'export', 'to_json', 'to_dot', 'from_json', 'from_table',
    'build_sfa', 'reachable_states', 'minimize', 'minimize_table', 'compile_formula',
]
