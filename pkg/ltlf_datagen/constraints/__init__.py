"""
Finite-domain constraints: expression language, all-solutions solver and solution cache.
"""

from .expressions import (
    Universe, Expr, ConstraintDef, parse_constraint, parse_expression, eval_constraint,
)
from .solver import SolutionPool, solve_all, relevant_variables
from .cache import CacheStats, Sample, SolutionCache, cache_get, cache_sample

__all__ = [
    'Universe', 'Expr', 'ConstraintDef', 'parse_constraint', 'parse_expression',
    'eval_constraint', 'SolutionPool', 'solve_all', 'relevant_variables',
    'CacheStats', 'Sample', 'SolutionCache', 'cache_get', 'cache_sample',
]
