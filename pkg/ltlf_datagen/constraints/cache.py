"""
Solution Cache

Lazily filled memo of solution pools keyed by canonical guard text. Pools are
solved the first time a guard is requested; concurrent requests for a guard
being solved wait for that fill instead of solving it again. A random
solution is then drawn in constant time as often as needed.
"""

import threading
from dataclasses import dataclass, asdict
from typing import Dict, Mapping, Optional, Sequence

import numpy as np
from cachetools import LRUCache

from ltlf_datagen.config import get_logger, get_settings
from ltlf_datagen.exceptions import EmptyPoolError
from ltlf_datagen.automata.guards import Guard
from .expressions import ConstraintDef
from .solver import SolutionPool, solve_all

logger = get_logger(__name__)


@dataclass
class CacheStats:
    """Monotone counters of cache activity."""

    hits: int = 0
    misses: int = 0
    pools: int = 0
    solutions: int = 0

    def to_dict(self) -> Dict[str, int]:
        return asdict(self)


@dataclass(frozen=True)
class Sample:
    """
    One world drawn from a pool.

    Attributes:
        assignment: Every problem variable -> encoded value
        truths: Every constraint -> truth under the assignment
        variable_relevance: Variable -> True when a guard constraint mentions it
        constraint_relevance: Constraint -> True when the guard mentions it
    """

    assignment: Dict[str, int]
    truths: Dict[str, bool]
    variable_relevance: Dict[str, bool]
    constraint_relevance: Dict[str, bool]


class SolutionCache:
    """
    Concurrent memo table of solution pools for one constraint problem.

    Args:
        constraints: Constraint name -> definition
        domains: Variable -> encoded values, in declaration order
        maxsize: Pools kept (defaults to LTLF_DATAGEN_CACHE_SIZE; 0 disables caching)
        max_tuples: Solver cap passed to solve_all
    """

    def __init__(self, constraints: Mapping[str, ConstraintDef],
                 domains: Mapping[str, Sequence[int]],
                 maxsize: Optional[int] = None, max_tuples: Optional[int] = None):
        self.constraints = dict(constraints)
        self.domains = {var: tuple(values) for var, values in domains.items()}
        self.maxsize = get_settings().cache_size if maxsize is None else maxsize
        self.max_tuples = max_tuples
        self._pools: Optional[LRUCache] = LRUCache(maxsize=self.maxsize) if self.maxsize > 0 else None
        self._inflight: Dict[str, threading.Event] = {}
        self._lock = threading.Lock()
        self._stats = CacheStats()

    def get(self, guard: Guard) -> SolutionPool:
        """Return the pool of a guard, solving it on first request."""
        key = guard.text
        if self._pools is None:
            with self._lock:
                self._stats.misses += 1
            return self._solve(guard)

        while True:
            with self._lock:
                if key in self._pools:
                    self._stats.hits += 1
                    return self._pools[key]
                pending = self._inflight.get(key)
                if pending is None:
                    self._stats.misses += 1
                    self._inflight[key] = threading.Event()
                    break
            pending.wait()

        try:
            pool = self._solve(guard)
            with self._lock:
                self._pools[key] = pool
            return pool
        finally:
            with self._lock:
                event = self._inflight.pop(key, None)
            if event is not None:
                event.set()

    def _solve(self, guard: Guard) -> SolutionPool:
        pool = solve_all(guard, self.constraints, self.domains, self.max_tuples)
        with self._lock:
            self._stats.pools += 1
            self._stats.solutions += len(pool)
        logger.debug("Cache fill for guard %s: %d solutions", guard, len(pool))
        return pool

    @property
    def stats(self) -> CacheStats:
        with self._lock:
            return CacheStats(**asdict(self._stats))

    def __len__(self) -> int:
        return 0 if self._pools is None else len(self._pools)


def cache_get(cache: SolutionCache, guard: Guard) -> SolutionPool:
    return cache.get(guard)


def cache_sample(pool: SolutionPool, rng: np.random.Generator) -> Sample:
    """
    Draw a uniform solution, then fill free variables uniformly from their domains.

    Raises:
        EmptyPoolError: If the pool has no solution
    """
    if pool.is_empty:
        raise EmptyPoolError(f"guard {pool.guard} has no solutions")
    index = int(rng.integers(len(pool.solutions)))
    assignment = dict(zip(pool.variables, pool.solutions[index]))
    for var, domain in pool.free_variables:
        assignment[var] = domain[int(rng.integers(len(domain)))]

    truths = dict(zip(pool.truth_names, pool.truths[index]))
    for name, constraint in pool.constraints.items():
        if name not in truths:
            truths[name] = constraint.evaluate(assignment)

    relevant = set(pool.variables)
    return Sample(
        assignment=assignment,
        truths=truths,
        variable_relevance={var: var in relevant for var in assignment},
        constraint_relevance=dict(pool.relevance),
    )
