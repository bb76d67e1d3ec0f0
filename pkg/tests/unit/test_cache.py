"""
Unit tests for the solution cache and uniform sampling.
"""

from collections import Counter
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest
from scipy.stats import chisquare

from ltlf_datagen.automata.guards import parse_guard
from ltlf_datagen.constraints.cache import SolutionCache, cache_get, cache_sample
from ltlf_datagen.constraints.expressions import parse_constraint
from ltlf_datagen.constraints.solver import solve_all
from ltlf_datagen.exceptions import EmptyPoolError

DIGITS = tuple(range(10))


@pytest.fixture
def cache():
    """Provide a cache over the A + B = C problem with a free variable D."""
    constraints = {
        's': parse_constraint('s', ['A', 'B', 'C'], 'A + B = C'),
        'd': parse_constraint('d', ['D'], 'D > 2'),
    }
    domains = {'A': DIGITS, 'B': DIGITS, 'C': DIGITS, 'D': tuple(range(5))}
    return SolutionCache(constraints, domains, maxsize=16)


class TestSolutionCache:
    """Tests for SolutionCache."""

    def test_first_request_misses_then_hits(self, cache):
        """Test the hit and miss counters."""
        first = cache.get(parse_guard('s'))
        second = cache_get(cache, parse_guard('s'))
        assert first is second
        stats = cache.stats
        assert (stats.hits, stats.misses, stats.pools, stats.solutions) == (1, 1, 1, 55)
        assert len(cache) == 1

    def test_equal_guards_share_a_pool(self, cache):
        """Test that differently written equal guards hit the same entry."""
        cache.get(parse_guard('s & s'))
        cache.get(parse_guard('s | s'))
        assert cache.stats.misses == 1

    def test_disabled_cache_always_solves(self):
        """Test that maxsize=0 solves on every request."""
        constraints = {'s': parse_constraint('s', ['A', 'B', 'C'], 'A + B = C')}
        cache = SolutionCache(constraints, {'A': DIGITS, 'B': DIGITS, 'C': DIGITS}, maxsize=0)
        cache.get(parse_guard('s'))
        cache.get(parse_guard('s'))
        assert cache.stats.pools == 2
        assert len(cache) == 0

    def test_concurrent_requests_solve_once(self, cache):
        """Test that parallel requests for one guard fill it once."""
        guard = parse_guard('!s')
        with ThreadPoolExecutor(max_workers=8) as executor:
            pools = list(executor.map(lambda _: cache.get(guard), range(32)))
        assert all(pool is pools[0] for pool in pools)
        assert cache.stats.pools == 1
        assert cache.stats.hits + cache.stats.misses == 32

    def test_stats_to_dict(self, cache):
        """Test the dictionary form of the counters."""
        cache.get(parse_guard('d'))
        assert cache.stats.to_dict() == {'hits': 0, 'misses': 1, 'pools': 1, 'solutions': 2}


class TestCacheSample:
    """Tests for cache_sample."""

    def test_sample_satisfies_guard(self, cache):
        """Test that every sample satisfies its guard and carries consistent truths."""
        guard = parse_guard('s & !d')
        pool = cache.get(guard)
        rng = np.random.default_rng(3)
        for _ in range(50):
            sample = cache_sample(pool, rng)
            a = sample.assignment
            assert a['A'] + a['B'] == a['C']
            assert a['D'] <= 2
            assert sample.truths == {'s': True, 'd': False}

    def test_free_variables_are_filled(self, cache):
        """Test that unmentioned variables get values and are marked irrelevant."""
        pool = cache.get(parse_guard('s'))
        sample = cache_sample(pool, np.random.default_rng(0))
        assert set(sample.assignment) == {'A', 'B', 'C', 'D'}
        assert sample.variable_relevance == {'A': True, 'B': True, 'C': True, 'D': False}
        assert sample.constraint_relevance == {'s': True, 'd': False}
        assert sample.truths['d'] == (sample.assignment['D'] > 2)

    def test_empty_pool(self, cache):
        """Test that sampling an unsatisfiable guard raises EmptyPoolError."""
        pool = cache.get(parse_guard('s & !s | d & !d'))
        with pytest.raises(EmptyPoolError):
            cache_sample(pool, np.random.default_rng(0))

    def test_same_seed_same_samples(self, cache):
        """Test that sampling is reproducible from the seed."""
        pool = cache.get(parse_guard('s'))
        first = [cache_sample(pool, np.random.default_rng(11)).assignment for _ in range(3)]
        second = [cache_sample(pool, np.random.default_rng(11)).assignment for _ in range(3)]
        assert first == second

    def test_solutions_are_drawn_uniformly(self):
        """Test uniformity over the 55 solutions with a chi-square test."""
        constraints = {'s': parse_constraint('s', ['A', 'B', 'C'], 'A + B = C')}
        pool = solve_all(parse_guard('s'), constraints, {'A': DIGITS, 'B': DIGITS, 'C': DIGITS})
        rng = np.random.default_rng(2024)
        draws = 55 * 200
        counts = Counter()
        for _ in range(draws):
            assignment = cache_sample(pool, rng).assignment
            counts[tuple(assignment[v] for v in ('A', 'B', 'C'))] += 1
        assert len(counts) == 55
        observed = [counts[solution] for solution in pool.solutions]
        assert chisquare(observed).pvalue > 0.001


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
