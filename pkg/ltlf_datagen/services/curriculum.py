"""
Curriculum Sampling Service

In incremental mode a single positive walk of exactly T steps becomes a
curriculum of T episodes. Each episode commits to one satisfiable product
term of its transition guard, which fixes the truths of the constraints the
term mentions; the other constraints are free. Constraints that never occur
in the formula (orphans) can be scheduled in positive form for an episode so
that every class is observed at least once.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from ltlf_datagen.automata.guards import Cube, Guard
from ltlf_datagen.automata.sfa import Sfa
from ltlf_datagen.config import get_logger
from ltlf_datagen.constraints.cache import Sample, SolutionCache, cache_sample
from ltlf_datagen.exceptions import CompileError
from ltlf_datagen.logic.semantics import eval_trace
from ltlf_datagen.spec.models import COVERAGE_BEST_EFFORT, LengthRange
from ltlf_datagen.spec.plan import TaskPlan
from ltlf_datagen.utils.rng import CUBE, SOLUTION, WALK, derive_rng, shuffled, uniform_choice
from .sampler import GuardFilter, WalkResult, sample_walk, usable_guards

logger = get_logger(__name__)

WALK_ATTEMPTS = 32


def _with_literal(cube: Cube, atom: str, positive: bool) -> Guard:
    return Guard((tuple(sorted(cube + ((atom, positive),))),))


@dataclass(frozen=True)
class Episode:
    """
    One step of the curriculum.

    Attributes:
        index: Episode number, from 0
        source: Automaton state before the episode
        target: Automaton state after the episode
        guard: Guard of the transition taken
        cube: The product term of the guard the episode commits to
        orphan: Orphan constraint scheduled in positive form, if any
    """

    index: int
    source: int
    target: int
    guard: Guard
    cube: Cube
    orphan: Optional[str] = None

    @property
    def active_truths(self) -> Dict[str, bool]:
        return dict(self.cube)

    @property
    def cube_guard(self) -> Guard:
        return Guard((self.cube,))

    def orphan_guard(self, positive: bool) -> Guard:
        """The episode's term conjoined with the orphan literal."""
        if self.orphan is None:
            raise ValueError(f"episode {self.index} has no scheduled orphan")
        return _with_literal(self.cube, self.orphan, positive)


@dataclass(frozen=True)
class Curriculum:
    walk: WalkResult
    episodes: Tuple[Episode, ...]
    uncovered: Tuple[str, ...] = ()

    @property
    def states(self) -> List[int]:
        return self.walk.state_trace

    @property
    def orphan_schedule(self) -> Dict[str, List[int]]:
        schedule: Dict[str, List[int]] = {}
        for episode in self.episodes:
            if episode.orphan is not None:
                schedule.setdefault(episode.orphan, []).append(episode.index)
        return schedule

    def constraint_trace(self, atoms: Sequence[str]) -> List[Dict[str, bool]]:
        """Per-episode valuation of atoms, with free constraints set to False."""
        return [{atom: episode.active_truths.get(atom, False) for atom in atoms}
                for episode in self.episodes]


def _choose_cubes(walk: WalkResult, usable: GuardFilter, rng) -> List[Cube]:
    cubes = []
    for transition in walk.transitions:
        satisfiable = [cube for cube in transition.guard.cubes if usable(Guard((cube,)))]
        cubes.append(uniform_choice(rng, satisfiable))
    return cubes


def _schedule_orphans(orphans: Sequence[str], cubes: Sequence[Cube],
                      usable: GuardFilter) -> Dict[int, str]:
    """Greedy earliest-feasible episode per orphan, at most one orphan per episode."""
    schedule: Dict[int, str] = {}
    for orphan in orphans:
        for index, cube in enumerate(cubes):
            if index not in schedule and usable(_with_literal(cube, orphan, True)):
                schedule[index] = orphan
                break
    return schedule


def sample_curriculum(plan: TaskPlan, a: Sfa, cache: Optional[SolutionCache] = None,
                      seed: Optional[int] = None) -> Curriculum:
    """
    Sample the curriculum of an incremental task.

    Under best-effort orphan coverage the walk is resampled up to
    WALK_ATTEMPTS times, keeping the first walk with the most orphans
    scheduled.

    Raises:
        InfeasibleError: If no positive walk of exactly T steps exists
        CompileError: If the episode trace does not satisfy the formula
    """
    spec = plan.spec
    if spec.is_sequential:
        raise ValueError(f"task {spec.name} is not incremental")
    seed = spec.seed if seed is None else seed
    usable = usable_guards(cache)
    length = LengthRange(spec.episodes, spec.episodes)
    scheduling = spec.bias.orphan_coverage == COVERAGE_BEST_EFFORT and bool(plan.orphans)
    attempts = WALK_ATTEMPTS if scheduling else 1

    best = None
    for attempt in range(attempts):
        walk = sample_walk(a, True, length, spec.bias, derive_rng(seed, 0, attempt, WALK), usable)
        cubes = _choose_cubes(walk, usable, derive_rng(seed, 0, attempt, CUBE))
        schedule = _schedule_orphans(plan.orphans, cubes, usable) if scheduling else {}
        if best is None or len(schedule) > len(best[2]):
            best = (walk, cubes, schedule)
        if len(schedule) == len(plan.orphans):
            break

    walk, cubes, schedule = best
    episodes = tuple(
        Episode(index, t.source, t.target, t.guard, cube, schedule.get(index))
        for index, (t, cube) in enumerate(zip(walk.transitions, cubes))
    )
    uncovered = tuple(o for o in plan.orphans if o not in schedule.values()) if scheduling else ()
    curriculum = Curriculum(walk, episodes, uncovered)
    if uncovered:
        logger.warning("Orphan constraints never scheduled: %s", ", ".join(uncovered))

    if not eval_trace(plan.formula, curriculum.constraint_trace(plan.atoms)):
        raise CompileError("sampled curriculum does not satisfy the formula")
    logger.info("Sampled curriculum of %d episodes for task %s (orphans scheduled: %d)",
                len(episodes), spec.name, len(schedule))
    return curriculum


def sample_episode(plan: TaskPlan, episode: Episode, cache: SolutionCache,
                   seed: Optional[int] = None) -> Dict[str, List[Sample]]:
    """
    Draw the samples of one episode, per split.

    With a scheduled orphan, round(ratio * n) samples of a split satisfy the
    orphan and the rest violate it (or come from the whole episode pool when
    no solution violates it), in shuffled order.
    """
    spec = plan.spec
    seed = spec.seed if seed is None else seed
    counts = spec.split_counts()
    result: Dict[str, List[Sample]] = {}
    for split_idx, split in enumerate(spec.split_names):
        n = counts[split]
        rng = derive_rng(seed, episode.index, split_idx, SOLUTION)
        if episode.orphan is None:
            pool = cache.get(episode.cube_guard)
            result[split] = [cache_sample(pool, rng) for _ in range(n)]
            continue
        positives = round(spec.orphan_positive_ratio * n)
        positive_pool = cache.get(episode.orphan_guard(True))
        negative_pool = cache.get(episode.orphan_guard(False))
        if negative_pool.is_empty:
            negative_pool = cache.get(episode.cube_guard)
        samples = [cache_sample(positive_pool, rng) for _ in range(positives)]
        samples += [cache_sample(negative_pool, rng) for _ in range(n - positives)]
        result[split] = shuffled(rng, samples)
    return result
