"""
Sequence Sampling Service

Randomised depth-first walks over a compiled automaton. A walk of the
requested length ends in an accepting state (positive) or a rejecting one
(negative); its guards are later turned into concrete assignments by the
solution cache. Self-loops and sink states can be penalised so that walks do
not linger in trivial states.
"""

import contextvars
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, List, MutableMapping, Optional, Sequence, Set, Tuple

import numpy as np

from ltlf_datagen.automata.guards import Guard
from ltlf_datagen.automata.sfa import Sfa, Transition
from ltlf_datagen.config import get_logger, get_settings
from ltlf_datagen.constraints.cache import Sample, SolutionCache, cache_sample
from ltlf_datagen.exceptions import InfeasibleError
from ltlf_datagen.spec.models import ALL_POSITIVE, BiasOptions, LengthRange, TaskSpec
from ltlf_datagen.utils.rng import SOLUTION, WALK, derive_rng, shuffled

logger = get_logger(__name__)

GuardFilter = Callable[[Guard], bool]


@dataclass(frozen=True)
class WalkResult:
    """
    A path through the automaton from its initial state.

    Attributes:
        transitions: Consecutive transitions, the first leaving the initial state
        target_label: True when the path ends in an accepting state
    """

    transitions: Tuple[Transition, ...]
    target_label: bool

    @property
    def achieved_length(self) -> int:
        return len(self.transitions)

    @property
    def state_trace(self) -> List[int]:
        return [self.transitions[0].source] + [t.target for t in self.transitions]


@dataclass(frozen=True)
class SymbolicSequence:
    """A walk together with one sampled assignment per step."""

    seq_id: str
    split: str
    index: int
    walk: WalkResult
    samples: Tuple[Sample, ...]

    @property
    def label(self) -> bool:
        return self.walk.target_label


def usable_guards(cache: Optional[SolutionCache]) -> GuardFilter:
    """Guard filter accepting guards whose solution pool is non-empty."""
    if cache is None:
        return lambda guard: True
    return lambda guard: not cache.get(guard).is_empty


def apply_bias(successors: Sequence[Transition], visit_counts: MutableMapping[tuple, int],
               bias: BiasOptions, rng: np.random.Generator,
               sinks: FrozenSet[int] = frozenset()) -> List[Transition]:
    """
    Drop penalised successors at random.

    The k-th encounter (from 0) of a self-loop survives with probability
    min(1, k * self_loop_decay); a transition into a sink state follows the
    same rule with sink_decay. A rate of 0 disables the rule. If nothing
    survives, the successors are returned unchanged.

    Args:
        successors: Candidate transitions out of one state
        visit_counts: Encounter counters, updated in place
        bias: Decay rates
        rng: Random stream
        sinks: Sink states of the automaton

    Returns:
        List[Transition]: The surviving successors, in input order
    """
    survivors = []
    for transition in successors:
        if transition.source == transition.target:
            key, rate = ("loop", transition.source), bias.self_loop_decay
        elif transition.target in sinks:
            key, rate = ("sink", transition.target), bias.sink_decay
        else:
            survivors.append(transition)
            continue
        if rate <= 0:
            survivors.append(transition)
            continue
        encounter = visit_counts.get(key, 0)
        visit_counts[key] = encounter + 1
        if rng.random() < min(1.0, encounter * rate):
            survivors.append(transition)
    return survivors or list(successors)


def _dead_ends(a: Sfa, target: bool, options: Dict[int, List[Transition]]) -> Set[int]:
    """States from which no state of the target class is reachable."""
    alive = {s for s in a.states if a.is_accepting(s) == target}
    changed = True
    while changed:
        changed = False
        for state in a.states:
            if state not in alive and any(t.target in alive for t in options[state]):
                alive.add(state)
                changed = True
    return set(a.states) - alive


def sample_walk(a: Sfa, target: bool, len_range: LengthRange, bias: BiasOptions = BiasOptions(),
                rng: Optional[np.random.Generator] = None,
                usable: Optional[GuardFilter] = None) -> WalkResult:
    """
    Sample a walk ending in the target class by randomised depth-first search.

    A length T' is drawn uniformly from the range; when no walk of length T'
    exists, T' - 1 is tried, down to the minimum.

    Args:
        a: Deterministic complete automaton
        target: True for a positive walk, False for a negative one
        len_range: Admissible lengths
        bias: Self-loop and sink penalties
        rng: Random stream
        usable: Guard filter; transitions whose guard fails it are never taken

    Raises:
        InfeasibleError: If no walk of any length in [min, T'] reaches the target class
    """
    if len_range.min < 1:
        raise ValueError("walk length must be at least 1")
    rng = rng if rng is not None else np.random.default_rng()
    usable = usable or (lambda guard: True)
    options = {s: [t for t in a.outgoing(s) if usable(t.guard)] for s in a.states}
    sinks = frozenset(s for s in a.states if a.is_sink(s))
    dead_states = _dead_ends(a, target, options)
    dead: Set[Tuple[int, int]] = set()
    counts: Dict[tuple, int] = {}

    def search(state: int, remaining: int) -> Optional[List[Transition]]:
        if remaining == 0:
            return [] if a.is_accepting(state) == target else None
        if state in dead_states or (state, remaining) in dead:
            return None
        candidates = options[state]
        survivors = apply_bias(candidates, counts, bias, rng, sinks)
        penalised = [t for t in candidates if t not in survivors]
        for transition in shuffled(rng, survivors) + shuffled(rng, penalised):
            rest = search(transition.target, remaining - 1)
            if rest is not None:
                return [transition] + rest
        dead.add((state, remaining))
        return None

    drawn = int(rng.integers(len_range.min, len_range.max + 1))
    for length in range(drawn, len_range.min - 1, -1):
        path = search(a.initial, length)
        if path is not None:
            if length != drawn:
                logger.warning("Shortened %s walk from %d to %d steps",
                               "positive" if target else "negative", drawn, length)
            return WalkResult(tuple(path), target)

    kind = "positive" if target else "negative"
    raise InfeasibleError(
        f"no {kind} walk with length in [{len_range.min}, {drawn}] "
        f"(requested range [{len_range.min}, {len_range.max}])",
        target=target, length_range=(len_range.min, len_range.max),
    )


def map_jobs(function, jobs: Sequence, workers: int) -> list:
    """Apply function to every job, on a thread pool when workers > 1; order is preserved."""
    if workers <= 1 or len(jobs) <= 1:
        return [function(job) for job in jobs]
    # jobs see the caller's context vars (run id)
    contexts = [contextvars.copy_context() for _ in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda ctx, job: ctx.run(function, job), contexts, jobs))


def _jobs(spec: TaskSpec) -> List[Tuple[int, str, int]]:
    counts = spec.split_counts()
    return [(split_idx, split, index)
            for split_idx, split in enumerate(spec.split_names)
            for index in range(counts[split])]


def sequence_target(spec: TaskSpec, index: int) -> bool:
    """Label of the index-th sequence of a split: alternating from positive, or always positive."""
    return spec.balance == ALL_POSITIVE or index % 2 == 0


def sample_sequential_dataset(spec: TaskSpec, a: Sfa, cache: Optional[SolutionCache] = None,
                              seed: Optional[int] = None,
                              workers: Optional[int] = None) -> Dict[str, List[WalkResult]]:
    """
    Sample every walk of a sequential task.

    Each split gets exactly its requested count; in balanced mode even indices
    are positive, giving ceil(N/2) positives. Walk i of split s draws from the
    stream derived from (seed, s, i), so the result does not depend on the
    number of workers.

    Raises:
        InfeasibleError: If some walk cannot be realised
    """
    if not spec.is_sequential:
        raise ValueError(f"task {spec.name} is not sequential")
    seed = spec.seed if seed is None else seed
    workers = workers or get_settings().workers
    usable = usable_guards(cache)

    def walk_job(job):
        split_idx, _, index = job
        rng = derive_rng(seed, split_idx, index, WALK)
        return sample_walk(a, sequence_target(spec, index), spec.length, spec.bias, rng, usable)

    jobs = _jobs(spec)
    walks = map_jobs(walk_job, jobs, workers)
    result: Dict[str, List[WalkResult]] = {split: [] for split in spec.split_names}
    for (_, split, _), walk in zip(jobs, walks):
        result[split].append(walk)
    logger.info("Sampled %d walks for task %s", len(walks), spec.name)
    return result


def realize_sequences(spec: TaskSpec, walks: Dict[str, List[WalkResult]], cache: SolutionCache,
                      seed: Optional[int] = None,
                      workers: Optional[int] = None) -> Dict[str, List[SymbolicSequence]]:
    """Draw one solution per step of every walk from the guard's solution pool."""
    seed = spec.seed if seed is None else seed
    workers = workers or get_settings().workers

    def realize_job(job):
        split_idx, split, index = job
        walk = walks[split][index]
        rng = derive_rng(seed, split_idx, index, SOLUTION)
        samples = tuple(cache_sample(cache.get(t.guard), rng) for t in walk.transitions)
        return SymbolicSequence(f"{split}-{index:05d}", split, index, walk, samples)

    jobs = [(split_idx, split, index)
            for split_idx, split in enumerate(spec.split_names)
            for index in range(len(walks.get(split, [])))]
    sequences = map_jobs(realize_job, jobs, workers)
    result: Dict[str, List[SymbolicSequence]] = {split: [] for split in spec.split_names}
    for sequence in sequences:
        result[sequence.split].append(sequence)
    return result
