"""
Dataset Generation Pipeline

resolve -> compile -> sample -> bind -> emit -> validate, for one task.
A generation only succeeds when the emitted dataset validates cleanly.
"""

import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Union

from ltlf_datagen import __version__
from ltlf_datagen.automata.compiler import compile_formula
from ltlf_datagen.automata.sfa import Sfa
from ltlf_datagen.config import get_logger, get_settings
from ltlf_datagen.constraints.cache import CacheStats, SolutionCache
from ltlf_datagen.spec.loader import dump_spec
from ltlf_datagen.spec.models import TaskSpec
from ltlf_datagen.spec.plan import TaskPlan, resolve_task
from ltlf_datagen.utils.digest import sha256_text
from .binding import DomainBinding, bind_curriculum, bind_sequences
from .curriculum import sample_curriculum, sample_episode
from .emitter import emit
from .sampler import map_jobs, realize_sequences, sample_sequential_dataset
from .validator import ValidationReport, validate

logger = get_logger(__name__)

RUN_MANIFEST_FILE = "run_manifest.json"


@dataclass
class GenerationResult:
    """Outcome of one generation run."""

    plan: TaskPlan
    automaton: Sfa
    seed: int
    workers: int
    manifest: Dict[str, Any]
    report: ValidationReport
    cache_stats: CacheStats
    elapsed: float

    def run_manifest(self) -> Dict[str, Any]:
        """Run metadata: the deterministic manifest plus timing and cache activity."""
        return {
            "version": __version__,
            "spec_digest": sha256_text(dump_spec(self.plan.spec)),
            "seed": self.seed,
            "workers": self.workers,
            "files": self.manifest["files"],
            "wall_clock_seconds": round(self.elapsed, 3),
            "cache": self.cache_stats.to_dict(),
            "states": self.automaton.num_states,
            "valid": self.report.ok,
        }


def generate_dataset(spec: TaskSpec, out_dir: Union[str, Path], workers: Optional[int] = None,
                     seed: Optional[int] = None, synthetic: bool = False) -> GenerationResult:
    """
    Generate, emit and validate the dataset of a task.

    Args:
        spec: The task
        out_dir: Output directory
        workers: Worker threads (defaults to LTLF_DATAGEN_WORKERS); never changes the output
        seed: Overrides the spec's seed
        synthetic: Bind every domain label-only, ignoring image manifests

    Raises:
        InfeasibleError: If a walk cannot be realised
        BindingError: If a label has no image in its split
        DatasetFormatError: If a manifest cannot be read
    """
    started = time.perf_counter()
    seed = spec.seed if seed is None else seed
    workers = workers or get_settings().workers
    plan = resolve_task(spec)
    a = compile_formula(plan.formula, plan.atoms)
    cache = SolutionCache(plan.constraints, plan.domain_values())
    binding = DomainBinding.synthetic_for(spec) if synthetic else DomainBinding.from_spec(spec)
    logger.info("Generating task %s (%s mode, seed %d, %d workers)", spec.name, spec.mode, seed, workers)

    curriculum = None
    if spec.is_sequential:
        walks = sample_sequential_dataset(spec, a, cache, seed, workers)
        sequences = realize_sequences(spec, walks, cache, seed, workers)
        records = bind_sequences(plan, sequences, binding, seed)
    else:
        curriculum = sample_curriculum(plan, a, cache, seed)
        per_episode = map_jobs(lambda episode: sample_episode(plan, episode, cache, seed),
                               list(curriculum.episodes), workers)
        episode_samples = {episode.index: samples
                           for episode, samples in zip(curriculum.episodes, per_episode)}
        records = bind_curriculum(plan, curriculum, episode_samples, binding, seed)

    manifest = emit(plan, a, records, out_dir, curriculum, seed)
    report = validate(out_dir)
    elapsed = time.perf_counter() - started
    stats = cache.stats
    logger.info("Task %s done in %.2fs (cache: %d hits, %d misses)", spec.name, elapsed,
                stats.hits, stats.misses)
    return GenerationResult(plan, a, seed, workers, manifest, report, stats, elapsed)
