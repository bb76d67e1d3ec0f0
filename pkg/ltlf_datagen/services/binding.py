"""
Image Binding Service

Maps symbolic labels to image identifiers. Perceptual domains declare one
manifest CSV per split (columns `label,image`); a label is bound to an image
drawn uniformly, with replacement, from the manifest rows carrying that
label. Domains without manifests are synthetic: records keep the symbolic
label and use "-" as image reference.
"""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from ltlf_datagen.config import get_logger
from ltlf_datagen.constraints.cache import Sample
from ltlf_datagen.exceptions import BindingError, DatasetFormatError
from ltlf_datagen.spec.models import DomainDef, Label, TaskSpec
from ltlf_datagen.spec.plan import TaskPlan
from ltlf_datagen.utils.rng import IMAGE, derive_rng, uniform_choice
from .curriculum import Curriculum
from .sampler import SymbolicSequence

logger = get_logger(__name__)

SYNTHETIC_IMAGE = "-"
REPLACEMENT_POLICY = "with_replacement"


@dataclass(frozen=True)
class StepRecord:
    """One time step of a bound sequence."""

    t: int
    state_from: int
    state_to: int
    images: Dict[str, str]
    labels: Dict[str, Label]
    variable_relevance: Dict[str, bool]
    truths: Dict[str, bool]
    constraint_relevance: Dict[str, bool]


@dataclass(frozen=True)
class SequenceRecord:
    seq_id: str
    split: str
    label: bool
    steps: Tuple[StepRecord, ...]

    @property
    def state_trace(self) -> List[int]:
        return [self.steps[0].state_from] + [step.state_to for step in self.steps]


@dataclass(frozen=True)
class SampleRecord:
    """One bound sample of an episode."""

    sample_id: str
    images: Dict[str, str]
    labels: Dict[str, Label]
    variable_relevance: Dict[str, bool]


@dataclass(frozen=True)
class EpisodeRecord:
    """
    A bound curriculum episode.

    Attributes:
        index: Episode number
        state_from: Automaton state before the episode
        state_to: Automaton state after the episode
        guard: Text of the transition guard
        active_truths: Constraint truths fixed for the episode
        orphan: Scheduled orphan constraint, if any
        samples: Split name -> bound samples
    """

    index: int
    state_from: int
    state_to: int
    guard: str
    active_truths: Dict[str, bool]
    orphan: Optional[str]
    samples: Dict[str, Tuple[SampleRecord, ...]]


def read_manifest(path: Union[str, Path], domain: DomainDef) -> Dict[Label, Tuple[str, ...]]:
    """
    Read a `label,image` manifest into label -> image references.

    Raises:
        DatasetFormatError: If the file is missing, lacks the columns or names an unknown label
    """
    pools: Dict[Label, List[str]] = {label: [] for label in domain.labels}
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None or not {"label", "image"} <= set(reader.fieldnames):
                raise DatasetFormatError(f"manifest {path} needs 'label' and 'image' columns")
            for line, row in enumerate(reader, start=2):
                raw = row["label"].strip()
                label: Label = raw if domain.is_enum else _int_label(raw, path, line)
                if label not in pools:
                    raise DatasetFormatError(
                        f"manifest {path}, line {line}: label {raw!r} is not in domain {domain.name}")
                pools[label].append(row["image"].strip())
    except OSError as e:
        raise DatasetFormatError(f"cannot read manifest {path}: {e}") from e
    return {label: tuple(images) for label, images in pools.items()}


def _int_label(raw: str, path, line: int) -> int:
    try:
        return int(raw)
    except ValueError:
        raise DatasetFormatError(f"manifest {path}, line {line}: label {raw!r} is not an integer") from None


class DomainBinding:
    """
    Image pools per (domain, split).

    Args:
        pools: (domain name, split) -> label -> image references
        synthetic: Names of domains bound without images
    """

    def __init__(self, pools: Mapping[Tuple[str, str], Mapping[Label, Sequence[str]]],
                 synthetic: Sequence[str] = ()):
        self.pools = {key: {label: tuple(refs) for label, refs in value.items()}
                      for key, value in pools.items()}
        self.synthetic = frozenset(synthetic)

    @classmethod
    def from_spec(cls, spec: TaskSpec) -> "DomainBinding":
        """Load the manifests of every perceptual domain; relative paths resolve against the spec file."""
        base = Path(spec.base_dir) if spec.base_dir else Path.cwd()
        pools = {}
        synthetic = []
        for domain in spec.domains:
            if domain.is_synthetic:
                synthetic.append(domain.name)
                continue
            for split, source in domain.sources.items():
                path = Path(source)
                pools[(domain.name, split)] = read_manifest(path if path.is_absolute() else base / path,
                                                            domain)
                logger.debug("Loaded manifest %s for domain %s, split %s", path, domain.name, split)
        return cls(pools, synthetic)

    @classmethod
    def synthetic_for(cls, spec: TaskSpec) -> "DomainBinding":
        """Binding that treats every domain as label-only."""
        return cls({}, [domain.name for domain in spec.domains])

    def is_synthetic(self, domain: str) -> bool:
        return domain in self.synthetic

    def draw(self, domain: str, split: str, label: Label, rng) -> str:
        """
        Image reference for a label, uniformly with replacement.

        Raises:
            BindingError: If the label has no image in the split
        """
        if self.is_synthetic(domain):
            return SYNTHETIC_IMAGE
        refs = self.pools.get((domain, split), {}).get(label, ())
        if not refs:
            raise BindingError(f"no image for label {label!r} of domain {domain} in split {split}")
        return uniform_choice(rng, refs)

    def overlapping_refs(self, held_out: str = "test") -> List[str]:
        """Image references shared between the held-out split and any other split."""
        held, others = set(), set()
        for (_, split), labels in self.pools.items():
            refs = {ref for images in labels.values() for ref in images}
            (held if split == held_out else others).update(refs)
        return sorted(held & others)


def _bind_assignment(plan: TaskPlan, sample: Sample, binding: DomainBinding,
                     split: str, rng) -> Tuple[Dict[str, str], Dict[str, Label]]:
    images, labels = {}, {}
    for var in plan.variables:
        label = plan.decode(var, sample.assignment[var])
        labels[var] = label
        images[var] = binding.draw(plan.variables[var], split, label, rng)
    return images, labels


def bind_sequences(plan: TaskPlan, sequences: Mapping[str, Sequence[SymbolicSequence]],
                   binding: DomainBinding, seed: Optional[int] = None) -> Dict[str, List[SequenceRecord]]:
    """Bind every step of every symbolic sequence."""
    seed = plan.spec.seed if seed is None else seed
    records: Dict[str, List[SequenceRecord]] = {}
    for split_idx, split in enumerate(plan.spec.split_names):
        records[split] = []
        for sequence in sequences.get(split, []):
            rng = derive_rng(seed, split_idx, sequence.index, IMAGE)
            steps = []
            for t, (transition, sample) in enumerate(zip(sequence.walk.transitions, sequence.samples)):
                images, labels = _bind_assignment(plan, sample, binding, split, rng)
                steps.append(StepRecord(
                    t=t, state_from=transition.source, state_to=transition.target,
                    images=images, labels=labels,
                    variable_relevance=dict(sample.variable_relevance),
                    truths=dict(sample.truths),
                    constraint_relevance={name: sample.constraint_relevance.get(name, False)
                                          for name in plan.constraint_names},
                ))
            records[split].append(SequenceRecord(sequence.seq_id, split, sequence.label, tuple(steps)))
    return records


def bind_curriculum(plan: TaskPlan, curriculum: Curriculum,
                    episode_samples: Mapping[int, Mapping[str, Sequence[Sample]]],
                    binding: DomainBinding, seed: Optional[int] = None) -> List[EpisodeRecord]:
    """Bind the samples of every episode."""
    seed = plan.spec.seed if seed is None else seed
    records = []
    for episode in curriculum.episodes:
        per_split = {}
        for split_idx, split in enumerate(plan.spec.split_names):
            rng = derive_rng(seed, episode.index, split_idx, IMAGE)
            bound = []
            for number, sample in enumerate(episode_samples[episode.index][split]):
                images, labels = _bind_assignment(plan, sample, binding, split, rng)
                bound.append(SampleRecord(f"{split}-{episode.index:03d}-{number:05d}", images, labels,
                                          dict(sample.variable_relevance)))
            per_split[split] = tuple(bound)
        records.append(EpisodeRecord(
            index=episode.index, state_from=episode.source, state_to=episode.target,
            guard=episode.guard.text, active_truths=episode.active_truths,
            orphan=episode.orphan, samples=per_split,
        ))
    return records


def bind(plan: TaskPlan, symbolic, binding: DomainBinding, seed: Optional[int] = None,
         episode_samples: Optional[Mapping[int, Mapping[str, Sequence[Sample]]]] = None):
    """
    Bind sequences (sequential mode) or a curriculum (incremental mode).

    Raises:
        BindingError: If a label has no image in its split
    """
    if isinstance(symbolic, Curriculum):
        if episode_samples is None:
            raise ValueError("binding a curriculum needs its episode samples")
        return bind_curriculum(plan, symbolic, episode_samples, binding, seed)
    return bind_sequences(plan, symbolic, binding, seed)
