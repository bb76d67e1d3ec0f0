"""
Dataset Emission Service

Writes a bound dataset to a directory:

    spec.json, automaton.json, automaton.dot, manifest.json
    sequential:  <split>.csv and <split>.jsonl per split
    incremental: episode_XX/<split>.csv per episode, curriculum.json

Every file is written deterministically (sorted keys, fixed line endings),
so the same inputs always produce the same digests.
"""

import csv
import io
import json
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Union

from ltlf_datagen import __version__
from ltlf_datagen.automata.sfa import Sfa, to_dot, to_json
from ltlf_datagen.config import get_logger
from ltlf_datagen.spec.loader import dump_spec
from ltlf_datagen.spec.plan import TaskPlan
from ltlf_datagen.utils.digest import sha256_text
from .binding import REPLACEMENT_POLICY, EpisodeRecord, SequenceRecord
from .curriculum import Curriculum

logger = get_logger(__name__)

SPEC_FILE = "spec.json"
AUTOMATON_FILE = "automaton.json"
DOT_FILE = "automaton.dot"
MANIFEST_FILE = "manifest.json"
CURRICULUM_FILE = "curriculum.json"


def _flag(value: bool) -> str:
    return "1" if value else "0"


def sequence_columns(plan: TaskPlan) -> List[str]:
    columns = ["seq_id", "t", "seq_label", "state_from", "state_to"]
    for var in plan.variables:
        columns += [f"img_{var}", f"lbl_{var}", f"rel_{var}"]
    for name in plan.constraint_names:
        columns += [f"c_{name}", f"rel_{name}"]
    return columns


EPISODE_COLUMNS = ["sample_id", "img", "label", "variable", "rel"]


def episode_dir_name(index: int) -> str:
    return f"episode_{index:02d}"


def _csv_text(columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    return buffer.getvalue()


def _json_text(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def sequence_rows(plan: TaskPlan, record: SequenceRecord) -> List[List[Any]]:
    rows = []
    for step in record.steps:
        row: List[Any] = [record.seq_id, step.t, _flag(record.label), step.state_from, step.state_to]
        for var in plan.variables:
            row += [step.images[var], step.labels[var], _flag(step.variable_relevance.get(var, False))]
        for name in plan.constraint_names:
            row += [_flag(step.truths[name]), _flag(step.constraint_relevance.get(name, False))]
        rows.append(row)
    return rows


def _sequence_json(record: SequenceRecord) -> str:
    return json.dumps({
        "seq_id": record.seq_id,
        "split": record.split,
        "label": record.label,
        "states": record.state_trace,
        "steps": [{
            "images": step.images,
            "labels": step.labels,
            "variable_relevance": step.variable_relevance,
            "truths": step.truths,
            "constraint_relevance": step.constraint_relevance,
        } for step in record.steps],
    }, sort_keys=True)


def episode_rows(plan: TaskPlan, samples) -> List[List[Any]]:
    rows = []
    for sample in samples:
        for var in plan.variables:
            rows.append([sample.sample_id, sample.images[var], sample.labels[var], var,
                         _flag(sample.variable_relevance.get(var, False))])
    return rows


def curriculum_document(plan: TaskPlan, curriculum: Curriculum,
                        episodes: Sequence[EpisodeRecord]) -> Dict[str, Any]:
    return {
        "episodes": len(episodes),
        "states": curriculum.states,
        "guards": [episode.guard for episode in episodes],
        "constraint_truths": [episode.active_truths for episode in episodes],
        "orphan_schedule": curriculum.orphan_schedule,
        "uncovered_orphans": list(curriculum.uncovered),
        "orphan_positive_ratio": plan.spec.orphan_positive_ratio,
        "atoms": list(plan.atoms),
    }


def _write(out_dir: Path, relative: str, text: str, digests: Dict[str, str]):
    path = out_dir / relative
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    digests[relative] = sha256_text(text)


def emit(plan: TaskPlan, a: Sfa, records: Union[Mapping[str, Sequence[SequenceRecord]], Sequence[EpisodeRecord]],
         out_dir: Union[str, Path], curriculum: Optional[Curriculum] = None,
         seed: Optional[int] = None) -> Dict[str, Any]:
    """
    Write a bound dataset and its manifest.

    Args:
        plan: Resolved task
        a: Automaton the dataset was sampled from
        records: Split -> sequence records (sequential) or episode records (incremental)
        out_dir: Target directory, created when missing
        curriculum: The sampled curriculum (incremental mode)
        seed: Seed actually used, when it overrides the spec's; written to spec.json and the manifest

    Returns:
        dict: The manifest that was written to manifest.json

    Raises:
        OSError: If the directory cannot be written
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    spec = plan.spec
    digests: Dict[str, str] = {}

    # spec.json carries the seed the run used
    effective = spec if seed is None else replace(spec, seed=seed)
    _write(out_dir, SPEC_FILE, dump_spec(effective), digests)
    _write(out_dir, AUTOMATON_FILE, to_json(a), digests)
    _write(out_dir, DOT_FILE, to_dot(a, spec.name), digests)

    if spec.is_sequential:
        columns = sequence_columns(plan)
        for split in spec.split_names:
            split_records = records.get(split, [])
            rows = [row for record in split_records for row in sequence_rows(plan, record)]
            _write(out_dir, f"{split}.csv", _csv_text(columns, rows), digests)
            _write(out_dir, f"{split}.jsonl",
                   "".join(_sequence_json(record) + "\n" for record in split_records), digests)
    else:
        if curriculum is None:
            raise ValueError("emitting an incremental dataset needs its curriculum")
        for episode in records:
            for split in spec.split_names:
                relative = f"{episode_dir_name(episode.index)}/{split}.csv"
                _write(out_dir, relative,
                       _csv_text(EPISODE_COLUMNS, episode_rows(plan, episode.samples[split])), digests)
        _write(out_dir, CURRICULUM_FILE,
               _json_text(curriculum_document(plan, curriculum, records)), digests)

    manifest = {
        "name": spec.name,
        "mode": spec.mode,
        "seed": effective.seed,
        "version": __version__,
        "replacement": REPLACEMENT_POLICY,
        "files": dict(sorted(digests.items())),
    }
    with open(out_dir / MANIFEST_FILE, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(_json_text(manifest))
    logger.info("Wrote %d files for task %s to %s", len(digests), spec.name, out_dir)
    return manifest
