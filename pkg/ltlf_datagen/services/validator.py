"""
Dataset Validation Service

Re-derives every annotation of an emitted dataset from its symbolic labels:
constraint truths are recomputed from the labels, the state trace is
recomputed by running a freshly compiled automaton on those truths, and the
sequence label by acceptance (cross-checked against the trace semantics of
the formula). Shape checks cover split counts, lengths, label balance and
image reuse across held-out splits. Incremental datasets are checked episode
by episode against the curriculum.
"""

import csv
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from ltlf_datagen.automata.compiler import compile_formula
from ltlf_datagen.automata.guards import Guard, parse_guard
from ltlf_datagen.automata.sfa import Sfa, run, to_json
from ltlf_datagen.config import get_logger
from ltlf_datagen.constraints.expressions import eval_constraint
from ltlf_datagen.constraints.solver import solve_all
from ltlf_datagen.exceptions import DatasetFormatError, DomainViolationError, LtlfDatagenError
from ltlf_datagen.logic.semantics import eval_trace
from ltlf_datagen.spec.loader import load_spec
from ltlf_datagen.spec.models import ALL_POSITIVE
from ltlf_datagen.spec.plan import TaskPlan, resolve_task
from .binding import SYNTHETIC_IMAGE
from .emitter import (
    AUTOMATON_FILE, CURRICULUM_FILE, EPISODE_COLUMNS, SPEC_FILE, episode_dir_name,
    sequence_columns,
)

logger = get_logger(__name__)


@dataclass(frozen=True)
class Violation:
    """A mismatch between an emitted annotation and its recomputation."""

    location: str
    field: str
    message: str

    def __str__(self) -> str:
        return f"{self.location} [{self.field}]: {self.message}"


@dataclass
class ValidationReport:
    out_dir: str
    mode: str = ""
    checked: int = 0
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, location: str, field_name: str, message: str):
        self.violations.append(Violation(location, field_name, message))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "out_dir": self.out_dir,
            "mode": self.mode,
            "checked": self.checked,
            "ok": self.ok,
            "violations": [
                {"location": v.location, "field": v.field, "message": v.message}
                for v in self.violations
            ],
        }


@dataclass
class StatsReport:
    """Descriptive statistics of an emitted dataset."""

    mode: str
    splits: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    episodes: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"mode": self.mode, "splits": self.splits}
        if self.episodes:
            data["episodes"] = self.episodes
        return data


def read_csv(path: Path, columns: Sequence[str]) -> List[Dict[str, str]]:
    """
    Rows of a CSV file with the expected header.

    Raises:
        DatasetFormatError: If the file is unreadable or its header differs
    """
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames != list(columns):
                raise DatasetFormatError(f"{path}: unexpected header {reader.fieldnames}")
            return list(reader)
    except OSError as e:
        raise DatasetFormatError(f"cannot read {path}: {e}") from e


def _read_json(path: Path) -> Any:
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise DatasetFormatError(f"cannot read {path}: {e}") from e


def load_dataset_plan(out_dir: Union[str, Path]) -> Tuple[TaskPlan, Sfa]:
    """
    Resolve the task stored with a dataset and compile its automaton afresh.

    Raises:
        DatasetFormatError: If spec.json is missing or invalid
    """
    out_dir = Path(out_dir)
    try:
        text = (out_dir / SPEC_FILE).read_text(encoding="utf-8")
    except OSError as e:
        raise DatasetFormatError(f"cannot read {out_dir / SPEC_FILE}: {e}") from e
    try:
        plan = resolve_task(load_spec(text, base_dir=str(out_dir)))
    except LtlfDatagenError as e:
        raise DatasetFormatError(f"{out_dir / SPEC_FILE}: {e}") from e
    return plan, compile_formula(plan.formula, plan.atoms)


def _flag(cell: str) -> Optional[bool]:
    return {"1": True, "0": False}.get(cell)


def _assignment(plan: TaskPlan, labels: Dict[str, str]) -> Dict[str, int]:
    """Encode label cells; raises DomainViolationError or ValueError on bad labels."""
    assignment = {}
    for var, cell in labels.items():
        label = cell if plan.domain_of(var).is_enum else int(cell)
        value = plan.encode(var, label)
        if value not in plan.domain_of(var).values(plan.universe):
            raise DomainViolationError(f"label {cell!r} of {var} is outside domain {plan.variables[var]}")
        assignment[var] = value
    return assignment


def _guard_between(a: Sfa, source: int, target: int):
    for transition in a.outgoing(source):
        if transition.target == target:
            return transition.guard
    return None


def _check_disjoint(report: ValidationReport, refs_by_split: Dict[str, set], held_out: str = "test"):
    held = refs_by_split.get(held_out, set())
    others = set().union(*(refs for split, refs in refs_by_split.items() if split != held_out))
    shared = sorted(held & others)
    if shared:
        report.add(held_out, "images", f"{len(shared)} image(s) also used by other splits, e.g. {shared[0]}")


def _validate_sequence(plan: TaskPlan, a: Sfa, seq_id: str, rows: List[Dict[str, str]],
                       report: ValidationReport) -> Optional[Tuple[bool, int]]:
    """Check one sequence; returns its (label, length) when readable."""
    label = _flag(rows[0]["seq_label"])
    if label is None or any(row["seq_label"] != rows[0]["seq_label"] for row in rows):
        report.add(seq_id, "seq_label", "sequence label is not a constant 0/1 column")
        return None

    trace = []
    for t, row in enumerate(rows):
        where = f"{seq_id} t={t}"
        if row["t"] != str(t):
            report.add(where, "t", f"expected step {t}, found {row['t']!r}")
        try:
            assignment = _assignment(plan, {var: row[f"lbl_{var}"] for var in plan.variables})
        except (ValueError, DomainViolationError) as e:
            report.add(where, "labels", str(e))
            return None
        truths = {name: eval_constraint(c, assignment) for name, c in plan.constraints.items()}
        for name in plan.constraint_names:
            if _flag(row[f"c_{name}"]) != truths[name]:
                report.add(where, f"c_{name}", f"recorded {row[f'c_{name}']!r}, recomputed {int(truths[name])}")
        trace.append({atom: truths[atom] for atom in plan.atoms})

    result = run(a, trace)
    for t, row in enumerate(rows):
        where = f"{seq_id} t={t}"
        source, target = result.state_trace[t], result.state_trace[t + 1]
        if row["state_from"] != str(source):
            report.add(where, "state_from", f"recorded {row['state_from']}, recomputed {source}")
        if row["state_to"] != str(target):
            report.add(where, "state_to", f"recorded {row['state_to']}, recomputed {target}")
        guard = _guard_between(a, source, target)
        guard_atoms = set(guard.atoms) if guard is not None else set()
        relevant_vars = {p for atom in guard_atoms for p in plan.constraints[atom].params}
        for name in plan.constraint_names:
            if _flag(row[f"rel_{name}"]) != (name in guard_atoms):
                report.add(where, f"rel_{name}", "relevance does not match the transition guard")
        for var in plan.variables:
            if _flag(row[f"rel_{var}"]) != (var in relevant_vars):
                report.add(where, f"rel_{var}", "relevance does not match the transition guard")

    if result.accepted != label:
        report.add(seq_id, "seq_label", f"recorded {int(label)}, automaton verdict {int(result.accepted)}")
    if eval_trace(plan.formula, trace) != result.accepted:
        report.add(seq_id, "automaton", "automaton verdict differs from the formula semantics")
    return label, len(rows)


def _validate_sequential(plan: TaskPlan, a: Sfa, out_dir: Path, report: ValidationReport):
    spec = plan.spec
    columns = sequence_columns(plan)
    refs_by_split: Dict[str, set] = {}
    for split in spec.split_names:
        rows = read_csv(out_dir / f"{split}.csv", columns)
        grouped: Dict[str, List[Dict[str, str]]] = {}
        for row in rows:
            grouped.setdefault(row["seq_id"], []).append(row)
        refs_by_split[split] = {row[f"img_{var}"] for row in rows for var in plan.variables
                                if row[f"img_{var}"] != SYNTHETIC_IMAGE}

        positives = 0
        for seq_id, seq_rows in grouped.items():
            outcome = _validate_sequence(plan, a, seq_id, seq_rows, report)
            report.checked += 1
            if outcome is None:
                continue
            label, length = outcome
            positives += int(label)
            if not spec.length.min <= length <= spec.length.max:
                report.add(seq_id, "length",
                           f"length {length} outside [{spec.length.min}, {spec.length.max}]")

        expected = spec.counts[split]
        if len(grouped) != expected:
            report.add(split, "count", f"{len(grouped)} sequences, expected {expected}")
        wanted = len(grouped) if spec.balance == ALL_POSITIVE else math.ceil(len(grouped) / 2)
        if positives != wanted:
            report.add(split, "balance", f"{positives} positive sequences, expected {wanted}")
    _check_disjoint(report, refs_by_split)


def _episode_samples(rows: List[Dict[str, str]]) -> Dict[str, Dict[str, str]]:
    samples: Dict[str, Dict[str, str]] = {}
    for row in rows:
        samples.setdefault(row["sample_id"], {})[row["variable"]] = row["label"]
    return samples


def _orphan_can_fail(plan: TaskPlan, truths: Dict[str, bool], orphan: str) -> bool:
    """Whether some assignment meets the episode's truths and violates the orphan."""
    cube = tuple(sorted({**truths, orphan: False}.items()))
    return not solve_all(Guard((cube,)), plan.constraints, plan.domain_values()).is_empty


def _validate_incremental(plan: TaskPlan, a: Sfa, out_dir: Path, report: ValidationReport):
    spec = plan.spec
    document = _read_json(out_dir / CURRICULUM_FILE)
    try:
        states = [int(s) for s in document["states"]]
        guards = [str(g) for g in document["guards"]]
        truths = [{k: bool(v) for k, v in entry.items()} for entry in document["constraint_truths"]]
        schedule = {name: [int(i) for i in episodes]
                    for name, episodes in document["orphan_schedule"].items()}
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise DatasetFormatError(f"{out_dir / CURRICULUM_FILE}: {e}") from e

    if len(guards) != spec.episodes or len(truths) != spec.episodes or len(states) != spec.episodes + 1:
        report.add("curriculum", "episodes", f"expected {spec.episodes} episodes")
        return
    if states[0] != a.initial:
        report.add("curriculum", "states", f"trace starts in {states[0]}, not the initial state")
    for index in range(spec.episodes):
        guard = _guard_between(a, states[index], states[index + 1])
        where = f"episode {index}"
        if guard is None or guard.text != parse_guard(guards[index]).text:
            report.add(where, "guard", f"no transition {states[index]} -> {states[index + 1]} "
                                       f"with guard {guards[index]!r}")
        elif guard.evaluate_partial(truths[index]) is not True:
            report.add(where, "constraint_truths", "active truths do not satisfy the guard")
    if not a.is_accepting(states[-1]):
        report.add("curriculum", "states", f"final state {states[-1]} is not accepting")
    trace = [{atom: episode.get(atom, False) for atom in plan.atoms} for episode in truths]
    if not eval_trace(plan.formula, trace):
        report.add("curriculum", "formula", "episode trace does not satisfy the formula")

    orphan_of = {index: name for name, episodes in schedule.items() for index in episodes}
    exact_orphan = {index: _orphan_can_fail(plan, truths[index], name) for index, name in orphan_of.items()
                    if 0 <= index < spec.episodes}
    counts = spec.split_counts()
    refs_by_split: Dict[str, set] = {split: set() for split in spec.split_names}
    for index in range(spec.episodes):
        for split in spec.split_names:
            path = out_dir / episode_dir_name(index) / f"{split}.csv"
            rows = read_csv(path, EPISODE_COLUMNS)
            refs_by_split[split].update(row["img"] for row in rows if row["img"] != SYNTHETIC_IMAGE)
            samples = _episode_samples(rows)
            report.checked += 1
            where = f"episode {index} {split}"
            if len(samples) != counts[split]:
                report.add(where, "count", f"{len(samples)} samples, expected {counts[split]}")
            orphan = orphan_of.get(index)
            orphan_hits = 0
            for sample_id, labels in samples.items():
                if set(labels) != set(plan.variables):
                    report.add(f"{where} {sample_id}", "variables", "sample does not label every variable")
                    continue
                try:
                    assignment = _assignment(plan, labels)
                except (ValueError, DomainViolationError) as e:
                    report.add(f"{where} {sample_id}", "labels", str(e))
                    continue
                for name, expected in truths[index].items():
                    if eval_constraint(plan.constraints[name], assignment) != expected:
                        report.add(f"{where} {sample_id}", f"c_{name}",
                                   f"labels do not give {name} = {int(expected)}")
                if orphan is not None and eval_constraint(plan.constraints[orphan], assignment):
                    orphan_hits += 1
            if orphan is not None:
                wanted = round(spec.orphan_positive_ratio * counts[split])
                if exact_orphan[index] and orphan_hits != wanted:
                    report.add(where, f"c_{orphan}", f"{orphan_hits} samples satisfy the orphan, expected {wanted}")
                elif orphan_hits < wanted:
                    report.add(where, f"c_{orphan}",
                               f"{orphan_hits} samples satisfy the orphan, expected at least {wanted}")
    _check_disjoint(report, refs_by_split)


def validate(out_dir: Union[str, Path]) -> ValidationReport:
    """
    Validate an emitted dataset directory.

    Raises:
        DatasetFormatError: If a file is missing, unreadable or garbled
    """
    out_dir = Path(out_dir)
    plan, a = load_dataset_plan(out_dir)
    report = ValidationReport(str(out_dir), plan.spec.mode)
    try:
        emitted = (out_dir / AUTOMATON_FILE).read_text(encoding="utf-8")
    except OSError as e:
        raise DatasetFormatError(f"cannot read {out_dir / AUTOMATON_FILE}: {e}") from e
    if emitted != to_json(a):
        report.add(AUTOMATON_FILE, "automaton", "does not match the automaton compiled from the formula")

    if plan.spec.is_sequential:
        _validate_sequential(plan, a, out_dir, report)
    else:
        _validate_incremental(plan, a, out_dir, report)
    logger.info("Validated %s: %d units checked, %d violations", out_dir, report.checked,
                len(report.violations))
    return report


def stats(out_dir: Union[str, Path]) -> StatsReport:
    """
    Summarise an emitted dataset.

    Sequential: per split the sequence count, positives, negatives, length
    histogram and per-constraint truth frequency over all steps.
    Incremental: per episode and split the label histogram of every variable.
    """
    out_dir = Path(out_dir)
    plan, _ = load_dataset_plan(out_dir)
    spec = plan.spec
    report = StatsReport(spec.mode)
    if spec.is_sequential:
        columns = sequence_columns(plan)
        for split in spec.split_names:
            rows = read_csv(out_dir / f"{split}.csv", columns)
            lengths: Counter = Counter()
            labels: Dict[str, bool] = {}
            for row in rows:
                lengths[row["seq_id"]] += 1
                labels[row["seq_id"]] = row["seq_label"] == "1"
            histogram = Counter(lengths.values())
            report.splits[split] = {
                "sequences": len(labels),
                "positives": sum(labels.values()),
                "negatives": len(labels) - sum(labels.values()),
                "lengths": {str(k): histogram[k] for k in sorted(histogram)},
                "truth_frequency": {
                    name: (sum(row[f"c_{name}"] == "1" for row in rows) / len(rows)) if rows else 0.0
                    for name in plan.constraint_names
                },
            }
        return report

    for index in range(spec.episodes):
        entry: Dict[str, Any] = {"episode": index, "splits": {}}
        for split in spec.split_names:
            rows = read_csv(out_dir / episode_dir_name(index) / f"{split}.csv", EPISODE_COLUMNS)
            histograms: Dict[str, Counter] = {var: Counter() for var in plan.variables}
            for row in rows:
                histograms[row["variable"]][row["label"]] += 1
            entry["splits"][split] = {
                var: dict(sorted(counter.items())) for var, counter in histograms.items()
            }
            report.splits.setdefault(split, {"samples": 0})
            report.splits[split]["samples"] += len({row["sample_id"] for row in rows})
        report.episodes.append(entry)
    return report
