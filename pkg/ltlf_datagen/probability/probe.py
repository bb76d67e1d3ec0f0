"""
Probe reports.

A probe document declares domains, variables and constraints (as in a task
spec), one categorical distribution per variable, and either an explicit
list of transition guards or a formula whose compiled transitions are all
reported:

    {"name": ..., "domains": [...], "variables": {...}, "constraints": {...},
     "formula": "...", "distributions": {"A": [p0, p1, ...], ...},
     "transitions": ["!q & r", ...]}
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

from ltlf_datagen.automata.compiler import compile_formula
from ltlf_datagen.automata.guards import Guard, parse_guard
from ltlf_datagen.constraints.expressions import ConstraintDef, Universe
from ltlf_datagen.exceptions import SpecError
from ltlf_datagen.logic.parser import parse_formula
from ltlf_datagen.spec.bundled import PROBES_DIR
from ltlf_datagen.spec.loader import parse_constraints, parse_domains
from .probeval import (
    CategoricalDist, constraint_prob_exact, constraint_prob_topk, guard_prob_factored,
    guard_prob_joint,
)

PROBE_KEYS = {"name", "domains", "variables", "constraints", "formula", "distributions", "transitions"}


@dataclass(frozen=True)
class Probe:
    name: str
    constraints: Mapping[str, ConstraintDef]
    dists: Mapping[str, CategoricalDist]
    formula: Optional[str] = None
    transitions: Tuple[str, ...] = ()


@dataclass
class ProbeReport:
    """Constraint and transition probabilities of one probe."""

    name: str
    constraints: List[Dict[str, Any]] = field(default_factory=list)
    transitions: List[Dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "constraints": self.constraints, "transitions": self.transitions}

    def to_text(self) -> str:
        lines = [f"probe {self.name}", "", f"{'constraint':<12}{'exact':>10}{'top-1':>10}"]
        for row in self.constraints:
            lines.append(f"{row['constraint']:<12}{_fmt(row['exact']):>10}{_fmt(row['top1']):>10}")
        lines += ["", f"{'transition':<14}{'guard':<22}{'exact':>10}{'top-1':>10}{'joint':>10}"]
        for row in self.transitions:
            lines.append(f"{row['transition']:<14}{row['guard']:<22}{_fmt(row['factored_exact']):>10}"
                         f"{_fmt(row['factored_top1']):>10}{_fmt(row['joint']):>10}")
        return "\n".join(lines) + "\n"


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def probe_from_dict(data: Mapping[str, Any]) -> Probe:
    """
    Validate a decoded probe document.

    Raises:
        SpecError: On a missing or unknown key, an unresolved reference or a bad distribution
    """
    if not isinstance(data, dict):
        raise SpecError("probe must be a JSON object")
    unknown = set(data) - PROBE_KEYS
    if unknown:
        raise SpecError(f"unknown probe keys {sorted(unknown)}")
    for key in ("domains", "variables", "constraints", "distributions"):
        if key not in data:
            raise SpecError(f"missing probe key {key!r}")

    domains = {d.name: d for d in parse_domains(data["domains"])}
    variables = data["variables"]
    if not isinstance(variables, dict):
        raise SpecError("variables must be an object")
    for var, domain in variables.items():
        if domain not in domains:
            raise SpecError(f"unknown domain {domain} for variable {var}")
    universe = Universe(label for d in domains.values() if d.is_enum for label in d.labels)
    constraints = parse_constraints(data["constraints"], variables, universe)

    dists = {}
    for var, probabilities in data["distributions"].items():
        if var not in variables:
            raise SpecError(f"distribution for unknown variable {var}")
        domain = domains[variables[var]]
        if not isinstance(probabilities, list) or len(probabilities) != len(domain):
            raise SpecError(f"distribution of {var} needs {len(domain)} probabilities")
        try:
            dists[var] = CategoricalDist(var, tuple(probabilities), domain.values(universe))
        except (TypeError, ValueError) as e:
            raise SpecError(str(e)) from e

    transitions = tuple(data.get("transitions") or ())
    formula = data.get("formula")
    if not transitions and formula is None:
        raise SpecError("probe needs a formula or a transitions list")
    return Probe(str(data.get("name", "probe")), constraints, dists, formula, transitions)


def load_probe(source: Union[str, Path]) -> Probe:
    """
    Load a probe from a file path or a packaged probe name (e.g. 'fig_example').

    Raises:
        SpecError: If the document cannot be found, parsed or validated
    """
    path = Path(source)
    if not path.is_file():
        packaged = PROBES_DIR / f"{Path(str(source)).stem}.json"
        if not packaged.is_file():
            raise SpecError(f"no probe file or packaged probe named {str(source)!r}")
        path = packaged
    try:
        return probe_from_dict(json.loads(path.read_text(encoding="utf-8")))
    except json.JSONDecodeError as e:
        raise SpecError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}") from e


def _guards(probe: Probe) -> List[Tuple[str, Guard]]:
    if probe.transitions:
        guards = []
        for text in probe.transitions:
            guard = parse_guard(text)
            unknown = [atom for atom in guard.atoms if atom not in probe.constraints]
            if unknown:
                raise SpecError(f"transition {text!r} mentions unknown constraint(s) {unknown}")
            guards.append((text, guard))
        return guards
    formula = parse_formula(probe.formula, set(probe.constraints))
    a = compile_formula(formula)
    return [(f"{t.source} -> {t.target}", t.guard) for t in a.transitions]


def run_probe(probe: Probe) -> ProbeReport:
    """
    Exact and top-1 probabilities of every constraint, and factored (with
    exact and with top-1 atom probabilities) and joint probabilities of every
    transition.

    Raises:
        SpecError: If a constraint parameter has no distribution
        FormulaSyntaxError / UnknownAtomError: If the formula or a guard is malformed
    """
    report = ProbeReport(probe.name)
    exact: Dict[str, float] = {}
    top1: Dict[str, float] = {}
    for name in sorted(probe.constraints):
        constraint = probe.constraints[name]
        exact[name] = constraint_prob_exact(constraint, probe.dists)
        top1[name] = constraint_prob_topk(constraint, probe.dists, 1)
        report.constraints.append({"constraint": name, "exact": exact[name], "top1": top1[name]})

    for label, guard in _guards(probe):
        report.transitions.append({
            "transition": label,
            "guard": guard.text,
            "factored_exact": guard_prob_factored(guard, exact),
            "factored_top1": guard_prob_factored(guard, top1),
            "joint": guard_prob_joint(guard, probe.constraints, probe.dists),
        })
    return report

