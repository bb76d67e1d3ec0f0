"""
Task resolution.

Turns a TaskSpec into the problem the generator actually solves: streams are
applied by syntactic substitution (a rebound occurrence of atom `a` becomes
a fresh constraint `a_k` over fresh variables `a<k>_<V>`), the formula is
parsed, and each variable gets its encoded domain values.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Tuple

from ltlf_datagen.constraints.expressions import ConstraintDef, Universe, rename_variables
from ltlf_datagen.exceptions import SpecError
from ltlf_datagen.logic.formula import Formula, Atom, Unary, Binary, atoms_of
from ltlf_datagen.logic.parser import parse_formula
from .models import TaskSpec, DomainDef, StreamMap


@dataclass(frozen=True)
class TaskPlan:
    """
    Resolved generation problem.

    Attributes:
        spec: The source spec
        formula: Parsed formula after stream substitution
        atoms: Sorted atoms of the formula (the guard alphabet)
        variables: Effective variable -> domain name, declaration order then stream variables
        constraints: Effective constraint name -> definition
        orphans: Effective constraints that do not occur in the formula
        universe: Shared enumeration ordering
        stream_origins: Fresh constraint -> (original atom, occurrence)
    """

    spec: TaskSpec
    formula: Formula
    atoms: Tuple[str, ...]
    variables: Mapping[str, str]
    constraints: Mapping[str, ConstraintDef]
    orphans: Tuple[str, ...]
    universe: Universe
    stream_origins: Mapping[str, Tuple[str, int]] = field(default_factory=dict)

    def domain_of(self, variable: str) -> DomainDef:
        return self.spec.domain(self.variables[variable])

    def domain_values(self) -> Dict[str, Tuple[int, ...]]:
        """Variable -> encoded domain values, in variable order."""
        return {var: self.domain_of(var).values(self.universe) for var in self.variables}

    def decode(self, variable: str, value: int):
        return self.domain_of(variable).decode(value, self.universe)

    def encode(self, variable: str, label) -> int:
        return self.domain_of(variable).encode(label, self.universe)

    @property
    def constraint_names(self) -> List[str]:
        return sorted(self.constraints)


def _substitute(formula: Formula, streams_by_atom: Mapping[str, List[StreamMap]],
                counters: Dict[str, int], fresh: Dict[Tuple[str, int], StreamMap]) -> Formula:
    """Rename stream-mapped atom occurrences, visiting atoms in pre-order."""
    if isinstance(formula, Atom):
        occurrence = counters.get(formula.name, 0)
        counters[formula.name] = occurrence + 1
        for stream in streams_by_atom.get(formula.name, []):
            if stream.occurrence is None or stream.occurrence == occurrence:
                fresh[(formula.name, occurrence)] = stream
                return Atom(f"{formula.name}_{occurrence}")
        return formula
    if isinstance(formula, Unary):
        return type(formula)(_substitute(formula.operand, streams_by_atom, counters, fresh))
    if isinstance(formula, Binary):
        left = _substitute(formula.left, streams_by_atom, counters, fresh)
        right = _substitute(formula.right, streams_by_atom, counters, fresh)
        return type(formula)(left, right)
    return formula


def resolve_task(spec: TaskSpec) -> TaskPlan:
    """
    Apply streams and parse the formula.

    Raises:
        SpecError: If a fresh constraint or variable name clashes with a declared one
    """
    universe = spec.universe
    formula = parse_formula(spec.formula, set(spec.constraints))
    streams_by_atom: Dict[str, List[StreamMap]] = {}
    for stream in spec.streams:
        streams_by_atom.setdefault(stream.atom, []).append(stream)

    counters: Dict[str, int] = {}
    fresh: Dict[Tuple[str, int], StreamMap] = {}
    formula = _substitute(formula, streams_by_atom, counters, fresh)

    variables = dict(spec.variables)
    constraints = dict(spec.constraints)
    origins: Dict[str, Tuple[str, int]] = {}
    for (atom, occurrence), stream in sorted(fresh.items()):
        original = spec.constraints[atom]
        name = f"{atom}_{occurrence}"
        if name in spec.constraints:
            raise SpecError(f"stream constraint {name} clashes with a declared constraint")
        renaming = {}
        for var, binding in stream.bindings.items():
            new_var = f"{atom}{occurrence}_{var}"
            if new_var in spec.variables:
                raise SpecError(f"stream variable {new_var} clashes with a declared variable")
            renaming[var] = new_var
            variables[new_var] = binding.domain
        constraints[name] = ConstraintDef(
            name,
            tuple(renaming.get(p, p) for p in original.params),
            rename_variables(original.body, renaming),
            original.source,
        )
        origins[name] = (atom, occurrence)

    # an atom whose every occurrence was rebound is no longer part of the problem
    for atom, total in counters.items():
        if atom in streams_by_atom and all((atom, k) in fresh for k in range(total)):
            del constraints[atom]

    atoms = tuple(atoms_of(formula))
    orphans = tuple(sorted(set(constraints) - set(atoms)))
    return TaskPlan(spec, formula, atoms, variables, constraints, orphans, universe, origins)
