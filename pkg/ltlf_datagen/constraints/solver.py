"""
All-solutions solving per transition guard.

Constraint truths are reified: a guard over constraint atoms is satisfied by
an assignment when the truths of those constraints under the assignment
satisfy the guard. The search backtracks over the variables the guard's
constraints mention, in declaration order, and prunes as soon as the
constraints completed so far decide the guard false. Variables no guard
constraint mentions are left free and counted, not enumerated.
"""

from dataclasses import dataclass, field
from math import prod
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ltlf_datagen.config import get_logger, get_settings
from ltlf_datagen.exceptions import SolverCapExceeded
from ltlf_datagen.automata.guards import Guard
from .expressions import ConstraintDef

logger = get_logger(__name__)


@dataclass(frozen=True)
class SolutionPool:
    """
    Every assignment of the guard-relevant variables that satisfies a guard.

    Attributes:
        guard: The canonical guard the pool was solved for
        variables: Guard-relevant variables, in declaration order
        solutions: One value tuple per solution, aligned with variables
        truth_names: Constraints decided by the relevant variables alone
        truths: Per solution, the truths of truth_names (aligned)
        relevance: Constraint -> True when the guard mentions it
        free_variables: Variables left to uniform sampling, with their domains
        constraints: Every constraint of the problem
    """

    guard: Guard
    variables: Tuple[str, ...]
    solutions: Tuple[Tuple[int, ...], ...]
    truth_names: Tuple[str, ...]
    truths: Tuple[Tuple[bool, ...], ...]
    relevance: Mapping[str, bool] = field(hash=False, compare=False)
    free_variables: Tuple[Tuple[str, Tuple[int, ...]], ...] = ()
    constraints: Mapping[str, ConstraintDef] = field(default_factory=dict, hash=False,
                                                      compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.solutions)

    @property
    def is_empty(self) -> bool:
        return not self.solutions

    @property
    def world_count(self) -> int:
        """Number of full assignments (every problem variable) the pool stands for."""
        return len(self.solutions) * prod(len(values) for _, values in self.free_variables)

    def assignments(self) -> List[Dict[str, int]]:
        return [dict(zip(self.variables, values)) for values in self.solutions]


def relevant_variables(guard: Guard, constraints: Mapping[str, ConstraintDef],
                       domains: Mapping[str, Sequence[int]]) -> List[str]:
    """Variables mentioned by the guard's constraints, in declaration order."""
    mentioned = set()
    for atom in guard.atoms:
        if atom not in constraints:
            raise ValueError(f"guard atom {atom} is not a declared constraint")
        mentioned.update(constraints[atom].params)
    unknown = mentioned - set(domains)
    if unknown:
        raise ValueError(f"variables {sorted(unknown)} have no domain")
    return [var for var in domains if var in mentioned]


def solve_all(guard: Guard, constraints: Mapping[str, ConstraintDef],
              domains: Mapping[str, Sequence[int]],
              max_tuples: Optional[int] = None) -> SolutionPool:
    """
    Enumerate every assignment satisfying the guard.

    Args:
        guard: Guard over constraint names
        constraints: Constraint name -> definition
        domains: Variable -> encoded values, in declaration order
        max_tuples: Cap on the relevant search grid (defaults to LTLF_DATAGEN_SOLVER_MAX_TUPLES)

    Returns:
        SolutionPool: Possibly empty when the guard is unsatisfiable

    Raises:
        SolverCapExceeded: If the relevant grid is larger than the cap
    """
    cap = max_tuples if max_tuples is not None else get_settings().solver_max_tuples
    variables = relevant_variables(guard, constraints, domains)
    grid = prod(len(domains[var]) for var in variables)
    if grid > cap:
        raise SolverCapExceeded(
            f"guard {guard} needs a search over {grid} assignments, cap is {cap}")

    position = {var: i for i, var in enumerate(variables)}
    relevant_set = set(variables)
    truth_names = tuple(sorted(
        name for name, c in constraints.items() if set(c.params) <= relevant_set))
    # constraints become decidable once their last parameter is assigned
    completes_at: Dict[int, List[str]] = {}
    for name in truth_names:
        params = constraints[name].params
        depth = max((position[p] for p in params), default=-1)
        completes_at.setdefault(depth, []).append(name)

    truths: Dict[str, bool] = {}
    for name in completes_at.get(-1, []):
        truths[name] = constraints[name].evaluate({})

    solutions: List[Tuple[int, ...]] = []
    solution_truths: List[Tuple[bool, ...]] = []
    assignment: Dict[str, int] = {}

    def search(depth: int):
        if guard.evaluate_partial(truths) is False:
            return
        if depth == len(variables):
            solutions.append(tuple(assignment[var] for var in variables))
            solution_truths.append(tuple(truths[name] for name in truth_names))
            return
        var = variables[depth]
        for value in domains[var]:
            assignment[var] = value
            for name in completes_at.get(depth, []):
                truths[name] = constraints[name].evaluate(assignment)
            search(depth + 1)
            for name in completes_at.get(depth, []):
                del truths[name]
        assignment.pop(var, None)

    if not variables:
        if guard.evaluate_partial(truths) is not False:
            solutions.append(())
            solution_truths.append(tuple(truths[name] for name in truth_names))
    else:
        search(0)

    free = tuple((var, tuple(values)) for var, values in domains.items() if var not in relevant_set)
    logger.debug("Solved guard %s: %d solutions over %s", guard, len(solutions), variables)
    return SolutionPool(
        guard=guard,
        variables=tuple(variables),
        solutions=tuple(solutions),
        truth_names=truth_names,
        truths=tuple(solution_truths),
        relevance={name: name in guard.atoms for name in constraints},
        free_variables=free,
        constraints=dict(constraints),
    )
