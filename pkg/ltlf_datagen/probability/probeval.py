"""
Probabilistic Evaluation

Probabilities of constraints, transition guards and sequence acceptance when
every variable carries an independent categorical distribution (as produced
by a perception model):

- constraint probabilities, exactly (weighted model count over the joint
  assignment grid) or from the k most probable satisfying worlds;
- guard probabilities, either factored (guard atoms treated as independent
  Bernoulli variables, counted per atom valuation) or joint (counted over
  variable assignments, so constraints sharing variables stay dependent);
- acceptance probability of a sequence by forward propagation of a state
  distribution through the automaton.
"""

import itertools
import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ltlf_datagen.automata.guards import Guard, minterms_of
from ltlf_datagen.automata.sfa import Sfa
from ltlf_datagen.config import get_logger
from ltlf_datagen.constraints.expressions import ConstraintDef
from ltlf_datagen.exceptions import SpecError

logger = get_logger(__name__)

GuardAtomProbs = Mapping[str, float]

SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class CategoricalDist:
    """
    Distribution of one variable over its domain.

    Attributes:
        variable: Variable name
        probabilities: One probability per domain value
        values: Encoded domain values aligned with probabilities (defaults to 0 .. n-1)
    """

    variable: str
    probabilities: Tuple[float, ...]
    values: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "probabilities", tuple(float(p) for p in self.probabilities))
        if not self.values:
            object.__setattr__(self, "values", tuple(range(len(self.probabilities))))
        if len(self.values) != len(self.probabilities):
            raise ValueError(f"distribution of {self.variable} has {len(self.probabilities)} "
                             f"probabilities for {len(self.values)} values")
        if any(p < 0 or p > 1 for p in self.probabilities):
            raise ValueError(f"distribution of {self.variable} has a probability outside [0, 1]")
        if abs(math.fsum(self.probabilities) - 1.0) > SUM_TOLERANCE:
            raise ValueError(f"distribution of {self.variable} does not sum to 1")

    def support(self) -> List[Tuple[int, float]]:
        """(value, probability) pairs with non-zero probability."""
        return [(v, p) for v, p in zip(self.values, self.probabilities) if p > 0]


def _dists_for(variables: Sequence[str], dists: Mapping[str, CategoricalDist]) -> List[CategoricalDist]:
    missing = [var for var in variables if var not in dists]
    if missing:
        raise SpecError(f"no distribution for variable(s) {', '.join(missing)}")
    return [dists[var] for var in variables]


def _worlds(variables: Sequence[str],
            dists: Mapping[str, CategoricalDist]) -> Iterator[Tuple[Dict[str, int], float]]:
    """Every assignment of non-zero probability, in lexicographic value order, with its probability."""
    supports = [d.support() for d in _dists_for(variables, dists)]
    for combo in itertools.product(*supports):
        yield ({var: value for var, (value, _) in zip(variables, combo)},
               math.prod(p for _, p in combo))


def constraint_prob_exact(c: ConstraintDef, dists: Mapping[str, CategoricalDist]) -> float:
    """
    Probability that a constraint holds.

    Raises:
        SpecError: If a parameter has no distribution
    """
    return math.fsum(weight for world, weight in _worlds(c.params, dists) if c.evaluate(world))


def constraint_prob_topk(c: ConstraintDef, dists: Mapping[str, CategoricalDist],
                         k: Optional[int] = 1) -> float:
    """
    Probability mass of the k most probable worlds satisfying a constraint.

    Ties are broken by assignment order. k=None sums every satisfying world.

    Raises:
        SpecError: If a parameter has no distribution
    """
    if k is not None and k < 1:
        raise ValueError("k must be at least 1")
    satisfying = [(weight, tuple(world[p] for p in c.params))
                  for world, weight in _worlds(c.params, dists) if c.evaluate(world)]
    satisfying.sort(key=lambda item: (-item[0], item[1]))
    chosen = satisfying if k is None else satisfying[:k]
    return math.fsum(weight for weight, _ in chosen)


def _check_atom_probs(atoms: Sequence[str], atom_probs: GuardAtomProbs):
    for atom in atoms:
        if atom not in atom_probs:
            raise SpecError(f"no probability for atom {atom}")
        if not 0.0 <= atom_probs[atom] <= 1.0:
            raise ValueError(f"probability of atom {atom} is outside [0, 1]")


def guard_prob_factored(g: Guard, atom_probs: GuardAtomProbs) -> float:
    """
    Probability of a guard with its atoms as independent Bernoulli variables.

    Sums the weight of every satisfying valuation of the guard's atoms, so
    overlapping product terms are not counted twice.
    """
    atoms = g.atoms
    _check_atom_probs(atoms, atom_probs)
    minterms = np.asarray(minterms_of(g, atoms), dtype=np.int64)
    if minterms.size == 0:
        return 0.0
    probs = np.array([atom_probs[atom] for atom in atoms], dtype=float)
    bits = (minterms[:, None] >> np.arange(len(atoms))) & 1
    weights = np.where(bits == 1, probs, 1.0 - probs).prod(axis=1)
    return float(math.fsum(weights.tolist()))


def guard_prob_joint(g: Guard, constraints: Mapping[str, ConstraintDef],
                     dists: Mapping[str, CategoricalDist]) -> float:
    """
    Exact probability of a guard over the joint distribution of its variables.

    Raises:
        SpecError: If a guard atom is not a constraint or a variable has no distribution
    """
    unknown = [atom for atom in g.atoms if atom not in constraints]
    if unknown:
        raise SpecError(f"guard atom(s) {', '.join(unknown)} are not constraints")
    variables = sorted({p for atom in g.atoms for p in constraints[atom].params})
    total = []
    for world, weight in _worlds(variables, dists):
        valuation = {atom: constraints[atom].evaluate(world) for atom in g.atoms}
        if g.evaluate(valuation):
            total.append(weight)
    return math.fsum(total)


def transition_matrix(a: Sfa, atom_probs: GuardAtomProbs) -> np.ndarray:
    """Row-stochastic matrix of factored transition probabilities."""
    matrix = np.zeros((a.num_states, a.num_states), dtype=float)
    for transition in a.transitions:
        matrix[transition.source, transition.target] += guard_prob_factored(transition.guard, atom_probs)
    return matrix


def accept_prob(a: Sfa, per_step_atom_probs: Sequence[GuardAtomProbs]) -> float:
    """
    Probability that the automaton accepts, given per-step atom probabilities.

    The state distribution starts as a point mass on the initial state and is
    pushed through the transition matrix of each step.
    """
    distribution = np.zeros(a.num_states, dtype=float)
    distribution[a.initial] = 1.0
    for atom_probs in per_step_atom_probs:
        distribution = distribution @ transition_matrix(a, atom_probs)
    return float(sum(distribution[state] for state in sorted(a.accepting)))
