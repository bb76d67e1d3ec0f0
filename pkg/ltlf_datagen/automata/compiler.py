"""
LTLf to Symbolic Automaton Compiler

Formula progression: a state is a positive boolean combination, kept in
disjunctive normal form, of obligations `X f` (a next step must exist and
satisfy f) and `WX f` (if a next step exists it satisfies f). Reading a
valuation replaces every obligation by the progression of its body. A state
accepts when some clause carries only WX obligations, i.e. it holds on the
empty remainder.

The explicit automaton over 2^|atoms| valuations is minimised and its
transitions condensed into canonical guards.
"""

from collections import deque
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

import numpy as np

from ltlf_datagen.config import get_logger, get_settings
from ltlf_datagen.exceptions import StateLimitExceeded
from ltlf_datagen.logic.formula import (
    Formula, TrueFormula, FalseFormula, TRUE, FALSE, Atom, Not, And, Or,
    Next, WeakNext, Until, Release, atoms_of,
)
from ltlf_datagen.logic.nnf import to_nnf, empty_trace_value
from .minimize import minimize_table
from .sfa import Sfa

logger = get_logger(__name__)

Clause = FrozenSet[Formula]
Dnf = FrozenSet[Clause]

DNF_TRUE: Dnf = frozenset({frozenset()})
DNF_FALSE: Dnf = frozenset()


def _normalize(clauses: Set[Clause]) -> Dnf:
    normalized = set()
    for clause in clauses:
        if Next(FALSE) in clause:
            continue
        normalized.add(frozenset(
            o for o in clause
            if o != WeakNext(TRUE)
            and not (isinstance(o, WeakNext) and Next(o.operand) in clause)
        ))
    # absorption: drop clauses implied by a smaller one
    return frozenset(c for c in normalized if not any(other < c for other in normalized))


def dnf_and(left: Dnf, right: Dnf) -> Dnf:
    return _normalize({a | b for a in left for b in right})


def dnf_or(left: Dnf, right: Dnf) -> Dnf:
    return _normalize(set(left) | set(right))


def is_accepting(state: Dnf) -> bool:
    return any(all(isinstance(o, WeakNext) for o in clause) for clause in state)


class _Progression:
    """Progression of NNF formulas through single valuations, memoised."""

    def __init__(self):
        self._memo: Dict[Tuple[Formula, FrozenSet[str]], Dnf] = {}

    def step(self, node: Formula, true_atoms: FrozenSet[str]) -> Dnf:
        key = (node, true_atoms)
        if key not in self._memo:
            self._memo[key] = self._step(node, true_atoms)
        return self._memo[key]

    def _step(self, node: Formula, true_atoms: FrozenSet[str]) -> Dnf:
        if isinstance(node, TrueFormula):
            return DNF_TRUE
        if isinstance(node, FalseFormula):
            return DNF_FALSE
        if isinstance(node, Atom):
            return DNF_TRUE if node.name in true_atoms else DNF_FALSE
        if isinstance(node, Not):
            return DNF_FALSE if node.operand.name in true_atoms else DNF_TRUE
        if isinstance(node, And):
            return dnf_and(self.step(node.left, true_atoms), self.step(node.right, true_atoms))
        if isinstance(node, Or):
            return dnf_or(self.step(node.left, true_atoms), self.step(node.right, true_atoms))
        if isinstance(node, (Next, WeakNext)):
            return _normalize({frozenset({node})})
        if isinstance(node, Until):
            return dnf_or(
                self.step(node.right, true_atoms),
                dnf_and(self.step(node.left, true_atoms), frozenset({frozenset({Next(node)})})),
            )
        if isinstance(node, Release):
            return dnf_and(
                self.step(node.right, true_atoms),
                dnf_or(self.step(node.left, true_atoms), frozenset({frozenset({WeakNext(node)})})),
            )
        raise TypeError(f"formula is not in negation normal form: {node!r}")

    def advance(self, state: Dnf, true_atoms: FrozenSet[str]) -> Dnf:
        result = DNF_FALSE
        for clause in state:
            progressed = DNF_TRUE
            for obligation in clause:
                progressed = dnf_and(progressed, self.step(obligation.operand, true_atoms))
                if not progressed:
                    break
            result = dnf_or(result, progressed)
        return result


def initial_state(formula: Formula) -> Dnf:
    """Obligation state before the first step; accepting iff the formula holds on the empty trace."""
    body = to_nnf(formula)
    wrapper = WeakNext if empty_trace_value(body) else Next
    return _normalize({frozenset({wrapper(body)})})


def compile_formula(formula: Formula, atoms: Optional[Sequence[str]] = None,
                    max_states: Optional[int] = None) -> Sfa:
    """
    Compile an LTLf formula into a minimal deterministic complete automaton.

    Args:
        formula: The formula
        atoms: Guard alphabet (defaults to the formula's atoms; must include them)
        max_states: Cap on explored states (defaults to LTLF_DATAGEN_MAX_STATES)

    Returns:
        Sfa: Accepts exactly the non-empty traces satisfying the formula

    Raises:
        StateLimitExceeded: If exploration passes the cap
        ValueError: If atoms does not cover the formula's atoms
    """
    formula_atoms = atoms_of(formula)
    atoms = sorted(set(atoms)) if atoms is not None else formula_atoms
    missing = set(formula_atoms) - set(atoms)
    if missing:
        raise ValueError(f"atoms {sorted(missing)} of the formula are not in the alphabet")
    cap = max_states if max_states is not None else get_settings().max_states

    symbols = [
        frozenset(atom for bit, atom in enumerate(atoms) if index >> bit & 1)
        for index in range(1 << len(atoms))
    ]
    progression = _Progression()
    start = initial_state(formula)
    ids: Dict[Dnf, int] = {start: 0}
    order: List[Dnf] = [start]
    rows: List[List[int]] = []
    queue = deque([start])
    while queue:
        state = queue.popleft()
        row = []
        for true_atoms in symbols:
            target = progression.advance(state, true_atoms)
            if target not in ids:
                if len(ids) >= cap:
                    raise StateLimitExceeded(
                        f"automaton for {formula} exceeds {cap} states")
                ids[target] = len(ids)
                order.append(target)
                queue.append(target)
            row.append(ids[target])
        rows.append(row)

    accepting = {ids[s] for s in order if is_accepting(s)}
    minimal = minimize_table(atoms, np.array(rows, dtype=np.int64), 0, accepting)
    logger.info("Compiled %s: %d explored states, %d minimal states, %d accepting",
                formula, len(order), minimal.num_states, len(minimal.accepting))
    return minimal
