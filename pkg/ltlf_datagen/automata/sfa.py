"""
Symbolic Finite Automata

Deterministic, complete automata whose transitions are labelled with guards
over constraint atoms. Alongside the guards every automaton keeps the explicit
successor table over the 2^|atoms| valuations (bit i of a valuation index is
the truth of atoms[i]), which makes runs and equivalence checks vectorisable.
"""

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

import graphviz
import numpy as np

from ltlf_datagen.config import get_logger, get_settings
from ltlf_datagen.exceptions import CompileError, CombinatorialCapExceeded
from ltlf_datagen.logic.formula import Formula, atoms_of
from ltlf_datagen.logic.semantics import Trace, eval_batch
from .guards import Guard, guard_from_minterms, parse_guard

logger = get_logger(__name__)


@dataclass(frozen=True)
class Transition:
    source: int
    guard: Guard
    target: int


@dataclass(frozen=True)
class RunResult:
    """State trace of a run (one more entry than the trace) and its verdict."""

    state_trace: Tuple[int, ...]
    accepted: bool


@dataclass(frozen=True)
class Sfa:
    """
    Deterministic complete symbolic automaton.

    Attributes:
        atoms: Sorted atom names the guards range over
        num_states: States are 0 .. num_states - 1
        initial: Initial state id
        accepting: Accepting state ids
        transitions: One transition per (source, target) pair, sorted
    """

    atoms: Tuple[str, ...]
    num_states: int
    initial: int
    accepting: FrozenSet[int]
    transitions: Tuple[Transition, ...]
    table: np.ndarray = field(compare=False, repr=False, hash=False, default=None)

    def __post_init__(self):
        if self.table is None:
            object.__setattr__(self, "table", _table_from_transitions(self))
        self.table.setflags(write=False)

    @property
    def states(self) -> range:
        return range(self.num_states)

    @property
    def alphabet_size(self) -> int:
        return 1 << len(self.atoms)

    def outgoing(self, state: int) -> List[Transition]:
        return [t for t in self.transitions if t.source == state]

    def valuation_index(self, valuation: Mapping[str, bool], step: Optional[int] = None) -> int:
        index = 0
        for bit, atom in enumerate(self.atoms):
            if atom not in valuation:
                where = f" at step {step}" if step is not None else ""
                raise ValueError(f"valuation{where} does not define atom {atom}")
            if valuation[atom]:
                index |= 1 << bit
        return index

    def successor(self, state: int, valuation: Mapping[str, bool]) -> int:
        return int(self.table[state, self.valuation_index(valuation)])

    def is_sink(self, state: int) -> bool:
        """True when every valuation leads back to the state."""
        return bool(np.all(self.table[state] == state))

    def is_accepting(self, state: int) -> bool:
        return state in self.accepting


def _table_from_transitions(a: Sfa) -> np.ndarray:
    table = np.full((a.num_states, 1 << len(a.atoms)), -1, dtype=np.int64)
    for symbol in range(table.shape[1]):
        valuation = {atom: bool(symbol >> bit & 1) for bit, atom in enumerate(a.atoms)}
        for t in a.transitions:
            if t.guard.evaluate(valuation):
                if table[t.source, symbol] not in (-1, t.target):
                    raise CompileError(
                        f"state {t.source} is not deterministic on valuation {valuation}")
                table[t.source, symbol] = t.target
    missing = np.argwhere(table < 0)
    if missing.size:
        state, symbol = missing[0]
        raise CompileError(f"state {int(state)} has no transition for valuation index {int(symbol)}")
    return table


def from_table(atoms: Sequence[str], table: np.ndarray, initial: int,
               accepting) -> Sfa:
    """Build an automaton from an explicit successor table, condensing guards."""
    atoms = tuple(atoms)
    table = np.asarray(table, dtype=np.int64)
    transitions = []
    for source in range(table.shape[0]):
        targets: Dict[int, List[int]] = {}
        for symbol, target in enumerate(table[source].tolist()):
            targets.setdefault(target, []).append(symbol)
        for target in sorted(targets):
            transitions.append(Transition(source, guard_from_minterms(atoms, targets[target]), target))
    return Sfa(atoms, int(table.shape[0]), int(initial), frozenset(int(s) for s in accepting),
               tuple(transitions), table.copy())


def build_sfa(atoms: Sequence[str], num_states: int, initial: int, accepting,
              transitions: Sequence[Tuple[int, str, int]], complete: bool = False) -> Sfa:
    """
    Build an automaton from (source, guard text, target) triples.

    Guards leaving one state are merged per target. With complete=True,
    valuations with no transition are routed to a fresh rejecting sink.

    Raises:
        CompileError: If the result is nondeterministic or (without complete) incomplete
    """
    atoms = tuple(sorted(atoms))
    size = 1 << len(atoms)
    table = np.full((num_states, size), -1, dtype=np.int64)
    for source, guard_text, target in transitions:
        if not (0 <= source < num_states and 0 <= target < num_states):
            raise CompileError(f"transition {source} -> {target} leaves the state range")
        guard = parse_guard(guard_text)
        unknown = set(guard.atoms) - set(atoms)
        if unknown:
            raise CompileError(f"guard {guard_text!r} mentions unknown atoms {sorted(unknown)}")
        for symbol in range(size):
            valuation = {atom: bool(symbol >> bit & 1) for bit, atom in enumerate(atoms)}
            if guard.evaluate(valuation):
                if table[source, symbol] not in (-1, target):
                    raise CompileError(f"state {source} is not deterministic on {valuation}")
                table[source, symbol] = target
    if (table < 0).any():
        if not complete:
            state = int(np.argwhere(table < 0)[0][0])
            raise CompileError(f"state {state} is not complete")
        sink = num_states
        table = np.vstack([table, np.full((1, size), sink, dtype=np.int64)])
        table[table < 0] = sink
    return from_table(atoms, table, initial, accepting)


def run(a: Sfa, trace: Trace) -> RunResult:
    """
    Run the automaton on a non-empty trace.

    Raises:
        ValueError: If the trace is empty or a valuation misses an atom
    """
    if len(trace) == 0:
        raise ValueError("cannot run an automaton on an empty trace")
    states = [a.initial]
    for step, valuation in enumerate(trace):
        states.append(int(a.table[states[-1], a.valuation_index(valuation, step)]))
    return RunResult(tuple(states), states[-1] in a.accepting)


def run_symbols(a: Sfa, symbols: np.ndarray) -> np.ndarray:
    """Acceptance of a batch of traces given as valuation indices, shape (batch, length)."""
    symbols = np.asarray(symbols, dtype=np.int64)
    current = np.full(symbols.shape[0], a.initial, dtype=np.int64)
    for column in range(symbols.shape[1]):
        current = a.table[current, symbols[:, column]]
    accepting = np.zeros(a.num_states, dtype=bool)
    accepting[list(a.accepting)] = True
    return accepting[current]


def check_equiv(a: Sfa, formula: Formula, max_len: int,
                max_traces: Optional[int] = None) -> bool:
    """
    Exhaustively compare the automaton with the formula on every trace of
    length 1 .. max_len.

    Raises:
        ValueError: If the formula mentions atoms the automaton does not know
        CombinatorialCapExceeded: If more than max_traces traces would be enumerated
    """
    extra = set(atoms_of(formula)) - set(a.atoms)
    if extra:
        raise ValueError(f"formula atoms {sorted(extra)} are not automaton atoms")
    cap = max_traces if max_traces is not None else get_settings().equiv_max_traces
    size = a.alphabet_size
    total = sum(size ** length for length in range(1, max_len + 1))
    if total > cap:
        raise CombinatorialCapExceeded(
            f"equivalence check needs {total} traces, cap is {cap}")

    chunk = 1 << 18
    for length in range(1, max_len + 1):
        count = size ** length
        for start in range(0, count, chunk):
            codes = np.arange(start, min(count, start + chunk), dtype=np.int64)
            symbols = np.empty((codes.size, length), dtype=np.int64)
            for column in range(length):
                symbols[:, column] = codes % size
                codes = codes // size
            expected = eval_batch(formula, a.atoms, symbols)
            if not np.array_equal(run_symbols(a, symbols), expected):
                logger.debug("Automaton and formula disagree on a trace of length %d", length)
                return False
    return True


def to_json(a: Sfa) -> str:
    payload = {
        "atoms": list(a.atoms),
        "states": list(a.states),
        "initial": a.initial,
        "accepting": sorted(a.accepting),
        "transitions": [
            {"from": t.source, "guard": t.guard.text, "to": t.target}
            for t in a.transitions
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def from_json(text: str) -> Sfa:
    """
    Load an automaton written by export(a, "json").

    Raises:
        CompileError: If the document is malformed or not deterministic and complete
    """
    try:
        data = json.loads(text)
        states = data["states"]
        transitions = [(int(t["from"]), str(t["guard"]), int(t["to"])) for t in data["transitions"]]
        return build_sfa(data["atoms"], len(states), int(data["initial"]),
                         data["accepting"], transitions)
    except (KeyError, TypeError, ValueError) as e:
        raise CompileError(f"invalid automaton JSON: {e}") from e


def to_dot(a: Sfa, name: str = "sfa") -> str:
    dot = graphviz.Digraph(name=name)
    dot.attr(rankdir="LR")
    dot.node("__start", "", shape="point")
    for state in a.states:
        shape = "doublecircle" if state in a.accepting else "circle"
        dot.node(str(state), str(state), shape=shape)
    dot.edge("__start", str(a.initial))
    for t in a.transitions:
        dot.edge(str(t.source), str(t.target), label=t.guard.text)
    return dot.source


def export(a: Sfa, fmt: str = "json") -> str:
    """Serialise the automaton as "json" or "dot"; output ordering is stable."""
    if fmt == "json":
        return to_json(a)
    if fmt == "dot":
        return to_dot(a)
    raise ValueError(f"unknown export format {fmt!r} (expected 'json' or 'dot')")


def reachable_states(table: np.ndarray, initial: int) -> List[int]:
    """States of a successor table reachable from initial, in breadth-first order."""
    order = [initial]
    seen = {initial}
    queue = deque(order)
    while queue:
        state = queue.popleft()
        for target in table[state].tolist():
            if target not in seen:
                seen.add(target)
                order.append(target)
                queue.append(target)
    return order
