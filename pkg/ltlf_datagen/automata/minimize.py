"""
DFA Minimization

Hopcroft partition refinement over the explicit valuation alphabet, followed
by a breadth-first renumbering so that equal languages give identical
automata (initial state 0, successors discovered in valuation-index order).
"""

from collections import deque
from typing import Dict, FrozenSet, Iterable, List, Sequence, Set

import numpy as np

from .sfa import Sfa, from_table, reachable_states


def hopcroft_partition(table: np.ndarray, accepting: Set[int]) -> List[FrozenSet[int]]:
    """
    Coarsest partition of the states of a complete DFA that respects
    acceptance and the transition table.

    Args:
        table: Successor table of shape (states, symbols)
        accepting: Accepting state ids

    Returns:
        List[FrozenSet[int]]: Blocks of language-equivalent states
    """
    num_states, num_symbols = table.shape
    predecessors: List[Dict[int, Set[int]]] = [dict() for _ in range(num_symbols)]
    for state in range(num_states):
        for symbol in range(num_symbols):
            predecessors[symbol].setdefault(int(table[state, symbol]), set()).add(state)

    accept_block = frozenset(accepting)
    reject_block = frozenset(range(num_states)) - accept_block
    partitions = [block for block in (accept_block, reject_block) if block]
    work_queue = deque(partitions)

    while work_queue:
        splitter = work_queue.popleft()
        for symbol in range(num_symbols):
            incoming: Set[int] = set()
            for target in splitter:
                incoming |= predecessors[symbol].get(target, set())
            if not incoming:
                continue

            refined = []
            for block in partitions:
                inside = block & incoming
                outside = block - incoming
                if not inside or not outside:
                    refined.append(block)
                    continue
                refined.extend((inside, outside))
                if block in work_queue:
                    work_queue.remove(block)
                    work_queue.extend((inside, outside))
                else:
                    work_queue.append(inside if len(inside) <= len(outside) else outside)
            partitions = refined

    return partitions


def minimize(a: Sfa) -> Sfa:
    """Return the unique minimal automaton for the language of a."""
    return minimize_table(a.atoms, a.table, a.initial, a.accepting)


def minimize_table(atoms: Sequence[str], table: np.ndarray, initial: int,
                   accepting: Iterable[int]) -> Sfa:
    """Minimise an explicit successor table and condense the result into guards."""
    order = reachable_states(table, initial)
    renumber = {state: i for i, state in enumerate(order)}
    table = np.array([[renumber[int(t)] for t in table[state]] for state in order],
                     dtype=np.int64)
    accepting = {renumber[s] for s in accepting if s in renumber}

    block_of: Dict[int, int] = {}
    for block_id, block in enumerate(hopcroft_partition(table, accepting)):
        for state in block:
            block_of[state] = block_id
    representative = {}
    for state in range(table.shape[0]):
        representative.setdefault(block_of[state], state)

    # breadth-first numbering of blocks from the initial block
    numbering = {block_of[0]: 0}
    queue = deque([block_of[0]])
    rows = []
    while queue:
        block = queue.popleft()
        row = []
        for target in table[representative[block]].tolist():
            target_block = block_of[target]
            if target_block not in numbering:
                numbering[target_block] = len(numbering)
                queue.append(target_block)
            row.append(numbering[target_block])
        rows.append(row)

    minimal_accepting = {numbering[block_of[s]] for s in accepting}
    return from_table(atoms, np.array(rows, dtype=np.int64), 0, minimal_accepting)
