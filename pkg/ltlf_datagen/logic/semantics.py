"""
Finite-trace semantics.

`eval_trace` is the reference evaluator that automata are checked against.
`eval_batch` computes the same value for many equal-length traces at once,
encoded as valuation indices (bit i of a symbol is the truth of atoms[i]).

Until is strict: the witness step does not need to satisfy the left operand.
"""

from typing import List, Mapping, Sequence

import numpy as np

from .formula import (
    Formula, TrueFormula, FalseFormula, Atom, Not, And, Or, Implies, Iff,
    Next, WeakNext, Globally, Finally, Until, Release,
)

Valuation = Mapping[str, bool]
Trace = Sequence[Valuation]


def eval_trace(formula: Formula, trace: Trace) -> bool:
    """
    Decide whether a finite, non-empty trace satisfies the formula.

    Raises:
        ValueError: If the trace is empty or a step does not define an atom
    """
    if len(trace) == 0:
        raise ValueError("cannot evaluate a formula on an empty trace")
    return _positions(formula, trace)[0]


def _positions(node: Formula, trace: Trace) -> List[bool]:
    """Truth of node at every position of the trace."""
    n = len(trace)
    if isinstance(node, TrueFormula):
        return [True] * n
    if isinstance(node, FalseFormula):
        return [False] * n
    if isinstance(node, Atom):
        values = []
        for i, step in enumerate(trace):
            if node.name not in step:
                raise ValueError(f"step {i} does not define atom {node.name}")
            values.append(bool(step[node.name]))
        return values
    if isinstance(node, Not):
        return [not v for v in _positions(node.operand, trace)]
    if isinstance(node, (And, Or, Implies, Iff)):
        left = _positions(node.left, trace)
        right = _positions(node.right, trace)
        if isinstance(node, And):
            return [a and b for a, b in zip(left, right)]
        if isinstance(node, Or):
            return [a or b for a, b in zip(left, right)]
        if isinstance(node, Implies):
            return [(not a) or b for a, b in zip(left, right)]
        return [a == b for a, b in zip(left, right)]
    if isinstance(node, Next):
        inner = _positions(node.operand, trace)
        return inner[1:] + [False]
    if isinstance(node, WeakNext):
        inner = _positions(node.operand, trace)
        return inner[1:] + [True]
    if isinstance(node, (Globally, Finally)):
        inner = _positions(node.operand, trace)
        values = [False] * n
        carry = isinstance(node, Globally)
        for i in range(n - 1, -1, -1):
            carry = (inner[i] and carry) if isinstance(node, Globally) else (inner[i] or carry)
            values[i] = carry
        return values
    if isinstance(node, (Until, Release)):
        left = _positions(node.left, trace)
        right = _positions(node.right, trace)
        values = [False] * n
        if isinstance(node, Until):
            carry = False
            for i in range(n - 1, -1, -1):
                carry = right[i] or (left[i] and carry)
                values[i] = carry
        else:
            carry = True
            for i in range(n - 1, -1, -1):
                carry = right[i] and (left[i] or carry)
                values[i] = carry
        return values
    raise TypeError(f"Unsupported formula node: {node!r}")


def eval_batch(formula: Formula, atoms: Sequence[str], symbols: np.ndarray) -> np.ndarray:
    """
    Evaluate the formula on a batch of traces.

    Args:
        formula: Formula over a subset of atoms
        atoms: Atom order defining the bit encoding of symbols
        symbols: Integer array of shape (batch, length), length >= 1

    Returns:
        np.ndarray: Boolean vector of shape (batch,)
    """
    symbols = np.asarray(symbols)
    if symbols.ndim != 2 or symbols.shape[1] == 0:
        raise ValueError("symbols must have shape (batch, length) with length >= 1")
    index = {name: bit for bit, name in enumerate(atoms)}
    return _batch_positions(formula, index, symbols)[:, 0]


def _batch_positions(node: Formula, index: Mapping[str, int], symbols: np.ndarray) -> np.ndarray:
    shape = symbols.shape
    if isinstance(node, TrueFormula):
        return np.ones(shape, dtype=bool)
    if isinstance(node, FalseFormula):
        return np.zeros(shape, dtype=bool)
    if isinstance(node, Atom):
        if node.name not in index:
            raise ValueError(f"atom {node.name} is not in the batch encoding")
        return ((symbols >> index[node.name]) & 1).astype(bool)
    if isinstance(node, Not):
        return ~_batch_positions(node.operand, index, symbols)
    if isinstance(node, (And, Or, Implies, Iff)):
        left = _batch_positions(node.left, index, symbols)
        right = _batch_positions(node.right, index, symbols)
        if isinstance(node, And):
            return left & right
        if isinstance(node, Or):
            return left | right
        if isinstance(node, Implies):
            return ~left | right
        return left == right
    if isinstance(node, (Next, WeakNext)):
        inner = _batch_positions(node.operand, index, symbols)
        shifted = np.empty_like(inner)
        shifted[:, :-1] = inner[:, 1:]
        shifted[:, -1] = isinstance(node, WeakNext)
        return shifted
    if isinstance(node, (Globally, Finally, Until, Release)):
        if isinstance(node, (Globally, Finally)):
            # G f == false R f, F f == true U f
            right = _batch_positions(node.operand, index, symbols)
            left = np.full(shape, isinstance(node, Finally))
        else:
            left = _batch_positions(node.left, index, symbols)
            right = _batch_positions(node.right, index, symbols)
        strong = isinstance(node, (Until, Finally))
        values = np.empty(shape, dtype=bool)
        carry = np.full(shape[0], not strong)
        for i in range(shape[1] - 1, -1, -1):
            if strong:
                carry = right[:, i] | (left[:, i] & carry)
            else:
                carry = right[:, i] & (left[:, i] | carry)
            values[:, i] = carry
        return values
    raise TypeError(f"Unsupported formula node: {node!r}")
