"""
Transition guards.

A guard is a propositional formula over constraint atoms kept in a canonical
sum-of-products form. Two guards denoting the same boolean function have the
same cubes and the same text, so the text doubles as a cache key.
"""

from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

import numpy as np

from ltlf_datagen.logic.formula import (
    Formula, FALSE, Atom, Not, Next, WeakNext, Globally, Finally, Until, Release,
    walk, atoms_of, conjunction, disjunction,
)
from ltlf_datagen.logic.parser import parse_formula
from ltlf_datagen.logic.semantics import eval_batch

Literal = Tuple[str, bool]
Cube = Tuple[Literal, ...]

_TEMPORAL = (Next, WeakNext, Globally, Finally, Until, Release)


@dataclass(frozen=True)
class Guard:
    """
    Canonical sum of products.

    Attributes:
        cubes: Product terms; each is a tuple of (atom, polarity) sorted by atom.
               No cubes means false, a single empty cube means true.
    """

    cubes: Tuple[Cube, ...]

    @property
    def is_true(self) -> bool:
        return self.cubes == ((),)

    @property
    def is_false(self) -> bool:
        return not self.cubes

    @property
    def atoms(self) -> List[str]:
        return sorted({atom for cube in self.cubes for atom, _ in cube})

    @property
    def text(self) -> str:
        if self.is_false:
            return "false"
        if self.is_true:
            return "true"
        return " | ".join(
            " & ".join(atom if positive else f"!{atom}" for atom, positive in cube)
            for cube in self.cubes
        )

    def __str__(self) -> str:
        return self.text

    def evaluate(self, valuation: Mapping[str, bool]) -> bool:
        """Truth of the guard under a valuation defining at least its atoms."""
        return any(all(bool(valuation[atom]) == positive for atom, positive in cube)
                   for cube in self.cubes)

    def evaluate_partial(self, valuation: Mapping[str, Optional[bool]]) -> Optional[bool]:
        """
        Three-valued evaluation.

        Atoms that are missing or None are unknown. Returns None when the
        known atoms do not decide the guard.
        """
        undecided = False
        for cube in self.cubes:
            cube_value: Optional[bool] = True
            for atom, positive in cube:
                value = valuation.get(atom)
                if value is None:
                    cube_value = None
                elif value != positive:
                    cube_value = False
                    break
            if cube_value is True:
                return True
            if cube_value is None:
                undecided = True
        return None if undecided else False

    def cube_valuations(self) -> Iterator[Dict[str, bool]]:
        """The partial valuation fixed by each cube."""
        for cube in self.cubes:
            yield dict(cube)

    def to_formula(self) -> Formula:
        terms = []
        for cube in self.cubes:
            literals = [Atom(atom) if positive else Not(Atom(atom)) for atom, positive in cube]
            terms.append(conjunction(*literals))
        return disjunction(*terms) if terms else FALSE


TRUE_GUARD = Guard(((),))
FALSE_GUARD = Guard(())


def _cube_key(cube: Cube) -> tuple:
    return tuple((atom, positive) for atom, positive in cube)


def _prime_implicants(num_atoms: int, minterms: Set[int]) -> Set[Tuple[int, int]]:
    """Quine-McCluskey merging; implicants are (value, dont_care_mask) pairs."""
    current = {(m, 0) for m in minterms}
    primes: Set[Tuple[int, int]] = set()
    while current:
        merged: Set[Tuple[int, int]] = set()
        used: Set[Tuple[int, int]] = set()
        for value, mask in current:
            for bit in range(num_atoms):
                flag = 1 << bit
                if mask & flag or value & flag:
                    continue
                partner = (value | flag, mask)
                if partner in current:
                    merged.add((value, mask | flag))
                    used.add((value, mask))
                    used.add(partner)
        primes |= current - used
        current = merged
    return primes


def _covers(implicant: Tuple[int, int], minterm: int) -> bool:
    value, mask = implicant
    return (minterm & ~mask) == value


def _implicant_cube(atoms: Sequence[str], implicant: Tuple[int, int]) -> Cube:
    value, mask = implicant
    return tuple(
        (atom, bool(value >> bit & 1))
        for bit, atom in enumerate(atoms)
        if not mask >> bit & 1
    )


def guard_from_minterms(atoms: Sequence[str], minterms: Iterable[int]) -> Guard:
    """
    Condense a set of valuation indices into a canonical guard.

    Bit i of a minterm is the truth of atoms[i]; atoms must be sorted.
    """
    atoms = list(atoms)
    remaining = set(minterms)
    if not remaining:
        return FALSE_GUARD
    if len(remaining) == 1 << len(atoms):
        return TRUE_GUARD

    primes = sorted(_prime_implicants(len(atoms), remaining),
                    key=lambda imp: _cube_key(_implicant_cube(atoms, imp)))
    chosen = []
    for minterm in sorted(remaining):
        covering = [imp for imp in primes if _covers(imp, minterm)]
        if len(covering) == 1 and covering[0] not in chosen:
            chosen.append(covering[0])
    for imp in chosen:
        remaining -= {m for m in remaining if _covers(imp, m)}

    # greedy cover of what the essential primes leave; ties go to fewer literals
    while remaining:
        best = max(
            primes,
            key=lambda imp: (sum(1 for m in remaining if _covers(imp, m)),
                             bin(imp[1]).count("1")),
        )
        chosen.append(best)
        remaining -= {m for m in remaining if _covers(best, m)}

    cubes = sorted({_implicant_cube(atoms, imp) for imp in chosen}, key=_cube_key)
    return Guard(tuple(cubes))


def guard_from_formula(formula: Formula, atoms: Optional[Sequence[str]] = None) -> Guard:
    """
    Canonical guard of a propositional formula.

    Raises:
        ValueError: If the formula contains a temporal operator
    """
    if any(isinstance(node, _TEMPORAL) for node in walk(formula)):
        raise ValueError(f"guard must be propositional: {formula}")
    atoms = sorted(set(atoms) if atoms is not None else set(atoms_of(formula)))
    symbols = np.arange(1 << len(atoms), dtype=np.int64)[:, None]
    truth = eval_batch(formula, atoms, symbols)
    return guard_from_minterms(atoms, np.flatnonzero(truth).tolist())


def parse_guard(text: str) -> Guard:
    """Parse guard text (the propositional fragment of the formula syntax)."""
    return guard_from_formula(parse_formula(text))


def minterms_of(guard: Guard, atoms: Sequence[str]) -> List[int]:
    """Indices of the valuations over atoms on which the guard holds."""
    result = []
    for index in range(1 << len(atoms)):
        valuation = {atom: bool(index >> bit & 1) for bit, atom in enumerate(atoms)}
        if guard.evaluate(valuation):
            result.append(index)
    return result


def valuations(atoms: Sequence[str]) -> Iterator[Dict[str, bool]]:
    """All valuations over atoms, in index order (bit i is atoms[i])."""
    for bits in product((False, True), repeat=len(atoms)):
        yield {atom: bit for atom, bit in zip(atoms, reversed(bits))}
