"""
Unit tests for LTLf to automaton compilation.
"""

import pytest
from hypothesis import given, settings, strategies as st

from ltlf_datagen.automata.compiler import compile_formula
from ltlf_datagen.automata.sfa import check_equiv, run
from ltlf_datagen.exceptions import StateLimitExceeded
from ltlf_datagen.logic.formula import (
    TRUE, FALSE, Atom, Not, Next, WeakNext, Globally, Finally, And, Or, Implies, Iff,
    Until, Release,
)
from ltlf_datagen.logic.parser import parse_formula
from ltlf_datagen.spec.bundled import find_bundled
from ltlf_datagen.spec.plan import resolve_task


ATOMS = ['p', 'q', 'r']
UNARY = (Not, Next, WeakNext, Globally, Finally)
BINARY = (And, Or, Implies, Iff, Until, Release)


def formulas(depth=4):
    """Random formulas over p, q, r with at most depth nested operators."""
    leaves = st.sampled_from([Atom(a) for a in ATOMS] + [TRUE, FALSE])
    if depth == 0:
        return leaves
    children = formulas(depth - 1)
    return st.one_of(
        leaves,
        st.sampled_from(UNARY).flatmap(lambda op: st.builds(op, children)),
        st.sampled_from(BINARY).flatmap(lambda op: st.builds(op, children, children)),
    )


def steps(*sets):
    """Build a p, q, r trace from strings of true atoms."""
    return [{a: a in s for a in 'pqr'} for s in sets]


class TestExampleAutomaton:
    """Tests for the automaton of the three-atom example formula."""

    @pytest.fixture
    def automaton(self, fig_formula_text):
        return compile_formula(parse_formula(fig_formula_text))

    def test_state_count(self, automaton):
        """Test that the minimal automaton has five states."""
        assert automaton.num_states == 5

    def test_single_absorbing_accepting_state(self, automaton):
        """Test that exactly one state accepts and it loops on true."""
        assert len(automaton.accepting) == 1
        (accepting,) = automaton.accepting
        assert automaton.is_sink(accepting)
        assert [t.guard.text for t in automaton.outgoing(accepting)] == ['true']

    def test_initial_guards(self, automaton):
        """Test the condensed guards leaving the initial state."""
        guards = sorted(t.guard.text for t in automaton.outgoing(automaton.initial))
        assert guards == ['!p & !r', 'p & !r', 'r']

    def test_runs(self, automaton):
        """Test accepted and rejected traces."""
        assert run(automaton, steps('p', 'q', 'r')).accepted
        assert not run(automaton, steps('p', '', 'r')).accepted
        assert len(run(automaton, steps('', '', '')).state_trace) == 4

    def test_equivalent_to_formula(self, automaton, fig_formula_text):
        """Test exhaustive agreement with the formula up to length 5."""
        assert check_equiv(automaton, parse_formula(fig_formula_text), 5)


class TestCompilation:
    """Tests for compile_formula on small formulas."""

    def test_true_has_one_state(self):
        """Test that true compiles to a single accepting state."""
        automaton = compile_formula(parse_formula('true'))
        assert automaton.num_states == 1
        assert automaton.accepting == frozenset({0})

    def test_atom(self):
        """Test that p compiles to start, accepting sink and rejecting sink."""
        automaton = compile_formula(parse_formula('p'))
        assert automaton.num_states == 3
        assert automaton.initial == 0
        assert run(automaton, [{'p': True}]).accepted
        assert not run(automaton, [{'p': False}, {'p': True}]).accepted

    def test_extra_atoms_widen_alphabet(self):
        """Test that unused atoms are part of the guard alphabet."""
        automaton = compile_formula(parse_formula('p'), ['q', 'p'])
        assert automaton.atoms == ('p', 'q')
        assert automaton.alphabet_size == 4
        assert automaton.num_states == 3

    def test_missing_atoms_rejected(self):
        """Test that an alphabet without the formula's atoms raises ValueError."""
        with pytest.raises(ValueError):
            compile_formula(parse_formula('p & q'), ['p'])

    def test_state_cap(self):
        """Test that exploration stops at the state cap."""
        with pytest.raises(StateLimitExceeded):
            compile_formula(parse_formula('F p & F q & F r'), max_states=2)

    def test_weak_next_at_end(self):
        """Test that WX accepts a trace ending right away."""
        automaton = compile_formula(parse_formula('G (p -> WX q)'))
        assert run(automaton, [{'p': True, 'q': False}]).accepted
        assert not run(automaton, [{'p': True, 'q': False}, {'p': False, 'q': False}]).accepted

    @pytest.mark.parametrize('text', [
        'p U q', 'p R q', 'G F p', 'F G p', 'X X p', 'WX WX p', '!(p U q) | G q',
        'G (p <-> X X q)', 'G (p <-> WX !q)', '!p & (!p U (p & WX G !p))',
    ])
    def test_equivalence_on_assorted_formulas(self, text):
        """Test exhaustive agreement with the formula for short traces."""
        formula = parse_formula(text)
        assert check_equiv(compile_formula(formula), formula, 6)

    @settings(max_examples=200, deadline=None)
    @given(formulas())
    def test_equivalence_on_random_formulas(self, formula):
        """Test exhaustive agreement with random formulas of depth at most 4 for traces up to 6."""
        assert check_equiv(compile_formula(formula, ATOMS), formula, 6)


class TestBundledTaskAutomata:
    """Tests for the automata of the bundled sequence tasks."""

    @pytest.mark.parametrize('task,states', [
        ('task1_short', 8), ('task2_short', 5), ('task3_short', 5),
        ('task4_short', 5), ('task5_short', 4), ('task6_short', 4),
    ])
    def test_state_counts(self, task, states):
        """Test the minimal state count of each task automaton."""
        plan = resolve_task(find_bundled(task))
        automaton = compile_formula(plan.formula, plan.atoms)
        assert automaton.num_states == states
        assert check_equiv(automaton, plan.formula, 4)

    def test_long_variant_shares_the_automaton(self):
        """Test that the short and long variants compile to the same automaton."""
        short = resolve_task(find_bundled('task3_short'))
        long = resolve_task(find_bundled('task3_long'))
        assert compile_formula(short.formula, short.atoms) == compile_formula(long.formula, long.atoms)


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
