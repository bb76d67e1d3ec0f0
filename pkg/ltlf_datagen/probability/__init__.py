"""
Probabilistic evaluation of constraints, guards and automata.
"""

from .probeval import (
    CategoricalDist, GuardAtomProbs, constraint_prob_exact, constraint_prob_topk,
    guard_prob_factored, guard_prob_joint, transition_matrix, accept_prob,
)
from .probe import Probe, ProbeReport, probe_from_dict, load_probe, run_probe

__all__ = [
    'CategoricalDist', 'GuardAtomProbs', 'constraint_prob_exact', 'constraint_prob_topk',
    'guard_prob_factored', 'guard_prob_joint', 'transition_matrix', 'accept_prob',
    'Probe', 'ProbeReport', 'probe_from_dict', 'load_probe', 'run_probe',
]
