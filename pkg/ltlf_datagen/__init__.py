"""
ltlf-datagen

Relational-temporal benchmark generator: compiles an LTLf formula over
finite-domain constraints into a symbolic automaton, samples annotated
sequences or curricula from it, and evaluates constraint probabilities.
"""

__version__ = "1.0.0"
