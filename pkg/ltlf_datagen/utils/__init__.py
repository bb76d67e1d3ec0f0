"""
Utility modules for ltlf-datagen.

Contains seeded random stream derivation and content digests.
"""

from .rng import derive_rng, uniform_choice, shuffled, WALK, SOLUTION, IMAGE, CUBE
from .digest import sha256_bytes, sha256_text, sha256_file

__all__ = [
    'derive_rng', 'uniform_choice', 'shuffled', 'WALK', 'SOLUTION', 'IMAGE', 'CUBE',
    'sha256_bytes', 'sha256_text', 'sha256_file',
]
