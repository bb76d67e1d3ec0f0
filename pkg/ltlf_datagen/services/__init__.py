"""
Services for ltlf-datagen.

Walk and curriculum sampling, image binding, emission, validation and the
end-to-end generation pipeline.
"""

from .sampler import (
    WalkResult, SymbolicSequence, apply_bias, sample_walk, sample_sequential_dataset,
    realize_sequences,
)
from .curriculum import Curriculum, Episode, sample_curriculum, sample_episode
from .binding import DomainBinding, SequenceRecord, EpisodeRecord, bind, bind_sequences, bind_curriculum
from .emitter import emit
from .validator import ValidationReport, StatsReport, validate, stats
from .generator import GenerationResult, generate_dataset

__all__ = [
    'WalkResult', 'SymbolicSequence', 'apply_bias', 'sample_walk', 'sample_sequential_dataset',
    'realize_sequences', 'Curriculum', 'Episode', 'sample_curriculum', 'sample_episode',
    'DomainBinding', 'SequenceRecord', 'EpisodeRecord', 'bind', 'bind_sequences',
    'bind_curriculum', 'emit', 'ValidationReport', 'StatsReport', 'validate', 'stats',
    'GenerationResult', 'generate_dataset',
]
