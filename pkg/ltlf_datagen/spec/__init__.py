"""
Task specifications: models, JSON loading, stream resolution and bundled tasks.
"""

from .models import (
    TaskSpec, DomainDef, StreamMap, StreamBinding, BiasOptions, LengthRange,
    SEQUENTIAL, INCREMENTAL, BALANCED, ALL_POSITIVE, COVERAGE_OFF, COVERAGE_BEST_EFFORT,
)
from .loader import (
    load_spec, load_spec_file, dump_spec, spec_from_dict, spec_to_dict, parse_domains, parse_constraints,
)
from .plan import TaskPlan, resolve_task
from .bundled import (
    bundled_tasks, bundled_task_names, find_bundled, resolve_spec_argument,
    BUNDLED_DIR, PROBES_DIR,
)

__all__ = [
    'TaskSpec', 'DomainDef', 'StreamMap', 'StreamBinding', 'BiasOptions', 'LengthRange',
    'SEQUENTIAL', 'INCREMENTAL', 'BALANCED', 'ALL_POSITIVE', 'COVERAGE_OFF',
    'COVERAGE_BEST_EFFORT', 'load_spec', 'load_spec_file', 'dump_spec', 'spec_from_dict',
    'spec_to_dict', 'parse_domains', 'parse_constraints', 'TaskPlan', 'resolve_task',
    'bundled_tasks', 'bundled_task_names',
    'find_bundled', 'resolve_spec_argument', 'BUNDLED_DIR', 'PROBES_DIR',
]
