"""
Test configuration and fixtures for ltlf-datagen tests.

This file provides common fixtures and configuration for pytest.
"""

import sys
import os

import pytest

# Add the project root to the Python path
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, project_root)

from ltlf_datagen.spec.loader import spec_from_dict  # noqa: E402  pylint: disable=wrong-import-position

FIG_FORMULA = "F r & ((p <-> X q) U r)"


@pytest.fixture
def fig_formula_text():
    """Provide the three-atom formula used across automaton tests."""
    return FIG_FORMULA


@pytest.fixture
def small_spec_data():
    """Provide a small sequential task over a synthetic digit domain."""
    return {
        "name": "small_task",
        "mode": "sequential",
        "seed": 7,
        "domains": [{"name": "digits", "labels": {"min": 0, "max": 4}}],
        "variables": {"A": "digits", "B": "digits"},
        "constraints": {
            "p": {"params": ["A", "B"], "expr": "A < B"},
            "q": {"params": ["A"], "expr": "A = 0"},
        },
        "formula": "G (p -> X q)",
        "streams": [],
        "length": {"min": 3, "max": 6},
        "counts": {"train": 12, "val": 4, "test": 4},
        "balance": "balanced",
        "bias": {"self_loop_decay": 0.0, "sink_decay": 0.0, "orphan_coverage": "off"},
        "orphan_positive_ratio": 1.0,
    }


@pytest.fixture
def small_spec(small_spec_data):
    """Provide the small sequential task as a TaskSpec."""
    return spec_from_dict(small_spec_data)
