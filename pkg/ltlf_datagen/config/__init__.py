"""
Configuration module for ltlf-datagen.

Contains logging configuration and environment-driven settings.
"""

from .logging_config import setup_logging, get_logger
from .settings import Settings, get_settings

__all__ = ['setup_logging', 'get_logger', 'Settings', 'get_settings']
