#!/usr/bin/env python3
"""
ltlf-datagen - Command Line Launcher

Runs the ltlf-datagen command line from a source checkout, with
troubleshooting messages for the usual setup problems.
"""

import logging
import os
import sys

# Add the project root to the Python path for module imports
project_root = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, project_root)


def main():
    """
    Launch the command line interface.

    Handles:
        - Keyboard interrupts (Ctrl+C) gracefully
        - Import errors with installation guidance
        - Other startup errors with debugging information
    """
    logger = logging.getLogger(__name__)

    try:
        from ltlf_datagen.cli import main as run_cli  # pylint: disable=import-outside-toplevel
        run_cli()
    except KeyboardInterrupt:
        logger.info("Run interrupted by user (Ctrl+C)")
        print("\nInterrupted.")
        sys.exit(130)
    except (ImportError, ModuleNotFoundError) as e:
        logger.critical("Failed to start - missing dependencies: %s", e, exc_info=True)
        print(f"Error starting ltlf-datagen: {e}")
        print("\nTroubleshooting:")
        print("1. Install the dependencies: pip install -r requirements.txt")
        print("2. Or install the package: pip install -e .")
        print("3. Check that you are running Python 3.9 or newer")
        sys.exit(4)
    except (OSError, RuntimeError) as e:
        logger.critical("Failed to start - system error: %s", e, exc_info=True)
        print(f"Error starting ltlf-datagen: {e}")
        print("\nTroubleshooting:")
        print("1. Check that the output directory is writable")
        print("2. Re-run with --log-level DEBUG for details")
        sys.exit(4)


if __name__ == "__main__":
    main()
