"""
Command line interface.

    ltlf-datagen compile  --formula "F r & ((p <-> X q) U r)" --atoms p,q,r
    ltlf-datagen compile  task1_short
    ltlf-datagen generate task5_short out/ --workers 4
    ltlf-datagen validate out/
    ltlf-datagen stats    out/
    ltlf-datagen probe    fig_example
    ltlf-datagen tasks

Exit codes: 0 success, 1 validation failure, 2 parse or compile error,
3 infeasible generation, 4 I/O or data file error.
"""

import functools
import json
import sys
import uuid
from pathlib import Path
from typing import Optional

import click

from ltlf_datagen import __version__
from ltlf_datagen.automata.compiler import compile_formula
from ltlf_datagen.automata.sfa import to_dot, to_json
from ltlf_datagen.config import get_logger, setup_logging
from ltlf_datagen.config.logging_config import clear_run_id, set_run_id
from ltlf_datagen.exceptions import (
    BindingError, DatasetFormatError, InfeasibleError, LtlfDatagenError,
)
from ltlf_datagen.logic.parser import parse_formula
from ltlf_datagen.probability.probe import load_probe, run_probe
from ltlf_datagen.services.generator import RUN_MANIFEST_FILE, generate_dataset
from ltlf_datagen.services.validator import stats as dataset_stats
from ltlf_datagen.services.validator import validate as validate_dataset
from ltlf_datagen.spec.bundled import bundled_tasks, resolve_spec_argument
from ltlf_datagen.spec.plan import resolve_task

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_IO = 4


def _fail(code: int, message: str, hint: Optional[str] = None):
    click.echo(f"Error: {message}", err=True)
    if hint:
        click.echo(f"Hint: {hint}", err=True)
    sys.exit(code)


def handle_errors(command):
    """Map package errors onto exit codes."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except InfeasibleError as e:
            logger.error("Generation infeasible: %s", e)
            _fail(EXIT_INFEASIBLE, str(e),
                  "widen the length range, lower the decay rates or check the balance mode")
        except (BindingError, DatasetFormatError, OSError) as e:
            logger.critical("I/O failure: %s", e, exc_info=True)
            _fail(EXIT_IO, str(e), "check the paths and manifest files")
        except LtlfDatagenError as e:
            logger.error("Invalid input: %s", e)
            _fail(EXIT_PARSE, str(e))
        finally:
            clear_run_id()

    return wrapper


@click.group()
@click.version_option(__version__, prog_name="ltlf-datagen")
@click.option("--log-level", default=None,
              type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], case_sensitive=False),
              help="Log level (defaults to LOG_LEVEL, then INFO).")
@click.option("--log-dir", default=None, type=click.Path(file_okay=False),
              help="Also write rotating log files to this directory.")
def cli(log_level: Optional[str], log_dir: Optional[str]):
    """Generate relational-temporal benchmark datasets from LTLf specifications."""
    setup_logging("ltlf_datagen", log_dir=log_dir, log_level=log_level,
                  enable_file=log_dir is not None)


@cli.command("compile")
@click.argument("spec", required=False)
@click.option("--formula", default=None, help="Formula text, instead of a spec.")
@click.option("--atoms", default=None, help="Comma-separated atoms the formula may use.")
@click.option("--out", "out_dir", default=None, type=click.Path(file_okay=False),
              help="Write automaton.json and automaton.dot here.")
@handle_errors
def compile_command(spec: Optional[str], formula: Optional[str], atoms: Optional[str],
                    out_dir: Optional[str]):
    """Compile a spec's formula (or --formula) into a minimal automaton."""
    if (spec is None) == (formula is None):
        _fail(EXIT_PARSE, "give either a spec or --formula")
    if formula is not None:
        alphabet = [a.strip() for a in atoms.split(",") if a.strip()] if atoms else None
        parsed = parse_formula(formula, set(alphabet) if alphabet is not None else None)
        automaton = compile_formula(parsed, alphabet)
        name = "formula"
    else:
        plan = resolve_task(resolve_spec_argument(spec))
        automaton = compile_formula(plan.formula, plan.atoms)
        name = plan.spec.name

    click.echo(f"states: {automaton.num_states}")
    click.echo(f"accepting: {len(automaton.accepting)}")
    click.echo(f"transitions: {len(automaton.transitions)}")
    if out_dir is not None:
        target = Path(out_dir)
        target.mkdir(parents=True, exist_ok=True)
        (target / "automaton.json").write_text(to_json(automaton), encoding="utf-8")
        (target / "automaton.dot").write_text(to_dot(automaton, name), encoding="utf-8")
        click.echo(f"written: {target}")


@cli.command("generate")
@click.argument("spec")
@click.argument("out_dir", type=click.Path(file_okay=False))
@click.option("--workers", default=None, type=click.IntRange(min=1), help="Worker threads.")
@click.option("--seed-override", default=None, type=click.IntRange(min=0), help="Seed to use instead of the spec's.")
@click.option("--synthetic", is_flag=True, help="Bind labels only, ignoring image manifests.")
@handle_errors
def generate_command(spec: str, out_dir: str, workers: Optional[int], seed_override: Optional[int],
                     synthetic: bool):
    """Generate, emit and validate the dataset of SPEC (a file or a bundled task name)."""
    set_run_id(uuid.uuid4().hex[:8])
    task = resolve_spec_argument(spec)
    result = generate_dataset(task, out_dir, workers=workers, seed=seed_override, synthetic=synthetic)
    run_manifest = result.run_manifest()
    (Path(out_dir) / RUN_MANIFEST_FILE).write_text(
        json.dumps(run_manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    click.echo(f"task: {task.name}")
    click.echo(f"states: {result.automaton.num_states}")
    click.echo(f"files: {len(result.manifest['files'])}")
    click.echo(f"seconds: {run_manifest['wall_clock_seconds']}")
    if not result.report.ok:
        for violation in result.report.violations:
            click.echo(str(violation), err=True)
        _fail(EXIT_VALIDATION, f"{len(result.report.violations)} validation violation(s)")
    click.echo("valid: yes")


@cli.command("validate")
@click.argument("out_dir", type=click.Path(exists=True, file_okay=False))
@click.option("--json", "as_json", is_flag=True, help="Print the report as JSON.")
@handle_errors
def validate_command(out_dir: str, as_json: bool):
    """Re-derive every annotation of a dataset and report mismatches."""
    report = validate_dataset(out_dir)
    if as_json:
        click.echo(json.dumps(report.to_dict(), indent=2))
    else:
        for violation in report.violations:
            click.echo(str(violation))
        click.echo(f"checked: {report.checked}")
        click.echo(f"violations: {len(report.violations)}")
    if not report.ok:
        sys.exit(EXIT_VALIDATION)


@cli.command("stats")
@click.argument("out_dir", type=click.Path(exists=True, file_okay=False))
@handle_errors
def stats_command(out_dir: str):
    """Print label, length and truth statistics of a dataset as JSON."""
    click.echo(json.dumps(dataset_stats(out_dir).to_dict(), indent=2, sort_keys=True))


@cli.command("probe")
@click.argument("probe")
@click.option("--json", "as_json", is_flag=True, help="Print the report as JSON.")
@handle_errors
def probe_command(probe: str, as_json: bool):
    """Constraint and transition probabilities for PROBE (a file or a packaged probe name)."""
    report = run_probe(load_probe(probe))
    if as_json:
        click.echo(json.dumps(report.to_dict(), indent=2))
    else:
        click.echo(report.to_text(), nl=False)


@cli.command("tasks")
@handle_errors
def tasks_command():
    """List the bundled tasks."""
    for task in bundled_tasks():
        if task.is_sequential:
            shape = f"length [{task.length.min}, {task.length.max}]"
        else:
            shape = f"{task.episodes} episodes"
        click.echo(f"{task.name:<22}{task.mode:<13}{shape:<20}{task.formula}")


def main():
    cli(prog_name="ltlf-datagen")  # pylint: disable=no-value-for-parameter


if __name__ == "__main__":
    main()
