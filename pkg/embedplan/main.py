import functools
import logging
import sys
import time
from dataclasses import replace
from pathlib import Path
from typing import Optional

import click

from .compare import compare_planners, write_comparison_csv
from .config import (
    get_config_dict,
    get_engine_settings,
    get_planner_settings,
    get_simulator_settings,
)
from .engine import MlpWeights, build_store, predict, read_queries, write_ctrs
from .engine.queries import format_ctr
from .exceptions import EmbedPlanException, InputError
from .loader import dump_spec, read_spec_file, spec_digest
from .planner import (
    build_plan_report,
    brute_force_plan,
    heuristic_plan,
    parse_plan_report,
    plan_from_report,
)
from .planner.report import CostReport
from .reports import RunReport
from .settings import Precision
from .simulator import PipelineConfig, simulate_pipeline, stages_to_csv
from .synthetic import PROFILES, generate_synthetic, get_profile
from .utils import configure_logging, read_json_file

logger = logging.getLogger(__name__)

SPEC_PATH = click.Path(exists=True, dir_okay=False, path_type=Path)
OUT_PATH = click.Path(dir_okay=False, writable=True, path_type=Path)
PRECISION = click.Choice(["16", "32"])


def handle_errors(command):
    """Report errors on stderr and exit with the matching code."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except EmbedPlanException as exc:
            click.echo(f"Error: {exc}", err=True)
            sys.exit(exc.exit_code)
        except OSError as exc:
            click.echo(f"Error: {exc}", err=True)
            sys.exit(InputError.exit_code)
        except (click.exceptions.Exit, click.ClickException):
            raise
        except Exception as exc:  # pylint: disable=broad-except
            logger.debug("Unexpected error.", exc_info=True)
            click.echo(f"Error: {exc}", err=True)
            sys.exit(EmbedPlanException.exit_code)

    return wrapper


def emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        out.write_text(text, encoding="utf-8")


@click.group()
@click.version_option(package_name="embedplan")
@click.option("--config", default=None, help="Path to custom configuration file.")
@click.pass_context
@handle_errors
def main(ctx, config=None):
    configure_logging()
    ctx.obj = get_config_dict(config)


@main.command()
@click.option("--profile", type=click.Choice(list(PROFILES)), default="default")
@click.option("--tables", type=click.IntRange(min=1), default=None)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=OUT_PATH, default=None)
@handle_errors
def gen(profile, tables, seed, out):
    """Generate a synthetic model spec."""
    size_profile = get_profile(profile)
    model = generate_synthetic(tables or size_profile.n_tables, size_profile, seed)
    emit(dump_spec(model, size_profile.hierarchy), out)


@main.command()
@click.argument("spec", type=SPEC_PATH)
@click.option("--no-cartesian", is_flag=True, help="Plan without Cartesian products.")
@click.option("--oracle", is_flag=True, help="Use the brute-force search.")
@click.option("--out", type=OUT_PATH, default=None)
@click.pass_obj
@handle_errors
def plan(config_dict, spec, no_cartesian, oracle, out):
    """Combine and place embedding tables."""
    settings = get_planner_settings(config_dict)
    logger.debug(settings.used_settings_message)
    if no_cartesian:
        settings = replace(settings, allow_cartesian=False)
    model, hierarchy = read_spec_file(spec)

    planner = brute_force_plan if oracle else heuristic_plan
    started = time.perf_counter()
    placement, estimate = planner(model, hierarchy, settings)
    planner_seconds = time.perf_counter() - started

    _, baseline = heuristic_plan(
        model, hierarchy, replace(settings, allow_cartesian=False)
    )
    simulator_settings = get_simulator_settings(config_dict)
    report = RunReport(
        spec_digest=spec_digest(model, hierarchy),
        planner="oracle" if oracle else "heuristic",
        allow_cartesian=settings.allow_cartesian,
        plan=build_plan_report(placement, estimate, baseline),
        cost=CostReport.from_estimate(estimate),
        simulation=simulate_pipeline(
            model,
            placement,
            hierarchy,
            PipelineConfig.from_settings(simulator_settings),
        ),
        planner_seconds=planner_seconds,
    )
    logger.info("Report digest %s.", report.digest())
    if out is None:
        click.echo(report.to_json(), nl=False)
    else:
        report.write(out)


@main.command()
@click.argument("spec", type=SPEC_PATH)
@click.argument("plan_path", metavar="PLAN", type=SPEC_PATH)
@click.option("--items", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--precision", type=PRECISION, default="32", show_default=True)
@click.option("--csv", "csv_path", type=OUT_PATH, default=None)
@click.pass_obj
@handle_errors
def simulate(config_dict, spec, plan_path, items, precision, csv_path):
    """Simulate the pipelined inference of a plan."""
    settings = get_simulator_settings(config_dict)
    logger.debug(settings.used_settings_message)
    model, hierarchy = read_spec_file(spec)
    placement = plan_from_report(
        parse_plan_report(read_json_file(plan_path)), model, hierarchy
    )
    report = simulate_pipeline(
        model,
        placement,
        hierarchy,
        PipelineConfig.from_settings(settings, Precision(int(precision))),
        items,
    )
    if csv_path is not None:
        stages_to_csv(report, csv_path)
    click.echo(report.model_dump_json(indent=2))


@main.command()
@click.argument("spec", type=SPEC_PATH)
@click.argument("plan_path", metavar="PLAN", type=SPEC_PATH)
@click.argument("queries", type=SPEC_PATH)
@click.option("--precision", type=PRECISION, default="32", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=OUT_PATH, default=None)
@click.pass_obj
@handle_errors
def run(config_dict, spec, plan_path, queries, precision, seed, out):
    """Look up queries and predict their click-through rates."""
    settings = get_engine_settings(config_dict)
    logger.debug(settings.used_settings_message)
    model, hierarchy = read_spec_file(spec)
    placement = plan_from_report(
        parse_plan_report(read_json_file(plan_path)), model, hierarchy
    )
    batch = read_queries(queries, model)
    store = build_store(model, placement, seed)
    weights = MlpWeights.random(
        model.concat_length, model.hidden_dims, settings.weights_seed
    )
    scores = predict(
        store,
        weights,
        batch,
        Precision(int(precision)),
        settings.hidden_activation,
        settings.parallel_lookups,
    )
    if out is None:
        click.echo("".join(f"{format_ctr(score)}\n" for score in scores), nl=False)
    else:
        write_ctrs(scores, out)


@main.command()
@click.option("--seeds", type=click.IntRange(min=1), default=100, show_default=True)
@click.option("--n-min", type=click.IntRange(min=1), default=4, show_default=True)
@click.option("--n-max", type=click.IntRange(min=1), default=8, show_default=True)
@click.option("--out", type=OUT_PATH, default=None)
@click.pass_obj
@handle_errors
def compare(config_dict, seeds, n_min, n_max, out):
    """Compare the heuristic against the brute-force search."""
    if n_min > n_max:
        raise click.BadParameter("--n-min must not exceed --n-max.")
    settings = get_planner_settings(config_dict)
    rows = compare_planners(range(seeds), range(n_min, n_max + 1), settings)
    if out is None:
        write_comparison_csv(rows, sys.stdout)
    else:
        with open(out, "w", encoding="utf-8", newline="") as csv_file:
            write_comparison_csv(rows, csv_file)
