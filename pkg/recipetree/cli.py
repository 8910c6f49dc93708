import functools
import sys
from typing import Optional

import click

from recipetree.config import DemoConfig, ExecutorConfig, ExperimentConfig
from recipetree.constants import LOG_LEVEL
from recipetree.demo.pipeline import build_demo_experiment
from recipetree.errors import HashPrefixError, RecipeTreeError
from recipetree.store.experiment_store import ExperimentStore
from recipetree.utils.cli import ls_line, print_error, show_lines
from recipetree.utils.logging import setup_logging
from recipetree.utils.misc import load_config_file, resolve_hash_prefix

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]

experiment_path = click.argument("path", type=click.Path(file_okay=False))


def exits_on_error(command):
    """Report recipetree errors on stderr and exit with status 1."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except HashPrefixError as e:
            print_error(e, details=[candidate.hex for candidate in e.candidates])
        except (RecipeTreeError, OSError) as e:
            print_error(e)
        sys.exit(1)

    return wrapper


@click.group()
@click.option(
    "--log-level",
    type=click.Choice(LOG_LEVELS, case_sensitive=False),
    default=None,
    help=f"Logging level. Defaults to RECIPETREE_LOG_LEVEL or {LOG_LEVEL}.",
)
@click.pass_context
def cli(ctx, log_level: Optional[str]):
    """Run and inspect reproducible experiment trees."""
    ctx.ensure_object(dict)
    ctx.obj["log_level"] = log_level
    setup_logging(log_level or LOG_LEVEL)


@cli.command()
@experiment_path
@click.option("--workers", type=click.IntRange(min=1), default=None, help="Worker threads. 1 runs single-threaded.")
@click.option("--lr", "learning_rates", type=float, multiple=True, help="Learning rate of one branch. Repeatable.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="YAML or JSON config.")
@click.option("--progress", is_flag=True, help="Show a progress bar.")
@click.option("--verify-cache-hits", is_flag=True, help="Execute cached states again and compare their payloads.")
@click.pass_context
@exits_on_error
def demo(ctx, path, workers, learning_rates, config_path, progress, verify_cache_hits):
    """Build and run the train-then-prune demo in PATH."""
    config_data = load_config_file(config_path) if config_path else {}
    experiment_config = ExperimentConfig.from_config(config_data)
    if ctx.obj.get("log_level"):
        experiment_config.log_level = ctx.obj["log_level"]
    executor_config = experiment_config.executor
    if workers is not None:
        executor_config = ExecutorConfig.for_workers(
            workers, show_progress=executor_config.show_progress, verify_cache_hits=executor_config.verify_cache_hits
        )
    executor_config.show_progress = executor_config.show_progress or progress
    executor_config.verify_cache_hits = executor_config.verify_cache_hits or verify_cache_hits

    experiment = build_demo_experiment(
        path,
        config=DemoConfig.from_config(config_data.get("demo")),
        learning_rates=list(learning_rates) or None,
        experiment_config=experiment_config,
    )
    report = experiment.run(executor_config)
    click.echo(report.summary())
    if not report.ok:
        print_error("The run did not complete cleanly", details=[f"failed: {h}" for h in report.failed])
        sys.exit(1)


@cli.command()
@experiment_path
@exits_on_error
def ls(path):
    """List the complete states in PATH."""
    store = ExperimentStore.open(path)
    for state_hash in store.complete_hashes():
        try:
            descriptor = store.read_descriptor(state_hash)
        except Exception as e:
            print_error(f"Cannot read state {state_hash.short}: {e}")
            continue
        click.echo(ls_line(descriptor))


@cli.command(name="filter")
@experiment_path
@click.option("--tags", required=True, help="Comma-separated tags. States must carry all of them.")
@exits_on_error
def filter_states(path, tags):
    """Print the hashes of states carrying every tag in TAGS."""
    graph, _ = ExperimentStore.open(path).load_graph_slim()
    nodes = graph.nodes
    for tag in (tag.strip() for tag in tags.split(",")):
        if tag:
            nodes = nodes & graph.filter(tag)
    for state_hash in nodes:
        click.echo(state_hash.hex)


@cli.command()
@experiment_path
@click.argument("state")
@exits_on_error
def show(path, state):
    """Show one state by hash or unique prefix of at least 4 characters."""
    store = ExperimentStore.open(path)
    graph, _ = store.load_graph_slim()
    state_hash = resolve_hash_prefix(state, graph.nodes)
    lines = show_lines(graph.get(state_hash), store.payload_sizes(state_hash), graph.path_to_root(state_hash))
    click.echo("\n".join(lines))


@cli.command()
@experiment_path
@exits_on_error
def dot(path):
    """Write the experiment tree in Graphviz DOT format."""
    graph, report = ExperimentStore.open(path).load_graph_slim()
    violations = report.excluded + graph.check_invariants()
    if violations:
        print_error(f"{path} has {len(violations)} violations", details=violations)
        sys.exit(1)
    click.echo(graph.to_dot(), nl=False)


@cli.command()
@experiment_path
@exits_on_error
def verify(path):
    """Recompute every hash and check the tree invariants. Exits 1 on any violation."""
    graph, report = ExperimentStore.open(path).load_graph_slim()
    violations = report.excluded + graph.check_invariants()
    for violation in violations:
        click.echo(str(violation))
    if violations:
        sys.exit(1)
    click.echo(f"ok {len(graph)} states")


@cli.command()
@experiment_path
@exits_on_error
def digest(path):
    """Print the SHA-256 digest of the stored states."""
    click.echo(ExperimentStore.open(path).digest())
