"""
``lafs`` command line: build level ancestor indexes from tree files, answer
query scripts against saved artifacts, and check or measure the strategies on
seeded random trees.

Defaults come from LAFS_* environment variables; see ``lafs.cli.config``.

Exit codes: 0 success, 1 I/O or data error, 2 usage or configuration error,
3 verification mismatches.
"""

import sys
from contextlib import contextmanager
from pathlib import Path
from typing import BinaryIO, Iterator, Optional

import typer

from lafs.cli.config import (
    EXIT_DATA_ERROR,
    EXIT_MISMATCH,
    EXIT_USAGE,
    Settings,
    load_settings,
)
from lafs.cli.harness import bench as run_bench
from lafs.cli.harness import format_metrics, parse_strategies
from lafs.cli.harness import verify as run_verify
from lafs.cli.scripts import ScriptQuery, iter_queries
from lafs.core.artifact import read_artifact, write_artifact
from lafs.core.index import LevelAncestorIndex
from lafs.core.logger import get_stream_logger
from lafs.core.tree import parse_tree
from lafs.core.types import (
    BaseLafsException,
    ConfigurationError,
    HopOutOfRangeError,
    NodeOutOfRangeError,
    PositionOutOfRangeError,
    QueryScriptError,
    Strategy,
)

app = typer.Typer(
    help="Constant-time level ancestor and Find-Smaller indexes.",
    add_completion=False,
    no_args_is_help=True,
)


@contextmanager
def _data_errors() -> Iterator[None]:
    try:
        yield
    except BaseLafsException as exception:
        typer.echo(f"error: {exception.message}", err=True)
        raise typer.Exit(EXIT_DATA_ERROR) from exception
    except UnicodeDecodeError as exception:
        typer.echo(
            f"error: invalid UTF-8 at byte {exception.start}: {exception.reason}",
            err=True,
        )
        raise typer.Exit(EXIT_DATA_ERROR) from exception
    except OSError as exception:
        typer.echo(f"error: {exception}", err=True)
        raise typer.Exit(EXIT_DATA_ERROR) from exception


def _strategies(value: str) -> str:
    if parse_strategies(value) is None:
        choices = ", ".join(s.value for s in Strategy)
        raise typer.BadParameter(f"expected one of {choices} or all, got {value!r}")
    return value


def _settings(ctx: typer.Context) -> Settings:
    return ctx.find_object(Settings) or load_settings()


@app.callback()
def main(
    ctx: typer.Context,
    log_level: Optional[str] = typer.Option(
        None, "--log-level", help="Logging level on stderr [env LAFS_LOG_LEVEL]."
    ),
):
    try:
        settings = load_settings()
    except ConfigurationError as exception:
        typer.echo(f"error: {exception.message}", err=True)
        raise typer.Exit(EXIT_USAGE) from exception
    ctx.obj = settings
    get_stream_logger((log_level or settings.log_level).upper(), sys.stderr)


@app.command()
def build(
    ctx: typer.Context,
    input_path: Path = typer.Option(..., "--input", "-i", help="Tree file."),
    out: Path = typer.Option(..., "--out", "-o", help="Artifact to write."),
    strategy: Optional[Strategy] = typer.Option(None, "--strategy", "-s"),
    levels: Optional[int] = typer.Option(None, "--levels", "-r", min=1),
):
    """Parse a tree file, build the chosen index and save it as an artifact."""
    settings = _settings(ctx)
    with _data_errors():
        tree = parse_tree(input_path.read_bytes())
        index = LevelAncestorIndex.build(
            tree, strategy or settings.strategy, levels or settings.levels
        )
        size = write_artifact(index, out)
    typer.echo(f"build_seconds {index.build_seconds:.6f}")
    typer.echo(f"artifact_bytes {size}")
    for name, entries in index.table_sizes().items():
        typer.echo(f"entries.{name} {entries}")
    typer.echo(f"entries.total {index.solver.total_entries}")


def _answer(index: LevelAncestorIndex, query: ScriptQuery) -> str:
    if query.kind == "LA":
        try:
            return str(index.level_ancestor(query.first, query.second))
        except NodeOutOfRangeError:
            return "ERR node"
        except HopOutOfRangeError:
            return "ERR hops"
    try:
        position = index.find_smaller(query.first, query.second)
    except PositionOutOfRangeError:
        return "ERR pos"
    return "NONE" if position is None else str(position)


@app.command()
def query(
    index_path: Path = typer.Option(..., "--index", help="Artifact written by build."),
    input_path: Optional[Path] = typer.Option(
        None, "--input", "-i", help="Query script; standard input when omitted."
    ),
):
    """Answer 'LA <node> <hops>' and 'FS <pos> <x>' lines, one output line each."""
    with _data_errors():
        index = read_artifact(index_path).index
        if input_path is None:
            _run_script(index, typer.get_binary_stream("stdin"))
        else:
            with input_path.open("rb") as script:
                _run_script(index, script)


def _run_script(index: LevelAncestorIndex, script: BinaryIO):
    try:
        for query_line in iter_queries(script):
            typer.echo(_answer(index, query_line))
    except QueryScriptError as exception:
        typer.echo(f"error: {exception.message}", err=True)
        raise typer.Exit(EXIT_DATA_ERROR) from exception


@app.command()
def verify(
    ctx: typer.Context,
    n: int = typer.Option(64, "--n", min=1, help="Nodes per random tree."),
    trees: int = typer.Option(100, "--trees", min=1),
    strategy: str = typer.Option(
        "all", "--strategy", "-s", callback=_strategies, help="A strategy or 'all'."
    ),
    levels: Optional[int] = typer.Option(None, "--levels", "-r", min=1),
    seed: Optional[int] = typer.Option(None, "--seed"),
):
    """Check every strategy against brute-force answers on seeded random trees."""
    settings = _settings(ctx)
    with _data_errors():
        reports = run_verify(
            n,
            trees,
            parse_strategies(strategy),
            levels or settings.levels,
            settings.seed if seed is None else seed,
        )
    for report in reports:
        for line in report.lines():
            typer.echo(line)
    mismatches = sum(report.mismatches for report in reports)
    typer.echo(f"total_mismatches {mismatches}")
    if mismatches:
        raise typer.Exit(EXIT_MISMATCH)


@app.command()
def bench(
    ctx: typer.Context,
    n: int = typer.Option(1 << 14, "--n", min=1, help="Nodes in the random tree."),
    strategy: Optional[Strategy] = typer.Option(None, "--strategy", "-s"),
    levels: Optional[int] = typer.Option(None, "--levels", "-r", min=1),
    queries: Optional[int] = typer.Option(None, "--queries", min=1),
    seed: Optional[int] = typer.Option(None, "--seed"),
    threads: int = typer.Option(1, "--threads", min=1, help="Concurrent readers."),
):
    """Time the build and a batch of random level ancestor queries."""
    settings = _settings(ctx)
    with _data_errors():
        metrics = run_bench(
            n,
            strategy or settings.strategy,
            levels or settings.levels,
            queries or settings.bench_queries,
            settings.seed if seed is None else seed,
            threads,
        )
    for line in format_metrics(metrics):
        typer.echo(line)
    if metrics.get("concurrent_identical") == 0:
        typer.echo(
            "error: concurrent readers disagree with the single-threaded run",
            err=True,
        )
        raise typer.Exit(EXIT_MISMATCH)


@app.command()
def stats(
    index_path: Path = typer.Option(..., "--index", help="Artifact written by build."),
):
    """Print table sizes, their theoretical bounds and iterated logarithms."""
    with _data_errors():
        artifact = read_artifact(index_path)
    typer.echo(f"version {artifact.header.version}")
    for name, value in artifact.index.stats().items():
        typer.echo(f"{name} {value}")
