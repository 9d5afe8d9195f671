# pylint: disable=redefined-outer-name

import pytest
from typer.testing import CliRunner

from lafs.cli.app import app
from lafs.cli.config import EXIT_DATA_ERROR, EXIT_MISMATCH, EXIT_USAGE
from lafs.cli.harness import TIMING_METRICS

runner = CliRunner()

SCRIPT = """# sample tree
LA 2 1

LA 0 0
FS 3 0
LA 2 5
LA 9 0
FS 12 0
FS 1 -1
"""
SCRIPT_ANSWERS = ["1", "0", "7", "ERR hops", "ERR node", "ERR pos", "NONE"]


def metric_lines(output: str):
    return [
        line for line in output.splitlines() if line.split(" ")[0] not in TIMING_METRICS
    ]


def build_args(tree_file, out, *extra):
    return ["build", "--input", str(tree_file), "--out", str(out), *extra]


@pytest.fixture
def artifact_path(tree_file, tmp_path):
    def _build(strategy="two", levels="2"):
        out = tmp_path / f"{strategy}-{levels}.lafs"
        result = runner.invoke(
            app,
            build_args(tree_file, out, "--strategy", strategy, "--levels", levels),
        )
        assert result.exit_code == 0, result.stdout
        return out

    return _build


def test_build_basic(tree_file, tmp_path):
    out = tmp_path / "index.lafs"
    result = runner.invoke(app, build_args(tree_file, out, "--strategy", "basic"))
    assert result.exit_code == 0
    assert out.read_bytes()[:4] == b"LAFS"
    assert "entries.far 8" in result.stdout
    assert "build_seconds" in result.stdout


def test_build_zero_levels_is_usage_error(tree_file, tmp_path):
    result = runner.invoke(
        app,
        build_args(tree_file, tmp_path / "x", "--strategy", "multi", "--levels", "0"),
    )
    assert result.exit_code == EXIT_USAGE


def test_build_unknown_strategy(tree_file, tmp_path):
    result = runner.invoke(
        app, build_args(tree_file, tmp_path / "x", "--strategy", "quad")
    )
    assert result.exit_code == EXIT_USAGE


def test_build_unreadable_input(tmp_path):
    result = runner.invoke(
        app, build_args(tmp_path / "missing.txt", tmp_path / "x")
    )
    assert result.exit_code == EXIT_DATA_ERROR
    assert "error:" in result.output


def test_build_invalid_tree(tmp_path):
    tree = tmp_path / "cycle.txt"
    tree.write_text("3 0\n-1 2 1\n", "utf-8")
    result = runner.invoke(app, build_args(tree, tmp_path / "x"))
    assert result.exit_code == EXIT_DATA_ERROR
    assert "Cycle detected among nodes 1,2" in result.output


def test_build_rejects_invalid_utf8(tmp_path):
    tree = tmp_path / "latin1.txt"
    tree.write_bytes(b"2 0\n-1 \xff0\n")
    out = tmp_path / "x"
    result = runner.invoke(app, build_args(tree, out))
    assert result.exit_code == EXIT_DATA_ERROR
    assert "error: line 2: invalid UTF-8 byte 0xff" in result.output
    assert "Traceback" not in result.output
    assert not out.exists()


def test_build_uses_strategy_from_environment(tree_file, tmp_path):
    result = runner.invoke(
        app, build_args(tree_file, tmp_path / "x"), env={"LAFS_STRATEGY": "basic"}
    )
    assert result.exit_code == 0
    assert "entries.far 8" in result.stdout


@pytest.mark.parametrize(
    "name, value",
    [("LAFS_STRATEGY", "quad"), ("LAFS_LEVELS", "two"), ("LAFS_LOG_LEVEL", "LOUD")],
)
def test_bad_environment_is_usage_error(tree_file, tmp_path, name, value):
    result = runner.invoke(
        app, build_args(tree_file, tmp_path / "x"), env={name: value}
    )
    assert result.exit_code == EXIT_USAGE
    assert f"error: {name}" in result.output
    assert "Traceback" not in result.output


@pytest.mark.parametrize(
    "strategy, levels",
    [("basic", "1"), ("two", "2"), ("table", "2"), ("multi", "3")],
)
def test_query_script(artifact_path, tmp_path, strategy, levels):
    script = tmp_path / "queries.txt"
    script.write_text(SCRIPT, "utf-8")
    index = artifact_path(strategy, levels)
    result = runner.invoke(
        app, ["query", "--index", str(index), "--input", str(script)]
    )
    assert result.exit_code == 0
    assert result.stdout.splitlines() == SCRIPT_ANSWERS


def test_query_from_stdin(artifact_path):
    result = runner.invoke(
        app, ["query", "--index", str(artifact_path())], input="LA 2 1\nFS 3 0\n"
    )
    assert result.exit_code == 0
    assert result.stdout.splitlines()[:2] == ["1", "7"]


def test_query_stops_at_parse_error(artifact_path):
    result = runner.invoke(
        app,
        ["query", "--index", str(artifact_path())],
        input="LA 2 1\nLA two 1\nLA 0 0\n",
    )
    assert result.exit_code == EXIT_DATA_ERROR
    lines = result.output.splitlines()
    assert lines[0] == "1"
    assert "0" not in lines
    assert "line 2" in result.output


@pytest.mark.parametrize("from_stdin", [False, True])
def test_query_stops_at_invalid_utf8(artifact_path, tmp_path, from_stdin):
    data = b"LA 2 1\nFS 3 \xe9\nLA 0 0\n"
    args = ["query", "--index", str(artifact_path())]
    if from_stdin:
        result = runner.invoke(app, args, input=data)
    else:
        script = tmp_path / "queries.txt"
        script.write_bytes(data)
        result = runner.invoke(app, args + ["--input", str(script)])
    assert result.exit_code == EXIT_DATA_ERROR
    assert result.output.splitlines()[0] == "1"
    assert "error: line 2: invalid UTF-8 byte 0xe9" in result.output
    assert "Traceback" not in result.output


def test_query_missing_index(tmp_path):
    result = runner.invoke(
        app, ["query", "--index", str(tmp_path / "none.lafs")], input="LA 0 0\n"
    )
    assert result.exit_code == EXIT_DATA_ERROR


def test_stats_basic(artifact_path):
    result = runner.invoke(app, ["stats", "--index", str(artifact_path("basic", "1"))])
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert "n 9" in lines
    assert "strategy basic" in lines
    assert "entries.far 8" in lines
    assert "entries.total 8" in lines
    assert any(line.startswith("iter_log.2 ") for line in lines)


def test_stats_two_level_near_bound(artifact_path):
    result = runner.invoke(app, ["stats", "--index", str(artifact_path("two", "2"))])
    assert result.exit_code == 0
    values = dict(
        line.split(" ", 1) for line in result.stdout.splitlines() if " " in line
    )
    assert int(values["entries.near"]) <= int(values["n"]) + int(values["k"])


def test_stats_corrupted_magic(artifact_path):
    path = artifact_path()
    data = path.read_bytes()
    path.write_bytes(b"JUNK" + data[4:])
    result = runner.invoke(app, ["stats", "--index", str(path)])
    assert result.exit_code == EXIT_DATA_ERROR


def test_verify_all_strategies():
    result = runner.invoke(
        app, ["verify", "--n", "24", "--trees", "5", "--strategy", "all", "--seed", "7"]
    )
    assert result.exit_code == 0
    for strategy in ("basic", "two", "table", "multi"):
        assert f"[{strategy}]" in result.stdout
    assert "total_mismatches 0" in result.stdout


def test_verify_is_deterministic():
    args = ["verify", "--n", "16", "--trees", "4", "--seed", "3", "-s", "table"]
    assert runner.invoke(app, args).stdout == runner.invoke(app, args).stdout


def test_verify_reports_mismatches(mocker):
    mocker.patch("lafs.cli.harness.ancestor_oracle", return_value=-1)
    result = runner.invoke(
        app, ["verify", "--n", "8", "--trees", "1", "--strategy", "basic"]
    )
    assert result.exit_code == EXIT_MISMATCH
    assert "mismatches 0" not in result.stdout


def test_verify_bad_strategy():
    result = runner.invoke(app, ["verify", "--strategy", "quad"])
    assert result.exit_code == EXIT_USAGE


def test_bench_basic():
    result = runner.invoke(
        app,
        ["bench", "--n", "300", "--queries", "400", "-s", "basic", "--seed", "1"],
    )
    assert result.exit_code == 0
    values = dict(line.split(" ", 1) for line in result.stdout.splitlines())
    assert int(values["entries_total"]) <= int(values["bound.far"])
    assert int(values["reads_per_query_max"]) <= 2
    assert float(values["queries_per_second"]) > 0


def test_bench_is_deterministic_apart_from_timings():
    args = ["bench", "--n", "200", "--queries", "300", "--seed", "5", "-s", "table"]
    first = runner.invoke(app, args)
    second = runner.invoke(app, args)
    assert metric_lines(first.stdout) == metric_lines(second.stdout)


def test_bench_concurrent_readers():
    result = runner.invoke(
        app,
        [
            "bench",
            "--n",
            "200",
            "--queries",
            "300",
            "--strategy",
            "multi",
            "--levels",
            "3",
            "--threads",
            "4",
        ],
    )
    assert result.exit_code == 0
    assert "concurrent_identical 1" in result.stdout.splitlines()
