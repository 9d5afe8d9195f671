import logging
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from lafs.core.fs import fs_oracle_sweep
from lafs.core.index import LevelAncestorIndex, build_solver
from lafs.core.tree import (
    ancestor_oracle,
    build_euler_tour,
    level_ancestor,
    random_tree,
)
from lafs.core.types import ReadCounter, Strategy

logger = logging.getLogger(__name__)

Metric = Union[int, float, str]


@dataclass
class VerifyReport:
    strategy: Strategy
    n: int
    trees: int
    levels: int
    la_checked: int = 0
    fs_checked: int = 0
    mismatches: int = 0
    examples: List[str] = field(default_factory=list)

    def record(self, message: str):
        self.mismatches += 1
        if len(self.examples) < 5:
            self.examples.append(message)
        logger.warning("Mismatch (%s): %s", self.strategy.value, message)

    def lines(self) -> List[str]:
        lines = [
            f"[{self.strategy.value}]",
            f"strategy {self.strategy.value}",
            f"levels {self.levels}",
            f"n {self.n}",
            f"trees {self.trees}",
            f"la_checked {self.la_checked}",
            f"fs_checked {self.fs_checked}",
            f"mismatches {self.mismatches}",
        ]
        lines.extend(f"mismatch {example}" for example in self.examples)
        return lines


def verify(
    n: int, trees: int, strategies: Sequence[Strategy], levels: int, seed: int
) -> List[VerifyReport]:
    """
    Check every strategy on seeded random trees: all (v, i) level ancestor pairs
    against the parent walk, and the whole (i, x) grid of the Euler level array
    against a brute-force sweep.
    """
    rng = random.Random(seed)
    reports = [VerifyReport(s, n=n, trees=trees, levels=levels) for s in strategies]
    for tree_number in range(trees):
        tree = random_tree(n, rng)
        euler = build_euler_tour(tree)
        inst = euler.instance()
        top = max(inst.values)
        thresholds = range(inst.global_min - 1, top + 1)
        sweeps = {x: fs_oracle_sweep(inst, x) for x in thresholds}
        for report in reports:
            solver = build_solver(inst, report.strategy, levels)
            for v in range(tree.node_count):
                for i in range(euler.node_levels[v] + 1):
                    report.la_checked += 1
                    got = level_ancestor(solver, euler, v, i)
                    expected = ancestor_oracle(tree, v, i)
                    if got != expected:
                        report.record(
                            f"tree {tree_number}: LA({v}, {i}) = {got}, "
                            f"expected {expected}"
                        )
            for x, answers in sweeps.items():
                for i in range(1, inst.n + 1):
                    report.fs_checked += 1
                    got = solver.query(i, x)
                    if got != answers[i]:
                        report.record(
                            f"tree {tree_number}: FS({i}, {x}) = {got}, "
                            f"expected {answers[i]}"
                        )
    return reports


def random_queries(
    index: LevelAncestorIndex, count: int, rng: random.Random
) -> List[Tuple[int, int]]:
    node_levels = index.euler.node_levels
    queries = []
    for _ in range(count):
        v = rng.randrange(index.tree.node_count)
        queries.append((v, rng.randint(0, node_levels[v])))
    return queries


def _answer_all(
    index: LevelAncestorIndex, queries: Sequence[Tuple[int, int]]
) -> List[int]:
    return [index.level_ancestor(v, i) for v, i in queries]


def bench(
    n: int,
    strategy: Strategy,
    levels: int,
    queries: int,
    seed: int,
    threads: int = 1,
) -> Dict[str, Metric]:
    rng = random.Random(seed)
    tree = random_tree(n, rng)
    index = LevelAncestorIndex.build(tree, strategy, levels)
    batch = random_queries(index, queries, rng)

    started = time.perf_counter()
    answers = _answer_all(index, batch)
    elapsed = time.perf_counter() - started

    counter = ReadCounter()
    for v, i in batch:
        index.level_ancestor(v, i, counter)

    elements = index.solver.n
    metrics: Dict[str, Metric] = {
        "strategy": index.strategy.value,
        "levels": levels,
        "node_count": n,
        "elements": elements,
        "build_seconds": round(index.build_seconds, 6),
        "queries": queries,
        "queries_per_second": round(queries / elapsed, 1) if elapsed > 0 else 0.0,
        "entries_total": index.solver.total_entries,
        "entries_per_element": round(index.solver.total_entries / elements, 4),
        "reads_per_query_mean": round(counter.mean_reads, 4),
        "reads_per_query_max": counter.max_reads,
    }
    for name, bound in index.theoretical_bounds().items():
        metrics[f"bound.{name}"] = bound

    if threads > 1:
        metrics["threads"] = threads
        metrics["concurrent_identical"] = int(
            _concurrent_answers(index, batch, threads) == answers
        )
    return metrics


def _concurrent_answers(
    index: LevelAncestorIndex, batch: Sequence[Tuple[int, int]], threads: int
) -> List[int]:
    """Answer the batch from several readers sharing one immutable index."""
    size = -(-len(batch) // threads)
    chunks = [batch[start : start + size] for start in range(0, len(batch), size)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = pool.map(lambda chunk: _answer_all(index, chunk), chunks)
    return [answer for chunk in results for answer in chunk]


TIMING_METRICS = ("build_seconds", "queries_per_second")


def format_metrics(metrics: Dict[str, Metric]) -> List[str]:
    return [f"{name} {value}" for name, value in metrics.items()]


def parse_strategies(name: str) -> Optional[List[Strategy]]:
    if name == "all":
        return list(Strategy)
    try:
        return [Strategy(name)]
    except ValueError:
        return None
