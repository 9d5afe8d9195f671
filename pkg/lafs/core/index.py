import logging
import time
from typing import Sequence, Union

from lafs.core.far import build_far
from lafs.core.fs import FindSmallerSolver, FsInstance
from lafs.core.mixins import QueryMixin, StatsMixin
from lafs.core.multi_level import build_multi
from lafs.core.tree import EulerTour, RootedTree, build_euler_tour
from lafs.core.two_level import build_two_level, choose_block_size
from lafs.core.types import BadDepthError, LocalKind, Strategy

logger = logging.getLogger(__name__)


def build_solver(
    inst: FsInstance,
    strategy: Union[Strategy, str],
    levels: int = 2,
    block_sizes: Sequence[int] = (),
) -> FindSmallerSolver:
    strategy = Strategy(strategy)
    if strategy == Strategy.BASIC:
        return build_far(inst)
    if strategy == Strategy.TWO:
        return build_two_level(inst, choose_block_size(inst.n), LocalKind.BASIC)
    if strategy == Strategy.TABLE:
        return build_two_level(inst, choose_block_size(inst.n), LocalKind.TABLE)
    if levels < 1:
        raise BadDepthError(f"Depth must be at least 1, got {levels}")
    return build_multi(inst, levels, block_sizes)


class LevelAncestorIndex(QueryMixin, StatsMixin):
    """
    Level ancestor queries over a rooted tree, answered through an FS solver on
    the level array of its Euler tour.

    ```python
    tree = parse_tree(Path("tree.txt").read_text("utf-8"))
    index = LevelAncestorIndex.build(tree, Strategy.TABLE)
    index.level_ancestor(v, 3)
    ```
    """

    tree: RootedTree
    euler: EulerTour
    solver: FindSmallerSolver
    strategy: Strategy
    levels: int
    build_seconds: float = 0.0

    def __init__(
        self,
        tree: RootedTree,
        euler: EulerTour,
        solver: FindSmallerSolver,
        strategy: Union[Strategy, str],
        levels: int = 2,
    ):
        self.tree = tree
        self.euler = euler
        self.solver = solver
        self.strategy = Strategy(strategy)
        self.levels = levels

    @staticmethod
    def build(
        tree: RootedTree,
        strategy: Union[Strategy, str] = Strategy.TWO,
        levels: int = 2,
        block_sizes: Sequence[int] = (),
    ) -> "LevelAncestorIndex":
        started = time.perf_counter()
        euler = build_euler_tour(tree)
        solver = build_solver(euler.instance(), strategy, levels, block_sizes)
        index = LevelAncestorIndex(tree, euler, solver, strategy, levels)
        index.build_seconds = time.perf_counter() - started
        logger.info(
            "Built %s index over %d nodes in %.4fs (%d table entries)",
            index.strategy.value,
            tree.node_count,
            index.build_seconds,
            solver.total_entries,
        )
        return index

    def __repr__(self):
        return (
            f"LevelAncestorIndex(nodes={self.tree.node_count}, "
            f"strategy={self.strategy.value}, solver={self.solver!r})"
        )
