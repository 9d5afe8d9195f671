from typing import Iterable, List, Optional, Tuple

from lafs.core.fs import FindSmallerSolver
from lafs.core.tree import EulerTour, RootedTree, level_ancestor
from lafs.core.types import HopOutOfRangeError, ReadCounter


class QueryMixin:
    tree: RootedTree
    euler: EulerTour
    solver: FindSmallerSolver

    def level_ancestor(
        self, v: int, i: int, counter: Optional[ReadCounter] = None
    ) -> int:
        if counter is None:
            return level_ancestor(self.solver, self.euler, v, i)
        reads_before = counter.reads
        answer = level_ancestor(self.solver, self.euler, v, i, counter)
        counter.close_query(reads_before)
        return answer

    def ancestor_at_level(self, v: int, d: int) -> int:
        """The ancestor of v sitting at level d (0 is the root's level)."""
        self.tree.check_node(v)
        level = self.euler.node_levels[v]
        if not 0 <= d <= level:
            raise HopOutOfRangeError(
                f"Node {v} at level {level} has no ancestor at level {d}"
            )
        return self.level_ancestor(v, level - d)

    def level_ancestors(self, pairs: Iterable[Tuple[int, int]]) -> List[int]:
        return [self.level_ancestor(v, i) for v, i in pairs]

    def find_smaller(
        self, i: int, x: int, counter: Optional[ReadCounter] = None
    ) -> Optional[int]:
        if counter is None:
            return self.solver.query(i, x)
        reads_before = counter.reads
        answer = self.solver.query(i, x, counter)
        counter.close_query(reads_before)
        return answer

