from typing import Dict, Union

from lafs.core.far import BasicIndex
from lafs.core.fs import FindSmallerSolver
from lafs.core.multi_level import MultiIndex, iter_log
from lafs.core.tree import RootedTree
from lafs.core.two_level import TwoLevelIndex
from lafs.core.types import LocalKind, Strategy
from lafs.core.utils import entries_bound_basic


class StatsMixin:
    tree: RootedTree
    solver: FindSmallerSolver
    strategy: Strategy
    levels: int

    def table_sizes(self) -> Dict[str, int]:
        return self.solver.table_sizes()

    def theoretical_bounds(self) -> Dict[str, int]:
        """Upper bounds on the measured table sizes."""
        solver = self.solver
        n = solver.n
        if isinstance(solver, BasicIndex):
            return {"far": entries_bound_basic(n)}
        if isinstance(solver, TwoLevelIndex):
            k = solver.k
            block_count = solver.decomp.block_count
            bounds = {
                "global_far": entries_bound_basic(block_count),
                "near": n + k,
            }
            if solver.local_kind == LocalKind.TABLE:
                bounds["pattern_table"] = (1 << (k - 1)) * k * (k - 1)
            elif not isinstance(solver, MultiIndex):
                bounds["locals"] = block_count * entries_bound_basic(k)
            return bounds
        return {}

    def stats(self) -> Dict[str, Union[int, float, str]]:
        n = self.solver.n
        report: Dict[str, Union[int, float, str]] = {
            "n": n,
            "node_count": self.tree.node_count,
            "strategy": self.strategy.value,
        }
        if isinstance(self.solver, TwoLevelIndex):
            report["k"] = self.solver.k
        if isinstance(self.solver, MultiIndex):
            report["r"] = self.solver.r
            report["k_sequence"] = ",".join(str(k) for k in self.solver.k_sequence)
        for name, size in self.table_sizes().items():
            report[f"entries.{name}"] = size
        report["entries.total"] = self.solver.total_entries
        for name, bound in self.theoretical_bounds().items():
            report[f"bound.{name}"] = bound
        report["entries_per_element"] = round(self.solver.total_entries / n, 4)
        if n >= 2:
            for r in (1, 2, 3):
                report[f"iter_log.{r}"] = round(iter_log(n, r), 4)
        return report
