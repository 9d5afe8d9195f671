import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

from lafs.core.fs import FindSmallerSolver, FsInstance, check_position, nearest_smallers
from lafs.core.types import ReadCounter
from lafs.core.utils import ceil_log2, floor_log2, largest_power_of_two_dividing

logger = logging.getLogger(__name__)


@dataclass
class BasicIndex(FindSmallerSolver):
    """
    FAR tables over an array whose adjacent values differ by at most one.

    ``far[i][j - 1]`` is the first position h > i with a[h] <= a[i] - j, or None
    when no position right of i gets that low. Position i stores
    min(3 * 2^r_i, a[i] - global_min) cells.
    """

    inst: FsInstance
    far: List[List[Optional[int]]]

    def cap(self, i: int) -> int:
        return len(self.far[i])

    def r(self, i: int) -> int:
        return alignment_exponent(i, self.inst.n)

    def table_sizes(self) -> Dict[str, int]:
        return {"far": sum(len(cells) for cells in self.far)}

    def query(
        self, i: int, x: int, counter: Optional[ReadCounter] = None
    ) -> Optional[int]:
        a = self.inst.a
        check_position(self.inst, i)
        if a[i] <= x:
            return i
        if x < self.inst.global_min:
            return None
        p = floor_log2(a[i] - x)
        i_1 = aligned_index(i, p)
        if counter is not None:
            counter.tally()
        return self.far[i_1][a[i_1] - x - 1]

    def __repr__(self):
        return f"BasicIndex(n={self.inst.n}, total_entries={self.total_entries})"


def alignment_exponent(i: int, n: int) -> int:
    """
    Largest r with 2^r dividing i - 1.

    Position 1 has i - 1 = 0, which every power divides; it gets
    ceil(log2(n + 1)) so its table covers any drop inside the array.
    """
    if i == 1:
        return ceil_log2(n + 1)
    return largest_power_of_two_dividing(i - 1)


def aligned_index(i: int, p: int) -> int:
    """Largest i_1 <= i with 2^p dividing i_1 - 1."""
    return (((i - 1) >> p) << p) + 1


def build_far(inst: FsInstance) -> BasicIndex:
    inst.require_step_bound(1)
    a = inst.a
    n = inst.n
    global_min = inst.global_min
    ns = nearest_smallers(inst)

    far: List[List[Optional[int]]] = [[]]
    for i in range(1, n + 1):
        cap = min(3 << alignment_exponent(i, n), a[i] - global_min)
        cells: List[Optional[int]] = []
        current = i
        while len(cells) < cap:
            q = ns[current]
            if q is None:
                cells.extend([None] * (cap - len(cells)))
                break
            # every threshold down to a[q] is first reached at q
            reach = min(a[i] - a[q], cap)
            cells.extend([q] * (reach - len(cells)))
            current = q
        far.append(cells)

    index = BasicIndex(inst=inst, far=far)
    logger.debug("Built %r", index)
    return index


def query_basic(idx: BasicIndex, i: int, x: int) -> Optional[int]:
    return idx.query(i, x)
