import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from lafs.core.block_table import PatternTable, build_pattern_table, encode_pattern
from lafs.core.far import BasicIndex, build_far
from lafs.core.fs import (
    FindSmallerSolver,
    FsInstance,
    check_position,
    make_instance,
    nearest_smallers,
)
from lafs.core.types import (
    BadBlockSizeError,
    LocalKind,
    PositionOutOfRangeError,
    ReadCounter,
)

logger = logging.getLogger(__name__)


@dataclass
class BlockDecomposition:
    """
    Blocks of k consecutive positions summarised by their minima.

    ``minima``, ``quotients`` and ``suffix_min`` are 1-based (index 0 is a pad);
    ``suffix_min[i]`` is the minimum of a[i..end of i's block].
    """

    k: int
    n: int
    minima: List[Optional[int]]
    quotients: List[Optional[int]]
    suffix_min: List[Optional[int]]

    @property
    def block_count(self) -> int:
        return len(self.minima) - 1

    def block_of(self, i: int) -> int:
        return (i - 1) // self.k + 1

    def offset_of(self, i: int) -> int:
        return (i - 1) % self.k + 1

    def block_start(self, t: int) -> int:
        return (t - 1) * self.k + 1

    def block_slice(self, t: int) -> slice:
        """Slice of ``inst.values`` (0-based) covering block t."""
        start = (t - 1) * self.k
        return slice(start, min(start + self.k, self.n))


@dataclass
class NearTable:
    """near[t][j - 1]: first u > t with M[u] <= M[t] - j, for j in 1..k."""

    k: int
    near: List[List[Optional[int]]]

    @property
    def entry_count(self) -> int:
        return sum(len(cells) for cells in self.near)


@dataclass
class TwoLevelIndex(FindSmallerSolver):
    """
    Global index over block minima plus one local solver per block.

    The global part is a FAR index over the quotient array B finished by a Near
    table over the minima M. Locals are either solvers (any FindSmallerSolver,
    1-based within the block) or pattern codes into one shared PatternTable.
    """

    inst: FsInstance
    decomp: BlockDecomposition
    global_far: BasicIndex
    near: NearTable
    local_kind: LocalKind
    local_solvers: List[Optional[FindSmallerSolver]] = field(default_factory=list)
    pattern_table: Optional[PatternTable] = None
    patterns: List[int] = field(default_factory=list)

    @property
    def k(self) -> int:
        return self.decomp.k

    def table_sizes(self) -> Dict[str, int]:
        sizes = {
            "global_far": self.global_far.total_entries,
            "near": self.near.entry_count,
            "minima": self.decomp.block_count,
            "suffix_min": self.decomp.n,
        }
        if self.local_kind == LocalKind.TABLE:
            sizes["pattern_table"] = self.pattern_table.entry_count
            sizes["patterns"] = len(self.patterns) - 1
        else:
            sizes["locals"] = sum(
                solver.total_entries for solver in self.local_solvers[1:]
            )
        return sizes

    def query_global(
        self, t: int, x: int, counter: Optional[ReadCounter] = None
    ) -> Optional[int]:
        """Smallest block u >= t whose minimum is <= x."""
        minima = self.decomp.minima
        if not 1 <= t < len(minima):
            raise PositionOutOfRangeError(
                f"Block {t} outside [1, {self.decomp.block_count}]"
            )
        if counter is not None:
            counter.tally()
        if minima[t] <= x:
            return t
        if x < self.inst.global_min:
            return None
        near = self.near.near
        k = self.decomp.k
        d = minima[t] - x
        if d <= k:
            if counter is not None:
                counter.tally()
            return near[t][d - 1]
        # B never passes the answer: M[u] <= x implies B[u] <= x // k.
        # B[q] <= x // k also gives M[q] - x <= k - 1, inside the Near row.
        q = self.global_far.query(t, x // k, counter)
        if q is None:
            return None
        if counter is not None:
            counter.tally()
        if minima[q] <= x:
            return q
        if counter is not None:
            counter.tally()
        return near[q][minima[q] - x - 1]

    def query_local(
        self, t: int, start: int, x: int, counter: Optional[ReadCounter] = None
    ) -> Optional[int]:
        """FS inside block t from offset ``start``; returns a global position."""
        base = self.decomp.block_start(t) - 1
        if self.local_kind == LocalKind.TABLE:
            gap = self.inst.a[base + start] - x
            if gap <= 0:
                return base + start
            offset = self.pattern_table.query(self.patterns[t], start, gap, counter)
        else:
            offset = self.local_solvers[t].query(start, x, counter)
        return None if offset is None else base + offset

    def query(
        self, i: int, x: int, counter: Optional[ReadCounter] = None
    ) -> Optional[int]:
        check_position(self.inst, i)
        if self.inst.a[i] <= x:
            return i
        decomp = self.decomp
        t = decomp.block_of(i)
        if counter is not None:
            counter.tally()
        if decomp.suffix_min[i] <= x:
            return self.query_local(t, decomp.offset_of(i), x, counter)
        if t == decomp.block_count:
            return None
        target = self.query_global(t + 1, x, counter)
        if target is None:
            return None
        return self.query_local(target, 1, x, counter)

    def __repr__(self):
        return (
            f"{type(self).__name__}(n={self.inst.n}, k={self.k}, "
            f"blocks={self.decomp.block_count}, local_kind={self.local_kind.value}, "
            f"total_entries={self.total_entries})"
        )


def choose_block_size(n: int) -> int:
    """Largest power of two not above max(2, log2(n) / 4)."""
    bound = max(2, (n.bit_length() - 1) // 4)
    return 1 << (bound.bit_length() - 1)


def decompose(inst: FsInstance, k: int) -> BlockDecomposition:
    if k < 2:
        raise BadBlockSizeError(f"Block size must be at least 2, got {k}")
    inst.require_step_bound(1)
    a = inst.a
    n = inst.n
    minima: List[Optional[int]] = [None]
    suffix_min: List[Optional[int]] = [None] * (n + 1)
    for start in range(1, n + 1, k):
        end = min(start + k - 1, n)
        running = a[end]
        for i in range(end, start - 1, -1):
            if a[i] < running:
                running = a[i]
            suffix_min[i] = running
        minima.append(running)
    quotients: List[Optional[int]] = [None] + [m // k for m in minima[1:]]
    return BlockDecomposition(
        k=k, n=n, minima=minima, quotients=quotients, suffix_min=suffix_min
    )


def build_near(minima: Sequence[Optional[int]], k: int) -> NearTable:
    """Near cells over 1-based minima, filled along nearest-smaller chains."""
    inst = make_instance(minima[1:])
    ns = nearest_smallers(inst)
    near: List[List[Optional[int]]] = [[]]
    for t in range(1, inst.n + 1):
        cells: List[Optional[int]] = []
        current = t
        while len(cells) < k:
            q = ns[current]
            if q is None:
                cells.extend([None] * (k - len(cells)))
                break
            reach = min(minima[t] - minima[q], k)
            cells.extend([q] * (reach - len(cells)))
            current = q
        near.append(cells)
    return NearTable(k=k, near=near)


def build_global(
    inst: FsInstance, k: int
) -> Tuple[BlockDecomposition, BasicIndex, NearTable]:
    """Decomposition, quotient FAR index and Near table of a multi-block index."""
    decomp = decompose(inst, k)
    global_far = build_far(make_instance(decomp.quotients[1:]))
    near = build_near(decomp.minima, k)
    return decomp, global_far, near


def block_instance(inst: FsInstance, decomp: BlockDecomposition, t: int) -> FsInstance:
    return make_instance(inst.values[decomp.block_slice(t)])


def build_two_level(
    inst: FsInstance, k: int, local_kind: LocalKind = LocalKind.BASIC
) -> TwoLevelIndex:
    decomp, global_far, near = build_global(inst, k)
    index = TwoLevelIndex(
        inst=inst,
        decomp=decomp,
        global_far=global_far,
        near=near,
        local_kind=LocalKind(local_kind),
    )
    if index.local_kind == LocalKind.TABLE:
        index.pattern_table = build_pattern_table(k)
        index.patterns = [0] + [
            encode_pattern(inst.values[decomp.block_slice(t)], k)
            for t in range(1, decomp.block_count + 1)
        ]
    else:
        index.local_solvers = [None] + [
            build_far(block_instance(inst, decomp, t))
            for t in range(1, decomp.block_count + 1)
        ]
    logger.debug("Built %r", index)
    return index


def query_global(idx: TwoLevelIndex, t: int, x: int) -> Optional[int]:
    return idx.query_global(t, x)


def query_two_level(idx: TwoLevelIndex, i: int, x: int) -> Optional[int]:
    return idx.query(i, x)
