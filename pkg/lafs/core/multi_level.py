import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

from lafs.core.far import BasicIndex, build_far
from lafs.core.fs import FsInstance
from lafs.core.two_level import (
    TwoLevelIndex,
    block_instance,
    build_global,
    choose_block_size,
)
from lafs.core.types import BadBlockSizeError, BadDepthError, LocalKind

logger = logging.getLogger(__name__)

# below CUTOFF_BLOCKS * k positions a level is answered by a plain FAR index
CUTOFF_BLOCKS = 4


@dataclass
class MultiIndex(TwoLevelIndex):
    """A two-level index whose blocks are themselves indexes of depth r - 1."""

    r: int = 2
    k_sequence: Tuple[int, ...] = ()


MultiSolver = Union[BasicIndex, MultiIndex]


def build_multi(
    inst: FsInstance, r: int, block_sizes: Sequence[int] = ()
) -> MultiSolver:
    """
    Depth-r index over inst. block_sizes fixes k level by level from the top;
    levels past its end pick k from their own length.
    """
    if r < 1:
        raise BadDepthError(f"Depth must be at least 1, got {r}")
    bad = [k for k in block_sizes if k < 2]
    if bad:
        raise BadBlockSizeError(f"Block sizes must be at least 2, got {bad[0]}")
    inst.require_step_bound(1)
    k = block_sizes[0] if block_sizes else choose_block_size(inst.n)
    if r == 1 or inst.n < CUTOFF_BLOCKS * k:
        return build_far(inst)

    decomp, global_far, near = build_global(inst, k)
    children = [None] + [
        build_multi(block_instance(inst, decomp, t), r - 1, block_sizes[1:])
        for t in range(1, decomp.block_count + 1)
    ]
    first = children[1]
    k_sequence = (k,) + (first.k_sequence if isinstance(first, MultiIndex) else ())
    index = MultiIndex(
        inst=inst,
        decomp=decomp,
        global_far=global_far,
        near=near,
        local_kind=LocalKind.BASIC,
        local_solvers=children,
        r=r,
        k_sequence=k_sequence,
    )
    logger.debug("Built %r with block sizes %s", index, k_sequence)
    return index


def query_multi(idx: MultiSolver, i: int, x: int) -> Optional[int]:
    return idx.query(i, x)


def iter_log(n: int, r: int) -> float:
    """
    r-fold iterated base-2 logarithm of n, for reporting.

    Once an intermediate value drops below 2 the result is clamped at 1.
    """
    if n < 2 or r < 1:
        raise ValueError(f"iter_log needs n >= 2 and r >= 1, got n={n}, r={r}")
    value = n
    for _ in range(r):
        if value < 2:
            return 1.0
        value = math.log2(value)
    return max(float(value), 1.0)
