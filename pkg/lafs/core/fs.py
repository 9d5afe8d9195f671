from __future__ import annotations

import abc
import logging
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from lafs.core.types import (
    EmptyArrayError,
    PositionOutOfRangeError,
    ReadCounter,
    StepBoundViolatedError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FsInstance:
    """
    An FS array with 1-based positions.

    ``a[0]`` is an unused pad so that ``a[i]`` is the i-th value.
    """

    a: Tuple[Optional[int], ...]
    step_bound: int
    global_min: int

    @property
    def n(self) -> int:
        return len(self.a) - 1

    @property
    def values(self) -> Tuple[int, ...]:
        return self.a[1:]

    def require_step_bound(self, bound: int = 1):
        if self.step_bound > bound:
            raise StepBoundViolatedError(
                f"Adjacent values differ by up to {self.step_bound}, "
                f"at most {bound} is supported"
            )

    def __repr__(self):
        return (
            f"FsInstance(n={self.n}, step_bound={self.step_bound}, "
            f"global_min={self.global_min})"
        )


class FindSmallerSolver(abc.ABC):
    """Anything answering FS(i, x) over a fixed array in 1-based positions."""

    inst: FsInstance

    @property
    def n(self) -> int:
        return self.inst.n

    @abc.abstractmethod
    def query(
        self, i: int, x: int, counter: Optional[ReadCounter] = None
    ) -> Optional[int]:
        ...

    @abc.abstractmethod
    def table_sizes(self) -> Dict[str, int]:
        ...

    @property
    def total_entries(self) -> int:
        return sum(self.table_sizes().values())


def make_instance(values: Sequence[int]) -> FsInstance:
    if len(values) == 0:
        raise EmptyArrayError("FS instances need at least one value")
    step_bound = 0
    for t in range(len(values) - 1):
        step = abs(values[t + 1] - values[t])
        if step > step_bound:
            step_bound = step
    return FsInstance(
        a=(None,) + tuple(values),
        step_bound=step_bound,
        global_min=min(values),
    )


def check_position(inst: FsInstance, i: int):
    if not 1 <= i <= inst.n:
        raise PositionOutOfRangeError(f"Position {i} outside [1, {inst.n}]")


def nearest_smallers(
    inst: FsInstance, stats: Optional[Dict[str, int]] = None
) -> List[Optional[int]]:
    """
    ns[i] = smallest j > i with a[j] < a[i], or None; ns[0] is a pad.

    One right-to-left pass over a stack of candidates. Every position is pushed
    once and popped at most once; ``stats`` receives the push/pop counts.
    """
    a = inst.a
    n = inst.n
    ns: List[Optional[int]] = [None] * (n + 1)
    stack: List[int] = []
    pushes = pops = 0
    for i in range(n, 0, -1):
        current = a[i]
        while stack and a[stack[-1]] >= current:
            stack.pop()
            pops += 1
        if stack:
            ns[i] = stack[-1]
        stack.append(i)
        pushes += 1
    if stats is not None:
        stats["pushes"] = pushes
        stats["pops"] = pops
    return ns


def fs_oracle(inst: FsInstance, i: int, x: int) -> Optional[int]:
    """Linear scan: smallest j >= i with a[j] <= x."""
    check_position(inst, i)
    a = inst.a
    for j in range(i, inst.n + 1):
        if a[j] <= x:
            return j
    return None


def fs_oracle_sweep(inst: FsInstance, x: int) -> List[Optional[int]]:
    """FS(i, x) for every i at once (index 0 is a pad), by a right-to-left sweep."""
    a = inst.a
    answers: List[Optional[int]] = [None] * (inst.n + 2)
    for i in range(inst.n, 0, -1):
        answers[i] = i if a[i] <= x else answers[i + 1]
    return answers[: inst.n + 1]


def random_walk(
    n: int, rng: random.Random, start: int = 0, unit: bool = True
) -> List[int]:
    """A walk of n values whose steps are +-1 (``unit``) or in {-1, 0, +1}."""
    steps = (-1, 1) if unit else (-1, 0, 1)
    values = [start]
    for _ in range(n - 1):
        values.append(values[-1] + rng.choice(steps))
    return values
