import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from lafs.core.types import (
    MAX_PATTERN_BLOCK_SIZE,
    BadBlockSizeError,
    BlockSizeTooLargeError,
    GapOutOfRangeError,
    PositionOutOfRangeError,
    ReadCounter,
    StepNotUnitError,
)

logger = logging.getLogger(__name__)


@dataclass
class PatternTable:
    """
    In-block FS answers for every +-1 block shape of size k.

    A pattern is a (k - 1)-bit code; bit b set means the step from offset b + 1
    to offset b + 2 goes up. Cells are laid out flat, indexed by
    (pattern, start, gap) with start in 1..k and gap in 1..k-1.
    """

    k: int
    answers: List[Optional[int]]

    @property
    def pattern_count(self) -> int:
        return 1 << (self.k - 1)

    @property
    def entry_count(self) -> int:
        return len(self.answers)

    def cell(self, pattern: int, start: int, gap: int) -> int:
        return (pattern * self.k + start - 1) * (self.k - 1) + gap - 1

    def query(
        self,
        pattern: int,
        start: int,
        gap: int,
        counter: Optional[ReadCounter] = None,
    ) -> Optional[int]:
        if not 1 <= gap <= self.k - 1:
            raise GapOutOfRangeError(f"Gap {gap} outside [1, {self.k - 1}]")
        if not 1 <= start <= self.k:
            raise PositionOutOfRangeError(f"Offset {start} outside [1, {self.k}]")
        if counter is not None:
            counter.tally()
        return self.answers[self.cell(pattern, start, gap)]

    def table_sizes(self) -> Dict[str, int]:
        return {"pattern_table": self.entry_count}

    def __repr__(self):
        return f"PatternTable(k={self.k}, entries={self.entry_count})"


def encode_pattern(block: Sequence[int], k: int) -> int:
    """Step code of a block; a short block is padded with rising steps."""
    if not 1 <= len(block) <= k:
        raise BadBlockSizeError(f"Block of length {len(block)} does not fit k={k}")
    code = 0
    for b in range(k - 1):
        if b + 1 < len(block):
            step = block[b + 1] - block[b]
            if step not in (-1, 1):
                raise StepNotUnitError(
                    f"Step {step} between offsets {b + 1} and {b + 2} is not +-1"
                )
            up = step == 1
        else:
            up = True
        if up:
            code |= 1 << b
    return code


def pattern_values(pattern: int, k: int) -> List[int]:
    """Values relative to offset 1 (index 0 is a pad)."""
    values = [0, 0]
    for b in range(k - 1):
        values.append(values[-1] + (1 if pattern >> b & 1 else -1))
    return values


def build_pattern_table(k: int) -> PatternTable:
    if k < 2:
        raise BadBlockSizeError(f"Pattern tables need k >= 2, got {k}")
    if k > MAX_PATTERN_BLOCK_SIZE:
        raise BlockSizeTooLargeError(
            f"Block size {k} exceeds the pattern table limit {MAX_PATTERN_BLOCK_SIZE}"
        )
    width = k - 1
    answers: List[Optional[int]] = [None] * ((1 << (k - 1)) * k * width)
    for pattern in range(1 << (k - 1)):
        values = pattern_values(pattern, k)
        for start in range(1, k + 1):
            base = (pattern * k + start - 1) * width
            lowest = values[start]
            for offset in range(start + 1, k + 1):
                if values[offset] < lowest:
                    # thresholds between the old and the new running minimum
                    first_gap = values[start] - lowest + 1
                    last_gap = values[start] - values[offset]
                    for gap in range(first_gap, last_gap + 1):
                        answers[base + gap - 1] = offset
                    lowest = values[offset]

    table = PatternTable(k=k, answers=answers)
    logger.debug("Built %r", table)
    return table


def query_block(
    tbl: PatternTable, pattern: int, start: int, gap: int
) -> Optional[int]:
    return tbl.query(pattern, start, gap)
