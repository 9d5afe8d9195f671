from dataclasses import dataclass
from enum import Enum, unique
from typing import List, Optional

POSITION = int  # 1-based index into an FS array
NODE = int  # 0-based node id

# Artifact format
ARTIFACT_MAGIC = b"LAFS"
ARTIFACT_VERSION = 1
NONE_SENTINEL = -1  # all-ones as a little-endian int64

# Pattern tables are enumerated eagerly: 2^(k-1) * k * (k-1) cells
MAX_PATTERN_BLOCK_SIZE = 16


@unique
class Strategy(str, Enum):
    BASIC = "basic"
    TWO = "two"
    TABLE = "table"
    MULTI = "multi"

    def serialize(self):
        return STRATEGY_CODES[self]

    @staticmethod
    def from_code(code: int) -> "Strategy":
        try:
            return CODE_STRATEGIES[code]
        except KeyError as exception:
            raise ArtifactFormatError(f"Unknown strategy tag {code}") from exception


STRATEGY_CODES = {
    Strategy.BASIC: 1,
    Strategy.TWO: 2,
    Strategy.TABLE: 3,
    Strategy.MULTI: 4,
}

CODE_STRATEGIES = {v: k for k, v in STRATEGY_CODES.items()}


@unique
class LocalKind(str, Enum):
    BASIC = "basic"
    TABLE = "table"


@dataclass
class ReadCounter:
    """
    Tally of precomputed-table reads for one query context.

    Hand one counter to each reader; the indexes themselves stay immutable.
    """

    reads: int = 0
    queries: int = 0
    max_reads: int = 0

    def tally(self, reads: int = 1):
        self.reads += reads

    def close_query(self, reads_before: int):
        self.queries += 1
        self.max_reads = max(self.max_reads, self.reads - reads_before)

    @property
    def mean_reads(self) -> float:
        return self.reads / self.queries if self.queries else 0.0


class BaseLafsException(Exception):
    message: str

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def serialize(self):
        return self.message


# Tree input


class TreeFormatError(BaseLafsException):
    pass


class MalformedLineError(TreeFormatError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class NodeIdOutOfRangeError(TreeFormatError):
    pass


class MultipleRootsError(TreeFormatError):
    pass


class RootMismatchError(TreeFormatError):
    pass


class CycleDetectedError(TreeFormatError):
    def __init__(self, cycle: List[int]):
        super().__init__(
            "Cycle detected among nodes " + ",".join(str(v) for v in sorted(cycle))
        )
        self.cycle = sorted(cycle)


class UnreachableNodeError(TreeFormatError):
    def __init__(self, node: int, cycle: List[int]):
        super().__init__(
            f"Node {node} never reaches the root "
            f"(its parent chain enters the cycle {sorted(cycle)})"
        )
        self.node = node
        self.cycle = sorted(cycle)


# Queries


class HopOutOfRangeError(BaseLafsException):
    pass


class NodeOutOfRangeError(BaseLafsException):
    pass


class PositionOutOfRangeError(BaseLafsException):
    pass


class GapOutOfRangeError(BaseLafsException):
    pass


# Construction


class EmptyArrayError(BaseLafsException):
    pass


class StepBoundViolatedError(BaseLafsException):
    pass


class StepNotUnitError(BaseLafsException):
    pass


class BadBlockSizeError(BaseLafsException):
    pass


class BlockSizeTooLargeError(BaseLafsException):
    pass


class BadDepthError(BaseLafsException):
    pass


# Configuration


class ConfigurationError(BaseLafsException):
    pass


# Artifacts and scripts


class ArtifactFormatError(BaseLafsException):
    pass


class ArtifactVersionError(ArtifactFormatError):
    pass


class QueryScriptError(BaseLafsException):
    line: Optional[int]

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
