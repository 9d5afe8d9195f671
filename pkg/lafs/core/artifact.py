"""
Binary index artifacts.

Layout: the magic bytes ``LAFS`` followed by a stream of little-endian int64
words. Sequences are written as a length word and their items; a missing
position is the all-ones word (-1). The header carries the format version,
strategy tag, depth, block sizes per level, n and the node count; the payload
carries the tree, the Euler arrays and every table of the solver.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from lafs.core.block_table import PatternTable
from lafs.core.far import BasicIndex
from lafs.core.fs import FindSmallerSolver, make_instance
from lafs.core.index import LevelAncestorIndex
from lafs.core.multi_level import MultiIndex
from lafs.core.tree import EulerTour, RootedTree, build_euler_tour
from lafs.core.two_level import BlockDecomposition, NearTable, TwoLevelIndex
from lafs.core.types import (
    ARTIFACT_MAGIC,
    ARTIFACT_VERSION,
    MAX_PATTERN_BLOCK_SIZE,
    NONE_SENTINEL,
    ArtifactFormatError,
    ArtifactVersionError,
    LocalKind,
    Strategy,
)

logger = logging.getLogger(__name__)

WORD = np.dtype("<i8")

SOLVER_BASIC = 1
SOLVER_TWO_LEVEL = 2
SOLVER_MULTI = 3

LOCAL_KIND_CODES = {LocalKind.BASIC: 1, LocalKind.TABLE: 2}
CODE_LOCAL_KINDS = {v: k for k, v in LOCAL_KIND_CODES.items()}


@dataclass
class ArtifactHeader:
    version: int
    strategy: Strategy
    r: int
    k_sequence: Tuple[int, ...]
    n: int
    node_count: int


@dataclass
class IndexArtifact:
    header: ArtifactHeader
    index: LevelAncestorIndex

    @staticmethod
    def from_index(index: LevelAncestorIndex) -> "IndexArtifact":
        solver = index.solver
        if isinstance(solver, MultiIndex):
            k_sequence = solver.k_sequence
        elif isinstance(solver, TwoLevelIndex):
            k_sequence = (solver.k,)
        else:
            k_sequence = ()
        header = ArtifactHeader(
            version=ARTIFACT_VERSION,
            strategy=index.strategy,
            r=index.levels if index.strategy == Strategy.MULTI else 1,
            k_sequence=tuple(k_sequence),
            n=solver.n,
            node_count=index.tree.node_count,
        )
        return IndexArtifact(header=header, index=index)


class _Writer:
    def __init__(self):
        self.words: List[int] = []

    def word(self, value: int):
        self.words.append(value)

    def seq(self, values: Iterable[int]):
        values = list(values)
        self.words.append(len(values))
        self.words.extend(values)

    def optional_seq(self, values: Iterable[Optional[int]]):
        self.seq(NONE_SENTINEL if v is None else v for v in values)

    def to_bytes(self) -> bytes:
        return ARTIFACT_MAGIC + np.asarray(self.words, dtype=WORD).tobytes()


class _Reader:
    def __init__(self, words: List[int]):
        self.words = words
        self.position = 0

    def word(self) -> int:
        if self.position >= len(self.words):
            raise ArtifactFormatError("Artifact is truncated")
        value = self.words[self.position]
        self.position += 1
        return value

    def seq(self) -> List[int]:
        length = self.word()
        end = self.position + length
        if length < 0 or end > len(self.words):
            raise ArtifactFormatError(
                f"Sequence of length {length} runs past the end of the artifact"
            )
        values = self.words[self.position : end]
        self.position = end
        return values

    def optional_seq(self) -> List[Optional[int]]:
        return [None if v == NONE_SENTINEL else v for v in self.seq()]


def _chunk(
    cells: Sequence[Optional[int]], sizes: Sequence[int]
) -> List[List[Optional[int]]]:
    rows: List[List[Optional[int]]] = [[]]
    start = 0
    for size in sizes:
        rows.append(list(cells[start : start + size]))
        start += size
    return rows


def _write_solver(out: _Writer, solver: FindSmallerSolver):
    if isinstance(solver, BasicIndex):
        out.word(SOLVER_BASIC)
        out.seq(solver.inst.values)
        out.seq(len(cells) for cells in solver.far[1:])
        out.optional_seq(cell for cells in solver.far[1:] for cell in cells)
        return
    if not isinstance(solver, TwoLevelIndex):
        raise ArtifactFormatError(f"Cannot serialize solver {type(solver).__name__}")

    if isinstance(solver, MultiIndex):
        out.word(SOLVER_MULTI)
        out.word(solver.r)
        out.seq(solver.k_sequence)
    else:
        out.word(SOLVER_TWO_LEVEL)
    decomp = solver.decomp
    out.word(decomp.k)
    out.word(LOCAL_KIND_CODES[solver.local_kind])
    out.seq(solver.inst.values)
    out.seq(decomp.minima[1:])
    out.seq(decomp.quotients[1:])
    out.seq(decomp.suffix_min[1:])
    out.optional_seq(cell for cells in solver.near.near[1:] for cell in cells)
    _write_solver(out, solver.global_far)
    if solver.local_kind == LocalKind.TABLE:
        out.optional_seq(solver.pattern_table.answers)
        out.seq(solver.patterns[1:])
    else:
        out.word(len(solver.local_solvers) - 1)
        for local in solver.local_solvers[1:]:
            _write_solver(out, local)


def _check_positions(cells: Sequence[Optional[int]], upper: int, table: str):
    bad = next((c for c in cells if c is not None and not 1 <= c <= upper), None)
    if bad is not None:
        raise ArtifactFormatError(f"{table} entry {bad} outside [1, {upper}]")


def _read_solver(src: _Reader) -> FindSmallerSolver:
    kind = src.word()
    if kind == SOLVER_BASIC:
        inst = make_instance(src.seq())
        caps = src.seq()
        cells = src.optional_seq()
        if (
            len(caps) != inst.n
            or any(cap < 0 for cap in caps)
            or sum(caps) != len(cells)
        ):
            raise ArtifactFormatError("FAR table sizes do not match the array")
        _check_positions(cells, inst.n, "FAR")
        return BasicIndex(inst=inst, far=_chunk(cells, caps))
    if kind not in (SOLVER_TWO_LEVEL, SOLVER_MULTI):
        raise ArtifactFormatError(f"Unknown solver tag {kind}")

    r, k_sequence = 0, ()
    if kind == SOLVER_MULTI:
        r = src.word()
        k_sequence = tuple(src.seq())
    k = src.word()
    if k < 2 or (kind == SOLVER_MULTI and (r < 2 or k_sequence[:1] != (k,))):
        raise ArtifactFormatError(f"Bad block size {k} or depth {r}")
    try:
        local_kind = CODE_LOCAL_KINDS[src.word()]
    except KeyError as exception:
        raise ArtifactFormatError("Unknown local solver kind") from exception
    inst = make_instance(src.seq())
    decomp = BlockDecomposition(
        k=k,
        n=inst.n,
        minima=[None] + src.seq(),
        quotients=[None] + src.seq(),
        suffix_min=[None] + src.seq(),
    )
    count = decomp.block_count
    if (
        count != -(-inst.n // k)
        or len(decomp.quotients) != count + 1
        or len(decomp.suffix_min) != inst.n + 1
    ):
        raise ArtifactFormatError("Block arrays do not match the array length")
    near_cells = src.optional_seq()
    if len(near_cells) != count * k:
        raise ArtifactFormatError("Near table size does not match the block count")
    _check_positions(near_cells, count, "Near")
    near = NearTable(k=k, near=_chunk(near_cells, [k] * count))
    global_far = _read_solver(src)
    if global_far.n != count:
        raise ArtifactFormatError("Global FAR index does not cover every block")
    fields = dict(
        inst=inst,
        decomp=decomp,
        global_far=global_far,
        near=near,
        local_kind=local_kind,
    )
    if local_kind == LocalKind.TABLE:
        if k > MAX_PATTERN_BLOCK_SIZE:
            raise ArtifactFormatError(f"Pattern block size {k} is too large")
        table = PatternTable(k=k, answers=src.optional_seq())
        patterns = src.seq()
        if table.entry_count != table.pattern_count * k * (k - 1):
            raise ArtifactFormatError("Pattern table size does not match k")
        _check_positions(table.answers, k, "Pattern table")
        if len(patterns) != count or any(
            not 0 <= p < table.pattern_count for p in patterns
        ):
            raise ArtifactFormatError("Block patterns do not match the pattern table")
        fields["pattern_table"] = table
        fields["patterns"] = [0] + patterns
    else:
        if src.word() != count:
            raise ArtifactFormatError("Local solver count does not match the blocks")
        local_solvers = [None] + [_read_solver(src) for _ in range(count)]
        sizes = [min(k, inst.n - (t - 1) * k) for t in range(1, count + 1)]
        if [local.n for local in local_solvers[1:]] != sizes:
            raise ArtifactFormatError("Local solver sizes do not match the blocks")
        fields["local_solvers"] = local_solvers
    if kind == SOLVER_MULTI:
        return MultiIndex(r=r, k_sequence=k_sequence, **fields)
    return TwoLevelIndex(**fields)


def serialize_index(index: LevelAncestorIndex) -> bytes:
    header = IndexArtifact.from_index(index).header
    out = _Writer()
    out.word(header.version)
    out.word(header.strategy.serialize())
    out.word(header.r)
    out.seq(header.k_sequence)
    out.word(header.n)
    out.word(header.node_count)

    tree, euler = index.tree, index.euler
    out.word(tree.root)
    out.optional_seq(tree.parents)
    out.seq(euler.tour)
    out.seq(euler.levels)
    out.seq(euler.last_occurrence)
    out.seq(euler.node_levels)
    _write_solver(out, index.solver)
    return out.to_bytes()


def read_header(src: _Reader) -> ArtifactHeader:
    version = src.word()
    if version != ARTIFACT_VERSION:
        raise ArtifactVersionError(
            f"Artifact format version {version} is not supported "
            f"(expected {ARTIFACT_VERSION})"
        )
    return ArtifactHeader(
        version=version,
        strategy=Strategy.from_code(src.word()),
        r=src.word(),
        k_sequence=tuple(src.seq()),
        n=src.word(),
        node_count=src.word(),
    )


def deserialize_index(data: bytes) -> IndexArtifact:
    if data[: len(ARTIFACT_MAGIC)] != ARTIFACT_MAGIC:
        raise ArtifactFormatError("Not an index artifact (bad magic bytes)")
    body = data[len(ARTIFACT_MAGIC) :]
    if len(body) % WORD.itemsize:
        raise ArtifactFormatError("Artifact body is not a whole number of words")
    src = _Reader(np.frombuffer(body, dtype=WORD).tolist())
    header = read_header(src)

    root = src.word()
    tree = RootedTree.from_parents(src.optional_seq(), root)
    euler = EulerTour(
        tour=tuple(src.seq()),
        levels=tuple(src.seq()),
        last_occurrence=tuple(src.seq()),
        node_levels=tuple(src.seq()),
    )
    if euler != build_euler_tour(tree):
        raise ArtifactFormatError("Euler arrays do not match the stored tree")
    solver = _read_solver(src)
    if src.position != len(src.words):
        raise ArtifactFormatError("Trailing data after the solver tables")
    if tree.node_count != header.node_count or solver.n != header.n:
        raise ArtifactFormatError("Header sizes disagree with the payload")
    if solver.inst.values != euler.levels:
        raise ArtifactFormatError("Solver array is not the Euler level array")
    index = LevelAncestorIndex(tree, euler, solver, header.strategy, header.r)
    logger.debug("Loaded %r", index)
    return IndexArtifact(header=header, index=index)


def write_artifact(index: LevelAncestorIndex, path: Union[str, Path]) -> int:
    data = serialize_index(index)
    Path(path).write_bytes(data)
    logger.info("Wrote %d bytes to %s", len(data), path)
    return len(data)


def read_artifact(path: Union[str, Path]) -> IndexArtifact:
    return deserialize_index(Path(path).read_bytes())
