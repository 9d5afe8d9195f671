from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from lafs.core.fs import FindSmallerSolver, FsInstance, make_instance
from lafs.core.types import (
    CycleDetectedError,
    HopOutOfRangeError,
    MalformedLineError,
    MultipleRootsError,
    NodeIdOutOfRangeError,
    NodeOutOfRangeError,
    ReadCounter,
    RootMismatchError,
    UnreachableNodeError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RootedTree:
    node_count: int
    root: int
    parents: Tuple[Optional[int], ...]
    children: Tuple[Tuple[int, ...], ...]

    @staticmethod
    def from_parents(parents: Sequence[Optional[int]], root: int) -> "RootedTree":
        """
        Validate a parent array (None or -1 marks the root) and derive children.

        Raises the TreeFormatError subclass that names what is wrong.
        """
        node_count = len(parents)
        if not 0 <= root < node_count:
            raise NodeIdOutOfRangeError(f"Root {root} outside [0, {node_count})")
        normalized: List[Optional[int]] = []
        roots = []
        for v, parent in enumerate(parents):
            if parent is None or parent == -1:
                roots.append(v)
                normalized.append(None)
            elif not 0 <= parent < node_count:
                raise NodeIdOutOfRangeError(
                    f"Parent {parent} of node {v} outside [0, {node_count})"
                )
            else:
                normalized.append(parent)
        if len(roots) > 1:
            raise MultipleRootsError(f"Several nodes have no parent: {roots}")
        if roots != [root]:
            raise RootMismatchError(
                f"Declared root {root} but parentless nodes are {roots}"
            )

        _check_reaches_root(normalized, root)

        children: List[List[int]] = [[] for _ in range(node_count)]
        for v, parent in enumerate(normalized):
            if parent is not None:
                children[parent].append(v)
        return RootedTree(
            node_count=node_count,
            root=root,
            parents=tuple(normalized),
            children=tuple(tuple(c) for c in children),
        )

    def check_node(self, v: int):
        if not 0 <= v < self.node_count:
            raise NodeOutOfRangeError(f"Node {v} outside [0, {self.node_count})")

    def __repr__(self):
        return f"RootedTree(node_count={self.node_count}, root={self.root})"


def _check_reaches_root(parents: Sequence[Optional[int]], root: int):
    # 0 unseen, 1 on the current walk, 2 known to reach the root
    state = [0] * len(parents)
    state[root] = 2
    for start in range(len(parents)):
        path = []
        v = start
        while state[v] == 0:
            state[v] = 1
            path.append(v)
            v = parents[v]
        if state[v] == 1:
            cycle = path[path.index(v) :]
            if start in cycle:
                raise CycleDetectedError(cycle)
            raise UnreachableNodeError(start, cycle)
        for u in path:
            state[u] = 2


@dataclass(frozen=True)
class EulerTour:
    """
    Depth-first tour recording a node on entry and on every return from a child.

    ``tour`` and ``levels`` are stored 0-based but addressed by 1-based positions
    through ``node_at``; ``last_occurrence`` holds 1-based positions.
    """

    tour: Tuple[int, ...]
    levels: Tuple[int, ...]
    last_occurrence: Tuple[int, ...]
    node_levels: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.tour)

    def node_at(self, position: int) -> int:
        return self.tour[position - 1]

    def instance(self) -> FsInstance:
        return make_instance(self.levels)


def _decode(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exception:
        line = data.count(b"\n", 0, exception.start) + 1
        raise MalformedLineError(
            line, f"invalid UTF-8 byte 0x{data[exception.start]:02x}"
        ) from exception


def parse_tree(text: Union[str, bytes]) -> RootedTree:
    """
    Parse ``<n> <root>`` on the first line and n parent ids on the second,
    -1 marking the root. Bytes are decoded as UTF-8.
    """
    if isinstance(text, bytes):
        text = _decode(text)
    lines = [line.strip() for line in text.strip().splitlines()]
    if not lines or not lines[0]:
        raise MalformedLineError(1, "expected '<n> <root>'")
    header = lines[0].split()
    if len(header) != 2:
        raise MalformedLineError(1, f"expected '<n> <root>', got {lines[0]!r}")
    try:
        node_count, root = int(header[0]), int(header[1])
    except ValueError as exception:
        raise MalformedLineError(1, f"non-integer header {lines[0]!r}") from exception
    if node_count < 1:
        raise MalformedLineError(1, f"node count must be positive, got {node_count}")
    if len(lines) < 2:
        raise MalformedLineError(2, "missing parent list")
    if len(lines) > 2:
        raise MalformedLineError(3, "unexpected content after the parent list")
    try:
        parents = [int(token) for token in lines[1].split()]
    except ValueError as exception:
        raise MalformedLineError(2, "parent ids must be integers") from exception
    if len(parents) != node_count:
        raise MalformedLineError(
            2, f"expected {node_count} parent ids, got {len(parents)}"
        )
    tree = RootedTree.from_parents(parents, root)
    logger.debug("Parsed %r", tree)
    return tree


def format_tree(tree: RootedTree) -> str:
    parents = " ".join("-1" if p is None else str(p) for p in tree.parents)
    return f"{tree.node_count} {tree.root}\n{parents}\n"


def compute_levels(tree: RootedTree) -> List[int]:
    levels = [0] * tree.node_count
    pending = [tree.root]
    while pending:
        v = pending.pop()
        for child in tree.children[v]:
            levels[child] = levels[v] + 1
            pending.append(child)
    return levels


def build_euler_tour(tree: RootedTree) -> EulerTour:
    node_levels = compute_levels(tree)
    tour = [tree.root]
    stack = [(tree.root, 0)]
    while stack:
        v, next_child = stack[-1]
        if next_child < len(tree.children[v]):
            stack[-1] = (v, next_child + 1)
            child = tree.children[v][next_child]
            tour.append(child)
            stack.append((child, 0))
        else:
            stack.pop()
            if stack:
                tour.append(stack[-1][0])

    last_occurrence = [0] * tree.node_count
    for position, v in enumerate(tour, start=1):
        last_occurrence[v] = position
    return EulerTour(
        tour=tuple(tour),
        levels=tuple(node_levels[v] for v in tour),
        last_occurrence=tuple(last_occurrence),
        node_levels=tuple(node_levels),
    )


def _check_hops(et: EulerTour, v: int, i: int):
    if not 0 <= v < len(et.node_levels):
        raise NodeOutOfRangeError(f"Node {v} outside [0, {len(et.node_levels)})")
    if not 0 <= i <= et.node_levels[v]:
        raise HopOutOfRangeError(
            f"Node {v} at level {et.node_levels[v]} has no ancestor {i} hops up"
        )


def level_ancestor(
    solver: FindSmallerSolver,
    et: EulerTour,
    v: int,
    i: int,
    counter: Optional[ReadCounter] = None,
) -> int:
    """The i-th ancestor of v: first tour entry at its level after v's last visit."""
    _check_hops(et, v, i)
    j = solver.query(et.last_occurrence[v], et.node_levels[v] - i, counter)
    return et.node_at(j)


def ancestor_oracle(tree: RootedTree, v: int, i: int) -> int:
    tree.check_node(v)
    if i < 0:
        raise HopOutOfRangeError(f"Hop count {i} is negative")
    for _ in range(i):
        parent = tree.parents[v]
        if parent is None:
            raise HopOutOfRangeError(f"Walked past the root after fewer than {i} hops")
        v = parent
    return v


def random_tree(n: int, rng: random.Random) -> RootedTree:
    """Uniform attachment: node v picks its parent uniformly from 0..v-1."""
    parents: List[Optional[int]] = [None] + [rng.randrange(v) for v in range(1, n)]
    return RootedTree.from_parents(parents, 0)


def path_tree(n: int) -> RootedTree:
    return RootedTree.from_parents([None] + list(range(n - 1)), 0)

