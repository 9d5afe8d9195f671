import random
from typing import List, Optional, Sequence, Tuple

from lafs.core.fs import (
    FindSmallerSolver,
    FsInstance,
    fs_oracle_sweep,
    make_instance,
    random_walk,
)
from lafs.core.tree import RootedTree, ancestor_oracle, random_tree


def quadratic_nearest_smallers(values: Sequence[int]) -> List[Optional[int]]:
    """Double loop answer for nearest smallers, 1-based with a pad at index 0."""
    n = len(values)
    ns: List[Optional[int]] = [None] * (n + 1)
    for i in range(n):
        for j in range(i + 1, n):
            if values[j] < values[i]:
                ns[i + 1] = j + 1
                break
    return ns


def threshold_range(inst: FsInstance) -> range:
    """Every threshold worth asking: one below the minimum up to the maximum."""
    return range(inst.global_min - 1, max(inst.values) + 1)


def grid_mismatches(
    solver: FindSmallerSolver, inst: FsInstance
) -> List[Tuple[int, int, Optional[int], Optional[int]]]:
    """(i, x, got, expected) for every cell of the (i, x) grid that disagrees."""
    mismatches = []
    for x in threshold_range(inst):
        expected = fs_oracle_sweep(inst, x)
        for i in range(1, inst.n + 1):
            got = solver.query(i, x)
            if got != expected[i]:
                mismatches.append((i, x, got, expected[i]))
    return mismatches


def random_instances(
    rng: random.Random, count: int, max_n: int, unit: bool = True
) -> List[FsInstance]:
    return [
        make_instance(random_walk(rng.randint(1, max_n), rng, rng.randint(-5, 5), unit))
        for _ in range(count)
    ]


def random_trees(rng: random.Random, count: int, max_n: int) -> List[RootedTree]:
    return [random_tree(rng.randint(1, max_n), rng) for _ in range(count)]


def all_ancestor_pairs(tree: RootedTree, node_levels: Sequence[int]):
    for v in range(tree.node_count):
        for i in range(node_levels[v] + 1):
            yield v, i, ancestor_oracle(tree, v, i)
