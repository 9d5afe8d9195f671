import pytest

from lafs.core.fs import make_instance, random_walk
from lafs.core.two_level import (
    build_near,
    build_two_level,
    choose_block_size,
    decompose,
    query_global,
    query_two_level,
)
from lafs.core.types import (
    BadBlockSizeError,
    LocalKind,
    PositionOutOfRangeError,
    ReadCounter,
    StepBoundViolatedError,
    StepNotUnitError,
)
from lafs.tests.constants import (
    MAX_READS_TWO_LEVEL,
    SAMPLE_K,
    SAMPLE_MINIMA,
    SAMPLE_QUOTIENTS,
    SAMPLE_SUFFIX_MIN,
)
from lafs.tests.utils import grid_mismatches, random_instances

LOCAL_KINDS = [LocalKind.BASIC, LocalKind.TABLE]


@pytest.mark.parametrize(
    "n, k",
    [(1 << 16, 4), (1 << 64, 16), (9, 2), (1, 2), (1 << 20, 4), (1 << 32, 8)],
)
def test_choose_block_size(n, k):
    assert choose_block_size(n) == k


def test_decompose_sample(sample_instance):
    decomp = decompose(sample_instance, SAMPLE_K)
    assert decomp.block_count == 5
    assert decomp.minima[1:] == SAMPLE_MINIMA
    assert decomp.quotients[1:] == SAMPLE_QUOTIENTS
    assert decomp.suffix_min[1:] == SAMPLE_SUFFIX_MIN
    assert decomp.suffix_min[3:5] == [1, 1]
    assert decomp.block_of(9) == 5
    assert decomp.offset_of(4) == 2
    assert decomp.block_start(3) == 5


def test_decompose_errors(sample_instance):
    with pytest.raises(BadBlockSizeError):
        decompose(sample_instance, 1)
    with pytest.raises(StepBoundViolatedError):
        decompose(make_instance([0, 2, 1]), 2)


def test_quotients_move_by_at_most_one(rng):
    for k in (2, 4, 8):
        decomp = decompose(make_instance(random_walk(500, rng)), k)
        q = decomp.quotients[1:]
        m = decomp.minima[1:]
        assert all(abs(b - a) <= 1 for a, b in zip(q, q[1:]))
        assert all(abs(b - a) <= k for a, b in zip(m, m[1:]))


def test_near_sample():
    near = build_near([None] + SAMPLE_MINIMA, SAMPLE_K)
    assert near.near[2] == [4, None]
    assert near.near[3][0] == 4
    assert near.near[1] == [None, None]
    assert near.entry_count == 5 * SAMPLE_K


def test_near_matches_scan(rng):
    k = 4
    minima = [None] + decompose(make_instance(random_walk(400, rng)), k).minima[1:]
    near = build_near(minima, k)
    count = len(minima) - 1
    for t in range(1, count + 1):
        for j in range(1, k + 1):
            expected = next(
                (u for u in range(t + 1, count + 1) if minima[u] <= minima[t] - j), None
            )
            assert near.near[t][j - 1] == expected


def test_query_global_sample(sample_instance):
    idx = build_two_level(sample_instance, SAMPLE_K)
    assert query_global(idx, 3, 0) == 4
    assert query_global(idx, 2, 1) == 2
    assert query_global(idx, 1, -1) is None
    with pytest.raises(PositionOutOfRangeError):
        query_global(idx, 6, 0)


@pytest.mark.parametrize("k", [2, 3, 4, 8])
def test_far_gap_stops_within_one_block_quotient(rng, k):
    for _ in range(5):
        idx = build_two_level(make_instance(random_walk(600, rng)), k)
        minima = idx.decomp.minima
        count = idx.decomp.block_count
        for t in range(1, count + 1):
            for x in range(idx.inst.global_min, minima[t] - k):
                q = idx.global_far.query(t, x // k)
                first = next((u for u in range(t, count + 1) if minima[u] <= x), None)
                if q is None:
                    assert first is None
                    continue
                assert all(minima[u] > x for u in range(t, q))
                if minima[q] > x:
                    assert 1 <= minima[q] - x <= k - 1
                    assert idx.near.near[q][minima[q] - x - 1] == first
                else:
                    assert q == first
                assert query_global(idx, t, x) == first


@pytest.mark.parametrize("local_kind", LOCAL_KINDS)
@pytest.mark.parametrize(
    "i, x, expected",
    [(3, 0, 7), (1, 0, 1), (8, 0, 9), (2, 1, 2), (5, 1, 6), (1, -1, None)],
)
def test_query_two_level_sample(sample_instance, local_kind, i, x, expected):
    idx = build_two_level(sample_instance, SAMPLE_K, local_kind)
    assert query_two_level(idx, i, x) == expected


@pytest.mark.parametrize("local_kind", LOCAL_KINDS)
def test_single_block(local_kind):
    inst = make_instance([1, 0, 1, 2])
    idx = build_two_level(inst, 4, local_kind)
    assert idx.decomp.block_count == 1
    assert grid_mismatches(idx, inst) == []


@pytest.mark.parametrize("local_kind", LOCAL_KINDS)
@pytest.mark.parametrize("k", [2, 3, 4, 8])
def test_matches_oracle_on_random_walks(rng, scale, local_kind, k):
    for inst in random_instances(rng, scale.arrays // 4 + 1, scale.max_n):
        idx = build_two_level(inst, k, local_kind)
        assert grid_mismatches(idx, inst) == []


def test_basic_locals_accept_flat_steps(rng):
    inst = make_instance(random_walk(200, rng, unit=False))
    idx = build_two_level(inst, 4, LocalKind.BASIC)
    assert grid_mismatches(idx, inst) == []


def test_table_locals_need_unit_steps():
    with pytest.raises(StepNotUnitError):
        build_two_level(make_instance([0, 0, 1, 2]), 2, LocalKind.TABLE)


def test_near_entries_bound(rng):
    for exponent in (10, 12, 14):
        inst = make_instance(random_walk(1 << exponent, rng))
        k = choose_block_size(inst.n)
        idx = build_two_level(inst, k)
        assert idx.near.entry_count <= inst.n + k


@pytest.mark.parametrize("local_kind", LOCAL_KINDS)
@pytest.mark.parametrize("exponent", [10, 14])
def test_reads_per_query(rng, scale, local_kind, exponent):
    inst = make_instance(random_walk(1 << exponent, rng))
    idx = build_two_level(inst, 4, local_kind)
    counter = ReadCounter()
    top = max(inst.values)
    for _ in range(scale.queries):
        before = counter.reads
        i = rng.randint(1, inst.n)
        idx.query(i, rng.randint(inst.global_min - 1, top), counter)
        counter.close_query(before)
    assert counter.max_reads <= MAX_READS_TWO_LEVEL


def test_table_sizes(sample_instance):
    idx = build_two_level(sample_instance, SAMPLE_K, LocalKind.TABLE)
    sizes = idx.table_sizes()
    assert sizes["pattern_table"] == 4
    assert sizes["patterns"] == 5
    assert sizes["near"] == 10
    assert idx.total_entries == sum(sizes.values())


@pytest.mark.acceptance
@pytest.mark.parametrize("local_kind", LOCAL_KINDS)
def test_matches_oracle_at_full_scale(rng, scale, local_kind):
    for inst in random_instances(rng, scale.arrays, scale.max_n):
        idx = build_two_level(inst, choose_block_size(inst.n), local_kind)
        assert grid_mismatches(idx, inst) == []
