import pytest

from fusionsim.buffer import (
    BufferLayout,
    apply_shuffle,
    brute_force_min_window,
    find_shuffled_memory_region,
    plan_shuffle,
    window_move_cost,
)
from fusionsim.errors import (
    CapacityExceeded,
    DuplicateRequest,
    OracleBoundExceeded,
    StalePlan,
    UnknownRequest,
)
from fusionsim.oracle import all_binary_arrays, check_arrays, random_weighted_arrays


class TestWindowSearch:
    @pytest.mark.parametrize(
        "arr,offset,cost",
        [
            ([], 0, 0),
            ([0, 0, 0], 0, 0),
            ([3], 0, 0),
            ([0, 1, 1], 1, 0),
            ([1, 0, 1], 0, 1),          # tie, earliest wins
            ([2, 0, 0, 2], 0, 2),       # tie between 0 and 2
            ([5, 0, 2], 0, 2),
            ([1, 0, 1, 1, 0, 1], 0, 1),
            ([0, 0, 4, 4, 0], 2, 0),
        ],
    )
    def test_hand_derived_cases(self, arr, offset, cost):
        got = find_shuffled_memory_region(arr)
        assert got == offset
        assert window_move_cost(arr, got) == cost

    def test_already_contiguous_is_free(self):
        for arr in ([1, 2, 3], [0, 7, 7, 0], [0, 0, 1, 2]):
            off = find_shuffled_memory_region(arr)
            assert window_move_cost(arr, off) == 0

    def test_exhaustive_binary_up_to_len_10(self):
        """Every binary occupancy pattern up to 10 slots must match the
        direct evaluation of all candidate windows, offsets included."""
        for length in range(0, 11):
            result = check_arrays(all_binary_arrays(length))
            assert result.ok, result.mismatches[:3]

    def test_randomized_weighted_arrays(self):
        result = check_arrays(random_weighted_arrays(300, seed=7))
        assert result.cases == 300
        assert result.ok, result.mismatches[:3]

    def test_earliest_tie_matches_oracle_on_palindromes(self):
        # mirrored arrays force cost ties; both sides must pick the
        # same (earliest) offset
        for arr in ([1, 0, 1], [2, 0, 0, 2], [1, 0, 2, 0, 1], [3, 0, 3, 0, 3]):
            assert find_shuffled_memory_region(arr) == brute_force_min_window(arr)[0]

    def test_oracle_refuses_huge_arrays(self):
        with pytest.raises(OracleBoundExceeded):
            brute_force_min_window([1] * 5000)


def _layout(sizes, capacity=None):
    layout = BufferLayout(capacity=capacity)
    for rid, size in enumerate(sizes):
        layout.fuse_request(rid, size)
    return layout


class TestBufferLayout:
    def test_fuse_appends_in_order(self):
        layout = _layout([10, 20, 30])
        assert layout.size_array() == [10, 20, 30]
        assert layout.live_bytes() == 60
        assert layout.occupied_count() == 3
        assert not layout.has_interior_holes()

    def test_duplicate_fuse_rejected(self):
        layout = _layout([10])
        with pytest.raises(DuplicateRequest):
            layout.fuse_request(0, 10)

    def test_capacity_limit(self):
        layout = _layout([1, 1], capacity=2)
        with pytest.raises(CapacityExceeded):
            layout.fuse_request(2, 1)

    def test_evict_keeps_slot_size(self):
        """An evicted slot goes empty but its bytes stay in the live
        window until a trim or shuffle drops them."""
        layout = _layout([10, 20, 30])
        layout.evict_request(1)
        assert layout.size_array() == [10, 0, 30]
        assert layout.live_bytes() == 60
        assert layout.has_interior_holes()

    def test_evict_unknown_rejected(self):
        layout = _layout([10])
        with pytest.raises(UnknownRequest):
            layout.evict_request(99)

    def test_trim_leading_only_front(self):
        layout = _layout([10, 20, 30])
        layout.evict_request(0)
        layout.evict_request(2)
        layout.trim_leading()
        assert layout.buffer_offset == 1
        assert layout.size_array() == [20, 0]
        assert layout.live_bytes() == 50

    def test_trim_boundaries_both_ends(self):
        layout = _layout([10, 20, 30])
        layout.evict_request(0)
        layout.evict_request(2)
        layout.trim_boundaries()
        assert layout.size_array() == [20]
        assert layout.live_bytes() == 20

    def test_trim_everything_when_empty(self):
        layout = _layout([10, 20])
        layout.evict_request(0)
        layout.evict_request(1)
        layout.trim_boundaries()
        assert layout.buffer_size == 0
        assert layout.live_bytes() == 0

    def test_fuse_after_trim_reuses_freed_slot(self):
        layout = _layout([10, 20])
        layout.evict_request(0)
        layout.trim_leading()
        idx = layout.fuse_request(5, 40)
        assert idx == 2
        assert layout.size_array() == [20, 40]

    def test_copy_is_independent(self):
        layout = _layout([10, 20])
        dup = layout.copy()
        dup.evict_request(0)
        assert layout.size_array() == [10, 20]
        assert dup.size_array() == [0, 20]


class TestShufflePlan:
    def test_contiguous_layout_plans_nothing(self):
        layout = _layout([10, 20, 30])
        plan = plan_shuffle(layout)
        assert plan.moves == ()
        assert plan.total_bytes_moved == 0

    def test_single_hole_one_move(self):
        # [10, 0, 30]: keeping the heavy entry still is cheaper, so the
        # window settles on slots 1..2 and only the 10-byte slot moves
        layout = _layout([10, 20, 30])
        layout.evict_request(1)
        plan = plan_shuffle(layout)
        assert plan.window_offset == 1
        assert plan.window_len == 2
        assert len(plan.moves) == 1
        assert plan.moves[0].request_id == 0
        assert plan.moves[0].src_slot == 0
        assert plan.moves[0].dst_slot == 1
        assert plan.total_bytes_moved == 10

    def test_apply_compacts_and_shrinks_window(self):
        layout = _layout([10, 20, 30])
        layout.evict_request(1)
        plan = plan_shuffle(layout)
        apply_shuffle(layout, plan)
        assert layout.size_array() == [10, 30]
        assert layout.live_bytes() == 40
        assert not layout.has_interior_holes()
        assert layout.buffer_offset == 1
        assert layout.per_request_offset == {0: 1, 2: 2}

    def test_apply_empty_plan_is_noop(self):
        layout = _layout([10, 20])
        before = layout.size_array()
        plan = plan_shuffle(layout)
        apply_shuffle(layout, plan)
        assert layout.size_array() == before

    def test_stale_plan_rejected(self):
        layout = _layout([10, 20, 30])
        layout.evict_request(1)
        plan = plan_shuffle(layout)
        layout.fuse_request(7, 5)
        with pytest.raises(StalePlan):
            apply_shuffle(layout, plan)

    def test_plan_cost_matches_window_search(self):
        layout = _layout([10, 20, 30, 40, 50])
        for rid in (1, 3):
            layout.evict_request(rid)
        arr = layout.size_array()
        plan = plan_shuffle(layout)
        assert plan.total_bytes_moved == window_move_cost(
            arr, find_shuffled_memory_region(arr)
        )

    def test_randomized_plan_invariants(self):
        """200 random evict patterns: applying a plan must preserve the
        occupant set with sizes, land everyone inside the new window,
        leave no interior holes, and cost what the search predicted."""
        from fusionsim.rng import Xorshift64Star

        gen = Xorshift64Star(31)
        for _ in range(200):
            n = gen.uniform_int(1, 12)
            layout = _layout([gen.uniform_int(1, 50) for _ in range(n)])
            for rid in range(n):
                if gen.uniform_int(0, 2) == 0 and rid in layout.per_request_offset:
                    layout.evict_request(rid)
            layout.trim_boundaries()
            before = {
                rid: layout.slots[idx].size
                for rid, idx in layout.per_request_offset.items()
            }
            arr = layout.size_array()
            expect_cost = window_move_cost(arr, find_shuffled_memory_region(arr))
            plan = plan_shuffle(layout)
            assert plan.total_bytes_moved == expect_cost
            apply_shuffle(layout, plan)
            after = {
                rid: layout.slots[idx].size
                for rid, idx in layout.per_request_offset.items()
            }
            assert after == before
            if plan.moves:
                assert layout.buffer_size == len(before)
            assert not layout.has_interior_holes()
            lo = layout.buffer_offset
            for rid, idx in layout.per_request_offset.items():
                assert lo <= idx < lo + layout.buffer_size

    def test_plan_never_beats_oracle_nor_left_pack(self):
        """The chosen window's cost equals the oracle minimum and never
        exceeds the naive pack-everything-left cost."""
        from fusionsim.rng import Xorshift64Star

        gen = Xorshift64Star(77)
        for _ in range(200):
            n = gen.uniform_int(2, 10)
            arr = [
                0 if gen.uniform_int(0, 2) == 0 else gen.uniform_int(1, 9)
                for _ in range(n)
            ]
            cost = window_move_cost(arr, find_shuffled_memory_region(arr))
            assert cost == brute_force_min_window(arr)[1]
            assert cost <= window_move_cost(arr, 0)
