"""Empirical checks of the shuffle window search.

Two jobs live here.  First, verify the sliding-window search against a
direct evaluation of every candidate window (exhaustive binary arrays
plus randomized weighted arrays).  Second, quantify how the slot-level
cost relates to a byte-level packing optimum, where the packed region
may sit at any byte offset and requests may be reordered.  That second
comparison is reported, not asserted: the slot model can both over- and
under-state the bytes a physical packing would move when slot sizes
differ, and the report makes the gap visible instead of hiding it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .buffer import brute_force_min_window, find_shuffled_memory_region, window_move_cost
from .rng import Xorshift64Star


@dataclass
class WindowCheckResult:
    cases: int
    mismatches: list[tuple[list[int], int, int]]  # (arr, got_offset, want_offset)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def check_arrays(arrays) -> WindowCheckResult:
    """Compare the search against the exhaustive oracle on each array;
    offsets must match exactly (same earliest-minimum tie break) and so
    must the implied move cost."""
    mismatches = []
    cases = 0
    for arr in arrays:
        cases += 1
        got = find_shuffled_memory_region(arr)
        want_offset, want_cost = brute_force_min_window(arr)
        if got != want_offset or window_move_cost(arr, got) != want_cost:
            mismatches.append((list(arr), got, want_offset))
    return WindowCheckResult(cases, mismatches)


def all_binary_arrays(length: int):
    for bits in range(1 << length):
        yield [(bits >> i) & 1 for i in range(length)]


def random_weighted_arrays(count: int, seed: int, max_len: int = 64, max_val: int = 100):
    """Arrays with sizes in [0, max_val]; zeros model holes.  Roughly a
    third of entries are forced to zero so windows stay interesting."""
    gen = Xorshift64Star(seed)
    for _ in range(count):
        n = gen.uniform_int(1, max_len)
        arr = []
        for _ in range(n):
            if gen.uniform_int(0, 2) == 0:
                arr.append(0)
            else:
                arr.append(gen.uniform_int(0, max_val))
        yield arr


def byte_level_min_cost(
    extents: list[int], occupied: list[bool], reorder: bool
) -> int:
    """Minimum bytes moved to make the occupied contents byte-contiguous.

    Slots lay out back to back, so slot i starts at the prefix sum of
    all earlier extents; holes keep the byte extent of the request they
    once held.  A packing chooses an order of the occupied requests and
    a start offset for the packed region; requests whose current byte
    offset equals their packed offset stay put, everything else moves.
    Candidate start offsets only need to align some request with its
    packed position.
    """
    pos = 0
    requests = []  # (byte_offset, size)
    for size, occ in zip(extents, occupied):
        if occ:
            requests.append((pos, size))
        pos += size
    total = sum(size for _, size in requests)
    if not requests:
        return 0

    orders = (
        itertools.permutations(range(len(requests)))
        if reorder
        else [tuple(range(len(requests)))]
    )
    best_kept = 0
    for order in orders:
        prefix = {}
        acc = 0
        for idx in order:
            prefix[idx] = acc
            acc += requests[idx][1]
        for anchor in range(len(requests)):
            start = requests[anchor][0] - prefix[anchor]
            kept = sum(
                requests[idx][1]
                for idx in order
                if requests[idx][0] == start + prefix[idx]
            )
            best_kept = max(best_kept, kept)
    return total - best_kept


@dataclass
class ByteComparison:
    cases: int
    slot_cheaper: int      # slot cost < byte optimum (slot model undercounts)
    byte_cheaper: int      # byte optimum < slot cost (packing could do better)
    equal: int
    examples: list[tuple[list[int], list[bool], int, int]]


def compare_against_byte_packing(
    count: int, seed: int, max_len: int = 6, max_val: int = 6, reorder: bool = True
) -> ByteComparison:
    """Random layouts where every slot, hole or not, retains a positive
    byte extent; the slot search only sees occupied sizes."""
    gen = Xorshift64Star(seed)
    slot_cheaper = byte_cheaper = equal = 0
    examples: list[tuple[list[int], list[bool], int, int]] = []
    for _ in range(count):
        n = gen.uniform_int(2, max_len)
        extents = [gen.uniform_int(1, max_val) for _ in range(n)]
        occupied = [gen.uniform_int(0, 3) != 0 for _ in range(n)]
        arr = [ext if occ else 0 for ext, occ in zip(extents, occupied)]
        slot_cost = window_move_cost(arr, find_shuffled_memory_region(arr))
        byte_cost = byte_level_min_cost(extents, occupied, reorder=reorder)
        if slot_cost < byte_cost:
            slot_cheaper += 1
        elif byte_cost < slot_cost:
            byte_cheaper += 1
        else:
            equal += 1
        if slot_cost != byte_cost and len(examples) < 5:
            examples.append((extents, occupied, slot_cost, byte_cost))
    return ByteComparison(count, slot_cheaper, byte_cheaper, equal, examples)
