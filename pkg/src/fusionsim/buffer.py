"""Contiguous buffer layout and the minimum-move shuffle search.

Memory is modelled at slot granularity: one slot per fused request,
sized in bytes.  The live window [buffer_offset, buffer_offset +
buffer_size) is the region the stream hands to its kernels each
iteration, so every byte inside it is paid for whether or not the
owning request still runs.  Evicting a request leaves its slot empty
but keeps the size, which is exactly the orphaned-memory problem the
shuffle removes.

The shuffle search picks the cheapest destination window: slide a
window of length equal to the occupied-slot count across the live
region and keep the placement that leaves the most occupied bytes
where they already are.  Occupied slots outside the winning window
are then moved into the empty slots inside it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import (
    CapacityExceeded,
    DuplicateRequest,
    OracleBoundExceeded,
    StalePlan,
    UnknownRequest,
)


@dataclass(frozen=True)
class Slot:
    occupant: int | None
    size: int

    @property
    def occupied(self) -> bool:
        return self.occupant is not None


@dataclass(frozen=True)
class ShuffleMove:
    request_id: int
    src_slot: int
    dst_slot: int
    size: int


@dataclass(frozen=True)
class ShufflePlan:
    moves: tuple[ShuffleMove, ...]
    window_offset: int
    window_len: int
    total_bytes_moved: int
    basis_version: int


def find_shuffled_memory_region(arr: Sequence[int]) -> int:
    """Return the start index of the cheapest length-non_zero window.

    arr holds one entry per slot in the live region: the slot's byte
    size when occupied, 0 when empty.  The cost of a window is the sum
    of occupied entries outside it (those are the bytes that must move
    in).  Ties break toward the earliest window because only a strict
    improvement displaces the running minimum.  An all-zero region has
    nothing to move, so the offset is 0.
    """
    total_cost = 0
    non_zero = 0
    for v in arr:
        if v != 0:
            non_zero += 1
            total_cost += v

    window_cost = 0
    for i in range(non_zero):
        window_cost += arr[i]
    min_cost = total_cost - window_cost
    mem_offset = 0

    for i in range(non_zero, len(arr)):
        window_cost += arr[i] - arr[i - non_zero]
        current_cost = total_cost - window_cost
        if current_cost < min_cost:
            min_cost = current_cost
            mem_offset = i - non_zero + 1
    return mem_offset


def window_move_cost(arr: Sequence[int], offset: int) -> int:
    """Bytes that must move when the window of occupied-count length
    starts at offset: every occupied entry outside [offset, offset+k)."""
    non_zero = sum(1 for v in arr if v != 0)
    inside = sum(arr[offset : offset + non_zero])
    return sum(arr) - inside


def brute_force_min_window(
    arr: Sequence[int], max_len: int = 4096
) -> tuple[int, int]:
    """Reference oracle: evaluate every candidate window directly.

    Returns (offset, cost) for the earliest window of length equal to
    the occupied count whose move-in cost is minimal.  Refuses arrays
    longer than max_len so an accidental huge input cannot hang a test
    run silently.
    """
    if len(arr) > max_len:
        raise OracleBoundExceeded(f"array of {len(arr)} exceeds bound {max_len}")
    non_zero = sum(1 for v in arr if v != 0)
    total = sum(arr)
    if non_zero == 0:
        return 0, 0
    best_offset = 0
    best_cost = None
    for offset in range(0, len(arr) - non_zero + 1):
        cost = total - sum(arr[offset : offset + non_zero])
        if best_cost is None or cost < best_cost:
            best_cost = cost
            best_offset = offset
    return best_offset, best_cost


class BufferLayout:
    """Mutable slot array with a live window; one owner at a time.

    version increments on every mutation so a shuffle plan can detect
    that the layout changed under it.
    """

    def __init__(self, capacity: int | None = None):
        self.slots: list[Slot] = []
        self.buffer_offset = 0
        self.buffer_size = 0
        self.per_request_offset: dict[int, int] = {}
        self.capacity = capacity
        self.version = 0

    def copy(self) -> "BufferLayout":
        dup = BufferLayout(self.capacity)
        dup.slots = list(self.slots)
        dup.buffer_offset = self.buffer_offset
        dup.buffer_size = self.buffer_size
        dup.per_request_offset = dict(self.per_request_offset)
        dup.version = self.version
        return dup

    # -- queries ---------------------------------------------------------

    def window(self) -> list[Slot]:
        return self.slots[self.buffer_offset : self.buffer_offset + self.buffer_size]

    def live_bytes(self) -> int:
        """Byte extent of the live window, orphaned slot bytes included."""
        return sum(s.size for s in self.window())

    def occupied_count(self) -> int:
        return len(self.per_request_offset)

    def has_interior_holes(self) -> bool:
        return self.buffer_size > self.occupied_count()

    def size_array(self) -> list[int]:
        """Live window as the shuffle search sees it: size or 0."""
        return [s.size if s.occupied else 0 for s in self.window()]

    # -- mutations -------------------------------------------------------

    def fuse_request(self, request_id: int, size: int) -> int:
        """Place a request in the slot just past the live window."""
        if request_id in self.per_request_offset:
            raise DuplicateRequest(f"request {request_id} already fused")
        idx = self.buffer_offset + self.buffer_size
        if self.capacity is not None and idx >= self.capacity:
            raise CapacityExceeded(f"slot {idx} past capacity {self.capacity}")
        slot = Slot(request_id, size)
        if idx < len(self.slots):
            assert not self.slots[idx].occupied
            self.slots[idx] = slot
        else:
            self.slots.append(slot)
        self.buffer_size += 1
        self.per_request_offset[request_id] = idx
        self.version += 1
        return idx

    def evict_request(self, request_id: int) -> None:
        """Empty the request's slot; the size stays until trimmed or shuffled."""
        try:
            idx = self.per_request_offset.pop(request_id)
        except KeyError:
            raise UnknownRequest(f"request {request_id} not in layout") from None
        self.slots[idx] = Slot(None, self.slots[idx].size)
        self.version += 1

    def trim_leading(self) -> None:
        """Advance the window start past empty slots; back-of-window
        holes are left in place.  This is the plain FIFO release rule."""
        changed = False
        while self.buffer_size > 0 and not self.slots[self.buffer_offset].occupied:
            self.buffer_offset += 1
            self.buffer_size -= 1
            changed = True
        if changed:
            self.version += 1

    def trim_boundaries(self) -> None:
        """Shrink the window from both ends until it starts and ends on
        occupied slots (empty window if nothing is occupied)."""
        changed = False
        while self.buffer_size > 0 and not self.slots[self.buffer_offset].occupied:
            self.buffer_offset += 1
            self.buffer_size -= 1
            changed = True
        while (
            self.buffer_size > 0
            and not self.slots[self.buffer_offset + self.buffer_size - 1].occupied
        ):
            self.buffer_size -= 1
            changed = True
        if changed:
            self.version += 1


def plan_shuffle(layout: BufferLayout) -> ShufflePlan:
    """Pair out-of-window occupied slots with in-window holes.

    The plan is empty when the occupied slots are already contiguous.
    Sources and destinations are taken in ascending slot order, which
    fixes the pairing deterministically; any pairing moves the same
    bytes, so this choice does not affect cost.
    """
    arr = layout.size_array()
    rel = find_shuffled_memory_region(arr)
    non_zero = layout.occupied_count()
    win_lo = layout.buffer_offset + rel
    win_hi = win_lo + non_zero

    sources = []
    dests = []
    for i in range(layout.buffer_offset, layout.buffer_offset + layout.buffer_size):
        slot = layout.slots[i]
        if slot.occupied and not (win_lo <= i < win_hi):
            sources.append(i)
        elif not slot.occupied and win_lo <= i < win_hi:
            dests.append(i)
    moves = tuple(
        ShuffleMove(layout.slots[src].occupant, src, dst, layout.slots[src].size)
        for src, dst in zip(sources, dests)
    )
    return ShufflePlan(
        moves=moves,
        window_offset=win_lo,
        window_len=non_zero,
        total_bytes_moved=sum(m.size for m in moves),
        basis_version=layout.version,
    )


def apply_shuffle(layout: BufferLayout, plan: ShufflePlan) -> None:
    """Execute a plan: relocate the planned slots and shrink the live
    window to the destination region.  An empty plan is a no-op."""
    if plan.basis_version != layout.version:
        raise StalePlan(
            f"plan built at version {plan.basis_version}, layout at {layout.version}"
        )
    if not plan.moves:
        return
    for m in plan.moves:
        assert layout.slots[m.src_slot].occupant == m.request_id
        assert not layout.slots[m.dst_slot].occupied
        layout.slots[m.dst_slot] = Slot(m.request_id, m.size)
        layout.slots[m.src_slot] = Slot(None, m.size)
        layout.per_request_offset[m.request_id] = m.dst_slot
    layout.buffer_offset = plan.window_offset
    layout.buffer_size = plan.window_len
    layout.version += 1
