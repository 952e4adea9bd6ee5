import heapq
import logging
import math
from typing import List, Optional, Sequence, Tuple

from ..cartesian import PhysicalTable
from ..exceptions import InfeasiblePlacement
from ..model import MemoryHierarchySpec
from .plan import LATENCY_TOLERANCE_NS, PlacementPlan, onchip_bound_ns

logger = logging.getLogger(__name__)

Banks = List[List[PhysicalTable]]


def onchip_prefix_length(
    ordered: Sequence[PhysicalTable], hierarchy: MemoryHierarchySpec
) -> int:
    """Length of the longest prefix that could fit the on-chip banks.

    The prefix ends at the first table larger than a bank or once the
    prefix outgrows the banks' total capacity.
    """
    total = hierarchy.onchip_banks * hierarchy.onchip_bank_capacity
    used = 0
    for length, table in enumerate(ordered):
        used += table.byte_size
        if table.byte_size > hierarchy.onchip_bank_capacity or used > total:
            return length
    return len(ordered)


def bank_table_limit(
    rounds: int, hierarchy: MemoryHierarchySpec, lookups_per_table: int
) -> int:
    """Most tables one bank may hold without outlasting the off-chip path."""
    return math.floor(
        (onchip_bound_ns(rounds, hierarchy) + LATENCY_TOLERANCE_NS)
        / (lookups_per_table * hierarchy.onchip_access_ns)
    )


def pack_balanced(
    tables: Sequence[PhysicalTable], hierarchy: MemoryHierarchySpec, limit: int
) -> Optional[Banks]:
    """Smallest first onto the bank with fewest tables, then fewest bytes."""
    banks: Banks = [[] for _ in range(hierarchy.onchip_banks)]
    loads = [0] * hierarchy.onchip_banks
    for table in tables:
        candidates = [
            (len(banks[bank]), loads[bank], bank)
            for bank in range(hierarchy.onchip_banks)
            if len(banks[bank]) < limit
            and loads[bank] + table.byte_size <= hierarchy.onchip_bank_capacity
        ]
        if not candidates:
            return None
        _, _, bank = min(candidates)
        banks[bank].append(table)
        loads[bank] += table.byte_size
    return banks


def pack_first_fit(
    tables: Sequence[PhysicalTable], hierarchy: MemoryHierarchySpec, limit: int
) -> Optional[Banks]:
    """First-fit decreasing under the per-bank table limit."""
    banks: Banks = [[] for _ in range(hierarchy.onchip_banks)]
    loads = [0] * hierarchy.onchip_banks
    for table in sorted(tables, key=lambda t: (-t.byte_size, t.first_id)):
        for bank in range(hierarchy.onchip_banks):
            if (
                len(banks[bank]) < limit
                and loads[bank] + table.byte_size <= hierarchy.onchip_bank_capacity
            ):
                banks[bank].append(table)
                loads[bank] += table.byte_size
                break
        else:
            return None
    for bank in banks:
        bank.sort(key=PhysicalTable.size_key)
    return banks


def pack_onchip(
    tables: Sequence[PhysicalTable], hierarchy: MemoryHierarchySpec, limit: int
) -> Optional[Banks]:
    if not tables:
        return [[] for _ in range(hierarchy.onchip_banks)]
    return pack_balanced(tables, hierarchy, limit) or pack_first_fit(
        tables, hierarchy, limit
    )


def place_offchip(
    tables: Sequence[PhysicalTable], hierarchy: MemoryHierarchySpec
) -> List[List[PhysicalTable]]:
    """Largest-first count balancing over the off-chip channels."""
    channels: List[List[PhysicalTable]] = [[] for _ in range(hierarchy.offchip_count)]
    capacities = [hierarchy.channel_capacity(i) for i in range(hierarchy.offchip_count)]
    heap: List[Tuple[int, int, int]] = [(0, 0, i) for i in range(len(channels))]
    heapq.heapify(heap)

    for table in sorted(tables, key=lambda t: (-t.byte_size, t.first_id)):
        skipped = []
        while heap:
            count, load, index = heapq.heappop(heap)
            if load + table.byte_size <= capacities[index]:
                channels[index].append(table)
                heapq.heappush(heap, (count + 1, load + table.byte_size, index))
                break
            skipped.append((count, load, index))
        else:
            raise InfeasiblePlacement(
                f"Table {list(table.ids)} of {table.byte_size} bytes exceeds "
                "every remaining channel's free capacity."
            )
        for entry in skipped:
            heapq.heappush(heap, entry)
    return channels


def allocate_to_banks(
    tables: Sequence[PhysicalTable],
    hierarchy: MemoryHierarchySpec,
    lookups_per_table: int = 1,
) -> PlacementPlan:
    """Cache the smallest tables on-chip and spread the rest off-chip.

    The on-chip prefix is shortened until its tables pack into the banks
    with no bank slower than the off-chip critical path left behind.
    """
    ordered = sorted(tables, key=PhysicalTable.size_key)
    longest = onchip_prefix_length(ordered, hierarchy)

    for prefix in range(longest, -1, -1):
        offchip = place_offchip(ordered[prefix:], hierarchy)
        busiest = max((len(channel) for channel in offchip), default=0)
        limit = bank_table_limit(
            busiest * lookups_per_table, hierarchy, lookups_per_table
        )
        onchip = pack_onchip(ordered[:prefix], hierarchy, limit)
        if onchip is None:
            continue
        logger.debug("Kept %s of %s on-chip candidates.", prefix, longest)
        return PlacementPlan.create(onchip, offchip, lookups_per_table)
    raise InfeasiblePlacement("Tables cannot be placed.")
