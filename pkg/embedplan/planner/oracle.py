import logging
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, List, Optional, Sequence, Tuple

from ..cartesian import PhysicalTable, combine_many, product_fits
from ..exceptions import InfeasiblePlacement, OracleLimitExceeded
from ..model import MemoryHierarchySpec, ModelSpec, TableSpec
from ..settings import PlannerSettings
from .plan import (
    LATENCY_TOLERANCE_NS,
    CostEstimate,
    PlacementPlan,
    cost,
    validate_plan,
)

logger = logging.getLogger(__name__)

Grouping = List[Tuple[TableSpec, ...]]


@dataclass(frozen=True)
class Bin:
    kind: str
    capacity: int
    limit: int


@dataclass(frozen=True)
class SearchLevel:
    """Placements whose busiest bins hold at most the given table counts."""

    latency_ns: float
    bank_limit: int
    channel_limit: int


def enumerate_groupings(
    tables: Sequence[TableSpec], max_group_size: int, cap_bytes: Optional[int]
) -> Iterator[Grouping]:
    """Every partition of tables into singles and groups within the cap."""

    def extend(remaining: Tuple[TableSpec, ...], groups: Grouping):
        if not remaining:
            yield groups
            return
        first, rest = remaining[0], remaining[1:]
        yield from extend(rest, groups + [(first,)])
        for size in range(1, max_group_size):
            for partners in combinations(rest, size):
                members = (first, *partners)
                if not product_fits(members, cap_bytes):
                    continue
                taken = {t.id for t in partners}
                left = tuple(t for t in rest if t.id not in taken)
                yield from extend(left, groups + [members])

    yield from extend(tuple(sorted(tables, key=lambda t: t.id)), [])


def to_physical(grouping: Grouping, cap_bytes: Optional[int]) -> List[PhysicalTable]:
    return [
        PhysicalTable.single(members[0])
        if len(members) == 1
        else PhysicalTable.from_group(combine_many(members, cap_bytes))
        for members in grouping
    ]


def search_levels(
    table_count: int, hierarchy: MemoryHierarchySpec, lookups_per_table: int
) -> List[SearchLevel]:
    onchip_ns = lookups_per_table * hierarchy.onchip_access_ns
    levels = []
    if hierarchy.onchip_banks:
        # everything on-chip, a bank may not be slower than one off-chip access
        for bank_limit in range(1, table_count + 1):
            latency = bank_limit * onchip_ns
            if latency > hierarchy.dram_access_ns + LATENCY_TOLERANCE_NS:
                break
            levels.append(SearchLevel(latency, bank_limit, 0))
    for rounds in range(1, table_count + 1):
        latency = rounds * lookups_per_table * hierarchy.dram_access_ns
        bank_limit = math.floor((latency + LATENCY_TOLERANCE_NS) / onchip_ns)
        levels.append(SearchLevel(latency, bank_limit, rounds))
    return levels


def find_assignment(
    tables: Sequence[PhysicalTable], bins: Sequence[Bin], busiest_channel: int
) -> Optional[List[List[PhysicalTable]]]:
    """Backtracking bin assignment, largest table first.

    Bins of the same kind and capacity holding the same count and load are
    interchangeable, so only the first of them is tried. At least one
    channel must end with exactly busiest_channel tables.
    """
    ordered = sorted(tables, key=lambda t: (-t.byte_size, t.first_id))
    counts = [0] * len(bins)
    loads = [0] * len(bins)
    assignment: List[List[PhysicalTable]] = [[] for _ in bins]
    if len(ordered) > sum(b.limit for b in bins):
        return None

    def place(position: int) -> bool:
        if position == len(ordered):
            return busiest_channel == 0 or any(
                b.kind != "onchip" and counts[i] == busiest_channel
                for i, b in enumerate(bins)
            )
        table = ordered[position]
        seen = set()
        for i, bin_ in enumerate(bins):
            state = (bin_.kind, bin_.capacity, counts[i], loads[i])
            if state in seen:
                continue
            seen.add(state)
            if counts[i] >= bin_.limit or loads[i] + table.byte_size > bin_.capacity:
                continue
            counts[i] += 1
            loads[i] += table.byte_size
            assignment[i].append(table)
            if place(position + 1):
                return True
            counts[i] -= 1
            loads[i] -= table.byte_size
            assignment[i].pop()
        return False

    return assignment if place(0) else None


def best_placement(
    tables: Sequence[PhysicalTable],
    hierarchy: MemoryHierarchySpec,
    lookups_per_table: int,
    ceiling: Optional[CostEstimate] = None,
) -> Optional[PlacementPlan]:
    """Lowest-latency valid placement, None if none beats the ceiling."""
    total_bytes = sum(t.byte_size for t in tables)
    for level in search_levels(len(tables), hierarchy, lookups_per_table):
        if ceiling is not None and (level.latency_ns, total_bytes) >= (
            ceiling.sort_key()
        ):
            return None
        bins = [
            Bin("onchip", hierarchy.onchip_bank_capacity, level.bank_limit)
            for _ in range(hierarchy.onchip_banks)
        ] + [
            Bin(channel.kind, channel.capacity, level.channel_limit)
            for channel in hierarchy.offchip_channels
        ]
        assignment = find_assignment(tables, bins, level.channel_limit)
        if assignment is not None:
            banks = hierarchy.onchip_banks
            return PlacementPlan.create(
                assignment[:banks], assignment[banks:], lookups_per_table
            )
    return None


def brute_force_plan(
    model: ModelSpec,
    hierarchy: MemoryHierarchySpec,
    settings: Optional[PlannerSettings] = None,
    limit: Optional[int] = None,
) -> Tuple[PlacementPlan, CostEstimate]:
    """Exhaustive search for the optimum of (lookup latency, total bytes)."""
    settings = settings or PlannerSettings()
    limit = limit if limit is not None else settings.oracle_limit
    if model.n_tables > limit:
        raise OracleLimitExceeded(
            f"Brute-force search accepts up to {limit} tables, got {model.n_tables}."
        )

    max_group_size = settings.oracle_max_group_size if settings.allow_cartesian else 1
    best_plan: Optional[PlacementPlan] = None
    best_cost: Optional[CostEstimate] = None
    groupings = 0
    for grouping in enumerate_groupings(
        model.tables, max_group_size, settings.product_cap_bytes
    ):
        groupings += 1
        physical = to_physical(grouping, settings.product_cap_bytes)
        plan = best_placement(
            physical, hierarchy, model.lookups_per_table, ceiling=best_cost
        )
        if plan is None:
            continue
        estimate = cost(plan, hierarchy)
        if estimate.is_better_than(best_cost):
            best_plan, best_cost = plan, estimate

    if best_plan is None or best_cost is None:
        raise InfeasiblePlacement("No grouping of the tables can be placed.")

    validate_plan(best_plan, model, hierarchy, settings.product_cap_bytes)
    logger.info(
        "Oracle searched %s groupings: %s ns, %s bytes.",
        groupings,
        best_cost.lookup_latency_ns,
        best_cost.total_bytes,
    )
    return best_plan, best_cost
