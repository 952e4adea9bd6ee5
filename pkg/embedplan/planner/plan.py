from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from ..cartesian import CartesianGroup, PhysicalTable
from ..exceptions import InvalidPlan
from ..model import MemoryHierarchySpec, ModelSpec

ONCHIP = "onchip"
OFFCHIP = "offchip"

LATENCY_TOLERANCE_NS = 1e-9


@dataclass(frozen=True)
class ConcatSlice:
    """Where a logical table's vector lives and where it goes in the output."""

    table_id: int
    physical: PhysicalTable
    location: str
    bin_index: int
    slice_offset: int
    slice_length: int
    output_offset: int
    output_length: int


@dataclass(frozen=True)
class PlacementPlan:
    onchip: Tuple[Tuple[PhysicalTable, ...], ...]
    offchip: Tuple[Tuple[PhysicalTable, ...], ...]
    concat_map: Tuple[ConcatSlice, ...]
    lookups_per_table: int = 1

    @classmethod
    def create(
        cls,
        onchip: Sequence[Sequence[PhysicalTable]],
        offchip: Sequence[Sequence[PhysicalTable]],
        lookups_per_table: int = 1,
    ) -> "PlacementPlan":
        onchip_bins = tuple(tuple(bank) for bank in onchip)
        offchip_bins = tuple(tuple(channel) for channel in offchip)
        return cls(
            onchip=onchip_bins,
            offchip=offchip_bins,
            concat_map=build_concat_map(onchip_bins, offchip_bins, lookups_per_table),
            lookups_per_table=lookups_per_table,
        )

    @property
    def physical_tables(self) -> List[PhysicalTable]:
        return [t for bin_ in (*self.onchip, *self.offchip) for t in bin_]

    @property
    def onchip_tables(self) -> List[PhysicalTable]:
        return [t for bank in self.onchip for t in bank]

    @property
    def offchip_tables(self) -> List[PhysicalTable]:
        return [t for channel in self.offchip for t in channel]

    @property
    def groups(self) -> List[CartesianGroup]:
        groups = [t.source for t in self.physical_tables if t.is_group]
        return sorted(groups, key=lambda g: min(g.ids))  # type: ignore

    @property
    def cartesian_pairs(self) -> List[Tuple[int, ...]]:
        return [group.ids for group in self.groups]

    @property
    def total_bytes(self) -> int:
        return sum(t.byte_size for t in self.physical_tables)

    @property
    def original_bytes(self) -> int:
        return sum(m.byte_size for t in self.physical_tables for m in t.members)


def build_concat_map(
    onchip: Tuple[Tuple[PhysicalTable, ...], ...],
    offchip: Tuple[Tuple[PhysicalTable, ...], ...],
    lookups_per_table: int,
) -> Tuple[ConcatSlice, ...]:
    located: Dict[int, Tuple[PhysicalTable, str, int, int]] = {}
    for location, bins in ((ONCHIP, onchip), (OFFCHIP, offchip)):
        for bin_index, bin_ in enumerate(bins):
            for table in bin_:
                for member, offset in zip(table.members, table.member_offsets):
                    if member.id in located:
                        raise InvalidPlan(f"Table {member.id} placed more than once.")
                    located[member.id] = (table, location, bin_index, offset)

    slices = []
    output_offset = 0
    for table_id in sorted(located):
        table, location, bin_index, offset = located[table_id]
        dim = next(m.dim for m in table.members if m.id == table_id)
        slices.append(
            ConcatSlice(
                table_id=table_id,
                physical=table,
                location=location,
                bin_index=bin_index,
                slice_offset=offset,
                slice_length=dim,
                output_offset=output_offset,
                output_length=dim * lookups_per_table,
            )
        )
        output_offset += dim * lookups_per_table
    return tuple(slices)


@dataclass(frozen=True)
class CostEstimate:
    dram_rounds: int
    onchip_critical_ns: float
    dram_critical_ns: float
    lookup_latency_ns: float
    total_bytes: int
    overhead_ratio: float

    def sort_key(self) -> Tuple[float, int]:
        return (self.lookup_latency_ns, self.total_bytes)

    def is_better_than(self, other: Optional["CostEstimate"]) -> bool:
        return other is None or self.sort_key() < other.sort_key()


def dram_rounds(plan: PlacementPlan) -> int:
    busiest = max((len(channel) for channel in plan.offchip), default=0)
    return busiest * plan.lookups_per_table


def onchip_bound_ns(rounds: int, hierarchy: MemoryHierarchySpec) -> float:
    """Latency ceiling of an on-chip bank: no slower than the off-chip path."""
    return max(rounds, 1) * hierarchy.dram_access_ns


def cost(plan: PlacementPlan, hierarchy: MemoryHierarchySpec) -> CostEstimate:
    rounds = dram_rounds(plan)
    busiest_bank = max((len(bank) for bank in plan.onchip), default=0)
    onchip_critical = (
        busiest_bank * plan.lookups_per_table * hierarchy.onchip_access_ns
    )
    dram_critical = rounds * hierarchy.dram_access_ns
    total = plan.total_bytes
    return CostEstimate(
        dram_rounds=rounds,
        onchip_critical_ns=onchip_critical,
        dram_critical_ns=dram_critical,
        lookup_latency_ns=max(onchip_critical, dram_critical),
        total_bytes=total,
        overhead_ratio=total / plan.original_bytes,
    )


def satisfies_onchip_bound(plan: PlacementPlan, hierarchy: MemoryHierarchySpec) -> bool:
    bound = onchip_bound_ns(dram_rounds(plan), hierarchy)
    return all(
        len(bank) * plan.lookups_per_table * hierarchy.onchip_access_ns
        <= bound + LATENCY_TOLERANCE_NS
        for bank in plan.onchip
    )


def validate_plan(
    plan: PlacementPlan,
    model: ModelSpec,
    hierarchy: MemoryHierarchySpec,
    cap_bytes: Optional[int] = None,
) -> None:
    """Raise InvalidPlan if plan breaks coverage, capacity, tiling or rule 4."""
    if len(plan.onchip) != hierarchy.onchip_banks:
        raise InvalidPlan(
            f"Plan has {len(plan.onchip)} on-chip banks, "
            f"hierarchy has {hierarchy.onchip_banks}."
        )
    if len(plan.offchip) != hierarchy.offchip_count:
        raise InvalidPlan(
            f"Plan has {len(plan.offchip)} off-chip channels, "
            f"hierarchy has {hierarchy.offchip_count}."
        )
    if plan.lookups_per_table != model.lookups_per_table:
        raise InvalidPlan("Plan and model disagree on lookups_per_table.")

    members = [m for t in plan.physical_tables for m in t.members]
    if sorted(m.id for m in members) != list(range(model.n_tables)):
        raise InvalidPlan("Plan must cover every table exactly once.")
    for member in members:
        if member != model.table(member.id):
            raise InvalidPlan(f"Table {member.id} does not match the model.")

    for table in plan.physical_tables:
        if table.is_group:
            if len({m.elem_bits for m in table.members}) != 1:
                raise InvalidPlan(f"Group {table.ids} mixes element widths.")
            if cap_bytes is not None and table.byte_size > cap_bytes:
                raise InvalidPlan(f"Group {table.ids} exceeds the product cap.")

    for index, bank in enumerate(plan.onchip):
        used = sum(t.byte_size for t in bank)
        if used > hierarchy.onchip_bank_capacity:
            raise InvalidPlan(f"On-chip bank {index} holds {used} bytes.")
    for index, channel in enumerate(plan.offchip):
        used = sum(t.byte_size for t in channel)
        if used > hierarchy.channel_capacity(index):
            raise InvalidPlan(f"Off-chip channel {index} holds {used} bytes.")

    validate_concat_map(plan, model)

    if not satisfies_onchip_bound(plan, hierarchy):
        raise InvalidPlan(
            "On-chip bank lookups exceed the off-chip critical path "
            f"of {onchip_bound_ns(dram_rounds(plan), hierarchy)} ns."
        )


def validate_concat_map(plan: PlacementPlan, model: ModelSpec) -> None:
    if [s.table_id for s in plan.concat_map] != list(range(model.n_tables)):
        raise InvalidPlan("Concat map must list every table in id order.")
    expected_offset = 0
    for concat_slice in plan.concat_map:
        table = model.table(concat_slice.table_id)
        if concat_slice.output_offset != expected_offset:
            raise InvalidPlan(
                f"Concat slice of table {table.id} starts at "
                f"{concat_slice.output_offset}, expected {expected_offset}."
            )
        if (
            concat_slice.slice_length != table.dim
            or concat_slice.output_length != table.dim * model.lookups_per_table
        ):
            raise InvalidPlan(f"Concat slice of table {table.id} has wrong length.")
        physical = concat_slice.physical
        position = physical.ids.index(table.id)
        if concat_slice.slice_offset != physical.member_offsets[position]:
            raise InvalidPlan(f"Concat slice of table {table.id} has wrong offset.")
        expected_offset += concat_slice.output_length
    if expected_offset != model.concat_length:
        raise InvalidPlan("Concat map does not tile the concat length.")
