from typing import List, Sequence, Tuple

from embedplan.cartesian import PhysicalTable, combine
from embedplan.model import MemoryHierarchySpec, ModelSpec, TableSpec

Shape = Tuple[int, int]


def make_model(
    shapes: Sequence[Shape],
    elem_bits: int = 32,
    hidden_dims: Sequence[int] = (8, 4),
    lookups_per_table: int = 1,
) -> ModelSpec:
    return ModelSpec(
        tables=tuple(
            TableSpec(rows=rows, dim=dim, elem_bits=elem_bits) for rows, dim in shapes
        ),
        hidden_dims=tuple(hidden_dims),
        lookups_per_table=lookups_per_table,
    )


def singles(model: ModelSpec) -> List[PhysicalTable]:
    return [PhysicalTable.single(table) for table in model.tables]


def pair(model: ModelSpec, a: int, b: int) -> PhysicalTable:
    return PhysicalTable.from_group(combine(model.table(a), model.table(b)))


def offchip_hierarchy(
    channels: int, capacity: int = 1 << 30, **kwargs
) -> MemoryHierarchySpec:
    """Hierarchy of HBM channels only, no on-chip banks unless given."""
    options = {
        "hbm_channels": channels,
        "hbm_channel_capacity": capacity,
        "ddr_channels": 0,
        "onchip_banks": 0,
        "onchip_bank_capacity": 0,
        **kwargs,
    }
    return MemoryHierarchySpec(**options)
