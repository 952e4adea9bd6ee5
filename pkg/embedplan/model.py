from typing import List, Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, model_validator

KIB = 1024
MIB = 1024 * KIB
GIB = 1024 * MIB

ElemBits = Literal[16, 32]


class FrozenModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class TableSpec(FrozenModel):
    """Logical embedding table."""

    id: int = Field(default=0, ge=0)
    rows: int = Field(ge=1)
    dim: int = Field(ge=1)
    elem_bits: ElemBits = 32

    @property
    def elem_bytes(self) -> int:
        return self.elem_bits // 8

    @property
    def byte_size(self) -> int:
        return self.rows * self.dim * self.elem_bytes


class OffchipChannel(FrozenModel):
    index: int
    kind: Literal["hbm", "ddr"]
    capacity: int


class MemoryHierarchySpec(FrozenModel):
    hbm_channels: int = Field(default=32, ge=0)
    hbm_channel_capacity: int = Field(default=256 * MIB, ge=0)
    ddr_channels: int = Field(default=2, ge=0)
    ddr_channel_capacity: int = Field(default=16 * GIB, ge=0)
    onchip_banks: int = Field(default=8, ge=0)
    onchip_bank_capacity: int = Field(default=32 * KIB, ge=0)
    dram_access_ns: float = Field(default=300.0, gt=0)
    onchip_access_ns: float = Field(default=100.0, gt=0)

    @model_validator(mode="after")
    def check_channels_and_latencies(self) -> "MemoryHierarchySpec":
        if self.hbm_channels + self.ddr_channels < 1:
            raise ValueError("at least one off-chip channel is required")
        if self.onchip_access_ns > self.dram_access_ns:
            raise ValueError("onchip_access_ns must not exceed dram_access_ns")
        return self

    @property
    def offchip_count(self) -> int:
        return self.hbm_channels + self.ddr_channels

    @property
    def offchip_channels(self) -> Tuple[OffchipChannel, ...]:
        """Unified off-chip channel list, HBM channels first, then DDR."""
        hbm = [
            OffchipChannel(index=i, kind="hbm", capacity=self.hbm_channel_capacity)
            for i in range(self.hbm_channels)
        ]
        ddr = [
            OffchipChannel(
                index=self.hbm_channels + i,
                kind="ddr",
                capacity=self.ddr_channel_capacity,
            )
            for i in range(self.ddr_channels)
        ]
        return tuple(hbm + ddr)

    def channel_capacity(self, index: int) -> int:
        if index < self.hbm_channels:
            return self.hbm_channel_capacity
        return self.ddr_channel_capacity


class ModelSpec(FrozenModel):
    tables: Tuple[TableSpec, ...] = Field(min_length=1)
    hidden_dims: Tuple[PositiveInt, ...] = (1024, 512, 256)
    lookups_per_table: int = Field(default=1, ge=1)

    @model_validator(mode="before")
    @classmethod
    def assign_table_ids(cls, data):
        if isinstance(data, dict) and isinstance(data.get("tables"), (list, tuple)):
            tables = []
            for position, table in enumerate(data["tables"]):
                if isinstance(table, TableSpec):
                    table = table.model_dump()
                if isinstance(table, dict):
                    table = {**table, "id": position}
                tables.append(table)
            data = {**data, "tables": tables}
        return data

    @property
    def n_tables(self) -> int:
        return len(self.tables)

    @property
    def concat_length(self) -> int:
        return sum(table.dim for table in self.tables) * self.lookups_per_table

    @property
    def total_bytes(self) -> int:
        return sum(table.byte_size for table in self.tables)

    def table(self, table_id: int) -> TableSpec:
        return self.tables[table_id]

    def layer_shapes(self) -> List[Tuple[int, int]]:
        """(in, out) of every FC layer, ending in the 1-wide output layer."""
        widths = [self.concat_length, *self.hidden_dims, 1]
        return list(zip(widths[:-1], widths[1:]))
