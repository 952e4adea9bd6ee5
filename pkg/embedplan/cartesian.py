import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import IndexOutOfRange, InvalidPlan, ProductTooLarge
from .model import MIB, TableSpec

DEFAULT_PRODUCT_CAP_BYTES = 256 * MIB


def member_order_key(table: TableSpec) -> Tuple[int, int]:
    # larger table first, ties by lower id
    return (-table.byte_size, table.id)


@dataclass(frozen=True)
class CartesianGroup:
    """Precomputed Cartesian product of two or more embedding tables.

    The first member's index is the most significant digit of the product's
    row address.
    """

    members: Tuple[TableSpec, ...]

    def __post_init__(self):
        if len(self.members) < 2:
            raise InvalidPlan("Cartesian group needs at least two members.")
        if len({m.elem_bits for m in self.members}) != 1:
            raise InvalidPlan("Cartesian group members must share elem_bits.")

    @property
    def ids(self) -> Tuple[int, ...]:
        return tuple(m.id for m in self.members)

    @property
    def elem_bits(self) -> int:
        return self.members[0].elem_bits

    @property
    def combined_rows(self) -> int:
        return math.prod(m.rows for m in self.members)

    @property
    def combined_dim(self) -> int:
        return sum(m.dim for m in self.members)

    @property
    def byte_size(self) -> int:
        return self.combined_rows * self.combined_dim * self.elem_bits // 8


@dataclass(frozen=True)
class PhysicalTable:
    """Table as stored in memory: a single logical table or a product."""

    source: Union[int, CartesianGroup]
    members: Tuple[TableSpec, ...]

    @classmethod
    def single(cls, table: TableSpec) -> "PhysicalTable":
        return cls(source=table.id, members=(table,))

    @classmethod
    def from_group(cls, group: CartesianGroup) -> "PhysicalTable":
        return cls(source=group, members=group.members)

    @property
    def is_group(self) -> bool:
        return isinstance(self.source, CartesianGroup)

    @property
    def ids(self) -> Tuple[int, ...]:
        return tuple(m.id for m in self.members)

    @property
    def first_id(self) -> int:
        return min(self.ids)

    @property
    def elem_bits(self) -> int:
        return self.members[0].elem_bits

    @property
    def rows(self) -> int:
        return math.prod(m.rows for m in self.members)

    @property
    def dim(self) -> int:
        return sum(m.dim for m in self.members)

    @property
    def byte_size(self) -> int:
        return self.rows * self.dim * self.elem_bits // 8

    @property
    def member_offsets(self) -> Tuple[int, ...]:
        """Offset of every member's vector inside a physical row."""
        offsets = [0]
        for member in self.members[:-1]:
            offsets.append(offsets[-1] + member.dim)
        return tuple(offsets)

    def size_key(self) -> Tuple[int, int]:
        return (self.byte_size, self.first_id)


def combine(
    a: TableSpec, b: TableSpec, cap_bytes: Optional[int] = DEFAULT_PRODUCT_CAP_BYTES
) -> CartesianGroup:
    """Cartesian product of two tables."""
    return combine_many((a, b), cap_bytes=cap_bytes)


def combine_many(
    tables: Iterable[TableSpec],
    cap_bytes: Optional[int] = DEFAULT_PRODUCT_CAP_BYTES,
) -> CartesianGroup:
    group = CartesianGroup(members=tuple(sorted(tables, key=member_order_key)))
    if cap_bytes is not None and group.byte_size > cap_bytes:
        raise ProductTooLarge(
            f"Product of tables {list(group.ids)} takes {group.byte_size} bytes, "
            f"cap is {cap_bytes}."
        )
    return group


def product_fits(
    tables: Sequence[TableSpec], cap_bytes: Optional[int] = DEFAULT_PRODUCT_CAP_BYTES
) -> bool:
    if len({t.elem_bits for t in tables}) > 1:
        return False
    if cap_bytes is None:
        return True
    rows = math.prod(t.rows for t in tables)
    dim = sum(t.dim for t in tables)
    return rows * dim * tables[0].elem_bits // 8 <= cap_bytes


def product_index(group: CartesianGroup, member_indices: Sequence[int]) -> int:
    """Mixed-radix row address of the product row holding member_indices."""
    if len(member_indices) != len(group.members):
        raise IndexOutOfRange(
            f"Expected {len(group.members)} indices, got {len(member_indices)}."
        )
    flat = 0
    for member, index in zip(group.members, member_indices):
        if not 0 <= index < member.rows:
            raise IndexOutOfRange(
                f"Index {index} out of range for table {member.id} "
                f"with {member.rows} rows."
            )
        flat = flat * member.rows + index
    return flat


def split_index(group: CartesianGroup, flat: int) -> Tuple[int, ...]:
    """Inverse of product_index."""
    if not 0 <= flat < group.combined_rows:
        raise IndexOutOfRange(
            f"Index {flat} out of range for product of {group.combined_rows} rows."
        )
    indices: List[int] = []
    for member in reversed(group.members):
        flat, index = divmod(flat, member.rows)
        indices.append(index)
    return tuple(reversed(indices))


def materialize(
    group: CartesianGroup,
    member_contents: Sequence[np.ndarray],
    cap_bytes: Optional[int] = DEFAULT_PRODUCT_CAP_BYTES,
) -> np.ndarray:
    """Row-major contents of the product table.

    Row product_index(i_a, i_b, ...) is the concatenation of the member rows.
    """
    if cap_bytes is not None and group.byte_size > cap_bytes:
        raise ProductTooLarge(
            f"Product of tables {list(group.ids)} takes {group.byte_size} bytes, "
            f"cap is {cap_bytes}."
        )
    if len(member_contents) != len(group.members):
        raise InvalidPlan("Contents must be provided for every group member.")
    for member, contents in zip(group.members, member_contents):
        if contents.shape != (member.rows, member.dim):
            raise InvalidPlan(
                f"Contents of table {member.id} have shape {contents.shape}, "
                f"expected {(member.rows, member.dim)}."
            )

    rows = group.combined_rows
    product = np.empty((rows, group.combined_dim), dtype=member_contents[0].dtype)
    offset = 0
    repeat = rows
    tile = 1
    for member, contents in zip(group.members, member_contents):
        repeat //= member.rows
        block = np.repeat(contents, repeat, axis=0)
        product[:, offset : offset + member.dim] = np.tile(block, (tile, 1))
        tile *= member.rows
        offset += member.dim
    return product


def storage_overhead(
    original: Sequence[TableSpec], transformed: Sequence[PhysicalTable]
) -> float:
    """Ratio of transformed storage to original storage."""
    covered = sorted(i for table in transformed for i in table.ids)
    if covered != sorted(t.id for t in original):
        raise InvalidPlan("Transformed tables must cover every table exactly once.")
    original_bytes = sum(t.byte_size for t in original)
    return sum(t.byte_size for t in transformed) / original_bytes
