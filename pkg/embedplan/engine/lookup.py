from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..cartesian import PhysicalTable, product_index
from ..exceptions import IndexOutOfRange, ShapeMismatch
from ..model import ModelSpec
from .store import EmbeddingStore

Rows = List[np.ndarray]


@dataclass(frozen=True)
class Query:
    """Row index per table and lookup, table-major."""

    indices: Tuple[int, ...]

    def validate(self, model: ModelSpec) -> None:
        expected = model.n_tables * model.lookups_per_table
        if len(self.indices) != expected:
            raise ShapeMismatch(
                f"Query holds {len(self.indices)} indices, expected {expected}."
            )
        for position, index in enumerate(self.indices):
            table = model.table(position // model.lookups_per_table)
            if not 0 <= index < table.rows:
                raise IndexOutOfRange(
                    f"Index {index} out of range for table {table.id} "
                    f"with {table.rows} rows."
                )

    def table_indices(self, table_id: int, lookups_per_table: int) -> Sequence[int]:
        start = table_id * lookups_per_table
        return self.indices[start : start + lookups_per_table]


def read_physical(
    store: EmbeddingStore, table: PhysicalTable, query: Query
) -> Rows:
    """One physical row per lookup of the table's members."""
    lookups = store.plan.lookups_per_table
    member_indices = [query.table_indices(m.id, lookups) for m in table.members]
    rows = []
    for lookup in range(lookups):
        indices = [indices[lookup] for indices in member_indices]
        flat = (
            product_index(table.source, indices)  # type: ignore
            if table.is_group
            else indices[0]
        )
        rows.append(store.row(table, flat))
    return rows


def read_bin(
    store: EmbeddingStore, tables: Sequence[PhysicalTable], query: Query
) -> Dict[Tuple[int, ...], Rows]:
    # tables in one bank or channel are read one after another
    return {table.ids: read_physical(store, table, query) for table in tables}


def lookup_concat(
    store: EmbeddingStore, query: Query, parallel: bool = False
) -> np.ndarray:
    """Concatenated embedding vectors of query, in table id order."""
    query.validate(store.model)
    plan = store.plan
    bins = [bin_ for bin_ in (*plan.onchip, *plan.offchip) if bin_]

    fetched: Dict[Tuple[int, ...], Rows] = {}
    if parallel and len(bins) > 1:
        with ThreadPoolExecutor() as executor:
            for result in executor.map(lambda b: read_bin(store, b, query), bins):
                fetched.update(result)
    else:
        for bin_ in bins:
            fetched.update(read_bin(store, bin_, query))

    output = np.empty(store.model.concat_length, dtype=np.float32)
    for concat_slice in plan.concat_map:
        rows = fetched[concat_slice.physical.ids]
        start = concat_slice.output_offset
        end = concat_slice.slice_offset + concat_slice.slice_length
        for row in rows:
            output[start : start + concat_slice.slice_length] = row[
                concat_slice.slice_offset : end
            ]
            start += concat_slice.slice_length
    return output
