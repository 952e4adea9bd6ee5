import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from ..cartesian import PhysicalTable, materialize
from ..exceptions import StoreTooLarge
from ..model import GIB, ModelSpec, TableSpec
from ..planner.plan import PlacementPlan

logger = logging.getLogger(__name__)

DEFAULT_MAX_STORE_BYTES = 2 * GIB
Q15_SCALE = float(1 << 15)


def quantize_q15(values: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(values * Q15_SCALE), -(1 << 15), (1 << 15) - 1).astype(
        np.int16
    )


def dequantize_q15(values: np.ndarray) -> np.ndarray:
    return values.astype(np.float32) / np.float32(Q15_SCALE)


def logical_contents(table: TableSpec, seed: int) -> np.ndarray:
    """Stored contents of a logical table, a pure function of (seed, table id).

    16-bit tables hold Q1.15 fixed-point values.
    """
    rng = np.random.default_rng(np.random.SeedSequence([seed, table.id]))
    values = rng.uniform(-1.0, 1.0, size=(table.rows, table.dim)).astype(np.float32)
    if table.elem_bits == 16:
        return quantize_q15(values)
    return values


@dataclass(frozen=True)
class EmbeddingStore:
    model: ModelSpec
    plan: PlacementPlan
    seed: int
    contents: Dict[Tuple[int, ...], np.ndarray]

    def row(self, table: PhysicalTable, index: int) -> np.ndarray:
        """Physical row as float32, dequantized for 16-bit tables."""
        row = self.contents[table.ids][index]
        if table.elem_bits == 16:
            return dequantize_q15(row)
        return row

    @property
    def nbytes(self) -> int:
        return sum(array.nbytes for array in self.contents.values())


def build_store(
    model: ModelSpec,
    plan: PlacementPlan,
    seed: int = 0,
    max_bytes: Optional[int] = DEFAULT_MAX_STORE_BYTES,
) -> EmbeddingStore:
    """Materialize every physical table of plan from seeded logical tables."""
    if max_bytes is not None and plan.total_bytes > max_bytes:
        raise StoreTooLarge(
            f"Store needs {plan.total_bytes} bytes, memory cap is {max_bytes}."
        )

    contents: Dict[Tuple[int, ...], np.ndarray] = {}
    for table in plan.physical_tables:
        members = [logical_contents(member, seed) for member in table.members]
        if table.is_group:
            contents[table.ids] = materialize(
                table.source, members, cap_bytes=None  # type: ignore
            )
        else:
            contents[table.ids] = members[0]
        contents[table.ids].setflags(write=False)

    logger.debug(
        "Built store of %s physical tables, %s bytes.", len(contents), plan.total_bytes
    )
    return EmbeddingStore(model=model, plan=plan, seed=seed, contents=contents)
