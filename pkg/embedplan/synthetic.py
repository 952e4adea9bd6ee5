import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .exceptions import InvalidConfiguration
from .model import KIB, MIB, MemoryHierarchySpec, ModelSpec, TableSpec

logger = logging.getLogger(__name__)

DEFAULT_DIMS = (4, 8, 16, 32, 64)
DEFAULT_HIDDEN_DIMS = (1024, 512, 256)
DEFAULT_MAX_TABLE_BYTES = 64 * MIB


@dataclass(frozen=True)
class SizeBand:
    """Group of tables with log-uniform row counts in [min_rows, max_rows]."""

    count: int
    min_rows: int
    max_rows: int
    dims: Tuple[int, ...] = DEFAULT_DIMS
    elem_bits: int = 32

    def __post_init__(self):
        if self.count < 0:
            raise InvalidConfiguration("Band count must not be negative.")
        if not 1 <= self.min_rows <= self.max_rows:
            raise InvalidConfiguration(
                f"Invalid band rows range [{self.min_rows}, {self.max_rows}]."
            )
        if not self.dims or any(dim < 1 for dim in self.dims):
            raise InvalidConfiguration("Band dims must be positive.")
        if self.elem_bits not in (16, 32):
            raise InvalidConfiguration("Band elem_bits must be 16 or 32.")


@dataclass(frozen=True)
class SizeProfile:
    name: str
    bands: Tuple[SizeBand, ...]
    hidden_dims: Tuple[int, ...] = DEFAULT_HIDDEN_DIMS
    max_table_bytes: int = DEFAULT_MAX_TABLE_BYTES
    hierarchy: MemoryHierarchySpec = field(default_factory=MemoryHierarchySpec)

    def __post_init__(self):
        if not self.bands:
            raise InvalidConfiguration("Profile needs at least one band.")

    @property
    def n_tables(self) -> int:
        return sum(band.count for band in self.bands)


def band_counts(profile: SizeProfile, n_tables: int) -> List[int]:
    """Band sizes adjusted so they sum up to n_tables.

    The last band absorbs any difference, trailing bands are emptied first when
    the profile holds more tables than requested.
    """
    counts = [band.count for band in profile.bands]
    difference = n_tables - sum(counts)
    if difference >= 0:
        counts[-1] += difference
        return counts
    for position in reversed(range(len(counts))):
        removed = min(counts[position], -difference)
        counts[position] -= removed
        difference += removed
        if difference == 0:
            break
    return counts


def draw_rows(rng: np.random.Generator, band: SizeBand, count: int) -> np.ndarray:
    log_rows = rng.uniform(math.log(band.min_rows), math.log(band.max_rows), count)
    return np.clip(np.rint(np.exp(log_rows)), band.min_rows, band.max_rows).astype(
        np.int64
    )


def generate_synthetic(
    n_tables: int, size_profile: Optional[SizeProfile] = None, seed: int = 0
) -> ModelSpec:
    """Deterministic synthetic model, a pure function of its arguments."""
    if n_tables < 1:
        raise InvalidConfiguration("Number of tables must be at least 1.")
    profile = size_profile or DEFAULT_PROFILE
    rng = np.random.default_rng(seed)

    tables: List[Dict[str, int]] = []
    for band, count in zip(profile.bands, band_counts(profile, n_tables)):
        if not count:
            continue
        rows = draw_rows(rng, band, count)
        dims = rng.choice(np.array(band.dims, dtype=np.int64), size=count)
        elem_bytes = band.elem_bits // 8
        for row_count, dim in zip(rows.tolist(), dims.tolist()):
            max_rows = max(1, profile.max_table_bytes // (dim * elem_bytes))
            tables.append(
                {
                    "rows": min(row_count, max_rows),
                    "dim": dim,
                    "elem_bits": band.elem_bits,
                }
            )

    order = rng.permutation(len(tables)).tolist()
    model = ModelSpec(
        tables=tuple(TableSpec(**tables[i]) for i in order),
        hidden_dims=profile.hidden_dims,
    )
    logger.debug(
        "Generated %s tables from profile %s with seed %s.",
        model.n_tables,
        profile.name,
        seed,
    )
    return model


DEFAULT_PROFILE = SizeProfile(
    name="default",
    bands=(SizeBand(count=1, min_rows=16, max_rows=1 << 20),),
)

SMALL_MODEL_PROFILE = SizeProfile(
    name="table3-small",
    bands=(
        SizeBand(count=8, min_rows=16, max_rows=64, dims=(4,)),
        SizeBand(count=10, min_rows=80, max_rows=128, dims=(8,)),
        SizeBand(count=7, min_rows=1 << 12, max_rows=1 << 18, dims=(8,)),
        SizeBand(count=14, min_rows=1 << 12, max_rows=1 << 18, dims=(4,)),
        SizeBand(count=8, min_rows=1 << 19, max_rows=1 << 20, dims=(16,)),
    ),
    hierarchy=MemoryHierarchySpec(onchip_banks=8, onchip_bank_capacity=2 * KIB),
)

LARGE_MODEL_PROFILE = SizeProfile(
    name="table3-large",
    bands=(
        SizeBand(count=16, min_rows=16, max_rows=64, dims=(4,)),
        SizeBand(count=28, min_rows=80, max_rows=128, dims=(8,)),
        SizeBand(count=21, min_rows=1 << 12, max_rows=1 << 18, dims=(8,)),
        SizeBand(count=9, min_rows=1 << 12, max_rows=1 << 18, dims=(4,)),
        SizeBand(count=24, min_rows=1 << 19, max_rows=1 << 20, dims=(16,)),
    ),
    hierarchy=MemoryHierarchySpec(onchip_banks=16, onchip_bank_capacity=2 * KIB),
)

PROFILES: Dict[str, SizeProfile] = {
    profile.name: profile
    for profile in (DEFAULT_PROFILE, SMALL_MODEL_PROFILE, LARGE_MODEL_PROFILE)
}


def get_profile(name: str) -> SizeProfile:
    try:
        return PROFILES[name]
    except KeyError as exc:
        valid_options = ", ".join(PROFILES)
        raise InvalidConfiguration(
            f"'{name}' is not a valid profile. Valid options are: {valid_options}"
        ) from exc
