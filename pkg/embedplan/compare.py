import csv
import logging
import math
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, TextIO, Tuple

import numpy as np

from .exceptions import OracleLimitExceeded
from .model import KIB, MIB, MemoryHierarchySpec, ModelSpec, TableSpec
from .planner.heuristic import heuristic_plan
from .planner.oracle import brute_force_plan
from .settings import PlannerSettings

logger = logging.getLogger(__name__)

COMPARE_HBM_CHANNELS = (1, 2)
COMPARE_HBM_CAPACITY = 64 * MIB
COMPARE_BANKS = (1, 2)
COMPARE_BANK_CAPACITIES = (256, 512, 1024)
COMPARE_PRODUCT_CAP_BYTES = 16 * KIB
COMPARE_DIMS = (4, 8)
COMPARE_ROWS = (2, 64)

CSV_HEADER = [
    "n",
    "instances",
    "match_rate",
    "mean_latency_gap_ns",
    "max_latency_ratio",
]


@dataclass(frozen=True)
class InstanceComparison:
    n_tables: int
    seed: int
    heuristic_latency_ns: float
    oracle_latency_ns: float
    heuristic_bytes: int
    oracle_bytes: int

    @property
    def matches(self) -> bool:
        return self.heuristic_latency_ns == self.oracle_latency_ns

    @property
    def latency_gap_ns(self) -> float:
        return self.heuristic_latency_ns - self.oracle_latency_ns

    @property
    def latency_ratio(self) -> float:
        return self.heuristic_latency_ns / self.oracle_latency_ns


@dataclass(frozen=True)
class ComparisonRow:
    n_tables: int
    instances: int
    match_rate: float
    mean_latency_gap_ns: float
    max_latency_ratio: float


def comparison_instance(
    n_tables: int, seed: int
) -> Tuple[ModelSpec, MemoryHierarchySpec]:
    """Random small model and a hierarchy with a few small on-chip banks.

    Tables share one dim and their rows are log-uniform over a small range.
    """
    rng = np.random.default_rng(np.random.SeedSequence([seed, n_tables]))
    dim = int(rng.choice(COMPARE_DIMS))
    low, high = COMPARE_ROWS
    rows = np.clip(
        np.rint(np.exp(rng.uniform(math.log(low), math.log(high), n_tables))),
        low,
        high,
    ).astype(np.int64)
    model = ModelSpec(
        tables=tuple(TableSpec(rows=int(r), dim=dim) for r in rows.tolist())
    )
    hierarchy = MemoryHierarchySpec(
        hbm_channels=int(rng.choice(COMPARE_HBM_CHANNELS)),
        hbm_channel_capacity=COMPARE_HBM_CAPACITY,
        ddr_channels=0,
        onchip_banks=int(rng.choice(COMPARE_BANKS)),
        onchip_bank_capacity=int(rng.choice(COMPARE_BANK_CAPACITIES)),
    )
    return model, hierarchy


def compare_instance(
    model: ModelSpec,
    hierarchy: MemoryHierarchySpec,
    settings: PlannerSettings,
    seed: int = 0,
) -> InstanceComparison:
    _, heuristic = heuristic_plan(model, hierarchy, settings)
    _, oracle = brute_force_plan(model, hierarchy, settings)
    return InstanceComparison(
        n_tables=model.n_tables,
        seed=seed,
        heuristic_latency_ns=heuristic.lookup_latency_ns,
        oracle_latency_ns=oracle.lookup_latency_ns,
        heuristic_bytes=heuristic.total_bytes,
        oracle_bytes=oracle.total_bytes,
    )


def summarize(n_tables: int, results: Sequence[InstanceComparison]) -> ComparisonRow:
    return ComparisonRow(
        n_tables=n_tables,
        instances=len(results),
        match_rate=sum(r.matches for r in results) / len(results),
        mean_latency_gap_ns=sum(r.latency_gap_ns for r in results) / len(results),
        max_latency_ratio=max(r.latency_ratio for r in results),
    )


def compare_planners(
    seeds: Sequence[int],
    n_values: Sequence[int],
    settings: Optional[PlannerSettings] = None,
) -> List[ComparisonRow]:
    """Heuristic against oracle on random instances, one row per table count."""
    settings = replace(
        settings or PlannerSettings(), product_cap_bytes=COMPARE_PRODUCT_CAP_BYTES
    )
    too_large = [n for n in n_values if n > settings.oracle_limit]
    if too_large:
        raise OracleLimitExceeded(
            f"Brute-force search accepts up to {settings.oracle_limit} tables, "
            f"got {max(too_large)}."
        )

    rows = []
    for n_tables in n_values:
        results = [
            compare_instance(*comparison_instance(n_tables, seed), settings, seed)
            for seed in seeds
        ]
        row = summarize(n_tables, results)
        logger.info(
            "n=%s: match rate %s, max ratio %s.",
            n_tables,
            row.match_rate,
            row.max_latency_ratio,
        )
        rows.append(row)
    return rows


def write_comparison_csv(rows: Sequence[ComparisonRow], stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(
            [
                row.n_tables,
                row.instances,
                f"{row.match_rate:.6g}",
                f"{row.mean_latency_gap_ns:.6g}",
                f"{row.max_latency_ratio:.6g}",
            ]
        )
