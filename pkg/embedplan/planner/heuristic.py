import logging
import math
from typing import List, Optional, Sequence, Set, Tuple

from ..cartesian import PhysicalTable, combine, product_fits
from ..exceptions import InfeasiblePlacement
from ..model import MemoryHierarchySpec, ModelSpec, TableSpec
from ..settings import PlannerSettings
from .allocation import allocate_to_banks
from .plan import CostEstimate, PlacementPlan, cost, validate_plan

logger = logging.getLogger(__name__)


def pair_candidates(
    candidates: Sequence[TableSpec],
    tables: Sequence[TableSpec],
    cap_bytes: Optional[int],
) -> List[PhysicalTable]:
    """Pair smallest with largest candidate, keep every other table single.

    Candidates must be sorted by ascending size. Pairs above the cap stay
    as two single tables.
    """
    paired: Set[int] = set()
    physical: List[PhysicalTable] = []
    for i in range(len(candidates) // 2):
        small, large = candidates[i], candidates[len(candidates) - 1 - i]
        if not product_fits((small, large), cap_bytes):
            continue
        physical.append(PhysicalTable.from_group(combine(small, large, cap_bytes)))
        paired.update((small.id, large.id))
    physical.extend(PhysicalTable.single(t) for t in tables if t.id not in paired)
    return physical


def candidate_limit(model: ModelSpec, hierarchy: MemoryHierarchySpec) -> int:
    """Twice the tables one DRAM round can serve, capped at the table count."""
    per_bank = math.floor(hierarchy.dram_access_ns / hierarchy.onchip_access_ns)
    per_round = hierarchy.offchip_count + hierarchy.onchip_banks * per_bank
    return min(model.n_tables, 2 * per_round)


def candidate_pools(
    model: ModelSpec, baseline: PlacementPlan
) -> List[Tuple[str, List[TableSpec]]]:
    ordered = sorted(model.tables, key=lambda t: (t.byte_size, t.id))
    onchip_ids = {i for table in baseline.onchip_tables for i in table.ids}
    pools = [("smallest", ordered)]
    if onchip_ids:
        pools.append(
            ("smallest-offchip", [t for t in ordered if t.id not in onchip_ids])
        )
    return pools


def heuristic_plan(
    model: ModelSpec,
    hierarchy: MemoryHierarchySpec,
    settings: Optional[PlannerSettings] = None,
) -> Tuple[PlacementPlan, CostEstimate]:
    """Search even candidate counts for the lowest-latency plan.

    Only the smallest tables are combined, in pairs, smallest with largest.
    Plans are ranked by lookup latency, then by total bytes.
    """
    settings = settings or PlannerSettings()
    lookups = model.lookups_per_table
    baseline = allocate_to_banks(
        [PhysicalTable.single(t) for t in model.tables], hierarchy, lookups
    )
    best_plan, best_cost = baseline, cost(baseline, hierarchy)
    logger.debug(
        "Baseline plan: %s off-chip tables, %s rounds.",
        len(baseline.offchip_tables),
        best_cost.dram_rounds,
    )

    if settings.allow_cartesian:
        n_cap = candidate_limit(model, hierarchy)
        pools = candidate_pools(model, baseline)
        for n in range(2, n_cap + 1, 2):
            for pool_name, pool in pools:
                if n > len(pool):
                    continue
                physical = pair_candidates(
                    pool[:n], model.tables, settings.product_cap_bytes
                )
                if len(physical) == model.n_tables:
                    continue
                try:
                    plan = allocate_to_banks(physical, hierarchy, lookups)
                except InfeasiblePlacement:
                    logger.debug("n=%s (%s) cannot be placed.", n, pool_name)
                    continue
                estimate = cost(plan, hierarchy)
                if estimate.is_better_than(best_cost):
                    logger.debug(
                        "n=%s (%s): %s ns, %s bytes.",
                        n,
                        pool_name,
                        estimate.lookup_latency_ns,
                        estimate.total_bytes,
                    )
                    best_plan, best_cost = plan, estimate

    validate_plan(best_plan, model, hierarchy, settings.product_cap_bytes)
    logger.info(
        "Heuristic plan: %s physical tables, %s rounds, %s ns.",
        len(best_plan.physical_tables),
        best_cost.dram_rounds,
        best_cost.lookup_latency_ns,
    )
    return best_plan, best_cost
