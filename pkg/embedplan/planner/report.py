from dataclasses import asdict
from typing import Any, Dict, List, Literal, Optional, Sequence

from pydantic import ValidationError

from ..cartesian import PhysicalTable, combine_many
from ..exceptions import InvalidPlan, SpecParsingError, SpecValidationError
from ..model import FrozenModel, MemoryHierarchySpec, ModelSpec
from .plan import CostEstimate, PlacementPlan, validate_plan

PhysicalIds = List[int]


class CostReport(FrozenModel):
    dram_rounds: int
    onchip_critical_ns: float
    dram_critical_ns: float
    lookup_latency_ns: float
    total_bytes: int
    overhead_ratio: float

    @classmethod
    def from_estimate(cls, estimate: CostEstimate) -> "CostReport":
        return cls(**asdict(estimate))

    def to_estimate(self) -> CostEstimate:
        return CostEstimate(**self.model_dump())


class BaselineComparison(FrozenModel):
    """Benefit and overhead of the plan against the no-Cartesian baseline."""

    baseline_rounds: int
    baseline_latency_ns: float
    baseline_bytes: int
    latency_ratio: float
    storage_ratio: float


class ConcatEntry(FrozenModel):
    table_id: int
    location: Literal["onchip", "offchip"]
    bin_index: int
    physical_table: PhysicalIds
    slice_offset: int
    slice_length: int
    output_offset: int
    output_length: int


class PlanReport(FrozenModel):
    lookups_per_table: int
    physical_tables: int
    onchip_tables: int
    offchip_tables: int
    cartesian_groups: List[PhysicalIds]
    onchip_assignment: List[List[PhysicalIds]]
    dram_assignment: List[List[PhysicalIds]]
    cost: CostReport
    baseline: Optional[BaselineComparison] = None
    concat_map: List[ConcatEntry]


def physical_ids(table: PhysicalTable) -> PhysicalIds:
    return list(table.ids)


def compare_to_baseline(
    estimate: CostEstimate, baseline: CostEstimate
) -> BaselineComparison:
    return BaselineComparison(
        baseline_rounds=baseline.dram_rounds,
        baseline_latency_ns=baseline.lookup_latency_ns,
        baseline_bytes=baseline.total_bytes,
        latency_ratio=estimate.lookup_latency_ns / baseline.lookup_latency_ns,
        storage_ratio=estimate.total_bytes / baseline.total_bytes,
    )


def build_plan_report(
    plan: PlacementPlan,
    estimate: CostEstimate,
    baseline: Optional[CostEstimate] = None,
) -> PlanReport:
    return PlanReport(
        lookups_per_table=plan.lookups_per_table,
        physical_tables=len(plan.physical_tables),
        onchip_tables=len(plan.onchip_tables),
        offchip_tables=len(plan.offchip_tables),
        cartesian_groups=[list(ids) for ids in plan.cartesian_pairs],
        onchip_assignment=[[physical_ids(t) for t in bank] for bank in plan.onchip],
        dram_assignment=[[physical_ids(t) for t in ch] for ch in plan.offchip],
        cost=CostReport.from_estimate(estimate),
        baseline=compare_to_baseline(estimate, baseline) if baseline else None,
        concat_map=[
            ConcatEntry(
                table_id=s.table_id,
                location=s.location,  # type: ignore
                bin_index=s.bin_index,
                physical_table=physical_ids(s.physical),
                slice_offset=s.slice_offset,
                slice_length=s.slice_length,
                output_offset=s.output_offset,
                output_length=s.output_length,
            )
            for s in plan.concat_map
        ],
    )


def parse_plan_report(data: Dict[str, Any]) -> PlanReport:
    """Accept a bare plan report or a run report holding one under 'plan'."""
    if not isinstance(data, dict):
        raise SpecParsingError("Plan document must be a json object.")
    if isinstance(data.get("plan"), dict):
        data = data["plan"]
    try:
        return PlanReport.model_validate(data)
    except ValidationError as exc:
        error = exc.errors()[0]
        path = ".".join(str(part) for part in error["loc"])
        raise SpecValidationError(error["msg"], field_path=path) from exc


def rebuild_tables(
    bins: Sequence[Sequence[PhysicalIds]], model: ModelSpec, cap_bytes: Optional[int]
) -> List[List[PhysicalTable]]:
    rebuilt = []
    for bin_ in bins:
        tables = []
        for ids in bin_:
            if any(not 0 <= i < model.n_tables for i in ids):
                raise InvalidPlan(f"Physical table {ids} names an unknown table.")
            members = [model.table(i) for i in ids]
            if len(members) == 1:
                tables.append(PhysicalTable.single(members[0]))
                continue
            table = PhysicalTable.from_group(combine_many(members, cap_bytes))
            if list(table.ids) != list(ids):
                raise InvalidPlan(
                    f"Group {ids} must list members largest first, "
                    f"expected {list(table.ids)}."
                )
            tables.append(table)
        rebuilt.append(tables)
    return rebuilt


def plan_from_report(
    report: PlanReport,
    model: ModelSpec,
    hierarchy: MemoryHierarchySpec,
    cap_bytes: Optional[int] = None,
) -> PlacementPlan:
    """Rebuild and validate the placement plan described by report."""
    plan = PlacementPlan.create(
        rebuild_tables(report.onchip_assignment, model, cap_bytes),
        rebuild_tables(report.dram_assignment, model, cap_bytes),
        report.lookups_per_table,
    )
    validate_plan(plan, model, hierarchy, cap_bytes)
    return plan
