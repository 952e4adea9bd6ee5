import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import Field

from .exceptions import InvalidConfiguration
from .model import FrozenModel, MemoryHierarchySpec, ModelSpec
from .planner.plan import PlacementPlan, cost
from .settings import Precision, SimulatorSettings

logger = logging.getLogger(__name__)

LOOKUP_STAGE = "lookup"


@dataclass(frozen=True)
class Stage:
    name: str
    ns: float


@dataclass(frozen=True)
class PipelineConfig:
    """Timing parameters of the item-by-item inference dataflow."""

    parallel_macs: int = 4096
    clock_ghz: float = 0.2
    broadcast_cycles_per_element: float = 1.0
    gather_cycles_per_element: float = 1.0
    lookup_overhead_ns: float = 0.0
    half_precision_speedup: float = 2.0
    precision: Precision = Precision.FULL

    @classmethod
    def from_settings(
        cls, settings: SimulatorSettings, precision: Precision = Precision.FULL
    ) -> "PipelineConfig":
        return cls(
            parallel_macs=settings.parallel_macs,
            clock_ghz=settings.clock_ghz,
            broadcast_cycles_per_element=settings.broadcast_cycles_per_element,
            gather_cycles_per_element=settings.gather_cycles_per_element,
            lookup_overhead_ns=settings.lookup_overhead_ns,
            half_precision_speedup=settings.half_precision_speedup,
            precision=Precision(precision),
        )

    @property
    def effective_macs(self) -> float:
        if self.precision == Precision.HALF:
            return self.parallel_macs * self.half_precision_speedup
        return float(self.parallel_macs)

    def broadcast_ns(self, in_dim: int) -> float:
        return in_dim * self.broadcast_cycles_per_element / self.clock_ghz

    def gemm_ns(self, in_dim: int, out_dim: int, items: int = 1) -> float:
        return in_dim * out_dim * items / (self.effective_macs * self.clock_ghz)

    def gather_ns(self, out_dim: int) -> float:
        return out_dim * self.gather_cycles_per_element / self.clock_ghz

    def stages(self, model: ModelSpec, lookup_latency_ns: float) -> List[Stage]:
        """Lookup, three sub-stages per hidden layer, then the output layer."""
        stages = [Stage(LOOKUP_STAGE, lookup_latency_ns + self.lookup_overhead_ns)]
        *hidden, (output_in, output_out) = model.layer_shapes()
        for layer, (in_dim, out_dim) in enumerate(hidden, start=1):
            stages.append(Stage(f"fc{layer}_broadcast", self.broadcast_ns(in_dim)))
            stages.append(Stage(f"fc{layer}_gemm", self.gemm_ns(in_dim, out_dim)))
            stages.append(Stage(f"fc{layer}_gather", self.gather_ns(out_dim)))
        stages.append(
            Stage(
                "output",
                self.broadcast_ns(output_in)
                + self.gemm_ns(output_in, output_out)
                + self.gather_ns(output_out),
            )
        )
        return stages


class StageReport(FrozenModel):
    name: str
    ns: float
    utilization: float


class SimulationReport(FrozenModel):
    item_count: int = Field(ge=1)
    stages: List[StageReport]
    single_item_latency_ns: float
    max_stage_ns: float
    makespan_ns: float
    steady_throughput_items_per_s: float
    throughput_gops: float = 0.0

    def makespan(self, item_count: int) -> float:
        return self.single_item_latency_ns + (item_count - 1) * self.max_stage_ns


class LookupLatency(FrozenModel):
    query_count: int
    dram_rounds: int
    per_query_ns: float
    total_ns: float


def analyze_stages(
    stage_times: Sequence[Stage], item_count: int, macs_per_item: int = 0
) -> SimulationReport:
    """Closed-form pipeline analysis over an arbitrary stage list."""
    if item_count < 1:
        raise InvalidConfiguration(f"Item count must be at least 1, got {item_count}.")
    if not stage_times or any(stage.ns <= 0 for stage in stage_times):
        raise InvalidConfiguration("Every pipeline stage must take positive time.")

    latency = sum(stage.ns for stage in stage_times)
    bottleneck = max(stage.ns for stage in stage_times)
    items_per_s = 1e9 / bottleneck
    return SimulationReport(
        item_count=item_count,
        stages=[
            StageReport(name=s.name, ns=s.ns, utilization=s.ns / bottleneck)
            for s in stage_times
        ],
        single_item_latency_ns=latency,
        max_stage_ns=bottleneck,
        makespan_ns=latency + (item_count - 1) * bottleneck,
        steady_throughput_items_per_s=items_per_s,
        throughput_gops=2 * macs_per_item * items_per_s / 1e9,
    )


def simulate_lookup(
    plan: PlacementPlan,
    hierarchy: MemoryHierarchySpec,
    query_count: int = 1,
    overhead_ns: float = 0.0,
) -> LookupLatency:
    """Lookup latency of unpipelined queries, channels accessed in parallel."""
    estimate = cost(plan, hierarchy)
    per_query = estimate.lookup_latency_ns + overhead_ns
    return LookupLatency(
        query_count=query_count,
        dram_rounds=estimate.dram_rounds,
        per_query_ns=per_query,
        total_ns=query_count * per_query,
    )


def simulate_pipeline(
    model: ModelSpec,
    plan: PlacementPlan,
    hierarchy: MemoryHierarchySpec,
    pipeline_config: Optional[PipelineConfig] = None,
    item_count: int = 1,
) -> SimulationReport:
    config = pipeline_config or PipelineConfig()
    lookup_ns = cost(plan, hierarchy).lookup_latency_ns
    macs = sum(in_dim * out_dim for in_dim, out_dim in model.layer_shapes())
    report = analyze_stages(config.stages(model, lookup_ns), item_count, macs)
    logger.debug(
        "Pipeline of %s stages: %s ns latency, %s ns bottleneck.",
        len(report.stages),
        report.single_item_latency_ns,
        report.max_stage_ns,
    )
    return report


def stages_to_csv(report: SimulationReport, path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as csv_file:
        writer = csv.writer(csv_file)
        writer.writerow(["stage", "ns", "utilization"])
        for stage in report.stages:
            writer.writerow([stage.name, repr(stage.ns), repr(stage.utilization)])
