from .allocation import allocate_to_banks
from .heuristic import heuristic_plan
from .oracle import brute_force_plan
from .plan import (
    ConcatSlice,
    CostEstimate,
    PlacementPlan,
    build_concat_map,
    cost,
    validate_plan,
)
from .report import PlanReport, build_plan_report, parse_plan_report, plan_from_report

__all__ = [
    "ConcatSlice",
    "CostEstimate",
    "PlacementPlan",
    "PlanReport",
    "allocate_to_banks",
    "brute_force_plan",
    "build_concat_map",
    "build_plan_report",
    "cost",
    "heuristic_plan",
    "parse_plan_report",
    "plan_from_report",
    "validate_plan",
]
