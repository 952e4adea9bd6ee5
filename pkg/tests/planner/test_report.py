import json

import pytest

from embedplan.exceptions import InvalidPlan, SpecValidationError
from embedplan.planner.heuristic import heuristic_plan
from embedplan.planner.report import (
    build_plan_report,
    parse_plan_report,
    plan_from_report,
)
from embedplan.settings import PlannerSettings

from ..utils import make_model, offchip_hierarchy


@pytest.fixture
def paired_model():
    return make_model([(4, 4), (8, 4), (16, 4)])


def test_build_plan_report_counts_tables(paired_model):
    hierarchy = offchip_hierarchy(2)
    plan, estimate = heuristic_plan(paired_model, hierarchy)

    report = build_plan_report(plan, estimate)

    assert report.physical_tables == 2
    assert report.offchip_tables == 2
    assert report.onchip_tables == 0
    assert report.cartesian_groups == [[1, 0]]
    assert report.cost.dram_rounds == 1
    assert report.baseline is None
    assert [entry.table_id for entry in report.concat_map] == [0, 1, 2]


def test_build_plan_report_compares_to_baseline(paired_model):
    hierarchy = offchip_hierarchy(2)
    plan, estimate = heuristic_plan(paired_model, hierarchy)
    _, baseline = heuristic_plan(
        paired_model, hierarchy, PlannerSettings(allow_cartesian=False)
    )

    report = build_plan_report(plan, estimate, baseline)

    assert report.baseline.baseline_rounds == 2
    assert report.baseline.latency_ratio == pytest.approx(0.5)
    assert report.baseline.storage_ratio > 1


def test_plan_survives_json_round_trip(paired_model):
    hierarchy = offchip_hierarchy(2)
    plan, estimate = heuristic_plan(paired_model, hierarchy)
    text = build_plan_report(plan, estimate).model_dump_json()

    rebuilt = plan_from_report(
        parse_plan_report(json.loads(text)), paired_model, hierarchy
    )

    assert rebuilt.cartesian_pairs == plan.cartesian_pairs
    assert rebuilt.concat_map == plan.concat_map


def test_parse_plan_report_accepts_run_report(paired_model):
    hierarchy = offchip_hierarchy(2)
    plan, estimate = heuristic_plan(paired_model, hierarchy)
    data = {"plan": json.loads(build_plan_report(plan, estimate).model_dump_json())}

    report = parse_plan_report(data)

    assert report.physical_tables == 2


def test_parse_plan_report_reports_field_path():
    with pytest.raises(SpecValidationError) as exc:
        parse_plan_report({"lookups_per_table": "many"})

    assert exc.value.field_path


def test_plan_from_report_requires_largest_member_first(paired_model):
    hierarchy = offchip_hierarchy(2)
    plan, estimate = heuristic_plan(paired_model, hierarchy)
    data = json.loads(build_plan_report(plan, estimate).model_dump_json())
    data["dram_assignment"] = [
        [[0, 1] if ids == [1, 0] else ids for ids in channel]
        for channel in data["dram_assignment"]
    ]

    with pytest.raises(InvalidPlan):
        plan_from_report(parse_plan_report(data), paired_model, hierarchy)


def test_plan_from_report_rejects_unknown_table(paired_model):
    hierarchy = offchip_hierarchy(2)
    plan, estimate = heuristic_plan(paired_model, hierarchy)
    data = json.loads(build_plan_report(plan, estimate).model_dump_json())
    data["dram_assignment"][0].append([7])

    with pytest.raises(InvalidPlan):
        plan_from_report(parse_plan_report(data), paired_model, hierarchy)


def test_plan_from_report_rejects_plan_for_other_hierarchy(paired_model):
    plan, estimate = heuristic_plan(paired_model, offchip_hierarchy(2))
    report = build_plan_report(plan, estimate)

    with pytest.raises(InvalidPlan):
        plan_from_report(report, paired_model, offchip_hierarchy(3))
