import time

import pytest

from embedplan.model import GIB, KIB, MemoryHierarchySpec
from embedplan.planner.allocation import allocate_to_banks
from embedplan.planner.heuristic import (
    candidate_limit,
    heuristic_plan,
    pair_candidates,
)
from embedplan.planner.oracle import brute_force_plan
from embedplan.planner.plan import cost
from embedplan.settings import PlannerSettings
from embedplan.synthetic import generate_synthetic

from ..utils import make_model, offchip_hierarchy, singles


def test_pair_candidates_pairs_smallest_with_largest():
    model = make_model([(2, 4), (3, 4), (4, 4), (5, 4), (100, 4)])
    candidates = sorted(model.tables, key=lambda t: t.byte_size)[:4]

    physical = pair_candidates(candidates, model.tables, cap_bytes=None)

    assert sorted(t.ids for t in physical) == [(2, 1), (3, 0), (4,)]


def test_pair_candidates_keeps_oversized_pairs_single():
    model = make_model([(2, 4), (3, 4), (4, 4), (500, 4)])
    candidates = sorted(model.tables, key=lambda t: t.byte_size)

    physical = pair_candidates(candidates, model.tables, cap_bytes=1000)

    assert sorted(t.ids for t in physical) == [(0,), (2, 1), (3,)]


def test_heuristic_places_single_small_table_on_chip(hierarchy):
    model = make_model([(16, 4)])

    plan, estimate = heuristic_plan(model, hierarchy)

    assert plan.onchip[0][0].ids == (0,)
    assert plan.cartesian_pairs == []
    assert estimate.lookup_latency_ns == 100


def test_heuristic_places_single_large_table_on_channel_zero(hierarchy):
    model = make_model([(1 << 20, 16)])

    plan, estimate = heuristic_plan(model, hierarchy)

    assert plan.offchip[0][0].ids == (0,)
    assert estimate.dram_rounds == 1


def test_heuristic_pairs_tables_to_save_a_round():
    model = make_model([(4, 4), (8, 4), (16, 4)])
    hierarchy = offchip_hierarchy(2)

    plan, estimate = heuristic_plan(model, hierarchy)

    assert plan.cartesian_pairs == [(1, 0)]
    assert estimate.dram_rounds == 1
    assert estimate.lookup_latency_ns == 300


def test_heuristic_matches_oracle_when_onchip_capacity_is_tight():
    model = make_model([(159, 8), (4, 4), (158, 8), (8, 4), (14, 4)])
    hierarchy = offchip_hierarchy(2, onchip_banks=2, onchip_bank_capacity=256)
    settings = PlannerSettings(product_cap_bytes=16 * KIB)

    _, heuristic = heuristic_plan(model, hierarchy, settings)
    _, oracle = brute_force_plan(model, hierarchy, settings)

    assert heuristic.lookup_latency_ns == oracle.lookup_latency_ns == 300


def test_candidate_limit_counts_bank_slots_per_round():
    model = make_model([(2, 4)] * 8)

    assert candidate_limit(model, offchip_hierarchy(1)) == 2
    assert (
        candidate_limit(
            model, offchip_hierarchy(1, onchip_banks=1, onchip_bank_capacity=KIB)
        )
        == 8
    )


def test_heuristic_pairs_beyond_channel_bound_to_relieve_a_bank():
    # four pairs leave three tables on the bank and one off-chip
    model = make_model([(2, 4)] * 8)
    hierarchy = offchip_hierarchy(1, onchip_banks=1, onchip_bank_capacity=KIB)

    plan, heuristic = heuristic_plan(model, hierarchy)
    _, oracle = brute_force_plan(model, hierarchy)

    assert len(plan.cartesian_pairs) == 4
    assert heuristic.lookup_latency_ns == oracle.lookup_latency_ns == 300


def test_heuristic_without_cartesian_keeps_tables_single():
    model = make_model([(4, 4), (8, 4), (16, 4)])
    hierarchy = offchip_hierarchy(2)

    plan, estimate = heuristic_plan(
        model, hierarchy, PlannerSettings(allow_cartesian=False)
    )

    assert plan.cartesian_pairs == []
    assert estimate.dram_rounds == 2


def test_heuristic_respects_product_cap():
    model = make_model([(4, 4), (8, 4), (16, 4)])
    hierarchy = offchip_hierarchy(2)

    plan, estimate = heuristic_plan(
        model, hierarchy, PlannerSettings(product_cap_bytes=100)
    )

    assert plan.cartesian_pairs == []
    assert estimate.dram_rounds == 2


def test_heuristic_prefers_less_storage_on_equal_latency():
    # two tables on two channels already take one round
    model = make_model([(4, 4), (8, 4)])

    plan, estimate = heuristic_plan(model, offchip_hierarchy(2))

    assert plan.cartesian_pairs == []
    assert estimate.overhead_ratio == 1.0


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_heuristic_is_never_worse_than_baseline(seed, hierarchy):
    model = generate_synthetic(60, seed=seed)
    baseline = cost(allocate_to_banks(singles(model), hierarchy), hierarchy)

    _, estimate = heuristic_plan(model, hierarchy)

    assert estimate.sort_key() <= baseline.sort_key()


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_heuristic_latency_does_not_grow_with_channel_count(seed):
    model = generate_synthetic(24, seed=seed)
    latencies = [
        heuristic_plan(
            model,
            MemoryHierarchySpec(
                hbm_channels=channels, hbm_channel_capacity=4 * GIB, ddr_channels=1
            ),
        )[1].lookup_latency_ns
        for channels in range(1, 9)
    ]

    assert latencies == sorted(latencies, reverse=True)


def test_heuristic_is_deterministic(hierarchy):
    model = generate_synthetic(50, seed=11)

    assert heuristic_plan(model, hierarchy) == heuristic_plan(model, hierarchy)


def best_wall_time(model, hierarchy, repeats=3):
    times = []
    for _ in range(repeats):
        started = time.perf_counter()
        heuristic_plan(model, hierarchy)
        times.append(time.perf_counter() - started)
    return min(times)


@pytest.mark.slow
def test_heuristic_runtime_grows_about_quadratically(hierarchy):
    small = best_wall_time(generate_synthetic(100, seed=0), hierarchy)
    large = best_wall_time(generate_synthetic(200, seed=0), hierarchy)

    assert large <= 5 * small
