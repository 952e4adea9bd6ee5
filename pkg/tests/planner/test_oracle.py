import pytest

from embedplan.compare import comparison_instance
from embedplan.exceptions import OracleLimitExceeded
from embedplan.model import KIB
from embedplan.planner.heuristic import heuristic_plan
from embedplan.planner.oracle import brute_force_plan, enumerate_groupings
from embedplan.planner.plan import validate_plan
from embedplan.settings import PlannerSettings

from ..utils import make_model, offchip_hierarchy


def test_brute_force_refuses_too_many_tables():
    model = make_model([(4, 4)] * 9)

    with pytest.raises(OracleLimitExceeded):
        brute_force_plan(model, offchip_hierarchy(2))


def test_brute_force_accepts_custom_limit():
    model = make_model([(4, 4)] * 3)

    with pytest.raises(OracleLimitExceeded):
        brute_force_plan(model, offchip_hierarchy(2), limit=2)


def test_brute_force_without_feasible_products_needs_two_rounds():
    model = make_model([(100, 4)] * 4)

    _, estimate = brute_force_plan(
        model, offchip_hierarchy(2), PlannerSettings(product_cap_bytes=100)
    )

    assert estimate.dram_rounds == 2
    assert estimate.lookup_latency_ns == 600


def test_brute_force_picks_cheapest_pair():
    model = make_model([(4, 4), (8, 4), (16, 4)])

    plan, estimate = brute_force_plan(model, offchip_hierarchy(2))

    assert plan.cartesian_pairs == [(1, 0)]
    assert estimate.lookup_latency_ns == 300
    assert estimate.total_bytes == 32 * 8 * 4 + 16 * 4 * 4


def test_brute_force_combines_tables_into_one_bank_access():
    model = make_model([(4, 4), (4, 4)])
    hierarchy = offchip_hierarchy(1, onchip_banks=1, onchip_bank_capacity=KIB)

    plan, estimate = brute_force_plan(model, hierarchy)

    assert plan.cartesian_pairs == [(0, 1)]
    assert len(plan.onchip_tables) == 1
    assert estimate.lookup_latency_ns == 100


def test_brute_force_uses_larger_groups_in_k_ary_mode():
    model = make_model([(2, 2)] * 3)
    hierarchy = offchip_hierarchy(1)

    _, pairs_only = brute_force_plan(model, hierarchy)
    plan, k_ary = brute_force_plan(
        model, hierarchy, PlannerSettings(oracle_max_group_size=3)
    )

    assert pairs_only.dram_rounds == 2
    assert k_ary.dram_rounds == 1
    assert plan.cartesian_pairs == [(0, 1, 2)]


def test_brute_force_without_cartesian_only_places_tables():
    model = make_model([(4, 4), (8, 4), (16, 4)])

    plan, estimate = brute_force_plan(
        model, offchip_hierarchy(2), PlannerSettings(allow_cartesian=False)
    )

    assert plan.cartesian_pairs == []
    assert estimate.dram_rounds == 2


def test_enumerate_groupings_counts_partial_matchings():
    model = make_model([(2, 2)] * 4)

    groupings = list(enumerate_groupings(model.tables, 2, None))

    # 1 empty matching, 6 single pairs, 3 perfect matchings
    assert len(groupings) == 10


@pytest.mark.parametrize("n_tables", [4, 5, 6])
@pytest.mark.parametrize("seed", range(5))
def test_brute_force_dominates_heuristic(n_tables, seed):
    model, hierarchy = comparison_instance(n_tables, seed)
    settings = PlannerSettings(product_cap_bytes=16 * KIB)

    heuristic_plan_, heuristic = heuristic_plan(model, hierarchy, settings)
    oracle_plan, oracle = brute_force_plan(model, hierarchy, settings)

    validate_plan(oracle_plan, model, hierarchy, settings.product_cap_bytes)
    validate_plan(heuristic_plan_, model, hierarchy)
    assert oracle.sort_key() <= heuristic.sort_key()
    assert heuristic.lookup_latency_ns <= 1.5 * oracle.lookup_latency_ns


def test_brute_force_dominates_heuristic_with_onchip_banks(hierarchy):
    model = make_model([(16, 4), (20, 4), (3000, 8), (50, 8), (6000, 4), (90, 4)])

    _, heuristic = heuristic_plan(model, hierarchy)
    _, oracle = brute_force_plan(model, hierarchy)

    assert oracle.sort_key() <= heuristic.sort_key()
