import pytest

from embedplan.engine import build_store
from embedplan.planner.heuristic import heuristic_plan
from embedplan.settings import PlannerSettings

from ..utils import make_model, offchip_hierarchy

SHAPES = [(4, 4), (8, 4), (16, 8), (3, 8)]


def stores_for(model):
    hierarchy = offchip_hierarchy(2)
    combined, _ = heuristic_plan(model, hierarchy)
    separate, _ = heuristic_plan(
        model, hierarchy, PlannerSettings(allow_cartesian=False)
    )
    assert combined.cartesian_pairs
    return build_store(model, combined, seed=3), build_store(model, separate, seed=3)


@pytest.fixture(scope="module")
def engine_model():
    return make_model(SHAPES, lookups_per_table=2)


@pytest.fixture(scope="module")
def half_model():
    return make_model(SHAPES, elem_bits=16, lookups_per_table=2)


@pytest.fixture(scope="module")
def engine_stores(engine_model):
    return stores_for(engine_model)


@pytest.fixture(scope="module")
def half_stores(half_model):
    return stores_for(half_model)
