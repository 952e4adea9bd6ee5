import numpy as np
import pytest

from embedplan.engine import MlpWeights, Query, build_store, lookup_concat, mlp_forward
from embedplan.planner.heuristic import heuristic_plan
from embedplan.settings import PlannerSettings
from embedplan.synthetic import SizeBand, SizeProfile, generate_synthetic

from ..utils import offchip_hierarchy

INSTANCES = 20
QUERIES_PER_INSTANCE = 500

DIFFERENTIAL_PROFILE = SizeProfile(
    name="differential",
    bands=(
        SizeBand(count=8, min_rows=2, max_rows=32, dims=(4, 8)),
        SizeBand(count=4, min_rows=64, max_rows=512, dims=(4, 8)),
    ),
    hidden_dims=(16, 8),
)


def random_queries(model, rng, count):
    rows = np.repeat([t.rows for t in model.tables], model.lookups_per_table)
    indices = rng.integers(0, rows, size=(count, len(rows)))
    return [Query(indices=tuple(row)) for row in indices.tolist()]


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(INSTANCES))
def test_transformed_plan_is_bit_identical_to_separate_plan(seed):
    profile = DIFFERENTIAL_PROFILE
    model = generate_synthetic(profile.n_tables, profile, seed)
    hierarchy = offchip_hierarchy(2)
    combined_plan, _ = heuristic_plan(model, hierarchy)
    separate_plan, _ = heuristic_plan(
        model, hierarchy, PlannerSettings(allow_cartesian=False)
    )
    assert combined_plan.cartesian_pairs
    combined = build_store(model, combined_plan, seed=seed)
    separate = build_store(model, separate_plan, seed=seed)
    weights = MlpWeights.random(model.concat_length, model.hidden_dims, seed=seed)
    rng = np.random.default_rng(seed)

    for query in random_queries(model, rng, QUERIES_PER_INSTANCE):
        transformed = lookup_concat(combined, query)
        reference = lookup_concat(separate, query)
        np.testing.assert_array_equal(transformed, reference)
        assert mlp_forward(weights, transformed) == mlp_forward(weights, reference)
