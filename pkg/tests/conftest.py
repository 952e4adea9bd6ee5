import pytest

from embedplan.loader import write_spec_file
from embedplan.model import MemoryHierarchySpec
from embedplan.synthetic import (
    LARGE_MODEL_PROFILE,
    SMALL_MODEL_PROFILE,
    generate_synthetic,
)

from .utils import make_model

PROFILE_SEED = 7


@pytest.fixture
def hierarchy():
    return MemoryHierarchySpec()


@pytest.fixture
def small_model():
    return make_model([(16, 4), (32, 4), (100, 8), (1000, 8)])


@pytest.fixture(scope="session")
def small_profile_model():
    profile = SMALL_MODEL_PROFILE
    model = generate_synthetic(profile.n_tables, profile, PROFILE_SEED)
    return model, profile.hierarchy


@pytest.fixture(scope="session")
def large_profile_model():
    profile = LARGE_MODEL_PROFILE
    model = generate_synthetic(profile.n_tables, profile, PROFILE_SEED)
    return model, profile.hierarchy


@pytest.fixture
def small_spec_file(tmp_path, small_model, hierarchy):
    path = tmp_path / "spec.json"
    write_spec_file(path, small_model, hierarchy)
    return path
