import pytest

from embedplan.exceptions import InvalidConfiguration
from embedplan.settings import (
    Activation,
    EngineSettings,
    PlannerSettings,
    SimulatorSettings,
)


def test_planner_settings_defaults():
    settings = PlannerSettings()

    assert settings.product_cap_bytes == 256 * 1024 * 1024
    assert settings.oracle_limit == 8
    assert settings.oracle_max_group_size == 2
    assert settings.allow_cartesian


@pytest.mark.parametrize(
    "kwargs",
    [
        {"product_cap_bytes": 0},
        {"product_cap_bytes": "big"},
        {"oracle_limit": -1},
        {"oracle_max_group_size": 1},
        {"allow_cartesian": "yes"},
    ],
)
def test_planner_settings_with_invalid_value_raises_invalid_configuration(kwargs):
    with pytest.raises(InvalidConfiguration):
        PlannerSettings(**kwargs)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"parallel_macs": 0},
        {"clock_ghz": -0.2},
        {"broadcast_cycles_per_element": 0},
        {"gather_cycles_per_element": 0},
        {"half_precision_speedup": 0},
        {"lookup_overhead_ns": -1},
        {"lookup_overhead_ns": True},
    ],
)
def test_simulator_settings_with_invalid_value_raises_invalid_configuration(kwargs):
    with pytest.raises(InvalidConfiguration):
        SimulatorSettings(**kwargs)


def test_simulator_settings_accept_zero_overhead():
    assert SimulatorSettings(lookup_overhead_ns=0).lookup_overhead_ns == 0


def test_engine_settings_converts_activation_name():
    settings = EngineSettings(hidden_activation="identity")

    assert settings.hidden_activation == Activation.IDENTITY


@pytest.mark.parametrize(
    "kwargs",
    [
        {"hidden_activation": "tanh"},
        {"parallel_lookups": 1},
        {"weights_seed": -3},
    ],
)
def test_engine_settings_with_invalid_value_raises_invalid_configuration(kwargs):
    with pytest.raises(InvalidConfiguration):
        EngineSettings(**kwargs)


@pytest.mark.parametrize(
    "settings, expected",
    [
        (PlannerSettings(allow_cartesian=False), "Not combining tables."),
        (SimulatorSettings(), "4096 parallel MACs"),
        (EngineSettings(parallel_lookups=True), "in parallel"),
    ],
)
def test_used_settings_message(settings, expected):
    assert expected in settings.used_settings_message
