from dataclasses import fields
from pathlib import Path
from typing import Dict, Optional, Type, TypeVar

import toml

from .exceptions import ConfigFileNotFound, InvalidConfiguration
from .settings import EngineSettings, PlannerSettings, SimulatorSettings

DEFAULT_CONFIG_FILE_NAME = "pyproject.toml"

SettingsType = TypeVar(
    "SettingsType", PlannerSettings, SimulatorSettings, EngineSettings
)


def get_config_file_path(file_name: str = DEFAULT_CONFIG_FILE_NAME) -> Path:
    """Get config file path. If not found raise exception."""
    directory = Path.cwd()
    while not directory.joinpath(file_name).exists():
        if directory == directory.parent:
            raise ConfigFileNotFound(f"Config file {file_name} not found.")
        directory = directory.parent
    return directory.joinpath(file_name).resolve()


def get_config_dict(config_file_name: Optional[str] = None) -> Dict:
    """Get config dict.

    Without an explicit file name a missing pyproject.toml means defaults.
    """
    if config_file_name:
        config_file_path = get_config_file_path(config_file_name)
    else:
        try:
            config_file_path = get_config_file_path()
        except ConfigFileNotFound:
            return {}

    try:
        return toml.load(config_file_path)
    except toml.TomlDecodeError as exc:
        raise InvalidConfiguration(
            f"Config file {config_file_path} is not a valid toml: {exc}"
        ) from exc


def get_section(config_dict: Dict) -> Dict:
    """Get [tool.embedplan] section from config dict, empty if missing."""
    section = config_dict.get("tool", {}).get("embedplan", {})
    if not isinstance(section, dict):
        raise InvalidConfiguration("[tool.embedplan] must be a table.")
    return section


def get_settings(
    config_dict: Dict, key: str, settings_class: Type[SettingsType]
) -> SettingsType:
    section = get_section(config_dict).get(key, {})
    if not isinstance(section, dict):
        raise InvalidConfiguration(f"[tool.embedplan.{key}] must be a table.")
    settings_fields_names = {f.name for f in fields(settings_class)}
    unknown = sorted(set(section).difference(settings_fields_names))
    if unknown:
        raise InvalidConfiguration(
            f"Unknown keys in [tool.embedplan.{key}]: {', '.join(unknown)}"
        )
    return settings_class(**section)


def get_planner_settings(config_dict: Dict) -> PlannerSettings:
    """Parse configuration dict and return PlannerSettings instance."""
    return get_settings(config_dict, "planner", PlannerSettings)


def get_simulator_settings(config_dict: Dict) -> SimulatorSettings:
    """Parse configuration dict and return SimulatorSettings instance."""
    return get_settings(config_dict, "simulator", SimulatorSettings)


def get_engine_settings(config_dict: Dict) -> EngineSettings:
    """Parse configuration dict and return EngineSettings instance."""
    return get_settings(config_dict, "engine", EngineSettings)
