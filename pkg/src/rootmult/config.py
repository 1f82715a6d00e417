"""
Project settings: defaults for the shape and the search, read from rootmult.yaml.
"""

from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Optional

import yaml

from rootmult.paths import DEFAULT_BRUTE_CAP, TouchRule


CONFIG_FILE = "rootmult.yaml"


class ConfigError(ValueError):
    """Raised when rootmult.yaml is malformed."""
    pass


@dataclass(frozen=True)
class Settings:
    """
    Defaults applied when a command-line flag and its ROOTMULT_* variable are both absent.

    `source` is the file the values came from, None for built-in defaults.
    """
    s: int = 2
    t: int = 1
    touch_rule: TouchRule = TouchRule.WEAK
    refined: bool = True
    workers: int = 1
    brute_cap: int = DEFAULT_BRUTE_CAP
    cache: Optional[Path] = None
    source: Optional[Path] = None


_INT_KEYS = {"s": 1, "t": 1, "workers": 1, "brute_cap": 1}


def find_config(start_path: Optional[Path] = None) -> Optional[Path]:
    """
    Search upward from `start_path` (default: working directory) for rootmult.yaml.

    The search stops at the first directory holding a .git entry.

    Returns:
        Path to the config file, or None if not found
    """
    current = (start_path or Path.cwd()).resolve()
    while True:
        candidate = current / CONFIG_FILE
        if candidate.is_file():
            return candidate
        if (current / ".git").exists() or current == current.parent:
            return None
        current = current.parent


def _coerce(key: str, value: Any, base: Path) -> Any:
    if key in _INT_KEYS:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"'{key}' must be an integer, got {value!r}")
        if value < _INT_KEYS[key]:
            raise ConfigError(f"'{key}' must be at least {_INT_KEYS[key]}, got {value}")
        return value
    if key == "refined":
        if not isinstance(value, bool):
            raise ConfigError(f"'refined' must be true or false, got {value!r}")
        return value
    if key == "touch_rule":
        try:
            return TouchRule(value)
        except ValueError:
            choices = ", ".join(r.value for r in TouchRule)
            raise ConfigError(f"'touch_rule' must be one of {choices}, got {value!r}")
    if key == "cache":
        if not isinstance(value, str):
            raise ConfigError(f"'cache' must be a path, got {value!r}")
        path = Path(value)
        return path if path.is_absolute() else base / path
    raise ConfigError(f"Unknown config key: {key}")


def load_settings(path: Path) -> Settings:
    """
    Load settings from a YAML file.

    Expected format (every key optional):
        s: 2
        t: 1
        touch_rule: weak
        refined: true
        workers: 4
        brute_cap: 14
        cache: mult-2-1.csv

    Relative cache paths are taken relative to the file's directory.

    Raises:
        ConfigError: If the file is not a mapping, or a key is unknown or mistyped
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid YAML in {path}: {e}")

    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"Invalid config format in {path}: expected a dictionary")

    known = {f.name for f in fields(Settings)} - {"source"}
    values: dict[str, Any] = {}
    for key, value in data.items():
        if key not in known:
            raise ConfigError(f"Unknown config key in {path}: {key}")
        values[key] = _coerce(key, value, path.parent.resolve())

    return replace(Settings(), source=path, **values)


_settings: Optional[Settings] = None


def get_settings(config_path: Optional[Path] = None) -> Settings:
    """
    Get the process-wide settings, loading them on first use.

    An explicit `config_path` always reloads from that file.
    """
    global _settings
    if config_path is not None:
        if not config_path.is_file():
            raise ConfigError(f"Config file not found: {config_path}")
        _settings = load_settings(config_path)
    elif _settings is None:
        found = find_config()
        _settings = load_settings(found) if found else Settings()
    return _settings


def reset_settings() -> None:
    """Reset the global settings (useful for testing)."""
    global _settings
    _settings = None
