"""Engine configuration: one flat key = value file, environment, defaults.

Precedence, highest first: command-line flag, ``OPENINDEX_``-prefixed
environment variable, config file entry, built-in default. The file format
is a TOML subset: flat ``key = value`` lines with quoted strings, integers,
floats, and booleans; comments start with ``#``. Section headers and
nested tables are rejected so a typo cannot silently vanish.
"""

from __future__ import annotations

import dataclasses
import os
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

DEFAULT_CONFIG_FILENAME = "openindex.toml"
ENV_PREFIX = "OPENINDEX_"


class ConfigError(Exception):
    """Bad configuration; the message names the file, key, or value."""


@dataclass
class EngineConfig:
    data_dir: str = "./store"
    host: str = "127.0.0.1"
    port: int = 8000
    base_url: str = "https://openalex.org"
    per_page_default: int = 25
    per_page_max: int = 200
    max_connections: int = 100
    author_threshold: float = 0.5
    institution_threshold: float = 0.7
    tag_threshold: float = 0.3
    tag_decay: float = 0.5
    weight_name_exact: float = 0.4
    weight_coauthor_each: float = 0.1
    weight_coauthor_cap: float = 0.3
    weight_venue: float = 0.2
    weight_citation_each: float = 0.05
    weight_citation_cap: float = 0.1
    issn_table: str = ""
    concept_tree: str = ""
    gui_dir: str = ""


_KEY_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_INT_RE = re.compile(r"^-?\d+$")
_FLOAT_RE = re.compile(r"^-?\d+\.\d+$")


def _parse_value(raw: str, where: str) -> Any:
    raw = raw.strip()
    if not raw:
        raise ConfigError(f"{where}: missing value")
    if raw[0] in "\"'":
        quote = raw[0]
        end = raw.find(quote, 1)
        if end < 0:
            raise ConfigError(f"{where}: unterminated string")
        rest = raw[end + 1 :].strip()
        if rest and not rest.startswith("#"):
            raise ConfigError(f"{where}: trailing characters after string value")
        return raw[1:end]
    raw = raw.split("#", 1)[0].strip()
    if raw in ("true", "false"):
        return raw == "true"
    if _INT_RE.match(raw):
        return int(raw)
    if _FLOAT_RE.match(raw):
        return float(raw)
    raise ConfigError(
        f"{where}: value {raw!r} is not a quoted string, number, or boolean"
    )


def parse_config_text(text: str, filename: str = "<config>") -> dict[str, Any]:
    """Parse the supported TOML subset into a flat dict."""
    values: dict[str, Any] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        where = f"{filename}:{lineno}"
        if stripped.startswith("["):
            raise ConfigError(f"{where}: section headers are not supported")
        key, sep, raw_value = stripped.partition("=")
        if not sep:
            raise ConfigError(f"{where}: expected key = value")
        key = key.strip()
        if not _KEY_RE.match(key):
            raise ConfigError(f"{where}: invalid key {key!r}")
        if key in values:
            raise ConfigError(f"{where}: duplicate key {key!r}")
        values[key] = _parse_value(raw_value, where)
    return values


_FIELDS = {f.name: f for f in dataclasses.fields(EngineConfig)}
_DEFAULTS = dataclasses.asdict(EngineConfig())


def _coerce(key: str, value: Any, where: str) -> Any:
    target_default = _DEFAULTS[key]
    if isinstance(target_default, bool):
        if isinstance(value, bool):
            return value
        if isinstance(value, str) and value.lower() in ("true", "false", "1", "0"):
            return value.lower() in ("true", "1")
        raise ConfigError(f"{where}: {key} expects a boolean, got {value!r}")
    if isinstance(target_default, int):
        if isinstance(value, bool):
            raise ConfigError(f"{where}: {key} expects an integer, got {value!r}")
        if isinstance(value, int):
            return value
        if isinstance(value, str) and _INT_RE.match(value.strip()):
            return int(value)
        raise ConfigError(f"{where}: {key} expects an integer, got {value!r}")
    if isinstance(target_default, float):
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value)
        if isinstance(value, str):
            try:
                return float(value)
            except ValueError:
                pass
        raise ConfigError(f"{where}: {key} expects a number, got {value!r}")
    if isinstance(value, str):
        return value
    raise ConfigError(f"{where}: {key} expects a string, got {value!r}")


def load_config(
    config_path: str | os.PathLike | None = None,
    *,
    env: Mapping[str, str] | None = None,
    overrides: Mapping[str, Any] | None = None,
) -> EngineConfig:
    """Resolve the effective configuration.

    ``config_path`` None means: use ./openindex.toml when present, silently
    skip when absent. An explicit path that does not exist is an error.
    """
    merged: dict[str, Any] = {}

    explicit = config_path is not None
    path = Path(config_path) if explicit else Path(DEFAULT_CONFIG_FILENAME)
    if path.exists():
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from None
        for key, value in parse_config_text(text, str(path)).items():
            if key not in _FIELDS:
                raise ConfigError(f"{path}: unknown config key {key!r}")
            merged[key] = _coerce(key, value, str(path))
    elif explicit:
        raise ConfigError(f"config file {path} does not exist")

    env = os.environ if env is None else env
    for key in _FIELDS:
        env_name = ENV_PREFIX + key.upper()
        if env_name in env:
            merged[key] = _coerce(key, env[env_name], f"environment {env_name}")

    if overrides:
        for key, value in overrides.items():
            if value is None:
                continue
            if key not in _FIELDS:
                raise ConfigError(f"unknown config override {key!r}")
            merged[key] = _coerce(key, value, f"flag --{key.replace('_', '-')}")

    return EngineConfig(**merged)
