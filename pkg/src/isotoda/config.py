"""
Configuration management for isotoda runs.
"""

import json
import logging
import os
import re
from pathlib import Path
from typing import Any, Callable, Dict, Optional

import jsonschema
import yaml

from .exceptions import ConfigurationError, ValidationError
from .models import RunConfig

logger = logging.getLogger(__name__)

PACKAGE_DIR = Path(__file__).parent
DEFAULTS_PATH = PACKAGE_DIR / 'config' / 'defaults.yaml'
SCHEMA_DIR = PACKAGE_DIR / 'schemas'

SEED_ENV_VAR = 'ISOTODA_SEED'


def load_schema(name: str) -> Dict[str, Any]:
    """Load a packaged JSON schema by file stem."""
    with open(SCHEMA_DIR / f'{name}.json', 'r', encoding='utf-8') as f:
        return json.load(f)


class ConfigurationManager:
    """Loads, validates and layers run configuration."""

    def __init__(self):
        self._config_data: Optional[Dict[str, Any]] = None
        self._run_config: Optional[RunConfig] = None
        self._schema = load_schema('run_config')

    def load_config(self, config_path: str) -> Dict[str, Any]:
        """Read a run file (.yaml, .yml or .json) into a plain mapping.

        ``${NAME}`` and ``${NAME:fallback}`` placeholders are expanded from
        the environment before parsing. An empty document reads as ``{}``.

        Raises:
            ConfigurationError: If the file is missing, unreadable, of an
                unknown type, malformed, or not a mapping.
        """
        path = Path(config_path)
        if not path.exists():
            raise ConfigurationError(f"Configuration file not found: {config_path}")
        if not path.is_file():
            raise ConfigurationError(f"Configuration path is not a file: {config_path}")

        parser = _PARSERS.get(path.suffix.lower())
        if parser is None:
            raise ConfigurationError(f"Unsupported configuration file format: {path.suffix}")

        try:
            text = expand_placeholders(path.read_text(encoding='utf-8'))
            data = parser(text)
        except yaml.YAMLError as e:
            raise ConfigurationError(f"Failed to parse YAML in {path.name}: {e}")
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"Failed to parse JSON in {path.name}: {e}")
        except OSError as e:
            raise ConfigurationError(f"Cannot read {config_path}: {e}")

        data = {} if data is None else data
        if not isinstance(data, dict):
            raise ConfigurationError(
                f"{path.name}: expected a mapping at root level, got {type(data).__name__}"
            )

        self._config_data = data
        logger.debug("loaded %d run settings from %s", len(data), path)
        return data

    def validate_config(self, config: Dict[str, Any]) -> RunConfig:
        """Check a merged mapping against the run schema and build a RunConfig.

        Only the first schema violation (by key path) is reported.

        Raises:
            ConfigurationError: On a schema violation or an inconsistent
                combination of values.
        """
        if not isinstance(config, dict):
            raise ConfigurationError("Run settings must be a mapping")

        errors = sorted(
            jsonschema.Draft7Validator(self._schema).iter_errors(config),
            key=lambda error: list(error.path),
        )
        if errors:
            error = errors[0]
            location = '.'.join(str(part) for part in error.path) or 'root'
            raise ConfigurationError(f"Invalid configuration at {location}: {error.message}")

        try:
            run_config = RunConfig.from_dict(config)
        except ValidationError as e:
            raise ConfigurationError(f"Invalid run configuration: {e}")

        self._run_config = run_config
        return run_config

    def get_run_config(self) -> RunConfig:
        """The RunConfig from the last successful validate_config call."""
        if self._run_config is None:
            raise ConfigurationError("Configuration not loaded")
        return self._run_config

    def build_run_config(self, config_path: Optional[str] = None,
                         overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
        """Merge packaged defaults, then the run file, then flag overrides.

        Override entries that are None were not given on the command line
        and leave the lower layers in place.
        """
        data = dict(self.load_config(str(DEFAULTS_PATH)))
        if config_path is not None:
            data.update(self.load_config(config_path))
        data.update({k: v for k, v in (overrides or {}).items() if v is not None})
        return self.validate_config(data)


_PLACEHOLDER = re.compile(r'\$\{([A-Za-z_][A-Za-z0-9_]*)(?::([^}]*))?\}')

_PARSERS: Dict[str, Callable[[str], Any]] = {
    '.yaml': yaml.safe_load,
    '.yml': yaml.safe_load,
    '.json': json.loads,
}


def expand_placeholders(text: str) -> str:
    """Replace ``${NAME}`` / ``${NAME:fallback}`` with environment values.

    Raises:
        ConfigurationError: If NAME is unset and no fallback is given.
    """
    def lookup(match: 're.Match[str]') -> str:
        name, fallback = match.group(1), match.group(2)
        value = os.environ.get(name, fallback)
        if value is None:
            raise ConfigurationError(f"environment variable {name} is not set")
        return value

    return _PLACEHOLDER.sub(lookup, text)


def seed_from_env(default: int = 0) -> int:
    """Seed for randomized matrices, read from ISOTODA_SEED."""
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None or raw.strip() == '':
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigurationError(f"{SEED_ENV_VAR} must be an integer (got {raw!r})")
