"""
Runtime settings: built-in defaults, overridden by a YAML file, overridden by
environment variables (a ``.env`` file is honoured).
"""

from __future__ import annotations

import logging
import os
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from dotenv import load_dotenv

from .errors import ConfigurationError

DEFAULT_CONFIG_FILE = Path(__file__).resolve().parent.parent / "strongprop_config.yaml"
LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


@dataclass(frozen=True)
class Settings:
    log_level: str = "WARNING"
    log_format: str = LOG_FORMAT
    log_file: Optional[str] = None
    enumeration_cap: int = 8
    seed: int = 0
    max_segments: int = 6
    max_denominator: int = 12
    zero_probability: float = 0.2
    two_part_max_doublings: int = 32


def _section(config: Dict[str, Any], name: str) -> Dict[str, Any]:
    section = config.get(name) or {}
    if not isinstance(section, dict):
        raise ConfigurationError(f"config section '{name}' must be a mapping")
    return section


def _int(value: Any, what: str) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ConfigurationError(f"{what} must be an integer, got {value!r}") from None


def _from_yaml(settings: Settings, path: Path) -> Settings:
    try:
        with open(path, 'r') as f:
            config = yaml.safe_load(f) or {}
    except OSError as e:
        raise ConfigurationError(f"cannot read config file {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigurationError(f"malformed config file {path}: {e}") from e
    if not isinstance(config, dict):
        raise ConfigurationError(f"config file {path} must contain a mapping")

    log = _section(config, 'logging')
    enumeration = _section(config, 'enumeration')
    rand = _section(config, 'random')
    families = _section(config, 'families')
    try:
        zero_probability = float(rand.get('zero_probability', settings.zero_probability))
    except (TypeError, ValueError):
        raise ConfigurationError("random.zero_probability must be a number") from None
    return replace(
        settings,
        log_level=str(log.get('level', settings.log_level)).upper(),
        log_format=str(log.get('format', settings.log_format)),
        log_file=log.get('file', settings.log_file),
        enumeration_cap=_int(enumeration.get('cap', settings.enumeration_cap), 'enumeration.cap'),
        seed=_int(rand.get('seed', settings.seed), 'random.seed'),
        max_segments=_int(rand.get('max_segments', settings.max_segments), 'random.max_segments'),
        max_denominator=_int(rand.get('max_denominator', settings.max_denominator),
                             'random.max_denominator'),
        zero_probability=zero_probability,
        two_part_max_doublings=_int(
            families.get('two_part_max_doublings', settings.two_part_max_doublings),
            'families.two_part_max_doublings',
        ),
    )


def _from_env(settings: Settings) -> Settings:
    env = os.environ
    if 'STRONGPROP_LOG_LEVEL' in env:
        settings = replace(settings, log_level=env['STRONGPROP_LOG_LEVEL'].upper())
    if 'STRONGPROP_LOG_FILE' in env:
        settings = replace(settings, log_file=env['STRONGPROP_LOG_FILE'] or None)
    if 'STRONGPROP_ENUMERATION_CAP' in env:
        settings = replace(settings, enumeration_cap=_int(env['STRONGPROP_ENUMERATION_CAP'],
                                                          'STRONGPROP_ENUMERATION_CAP'))
    if 'STRONGPROP_SEED' in env:
        settings = replace(settings, seed=_int(env['STRONGPROP_SEED'], 'STRONGPROP_SEED'))
    return settings


def _validate(settings: Settings) -> Settings:
    if not isinstance(logging.getLevelName(settings.log_level), int):
        raise ConfigurationError(f"unknown log level {settings.log_level!r}")
    if settings.enumeration_cap < 1:
        raise ConfigurationError("enumeration cap must be positive")
    if settings.max_segments < 1 or settings.max_denominator < 1:
        raise ConfigurationError("random.max_segments and random.max_denominator must be positive")
    if not 0 <= settings.zero_probability <= 1:
        raise ConfigurationError("random.zero_probability must lie in [0, 1]")
    return settings


def load_settings(path: Optional[Union[str, Path]] = None) -> Settings:
    """Resolve settings; an explicit ``path`` must exist, the default file may be absent."""
    load_dotenv()
    settings = Settings()
    explicit = path or os.environ.get('STRONGPROP_CONFIG')
    if explicit:
        settings = _from_yaml(settings, Path(explicit))
    elif DEFAULT_CONFIG_FILE.is_file():
        settings = _from_yaml(settings, DEFAULT_CONFIG_FILE)
    return _validate(_from_env(settings))


def configure_logging(settings: Settings, verbose: bool = False) -> None:
    """Log to stderr, and to a file when one is configured; stdout stays reserved for results."""
    handlers = [logging.StreamHandler(sys.stderr)]
    if settings.log_file:
        handlers.append(logging.FileHandler(settings.log_file))
    logging.basicConfig(
        level=logging.DEBUG if verbose else settings.log_level,
        format=settings.log_format,
        handlers=handlers,
        force=True,
    )
