# -*- coding: utf-8 -*-
"""Runtime settings loaded from the environment (.env supported)."""

import logging
import os
from dataclasses import dataclass

try:
    from dotenv import load_dotenv
except ImportError:  # pragma: no cover - optional dependency
    load_dotenv = None

from core.constants import (
    DEFAULT_BIT_CEILING,
    DEFAULT_BRUTE_CAP,
    DEFAULT_BUDGET_ATOMS,
    DEFAULT_BUDGET_INSTANCES,
    DEFAULT_BUDGET_TERMS,
    DEFAULT_LOG_LEVEL,
    DEFAULT_MAX_EXPONENT,
    DEFAULT_MAX_LEVEL,
    DEFAULT_SEED,
    DEFAULT_WORKERS,
)
from core.errors import ConfigurationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Settings:
    budget_atoms: int = DEFAULT_BUDGET_ATOMS
    budget_terms: int = DEFAULT_BUDGET_TERMS
    budget_instances: int = DEFAULT_BUDGET_INSTANCES
    bit_ceiling: int = DEFAULT_BIT_CEILING
    brute_cap: int = DEFAULT_BRUTE_CAP
    max_level: int = DEFAULT_MAX_LEVEL
    max_exponent: int = DEFAULT_MAX_EXPONENT
    seed: int = DEFAULT_SEED
    workers: int = DEFAULT_WORKERS
    log_level: str = DEFAULT_LOG_LEVEL


_INT_VARIABLES = {
    "HERBRAND_BUDGET_ATOMS": "budget_atoms",
    "HERBRAND_BUDGET_TERMS": "budget_terms",
    "HERBRAND_BUDGET_INSTANCES": "budget_instances",
    "HERBRAND_BIT_CEILING": "bit_ceiling",
    "HERBRAND_BRUTE_CAP": "brute_cap",
    "HERBRAND_MAX_LEVEL": "max_level",
    "HERBRAND_MAX_EXPONENT": "max_exponent",
    "HERBRAND_SEED": "seed",
    "HERBRAND_WORKERS": "workers",
}


def _read_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw.strip(), 0)
    except ValueError:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}") from None
    if value < 0:
        raise ConfigurationError(f"{name} must be non-negative, got {value}")
    return value


def load_settings(use_dotenv: bool = True) -> Settings:
    """Build Settings from HERBRAND_* variables, reading .env first if present."""
    if use_dotenv and load_dotenv is not None:
        load_dotenv()
    defaults = Settings()
    values = {
        field: _read_int(name, getattr(defaults, field))
        for name, field in _INT_VARIABLES.items()
    }
    log_level = (os.getenv("HERBRAND_LOG_LEVEL") or defaults.log_level).upper()
    if not isinstance(logging.getLevelName(log_level), int):
        raise ConfigurationError(f"HERBRAND_LOG_LEVEL has unknown level {log_level!r}")
    settings = Settings(log_level=log_level, **values)
    logger.debug("loaded settings %s", settings)
    return settings
