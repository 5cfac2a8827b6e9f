# -*- coding: utf-8 -*-
"""Application-wide constants."""

APP_VERSION = "1.0.0"
APP_NAME = "Herbrand Workbench"

# Budgets (overridable through HERBRAND_* environment variables)
DEFAULT_BUDGET_ATOMS = 6000
DEFAULT_BUDGET_TERMS = 400
DEFAULT_BUDGET_INSTANCES = 2_000_000
DEFAULT_BIT_CEILING = 1 << 22
DEFAULT_BRUTE_CAP = 24
DEFAULT_MAX_LEVEL = 3
DEFAULT_MAX_EXPONENT = 64
DEFAULT_SEED = 0
DEFAULT_WORKERS = 1
DEFAULT_LOG_LEVEL = "WARNING"

# Built-in symbols
EQUALITY = "="
LESS_EQUAL = "<="
PLUS = "+"
TIMES = "*"
SUCCESSOR = "s"
ZERO = "0"
ONE = "1"
OMEGA1_GRAPH = "Omega1"

# Generated names
SKOLEM_PREFIX = "sk"
BOUND_PREFIX = "x"
PLACEHOLDER_PREFIX = "#"
CANONICAL_BOUND_PREFIX = "b"

# Short names accepted by `skolemize --alias`
FRAKTUR_ALIASES = {
    "p": "𝔭",
    "h": "𝔥",
    "c": "𝔠",
    "f": "𝔣",
    "q": "𝔮",
    "w": "𝔴",
}

# Exit codes
EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_BUDGET = 2

# Surrogate tower arithmetic
TOWER_RELATIVE_TOLERANCE = 1e-9
TOWER_FLOAT_LIMIT = 1024.0

# p_bound_check preconditions
P_BOUND_MIN_SAMPLES = 8
P_BOUND_MIN_DECADES = 2.0

CERTIFICATE_HEADER = "c herbrand-certificate v1"
