"""
Runtime defaults read from the environment.

Configuration (environment variables):
  ABSTAB_OUTPUT_DIR   default output directory      (default: ./abstab-out)
  ABSTAB_JOBS         sampling worker threads       (default: 1)
  ABSTAB_LOG_LEVEL    log level of the CLI          (default: INFO)
  ABSTAB_GUARD_DIM    max d^n for dense operators   (default: 64)
  ABSTAB_VERBOSE      debug logging when true       (default: false)

Command-line flags always take precedence.
"""

import os
import logging

log = logging.getLogger(__name__)

DEFAULT_OUTPUT_DIR = './abstab-out'
DEFAULT_GUARD_DIM = 64

# Tolerances shared across modules.
HERMITIAN_TOL = 1e-10
SPECTRUM_TOL = 1e-9
VERDICT_TOL = 1e-10
DD_TOL = 1e-9
PIVOT_TOL = 1e-8
FINGERPRINT_DECIMALS = 6


def _env_bool(key, default=False):
    return os.environ.get(key, str(default)).lower() in ('true', '1', 'yes')


def _env_int(key, default):
    val = os.environ.get(key, '').strip()
    if not val:
        return default
    try:
        return int(val)
    except ValueError:
        log.warning('Ignoring non-integer %s=%r, using %d', key, val, default)
        return default


def output_dir() -> str:
    return os.environ.get('ABSTAB_OUTPUT_DIR', DEFAULT_OUTPUT_DIR)


def default_jobs() -> int:
    return max(1, _env_int('ABSTAB_JOBS', 1))


def log_level() -> int:
    name = os.environ.get('ABSTAB_LOG_LEVEL', 'INFO').upper()
    return getattr(logging, name, logging.INFO)


def guard_dim() -> int:
    """Largest d^n for which dense operator lists are materialised."""
    return _env_int('ABSTAB_GUARD_DIM', DEFAULT_GUARD_DIM)


def verbose_default() -> bool:
    return _env_bool('ABSTAB_VERBOSE', False)
