"""
Configuration settings for the Eschenburg orbifold toolkit.

Edit this file to change numeric limits and defaults. Runtime overrides
come from environment variables or an optional JSON config file; command
line flags always win over both.
"""

import json
import os
from typing import Any, Dict, Optional

# Every integer entry of a weight or action vector must stay below this magnitude
ENTRY_LIMIT = 2 ** 31

# Largest integer bounding box the brute-force lattice oracle will walk
ORACLE_BOX_LIMIT = 10 ** 6

# The box-enumeration validator is test scale only
BRUTE_ORACLE_MAX_H = 200

# Whether (p,q) and (q,p) count as the same space by default
DEFAULT_TRANSPOSE = True

# One-point flag policy during scans: 'theorem-b', 'all' or 'none'
DEFAULT_ONE_POINT = 'theorem-b'
ONE_POINT_MODES = ('theorem-b', 'all', 'none')

CHECKPOINT_VERSION = 1

# Published claims checked by the verify command, relative to the package directory
CORPUS_FILE = 'claims.json'

THREADS_ENV_VAR = 'ESCHENBURG_THREADS'
LOG_LEVEL_ENV_VAR = 'ESCHENBURG_LOG_LEVEL'

CONFIG_KEYS = ('threads', 'transpose', 'one_point', 'log_level')


def get_thread_count(value: Optional[int] = None) -> int:
    """
    Get the number of worker processes for sharded scans.

    Args:
        value: Explicit thread count (e.g. from --threads). If None, the
               ESCHENBURG_THREADS environment variable is consulted, then 1.

    Returns:
        Positive worker count

    Raises:
        ValueError: If the count is not a positive integer
    """
    if value is None:
        raw = os.environ.get(THREADS_ENV_VAR)
        if raw is None or raw.strip() == '':
            return 1
        try:
            value = int(raw)
        except ValueError as e:
            raise ValueError(f"Invalid {THREADS_ENV_VAR} value '{raw}'. Use a positive integer. Error: {e}")

    if value < 1:
        raise ValueError(f"Thread count must be at least 1, got {value}")
    return value


def get_log_level() -> str:
    """Default log level, from ESCHENBURG_LOG_LEVEL or INFO."""
    level = os.environ.get(LOG_LEVEL_ENV_VAR, 'INFO').upper()
    if level not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
        raise ValueError(f"Invalid {LOG_LEVEL_ENV_VAR} value '{level}'")
    return level


def load_config_file(path: Optional[str]) -> Dict[str, Any]:
    """
    Load optional settings from a JSON config file.

    Args:
        path: Path to the JSON file, or None for no file

    Returns:
        Dictionary with any of the keys threads, transpose, one_point, log_level

    Raises:
        FileNotFoundError: If a path is given but does not exist
        ValueError: If the file is not a JSON object or has unknown keys
    """
    if path is None:
        return {}

    if not os.path.exists(path):
        raise FileNotFoundError(f"Config file not found: {path}")

    with open(path, 'r', encoding='utf-8') as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"Config file {path} is not valid JSON: {e}")

    if not isinstance(data, dict):
        raise ValueError(f"Config file {path} must contain a JSON object")

    unknown = sorted(set(data) - set(CONFIG_KEYS))
    if unknown:
        raise ValueError(f"Unknown config keys in {path}: {', '.join(unknown)}")

    if 'one_point' in data and data['one_point'] not in ONE_POINT_MODES:
        raise ValueError(f"one_point must be one of {ONE_POINT_MODES}, got {data['one_point']!r}")
    if 'transpose' in data and not isinstance(data['transpose'], bool):
        raise ValueError("transpose must be true or false")

    return data


def resolve_setting(flag_value: Any, file_value: Any, default: Any) -> Any:
    """Flags take precedence over the config file, which beats the default."""
    if flag_value is not None:
        return flag_value
    if file_value is not None:
        return file_value
    return default
