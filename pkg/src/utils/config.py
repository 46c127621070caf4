"""
Configuration utilities for the geometric phase toolkit.

Settings come from ``config.yml`` with environment overrides layered on top.
"""
import os
import logging
from typing import Any, Dict, Optional

import yaml


DEFAULT_CONFIG: Dict[str, Any] = {
    # Tolerances
    'unitary_tolerance': 1e-10,
    'agreement_tolerance': 1e-8,
    'closure_tolerance': 1e-8,
    'geodesic_tolerance': 1e-8,
    'decompose_tolerance': 1e-9,

    # Geodesic sampling and sweeps
    'geodesic_samples': 32,
    'sweep_workers': 4,
    'progress_bar': True,

    # Circuit conventions
    'omega2_sign': -1,

    # Output
    'output_dir': 'results',
    'audit': False,

    # Logging
    'log_level': 'INFO',
    'log_file': None,
}


def get_bool(env_var: str, default: bool = False) -> bool:
    """Get boolean value from environment variable."""
    value = os.getenv(env_var, str(default)).lower()
    return value in ("true", "1", "yes", "on")


def get_int(env_var: str, default: int) -> int:
    """Get integer value from environment variable."""
    return int(os.getenv(env_var, str(default)))


def get_log_level(default: str = 'INFO') -> str:
    """Get log level override. Defaults to the configured level."""
    return os.getenv("GEOPHASE_LOG_LEVEL", default).upper()


def get_sweep_workers(default: int = 4) -> int:
    """Get the worker count for parameter sweeps."""
    return max(1, get_int("GEOPHASE_SWEEP_WORKERS", default))


def is_progress_enabled(default: bool = True) -> bool:
    """Check if the sweep progress bar is enabled."""
    return get_bool("GEOPHASE_PROGRESS", default=default)


def is_audit_enabled(default: bool = False) -> bool:
    """Check if JSONL audit records are written."""
    return get_bool("GEOPHASE_AUDIT", default=default)


def load_config(config_file: Optional[str] = "config.yml") -> Dict[str, Any]:
    """
    Load configuration from a YAML file and apply environment overrides.

    Missing files and missing keys fall back to DEFAULT_CONFIG.

    Args:
        config_file: Path to the YAML file, or None for defaults only

    Returns:
        Effective configuration dictionary
    """
    config = dict(DEFAULT_CONFIG)

    if config_file and os.path.exists(config_file):
        with open(config_file, 'r') as f:
            loaded = yaml.safe_load(f) or {}
        unknown = sorted(set(loaded) - set(DEFAULT_CONFIG))
        if unknown:
            logging.warning(f"Ignoring unknown config keys: {', '.join(unknown)}")
        config.update({k: v for k, v in loaded.items() if k in DEFAULT_CONFIG})

    config['log_level'] = get_log_level(str(config['log_level']))
    config['sweep_workers'] = get_sweep_workers(int(config['sweep_workers']))
    config['progress_bar'] = is_progress_enabled(bool(config['progress_bar']))
    config['audit'] = is_audit_enabled(bool(config['audit']))

    for key in ('unitary_tolerance', 'agreement_tolerance', 'closure_tolerance',
                'geodesic_tolerance', 'decompose_tolerance'):
        config[key] = float(config[key])
    config['geodesic_samples'] = int(config['geodesic_samples'])
    config['omega2_sign'] = -1 if int(config['omega2_sign']) < 0 else 1

    return config


def log_runtime_config(config: Dict[str, Any]) -> None:
    """Log the effective configuration at startup."""
    logging.info(
        f"Tolerances: unitary={config['unitary_tolerance']} agreement={config['agreement_tolerance']} "
        f"closure={config['closure_tolerance']} decompose={config['decompose_tolerance']}"
    )
    logging.info(
        f"Runtime: sweep_workers={config['sweep_workers']} progress_bar={config['progress_bar']} "
        f"omega2_sign={config['omega2_sign']} audit={config['audit']} output_dir={config['output_dir']}"
    )
