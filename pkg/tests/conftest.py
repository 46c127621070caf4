"""
Shared fixtures: seeded generators, random triangle parameters and a clean
environment for configuration-sensitive tests.
"""
import os
import sys
import logging

import numpy as np
import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from src.types.geodesic import create_triangle_params_su3, create_triangle_params_su4  # noqa: E402
from helpers import draw_su3, draw_su4  # noqa: E402


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    for name in ("GEOPHASE_LOG_LEVEL", "GEOPHASE_SWEEP_WORKERS", "GEOPHASE_PROGRESS", "GEOPHASE_AUDIT"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture(autouse=True)
def detach_cli_log_handlers():
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        if type(handler) in (logging.StreamHandler, logging.FileHandler):
            root.removeHandler(handler)
            handler.close()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def su3_draws(rng):
    return [draw_su3(rng) for _ in range(1000)]


@pytest.fixture
def su4_draws(rng):
    return [draw_su4(rng) for _ in range(500)]


@pytest.fixture
def su3_params():
    return create_triangle_params_su3(0.7, 0.9, 1.2, 0.4)


@pytest.fixture
def su4_params():
    return create_triangle_params_su4(0.7, 0.9, 1.2, 0.4, 0.8, 1.1)
