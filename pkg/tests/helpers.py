"""Random draws shared by the test modules."""
import math

import numpy as np

from src.types.geodesic import create_triangle_params_su3, create_triangle_params_su4
from src.utils.numerics import angle_distance

HALF_PI = math.pi / 2
# Keeps draws away from collapsed legs and orthogonal vertices.
MARGIN = 0.05


def draw_su3(rng):
    return create_triangle_params_su3(
        rng.uniform(MARGIN, HALF_PI - MARGIN),
        rng.uniform(MARGIN, HALF_PI - MARGIN),
        rng.uniform(-math.pi, math.pi),
        rng.uniform(MARGIN, math.pi - MARGIN),
    )


def draw_su4(rng):
    return create_triangle_params_su4(
        rng.uniform(MARGIN, HALF_PI - MARGIN),
        rng.uniform(MARGIN, HALF_PI - MARGIN),
        rng.uniform(-math.pi, math.pi),
        rng.uniform(MARGIN, math.pi - MARGIN),
        rng.uniform(MARGIN, math.pi - MARGIN),
        rng.uniform(MARGIN, math.pi - MARGIN),
    )


def random_unit(rng, n):
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def random_su2(rng):
    x, y = random_unit(rng, 2)
    return np.array([[x, -np.conj(y)], [y, np.conj(x)]])


def assert_angle_close(a, b, tol):
    assert angle_distance(a, b) <= tol, f"{a} vs {b}"
