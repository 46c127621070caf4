"""
Small numerical helpers shared by the services: angle branches, tolerances
and matrix checks.
"""
import math
from typing import Union

import numpy as np


UNITARY_TOLERANCE = 1e-10
# Entries below this magnitude are treated as already nulled.
NULL_TOLERANCE = 1e-14

Number = Union[float, complex]


def wrap_angle(angle: float) -> float:
    """Map an angle onto the principal branch (-pi, pi]."""
    wrapped = math.remainder(float(angle), 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped


def angle_distance(a: float, b: float) -> float:
    """Distance between two angles on the circle, |arg e^{i(a-b)}|."""
    return abs(wrap_angle(a - b))


def safe_arg(z: Number, floor: float = 0.0) -> float:
    """
    Principal argument of z, or 0 when |z| <= floor.

    The zero convention keeps extracted parameters deterministic on the
    measure-zero sets where a phase is undetermined.
    """
    if abs(z) <= floor:
        return 0.0
    return wrap_angle(float(np.angle(z)))


def unitarity_defect(matrix: np.ndarray) -> float:
    """Max-norm of U^dagger U - I."""
    n = matrix.shape[0]
    return float(np.max(np.abs(matrix.conj().T @ matrix - np.eye(n))))


def determinant_defect(matrix: np.ndarray) -> float:
    """|det U - 1|."""
    return float(abs(np.linalg.det(matrix) - 1.0))


def max_abs_diff(a: np.ndarray, b: np.ndarray) -> float:
    """Max-norm of a - b."""
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) if np.size(a) else 0.0


def overlap(bra: np.ndarray, ket: np.ndarray) -> complex:
    """Inner product <bra|ket>, conjugate-linear in bra."""
    return complex(np.vdot(bra, ket))
