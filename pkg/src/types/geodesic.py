"""
Geodesic value types: triangle parameters, legs, triangles and the
(xi, eta, tau, chi) parametrization of the third vertex.
"""
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple, Union

import numpy as np

from src.types.unitary import StateVector, UnitaryMatrix, _frozen_array
from src.utils.error_handler import validate_finite, validate_range
from src.utils.numerics import wrap_angle


HALF_PI = math.pi / 2


def rotation_matrix(s: float, dim: int) -> np.ndarray:
    """Real rotation by s in the plane of channels 1 and 2, identity elsewhere."""
    matrix = np.eye(dim, dtype=complex)
    c, sn = math.cos(s), math.sin(s)
    matrix[0, 0], matrix[0, 1] = c, -sn
    matrix[1, 0], matrix[1, 1] = sn, c
    return matrix


@dataclass(frozen=True)
class TriangleParamsSU3:
    s1: float
    s2: float
    alpha: float
    beta: float

    def to_dict(self) -> Dict[str, float]:
        return {"s1": self.s1, "s2": self.s2, "alpha": self.alpha, "beta": self.beta}


@dataclass(frozen=True)
class TriangleParamsSU4:
    s1: float
    s2: float
    alpha: float
    beta1: float
    beta2: float
    beta3: float

    def to_dict(self) -> Dict[str, float]:
        return {
            "s1": self.s1, "s2": self.s2, "alpha": self.alpha,
            "beta1": self.beta1, "beta2": self.beta2, "beta3": self.beta3,
        }


TriangleParams = Union[TriangleParamsSU3, TriangleParamsSU4]


@dataclass(frozen=True, eq=False)
class GeodesicLeg:
    """
    One geodesic leg from ``start`` to ``end``.

    ``frame`` is the unitary V whose first two columns span the leg's plane;
    the evolution at parameter s is V . R_s . V^dagger. ``removed_phase`` is
    the phase taken off the target ray to make <end|start> real positive.
    """
    start: StateVector
    end: StateVector
    s_end: float
    frame: np.ndarray
    removed_phase: float = 0.0

    @property
    def dim(self) -> int:
        return self.start.dim

    def evolution_at(self, s: float) -> UnitaryMatrix:
        rotation = rotation_matrix(s, self.dim)
        return UnitaryMatrix(_frozen_array(self.frame @ rotation @ self.frame.conj().T), True)

    @property
    def evolution(self) -> UnitaryMatrix:
        return self.evolution_at(self.s_end)

    def to_dict(self) -> Dict:
        return {
            "start": self.start.to_list(),
            "end": self.end.to_list(),
            "s_end": self.s_end,
            "removed_phase": self.removed_phase,
        }


@dataclass(frozen=True, eq=False)
class GeodesicTriangle:
    """
    Three vertices joined by three geodesic legs; leg k runs from vertex k to
    vertex k+1 and the last leg ends on a rephased copy of vertex 1.
    """
    vertices: Tuple[StateVector, StateVector, StateVector]
    legs: Tuple[GeodesicLeg, GeodesicLeg, GeodesicLeg]
    group_dim: int
    params: Optional[TriangleParams] = None
    orientation: int = 1

    def to_dict(self) -> Dict:
        result = {
            "group_dim": self.group_dim,
            "orientation": self.orientation,
            "vertices": [v.to_list() for v in self.vertices],
            "legs": [leg.to_dict() for leg in self.legs],
        }
        if self.params is not None:
            result["params"] = self.params.to_dict()
        return result


@dataclass(frozen=True)
class ReparamPsi3:
    """psi3 = (e^{i xi} cos eta, e^{i(xi + chi)} sin eta cos tau, sin eta sin tau)."""
    xi: float
    eta: float
    tau: float
    chi: float

    def reconstruct(self) -> np.ndarray:
        return np.array([
            np.exp(1j * self.xi) * math.cos(self.eta),
            np.exp(1j * (self.xi + self.chi)) * math.sin(self.eta) * math.cos(self.tau),
            math.sin(self.eta) * math.sin(self.tau),
        ], dtype=complex)

    def to_dict(self) -> Dict[str, float]:
        return {"xi": self.xi, "eta": self.eta, "tau": self.tau, "chi": self.chi}


def create_triangle_params_su3(s1: float, s2: float, alpha: float, beta: float) -> TriangleParamsSU3:
    """
    Factory function to create validated SU(3) triangle parameters.

    s1, s2 must lie in [0, pi/2] and beta in [0, pi]; alpha is wrapped onto
    (-pi, pi].

    Raises:
        InvalidParameterError: If a value is non-finite or out of range
    """
    return TriangleParamsSU3(
        s1=validate_range(s1, 's1', 0.0, HALF_PI),
        s2=validate_range(s2, 's2', 0.0, HALF_PI),
        alpha=wrap_angle(validate_finite(alpha, 'alpha')),
        beta=validate_range(beta, 'beta', 0.0, math.pi),
    )


def create_triangle_params_su4(s1: float, s2: float, alpha: float,
                               beta1: float, beta2: float, beta3: float) -> TriangleParamsSU4:
    """Factory function to create validated SU(4) triangle parameters."""
    return TriangleParamsSU4(
        s1=validate_range(s1, 's1', 0.0, HALF_PI),
        s2=validate_range(s2, 's2', 0.0, HALF_PI),
        alpha=wrap_angle(validate_finite(alpha, 'alpha')),
        beta1=validate_range(beta1, 'beta1', 0.0, math.pi),
        beta2=validate_range(beta2, 'beta2', 0.0, math.pi),
        beta3=validate_range(beta3, 'beta3', 0.0, math.pi),
    )


def triangle_params_from_dict(values: Dict[str, float]) -> TriangleParams:
    """Build SU(3) or SU(4) parameters depending on which keys are present."""
    if 'beta1' in values:
        return create_triangle_params_su4(
            values['s1'], values['s2'], values['alpha'],
            values['beta1'], values['beta2'], values['beta3'],
        )
    return create_triangle_params_su3(values['s1'], values['s2'], values['alpha'], values['beta'])
