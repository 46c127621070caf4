"""
Value types for the unitary core: matrices, state vectors, SU(2) parameter
triples, channel pairs and photon numbers.

All values are immutable once constructed; the ``create_*`` factories
validate eagerly.
"""
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from src.utils.error_handler import (
    ValidationError, validate_finite, validate_channel_pair, validate_photon_number,
    validate_dimension,
)
from src.utils.numerics import UNITARY_TOLERANCE, unitarity_defect, determinant_defect


def _frozen_array(values, dtype=complex) -> np.ndarray:
    array = np.array(values, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class UnitaryMatrix:
    """
    Dense N x N complex unitary matrix.

    ``special`` records that det(U) = 1 was checked at construction.
    """
    matrix: np.ndarray
    special: bool = False

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def dagger(self) -> 'UnitaryMatrix':
        return UnitaryMatrix(_frozen_array(self.matrix.conj().T), self.special)

    def det(self) -> complex:
        return complex(np.linalg.det(self.matrix))

    def __matmul__(self, other):
        if isinstance(other, UnitaryMatrix):
            validate_dimension(self.dim, other.dim, 'matrix')
            return UnitaryMatrix(_frozen_array(self.matrix @ other.matrix),
                                 self.special and other.special)
        if isinstance(other, StateVector):
            validate_dimension(self.dim, other.dim, 'state')
            return StateVector(_frozen_array(self.matrix @ other.amplitudes))
        return NotImplemented

    def to_dict(self) -> Dict:
        """Convert to a JSON-friendly dictionary of [re, im] pairs."""
        return {
            "dim": self.dim,
            "special": self.special,
            "entries": [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix],
        }


@dataclass(frozen=True, eq=False)
class StateVector:
    """Unit vector in C^N representing a ray."""
    amplitudes: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.amplitudes.shape[0])

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def rephased(self, phase: float) -> 'StateVector':
        """Return e^{i phase} times this vector."""
        return StateVector(_frozen_array(np.exp(1j * phase) * self.amplitudes))

    def to_list(self) -> List[List[float]]:
        return [[float(z.real), float(z.imag)] for z in self.amplitudes]


@dataclass(frozen=True)
class SU2Params:
    """Euler angles of diag(e^{ia}, e^{-ia}) . R_y(b) . diag(e^{ig}, e^{-ig})."""
    alpha: float
    beta: float
    gamma: float

    def to_list(self) -> List[float]:
        return [self.alpha, self.beta, self.gamma]


@dataclass(frozen=True)
class BeamSplitterParams:
    """Transmitted phase, mixing angle and reflected phase of a beam splitter."""
    phi_t: float
    theta: float
    phi_r: float

    @property
    def transmission(self) -> float:
        return float(np.cos(self.theta) ** 2)

    def to_list(self) -> List[float]:
        return [self.phi_t, self.theta, self.phi_r]


@dataclass(frozen=True)
class ChannelPair:
    """1-based channel pair (i, j) with i < j <= n."""
    i: int
    j: int
    n: int

    @property
    def indices(self) -> Tuple[int, int]:
        """0-based row/column indices."""
        return self.i - 1, self.j - 1

    def to_list(self) -> List[int]:
        return [self.i, self.j]


@dataclass(frozen=True)
class PhotonNumber:
    """Number of photons shared by two channels."""
    value: int

    @property
    def dimension(self) -> int:
        return self.value + 1


def create_unitary(entries: Union[np.ndarray, Sequence[Sequence[complex]]],
                   special: bool = False,
                   tolerance: float = UNITARY_TOLERANCE) -> UnitaryMatrix:
    """
    Factory function to create a validated UnitaryMatrix.

    Args:
        entries: Square complex array
        special: Also require det(U) = 1
        tolerance: Max-norm tolerance for U^dagger U - I and |det - 1|

    Returns:
        UnitaryMatrix instance

    Raises:
        ValidationError: If the array is not square, not finite, or not unitary
    """
    matrix = np.array(entries, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] == 0:
        raise ValidationError(f"Matrix must be square and non-empty, got shape {matrix.shape}",
                              field='entries')
    if not np.all(np.isfinite(matrix)):
        raise ValidationError("Matrix entries must be finite", field='entries')

    defect = unitarity_defect(matrix)
    if defect > tolerance:
        raise ValidationError(
            f"Matrix is not unitary (defect {defect:.3e} > {tolerance:.1e})",
            field='entries',
            details={'unitarity_defect': defect}
        )
    if special:
        det_defect = determinant_defect(matrix)
        if det_defect > tolerance:
            raise ValidationError(
                f"Matrix is not special (|det - 1| = {det_defect:.3e})",
                field='entries',
                details={'determinant_defect': det_defect}
            )
    return UnitaryMatrix(_frozen_array(matrix), special)


def create_state(amplitudes: Union[np.ndarray, Sequence[complex]],
                 normalize: bool = False,
                 tolerance: float = UNITARY_TOLERANCE) -> StateVector:
    """
    Factory function to create a validated StateVector.

    Raises:
        ValidationError: If the vector is empty, not finite, or not unit norm
    """
    vector = np.array(amplitudes, dtype=complex).reshape(-1)
    if vector.size == 0 or not np.all(np.isfinite(vector)):
        raise ValidationError("State amplitudes must be finite and non-empty", field='amplitudes')

    norm = float(np.linalg.norm(vector))
    if normalize:
        if norm == 0.0:
            raise ValidationError("Cannot normalize the zero vector", field='amplitudes')
        vector = vector / norm
    elif abs(norm - 1.0) > tolerance:
        raise ValidationError(
            f"State is not normalized (norm {norm:.12g})",
            field='amplitudes',
            details={'norm': norm}
        )
    return StateVector(_frozen_array(vector))


def basis_state(n: int, index: int = 0) -> StateVector:
    """Unit vector e_{index} in C^n (0-based index)."""
    vector = np.zeros(n, dtype=complex)
    vector[index] = 1.0
    return StateVector(_frozen_array(vector))


def create_su2_params(alpha: float, beta: float, gamma: float) -> SU2Params:
    """Factory function to create validated Euler angles."""
    return SU2Params(
        alpha=validate_finite(alpha, 'alpha'),
        beta=validate_finite(beta, 'beta'),
        gamma=validate_finite(gamma, 'gamma'),
    )


def create_beam_splitter_params(phi_t: float, theta: float, phi_r: float) -> BeamSplitterParams:
    """Factory function to create validated beam splitter parameters."""
    return BeamSplitterParams(
        phi_t=validate_finite(phi_t, 'phi_t'),
        theta=validate_finite(theta, 'theta'),
        phi_r=validate_finite(phi_r, 'phi_r'),
    )


def create_phase_shifter(phase: float) -> BeamSplitterParams:
    """A phase shifter is the theta = 0 beam splitter: diag(e^{i phase}, e^{-i phase})."""
    return create_beam_splitter_params(phase, 0.0, 0.0)


def create_channel_pair(i: int, j: int, n: int) -> ChannelPair:
    """Factory function to create a validated channel pair."""
    validate_channel_pair(i, j, n)
    return ChannelPair(i, j, n)


def create_photon_number(value: int) -> PhotonNumber:
    """Factory function to create a validated photon number."""
    return PhotonNumber(validate_photon_number(value))
