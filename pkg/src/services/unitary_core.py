"""
Unitary core: SU(2) constructors and their inverses, channel-pair embedding,
projection onto SU(N), photon-number lifting and Haar sampling.
"""
import math
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from scipy.linalg import qr

from src.types.unitary import (
    UnitaryMatrix, StateVector, SU2Params, BeamSplitterParams, ChannelPair, PhotonNumber,
    create_unitary, create_su2_params, create_beam_splitter_params, create_phase_shifter,
    create_photon_number, _frozen_array,
)
from src.utils.error_handler import (
    ValidationError, validate_all_finite, validate_channel_pair, validate_dimension,
)
from src.utils.numerics import (
    UNITARY_TOLERANCE, NULL_TOLERANCE, safe_arg, wrap_angle, unitarity_defect,
    determinant_defect,
)


def su2_from_euler(p: SU2Params) -> UnitaryMatrix:
    """
    Build diag(e^{ia}, e^{-ia}) . [[cos b, -sin b], [sin b, cos b]] . diag(e^{ig}, e^{-ig}).

    Raises:
        InvalidParameterError: If any angle is not finite
    """
    validate_all_finite(p.to_list(), ('alpha', 'beta', 'gamma'))
    c, s = math.cos(p.beta), math.sin(p.beta)
    plus = np.exp(1j * (p.alpha + p.gamma))
    minus = np.exp(1j * (p.alpha - p.gamma))
    matrix = np.array([
        [plus * c, -minus * s],
        [np.conj(minus) * s, np.conj(plus) * c],
    ])
    return UnitaryMatrix(_frozen_array(matrix), True)


def beam_splitter(p: BeamSplitterParams) -> UnitaryMatrix:
    """
    Build [[e^{i phi_t} cos t, -e^{-i phi_r} sin t], [e^{i phi_r} sin t, e^{-i phi_t} cos t]].

    Raises:
        InvalidParameterError: If any parameter is not finite
    """
    validate_all_finite(p.to_list(), ('phi_t', 'theta', 'phi_r'))
    c, s = math.cos(p.theta), math.sin(p.theta)
    t = np.exp(1j * p.phi_t)
    r = np.exp(1j * p.phi_r)
    matrix = np.array([
        [t * c, -np.conj(r) * s],
        [r * s, np.conj(t) * c],
    ])
    return UnitaryMatrix(_frozen_array(matrix), True)


def real_rotation(s: float) -> UnitaryMatrix:
    """2x2 real rotation by s, the phi_t = phi_r = 0 beam splitter."""
    return beam_splitter(create_beam_splitter_params(0.0, s, 0.0))


def _check_su2(block: np.ndarray, tolerance: float) -> None:
    if block.shape != (2, 2):
        raise ValidationError(f"Expected a 2x2 block, got shape {block.shape}", field='block')
    defect = max(unitarity_defect(block), determinant_defect(block))
    if defect > tolerance:
        raise ValidationError(
            f"Block is not special unitary (defect {defect:.3e})",
            field='block',
            details={'defect': defect}
        )


def su2_to_euler(m: UnitaryMatrix, tolerance: float = UNITARY_TOLERANCE) -> SU2Params:
    """
    Recover Euler angles with beta in [0, pi/2] and alpha, gamma in (-pi, pi].

    An undetermined phase (a vanishing entry) is set to 0.
    """
    block = m.matrix
    _check_su2(block, tolerance)
    a, b = block[0, 0], block[0, 1]
    beta = math.atan2(abs(b), abs(a))
    total = safe_arg(a, NULL_TOLERANCE)        # alpha + gamma
    difference = safe_arg(-b, NULL_TOLERANCE)  # alpha - gamma
    return create_su2_params(
        wrap_angle((total + difference) / 2.0),
        beta,
        wrap_angle((total - difference) / 2.0),
    )


def beam_splitter_params(m: UnitaryMatrix, tolerance: float = UNITARY_TOLERANCE) -> BeamSplitterParams:
    """Recover (phi_t, theta, phi_r) with theta in [0, pi/2]."""
    block = m.matrix
    _check_su2(block, tolerance)
    theta = math.atan2(abs(block[1, 0]), abs(block[0, 0]))
    return create_beam_splitter_params(
        safe_arg(block[0, 0], NULL_TOLERANCE),
        theta,
        safe_arg(block[1, 0], NULL_TOLERANCE),
    )


def euler_to_beam_splitter(p: SU2Params) -> BeamSplitterParams:
    """phi_t = alpha + gamma, theta = beta, phi_r = gamma - alpha."""
    return create_beam_splitter_params(
        wrap_angle(p.alpha + p.gamma), p.beta, wrap_angle(p.gamma - p.alpha)
    )


def beam_splitter_to_euler(p: BeamSplitterParams) -> SU2Params:
    """Inverse of euler_to_beam_splitter; both angles halve the phase sum and difference."""
    return create_su2_params(
        wrap_angle((p.phi_t - p.phi_r) / 2.0), p.theta, wrap_angle((p.phi_t + p.phi_r) / 2.0)
    )


def embed(block: UnitaryMatrix, at: ChannelPair,
          tolerance: float = UNITARY_TOLERANCE) -> UnitaryMatrix:
    """
    Place a 2x2 special unitary on rows/columns (i, j) of the n x n identity.

    Raises:
        InvalidChannelError: If the pair does not fit n channels
        ValidationError: If the block is not special unitary
    """
    validate_channel_pair(at.i, at.j, at.n)
    _check_su2(block.matrix, tolerance)
    i, j = at.indices
    matrix = np.eye(at.n, dtype=complex)
    matrix[np.ix_([i, j], [i, j])] = block.matrix
    return UnitaryMatrix(_frozen_array(matrix), True)


def special_unitarize(u: UnitaryMatrix, tolerance: float = UNITARY_TOLERANCE) -> UnitaryMatrix:
    """
    Return U . det(U)^{-1/N} using the principal Nth root.

    Raises:
        ValidationError: If U is not unitary within tolerance
    """
    defect = unitarity_defect(u.matrix)
    if defect > tolerance:
        raise ValidationError(
            f"Cannot project a non-unitary matrix onto SU(N) (defect {defect:.3e})",
            field='entries',
            details={'unitarity_defect': defect}
        )
    det = np.linalg.det(u.matrix)
    factor = np.exp(-1j * np.angle(det) / u.dim)
    return UnitaryMatrix(_frozen_array(u.matrix * factor), True)


def _occupation_coefficient(block: np.ndarray, n2: int, m2: int, photons: int) -> complex:
    u11, u12 = block[0, 0], block[0, 1]
    u21, u22 = block[1, 0], block[1, 1]
    n1, m1 = photons - n2, photons - m2
    total = 0j
    # p photons from the channel-1 group end in channel 2
    for p in range(max(0, m2 - n2), min(n1, m2) + 1):
        q = m2 - p
        total += (math.comb(n1, p) * math.comb(n2, q)
                  * u11 ** (n1 - p) * u21 ** p * u12 ** (n2 - q) * u22 ** q)
    norm = math.sqrt(math.factorial(m1) * math.factorial(m2)
                     / (math.factorial(n1) * math.factorial(n2)))
    return total * norm


def lift_su2(u: UnitaryMatrix, photons: Union[int, PhotonNumber],
             tolerance: float = UNITARY_TOLERANCE) -> UnitaryMatrix:
    """
    Spin lambda/2 representation of a 2x2 special unitary.

    The result acts on the normalized occupation basis |lambda - k, k>, where
    k = 0..lambda counts the photons in channel 2.

    Raises:
        ValidationError: If U is not a 2x2 special unitary
        InvalidParameterError: If the photon number is negative
    """
    n = photons if isinstance(photons, PhotonNumber) else create_photon_number(photons)
    _check_su2(u.matrix, tolerance)
    if n.value == 1:
        return u

    dim = n.dimension
    lifted = np.empty((dim, dim), dtype=complex)
    for n2 in range(dim):
        for m2 in range(dim):
            lifted[m2, n2] = _occupation_coefficient(u.matrix, n2, m2, n.value)
    return UnitaryMatrix(_frozen_array(lifted), True)


def apply(u: UnitaryMatrix, v: StateVector) -> StateVector:
    """
    Matrix-vector product.

    Raises:
        ValidationError: On dimension mismatch
    """
    validate_dimension(u.dim, v.dim, 'state')
    return u @ v


def haar_random_unitary(n: int, rng: Optional[np.random.Generator] = None,
                        special: bool = True) -> UnitaryMatrix:
    """
    Sample a Haar-random n x n unitary from the QR factorization of a
    complex Ginibre matrix with the diagonal phases of R divided out.
    """
    rng = rng if rng is not None else np.random.default_rng()
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = qr(z)
    d = np.diag(r)
    q = q * (d / np.abs(d))
    u = create_unitary(q)
    return special_unitarize(u) if special else u


def mach_zehnder(p: BeamSplitterParams) -> List[Tuple[str, BeamSplitterParams]]:
    """
    Realize a generalized beam splitter with two balanced splitters and three
    phase shifters.

    Returns:
        (label, parameters) pairs in application order; multiplying their
        matrices right-to-left reproduces beam_splitter(p)
    """
    euler = beam_splitter_to_euler(p)
    balanced = create_beam_splitter_params(0.0, math.pi / 4, 0.0)
    return [
        ("phase_in", create_phase_shifter(wrap_angle(euler.gamma - math.pi / 4))),
        ("splitter_1", balanced),
        ("phase_mid", create_phase_shifter(wrap_angle(math.pi / 2 - euler.beta))),
        ("splitter_2", balanced),
        ("phase_out", create_phase_shifter(wrap_angle(euler.alpha - math.pi / 4))),
    ]


def euler_device(p: SU2Params) -> Dict[str, float]:
    """
    Physical settings of an Euler element: a phase slab giving relative phase
    2*gamma, a partially transmitting mirror with transmission cos^2(beta),
    and a second slab giving relative phase 2*alpha.
    """
    return {
        "input_relative_phase": wrap_angle(2.0 * p.gamma),
        "mirror_transmission": math.cos(p.beta) ** 2,
        "output_relative_phase": wrap_angle(2.0 * p.alpha),
    }
