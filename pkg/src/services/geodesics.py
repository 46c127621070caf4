"""
Geodesic curves, legs and triangles on SU(N)/U(N-1).

A leg from ray a to ray b (with <b|a> real and non-negative) is generated by
V . R_s . V^dagger, where V has a and the normalized component of b
perpendicular to a as its first two columns and R_s rotates the first two
coordinates. Triangles chain three such legs.
"""
import math
import logging
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import qr

from src.types.unitary import StateVector, UnitaryMatrix, create_state, _frozen_array
from src.types.geodesic import (
    GeodesicLeg, GeodesicTriangle, ReparamPsi3, TriangleParams, TriangleParamsSU3,
    TriangleParamsSU4, rotation_matrix,
)
from src.utils.error_handler import (
    DegenerateLegError, DegenerateTriangleError, UndefinedRephaseError, ValidationError,
    validate_finite, validate_dimension, require,
)
from src.utils.numerics import NULL_TOLERANCE, overlap, safe_arg, wrap_angle


# Overlaps may carry this much imaginary or negative rounding and still count
# as real non-negative.
OVERLAP_TOLERANCE = 1e-10
# A perpendicular component below this norm means the two rays coincide.
DEGENERATE_TOLERANCE = 1e-12
GEODESIC_TOLERANCE = 1e-8


def coset_dimension(n: int) -> int:
    """Real dimension of SU(n)/U(n-1)."""
    if n < 2:
        raise ValidationError(f"Coset SU(n)/U(n-1) needs n >= 2, got {n}", field='n')
    return 2 * (n - 1)


def reference_rotation(s: float, dim: int) -> UnitaryMatrix:
    """Real rotation by s in the (1, 2) plane of C^dim, identity elsewhere."""
    validate_finite(s, 's')
    if dim < 2:
        raise ValidationError(f"Rotation needs dim >= 2, got {dim}", field='dim')
    return UnitaryMatrix(_frozen_array(rotation_matrix(s, dim)), True)


def _split(a: StateVector, b: StateVector) -> Tuple[float, np.ndarray, float]:
    """Return the real overlap, the perpendicular part of b, and its norm."""
    validate_dimension(a.dim, b.dim, 'state')
    ov = overlap(a.amplitudes, b.amplitudes)
    require(
        abs(ov.imag) <= OVERLAP_TOLERANCE and ov.real >= -OVERLAP_TOLERANCE,
        f"Overlap {ov:.6g} is not real and non-negative; rephase the target first",
        field='overlap', overlap=[ov.real, ov.imag],
    )
    perpendicular = b.amplitudes - a.amplitudes * ov
    return max(ov.real, 0.0), perpendicular, float(np.linalg.norm(perpendicular))


def geodesic_curve(a: StateVector, b: StateVector, s: float) -> StateVector:
    """
    Point at arc parameter s on the geodesic from a toward b.

    Raises:
        PreconditionError: If <b|a> is not real non-negative or s is out of range
        DegenerateLegError: If a and b are the same ray
    """
    s = validate_finite(s, 's')
    ov, perpendicular, norm = _split(a, b)
    if norm <= DEGENERATE_TOLERANCE:
        raise DegenerateLegError("Geodesic between coincident rays is undefined",
                                 details={'perpendicular_norm': norm})
    s_end = math.atan2(norm, ov)
    require(-1e-12 <= s <= s_end + 1e-12, f"s={s} outside [0, {s_end}]", field='s')
    point = a.amplitudes * math.cos(s) + perpendicular / norm * math.sin(s)
    return StateVector(_frozen_array(point))


def leg_rephase(a: StateVector, b: StateVector) -> Tuple[StateVector, float]:
    """
    Rephase b so that its overlap with a is real and positive.

    Returns:
        (b . e^{-i delta}, delta) with delta = arg <a|b>

    Raises:
        UndefinedRephaseError: If a and b are orthogonal
    """
    validate_dimension(a.dim, b.dim, 'state')
    ov = overlap(a.amplitudes, b.amplitudes)
    if ov == 0:
        raise UndefinedRephaseError("Orthogonal states have no unique connecting geodesic")
    delta = float(np.angle(ov))
    return StateVector(_frozen_array(b.amplitudes * np.exp(-1j * delta))), delta


def _frame(a: np.ndarray, w: np.ndarray, completion_basis: Optional[np.ndarray] = None) -> np.ndarray:
    """Unitary with columns a, w, then an orthonormal completion with det 1."""
    n = a.shape[0]
    if n == 2:
        return np.column_stack([a, w])
    basis = np.eye(n, dtype=complex) if completion_basis is None else np.asarray(completion_basis, dtype=complex)
    q, _ = qr(np.column_stack([a, w, basis]))
    frame = np.array(q, dtype=complex)
    frame[:, 0] = a
    frame[:, 1] = w
    det = np.linalg.det(frame)
    frame[:, -1] *= np.exp(-1j * np.angle(det))
    return frame


def geodesic_evolution(a: StateVector, b: StateVector,
                       completion_basis: Optional[np.ndarray] = None,
                       removed_phase: float = 0.0) -> GeodesicLeg:
    """
    Build the leg whose evolution V . R_s . V^dagger carries a to b at
    s_end = arccos <b|a>.

    Args:
        a: Start of the leg
        b: End of the leg, with <b|a> real and non-negative
        completion_basis: Vectors used to complete the frame (standard basis by default)
        removed_phase: Phase already taken off b, recorded on the leg

    Raises:
        PreconditionError: If <b|a> is not real non-negative
        DegenerateLegError: If a and b are the same ray
    """
    ov, perpendicular, norm = _split(a, b)
    if norm <= DEGENERATE_TOLERANCE:
        raise DegenerateLegError("Geodesic between coincident rays is undefined",
                                 details={'perpendicular_norm': norm})
    w = perpendicular / norm
    frame = _frame(a.amplitudes, w, completion_basis)
    return GeodesicLeg(
        start=a,
        end=b,
        s_end=math.atan2(norm, ov),
        frame=frame,
        removed_phase=removed_phase,
    )


def _identity_leg(a: StateVector, b: StateVector, removed_phase: float) -> GeodesicLeg:
    return GeodesicLeg(a, b, 0.0, np.eye(a.dim, dtype=complex), removed_phase)


def _connect(a: StateVector, b: StateVector, leg: int, allow_degenerate: bool) -> GeodesicLeg:
    """Rephase b toward a when needed and build the connecting leg."""
    if overlap(a.amplitudes, b.amplitudes) == 0:
        target, removed = b, 0.0
    else:
        target, removed = leg_rephase(a, b)
    try:
        return geodesic_evolution(a, target, removed_phase=removed)
    except DegenerateLegError:
        if not allow_degenerate:
            raise DegenerateTriangleError(
                f"Vertices {leg} and {leg % 3 + 1} coincide",
                leg=leg,
                details={'leg': leg}
            )
        logging.debug(f"Leg {leg} collapsed to a point; using the identity evolution")
        return _identity_leg(a, target, removed)


def triangle_from_vertices(v1: StateVector, v2: StateVector, v3: StateVector,
                           allow_degenerate: bool = False,
                           params: Optional[TriangleParams] = None,
                           orientation: int = 1) -> GeodesicTriangle:
    """
    Chain three geodesic legs through arbitrary unit vectors.

    Each leg targets the next vertex rephased so the overlap with the
    current (already rephased) position is real and positive.

    Raises:
        DegenerateTriangleError: If consecutive vertices coincide and
            allow_degenerate is False
    """
    validate_dimension(v1.dim, v2.dim, 'vertex 2')
    validate_dimension(v1.dim, v3.dim, 'vertex 3')
    leg1 = _connect(v1, v2, 1, allow_degenerate)
    leg2 = _connect(leg1.end, v3, 2, allow_degenerate)
    leg3 = _connect(leg2.end, v1, 3, allow_degenerate)
    return GeodesicTriangle(
        vertices=(v1, v2, v3),
        legs=(leg1, leg2, leg3),
        group_dim=v1.dim,
        params=params,
        orientation=orientation,
    )


def su3_vertices(p: TriangleParamsSU3) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The three vertices generated by (s1, s2, alpha, beta)."""
    c1, s1 = math.cos(p.s1), math.sin(p.s1)
    c2, s2 = math.cos(p.s2), math.sin(p.s2)
    phase = np.exp(1j * p.alpha)
    cb, sb = math.cos(p.beta), math.sin(p.beta)
    psi1 = np.array([1.0, 0.0, 0.0], dtype=complex)
    psi2 = np.array([c1, s1, 0.0], dtype=complex)
    psi3 = np.array([
        c1 * c2 - phase * s1 * s2 * cb,
        s1 * c2 + phase * c1 * s2 * cb,
        sb * s2,
    ], dtype=complex)
    return psi1, psi2, psi3


def su4_vertices(p: TriangleParamsSU4) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    The three vertices generated by (s1, s2, alpha, beta1, beta2, beta3).

    Both in-plane components of psi3 share the coefficient
    -cos b1 cos b2 + sin b1 sin b2 cos b3, so that with b3 = 0 the vertex
    is the SU(3) one at beta = pi - (b1 + b2).
    The second component carries +e^{i alpha} cos s1 sin s2 mix, which keeps
    psi3 the real rotation by s1 of (cos s2, e^{i alpha} sin s2 mix, ...) and
    unit-norm.
    """
    c1, s1 = math.cos(p.s1), math.sin(p.s1)
    c2, s2 = math.cos(p.s2), math.sin(p.s2)
    phase = np.exp(1j * p.alpha)
    cb1, sb1 = math.cos(p.beta1), math.sin(p.beta1)
    cb2, sb2 = math.cos(p.beta2), math.sin(p.beta2)
    cb3, sb3 = math.cos(p.beta3), math.sin(p.beta3)
    mix = -cb1 * cb2 + sb1 * sb2 * cb3
    psi1 = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
    psi2 = np.array([c1, s1, 0.0, 0.0], dtype=complex)
    psi3 = np.array([
        c1 * c2 - phase * s1 * s2 * mix,
        s1 * c2 + phase * c1 * s2 * mix,
        (cb1 * sb2 + sb1 * cb2 * cb3) * s2,
        s2 * sb1 * sb3,
    ], dtype=complex)
    return psi1, psi2, psi3


def _build(vertices: Tuple[np.ndarray, np.ndarray, np.ndarray], params: TriangleParams,
           allow_degenerate: bool) -> GeodesicTriangle:
    v1, v2, v3 = (create_state(v) for v in vertices)
    return triangle_from_vertices(v1, v2, v3, allow_degenerate=allow_degenerate, params=params)


def triangle_su3(p: TriangleParamsSU3, allow_degenerate: bool = False) -> GeodesicTriangle:
    """
    Geodesic triangle on SU(3)/U(2) from four parameters.

    Raises:
        DegenerateTriangleError: If two vertices coincide and allow_degenerate is False
    """
    return _build(su3_vertices(p), p, allow_degenerate)


def triangle_su4(p: TriangleParamsSU4, allow_degenerate: bool = False) -> GeodesicTriangle:
    """Geodesic triangle on SU(4)/U(3) from six parameters."""
    return _build(su4_vertices(p), p, allow_degenerate)


def reverse_triangle(t: GeodesicTriangle, allow_degenerate: bool = False) -> GeodesicTriangle:
    """The same rays traversed as vertex 1, vertex 3, vertex 2."""
    v1, v2, v3 = t.vertices
    return triangle_from_vertices(v1, v3, v2, allow_degenerate=allow_degenerate,
                                  params=t.params, orientation=-t.orientation)


def reparametrize_psi3(psi3: StateVector) -> ReparamPsi3:
    """
    Write a 3-component vertex with real non-negative third entry as
    (e^{i xi} cos eta, e^{i(xi + chi)} sin eta cos tau, sin eta sin tau).

    On the pole (sin eta = 0) tau and chi are 0; with a vanishing first
    entry xi is 0.

    Raises:
        PreconditionError: If the vector is not 3-dimensional or its third entry
            is not real and non-negative
    """
    validate_dimension(3, psi3.dim, 'psi3')
    z1, z2, z3 = psi3.amplitudes
    require(abs(z3.imag) <= OVERLAP_TOLERANCE and z3.real >= -OVERLAP_TOLERANCE,
            f"Third component {z3:.6g} must be real and non-negative", field='psi3')
    third = max(z3.real, 0.0)

    sin_eta = math.hypot(abs(z2), third)
    eta = math.atan2(sin_eta, abs(z1))
    xi = safe_arg(z1, NULL_TOLERANCE)
    if sin_eta <= NULL_TOLERANCE:
        return ReparamPsi3(xi=xi, eta=eta, tau=0.0, chi=0.0)

    tau = math.atan2(third, abs(z2))
    chi = wrap_angle(safe_arg(z2, NULL_TOLERANCE) - xi) if abs(z2) > NULL_TOLERANCE else 0.0
    return ReparamPsi3(xi=xi, eta=eta, tau=tau, chi=chi)


def is_geodesic(leg: GeodesicLeg, samples: int = 32,
                tolerance: float = GEODESIC_TOLERANCE) -> Tuple[bool, float]:
    """
    Compare the leg's evolution against the geodesic curve at evenly spaced
    parameters in [0, s_end].

    Returns:
        (max deviation <= tolerance, max deviation)
    """
    if leg.s_end == 0.0:
        return True, 0.0

    deviation = 0.0
    for s in np.linspace(0.0, leg.s_end, max(samples, 2)):
        evolved = leg.evolution_at(float(s)).matrix @ leg.start.amplitudes
        expected = geodesic_curve(leg.start, leg.end, float(s)).amplitudes
        deviation = max(deviation, float(np.linalg.norm(evolved - expected)))
    return deviation <= tolerance, deviation
