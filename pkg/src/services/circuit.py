"""
Interferometer circuits built from geodesic triangles, and field-amplitude
simulation through them.

Each leg evolution is a frame conjugating a real rotation on channels
(1, 2): U(s) = V . R_s . V^-1. The frames are products of beam splitters on
channels (2, 3) (and (3, 4) for four channels), so a triangle becomes an
ordered list of two-channel elements.

At the end values the circuit maps e_1 to e^{-i phi_g} e_1, the same
convention as the phase service.
"""
import math
import logging
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.types.circuit import Circuit, OpticalElement, create_circuit
from src.types.geodesic import TriangleParamsSU3, TriangleParamsSU4
from src.types.unitary import (
    BeamSplitterParams, ChannelPair, PhotonNumber, StateVector, UnitaryMatrix,
    basis_state, create_beam_splitter_params, create_photon_number, create_state, _frozen_array,
)
from src.services.geodesics import reparametrize_psi3, su3_vertices, su4_vertices
from src.services.unitary_core import beam_splitter, embed, lift_su2
from src.utils.error_handler import (
    DecompositionError, UndefinedPhaseError, ValidationError, validate_dimension, validate_range,
)
from src.utils.numerics import NULL_TOLERANCE, overlap, safe_arg, wrap_angle


CIRCUIT_TOLERANCE = 1e-9
PATTERN_TOLERANCE = 1e-10
PHASE_FLOOR = 1e-15


def _element(pair: Tuple[int, int], n: int, params: BeamSplitterParams, label: str) -> OpticalElement:
    return OpticalElement(ChannelPair(pair[0], pair[1], n), params, label)


def _rotation(s: float, n: int, label: str) -> OpticalElement:
    return _element((1, 2), n, create_beam_splitter_params(0.0, s, 0.0), label)


def inverse_params(p: BeamSplitterParams) -> BeamSplitterParams:
    """Parameters of the inverse beam splitter: (-phi_t, -theta, phi_r)."""
    return create_beam_splitter_params(-p.phi_t, -p.theta, p.phi_r)


def _conjugated(frame: List[OpticalElement], core: OpticalElement) -> List[OpticalElement]:
    """Application-order elements of V . core . V^-1, with V given in application order."""
    undo = [_element((e.pair.i, e.pair.j), e.pair.n, inverse_params(e.params), e.label + "^-1")
            for e in reversed(frame)]
    return undo + [core] + list(frame)


def _path_value(value: Optional[float], end: float, field: str) -> float:
    if value is None:
        return end
    return validate_range(value, field, 0.0, end)


# --------------------------------------------------------------------------
# Builders
# --------------------------------------------------------------------------

def build_su3_circuit(p: TriangleParamsSU3, s1: Optional[float] = None,
                      s2: Optional[float] = None, s3: Optional[float] = None,
                      omega2_sign: int = -1) -> Circuit:
    """
    Nine-element SU(3) interferometer for the triangle p.

    Path parameters default to the leg end values s1_0 = p.s1, s2_0 = p.s2
    and s3_0 = eta of the third vertex. The third-leg frame is
    Omega2 = (chi, tau, omega2_sign * xi); the sign -1 closes the cycle.

    Raises:
        InvalidParameterError: If a path parameter is outside [0, s_k0]
        ValidationError: If omega2_sign is not +1 or -1
    """
    if omega2_sign not in (1, -1):
        raise ValidationError(f"omega2_sign must be +1 or -1, got {omega2_sign!r}", field='omega2_sign')

    psi3 = create_state(su3_vertices(p)[2], tolerance=1e-9)
    reparam = reparametrize_psi3(psi3)
    s1_end, s2_end, s3_end = p.s1, p.s2, reparam.eta
    s1 = _path_value(s1, s1_end, 's1')
    s2 = _path_value(s2, s2_end, 's2')
    s3 = _path_value(s3, s3_end, 's3')

    omega1 = create_beam_splitter_params(p.alpha, p.beta, 0.0)
    omega2 = create_beam_splitter_params(reparam.chi, reparam.tau, omega2_sign * reparam.xi)

    elements = [_rotation(s1, 3, "U1.R(s1)")]
    elements += [_rotation(-s1_end, 3, "U2.R(-s1_0)")]
    elements += _conjugated([_element((2, 3), 3, omega1, "U2.Omega1")],
                            _rotation(s2, 3, "U2.R(s2)"))
    elements += [_rotation(s1_end, 3, "U2.R(s1_0)")]
    elements += _conjugated([_element((2, 3), 3, omega2, "U3.Omega2")],
                            _rotation(-s3, 3, "U3.R(-s3)"))

    notes = {
        "s_end": [s1_end, s2_end, s3_end],
        "path": [s1, s2, s3],
        "omega1": omega1.to_list(),
        "omega2": omega2.to_list(),
        "omega2_sign": omega2_sign,
        "psi3": reparam.to_dict(),
    }
    logging.debug(f"SU(3) circuit: s_end={notes['s_end']}, omega2={notes['omega2']}")
    return create_circuit(3, elements, notes)


def _pattern_residual(params: List[BeamSplitterParams], w: np.ndarray) -> float:
    frame = np.eye(4, dtype=complex)
    for pair, q in zip(((2, 3), (3, 4), (2, 3)), params):
        frame = frame @ embed(beam_splitter(q), ChannelPair(pair[0], pair[1], 4)).matrix
    return float(np.linalg.norm(frame[1:, 1] - w))


def solve_frame_pattern(w: np.ndarray,
                        tolerance: float = PATTERN_TOLERANCE) -> Tuple[List[BeamSplitterParams], float]:
    """
    Angles of V = R23(a1, 0, 0) . R34(0, b3, r3) . R23(0, b1, d) with
    V e_2 = (0, w) on four channels.

    Returns:
        The three parameter sets in product order (leftmost first) and the
        residual ||V e_2 - (0, w)||

    Raises:
        DecompositionError: If the residual exceeds tolerance
    """
    w = np.asarray(w, dtype=complex)
    a1 = safe_arg(w[0], NULL_TOLERANCE)
    b1 = math.atan2(math.hypot(abs(w[1]), abs(w[2])), abs(w[0]))
    d = wrap_angle(a1 + safe_arg(w[1], NULL_TOLERANCE))
    b3 = math.atan2(abs(w[2]), abs(w[1]))
    r3 = wrap_angle(safe_arg(w[2]) - d) if abs(w[2]) > NULL_TOLERANCE else 0.0

    params = [
        create_beam_splitter_params(a1, 0.0, 0.0),
        create_beam_splitter_params(0.0, b3, r3),
        create_beam_splitter_params(0.0, b1, d),
    ]
    residual = _pattern_residual(params, w)
    if residual > tolerance:
        raise DecompositionError(
            f"Frame pattern solve missed its target: residual {residual:.3e}",
            residual=residual,
            details={'target': [[z.real, z.imag] for z in w]}
        )
    return params, residual


def solve_leg2_pattern(w: np.ndarray, beta1: float,
                       tolerance: float = PATTERN_TOLERANCE) -> Tuple[List[BeamSplitterParams], float]:
    """
    Angles of V = R23(a1, b2, 0) . R34(a1', b3, 0) . R23(0, beta1, 0) with
    V e_2 = (0, w) on four channels.

    The two leading phases a1 and a1' are solved independently. The pattern
    keeps a one-parameter family of solutions, fixed here by the mixing
    angle beta1 of the last factor. The remaining sign branches (b3 against
    pi - b3, and the sign of cos b2) shift a1' - a1 by pi; the branch with
    the smallest |a1 - a1'| is returned.

    Returns:
        The three parameter sets in product order (leftmost first) and the
        residual ||V e_2 - (0, w)||

    Raises:
        DecompositionError: If no branch meets tolerance, e.g. when the last
            component of w is not real
    """
    w = np.asarray(w, dtype=complex)
    x, sb1 = math.cos(beta1), math.sin(beta1)
    if abs(sb1) <= NULL_TOLERANCE:
        b3_branches = [0.0]
    else:
        b3 = math.asin(min(1.0, max(-1.0, w[2].real / sb1)))
        b3_branches = [b3, wrap_angle(math.pi - b3)]

    candidates = []
    for b3 in b3_branches:
        y = math.cos(b3) * sb1
        plane = x * x + y * y
        if plane <= NULL_TOLERANCE:
            solutions = [(0.0, 0.0, 0.0)]
        else:
            root = math.sqrt(max(0.0, (x * w[1].real) ** 2 - plane * (abs(w[1]) ** 2 - y * y)))
            solutions = []
            for sin_b2 in sorted({(x * w[1].real + root) / plane, (x * w[1].real - root) / plane}):
                sin_b2 = min(1.0, max(-1.0, sin_b2))
                for cos_b2 in (math.sqrt(1.0 - sin_b2 * sin_b2), -math.sqrt(1.0 - sin_b2 * sin_b2)):
                    # channel 3: sin b2 x + e^{i(a1' - a1)} cos b2 y = w_2
                    delta = safe_arg((w[1] - sin_b2 * x) / (cos_b2 * y), NULL_TOLERANCE) \
                        if abs(cos_b2 * y) > NULL_TOLERANCE else 0.0
                    # channel 2: e^{i a1} (cos b2 x - e^{i(a1' - a1)} sin b2 y) = w_1
                    core = cos_b2 * x - np.exp(1j * delta) * sin_b2 * y
                    a1 = safe_arg(w[0] / core, NULL_TOLERANCE) if abs(core) > NULL_TOLERANCE else 0.0
                    solutions.append((a1, math.atan2(sin_b2, cos_b2), wrap_angle(a1 + delta)))

        for a1, b2, a1_prime in solutions:
            params = [
                create_beam_splitter_params(a1, b2, 0.0),
                create_beam_splitter_params(a1_prime, b3, 0.0),
                create_beam_splitter_params(0.0, beta1, 0.0),
            ]
            candidates.append((_pattern_residual(params, w), abs(wrap_angle(a1 - a1_prime)), params))

    feasible = [c for c in candidates if c[0] <= tolerance]
    if not feasible:
        residual = min(c[0] for c in candidates)
        raise DecompositionError(
            f"Second-leg pattern solve missed its target: residual {residual:.3e}",
            residual=residual,
            details={'target': [[z.real, z.imag] for z in w], 'beta1': beta1}
        )
    residual, _, params = min(feasible, key=lambda c: (c[1], c[0]))
    return params, residual


def _frame_elements(params: List[BeamSplitterParams], label: str) -> List[OpticalElement]:
    """Application-order elements of the product R23 . R34 . R23'."""
    pairs = ((2, 3), (3, 4), (2, 3))
    names = ("R23", "R34", "R23'")
    return [_element(pair, 4, q, f"{label}.{name}")
            for pair, q, name in reversed(list(zip(pairs, params, names)))]


def build_su4_circuit(p: TriangleParamsSU4, s1: Optional[float] = None,
                      s2: Optional[float] = None, s3: Optional[float] = None) -> Circuit:
    """
    SU(4) interferometer for the triangle p.

    The second-leg frame is solved as R23(a1, b2, 0) . R34(a1', b3, 0) .
    R23(0, beta1, 0) with a1 and a1' free, and the third-leg frame in the
    general R23 . R34 . R23' pattern. The notes record the solved angles,
    whether a1 and a1' coincide, and the solve residual.

    Raises:
        InvalidParameterError: If a path parameter is outside [0, s_k0]
        DecompositionError: If a frame solve misses tolerance
    """
    _, _, psi3 = su4_vertices(p)
    w2 = _leg2_direction(p)

    xi = safe_arg(psi3[0], NULL_TOLERANCE)
    tail = float(np.linalg.norm(psi3[1:]))
    eta = math.atan2(tail, abs(psi3[0]))

    s1_end, s2_end, s3_end = p.s1, p.s2, eta
    s1 = _path_value(s1, s1_end, 's1')
    s2 = _path_value(s2, s2_end, 's2')
    s3 = _path_value(s3, s3_end, 's3')

    v2, residual2 = solve_leg2_pattern(w2, p.beta1)
    if tail <= NULL_TOLERANCE:
        v3, residual3 = [create_beam_splitter_params(0.0, 0.0, 0.0)] * 3, 0.0
    else:
        v3, residual3 = solve_frame_pattern(np.exp(-1j * xi) * psi3[1:] / tail)

    elements = [_rotation(s1, 4, "U1.R(s1)")]
    elements += [_rotation(-s1_end, 4, "U2.R(-s1_0)")]
    elements += _conjugated(_frame_elements(v2, "U2.V2"), _rotation(s2, 4, "U2.R(s2)"))
    elements += [_rotation(s1_end, 4, "U2.R(s1_0)")]
    elements += _conjugated(_frame_elements(v3, "U3.V3"), _rotation(-s3, 4, "U3.R(-s3)"))

    notes = {
        "s_end": [s1_end, s2_end, s3_end],
        "path": [s1, s2, s3],
        "v2_pattern": [q.to_list() for q in v2],
        "v3_pattern": [q.to_list() for q in v3],
        "v2_phases": [v2[0].phi_t, v2[1].phi_t],
        "v2_phases_coincide": math.isclose(wrap_angle(v2[0].phi_t - v2[1].phi_t), 0.0,
                                           abs_tol=CIRCUIT_TOLERANCE),
        "pattern_residual": max(residual2, residual3),
    }
    logging.debug(f"SU(4) circuit: s_end={notes['s_end']}, residual={notes['pattern_residual']:.2e}")
    return create_circuit(4, elements, notes)


def _leg2_direction(p: TriangleParamsSU4) -> np.ndarray:
    """Unit vector w on channels 2-4 with R_{-s1} psi3 = cos s2 e_1 + sin s2 (0, w)."""
    mix = (-math.cos(p.beta1) * math.cos(p.beta2)
           + math.sin(p.beta1) * math.sin(p.beta2) * math.cos(p.beta3))
    return np.array([
        np.exp(1j * p.alpha) * mix,
        math.cos(p.beta1) * math.sin(p.beta2) + math.sin(p.beta1) * math.cos(p.beta2) * math.cos(p.beta3),
        math.sin(p.beta1) * math.sin(p.beta3),
    ], dtype=complex)


# --------------------------------------------------------------------------
# Simulation
# --------------------------------------------------------------------------

def transfer_matrix(c: Circuit) -> UnitaryMatrix:
    """Ordered product E_K ... E_2 . E_1 of the materialized elements."""
    result = np.eye(c.n, dtype=complex)
    for e in c.elements:
        rows = list(e.pair.indices)
        result[rows, :] = beam_splitter(e.params).matrix @ result[rows, :]
    return UnitaryMatrix(_frozen_array(result), True)


def _input_state(c: Circuit, state: Optional[StateVector]) -> StateVector:
    if state is None:
        return basis_state(c.n, 0)
    validate_dimension(c.n, state.dim, 'input state')
    return state


def propagate(c: Circuit, state: Optional[StateVector] = None) -> List[StateVector]:
    """States after each element; the last one is the circuit output."""
    amplitudes = np.array(_input_state(c, state).amplitudes, dtype=complex)
    states = []
    for e in c.elements:
        rows = list(e.pair.indices)
        amplitudes[rows] = beam_splitter(e.params).matrix @ amplitudes[rows]
        states.append(StateVector(_frozen_array(amplitudes)))
    return states


def simulate_single_photon(c: Circuit, state: Optional[StateVector] = None) -> StateVector:
    """
    Output amplitudes for one photon; the default input enters port 1.

    Raises:
        ValidationError: On a dimension mismatch
    """
    state = _input_state(c, state)
    return transfer_matrix(c) @ state


def simulate_two_channel_multiphoton(e: OpticalElement, photons, state: StateVector) -> StateVector:
    """
    Apply one element to lambda photons shared by its two channels.

    ``state`` is given in the occupation basis |lambda - k, k>, k = 0..lambda.

    Raises:
        ValidationError: If the state does not have dimension lambda + 1
    """
    n = photons if isinstance(photons, PhotonNumber) else create_photon_number(photons)
    validate_dimension(n.dimension, state.dim, 'occupation state')
    return lift_su2(beam_splitter(e.params), n) @ state


def extract_phase(state_in: StateVector, state_out: StateVector) -> Tuple[float, float]:
    """
    Phase phi with state_out = e^{-i phi} state_in, and the closure residual
    ||state_out - e^{-i phi} state_in||.

    Raises:
        UndefinedPhaseError: If the output is orthogonal to the input
    """
    validate_dimension(state_in.dim, state_out.dim, 'output state')
    z = overlap(state_out.amplitudes, state_in.amplitudes)
    if abs(z) <= PHASE_FLOOR:
        raise UndefinedPhaseError("Output is orthogonal to the input; no phase to extract",
                                  method='circuit')
    phi = wrap_angle(float(np.angle(z)))
    residual = float(np.linalg.norm(state_out.amplitudes - np.exp(-1j * phi) * state_in.amplitudes))
    return phi, residual


def circuit_report(c: Circuit, state: Optional[StateVector] = None) -> Dict:
    """Output amplitudes for an input (port 1 by default) with the extracted phase."""
    state = _input_state(c, state)
    output = simulate_single_photon(c, state)
    report = {"n": c.n, "elements": len(c), "output": output.to_list()}
    try:
        phi, residual = extract_phase(state, output)
        report.update({"phi_g": phi, "closure_residual": residual})
    except UndefinedPhaseError as e:
        report.update({"phi_g": None, "closure_residual": None, "error": e.message})
    return report
