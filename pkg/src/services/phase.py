"""
Geometric phase of a geodesic triangle by three independent methods.

Convention: phi_g = arg <psi4|psi1>, i.e. the cycle returns
psi4 = e^{-i phi_g} psi1. With the vertex family's e^{+i alpha} in psi3 this
is the convention under which the closed form
arg(cos s1 cos s2 - e^{-i alpha} sin s1 sin s2 cos beta) holds, and it makes
the Bargmann phase +arg(<psi1|psi2><psi2|psi3><psi3|psi1>).
"""
import math
import logging
from itertools import combinations
from typing import Dict, Iterable, Optional

import numpy as np

from src.types.geodesic import GeodesicTriangle, TriangleParams, TriangleParamsSU3, TriangleParamsSU4
from src.types.phase import PhaseResult, PhaseComparison, create_phase_result
from src.services.geodesics import triangle_su3, triangle_su4
from src.utils.error_handler import (
    GeoPhaseError, InconsistentCycleError, UndefinedPhaseError, ValidationError,
)
from src.utils.numerics import angle_distance, overlap, wrap_angle


# Complex numbers at or below this modulus have no meaningful argument.
PHASE_FLOOR = 1e-15
CLOSURE_TOLERANCE = 1e-8


def _check_orientation(orientation: int) -> int:
    if orientation not in (1, -1):
        raise ValidationError(f"orientation must be +1 or -1, got {orientation!r}", field='orientation')
    return orientation


def _closed_form(z: complex, orientation: int, group_dim: int) -> PhaseResult:
    if abs(z) <= PHASE_FLOOR:
        raise UndefinedPhaseError(
            "Third vertex is orthogonal to the first; the phase is undefined",
            method='closed_form',
            details={'modulus': abs(z)}
        )
    phi = wrap_angle(_check_orientation(orientation) * float(np.angle(z)))
    return create_phase_result(phi, 'closed_form', group_dim=group_dim)


def phase_closed_form_su3(p: TriangleParamsSU3, orientation: int = 1) -> PhaseResult:
    """
    phi_g = arg(cos s1 cos s2 - e^{-i alpha} sin s1 sin s2 cos beta).

    ``orientation=-1`` gives the phase of the reversed traversal.

    Raises:
        UndefinedPhaseError: If the argument of arg vanishes
    """
    z = (math.cos(p.s1) * math.cos(p.s2)
         - np.exp(-1j * p.alpha) * math.sin(p.s1) * math.sin(p.s2) * math.cos(p.beta))
    return _closed_form(complex(z), orientation, 3)


def phase_closed_form_su4(p: TriangleParamsSU4, orientation: int = 1) -> PhaseResult:
    """SU(4) analogue: the conjugated first component of the third vertex."""
    mix = (-math.cos(p.beta1) * math.cos(p.beta2)
           + math.sin(p.beta1) * math.sin(p.beta2) * math.cos(p.beta3))
    z = (math.cos(p.s1) * math.cos(p.s2)
         - np.exp(-1j * p.alpha) * math.sin(p.s1) * math.sin(p.s2) * mix)
    return _closed_form(complex(z), orientation, 4)


def phase_closed_form(p: TriangleParams, orientation: int = 1) -> PhaseResult:
    """Dispatch on the parameter type."""
    if isinstance(p, TriangleParamsSU4):
        return phase_closed_form_su4(p, orientation)
    return phase_closed_form_su3(p, orientation)


def phase_operator_cycle(t: GeodesicTriangle,
                         closure_tolerance: float = CLOSURE_TOLERANCE) -> PhaseResult:
    """
    Apply U3 . U2 . U1 to vertex 1 and read the phase from <psi4|psi1>.

    Raises:
        UndefinedPhaseError: If the last leg starts orthogonal to vertex 1
        InconsistentCycleError: If psi4 is not a multiple of psi1 within tolerance
    """
    psi1 = t.vertices[0].amplitudes
    last_overlap = overlap(t.legs[2].start.amplitudes, psi1)
    if abs(last_overlap) <= PHASE_FLOOR:
        raise UndefinedPhaseError(
            "Third vertex is orthogonal to the first; the phase is undefined",
            method='operator_cycle',
            details={'modulus': abs(last_overlap)}
        )

    psi4 = psi1
    for leg in t.legs:
        psi4 = leg.evolution.matrix @ psi4

    phi = wrap_angle(float(np.angle(overlap(psi4, psi1))))
    residual = float(np.linalg.norm(psi4 - np.exp(-1j * phi) * psi1))
    if residual > closure_tolerance:
        raise InconsistentCycleError(
            f"Cycle does not close: residual {residual:.3e} > {closure_tolerance:.1e}",
            residual=residual,
            details={'phi_g': phi}
        )
    return create_phase_result(phi, 'operator_cycle', residual, t.group_dim)


def phase_bargmann(t: GeodesicTriangle) -> PhaseResult:
    """
    phi_g = arg(<psi1|psi2><psi2|psi3><psi3|psi1>), summed as three arguments.

    Raises:
        UndefinedPhaseError: If any pairwise overlap vanishes
    """
    v1, v2, v3 = (v.amplitudes for v in t.vertices)
    phi = 0.0
    for name, (bra, ket) in (("12", (v1, v2)), ("23", (v2, v3)), ("31", (v3, v1))):
        z = overlap(bra, ket)
        if abs(z) <= PHASE_FLOOR:
            raise UndefinedPhaseError(
                f"Overlap <{name[0]}|{name[1]}> vanishes; the Bargmann invariant is zero",
                method='bargmann',
                details={'pair': name, 'modulus': abs(z)}
            )
        phi += float(np.angle(z))
    return create_phase_result(wrap_angle(phi), 'bargmann', group_dim=t.group_dim)


def compare_phases(results: Iterable[PhaseResult]) -> float:
    """Largest circular distance between any two results."""
    phases = [r.phi_g for r in results]
    return max((angle_distance(a, b) for a, b in combinations(phases, 2)), default=0.0)


def compare_methods(p: TriangleParams, allow_degenerate: bool = True,
                    closure_tolerance: float = CLOSURE_TOLERANCE,
                    triangle: Optional[GeodesicTriangle] = None) -> PhaseComparison:
    """
    Evaluate every method on one parameter set, collecting per-method errors
    instead of raising.

    Raises:
        ValidationError: If the parameters are invalid
    """
    results: Dict[str, PhaseResult] = {}
    errors: Dict[str, str] = {}
    codes: Dict[str, str] = {}

    try:
        results['closed_form'] = phase_closed_form(p)
    except UndefinedPhaseError as e:
        errors['closed_form'], codes['closed_form'] = e.message, e.error_code

    try:
        if triangle is None:
            builder = triangle_su4 if isinstance(p, TriangleParamsSU4) else triangle_su3
            triangle = builder(p, allow_degenerate=allow_degenerate)
    except GeoPhaseError as e:
        if isinstance(e, ValidationError):
            raise
        for method in ('operator_cycle', 'bargmann'):
            errors[method], codes[method] = e.message, e.error_code
        triangle = None

    if triangle is not None:
        for method, compute in (('operator_cycle', lambda: phase_operator_cycle(triangle, closure_tolerance)),
                                ('bargmann', lambda: phase_bargmann(triangle))):
            try:
                results[method] = compute()
            except (UndefinedPhaseError, InconsistentCycleError) as e:
                errors[method], codes[method] = e.message, e.error_code

    if errors:
        logging.debug(f"Phase methods failed for {p.to_dict()}: {errors}")
    return PhaseComparison(results=results, errors=errors,
                           max_disagreement=compare_phases(results.values()),
                           error_codes=codes)
