import math

import numpy as np
import pytest

from src.types.circuit import create_circuit, create_optical_element
from src.types.geodesic import create_triangle_params_su4
from src.types.unitary import basis_state, create_state
from src.services.circuit import (
    build_su3_circuit, build_su4_circuit, circuit_report, extract_phase, inverse_params,
    propagate, simulate_single_photon, simulate_two_channel_multiphoton, solve_frame_pattern,
    solve_leg2_pattern, transfer_matrix,
)
from src.services.geodesics import geodesic_curve, su3_vertices, su4_vertices, triangle_su3, triangle_su4
from src.services.phase import phase_closed_form_su3, phase_operator_cycle
from src.services.unitary_core import beam_splitter
from src.utils.error_handler import (
    DecompositionError, InvalidChainError, InvalidParameterError, UndefinedPhaseError, ValidationError,
)
from src.utils.serialization import circuit_from_json, circuit_to_json
from helpers import assert_angle_close, draw_su3, draw_su4, random_unit


SU3_LABELS = [
    "U1.R(s1)",
    "U2.R(-s1_0)",
    "U2.Omega1^-1",
    "U2.R(s2)",
    "U2.Omega1",
    "U2.R(s1_0)",
    "U3.Omega2^-1",
    "U3.R(-s3)",
    "U3.Omega2",
]


def output_of(circuit):
    return simulate_single_photon(circuit).amplitudes


def test_su3_circuit_labels(su3_params):
    assert build_su3_circuit(su3_params).labels == SU3_LABELS


def test_su3_zero_path_is_identity(su3_params):
    c = build_su3_circuit(su3_params, 0.0, 0.0, 0.0)
    np.testing.assert_allclose(transfer_matrix(c).matrix, np.eye(3), atol=1e-12)


def test_su3_first_leg_reaches_second_vertex(su3_params):
    c = build_su3_circuit(su3_params, s1=su3_params.s1, s2=0.0, s3=0.0)
    np.testing.assert_allclose(output_of(c), su3_vertices(su3_params)[1], atol=1e-12)


def test_su3_second_leg_reaches_third_vertex(rng):
    for _ in range(50):
        p = draw_su3(rng)
        c = build_su3_circuit(p, s3=0.0)
        np.testing.assert_allclose(output_of(c), su3_vertices(p)[2], atol=1e-10)


def test_su3_second_leg_follows_the_geodesic(su3_params):
    _, psi2, psi3 = (create_state(v) for v in su3_vertices(su3_params))
    for s in np.linspace(0.0, su3_params.s2, 7):
        c = build_su3_circuit(su3_params, s2=float(s), s3=0.0)
        np.testing.assert_allclose(output_of(c), geodesic_curve(psi2, psi3, float(s)).amplitudes, atol=1e-10)


def test_su3_end_values_reproduce_the_phase(rng):
    for _ in range(200):
        p = draw_su3(rng)
        report = circuit_report(build_su3_circuit(p))
        assert_angle_close(report["phi_g"], phase_closed_form_su3(p).phi_g, 1e-9)
        assert report["closure_residual"] <= 1e-9


def test_su3_transfer_matches_leg_evolutions(rng):
    for _ in range(20):
        p = draw_su3(rng)
        t = triangle_su3(p)
        product = t.legs[2].evolution.matrix @ t.legs[1].evolution.matrix @ t.legs[0].evolution.matrix
        np.testing.assert_allclose(transfer_matrix(build_su3_circuit(p)).matrix, product, atol=1e-10)


def test_su3_wrong_frame_sign_breaks_closure(su3_params):
    report = circuit_report(build_su3_circuit(su3_params, omega2_sign=1))
    assert report["closure_residual"] > 1e-6


def test_su3_circuit_input_checks(su3_params):
    with pytest.raises(InvalidParameterError):
        build_su3_circuit(su3_params, s1=su3_params.s1 + 0.1)
    with pytest.raises(InvalidParameterError):
        build_su3_circuit(su3_params, s2=-0.2)
    with pytest.raises(ValidationError):
        build_su3_circuit(su3_params, omega2_sign=0)


def test_su3_circuit_notes(su3_params):
    notes = build_su3_circuit(su3_params).notes
    assert notes["s_end"][:2] == [su3_params.s1, su3_params.s2]
    assert notes["omega1"] == [su3_params.alpha, su3_params.beta, 0.0]
    assert notes["omega2_sign"] == -1


def test_su4_planar_frames_keep_the_last_channel_dark():
    p = create_triangle_params_su4(0.7, 0.9, 1.2, 0.0, 0.8, 0.0)
    c = build_su4_circuit(p)
    for element in c.elements:
        if (element.pair.i, element.pair.j) == (3, 4):
            assert element.params.theta == 0.0
    for state in propagate(c):
        assert abs(state.amplitudes[3]) <= 1e-12


def test_su4_end_values_reproduce_the_phase(rng):
    for _ in range(100):
        p = draw_su4(rng)
        report = circuit_report(build_su4_circuit(p))
        assert_angle_close(report["phi_g"], phase_operator_cycle(triangle_su4(p)).phi_g, 1e-8)
        assert report["closure_residual"] <= 1e-8


def test_su4_second_leg_reaches_third_vertex(su4_params):
    c = build_su4_circuit(su4_params, s3=0.0)
    np.testing.assert_allclose(output_of(c), su4_vertices(su4_params)[2], atol=1e-10)


def test_su4_zero_path_is_identity(su4_params):
    c = build_su4_circuit(su4_params, 0.0, 0.0, 0.0)
    np.testing.assert_allclose(transfer_matrix(c).matrix, np.eye(4), atol=1e-12)


def test_su4_notes_record_pattern(su4_params):
    notes = build_su4_circuit(su4_params).notes
    assert len(notes["v2_pattern"]) == 3
    assert len(notes["v3_pattern"]) == 3
    assert notes["pattern_residual"] <= 1e-10
    a1, a1_prime = notes["v2_phases"]
    assert notes["v2_phases_coincide"]
    assert_angle_close(a1, a1_prime, 1e-9)
    assert_angle_close(2 * a1, 2 * su4_params.alpha, 1e-9)
    assert notes["v2_pattern"][2] == [0.0, su4_params.beta1, 0.0]


def test_su4_leading_phases_coincide_for_random_triangles(rng):
    for _ in range(200):
        p = draw_su4(rng)
        notes = build_su4_circuit(p).notes
        a1, a1_prime = notes["v2_phases"]
        assert notes["v2_phases_coincide"]
        assert_angle_close(a1, a1_prime, 1e-9)
        assert_angle_close(2 * a1, 2 * p.alpha, 1e-7)
        assert notes["pattern_residual"] <= 1e-10


def test_solve_frame_pattern(rng):
    for _ in range(200):
        params, residual = solve_frame_pattern(random_unit(rng, 3))
        assert len(params) == 3
        assert residual <= 1e-10
        assert params[0].theta == 0.0 and params[0].phi_r == 0.0


def test_solve_leg2_pattern_reports_distinct_phases_for_a_complex_target():
    w = np.array([0.6, 0.48j, 0.64])
    params, residual = solve_leg2_pattern(w, 1.2)
    assert residual <= 1e-10
    assert params[0].phi_r == 0.0 and params[1].phi_r == 0.0
    assert params[2].to_list() == [0.0, 1.2, 0.0]
    gap = abs(math.remainder(params[0].phi_t - params[1].phi_t, 2 * math.pi))
    assert gap > 0.5


def test_solve_leg2_pattern_needs_a_real_last_component():
    with pytest.raises(DecompositionError):
        solve_leg2_pattern(np.array([0.6, 0.48, 0.64j]), 1.2)


def test_inverse_params_undo_the_element(rng):
    for _ in range(20):
        p = create_optical_element((1, 2), rng.uniform(-math.pi, math.pi, 3), 2).params
        product = beam_splitter(inverse_params(p)).matrix @ beam_splitter(p).matrix
        np.testing.assert_allclose(product, np.eye(2), atol=1e-12)


def test_propagate_conserves_norm(rng):
    c = build_su3_circuit(draw_su3(rng))
    states = propagate(c, create_state(random_unit(rng, 3)))
    assert len(states) == len(c)
    for state in states:
        assert state.norm() == pytest.approx(1.0, abs=1e-12)


def test_empty_circuit_passes_input_through(rng):
    c = create_circuit(3, [])
    v = create_state(random_unit(rng, 3))
    np.testing.assert_array_equal(simulate_single_photon(c, v).amplitudes, v.amplitudes)


def test_simulation_checks_dimension():
    with pytest.raises(ValidationError):
        simulate_single_photon(create_circuit(3, []), basis_state(4, 0))


def test_multiphoton_zero_and_one_photon(rng):
    element = create_optical_element((1, 2), rng.uniform(-math.pi, math.pi, 3), 2)
    vacuum = simulate_two_channel_multiphoton(element, 0, create_state([1.0]))
    assert vacuum.amplitudes[0] == pytest.approx(1.0)

    v = create_state(random_unit(rng, 2))
    single = simulate_two_channel_multiphoton(element, 1, v)
    np.testing.assert_allclose(single.amplitudes, beam_splitter(element.params).matrix @ v.amplitudes,
                               atol=1e-12)


def test_multiphoton_balanced_splitter():
    element = create_optical_element((1, 2), (0.0, math.pi / 4, 0.0), 2)
    both_in_one = simulate_two_channel_multiphoton(element, 2, create_state([1, 0, 0]))
    np.testing.assert_allclose(np.abs(both_in_one.amplitudes) ** 2, [0.25, 0.5, 0.25], atol=1e-12)

    one_each = simulate_two_channel_multiphoton(element, 2, create_state([0, 1, 0]))
    np.testing.assert_allclose(np.abs(one_each.amplitudes) ** 2, [0.5, 0.0, 0.5], atol=1e-12)


def test_multiphoton_rejects_wrong_state_size():
    element = create_optical_element((1, 2), (0.0, 0.3, 0.0), 2)
    with pytest.raises(ValidationError):
        simulate_two_channel_multiphoton(element, 2, create_state([1, 0]))
    with pytest.raises(InvalidParameterError):
        simulate_two_channel_multiphoton(element, -1, create_state([1.0]))


def test_extract_phase():
    v = basis_state(3, 0)
    phi, residual = extract_phase(v, v.rephased(-0.7))
    assert phi == pytest.approx(0.7)
    assert residual <= 1e-15
    with pytest.raises(UndefinedPhaseError):
        extract_phase(v, basis_state(3, 1))


def test_report_for_orthogonal_output():
    swap = create_optical_element((1, 2), (0.0, math.pi / 2, 0.0), 3)
    report = circuit_report(create_circuit(3, [swap]))
    assert report["phi_g"] is None
    assert "error" in report


def test_netlist_round_trip(su4_params):
    c = build_su4_circuit(su4_params)
    restored = circuit_from_json(circuit_to_json(c))
    assert restored == c
    np.testing.assert_array_equal(transfer_matrix(restored).matrix, transfer_matrix(c).matrix)


def test_circuit_validation():
    with pytest.raises(InvalidChainError):
        create_optical_element((3, 4), (0, 0, 0), 3)
    with pytest.raises(InvalidChainError):
        create_circuit(1, [])
    element = create_optical_element((3, 4), (0, 0, 0), 4)
    with pytest.raises(InvalidChainError):
        create_circuit(3, [element])
