import math

import numpy as np
import pytest

from src.types.unitary import (
    ChannelPair, UnitaryMatrix, basis_state, create_beam_splitter_params, create_channel_pair,
    create_state, create_su2_params, create_unitary,
)
from src.services.unitary_core import (
    apply, beam_splitter, beam_splitter_params, beam_splitter_to_euler, embed, euler_device,
    euler_to_beam_splitter, haar_random_unitary, lift_su2, mach_zehnder, real_rotation,
    special_unitarize, su2_from_euler, su2_to_euler,
)
from src.services.geodesics import reference_rotation
from src.utils.error_handler import InvalidChannelError, InvalidParameterError, ValidationError
from helpers import random_su2, random_unit


def rotation(theta):
    return np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])


def phase(a):
    return np.diag([np.exp(1j * a), np.exp(-1j * a)])


def test_su2_from_euler_zero_angles_is_identity():
    np.testing.assert_allclose(su2_from_euler(create_su2_params(0, 0, 0)).matrix, np.eye(2), atol=1e-15)


def test_su2_from_euler_middle_factor_is_real_rotation():
    m = su2_from_euler(create_su2_params(0, 0.3, 0)).matrix
    np.testing.assert_allclose(m, rotation(0.3), atol=1e-15)


def test_su2_from_euler_matches_product_of_factors():
    a, b, g = math.pi / 3, math.pi / 4, math.pi / 6
    expected = phase(a) @ rotation(b) @ phase(g)
    np.testing.assert_allclose(su2_from_euler(create_su2_params(a, b, g)).matrix, expected, atol=1e-14)


def test_su2_from_euler_rejects_non_finite():
    with pytest.raises(InvalidParameterError):
        create_su2_params(float('nan'), 0, 0)


def test_beam_splitter_special_cases():
    np.testing.assert_allclose(beam_splitter(create_beam_splitter_params(0, 0, 0)).matrix, np.eye(2))
    np.testing.assert_allclose(beam_splitter(create_beam_splitter_params(0, 0.4, 0)).matrix,
                               rotation(0.4), atol=1e-15)

    phi_r = 0.9
    reflected = beam_splitter(create_beam_splitter_params(0.3, math.pi / 2, phi_r)).matrix
    expected = np.array([[0, -np.exp(-1j * phi_r)], [np.exp(1j * phi_r), 0]])
    np.testing.assert_allclose(reflected, expected, atol=1e-15)


def test_beam_splitter_is_special_unitary_with_transmission(rng):
    for _ in range(50):
        p = create_beam_splitter_params(*rng.uniform(-math.pi, math.pi, 3))
        m = beam_splitter(p).matrix
        np.testing.assert_allclose(m.conj().T @ m, np.eye(2), atol=1e-12)
        assert abs(np.linalg.det(m) - 1) <= 1e-12
        assert p.transmission == pytest.approx(abs(m[0, 0]) ** 2, abs=1e-12)


def test_euler_round_trip_reproduces_matrix(rng):
    for _ in range(100):
        m = UnitaryMatrix(random_su2(rng), True)
        np.testing.assert_allclose(su2_from_euler(su2_to_euler(m)).matrix, m.matrix, atol=1e-12)
        assert 0.0 <= su2_to_euler(m).beta <= math.pi / 2


def test_beam_splitter_params_round_trip(rng):
    for _ in range(100):
        m = UnitaryMatrix(random_su2(rng), True)
        p = beam_splitter_params(m)
        np.testing.assert_allclose(beam_splitter(p).matrix, m.matrix, atol=1e-12)
        assert 0.0 <= p.theta <= math.pi / 2


def test_euler_and_beam_splitter_parameters_describe_the_same_matrix(rng):
    for _ in range(50):
        euler = create_su2_params(*rng.uniform(-math.pi, math.pi, 3))
        bs = euler_to_beam_splitter(euler)
        np.testing.assert_allclose(beam_splitter(bs).matrix, su2_from_euler(euler).matrix, atol=1e-12)
        np.testing.assert_allclose(su2_from_euler(beam_splitter_to_euler(bs)).matrix,
                                   beam_splitter(bs).matrix, atol=1e-12)


def test_su2_to_euler_rejects_non_special_block():
    with pytest.raises(ValidationError):
        su2_to_euler(UnitaryMatrix(np.diag([1j, 1j]), False))


def test_mach_zehnder_reproduces_beam_splitter(rng):
    for _ in range(20):
        p = create_beam_splitter_params(*rng.uniform(-math.pi, math.pi, 3))
        product = np.eye(2, dtype=complex)
        for _, step in mach_zehnder(p):
            product = beam_splitter(step).matrix @ product
        np.testing.assert_allclose(product, beam_splitter(p).matrix, atol=1e-12)


def test_euler_device_settings():
    device = euler_device(create_su2_params(0.2, math.pi / 3, -0.4))
    assert device["mirror_transmission"] == pytest.approx(0.25)
    assert device["input_relative_phase"] == pytest.approx(-0.8)
    assert device["output_relative_phase"] == pytest.approx(0.4)


def test_embed_identity_block():
    pair = create_channel_pair(2, 3, 3)
    np.testing.assert_array_equal(embed(UnitaryMatrix(np.eye(2, dtype=complex), True), pair).matrix, np.eye(3))


def test_embed_rotation_matches_reference_rotation():
    embedded = embed(real_rotation(0.6), create_channel_pair(1, 2, 3))
    np.testing.assert_allclose(embedded.matrix, reference_rotation(0.6, 3).matrix, atol=1e-15)


def test_embed_places_beam_splitter_on_lower_channels():
    p = create_beam_splitter_params(0.1, 0.7, -0.3)
    full = embed(beam_splitter(p), create_channel_pair(2, 3, 3)).matrix
    assert full[0, 0] == 1
    np.testing.assert_array_equal(full[0, 1:], 0)
    np.testing.assert_allclose(full[1:, 1:], beam_splitter(p).matrix)


def test_embed_rejects_bad_pair():
    with pytest.raises(InvalidChannelError):
        embed(real_rotation(0.1), ChannelPair(2, 4, 3))
    with pytest.raises(InvalidChannelError):
        create_channel_pair(2, 2, 3)


def test_embed_on_disjoint_pairs_commutes(rng):
    a = embed(UnitaryMatrix(random_su2(rng), True), create_channel_pair(1, 2, 4)).matrix
    b = embed(UnitaryMatrix(random_su2(rng), True), create_channel_pair(3, 4, 4)).matrix
    np.testing.assert_allclose(a @ b, b @ a, atol=1e-14)


def test_special_unitarize():
    out = special_unitarize(UnitaryMatrix(np.diag([1j, 1j]), False))
    assert abs(np.linalg.det(out.matrix) - 1) <= 1e-12
    np.testing.assert_allclose(out.matrix, np.eye(2), atol=1e-12)

    tilted = special_unitarize(UnitaryMatrix(np.diag([np.exp(0.8j), 1, 1]), False))
    assert abs(np.linalg.det(tilted.matrix) - 1) <= 1e-12


def test_special_unitarize_keeps_special_input(rng):
    u = haar_random_unitary(3, rng)
    np.testing.assert_allclose(special_unitarize(u).matrix, u.matrix, atol=1e-12)


def test_special_unitarize_rejects_non_unitary():
    with pytest.raises(ValidationError):
        special_unitarize(UnitaryMatrix(np.diag([2.0, 0.5]).astype(complex), False))


def test_lift_trivial_representations(rng):
    u = UnitaryMatrix(random_su2(rng), True)
    assert lift_su2(u, 1) is u
    np.testing.assert_allclose(lift_su2(u, 0).matrix, [[1.0]])


def _two_photon_oracle(u):
    """U (x) U restricted to the symmetric subspace |2,0>, |1,1>, |0,2>."""
    e1, e2 = np.eye(2)
    basis = [np.kron(e1, e1), (np.kron(e1, e2) + np.kron(e2, e1)) / math.sqrt(2), np.kron(e2, e2)]
    big = np.kron(u, u)
    return np.array([[np.vdot(bm, big @ bn) for bn in basis] for bm in basis])


def test_lift_two_photons_matches_symmetric_tensor_power(rng):
    for block in (rotation(0.7).astype(complex), random_su2(rng)):
        lifted = lift_su2(UnitaryMatrix(block, True), 2).matrix
        np.testing.assert_allclose(lifted, _two_photon_oracle(block), atol=1e-12)


def test_lift_is_a_unitary_homomorphism(rng):
    for photons in range(1, 7):
        for _ in range(200):
            a = UnitaryMatrix(random_su2(rng), True)
            b = UnitaryMatrix(random_su2(rng), True)
            product = lift_su2(UnitaryMatrix(a.matrix @ b.matrix, True), photons).matrix
            composed = lift_su2(a, photons).matrix @ lift_su2(b, photons).matrix
            np.testing.assert_allclose(product, composed, atol=1e-10)
        lifted = lift_su2(a, photons).matrix
        np.testing.assert_allclose(lifted.conj().T @ lifted, np.eye(photons + 1), atol=1e-12)


def test_lift_rejects_bad_inputs():
    with pytest.raises(ValidationError):
        lift_su2(UnitaryMatrix(np.diag([1j, 1j]), False), 2)
    with pytest.raises(InvalidParameterError):
        lift_su2(real_rotation(0.2), -1)


def test_apply():
    v = basis_state(3, 0)
    np.testing.assert_array_equal(apply(UnitaryMatrix(np.eye(3, dtype=complex), True), v).amplitudes,
                                  v.amplitudes)
    out = apply(reference_rotation(0.5, 3), v)
    np.testing.assert_allclose(out.amplitudes, [math.cos(0.5), math.sin(0.5), 0], atol=1e-15)

    with pytest.raises(ValidationError):
        apply(reference_rotation(0.5, 3), basis_state(4, 0))


def test_apply_preserves_norm(rng):
    for n in (2, 3, 4, 5):
        u = haar_random_unitary(n, rng)
        v = create_state(random_unit(rng, n))
        assert apply(u, v).norm() == pytest.approx(1.0, abs=1e-12)


def test_haar_random_unitary_is_special(rng):
    u = haar_random_unitary(5, rng)
    np.testing.assert_allclose(u.matrix.conj().T @ u.matrix, np.eye(5), atol=1e-12)
    assert abs(u.det() - 1) <= 1e-12


def test_create_unitary_validation():
    with pytest.raises(ValidationError):
        create_unitary([[1, 0, 0], [0, 1, 0]])
    with pytest.raises(ValidationError):
        create_unitary([[1, 1], [0, 1]])
    with pytest.raises(ValidationError):
        create_unitary(np.diag([1j, 1]), special=True)
    assert create_unitary(np.diag([1j, -1j]), special=True).special
