import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from photonbell.amplitude import covariant_from_event, process1_geometry
from photonbell.errors import DegenerateKinematicsError, InputValidationError
from photonbell.kinematics import (
    Z_HAT,
    FourVector,
    ThreeVector,
    build_cm_event,
    completeness_rhs,
    completeness_tensor,
    gauge_projected_polarization,
    photon_direction,
    polarization_basis,
    polarization_p1,
    polarization_p2,
    polarization_projector,
    rotation_matrix,
    spatial_four,
)

angles = st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False)


def test_metric_signature_hand_values():
    a = FourVector(2.0, ThreeVector(1.0, 0.0, 3.0))
    b = FourVector(5.0, ThreeVector(-1.0, 4.0, 0.5))
    assert a.dot(b) == -1.0 + 1.5 - 10.0


def test_rotation_identity_at_zero():
    np.testing.assert_array_equal(rotation_matrix(0.0, Z_HAT), np.eye(3))


def test_rotation_quarter_turn_matches_photon_direction():
    # theta = pi/2: k = (1, 0, 0) before and (cos phi, sin phi, 0) after.
    r = rotation_matrix(math.pi / 2, Z_HAT)
    np.testing.assert_allclose(r @ [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], atol=1e-15)


def test_rotation_orthogonal():
    r = rotation_matrix(0.7, Z_HAT)
    np.testing.assert_allclose(r @ r.T, np.eye(3), atol=1e-15)
    assert np.linalg.det(r) == pytest.approx(1.0, abs=1e-14)


def test_rotation_rejects_non_unit_axis():
    with pytest.raises(InputValidationError):
        rotation_matrix(0.3, ThreeVector(0.0, 0.0, 2.0))


@pytest.mark.parametrize("theta", np.linspace(0.0, math.pi, 7))
@pytest.mark.parametrize("phi", np.linspace(0.0, 2 * math.pi, 5))
@pytest.mark.parametrize("chi", [0.0, 0.4, 1.9])
def test_rotation_reproduces_general_orientation(theta, phi, chi):
    r = rotation_matrix(phi, Z_HAT)
    k0 = np.array([math.sin(theta), 0.0, math.cos(theta)])
    e0 = np.array([-math.cos(theta) * math.cos(chi), math.sin(chi), math.sin(theta) * math.cos(chi)])
    np.testing.assert_allclose(r @ k0, photon_direction(theta, phi).to_array(), atol=1e-14)
    np.testing.assert_allclose(r @ e0, polarization_p1(theta, phi, chi).to_array(), atol=1e-14)


def test_photon_direction_examples():
    np.testing.assert_allclose(photon_direction(math.pi / 2, 0.0).to_array(), [1, 0, 0], atol=1e-16)
    np.testing.assert_allclose(photon_direction(0.0, 1.234).to_array(), [0, 0, 1], atol=1e-16)
    h = math.sqrt(3) / 2 * math.sqrt(2) / 2
    np.testing.assert_allclose(photon_direction(math.pi / 3, math.pi / 4).to_array(), [h, h, 0.5], atol=1e-15)


def test_polarization_p1_examples():
    np.testing.assert_allclose(polarization_p1(math.pi / 2, 0.0, 0.0).to_array(), [0, 0, 1], atol=1e-16)
    for theta, chi in [(0.3, 0.2), (1.2, 2.5), (2.9, -0.7)]:
        expected = [-math.cos(theta) * math.cos(chi), math.sin(chi), math.sin(theta) * math.cos(chi)]
        np.testing.assert_allclose(polarization_p1(theta, 0.0, chi).to_array(), expected, atol=1e-16)
    assert polarization_p1(1.1, 2.2, 0.6).dot(photon_direction(1.1, 2.2)) == pytest.approx(0.0, abs=1e-15)


def test_polarization_p2_examples():
    np.testing.assert_allclose(polarization_p2(0.0).to_array(), [-1, 0, 0])
    np.testing.assert_allclose(polarization_p2(math.pi / 2).to_array(), [0, 1, 0], atol=1e-16)
    assert polarization_p2(0.3).norm() == pytest.approx(1.0, abs=1e-15)


@settings(max_examples=100)
@given(theta=angles, phi=angles, chi=angles)
def test_polarization_basis_orthonormal(theta, phi, chi):
    k = photon_direction(theta, phi)
    basis = polarization_basis(k, chi)
    assert basis.e1.dot(basis.e2) == pytest.approx(0.0, abs=1e-12)
    assert basis.e1.dot(k) == pytest.approx(0.0, abs=1e-12)
    assert basis.e2.dot(k) == pytest.approx(0.0, abs=1e-12)
    assert basis.e1.norm() == pytest.approx(1.0, abs=1e-12)
    assert basis.e2.norm() == pytest.approx(1.0, abs=1e-12)


def test_completeness_relation_random_directions():
    rng = np.random.default_rng(4)
    for _ in range(150):
        v = rng.normal(size=3)
        k_dir = ThreeVector.from_array(v / np.linalg.norm(v))
        basis = polarization_basis(k_dir, rng.uniform(0, math.pi))
        k = FourVector(1.0, k_dir)
        np.testing.assert_allclose(completeness_tensor(basis), completeness_rhs(k), atol=1e-12)


def test_build_cm_event_rest_frame():
    ev = build_cm_event(0.0, Z_HAT, ThreeVector(1.0, 0.0, 0.0))
    assert ev.p1.to_array().tolist() == [1.0, 0.0, 0.0, 0.0]
    assert ev.mass == 1.0


def test_build_cm_event_beta_06():
    ev = build_cm_event(0.6, Z_HAT, photon_direction(0.4, 1.0))
    np.testing.assert_allclose(ev.p1.to_array(), [1.0, 0.0, 0.0, 0.6])
    assert ev.mass == pytest.approx(0.8, abs=1e-15)
    assert ev.k1.dot(ev.k1) == pytest.approx(0.0, abs=1e-12)
    assert ev.k2.dot(ev.k2) == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(ev.p2.spatial.to_array(), -ev.p1.spatial.to_array())
    np.testing.assert_allclose(ev.k2.spatial.to_array(), -ev.k1.spatial.to_array())
    assert ev.p1.t == ev.p2.t == ev.k1.t == ev.k2.t


def test_build_cm_event_flags_massless_and_rejects_bad_beta():
    assert build_cm_event(1.0, Z_HAT, Z_HAT).massless
    with pytest.raises(InputValidationError):
        build_cm_event(1.2, Z_HAT, Z_HAT)
    with pytest.raises(InputValidationError):
        build_cm_event(-0.1, Z_HAT, Z_HAT)


def test_gauge_projection_kernel_leaves_e_unchanged():
    # e orthogonal to p1 (fermion along z, e in the x-y plane).
    ev = build_cm_event(0.5, Z_HAT, photon_direction(math.pi / 2, 0.0))
    e = spatial_four(ThreeVector(0.0, 1.0, 0.0))
    eps = gauge_projected_polarization(e, ev.p1, ev.k1)
    np.testing.assert_array_equal(eps.to_array(), e.to_array())


def test_gauge_projection_two_routes_agree():
    ev = build_cm_event(0.5, Z_HAT, photon_direction(math.pi / 2, 0.8))
    e = spatial_four(polarization_p1(math.pi / 2, 0.8, 0.3))
    eps = gauge_projected_polarization(e, ev.p1, ev.k1)
    via_matrix = polarization_projector(ev.p1, ev.k1) @ e.to_array()
    np.testing.assert_allclose(eps.to_array(), via_matrix, atol=1e-12)
    assert ev.k1.dot(eps) == pytest.approx(0.0, abs=1e-14)


def test_gauge_shift_invariance_of_projection():
    rng = np.random.default_rng(11)
    for _ in range(50):
        theta, phi, chi = rng.uniform(0.1, 3.0), rng.uniform(0, 6.28), rng.uniform(0, 3.14)
        ev = build_cm_event(rng.uniform(0, 0.99), Z_HAT, photon_direction(theta, phi))
        e = spatial_four(polarization_p1(theta, phi, chi))
        shifted = e + ev.k1 * 0.37
        a = gauge_projected_polarization(e, ev.p1, ev.k1)
        b = gauge_projected_polarization(shifted, ev.p1, ev.k1)
        np.testing.assert_allclose(a.to_array(), b.to_array(), atol=1e-14)


def test_gauge_invariance_of_covariant_rate():
    rng = np.random.default_rng(12)
    for _ in range(200):
        beta, theta, phi = rng.uniform(0, 0.99), rng.uniform(0.05, 3.1), rng.uniform(0, 6.28)
        c1, c2 = rng.uniform(0, math.pi, 2)
        ev, e1, e2 = process1_geometry(beta, theta, phi, c1, c2)
        base = covariant_from_event(ev, e1, e2)
        b1, b2 = rng.uniform(-10, 10, 2)
        eps1 = gauge_projected_polarization(spatial_four(e1) + ev.k1 * b1, ev.p1, ev.k1)
        eps2 = gauge_projected_polarization(spatial_four(e2) + ev.k2 * b2, ev.p1, ev.k2)
        shifted = 0.25 * ev.k1.dot(ev.k2) ** 2 / (ev.p1.dot(ev.k1) * ev.p1.dot(ev.k2)) - eps1.dot(eps2) ** 2
        assert shifted == pytest.approx(base, abs=1e-12)


def test_gauge_projection_degenerate():
    ev = build_cm_event(1.0, Z_HAT, Z_HAT)
    with pytest.raises(DegenerateKinematicsError):
        gauge_projected_polarization(spatial_four(ThreeVector(1.0, 0.0, 0.0)), ev.p1, ev.k1)
