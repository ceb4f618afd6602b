import math

import numpy as np
import pytest
from hypothesis import given

from bellsim.linalg import (
    IDENTITY2,
    IDENTITY4,
    X_AXIS,
    Z_AXIS,
    Direction,
    basis_state,
    check_density_matrix,
    expectation,
    hermitian_eigenvalues,
    is_projector,
    maximally_mixed,
    projector_from_direction,
    singlet,
    tensor,
)

from conftest import directions, random_density


def test_direction_normalizes():
    d = Direction(3, 0, 4)
    assert (d.x, d.y, d.z) == pytest.approx((0.6, 0, 0.8), abs=1e-15)


def test_zero_direction_rejected():
    with pytest.raises(ValueError):
        Direction(0, 0, 0)


@given(directions)
def test_direction_norm(d):
    assert abs(math.sqrt(d.dot(d)) - 1) <= 1e-9


def test_projector_z():
    np.testing.assert_allclose(projector_from_direction(Z_AXIS, 1), np.diag([1, 0]), atol=1e-15)


def test_projector_x():
    np.testing.assert_allclose(projector_from_direction(X_AXIS, 1), 0.5 * np.ones((2, 2)), atol=1e-15)


def test_projector_bad_sign():
    with pytest.raises(ValueError):
        projector_from_direction(Z_AXIS, 0)


@given(directions)
def test_projector_completeness(n):
    total = projector_from_direction(n, 1) + projector_from_direction(n, -1)
    np.testing.assert_allclose(total, IDENTITY2, atol=1e-12)
    assert is_projector(projector_from_direction(n, 1))
    assert is_projector(projector_from_direction(n, -1))


def test_projector_eigenvalues_200(rng):
    for _ in range(200):
        n = Direction.random(rng)
        for s in (1, -1):
            np.testing.assert_allclose(hermitian_eigenvalues(projector_from_direction(n, s)), [0, 1], atol=1e-9)


def test_closed_form_eigenvalues_match_lapack(rng):
    for _ in range(50):
        g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        h = g + g.conj().T
        np.testing.assert_allclose(hermitian_eigenvalues(h), np.linalg.eigvalsh(h), atol=1e-12)


def test_singlet_amplitudes():
    psi = singlet()
    assert abs(np.vdot(basis_state(1, -1), psi) - 1 / math.sqrt(2)) < 1e-15
    assert abs(np.linalg.norm(psi) - 1) < 1e-15


def test_singlet_is_read_only():
    with pytest.raises(ValueError):
        singlet()[0] = 1


def test_tensor_identity():
    np.testing.assert_array_equal(tensor(IDENTITY2, IDENTITY2), IDENTITY4)


def test_tensor_basis_order():
    d = np.diag([1, 0])
    np.testing.assert_array_equal(tensor(d, d), np.diag([1, 0, 0, 0]))


def test_tensor_dimension_mismatch():
    with pytest.raises(ValueError):
        tensor(IDENTITY4, IDENTITY2)


def test_tensor_trace_multiplicative(rng):
    for _ in range(20):
        a, b = (random_density(rng) * rng.normal() for _ in range(2))
        assert np.trace(tensor(a, b)) == pytest.approx(np.trace(a) * np.trace(b), abs=1e-12)


def test_expectation_examples():
    psi = singlet()
    assert expectation(psi, IDENTITY4) == pytest.approx(1, abs=1e-15)
    zz = tensor(projector_from_direction(Z_AXIS, 1), projector_from_direction(Z_AXIS, -1))
    assert expectation(psi, zz) == pytest.approx(0.5, abs=1e-15)


@given(directions)
def test_expectation_maximally_mixed(n):
    assert expectation(maximally_mixed(2), projector_from_direction(n, 1)) == pytest.approx(0.5, abs=1e-12)


def test_expectation_rejects_non_hermitian():
    with pytest.raises(ValueError, match="imaginary"):
        expectation(np.array([1, 1]) / math.sqrt(2), np.array([[0, 1j], [0, 0]]))


def test_expectation_dimension_mismatch():
    with pytest.raises(ValueError):
        expectation(singlet(), IDENTITY2)


def test_density_matrix_checks():
    check_density_matrix(maximally_mixed(4))
    with pytest.raises(ValueError, match="trace"):
        check_density_matrix(np.eye(2))
    with pytest.raises(ValueError, match="negative"):
        check_density_matrix(np.diag([1.5, -0.5]))
    with pytest.raises(ValueError, match="Hermitian"):
        check_density_matrix(np.array([[0.5, 1], [0, 0.5]]))


def test_pure_two_qubit_density_passes():
    # triple-degenerate zero spectrum
    check_density_matrix(np.outer(singlet(), singlet().conj()))


def test_perfect_anticorrelation(rng):
    psi = singlet()
    for _ in range(200):
        n = Direction.random(rng)
        same = sum(
            expectation(psi, tensor(projector_from_direction(n, s), projector_from_direction(n, s))) for s in (1, -1)
        )
        assert same <= 1e-12


def test_rotational_invariance(rng):
    psi = singlet()
    for _ in range(200):
        m, n = Direction.random(rng), Direction.random(rng)
        p = expectation(psi, tensor(projector_from_direction(m, 1), projector_from_direction(n, 1)))
        assert p == pytest.approx(0.5 * math.sin(m.angle_to(n) / 2) ** 2, abs=1e-9)
