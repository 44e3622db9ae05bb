import itertools
import math

import numpy as np
import pytest

from bec_qubit.core import QubitAmplitudes, pure_density
from bec_qubit.propagator import (
    AsymmetricQubit,
    propagator_matrix,
    sigma_of_epsilon,
    sigma_tilde,
    sigma_tilde_closed_form,
    sigma_tilde_closed_form_arrays,
    sigma_tilde_arrays,
)

from conftest import expm_hermitian

GRID = list(
    itertools.product(np.linspace(0, 50, 11), np.linspace(-20, 20, 9), (0.0, 0.1, 1.0, 5.0))
)


def test_zero_time_is_identity():
    assert np.array_equal(propagator_matrix(0.0, AsymmetricQubit(3.0, 2.0)), np.eye(2))


def test_degenerate_point_is_identity():
    assert np.allclose(propagator_matrix(7.0, AsymmetricQubit(0.0, 0.0)), np.eye(2), atol=0)


def test_full_rabi_flip():
    u = propagator_matrix(math.pi / 2, AsymmetricQubit(0.0, 1.0))
    assert abs(u[0, 1]) == pytest.approx(1.0, abs=1e-15)
    assert abs(u[0, 0]) < 1e-15 and abs(u[1, 1]) < 1e-15


def test_matches_matrix_exponential_at_quarter_period():
    w0 = 1.3
    q = AsymmetricQubit(2 * w0, w0)
    assert q.rabi == pytest.approx(math.sqrt(2) * w0)
    t = math.pi / (2 * q.rabi)
    assert np.abs(propagator_matrix(t, q) - expm_hermitian(q.hamiltonian(), t)).max() < 1e-12


@pytest.mark.parametrize("t, eps, w0", GRID)
def test_unitary_and_matches_oracle(t, eps, w0):
    q = AsymmetricQubit(eps, w0)
    u = propagator_matrix(t, q)
    assert np.abs(u.conj().T @ u - np.eye(2)).max() < 1e-12
    assert np.abs(u - expm_hermitian(q.hamiltonian(), t)).max() < 1e-10
    assert q.rabi >= w0 and q.rabi >= abs(eps) / 2


def test_sigma_of_epsilon_examples(fig2_state):
    assert sigma_of_epsilon(0.0, 1.7, fig2_state, 1.0).max_abs_diff(pure_density(fig2_state)) < 1e-15
    rho = sigma_of_epsilon(math.pi / 2, 0.0, QubitAmplitudes(1, 0), 1.0)
    assert rho.s11 == pytest.approx(0.0, abs=1e-15) and abs(rho.s12) < 1e-15


def test_sigma_of_epsilon_matches_dense_exponential():
    q0 = QubitAmplitudes(1, 0)
    h = np.array([[0.0, -1.0], [-1.0, 2.0]])
    psi = expm_hermitian(h, 1.0) @ q0.as_vector()
    rho = sigma_of_epsilon(1.0, 2.0, q0, 1.0)
    assert rho.s11 == pytest.approx(abs(psi[0]) ** 2, abs=1e-12)
    assert rho.s12 == pytest.approx(psi[0] * psi[1].conjugate(), abs=1e-12)


@pytest.mark.parametrize("t, eps, w0", GRID[::3])
def test_sigma_of_epsilon_pure(t, eps, w0, fig2_state):
    assert abs(sigma_of_epsilon(t, eps, fig2_state, w0).purity - 1.0) < 1e-12


def test_sigma_tilde_even_and_degenerate(fig2_state):
    a = sigma_tilde(2.0, 1.5, fig2_state, 1.0)
    b = sigma_tilde(2.0, -1.5, fig2_state, 1.0)
    assert a == b
    assert sigma_tilde(2.0, 0.0, fig2_state, 1.0).max_abs_diff(sigma_of_epsilon(2.0, 0.0, fig2_state, 1.0)) < 1e-15


def test_closed_form_matches_propagator_at_reference_point(fig2_state):
    s11, s12 = sigma_tilde_closed_form(2.0, 1.5, fig2_state.a, fig2_state.b, 1.0)
    ref = sigma_tilde(2.0, 1.5, fig2_state, 1.0)
    assert abs(s11 - ref.s11) < 1e-12 and abs(s12 - ref.s12) < 1e-12


def test_closed_form_matches_propagator_on_grid(fig2_state):
    eps = np.linspace(-20, 20, 81)
    for t in np.linspace(0, 50, 26):
        for w0 in (0.0, 0.1, 1.0, 5.0):
            c11, c12 = sigma_tilde_closed_form_arrays(t, eps, fig2_state.a, fig2_state.b, w0)
            p11, p12 = sigma_tilde_arrays(t, eps, fig2_state, w0)
            assert np.abs(c11 - p11).max() < 1e-12
            assert np.abs(c12 - p12).max() < 1e-12


def test_closed_form_static_qubit(fig2_state):
    a, b = fig2_state.a, fig2_state.b
    for t, eps in [(0.7, 1.3), (4.0, -2.2), (10.0, 0.05)]:
        s11, s12 = sigma_tilde_closed_form(t, eps, a, b, 0.0)
        assert s11 == pytest.approx(abs(a) ** 2, abs=1e-15)
        assert s12 == pytest.approx(a * b.conjugate() * math.cos(eps * t), abs=1e-14)


def test_closed_form_initial_and_inversion(fig2_state):
    s11, s12 = sigma_tilde_closed_form(0.0, 0.8, fig2_state.a, fig2_state.b, 1.0)
    assert s11 == pytest.approx(2 / 3) and s12 == pytest.approx((1 - 1j) / 3)
    s11, _ = sigma_tilde_closed_form(math.pi / 2, 0.0, 1, 0, 1.0)
    assert s11 == pytest.approx(0.0, abs=1e-15)


def test_plus_omega0_convention_is_omega0_reflection(fig2_state):
    """The +omega0-hopping form equals ours with omega0 -> -omega0 in the odd terms."""
    a, b, w0, t, eps = fig2_state.a, fig2_state.b, 1.0, 2.0, 1.5
    w = math.hypot(eps / 2, w0)
    ab = a * b.conjugate()
    p1, p2 = abs(a) ** 2, abs(b) ** 2
    plus11 = p1 + (p2 - p1) * (1 - math.cos(2 * w * t)) * w0**2 / (2 * w**2) - ab.imag * math.sin(2 * w * t) * w0 / w
    ours11, _ = sigma_tilde_closed_form(t, eps, a, b, w0)
    mirror11 = 2 * p1 + (p2 - p1) * (1 - math.cos(2 * w * t)) * w0**2 / w**2 - ours11
    assert plus11 == pytest.approx(mirror11, abs=1e-14)


def test_symmetric_qubit_population(fig2_state):
    a, b = fig2_state.a, fig2_state.b
    for t in np.linspace(0, 10, 21):
        expected = abs(a) ** 2 * math.cos(t) ** 2 + abs(b) ** 2 * math.sin(t) ** 2 + (a * b.conjugate()).imag * math.sin(2 * t)
        assert sigma_of_epsilon(t, 0.0, fig2_state, 1.0).s11 == pytest.approx(expected, abs=1e-13)
