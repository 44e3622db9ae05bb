"""Isolated asymmetric qubit: closed-form propagator and per-energy densities.

The qubit Hamiltonian in the dot basis is ``[[0, -omega0], [-omega0, eps']]``
(dot 2 displaced by ``eps'``). Its propagator is::

    U = exp(-i eps' t/2) [[c + i u s, i v s], [i v s, c - i u s]]

with ``c = cos(w t)``, ``s = sin(w t)``, ``u = eps'/(2w)``, ``v = omega0/w``
and Rabi frequency ``w = sqrt((eps'/2)**2 + omega0**2)``. Terms carrying
``sin(w t)/w`` are evaluated through ``np.sinc`` so the degenerate point
``w = 0`` needs no special casing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DensityMatrix2, ParameterError, QubitAmplitudes, make_density


@dataclass(frozen=True)
class AsymmetricQubit:
    epsilon_prime: float
    omega0: float

    def __post_init__(self):
        if self.omega0 < 0:
            raise ParameterError("omega0 must be >= 0")

    @property
    def rabi(self) -> float:
        return math.hypot(0.5 * self.epsilon_prime, self.omega0)

    def hamiltonian(self) -> np.ndarray:
        return np.array([[0.0, -self.omega0], [-self.omega0, self.epsilon_prime]])


def rabi_frequency(epsilon, omega0):
    return np.hypot(0.5 * np.asarray(epsilon, dtype=float), omega0)


def _sin_over(w, t):
    """sin(w t) / w, finite at w = 0."""
    return t * np.sinc(w * t / np.pi)


def propagator_elements(t, epsilon_prime, omega0):
    """Vectorized (u11, u22, u12) of the propagator; u21 equals u12."""
    eps = np.asarray(epsilon_prime, dtype=float)
    w = rabi_frequency(eps, omega0)
    c = np.cos(w * t)
    so = _sin_over(w, t)
    phase = np.exp(-0.5j * eps * t)
    u11 = (c + 0.5j * eps * so) * phase
    u22 = (c - 0.5j * eps * so) * phase
    u12 = 1j * omega0 * so * phase
    return u11, u22, u12


def propagator_matrix(t: float, q: AsymmetricQubit) -> np.ndarray:
    if t < 0:
        raise ParameterError("t must be >= 0")
    u11, u22, u12 = propagator_elements(t, q.epsilon_prime, q.omega0)
    return np.array([[u11, u12], [u12, u22]], dtype=complex)


def sigma_arrays(t, epsilon, q0: QubitAmplitudes, omega0):
    """(s11, s12) of U|q0><q0|U^dagger for an array of level displacements."""
    u11, u22, u12 = propagator_elements(t, epsilon, omega0)
    psi1 = u11 * q0.a + u12 * q0.b
    psi2 = u12 * q0.a + u22 * q0.b
    return np.abs(psi1) ** 2, psi1 * np.conj(psi2)


def sigma_of_epsilon(t: float, epsilon: float, q0: QubitAmplitudes, omega0: float) -> DensityMatrix2:
    if t < 0:
        raise ParameterError("t must be >= 0")
    s11, s12 = sigma_arrays(t, epsilon, q0, omega0)
    return make_density(float(s11), complex(s12))


def sigma_tilde_arrays(t, epsilon, q0: QubitAmplitudes, omega0):
    """Propagator route for the epsilon-symmetrized density."""
    eps = np.asarray(epsilon, dtype=float)
    p11, p12 = sigma_arrays(t, eps, q0, omega0)
    m11, m12 = sigma_arrays(t, -eps, q0, omega0)
    return 0.5 * (p11 + m11), 0.5 * (p12 + m12)


def sigma_tilde(t: float, epsilon: float, q0: QubitAmplitudes, omega0: float) -> DensityMatrix2:
    if t < 0:
        raise ParameterError("t must be >= 0")
    s11, s12 = sigma_tilde_arrays(t, epsilon, q0, omega0)
    return make_density(float(s11), complex(s12))


def sigma_tilde_closed_form_arrays(t, epsilon, a: complex, b: complex, omega0):
    """Closed-form symmetrized density of the symmetric qubit.

    Written in the sign convention of the Hamiltonian above; the odd-in-omega0
    terms (those multiplying ``sin(2wt)``) flip sign relative to the form with
    hopping ``+omega0``.
    """
    w = rabi_frequency(epsilon, omega0)
    p1, p2 = abs(a) ** 2, abs(b) ** 2
    ab = a * np.conj(b)
    cos2 = np.cos(2.0 * w * t)
    # omega0 * sin(2wt) / (2w) and omega0^2 (1 - cos 2wt) / (2 w^2)
    half_sin = omega0 * _sin_over(2.0 * w, t)
    half_vers = (omega0 * _sin_over(w, t)) ** 2
    s11 = p1 + (p2 - p1) * half_vers + ab.imag * 2.0 * half_sin
    s12 = 1j * (p2 - p1) * half_sin + ab * cos2 + ab.real * 2.0 * half_vers
    return s11, s12


def sigma_tilde_closed_form(t: float, epsilon: float, a: complex, b: complex, omega0: float):
    """Return ``(s11, s12)`` of the symmetrized density from the closed form."""
    s11, s12 = sigma_tilde_closed_form_arrays(t, epsilon, complex(a), complex(b), omega0)
    return float(s11), complex(s12)
