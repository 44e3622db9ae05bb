"""Infinite-condensate limit: Gaussian average over the level displacement.

The average is taken on equally spaced nodes over ``[-10 alpha, 10 alpha]``
(the Gaussian weight there is below ``exp(-50)``, so the endpoint treatment
is immaterial). The integrand is analytic and the weight decays fast, so the
equally spaced rule converges geometrically once the oscillation
``cos(2 w(eps) t)`` is resolved. The starting spacing keeps the phase change
between neighbours below pi/4; the node count then doubles, reusing old nodes,
until two successive estimates agree to ``tol``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    ContinuumParams,
    ConvergenceError,
    DensityMatrix2,
    ModelTag,
    ParameterError,
    QubitAmplitudes,
    TimeSeries,
    check_times,
    make_density,
)
from .propagator import sigma_arrays, sigma_tilde_arrays, sigma_tilde_closed_form_arrays

TRUNCATION = 10.0
MAX_NODES = 2**20
MIN_NODES = 64
INTEGRANDS = ("closed_form", "propagator", "unsymmetrized")


@dataclass(frozen=True)
class QuadratureResult:
    rho: DensityMatrix2
    error: float
    n_nodes: int


def _integrand(kind: str, t: float, eps: np.ndarray, q0: QubitAmplitudes, omega0: float):
    if kind == "closed_form":
        return sigma_tilde_closed_form_arrays(t, eps, q0.a, q0.b, omega0)
    if kind == "propagator":
        return sigma_tilde_arrays(t, eps, q0, omega0)
    if kind == "unsymmetrized":
        return sigma_arrays(t, eps, q0, omega0)
    raise ParameterError(f"unknown integrand {kind!r}; expected one of {INTEGRANDS}")


def initial_intervals(t: float, alpha: float) -> int:
    """Smallest power of two resolving both the Gaussian and the phase 2 w t."""
    width = 2.0 * TRUNCATION * alpha
    h = alpha / 4.0
    if t > 0:
        # d(2 w t)/d eps = t eps / (2 w) is bounded by t
        h = min(h, math.pi / (4.0 * t))
    m = max(MIN_NODES, math.ceil(width / h))
    return 1 << (m - 1).bit_length()


def continuum_quadrature(
    t: float,
    params: ContinuumParams,
    q0: QubitAmplitudes,
    tol: float = 1e-8,
    integrand: str = "closed_form",
    max_nodes: int = MAX_NODES,
) -> QuadratureResult:
    """Gaussian average of the per-displacement density with an error estimate.

    Raises ConvergenceError once the node count would exceed ``max_nodes``;
    at such times the stationary-phase route is the practical alternative.
    """
    if not (1e-12 <= tol <= 1e-4):
        raise ParameterError("tol must lie in [1e-12, 1e-4]")
    if not (math.isfinite(t) and t >= 0):
        raise ParameterError("t must be finite and >= 0")
    alpha, omega0 = params.alpha, params.omega0
    half = TRUNCATION * alpha
    norm = 1.0 / (math.sqrt(2.0 * math.pi) * alpha)

    def weighted_sums(eps):
        s11, s12 = _integrand(integrand, t, eps, q0, omega0)
        g = np.exp(-0.5 * (eps / alpha) ** 2)
        return np.sum(g * s11), np.sum(g * s12)

    m = initial_intervals(t, alpha)
    if m + 1 > max_nodes:
        raise ConvergenceError(f"t={t} needs more than {max_nodes} nodes; use the stationary-phase route")
    h = 2.0 * half / m
    acc11, acc12 = weighted_sums(-half + h * np.arange(m + 1))
    est = (h * norm * acc11, h * norm * acc12)
    while True:
        if 2 * m + 1 > max_nodes:
            raise ConvergenceError(
                f"quadrature at t={t} did not reach tol={tol} within {max_nodes} nodes"
            )
        mids = -half + h * (np.arange(m) + 0.5)
        d11, d12 = weighted_sums(mids)
        acc11, acc12 = acc11 + d11, acc12 + d12
        m, h = 2 * m, 0.5 * h
        new = (h * norm * acc11, h * norm * acc12)
        err = max(abs(new[0] - est[0]), abs(new[1] - est[1]))
        est = new
        if err <= tol:
            break
    return QuadratureResult(make_density(est[0], est[1]), float(err), m + 1)


def reduced_density_continuum(
    t: float,
    params: ContinuumParams,
    q0: QubitAmplitudes,
    tol: float = 1e-8,
    integrand: str = "closed_form",
) -> DensityMatrix2:
    """Qubit density in the infinite-condensate limit at time ``t``."""
    return continuum_quadrature(t, params, q0, tol, integrand).rho


def continuum_series(
    times,
    params: ContinuumParams,
    q0: QubitAmplitudes,
    tol: float = 1e-8,
    integrand: str = "closed_form",
) -> TimeSeries:
    times = check_times(times)
    states = tuple(reduced_density_continuum(float(t), params, q0, tol, integrand) for t in times)
    return TimeSeries(ModelTag.CONTINUUM, tuple(times), states)


def static_qubit_coherence(t: float, alpha: float, a: complex, b: complex) -> complex:
    """Coherence of a frozen qubit: a conj(b) exp(-alpha^2 t^2 / 2)."""
    if t < 0:
        raise ParameterError("t must be >= 0")
    if alpha <= 0:
        raise ParameterError("alpha must be > 0")
    return complex(a) * complex(b).conjugate() * math.exp(-0.5 * (alpha * t) ** 2)


def static_qubit_series(times, params: ContinuumParams, q0: QubitAmplitudes) -> TimeSeries:
    if params.omega0 != 0:
        raise ParameterError("static closed form requires omega0 = 0")
    times = check_times(times)
    states = tuple(
        make_density(q0.p1, static_qubit_coherence(float(t), params.alpha, q0.a, q0.b)) for t in times
    )
    return TimeSeries(ModelTag.CLOSED_FORM, tuple(times), states)
