"""Finite condensate of N atoms: spectral sum, counting statistics, oracle.

The qubit reduced density is a binomially weighted mixture of isolated
asymmetric-qubit evolutions, one per condensate eigenstate with level
displacement ``eps_n = (2n - N) * delta_omega``. The brute-force oracle builds
the full ``2(N+1)``-dimensional Hamiltonian instead and traces the condensate
out, which checks the factorization independently.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln

from .core import (
    DensityMatrix2,
    FiniteModelParams,
    ModelTag,
    ParameterError,
    QubitAmplitudes,
    TimeSeries,
    check_times,
    make_density,
)
from .propagator import sigma_arrays

ORACLE_MAX_ATOMS = 64
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _stirling_remainder(k):
    """log(k!) - [(k + 1/2) log k - k + log(2 pi)/2], accurate for all k >= 0."""
    k = np.asarray(k, dtype=float)
    out = np.empty_like(k)
    small = k < 16
    ks = k[small]
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = gammaln(ks + 1.0) - (ks + 0.5) * np.log(ks) + ks - _HALF_LOG_2PI
    out[small] = np.where(ks == 0, 0.0, direct)
    kl = k[~small]
    k2 = kl * kl
    out[~small] = (
        1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - (1.0 / 1680.0) / k2) / k2) / k2
    ) / kl
    return out


def _deviance(x, mean):
    """x log(x/mean) + mean - x, free of cancellation near x = mean."""
    x = np.asarray(x, dtype=float)
    r = (x - mean) / mean
    return mean * ((1.0 + r) * np.log1p(r) - r)


def binomial_log_pmf(n, n_total: int, p: float) -> np.ndarray:
    """log[C(N, n) p^n (1-p)^(N-n)] via the saddle-point form of log-gamma ratios."""
    n = np.asarray(n, dtype=float)
    N = float(n_total)
    if p <= 0.0 or p >= 1.0:
        hit = 0.0 if p <= 0.0 else N
        return np.where(n == hit, 0.0, -np.inf)
    q = 1.0 - p
    out = np.empty_like(n)
    edge_lo = n == 0
    edge_hi = n == N
    out[edge_lo] = N * math.log1p(-p)
    out[edge_hi] = N * math.log(p)
    mid = ~(edge_lo | edge_hi)
    k = n[mid]
    out[mid] = (
        _stirling_remainder(N)
        - _stirling_remainder(k)
        - _stirling_remainder(N - k)
        - _deviance(k, N * p)
        - _deviance(N - k, N * q)
        + 0.5 * np.log(N / (2.0 * math.pi * k * (N - k)))
    )
    return out


def _check_label(n, n_atoms: int) -> np.ndarray:
    arr = np.asarray(n)
    if np.any(arr != np.floor(arr)) or np.any(arr < 0) or np.any(arr > n_atoms):
        raise ParameterError(f"atom label outside [0, {n_atoms}]")
    return arr.astype(float)


def eigenweights(n_atoms: int) -> np.ndarray:
    """All overlaps |<phi_0|phi~_n>|^2 = C(N, n) / 2^N for n = 0..N."""
    return np.exp(binomial_log_pmf(np.arange(n_atoms + 1), n_atoms, 0.5))


def eigenweight(n, n_atoms: int):
    """Overlap of the all-left condensate with the n-th condensate eigenstate."""
    w = np.exp(binomial_log_pmf(_check_label(n, n_atoms), n_atoms, 0.5))
    return float(w) if w.ndim == 0 else w


def eigenweight_gaussian(n, n_atoms: int):
    """Stirling approximation (2/sqrt(2 pi N)) exp(-(N - 2n)^2 / 2N)."""
    if n_atoms < 10:
        raise ParameterError("Gaussian eigenweight needs n_atoms >= 10")
    n = _check_label(n, n_atoms)
    w = 2.0 / math.sqrt(2.0 * math.pi * n_atoms) * np.exp(-((n_atoms - 2.0 * n) ** 2) / (2.0 * n_atoms))
    return float(w) if w.ndim == 0 else w


def pn_static(t: float, n, params: FiniteModelParams, dot: int = 1):
    """Probability of n atoms in the right well for a qubit frozen in ``dot``."""
    if params.omega0 != 0:
        raise ParameterError("counting statistics are defined for the static qubit (omega0 = 0)")
    if t < 0:
        raise ParameterError("t must be >= 0")
    if dot not in (1, 2):
        raise ParameterError("dot must be 1 or 2")
    hop = params.omega_hop if dot == 1 else params.omega_hop_dot2
    p = math.sin(hop * t) ** 2
    out = np.exp(binomial_log_pmf(_check_label(n, params.n_atoms), params.n_atoms, p))
    return float(out) if out.ndim == 0 else out


def pn_distribution(t: float, params: FiniteModelParams, dot: int = 1) -> np.ndarray:
    return pn_static(t, np.arange(params.n_atoms + 1), params, dot)


def pn_poisson_limit(n, kappa: float, dt: float):
    """Short-time limit (kappa dt)^(2n) exp(-(kappa dt)^2) / n!.

    Valid only for kappa*dt << 1; the caller is responsible for that.
    """
    n = np.asarray(n, dtype=float)
    if np.any(n < 0):
        raise ParameterError("n must be >= 0")
    x = (kappa * dt) ** 2
    with np.errstate(divide="ignore"):
        logp = np.where(n == 0, 0.0, n * np.log(x) if x > 0 else -np.inf) - x - gammaln(n + 1.0)
    out = np.exp(logp)
    return float(out) if out.ndim == 0 else out


def level_displacements(params: FiniteModelParams) -> np.ndarray:
    n = np.arange(params.n_atoms + 1)
    return (2.0 * n - params.n_atoms) * params.delta_omega


def _fsum_rows(values: np.ndarray) -> np.ndarray:
    return np.array([math.fsum(row) for row in values])


def finite_series(times, params: FiniteModelParams, q0: QubitAmplitudes) -> TimeSeries:
    """Spectral-sum evolution sampled at strictly increasing ``times``."""
    params.require_symmetric()
    times = check_times(times)
    eps = level_displacements(params)
    weights = eigenweights(params.n_atoms)
    keep = weights > 0
    eps, weights = eps[keep], weights[keep]
    states = []
    # bounded memory: (chunk, N+1) arrays
    chunk = max(1, 2_000_000 // eps.size)
    for start in range(0, times.size, chunk):
        tt = times[start : start + chunk, None]
        s11, s12 = sigma_arrays(tt, eps[None, :], q0, params.omega0)
        r11 = _fsum_rows(weights * s11)
        r12 = _fsum_rows((weights * s12).real) + 1j * _fsum_rows((weights * s12).imag)
        states.extend(make_density(a, b) for a, b in zip(r11, r12))
    return TimeSeries(ModelTag.FINITE_N, tuple(times), tuple(states))


def reduced_density_finite(t: float, params: FiniteModelParams, q0: QubitAmplitudes) -> DensityMatrix2:
    """Qubit density after tracing out a condensate of ``params.n_atoms`` atoms."""
    return finite_series([t], params, q0).states[0]


def full_hamiltonian(params: FiniteModelParams) -> np.ndarray:
    """Dense Hamiltonian in the basis |q> (x) |n right>, index (q-1)*(N+1) + n."""
    N = params.n_atoms
    dim = N + 1
    n = np.arange(1, dim)
    bond = np.sqrt(n * (N - n + 1.0))
    H = np.zeros((2 * dim, 2 * dim))
    for block, hop in enumerate((params.omega_hop, params.omega_hop_dot2)):
        off = block * dim
        idx = off + n
        H[idx - 1, idx] = H[idx, idx - 1] = -hop * bond
    diag = np.arange(dim)
    H[diag, diag] = params.e1
    H[dim + diag, dim + diag] = params.e2
    H[diag, dim + diag] = H[dim + diag, diag] = -params.omega0
    return H


def full_hamiltonian_states(times, params: FiniteModelParams, q0: QubitAmplitudes, max_atoms: int = ORACLE_MAX_ATOMS):
    """Full wave functions, shape (len(times), 2, N+1), starting with all atoms left."""
    params.require_symmetric()
    if params.n_atoms > max_atoms:
        raise ParameterError(f"oracle limited to n_atoms <= {max_atoms}")
    times = check_times(times)
    dim = params.n_atoms + 1
    energies, vecs = np.linalg.eigh(full_hamiltonian(params))
    psi0 = np.zeros(2 * dim, dtype=complex)
    psi0[0] = q0.a
    psi0[dim] = q0.b
    coeff = vecs.T @ psi0
    psi = (np.exp(-1j * np.outer(times, energies)) * coeff) @ vecs.T
    return psi.reshape(times.size, 2, dim)


def oracle_series(times, params: FiniteModelParams, q0: QubitAmplitudes, max_atoms: int = ORACLE_MAX_ATOMS) -> TimeSeries:
    psi = full_hamiltonian_states(times, params, q0, max_atoms)
    s11 = np.sum(np.abs(psi[:, 0, :]) ** 2, axis=1)
    s12 = np.sum(psi[:, 0, :] * np.conj(psi[:, 1, :]), axis=1)
    states = tuple(make_density(a, b) for a, b in zip(s11, s12))
    return TimeSeries(ModelTag.ORACLE, tuple(check_times(times)), states)


def full_hamiltonian_evolution(t: float, params: FiniteModelParams, q0: QubitAmplitudes, max_atoms: int = ORACLE_MAX_ATOMS) -> DensityMatrix2:
    """Brute-force reduced density from the full qubit plus condensate Hamiltonian."""
    return oracle_series([t], params, q0, max_atoms).states[0]


def recurrence_time(params: FiniteModelParams) -> float:
    """Onset scale 2*pi/delta_omega of finite-size deviations."""
    if params.delta_omega <= 0:
        raise ParameterError("recurrence time needs delta_omega > 0")
    return 2.0 * math.pi / params.delta_omega
