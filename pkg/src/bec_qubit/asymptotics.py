"""Long-time and limiting-coupling behaviour of the infinite-condensate model."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson
from scipy.special import erfcx

from .continuum import reduced_density_continuum
from .core import (
    ContinuumParams,
    DensityMatrix2,
    ModelTag,
    ParameterError,
    QubitAmplitudes,
    TimeSeries,
    check_times,
    make_density,
)

SP_VARIANTS = ("corrected", "sin_sin")


class ValidityWarning(UserWarning):
    """Stationary-phase form evaluated close to its validity limit."""


class InsufficientDataError(ValueError):
    """Too few resolvable oscillation peaks for an envelope fit."""


@dataclass(frozen=True)
class SteadyState:
    s11_st: float
    s12_st: float
    z: float

    def as_density(self) -> DensityMatrix2:
        return make_density(self.s11_st, self.s12_st)


def decoherence_factor(z: float) -> float:
    """sqrt(pi) z erfcx(z): the Gaussian mean of omega0^2 / w^2.

    Rises monotonically from 0 at z = 0 to 1 as z grows.
    """
    return math.sqrt(math.pi) * z * float(erfcx(z))


def steady_state(params: ContinuumParams, q0: QubitAmplitudes) -> SteadyState:
    """Long-time limit of the qubit density."""
    z = params.z
    f = decoherence_factor(z)
    s11 = q0.p1 + 0.5 * f * (q0.p2 - q0.p1)
    s12 = f * q0.coherence.real
    return SteadyState(s11, s12, z)


def validity_time(params: ContinuumParams) -> float:
    """omega0 / alpha^2, the time scale beyond which the 1/sqrt(t) law holds."""
    return params.omega0 / params.alpha**2


def stationary_phase_arrays(times, params: ContinuumParams, q0: QubitAmplitudes, variant: str = "corrected"):
    """Vectorized leading-order long-time form; no validity checks."""
    if variant not in SP_VARIANTS:
        raise ParameterError(f"variant must be one of {SP_VARIANTS}")
    t = np.asarray(times, dtype=float)
    st = steady_state(params, q0)
    w0 = params.omega0
    amp = np.sqrt(w0 / (2.0 * params.alpha**2 * t))
    phase = 2.0 * w0 * t + 0.25 * math.pi
    im = q0.coherence.imag
    pop = q0.p1 - q0.p2
    s11 = st.s11_st + amp * (pop * np.cos(phase) + 2.0 * im * np.sin(phase))
    second = np.cos(phase) if variant == "corrected" else np.sin(phase)
    s12 = st.s12_st + 1j * amp * (-pop * np.sin(phase) + 2.0 * im * second)
    return s11, s12


def _check_window(t: float, params: ContinuumParams) -> None:
    if params.omega0 <= 0:
        raise ParameterError("stationary-phase form needs omega0 > 0")
    if not t > 0:
        raise ParameterError("t must be > 0")
    tv = validity_time(params)
    if t <= 3.0 * tv:
        raise ParameterError(f"t={t} below the stationary-phase window t > {3.0 * tv:g}")
    if t < 10.0 * tv:
        warnings.warn(f"t={t} is within 10*omega0/alpha^2 of the onset", ValidityWarning, stacklevel=3)


def stationary_phase_density(
    t: float, params: ContinuumParams, q0: QubitAmplitudes, variant: str = "corrected"
) -> DensityMatrix2:
    """Steady state plus the leading 1/sqrt(t) oscillating correction.

    ``variant="sin_sin"`` keeps sin in both terms of the coherence correction;
    the default pairs sin with cos, which is what the quadrature supports.
    The result is an asymptotic form and is not checked for positivity.
    """
    _check_window(t, params)
    s11, s12 = stationary_phase_arrays(t, params, q0, variant)
    return DensityMatrix2(float(s11), complex(s12))


def stationary_phase_series(times, params: ContinuumParams, q0: QubitAmplitudes, variant: str = "corrected") -> TimeSeries:
    times = check_times(times)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ValidityWarning)
        states = tuple(stationary_phase_density(float(t), params, q0, variant) for t in times)
    return TimeSeries(ModelTag.STATIONARY_PHASE, tuple(times), states)


def strong_coupling_density(q0: QubitAmplitudes) -> DensityMatrix2:
    """Pure-dephasing endpoint diag(|a|^2, |b|^2)."""
    return make_density(q0.p1, 0.0)


def period_averaged_continuum(t: float, params: ContinuumParams, q0: QubitAmplitudes, tol: float = 1e-10, n_points: int = 129):
    """Mean of the quadrature result over one qubit period pi/omega0 starting at t."""
    if params.omega0 <= 0:
        raise ParameterError("period averaging needs omega0 > 0")
    period = math.pi / params.omega0
    ts = np.linspace(t, t + period, n_points)
    rhos = [reduced_density_continuum(float(x), params, q0, tol) for x in ts]
    s11 = simpson([r.s11 for r in rhos], x=ts) / period
    s12 = simpson(np.array([r.s12 for r in rhos]), x=ts) / period
    return float(s11), complex(s12)


def extrapolate_steady_state(params: ContinuumParams, q0: QubitAmplitudes, anchors=(200.0, 800.0), tol: float = 1e-10):
    """Estimate the t -> infinity density from quadrature alone.

    Period averages at two anchor times are extrapolated linearly in
    t^(-1/2) to zero. Averaging first removes the leading oscillation, which a
    two-point line through raw samples cannot cancel.
    """
    t1, t2 = anchors
    x1, x2 = t1**-0.5, t2**-0.5
    v1 = period_averaged_continuum(t1, params, q0, tol)
    v2 = period_averaged_continuum(t2, params, q0, tol)
    s11 = v2[0] - (v1[0] - v2[0]) * x2 / (x1 - x2)
    s12 = v2[1] - (v1[1] - v2[1]) * x2 / (x1 - x2)
    return s11, s12


def log_window_times(t_start: float, t_stop: float, omega0: float, n_windows: int = 30, per_window: int = 33) -> np.ndarray:
    """Dense one-period windows at log-spaced centres, for envelope fits."""
    if omega0 <= 0:
        raise ParameterError("windowed grid needs omega0 > 0")
    period = math.pi / omega0
    starts = np.geomspace(t_start, t_stop - period, n_windows)
    if np.any(np.diff(starts) <= period):
        raise ParameterError("windows overlap; use fewer windows or a wider range")
    return np.concatenate([np.linspace(s, s + period, per_window) for s in starts])


def _segments(t: np.ndarray):
    dt = np.diff(t)
    breaks = np.nonzero(dt > 3.0 * np.median(dt))[0] + 1
    return np.split(np.arange(t.size), breaks)


def envelope_peaks(t: np.ndarray, y: np.ndarray):
    """Interior local maxima of ``y``, refined by a three-point parabola."""
    pt, py = [], []
    for idx in _segments(t):
        ts, ys = t[idx], y[idx]
        for i in range(1, ts.size - 1):
            if ys[i] > ys[i - 1] and ys[i] >= ys[i + 1]:
                y0, y1, y2 = ys[i - 1], ys[i], ys[i + 1]
                curv = y0 - 2.0 * y1 + y2
                shift = 0.5 * (y0 - y2) / curv if curv < 0 else 0.0
                pt.append(ts[i] + shift * (ts[i + 1] - ts[i - 1]) / 2.0)
                py.append(y1 - 0.25 * (y0 - y2) * shift)
    return np.array(pt), np.array(py)


def relaxation_envelope_fit(series: TimeSeries, omega0: float, s11_steady: float | None = None, min_peaks: int = 10) -> float:
    """Power-law exponent of the peak envelope of |s11(t) - s11_steady|.

    Without ``s11_steady`` the limit is estimated from the midpoint of the
    extremes in the last contiguous segment of the series.
    """
    if omega0 <= 0:
        raise InsufficientDataError("a static qubit has no oscillatory envelope")
    t, s11 = series.t, series.s11
    if t.size < 3:
        raise InsufficientDataError("series too short")
    segs = _segments(t)
    spacing = max(float(np.median(np.diff(t[idx]))) for idx in segs if idx.size > 1)
    if spacing > math.pi / (8.0 * omega0):
        raise InsufficientDataError("sampling too coarse to resolve oscillation peaks")
    if s11_steady is None:
        last = s11[segs[-1]]
        s11_steady = 0.5 * (last.max() + last.min())
    dev = np.abs(s11 - s11_steady)
    pt, py = envelope_peaks(t, dev)
    keep = py > 1e-14
    pt, py = pt[keep], py[keep]
    if pt.size < min_peaks:
        raise InsufficientDataError(f"only {pt.size} envelope peaks resolved, need {min_peaks}")
    slope, _ = np.polyfit(np.log(pt), np.log(py), 1)
    return float(slope)
