"""Domain types shared by every evolution route.

Units: hbar = 1, energies are angular frequencies, time is their reciprocal.
All types are frozen dataclasses and safe to share between threads.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

S11_TOL = 1e-10
POSITIVITY_REJECT_TOL = 1e-8


class ParameterError(ValueError):
    """Raised when physical parameters fail validation."""


class ConvergenceError(RuntimeError):
    """Raised when a numerical routine cannot reach the requested accuracy."""


def _finite(*values: complex) -> bool:
    return all(cmath.isfinite(complex(v)) for v in values)


@dataclass(frozen=True)
class QubitAmplitudes:
    """Pure initial qubit state a|1> + b|2>, normalized on construction."""

    a: complex
    b: complex

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        if not _finite(a, b):
            raise ParameterError("qubit amplitudes must be finite")
        norm = math.sqrt(abs(a) ** 2 + abs(b) ** 2)
        if norm == 0.0:
            raise ParameterError("qubit amplitudes must not both vanish")
        object.__setattr__(self, "a", a / norm)
        object.__setattr__(self, "b", b / norm)

    @property
    def p1(self) -> float:
        return abs(self.a) ** 2

    @property
    def p2(self) -> float:
        return abs(self.b) ** 2

    @property
    def coherence(self) -> complex:
        """a * conj(b), the initial off-diagonal element."""
        return self.a * self.b.conjugate()

    def as_vector(self) -> np.ndarray:
        return np.array([self.a, self.b], dtype=complex)


@dataclass(frozen=True)
class DensityMatrix2:
    """Qubit density matrix stored as (s11, s12); s22 and s21 are implied.

    Construct through :func:`make_density` to get validation.
    """

    s11: float
    s12: complex

    @property
    def s22(self) -> float:
        return 1.0 - self.s11

    @property
    def s21(self) -> complex:
        return self.s12.conjugate()

    @property
    def trace(self) -> float:
        return self.s11 + self.s22

    @property
    def purity(self) -> float:
        return self.s11**2 + self.s22**2 + 2.0 * abs(self.s12) ** 2

    @property
    def determinant(self) -> float:
        """s11*s22 - |s12|^2; non-negative for a physical state."""
        return self.s11 * self.s22 - abs(self.s12) ** 2

    def decompose(self) -> tuple[float, complex]:
        return self.s11, self.s12

    def to_matrix(self) -> np.ndarray:
        return np.array([[self.s11, self.s12], [self.s21, self.s22]], dtype=complex)

    def max_abs_diff(self, other: "DensityMatrix2") -> float:
        return max(abs(self.s11 - other.s11), abs(self.s12 - other.s12))

    def check(self, tol: float = S11_TOL) -> None:
        """Assert the physical invariants at tolerance ``tol``."""
        if not _finite(self.s11, self.s12):
            raise ParameterError("density matrix contains non-finite entries")
        if not (-tol <= self.s11 <= 1.0 + tol):
            raise ParameterError(f"s11={self.s11!r} outside [0, 1]")
        if self.determinant < -tol:
            raise ParameterError(f"positivity violated: det={self.determinant!r}")
        if self.purity > 1.0 + tol:
            raise ParameterError(f"purity {self.purity!r} exceeds 1")


def make_density(s11: float, s12: complex) -> DensityMatrix2:
    """Build a validated density matrix from its independent entries."""
    s11 = float(s11)
    s12 = complex(s12)
    if not _finite(s11, s12):
        raise ParameterError("density matrix entries must be finite")
    if not (-S11_TOL <= s11 <= 1.0 + S11_TOL):
        raise ParameterError(f"s11={s11!r} outside [0, 1]")
    rho = DensityMatrix2(s11, s12)
    if rho.determinant < -POSITIVITY_REJECT_TOL:
        raise ParameterError(
            f"positivity violated (det={rho.determinant:.3e}); upstream numerical bug"
        )
    return rho


def pure_density(q0: QubitAmplitudes) -> DensityMatrix2:
    return make_density(q0.p1, q0.coherence)


@dataclass(frozen=True)
class FiniteModelParams:
    """Discrete condensate of ``n_atoms`` bosons coupled to a symmetric qubit.

    ``delta_omega`` is the reduction of the hopping amplitude while the
    electron sits in dot 2. The condensate site energy is fixed to zero.
    """

    n_atoms: int
    omega_hop: float = 1.0
    delta_omega: float = 0.0
    omega0: float = 1.0
    e1: float = 0.0
    e2: float = 0.0

    def __post_init__(self):
        if int(self.n_atoms) != self.n_atoms or self.n_atoms < 1:
            raise ParameterError(f"n_atoms must be a positive integer, got {self.n_atoms!r}")
        object.__setattr__(self, "n_atoms", int(self.n_atoms))
        for name in ("omega_hop", "delta_omega", "omega0", "e1", "e2"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ParameterError(f"{name} must be finite")
            object.__setattr__(self, name, value)
        if self.omega_hop <= 0:
            raise ParameterError("omega_hop must be > 0")
        if self.delta_omega < 0:
            raise ParameterError("delta_omega must be >= 0")
        if self.delta_omega > self.omega_hop:
            raise ParameterError("delta_omega must not exceed omega_hop")
        if self.omega0 < 0:
            raise ParameterError("omega0 must be >= 0")

    @property
    def e0(self) -> float:
        return 0.0

    @property
    def omega_hop_dot2(self) -> float:
        """Hopping amplitude while the electron occupies dot 2."""
        return self.omega_hop - self.delta_omega

    @property
    def alpha(self) -> float:
        """Matched continuum coupling sqrt(N) * delta_omega."""
        return math.sqrt(self.n_atoms) * self.delta_omega

    def require_symmetric(self) -> None:
        if self.e1 != self.e2:
            raise ParameterError("only the symmetric qubit (e1 == e2) is supported")

    @classmethod
    def matched(cls, n_atoms: int, alpha: float, omega0: float, omega_hop: float = 1.0):
        """Finite model whose coupling tends to ``alpha`` as N grows."""
        return cls(n_atoms, omega_hop, alpha / math.sqrt(n_atoms), omega0)


@dataclass(frozen=True)
class ContinuumParams:
    """Infinite-condensate limit: coupling ``alpha`` and qubit tunneling ``omega0``."""

    alpha: float
    omega0: float = 1.0
    kappa: float | None = None

    def __post_init__(self):
        alpha, omega0 = float(self.alpha), float(self.omega0)
        if not (math.isfinite(alpha) and alpha > 0):
            raise ParameterError(f"alpha must be finite and > 0, got {self.alpha!r}")
        if not (math.isfinite(omega0) and omega0 >= 0):
            raise ParameterError(f"omega0 must be finite and >= 0, got {self.omega0!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "omega0", omega0)
        if self.kappa is not None:
            kappa = float(self.kappa)
            if not (math.isfinite(kappa) and kappa > 0):
                raise ParameterError("kappa must be finite and > 0")
            object.__setattr__(self, "kappa", kappa)

    @property
    def z(self) -> float:
        return math.sqrt(2.0) * self.omega0 / self.alpha


class ModelTag(str, Enum):
    FINITE_N = "finite_n"
    ORACLE = "oracle"
    CONTINUUM = "continuum"
    STATIONARY_PHASE = "stationary_phase"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class TimeSeries:
    model_tag: ModelTag
    times: tuple[float, ...]
    states: tuple[DensityMatrix2, ...] = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "model_tag", ModelTag(self.model_tag))
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))
        object.__setattr__(self, "states", tuple(self.states))
        if len(self.times) != len(self.states):
            raise ParameterError("times and states differ in length")
        if any(t1 <= t0 for t0, t1 in zip(self.times, self.times[1:])):
            raise ParameterError("sample times must be strictly increasing")

    @classmethod
    def from_samples(cls, tag, samples: Iterable[tuple[float, DensityMatrix2]]):
        samples = list(samples)
        return cls(tag, tuple(t for t, _ in samples), tuple(r for _, r in samples))

    def __len__(self) -> int:
        return len(self.times)

    def __iter__(self):
        return iter(zip(self.times, self.states))

    @property
    def t(self) -> np.ndarray:
        return np.asarray(self.times)

    @property
    def s11(self) -> np.ndarray:
        return np.array([r.s11 for r in self.states])

    @property
    def s12(self) -> np.ndarray:
        return np.array([r.s12 for r in self.states], dtype=complex)


def time_grid(t_max: float, n_samples: int, t_min: float = 0.0) -> np.ndarray:
    if not t_max > t_min:
        raise ParameterError("t_max must exceed t_min")
    if n_samples < 2:
        raise ParameterError("n_samples must be >= 2")
    return np.linspace(t_min, t_max, int(n_samples))


def check_times(times: Sequence[float] | float) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(times, dtype=float))
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise ParameterError("times must be finite and >= 0")
    return arr
