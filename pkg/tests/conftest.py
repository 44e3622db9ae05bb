import numpy as np
import pytest

from bec_qubit.core import QubitAmplitudes


@pytest.fixture
def fig2_state():
    """[(1+i)|1> + i|2>] / sqrt(3)."""
    return QubitAmplitudes(1 + 1j, 1j)


def random_state(rng: np.random.Generator) -> QubitAmplitudes:
    v = rng.normal(size=4)
    return QubitAmplitudes(complex(v[0], v[1]), complex(v[2], v[3]))


def expm_hermitian(h: np.ndarray, t: float) -> np.ndarray:
    """exp(-i h t) by eigendecomposition; independent of the closed forms."""
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T
