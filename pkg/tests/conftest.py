"""Shared state constructors for the test suite.

Qubit 0 is the most significant bit of the basis index throughout.
"""

import numpy as np


def bell_pair() -> np.ndarray:
    return np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)


def bell_product() -> np.ndarray:
    """Bell pairs on qubits (0, 2) and (1, 3).

    Amplitude 1/2 wherever q0 = q2 and q1 = q3, i.e. indices 0, 5, 10, 15.
    """
    psi = np.zeros(16, dtype=complex)
    psi[[0, 5, 10, 15]] = 0.5
    return psi


def ghz_state(n: int) -> np.ndarray:
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = psi[-1] = np.sqrt(0.5)
    return psi


def w_state(n: int) -> np.ndarray:
    psi = np.zeros(2**n, dtype=complex)
    for k in range(n):
        psi[1 << k] = 1.0
    return psi / np.sqrt(n)


def random_state(rng: np.random.Generator, n_qubits: int) -> np.ndarray:
    z = rng.standard_normal(2**n_qubits) + 1j * rng.standard_normal(2**n_qubits)
    return z / np.linalg.norm(z)


def random_density(rng: np.random.Generator, dim: int, rank: int) -> np.ndarray:
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
