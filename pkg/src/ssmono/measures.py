"""Entanglement measures and inequality residuals for few-qubit pure states.

All logarithms are base 2; every entanglement value is in bits.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels, linalg

# residuals below this are genuine violations rather than roundoff
VIOLATION_THRESHOLD = -1e-7


def normalize_alpha(alpha) -> float:
    """Validate alpha >= 1; values within 1e-9 of 1 snap to exactly 1 (EoF branch)."""
    a = float(alpha)
    if not np.isfinite(a) or a < 1.0 - _kernels.ALPHA_ONE_TOL:
        raise ValueError(f"alpha must be a real number >= 1, got {alpha}")
    return 1.0 if _kernels.is_alpha_one(a) else a


@dataclass(frozen=True)
class PairingLayout:
    """Assignment of the four qubits to the roles a1, a2, b1, b2."""

    a1: int = 0
    a2: int = 1
    b1: int = 2
    b2: int = 3

    def __post_init__(self):
        roles = (self.a1, self.a2, self.b1, self.b2)
        if len(set(roles)) != 4 or any(not 0 <= int(q) < 4 for q in roles):
            raise ValueError(f"layout must name four distinct qubits in [0, 4): {roles}")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.a1, self.a2, self.b1, self.b2)


CANONICAL_LAYOUT = PairingLayout(0, 1, 2, 3)


@dataclass(frozen=True)
class ResidualReport:
    """Both residuals plus every constituent term for one state and one alpha."""

    alpha: float
    e_bipartite: float
    e_a1b1: float
    e_a2b2: float
    e_a1b2: float
    e_a2b1: float
    ss_residual: float
    monogamy_residual: float


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    C = max(0, l1 - l2 - l3 - l4) with li the descending square roots of the
    eigenvalues of rho @ rho~, rho~ the spin-flipped complex conjugate. The li
    are evaluated as singular values of W^T S W for a decomposition
    rho = W W^dagger, which gives the same values without the sqrt noise floor
    of the non-Hermitian eigenproblem (zero modes would otherwise surface at
    the 1e-8 scale and corrupt the subtraction).
    """
    m = linalg.as_density_matrix(rho)
    if m.shape != (4, 4):
        raise ValueError(f"concurrence needs a 4x4 density matrix, got shape {m.shape}")
    w, v = np.linalg.eigh(m)
    lam = _kernels.spin_flip_lambdas(v * np.sqrt(np.maximum(w, 0.0)))
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


def renyi_entropy(rho, alpha) -> float:
    """Renyi alpha-entropy in bits; alpha = 1 is the von Neumann branch."""
    a = normalize_alpha(alpha)
    w = linalg.hermitian_eigenvalues(rho)
    return float(_kernels.entropy_from_eigs_raw(w, a))


def renyi_from_concurrence(c, alpha) -> float:
    """The two-qubit measure as a function of concurrence.

    Renyi entropy of the pair (x, 1-x) with x = (1 + sqrt(1 - c^2))/2; the
    alpha = 1 branch is the binary entropy (EoF).
    """
    a = normalize_alpha(alpha)
    cf = float(c)
    if cf < -1e-12 or cf > 1.0 + 1e-12:
        raise ValueError(f"concurrence must lie in [0, 1], got {c}")
    return _kernels.renyi_from_c_scalar(min(1.0, max(0.0, cf)), a)


def pair_entanglement(psi, i: int, j: int, alpha) -> float:
    """Measure of the (i, j) two-qubit reduction of a pure state, in bits."""
    a = normalize_alpha(alpha)
    state = linalg.as_state(psi)
    n = linalg.n_qubits_of(state)
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"need two distinct qubit indices in [0, {n}), got ({i}, {j})")
    rho = linalg.partial_trace(state, tuple(sorted((i, j))))
    return renyi_from_concurrence(concurrence(rho), a)


def bipartite_pure_entanglement(psi, partition_a, alpha) -> float:
    """Renyi entropy of the reduction onto partition_a (pure-state convex roof)."""
    a = normalize_alpha(alpha)
    state = linalg.as_state(psi)
    n = linalg.n_qubits_of(state)
    mask = tuple(partition_a)
    if len(mask) >= n:
        raise ValueError("partition_a must be a proper subset of the qubits")
    return renyi_entropy(linalg.partial_trace(state, mask), a)


def residual_report(psi, layout: PairingLayout = CANONICAL_LAYOUT, alpha=2.0) -> ResidualReport:
    """Evaluate every term of the SS and second-order-monogamy inequalities."""
    a = normalize_alpha(alpha)
    state = linalg.as_state(psi)
    if linalg.n_qubits_of(state) != 4:
        raise ValueError("residuals are defined for 4-qubit states")
    eb, p11, p22, p12, p21 = _kernels.report_terms(state, layout.as_tuple(), a)
    ss = eb - p11 - p22
    mono = ss - p12 - p21
    return ResidualReport(
        alpha=a,
        e_bipartite=eb,
        e_a1b1=p11,
        e_a2b2=p22,
        e_a1b2=p12,
        e_a2b1=p21,
        ss_residual=ss,
        monogamy_residual=mono,
    )


def ss_residual(psi, layout: PairingLayout = CANONICAL_LAYOUT, alpha=2.0) -> ResidualReport:
    """Strong-superadditivity residual E(a1a2|b1b2) - E(a1b1) - E(a2b2).

    Negative ss_residual certifies an SS violation. Returns the full report.
    """
    return residual_report(psi, layout, alpha)


def monogamy2_residual(psi, layout: PairingLayout = CANONICAL_LAYOUT, alpha=2.0) -> ResidualReport:
    """Second-order monogamy residual: the bipartite term minus all four pair terms.

    Negative monogamy_residual certifies a violation. Returns the full report.
    """
    return residual_report(psi, layout, alpha)


def ckw_r2_residual(psi, focus: int = 0) -> float:
    """R2 monogamy residual of one qubit against the rest.

    Bipartite side: -log2((2 - C^2)/2) with C^2 = 2(1 - Tr rho_focus^2); pair
    side: the same curve on each pairwise concurrence. Expected >= 0 for all
    pure states.
    """
    state = linalg.as_state(psi)
    n = linalg.n_qubits_of(state)
    if n < 3:
        raise ValueError(f"need at least 3 qubits, got {n}")
    if not 0 <= focus < n:
        raise ValueError(f"focus qubit {focus} out of range for {n} qubits")
    return float(_kernels.batched_ckw_r2(state.reshape(1, -1), n, focus)[0])


def sum_inequality_residual(c_squared) -> float:
    """Residual of -log2((2 - sum v)/2) >= -sum log2((2 - v)/2) over v = C_i^2.

    Takes the vector of squared concurrences; admissible when every entry is
    in [0, 1] and the sum is at most 1. Expected >= 0.
    """
    v = np.asarray(c_squared, dtype=float).reshape(-1)
    if v.size == 0:
        raise ValueError("need at least one squared concurrence")
    if np.any(v < -1e-12) or np.any(v > 1.0 + 1e-12):
        raise ValueError("every squared concurrence must lie in [0, 1]")
    v = np.clip(v, 0.0, 1.0)
    total = float(np.sum(v))
    if total > 1.0 + 1e-9:
        raise ValueError(f"sum of squared concurrences must be <= 1, got {total}")
    return float(-np.log2(1.0 - 0.5 * min(total, 1.0)) + np.sum(np.log2(1.0 - 0.5 * v)))
