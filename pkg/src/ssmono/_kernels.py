"""Numeric kernels shared by the public measures, the search loop, and the scanner.

Everything here operates on raw, already-validated amplitude arrays. The search
hot loop and the public residual reports call the exact same functions in the
exact same order, so the objective value driving an acceptance is bit-identical
to the value stored in the trace.
"""
from __future__ import annotations

import math

import numpy as np

LN2 = float(np.log(2.0))
ALPHA_ONE_TOL = 1e-9

# sigma_y (x) sigma_y written out: antidiagonal (-1, 1, 1, -1)
SPIN_FLIP = np.array(
    [
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
    ]
)


def is_alpha_one(alpha: float) -> bool:
    return abs(alpha - 1.0) < ALPHA_ONE_TOL


def renyi_from_c_raw(c, alpha: float):
    """Measure value for concurrence c: Renyi entropy of (x, 1-x), x=(1+sqrt(1-c^2))/2.

    Vectorized over c. Assumes alpha >= 1 and c already clipped to [0, 1].
    """
    c = np.asarray(c, dtype=float)
    if alpha == 2.0:
        return -np.log2(1.0 - 0.5 * c * c) + 0.0  # x^2 + (1-x)^2 = 1 - c^2/2
    u = np.sqrt(np.maximum(0.0, 1.0 - c * c))
    y = c * c / (2.0 * (1.0 + u))  # (1 - u)/2 without cancellation for small c
    x = 1.0 - y
    if is_alpha_one(alpha):
        with np.errstate(divide="ignore", invalid="ignore"):
            hy = np.where(y > 0.0, y * np.log2(y), 0.0)
        return -(x * np.log2(x)) - hy + 0.0
    # x^a + y^a - 1 via expm1 stays accurate as alpha -> 1
    with np.errstate(divide="ignore", invalid="ignore"):
        s = x * np.expm1((alpha - 1.0) * np.log(x))
        s = s + np.where(y > 0.0, y * np.expm1((alpha - 1.0) * np.log(y)), 0.0)
    return np.log1p(s) / ((1.0 - alpha) * LN2) + 0.0


def renyi_from_c_scalar(c: float, alpha: float) -> float:
    """Scalar twin of renyi_from_c_raw; plain math avoids ufunc overhead in the
    search hot loop."""
    if alpha == 2.0:
        return -math.log2(1.0 - 0.5 * c * c) + 0.0
    u = math.sqrt(max(0.0, 1.0 - c * c))
    y = c * c / (2.0 * (1.0 + u))
    x = 1.0 - y
    if is_alpha_one(alpha):
        hy = y * math.log2(y) if y > 0.0 else 0.0
        return -(x * math.log2(x)) - hy + 0.0
    s = x * math.expm1((alpha - 1.0) * math.log(x))
    if y > 0.0:
        s += y * math.expm1((alpha - 1.0) * math.log(y))
    return math.log1p(s) / ((1.0 - alpha) * LN2) + 0.0


def entropy_from_eigs_scalar(w, alpha: float) -> float:
    """Scalar twin of entropy_from_eigs_raw for one small eigenvalue set."""
    if is_alpha_one(alpha):
        total = 0.0
        for x in w:
            if x > 0.0:
                total -= x * math.log2(x)
        return total + 0.0
    s = 0.0
    for x in w:
        if x > 0.0:
            s += x * math.expm1((alpha - 1.0) * math.log(x))
    return math.log1p(s) / ((1.0 - alpha) * LN2) + 0.0


def entropy_from_eigs_raw(w, alpha: float):
    """Renyi entropy in bits from eigenvalue rows (vectorized, assumes w >= 0)."""
    w = np.asarray(w, dtype=float)
    if is_alpha_one(alpha):
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(w > 0.0, w * np.log2(w), 0.0)
        return -np.sum(terms, axis=-1) + 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(w > 0.0, w * np.expm1((alpha - 1.0) * np.log(w)), 0.0)
    return np.log1p(np.sum(terms, axis=-1)) / ((1.0 - alpha) * LN2) + 0.0


def _pair_perm(i: int, j: int) -> tuple[int, ...]:
    rest = [q for q in range(4) if q not in (i, j)]
    return (i, j, rest[0], rest[1])


def pair_block(amps: np.ndarray, i: int, j: int) -> np.ndarray:
    """4x4 amplitude block with qubits (i, j) as the row index."""
    return amps.reshape(2, 2, 2, 2).transpose(_pair_perm(i, j)).reshape(4, 4)


def spin_flip_lambdas(block: np.ndarray) -> np.ndarray:
    """Wootters lambdas of rho = B B^dagger, descending.

    They are the singular values of B^T S B (S the spin flip), which equal the
    square roots of the eigenvalues of rho rho~ on the nonzero part.
    """
    tau = block.T @ (SPIN_FLIP @ block)
    return np.linalg.svd(tau, compute_uv=False)


def pair_term(amps: np.ndarray, i: int, j: int, alpha: float) -> float:
    """Entanglement of the (i, j) reduction of a pure 4-qubit state, in bits."""
    lam = spin_flip_lambdas(pair_block(amps, i, j))
    c = lam[0] - lam[1] - lam[2] - lam[3]
    if c <= 0.0:
        return 0.0
    return renyi_from_c_scalar(min(float(c), 1.0), alpha)


def bipartite_term(amps: np.ndarray, a1: int, a2: int, b1: int, b2: int, alpha: float) -> float:
    """Renyi entropy of the (a1, a2) reduction of a pure 4-qubit state, in bits."""
    block = amps.reshape(2, 2, 2, 2).transpose(a1, a2, b1, b2).reshape(4, 4)
    rho = block @ block.conj().T
    if alpha == 2.0:
        return -math.log2(np.vdot(rho, rho).real) + 0.0
    w = np.linalg.eigvalsh(rho)
    return entropy_from_eigs_scalar((max(float(w[0]), 0.0), max(float(w[1]), 0.0), max(float(w[2]), 0.0), max(float(w[3]), 0.0)), alpha)


def ss_value(amps: np.ndarray, layout, alpha: float) -> float:
    a1, a2, b1, b2 = layout
    eb = bipartite_term(amps, a1, a2, b1, b2, alpha)
    return eb - pair_term(amps, a1, b1, alpha) - pair_term(amps, a2, b2, alpha)


def monogamy_value(amps: np.ndarray, layout, alpha: float) -> float:
    a1, a2, b1, b2 = layout
    return (
        ss_value(amps, layout, alpha)
        - pair_term(amps, a1, b2, alpha)
        - pair_term(amps, a2, b1, alpha)
    )


def report_terms(amps: np.ndarray, layout, alpha: float) -> tuple[float, float, float, float, float]:
    """(e_bipartite, e_a1b1, e_a2b2, e_a1b2, e_a2b1) for one 4-qubit state."""
    a1, a2, b1, b2 = layout
    eb = bipartite_term(amps, a1, a2, b1, b2, alpha)
    return (
        eb,
        pair_term(amps, a1, b1, alpha),
        pair_term(amps, a2, b2, alpha),
        pair_term(amps, a1, b2, alpha),
        pair_term(amps, a2, b1, alpha),
    )


# ---------------------------------------------------------------------------
# batched evaluation (used by the Haar scanner and the verifiers)

def _batched_pair_concurrence(blocks: np.ndarray) -> np.ndarray:
    """Concurrence per row for (m, 4, 4) pure-state pair blocks."""
    tau = np.matmul(blocks.transpose(0, 2, 1), np.matmul(SPIN_FLIP, blocks))
    lam = np.linalg.svd(tau, compute_uv=False)  # descending per row
    return np.maximum(0.0, lam[:, 0] - lam[:, 1] - lam[:, 2] - lam[:, 3])


def batched_ss(states: np.ndarray, layout, alpha: float) -> np.ndarray:
    """ss residual for each row of (m, 16) normalized amplitudes."""
    a1, a2, b1, b2 = layout
    t = states.reshape(-1, 2, 2, 2, 2)
    blocks = t.transpose(0, a1 + 1, a2 + 1, b1 + 1, b2 + 1).reshape(-1, 4, 4)
    rho = np.matmul(blocks, blocks.conj().transpose(0, 2, 1))
    if alpha == 2.0:
        purity = np.sum(np.abs(rho) ** 2, axis=(1, 2))
        e_bip = -np.log2(purity)
    else:
        w = np.maximum(np.linalg.eigvalsh(rho), 0.0)
        e_bip = entropy_from_eigs_raw(w, alpha)
    for i, j in ((a1, b1), (a2, b2)):
        pb = t.transpose((0,) + tuple(q + 1 for q in _pair_perm(i, j))).reshape(-1, 4, 4)
        c = _batched_pair_concurrence(pb)
        e_bip = e_bip - renyi_from_c_raw(np.minimum(c, 1.0), alpha)
    return e_bip


def batched_ckw_r2(states: np.ndarray, n_qubits: int, focus: int = 0) -> np.ndarray:
    """CKW-style R2 monogamy residual per row of (m, 2^n) amplitudes.

    Bipartite side uses C^2(focus|rest) = 2(1 - Tr rho_focus^2); the pair side
    uses the spin-flip lambdas of each two-qubit reduction, computed as
    singular values of W^T S W from an eigendecomposition factor W so the
    zero modes stay at machine scale instead of sqrt(eps).
    """
    m = states.shape[0]
    others = [q for q in range(n_qubits) if q != focus]
    t = states.reshape((m,) + (2,) * n_qubits)
    a = t.transpose((0, focus + 1) + tuple(q + 1 for q in others)).reshape(m, 2, -1)
    rho0 = np.matmul(a, a.conj().transpose(0, 2, 1))
    purity = np.sum(np.abs(rho0) ** 2, axis=(1, 2))
    c2_total = np.maximum(0.0, 2.0 * (1.0 - purity))
    residual = -np.log2(1.0 - 0.5 * c2_total)
    for i in others:
        rest = [q for q in range(n_qubits) if q not in (focus, i)]
        perm = (0, focus + 1, i + 1) + tuple(q + 1 for q in rest)
        k = t.transpose(perm).reshape(m, 4, -1)
        rho = np.matmul(k, k.conj().transpose(0, 2, 1))
        w, v = np.linalg.eigh(rho)
        wfac = v * np.sqrt(np.maximum(w, 0.0))[:, None, :]
        tau = np.matmul(wfac.transpose(0, 2, 1), np.matmul(SPIN_FLIP, wfac))
        lam = np.linalg.svd(tau, compute_uv=False)
        c = np.maximum(0.0, lam[:, 0] - lam[:, 1] - lam[:, 2] - lam[:, 3])
        residual = residual + np.log2(1.0 - 0.5 * c * c)
    return residual
