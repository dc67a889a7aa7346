"""Unitary reduction of a rank-one pair (A, B) to (diagonal L, nonneg-off-diag M).

Given Hermitian A of rank one and Hermitian B, builds a unitary W with

    W A W* = L = diag(0, ..., 0, lambda_n)
    W B W* = M,  M[j,k] = 0 for j < k < n,  M[j,n] = |gamma_j| >= 0.

The construction: a Householder reflection moves the range of A into the
last coordinate, the leading (n-1)-block of the transformed B is
diagonalized, and a diagonal phase matrix rotates the coupling column to
nonnegative reals.  The trace function of the pair is invariant throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, RankNotOne
from .hermitian import (
    HermitianMatrix,
    UnitaryMatrix,
    _freeze,
    eigh,
    max_abs,
)

RANK_TOL_FACTOR = 1e-9
PHASE_ZERO_TOL = 1e-13


@dataclass(frozen=True)
class RankOneCertificate:
    """The single nonzero eigenvalue of a rank-one Hermitian matrix and its unit eigenvector."""

    lambda_n: float
    direction: np.ndarray


@dataclass(frozen=True)
class ReductionTrace:
    """All intermediates of the reduction, kept for diagnostics and reports.

    U is the Householder corner diagonalizer; B_block, b_col, mu_n are the
    blocks of U B U*; V_block diagonalizes B_block to the diagonal M_block;
    g = V_block b_col; omegas are the unit phases with omega_j * g_j = |g_j|,
    assembled into the diagonal Omega; W_block = Omega V_block; g_abs = |g|.
    """

    U: UnitaryMatrix
    B_block: HermitianMatrix
    b_col: np.ndarray
    mu_n: float
    V_block: UnitaryMatrix
    M_block: np.ndarray
    g: np.ndarray
    omegas: np.ndarray
    Omega: UnitaryMatrix
    W_block: UnitaryMatrix
    g_abs: np.ndarray


@dataclass(frozen=True)
class ReductionResult:
    """The unitary W with W A W* = L, W B W* = M, plus the construction trace."""

    W: UnitaryMatrix
    L: HermitianMatrix
    M: HermitianMatrix
    trace: ReductionTrace


def assert_rank_one(a: HermitianMatrix, rank_tol: float | None = None) -> RankOneCertificate:
    """Certify that a has exactly one eigenvalue of magnitude above rank_tol.

    rank_tol defaults to 1e-9 * ||a||_max.  Raises RankNotOne (carrying the
    spectrum) when zero or several eigenvalues exceed the threshold.
    """
    if rank_tol is None:
        rank_tol = RANK_TOL_FACTOR * a.norm_max()
    dec = eigh(a)
    w = dec.eigenvalues
    big = np.flatnonzero(np.abs(w) > rank_tol)
    if big.size != 1:
        raise RankNotOne(
            f"expected exactly one eigenvalue with |lambda| > {rank_tol:.3e}, "
            f"found {big.size}: {w[big].tolist() if big.size else w.tolist()}",
            spectrum=w.copy(),
        )
    k = int(big[0])
    return RankOneCertificate(
        lambda_n=float(w[k]),
        direction=_freeze(dec.eigenvectors.mat[:, k].copy()),
    )


def corner_diagonalizer(cert: RankOneCertificate) -> UnitaryMatrix:
    """Householder reflection U mapping the certified direction to the last axis.

    U is Hermitian and unitary, and U A U* = diag(0, ..., 0, lambda_n) for
    A = lambda_n * v v*.  The reflection sends v to alpha*e_n with the unit
    phase alpha chosen to avoid cancellation.
    """
    v = cert.direction
    n = v.shape[0]
    e_last = np.zeros(n, dtype=complex)
    e_last[-1] = 1.0
    vn = v[-1]
    alpha = -vn / abs(vn) if abs(vn) > 0.0 else 1.0 + 0.0j
    w = v - alpha * e_last
    u = np.eye(n, dtype=complex) - 2.0 * np.outer(w, w.conj()) / np.vdot(w, w).real
    return UnitaryMatrix(_freeze(u))


def phase_matrix(g) -> tuple[np.ndarray, UnitaryMatrix]:
    """Unit phases omega_j with omega_j * g_j = |g_j|, and Omega = diag(omega).

    Components with |g_j| <= PHASE_ZERO_TOL are treated as zero and get
    omega_j = 1.
    """
    g = np.asarray(g, dtype=complex)
    omegas = np.ones(g.shape[0], dtype=complex)
    nz = np.abs(g) > PHASE_ZERO_TOL
    omegas[nz] = g[nz].conjugate() / np.abs(g[nz])
    return _freeze(omegas), UnitaryMatrix(_freeze(np.diag(omegas)))


def reduce(
    a: HermitianMatrix, b: HermitianMatrix, rank_tol: float | None = None
) -> ReductionResult:
    """Reduce the rank-one pair (a, b) to (diagonal L, nonneg-off-diag M).

    Steps: certify rank one and move the nonzero eigendirection of a into
    the corner; diagonalize the leading block of the transformed b; rotate
    the coupling column to nonnegative reals with diagonal phases; assemble
    W as the block unitary times the corner reflection.
    """
    if a.n != b.n:
        raise DimensionMismatch(f"operands are {a.n}x{a.n} and {b.n}x{b.n}")
    n = a.n

    cert = assert_rank_one(a, rank_tol)
    u = corner_diagonalizer(cert)
    b1 = u.mat @ b.mat @ u.mat.conj().T
    b1 = (b1 + b1.conj().T) / 2.0

    b_block = HermitianMatrix(_freeze(b1[: n - 1, : n - 1].copy()))
    b_col = b1[: n - 1, n - 1].copy()
    mu_n = float(b1[n - 1, n - 1].real)

    dec = eigh(b_block)
    mus = dec.eigenvalues
    # eigh returns columns; the diagonalizing map is its conjugate transpose.
    v_block = dec.eigenvectors.mat.conj().T

    g = v_block @ b_col
    omegas, omega = phase_matrix(g)
    g_abs = np.abs(g)
    w_block = omega.mat @ v_block

    w_full = np.zeros((n, n), dtype=complex)
    w_full[: n - 1, : n - 1] = w_block
    w_full[n - 1, n - 1] = 1.0
    w_full = w_full @ u.mat

    l_mat = np.zeros((n, n), dtype=complex)
    l_mat[n - 1, n - 1] = cert.lambda_n

    m_mat = np.zeros((n, n), dtype=complex)
    m_mat[: n - 1, : n - 1] = np.diag(mus)
    m_mat[: n - 1, n - 1] = g_abs
    m_mat[n - 1, : n - 1] = g_abs
    m_mat[n - 1, n - 1] = mu_n

    trace = ReductionTrace(
        U=u,
        B_block=b_block,
        b_col=_freeze(b_col),
        mu_n=mu_n,
        V_block=UnitaryMatrix(_freeze(v_block)),
        M_block=_freeze(mus.copy()),
        g=_freeze(g),
        omegas=omegas,
        Omega=omega,
        W_block=UnitaryMatrix(_freeze(w_block)),
        g_abs=_freeze(g_abs),
    )
    return ReductionResult(
        W=UnitaryMatrix(_freeze(w_full)),
        L=HermitianMatrix(_freeze(l_mat)),
        M=HermitianMatrix(_freeze(m_mat)),
        trace=trace,
    )


def reduction_residuals(a: HermitianMatrix, b: HermitianMatrix, result: ReductionResult) -> tuple[float, float]:
    """Max-norm residuals (||W A W* - L||, ||W B W* - M||) of a reduction."""
    w = result.W.mat
    ra = max_abs(w @ a.mat @ w.conj().T - result.L.mat)
    rb = max_abs(w @ b.mat @ w.conj().T - result.M.mat)
    return ra, rb
