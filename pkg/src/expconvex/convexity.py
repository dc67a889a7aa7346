"""Gram-matrix positive-semidefiniteness machinery for exponential convexity.

A function f on the reals is exponentially convex when every kernel matrix
[f(t_r + t_s)] over a finite grid is positive semidefinite.  This module
builds those Gram matrices, tests them with an eigenvalue-based PSD check
that returns a witness vector on failure, checks the midpoint inequality
f(t1+t2) <= sqrt(f(2 t1) f(2 t2)) and the zero-or-positive dichotomy, and
provides the closure combinators (nonnegative scaling, sum, product).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    DichotomyViolated,
    EvaluationFailure,
    HypothesisViolated,
    NegativeScale,
)
from .hermitian import (
    HermitianMatrix,
    _freeze,
    matrix_exp_hermitian,
    max_abs,
)

DEFAULT_PSD_TOL = 1e-8
ZERO_FUNCTION_TOL = 1e-14


@dataclass(frozen=True)
class ScalarFunction:
    """A labelled real function of a real variable; evaluation must be deterministic."""

    fn: Callable[[float], float]
    label: str

    def __call__(self, t: float) -> float:
        return float(self.fn(t))


@dataclass(frozen=True)
class TGrid:
    """A strictly increasing finite grid of real evaluation points."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 1:
            raise ValueError(f"grid must be a nonempty 1-d sequence, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("grid contains non-finite points")
        if pts.size > 1 and not np.all(np.diff(pts) > 0):
            raise ValueError("grid points must be strictly increasing")
        object.__setattr__(self, "points", _freeze(pts))

    @property
    def n(self) -> int:
        return self.points.size

    @staticmethod
    def equispaced(lo: float, hi: float, n: int) -> "TGrid":
        if n == 1:
            return TGrid(np.array([lo], dtype=float))
        return TGrid(np.linspace(lo, hi, n))


def default_grid() -> TGrid:
    """Eight equispaced points on [-2, 2]."""
    return TGrid.equispaced(-2.0, 2.0, 8)


@dataclass(frozen=True)
class GramMatrix:
    """The symmetric kernel matrix G[r, s] = f(t_r + t_s) over a grid."""

    matrix: np.ndarray
    grid: TGrid
    label: str


@dataclass(frozen=True)
class ECReport:
    """PSD verdict for a Gram matrix.

    On failure the witness is the coefficient vector attaining the minimal
    quadratic form, a genuine violation certificate: xi* G xi equals
    min_eigenvalue below -tolerance.  tolerance is the absolute threshold
    actually used.
    """

    passed: bool
    min_eigenvalue: float
    witness: np.ndarray
    tolerance: float


@dataclass(frozen=True)
class MidpointReport:
    holds: bool
    lhs: float
    rhs: float


@dataclass(frozen=True)
class DichotomyReport:
    all_zero: bool
    all_positive: bool


def gram(f: ScalarFunction, grid: TGrid) -> GramMatrix:
    """Evaluate G[r, s] = f(t_r + t_s), each unordered pair once."""
    pts = grid.points
    n = pts.size
    g = np.zeros((n, n), dtype=float)
    for r in range(n):
        for s in range(r, n):
            t = float(pts[r] + pts[s])
            val = f(t)
            if not math.isfinite(val):
                raise EvaluationFailure(f"{f.label} returned {val} at t = {t}")
            g[r, s] = val
            g[s, r] = val
    return GramMatrix(matrix=_freeze(g), grid=grid, label=f.label)


def psd_check(g: GramMatrix, tol: float = DEFAULT_PSD_TOL) -> ECReport:
    """Eigenvalue-based PSD test with witness.

    Passes iff the minimal eigenvalue is >= -tol * max(1, ||G||_max); the
    witness is the corresponding unit eigenvector.  Full eigendecomposition
    rather than Cholesky so a failure always carries its certificate.
    """
    w, v = np.linalg.eigh(g.matrix)
    abs_tol = tol * max(1.0, max_abs(g.matrix))
    min_eig = float(w[0])
    witness = v[:, 0].copy()
    return ECReport(
        passed=bool(min_eig >= -abs_tol),
        min_eigenvalue=min_eig,
        witness=_freeze(witness),
        tolerance=abs_tol,
    )


def check_exponential_convexity(
    f: ScalarFunction, grid: TGrid, tol: float = DEFAULT_PSD_TOL
) -> ECReport:
    """Gram construction followed by the PSD check."""
    return psd_check(gram(f, grid), tol)


def midpoint_inequality_check(f: ScalarFunction, t1: float, t2: float) -> MidpointReport:
    """Check f(t1+t2) <= sqrt(f(2 t1) f(2 t2)), the 2x2 minor inequality."""
    lhs = f(t1 + t2)
    p1, p2 = f(2.0 * t1), f(2.0 * t2)
    for val, t in ((lhs, t1 + t2), (p1, 2.0 * t1), (p2, 2.0 * t2)):
        if not math.isfinite(val):
            raise EvaluationFailure(f"{f.label} returned {val} at t = {t}")
    prod = p1 * p2
    if prod < 0.0:
        raise EvaluationFailure(
            f"{f.label} takes opposite signs at 2*t1, 2*t2; sqrt undefined"
        )
    rhs = math.sqrt(prod)
    return MidpointReport(holds=bool(lhs <= rhs * (1.0 + 1e-12)), lhs=lhs, rhs=rhs)


def dichotomy_check(f: ScalarFunction, grid: TGrid) -> DichotomyReport:
    """On the grid, f must be identically ~0 or everywhere positive.

    Anything else raises DichotomyViolated: for an exponentially convex
    function the alternative is exact, so a mixed sample signals either
    numerical failure or a non-EC input.
    """
    vals = np.array([f(t) for t in grid.points])
    if not np.all(np.isfinite(vals)):
        raise EvaluationFailure(f"{f.label} non-finite on grid")
    all_zero = bool(np.all(np.abs(vals) <= ZERO_FUNCTION_TOL))
    all_positive = bool(np.all(vals > 0.0))
    if not (all_zero or all_positive):
        raise DichotomyViolated(
            f"{f.label} is neither identically zero nor everywhere positive on the grid "
            f"(min {vals.min():.6g}, max {vals.max():.6g})"
        )
    return DichotomyReport(all_zero=all_zero, all_positive=all_positive)


def ec_scale(f: ScalarFunction, c: float) -> ScalarFunction:
    """c * f for c >= 0; preserves exponential convexity."""
    if c < 0.0:
        raise NegativeScale(f"scale constant must be nonnegative, got {c}")
    return ScalarFunction(fn=lambda t: c * f(t), label=f"scale({c:g},{f.label})")


def ec_sum(f1: ScalarFunction, f2: ScalarFunction) -> ScalarFunction:
    """Pointwise sum; preserves exponential convexity."""
    return ScalarFunction(fn=lambda t: f1(t) + f2(t), label=f"sum({f1.label},{f2.label})")


def ec_product(f1: ScalarFunction, f2: ScalarFunction) -> ScalarFunction:
    """Pointwise product; preserves exponential convexity."""
    return ScalarFunction(fn=lambda t: f1(t) * f2(t), label=f"product({f1.label},{f2.label})")


def exp_function(mu: float) -> ScalarFunction:
    """The elementary exponentially convex function t -> e^{t mu}."""
    return ScalarFunction(fn=lambda t: math.exp(t * mu), label=f"exp({mu:g}t)")


def zero_function() -> ScalarFunction:
    return ScalarFunction(fn=lambda t: 0.0, label="zero")


@dataclass(frozen=True)
class EntrywiseECResult:
    """Per-entry PSD reports for the matrix function t -> e^{Lt + M}.

    reports[j][k] checks Re(e^{Lt+M})_{jk}; max_imag is the largest
    imaginary part seen on the grid, which must stay below the tolerance
    for the real-part extraction to be sound.
    """

    reports: tuple
    max_imag: float
    imag_tol: float

    @property
    def all_passed(self) -> bool:
        return self.max_imag <= self.imag_tol and all(
            r.passed for row in self.reports for r in row
        )


def _check_entrywise_hypothesis(l: HermitianMatrix, m: HermitianMatrix, tol: float = 1e-12) -> None:
    off = ~np.eye(l.n, dtype=bool)
    if max_abs(l.mat[off]) > tol:
        raise HypothesisViolated("first matrix must be diagonal")
    bad = off & ((m.mat.real < -tol) | (np.abs(m.mat.imag) > tol))
    if np.any(bad):
        j, k = np.argwhere(bad)[0]
        raise HypothesisViolated(
            f"off-diagonal entry ({j},{k}) = {m.mat[j, k]:.6g} of the second matrix "
            "is not a nonnegative real"
        )


def entrywise_ec_check(
    l: HermitianMatrix,
    m: HermitianMatrix,
    grid: TGrid,
    tol: float = DEFAULT_PSD_TOL,
    imag_tol: float = 1e-10,
) -> EntrywiseECResult:
    """PSD-check every entry of t -> e^{Lt + M} as a function of t.

    Requires l diagonal and m with nonnegative real off-diagonal entries;
    under that hypothesis every entry is exponentially convex.  The matrix
    exponential is evaluated once per distinct grid sum and shared across
    entries.
    """
    if l.n != m.n:
        raise HypothesisViolated(f"operands are {l.n}x{l.n} and {m.n}x{m.n}")
    _check_entrywise_hypothesis(l, m)
    n = l.n
    pts = grid.points
    ng = pts.size

    def exp_at(t: float) -> np.ndarray:
        h = t * l.mat + m.mat
        return matrix_exp_hermitian(HermitianMatrix((h + h.conj().T) / 2.0))

    sums = np.zeros((ng, ng, n, n), dtype=complex)
    for r in range(ng):
        for s in range(r, ng):
            e = exp_at(float(pts[r] + pts[s]))
            sums[r, s] = e
            sums[s, r] = e

    max_imag = max(max_abs(exp_at(float(t)).imag) for t in pts)

    reports = []
    for j in range(n):
        row = []
        for k in range(n):
            gm = GramMatrix(
                matrix=_freeze(np.ascontiguousarray(sums[:, :, j, k].real)),
                grid=grid,
                label=f"entry({j},{k})",
            )
            row.append(psd_check(gm, tol))
        reports.append(tuple(row))
    return EntrywiseECResult(reports=tuple(reports), max_imag=float(max_imag), imag_tol=imag_tol)
