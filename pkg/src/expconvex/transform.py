"""Trace functions, bilateral Laplace transforms, and measure recovery.

The central object is the trace function t -> tr e^{tA + B} of a Hermitian
pair.  For commuting pairs it is the exact Laplace transform of an atomic
measure supported on the spectrum of A; in general a nonnegative atomic
measure is fitted on a discretized support by nonnegative least squares.
Growth exponents of the trace function estimate the support endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import nnls

from .convexity import ScalarFunction, TGrid
from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    IllConditioned,
    NotCommuting,
    Overflow,
)
from .hermitian import (
    EXP_OVERFLOW_LIMIT,
    HermitianMatrix,
    _freeze,
    eigh,
    lie_product_approx,
    max_abs,
)

COMM_TOL = 1e-10
ATOM_MERGE_TOL = 1e-9


@dataclass(frozen=True)
class TracePair:
    """A Hermitian pair (A, B) of equal dimension."""

    A: HermitianMatrix
    B: HermitianMatrix

    def __post_init__(self):
        if self.A.n != self.B.n:
            raise DimensionMismatch(
                f"A is {self.A.n}x{self.A.n}, B is {self.B.n}x{self.B.n}"
            )

    @property
    def n(self) -> int:
        return self.A.n


@dataclass(frozen=True)
class AtomicMeasure:
    """A finite nonnegative atomic measure with strictly increasing locations."""

    locations: np.ndarray
    weights: np.ndarray

    @property
    def atoms(self) -> tuple:
        return tuple(zip(self.locations.tolist(), self.weights.tolist()))

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum()) if self.weights.size else 0.0

    @staticmethod
    def from_atoms(pairs, merge_tol: float = ATOM_MERGE_TOL) -> "AtomicMeasure":
        """Build a measure from (location, weight) pairs.

        Locations within merge_tol are merged by weight addition; negative
        weights are rejected.
        """
        pairs = sorted((float(l), float(w)) for l, w in pairs)
        locs: list[float] = []
        wts: list[float] = []
        for loc, w in pairs:
            if not (math.isfinite(loc) and math.isfinite(w)):
                raise ValueError(f"non-finite atom ({loc}, {w})")
            if w < 0.0:
                raise ValueError(f"negative weight {w} at location {loc}")
            if locs and loc - locs[-1] <= merge_tol:
                wts[-1] += w
            else:
                locs.append(loc)
                wts.append(w)
        return AtomicMeasure(
            locations=_freeze(np.array(locs, dtype=float)),
            weights=_freeze(np.array(wts, dtype=float)),
        )


@dataclass(frozen=True)
class SupportEstimate:
    """Log-slope estimates of the support endpoints against the spectrum of A."""

    lambda_min_est: float
    lambda_max_est: float
    lambda_min_true: float
    lambda_max_true: float


@dataclass(frozen=True)
class MeasureFit:
    """A fitted measure with its training residual and holdout error."""

    measure: AtomicMeasure
    grid_resolution: int
    training_residual: float
    holdout_error: float


def trace_f(pair: TracePair, t: float) -> float:
    """tr e^{tA + B}: the sum of exponentiated eigenvalues of tA + B."""
    h = t * pair.A.mat + pair.B.mat
    try:
        w = np.linalg.eigvalsh((h + h.conj().T) / 2.0)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigensolver failed: {exc}") from exc
    if w.size and float(w[-1]) > EXP_OVERFLOW_LIMIT:
        raise Overflow(
            f"largest eigenvalue {w[-1]:.2f} of t*A + B exceeds exp range at t = {t}"
        )
    return float(np.sum(np.exp(w)))


def trace_function(pair: TracePair) -> ScalarFunction:
    """The trace function of a pair as a labelled scalar function."""
    return ScalarFunction(fn=lambda t: trace_f(pair, t), label=f"trace(n={pair.n})")


def sample_trace_f(pair: TracePair, grid: TGrid) -> list[tuple[float, float]]:
    """Evaluate the trace function on a grid, preserving order."""
    return [(float(t), trace_f(pair, float(t))) for t in grid.points]


def laplace_transform(measure: AtomicMeasure, t: float) -> float:
    """Two-sided Laplace transform sum_j w_j e^{t lambda_j} at a single point."""
    if measure.locations.size == 0:
        return 0.0
    exponents = t * measure.locations
    live = measure.weights > 0.0
    if np.any(exponents[live] > EXP_OVERFLOW_LIMIT):
        raise Overflow(f"transform overflows at t = {t}")
    return float(np.sum(measure.weights * np.exp(np.minimum(exponents, EXP_OVERFLOW_LIMIT))))


def laplace_function(measure: AtomicMeasure) -> ScalarFunction:
    return ScalarFunction(
        fn=lambda t: laplace_transform(measure, t),
        label=f"laplace({measure.locations.size} atoms)",
    )


def lie_trace_function(l: HermitianMatrix, m: HermitianMatrix, p: int) -> ScalarFunction:
    """The split-step trace t -> tr (e^{Lt/p} e^{M/p})^p, converging to trace(L, M)."""

    def f(t: float) -> float:
        approx = lie_product_approx(HermitianMatrix(t * l.mat), m, p)
        return float(np.trace(approx.value).real)

    return ScalarFunction(fn=f, label=f"lie_trace(p={p})")


def commuting_measure(pair: TracePair, comm_tol: float = COMM_TOL) -> AtomicMeasure:
    """Exact atomic measure for a commuting pair.

    In a common eigenbasis with A-eigenvalues lambda_i and B-values mu_i the
    measure has atoms (lambda_i, e^{mu_i}), merged over coinciding
    locations.  Raises NotCommuting when ||AB - BA||_max exceeds
    comm_tol * max(1, ||A||_max ||B||_max).
    """
    a, b = pair.A.mat, pair.B.mat
    comm = max_abs(a @ b - b @ a)
    scale = max(1.0, pair.A.norm_max() * pair.B.norm_max())
    if comm > comm_tol * scale:
        raise NotCommuting(
            f"||AB - BA||_max = {comm:.3e} exceeds {comm_tol * scale:.3e}"
        )

    dec = eigh(pair.A)
    w = dec.eigenvalues
    v = dec.eigenvectors.mat.copy()

    # Within each eigenspace of A, rotate to diagonalize the projection of B.
    group_tol = ATOM_MERGE_TOL * max(1.0, pair.A.norm_max())
    start = 0
    n = pair.n
    while start < n:
        stop = start + 1
        while stop < n and w[stop] - w[start] <= group_tol:
            stop += 1
        if stop - start > 1:
            vg = v[:, start:stop]
            sub = vg.conj().T @ b @ vg
            _, q = np.linalg.eigh((sub + sub.conj().T) / 2.0)
            v[:, start:stop] = vg @ q
        start = stop

    mus = np.real(np.einsum("ij,jk,ki->i", v.conj().T, b, v))
    if np.any(mus > EXP_OVERFLOW_LIMIT):
        raise Overflow("diagonal value of B exceeds exp range")
    return AtomicMeasure.from_atoms(zip(w.tolist(), np.exp(mus).tolist()))


def growth_exponents(pair: TracePair, t_far: float | None = None) -> SupportEstimate:
    """Two-point log-slope estimates of the extreme eigenvalues of A.

    lambda_max_est = [log f(2 t_far) - log f(t_far)] / t_far, and
    symmetrically at -t_far for the minimum.  Default t_far = 40/||A||_max,
    far enough that the dominant eigenvalue carries the slope.
    """
    if t_far is None:
        norm = pair.A.norm_max()
        t_far = 40.0 / norm if norm > 0.0 else 1.0
    if t_far <= 0.0:
        raise ValueError(f"t_far must be positive, got {t_far}")

    def log_f(t: float) -> float:
        return math.log(trace_f(pair, t))

    est_max = (log_f(2.0 * t_far) - log_f(t_far)) / t_far
    est_min = (log_f(-t_far) - log_f(-2.0 * t_far)) / t_far
    w = eigh(pair.A).eigenvalues
    return SupportEstimate(
        lambda_min_est=float(est_min),
        lambda_max_est=float(est_max),
        lambda_min_true=float(w[0]),
        lambda_max_true=float(w[-1]),
    )


def fit_measure(
    samples,
    support: tuple[float, float],
    grid_resolution: int,
    reg: float = 1e-10,
) -> MeasureFit:
    """Fit a nonnegative atomic measure to samples of a transform.

    Candidate atoms sit equispaced on [support[0], support[1]]; weights
    solve min ||E w - f||^2 + reg ||w||^2 subject to w >= 0 with
    E[k][j] = e^{t_k lambda_j}, via deterministic active-set NNLS on the
    ridge-augmented system.  Every third sample is withheld and scored as
    the relative holdout error.
    """
    samples = [(float(t), float(f)) for t, f in samples]
    lo, hi = float(support[0]), float(support[1])
    if not lo < hi:
        raise ValueError(f"support must satisfy lo < hi, got [{lo}, {hi}]")
    if grid_resolution < 1:
        raise ValueError(f"grid_resolution must be positive, got {grid_resolution}")
    if len(samples) < grid_resolution / 4:
        raise ValueError(
            f"need at least grid_resolution/4 = {grid_resolution / 4:.1f} samples, "
            f"got {len(samples)}"
        )
    if reg < 0.0:
        raise ValueError(f"reg must be nonnegative, got {reg}")

    ts = np.array([t for t, _ in samples])
    fs = np.array([f for _, f in samples])
    hold = np.arange(len(samples)) % 3 == 2
    t_train, f_train = ts[~hold], fs[~hold]
    t_hold, f_hold = ts[hold], fs[hold]

    locs = np.linspace(lo, hi, grid_resolution)
    # overflow here is diagnosed below, not a numpy warning condition
    with np.errstate(over="ignore"):
        design = np.exp(np.outer(t_train, locs))
    if not np.all(np.isfinite(design)):
        raise IllConditioned("design matrix overflows double precision")

    if reg > 0.0:
        a_aug = np.vstack([design, math.sqrt(reg) * np.eye(grid_resolution)])
        b_aug = np.concatenate([f_train, np.zeros(grid_resolution)])
    else:
        a_aug, b_aug = design, f_train
    try:
        weights, _ = nnls(a_aug, b_aug)
    except (RuntimeError, np.linalg.LinAlgError) as exc:
        raise IllConditioned(f"NNLS solver failed: {exc}") from exc
    if not np.all(np.isfinite(weights)):
        raise IllConditioned("NNLS produced non-finite weights")

    training_residual = float(np.linalg.norm(design @ weights - f_train))
    if t_hold.size:
        pred = np.exp(np.outer(t_hold, locs)) @ weights
        denom = np.where(np.abs(f_hold) > 0.0, np.abs(f_hold), 1.0)
        holdout_error = float(np.max(np.abs(pred - f_hold) / denom))
    else:
        holdout_error = 0.0

    live = weights > 0.0
    measure = AtomicMeasure.from_atoms(zip(locs[live].tolist(), weights[live].tolist()))
    return MeasureFit(
        measure=measure,
        grid_resolution=grid_resolution,
        training_residual=training_residual,
        holdout_error=holdout_error,
    )
