"""Seeded random-ensemble verification of the whole pipeline.

Each case draws a rank-one Hermitian A and a dense Hermitian B from a fixed
documented law, runs the reduction, trace-invariance, Gram, Lie-ratio,
commuting round-trip, and growth-exponent checks, and emits one record per
check.  Case seeds derive from (master seed, case index), so reports are
deterministic and order-independent.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .convexity import TGrid, check_exponential_convexity, default_grid
from .errors import ExpConvexError
from .hermitian import HermitianMatrix, lie_product_approx, validate_hermitian
from .reduction import reduce, reduction_residuals
from .transform import (
    TracePair,
    commuting_measure,
    growth_exponents,
    laplace_transform,
    trace_f,
    trace_function,
)

ENSEMBLE_LAW = (
    "A = lambda v v* with lambda uniform on [-3, 3] resampled until |lambda| >= 0.1 "
    "and v a normalized complex Gaussian vector; B = (G + G*)/2 with G an n x n "
    "standard complex Gaussian; n uniform on {2, ..., max_n}; "
    "case rng = default_rng([seed, case_index])"
)

RESIDUAL_TOL = 1e-10
OFFDIAG_TOL = 1e-12
TRACE_INV_TOL = 1e-9
GRAM_TOL = 1e-8
LIE_RATIO_LIMIT = 0.75
ROUNDTRIP_TOL = 1e-10
GROWTH_TOL = 0.05


@dataclass(frozen=True)
class CaseRecord:
    """Outcome of one named check on one case."""

    seed: tuple[int, int]
    n: int
    check: str
    passed: bool
    metric: float | None


@dataclass(frozen=True)
class VerificationReport:
    cases: int
    max_n: int
    master_seed: int
    records: tuple
    elapsed: float

    @property
    def failures(self) -> int:
        return sum(1 for r in self.records if not r.passed)

    def to_doc(self) -> dict:
        # elapsed is intentionally left out: report bytes must be identical
        # across reruns with the same flags and seed.
        return {
            "ensemble": ENSEMBLE_LAW,
            "flags": {
                "cases": self.cases,
                "max_n": self.max_n,
                "seed": self.master_seed,
            },
            "records": [
                {
                    "seed": list(r.seed),
                    "n": r.n,
                    "check": r.check,
                    "passed": r.passed,
                    "metric": r.metric,
                }
                for r in self.records
            ],
            "summary": {
                "cases": self.cases,
                "records": len(self.records),
                "failures": self.failures,
            },
        }


def random_rank_one_pair(rng: np.random.Generator, n: int) -> TracePair:
    """Draw (A, B) from the documented ensemble law."""
    lam = float(rng.uniform(-3.0, 3.0))
    while abs(lam) < 0.1:
        lam = float(rng.uniform(-3.0, 3.0))
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    a = lam * np.outer(v, v.conj())
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    b = (g + g.conj().T) / 2.0
    return TracePair(validate_hermitian(a), validate_hermitian(b))


def random_grid(rng: np.random.Generator, n_points: int = 8) -> TGrid:
    """Strictly increasing random grid on [-2, 2]."""
    while True:
        pts = np.sort(rng.uniform(-2.0, 2.0, size=n_points))
        if np.all(np.diff(pts) > 1e-6):
            return TGrid(pts)


def _eleven_points() -> np.ndarray:
    return np.linspace(-2.0, 2.0, 11)


def run_case(master_seed: int, index: int, max_n: int) -> list[CaseRecord]:
    rng = np.random.default_rng([master_seed, index])
    n = int(rng.integers(2, max_n + 1))
    seed = (master_seed, index)
    grid_rand = random_grid(rng)
    pair = random_rank_one_pair(rng, n)

    def record(check: str, passed: bool, metric: float | None) -> CaseRecord:
        return CaseRecord(
            seed=seed,
            n=n,
            check=check,
            passed=bool(passed),
            metric=None if metric is None else float(metric),
        )

    records: list[CaseRecord] = []
    try:
        red = reduce(pair.A, pair.B)
        ra, rb = reduction_residuals(pair.A, pair.B, red)
        records.append(record("reduce_wavw_l", ra <= RESIDUAL_TOL, ra))
        records.append(record("reduce_wbw_m", rb <= RESIDUAL_TOL, rb))

        m = red.M.mat
        off = ~np.eye(n, dtype=bool)
        min_off = float(m.real[off].min()) if n > 1 else 0.0
        records.append(record("reduce_offdiag_min", min_off >= -OFFDIAG_TOL, min_off))

        lm_pair = TracePair(red.L, red.M)
        worst = 0.0
        for t in _eleven_points():
            fa = trace_f(pair, float(t))
            fl = trace_f(lm_pair, float(t))
            worst = max(worst, abs(fa - fl) / max(1.0, fa))
        records.append(record("trace_invariance", worst <= TRACE_INV_TOL, worst))

        f = trace_function(pair)
        for check, grid in (("ec_gram_uniform", default_grid()), ("ec_gram_random", grid_rand)):
            rep = check_exponential_convexity(f, grid, tol=GRAM_TOL)
            records.append(record(check, rep.passed, rep.min_eigenvalue))

        e1 = lie_product_approx(pair.A, pair.B, 64, with_reference=True).reference_error
        e2 = lie_product_approx(pair.A, pair.B, 128, with_reference=True).reference_error
        ratio = 0.0 if e1 < 1e-300 else e2 / e1
        records.append(record("lie_ratio", ratio <= LIE_RATIO_LIMIT, ratio))

        # Round trip on the commuting pair (L, diag M) produced by this case.
        b_diag = HermitianMatrix(np.diag(np.diag(m).real).astype(complex))
        cpair = TracePair(red.L, b_diag)
        measure = commuting_measure(cpair)
        worst_rt = 0.0
        for t in _eleven_points():
            ft = trace_f(cpair, float(t))
            lt = laplace_transform(measure, float(t))
            worst_rt = max(worst_rt, abs(ft - lt) / max(1.0, ft))
        records.append(record("roundtrip_transform", worst_rt <= ROUNDTRIP_TOL, worst_rt))

        mass = measure.total_mass
        ref_mass = trace_f(cpair, 0.0)
        mass_err = abs(mass - ref_mass) / max(1.0, ref_mass)
        records.append(record("roundtrip_mass", mass_err <= ROUNDTRIP_TOL, mass_err))

        est = growth_exponents(pair)
        worst_g = max(
            abs(est.lambda_min_est - est.lambda_min_true),
            abs(est.lambda_max_est - est.lambda_max_true),
        )
        records.append(record("growth_exponents", worst_g <= GROWTH_TOL, worst_g))
    except ExpConvexError as exc:
        records.append(record(f"case_error({type(exc).__name__})", False, None))
    return records


def run_verification(cases: int, max_n: int, seed: int) -> VerificationReport:
    """Run the full battery over `cases` seeded instances."""
    if cases < 1:
        raise ValueError(f"cases must be >= 1, got {cases}")
    if not 2 <= max_n <= 12:
        raise ValueError(f"max_n must be in [2, 12], got {max_n}")
    started = time.perf_counter()
    records: list[CaseRecord] = []
    for index in range(cases):
        records.extend(run_case(seed, index, max_n))
    elapsed = time.perf_counter() - started
    return VerificationReport(
        cases=cases,
        max_n=max_n,
        master_seed=seed,
        records=tuple(records),
        elapsed=elapsed,
    )
