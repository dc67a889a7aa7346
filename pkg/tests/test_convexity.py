"""Tests for Gram-kernel PSD checks, the midpoint inequality, the positivity
dichotomy, closure combinators, and the entrywise matrix-function checks."""

import math

import numpy as np
import pytest

from expconvex import (
    DichotomyViolated,
    EvaluationFailure,
    GramMatrix,
    HypothesisViolated,
    NegativeScale,
    ScalarFunction,
    TGrid,
    TracePair,
    check_exponential_convexity,
    default_grid,
    dichotomy_check,
    ec_product,
    ec_scale,
    ec_sum,
    entrywise_ec_check,
    exp_function,
    gram,
    hermitian_from_diag,
    lie_trace_function,
    max_abs,
    midpoint_inequality_check,
    psd_check,
    trace_f,
    trace_function,
    validate_hermitian,
    zero_function,
)

# min eigenvalue of the Gram matrix of e^{-t^2} on {-1, 0, 1}; frozen from a
# direct eigvalsh evaluation of [[e^-4, e^-1, 1], [e^-1, 1, e^-1], [1, e^-1, e^-4]]
GAUSS_GRAM_MIN_EIG = -0.9816843611112656


def gauss():
    return ScalarFunction(fn=lambda t: math.exp(-t * t), label="exp(-t^2)")


def three_grid():
    return TGrid(np.array([-1.0, 0.0, 1.0]))


def random_mixture(rng, k=4):
    # nonnegative combination of exponentials: exponentially convex by closure
    cs = rng.uniform(0.1, 2.0, size=k)
    mus = rng.uniform(-2.0, 2.0, size=k)
    return ScalarFunction(
        fn=lambda t: float(np.dot(cs, np.exp(mus * t))),
        label="mixture",
    )


def test_tgrid_validation():
    g = TGrid(np.array([0.0, 1.0, 3.0]))
    assert g.n == 3
    with pytest.raises(ValueError):
        TGrid(np.array([0.0, 0.0, 1.0]))
    with pytest.raises(ValueError):
        TGrid(np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        TGrid(np.array([0.0, np.inf]))


def test_tgrid_equispaced_and_default():
    g = TGrid.equispaced(-2.0, 2.0, 8)
    assert g.n == 8
    assert g.points[0] == -2.0 and g.points[-1] == 2.0
    d = default_grid()
    assert d.n == 8
    assert np.array_equal(d.points, g.points)


def test_gram_exponential_rank_one_structure():
    g = gram(exp_function(1.0), TGrid(np.array([0.0, math.log(2.0)])))
    assert np.allclose(g.matrix, [[1.0, 2.0], [2.0, 4.0]], rtol=1e-14)


def test_gram_constant_function_all_ones():
    one = ScalarFunction(fn=lambda t: 1.0, label="one")
    g = gram(one, TGrid(np.array([-1.0, 0.5, 2.0, 3.0])))
    assert np.array_equal(g.matrix, np.ones((4, 4)))


def test_gram_gauss_values_and_symmetry():
    g = gram(gauss(), three_grid())
    e1, e4 = math.exp(-1.0), math.exp(-4.0)
    expect = np.array([[e4, e1, 1.0], [e1, 1.0, e1], [1.0, e1, e4]])
    assert max_abs(g.matrix - expect) <= 1e-15
    assert np.array_equal(g.matrix, g.matrix.T)


def test_gram_nonfinite_evaluation():
    bad = ScalarFunction(fn=lambda t: float("nan"), label="bad")
    with pytest.raises(EvaluationFailure):
        gram(bad, three_grid())


def test_psd_check_identity():
    g = GramMatrix(matrix=np.eye(3), grid=three_grid(), label="id")
    rep = psd_check(g)
    assert rep.passed
    assert rep.min_eigenvalue == pytest.approx(1.0)


def test_psd_check_indefinite_with_witness():
    g = GramMatrix(
        matrix=np.array([[1.0, 2.0], [2.0, 1.0]]),
        grid=TGrid(np.array([0.0, 1.0])),
        label="indef",
    )
    rep = psd_check(g)
    assert not rep.passed
    assert rep.min_eigenvalue == pytest.approx(-1.0)
    assert np.allclose(np.abs(rep.witness), [1.0 / math.sqrt(2.0)] * 2)
    quad = float(np.real(rep.witness.conj() @ g.matrix @ rep.witness))
    assert quad == pytest.approx(-1.0)
    assert quad < -rep.tolerance


def test_gauss_gram_fails_psd():
    rep = check_exponential_convexity(gauss(), three_grid())
    assert not rep.passed
    assert rep.min_eigenvalue == pytest.approx(GAUSS_GRAM_MIN_EIG, rel=1e-9)
    g = gram(gauss(), three_grid())
    quad = float(np.real(rep.witness.conj() @ g.matrix @ rep.witness))
    assert quad < 0.0


def test_pure_exponential_passes_any_grid():
    rep = check_exponential_convexity(exp_function(3.0), TGrid.equispaced(-2.0, 2.0, 6))
    assert rep.passed


def test_trace_function_passes_random_rank_one():
    rng = np.random.default_rng(31)
    for _ in range(10):
        n = int(rng.integers(2, 7))
        lam = float(rng.uniform(0.3, 3.0)) * (1 if rng.uniform() < 0.5 else -1)
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        v /= np.linalg.norm(v)
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        pair = TracePair(
            validate_hermitian(lam * np.outer(v, v.conj())),
            validate_hermitian((g + g.conj().T) / 2.0),
        )
        rep = check_exponential_convexity(trace_function(pair), default_grid())
        assert rep.passed


def test_rank_one_gram_identity():
    # for f(t) = e^{t mu} the Gram matrix is exactly the rank-one v v^T
    rng = np.random.default_rng(32)
    for _ in range(10):
        mu = float(rng.uniform(-2.0, 2.0))
        pts = np.sort(rng.uniform(-2.0, 2.0, size=6))
        grid = TGrid(pts)
        g = gram(exp_function(mu), grid)
        v = np.exp(pts * mu)
        scale = max_abs(g.matrix)
        assert max_abs(g.matrix - np.outer(v, v)) <= 1e-12 * scale
        eigs = np.linalg.eigvalsh(g.matrix)
        assert abs(eigs[-2]) <= 1e-10 * scale


def test_midpoint_exponential_equality():
    rep = midpoint_inequality_check(exp_function(1.0), 0.7, -0.3)
    assert rep.holds
    assert rep.lhs == pytest.approx(rep.rhs, rel=1e-12)


def test_midpoint_cosh():
    f = ec_sum(ec_scale(exp_function(1.0), 0.5), ec_scale(exp_function(-1.0), 0.5))
    rep = midpoint_inequality_check(f, 0.0, 1.0)
    assert rep.holds
    assert rep.lhs == pytest.approx(math.cosh(1.0))
    assert rep.rhs == pytest.approx(math.sqrt(math.cosh(2.0)))


def test_midpoint_gauss_fails():
    rep = midpoint_inequality_check(gauss(), -1.0, 1.0)
    assert not rep.holds
    assert rep.lhs == pytest.approx(1.0)
    assert rep.rhs == pytest.approx(math.exp(-4.0))


def test_midpoint_follows_from_psd():
    # 2x2 minor argument: PSD on {t1, t2} implies the midpoint inequality
    rng = np.random.default_rng(33)
    for _ in range(20):
        f = random_mixture(rng)
        t1, t2 = sorted(rng.uniform(-1.5, 1.5, size=2))
        if t2 - t1 < 1e-6:
            continue
        rep = check_exponential_convexity(f, TGrid(np.array([t1, t2])))
        if rep.passed:
            assert midpoint_inequality_check(f, t1, t2).holds


def test_dichotomy_trace_function_positive():
    pair = TracePair(hermitian_from_diag([0.0, 1.0]), hermitian_from_diag([0.0, 0.0]))
    rep = dichotomy_check(trace_function(pair), default_grid())
    assert rep.all_positive and not rep.all_zero


def test_dichotomy_zero_function():
    rep = dichotomy_check(zero_function(), default_grid())
    assert rep.all_zero and not rep.all_positive


def test_dichotomy_violated_by_relu():
    relu = ScalarFunction(fn=lambda t: max(t, 0.0), label="relu")
    with pytest.raises(DichotomyViolated):
        dichotomy_check(relu, three_grid())


def test_ec_scale_zero_gives_zero_gram():
    f = ec_scale(exp_function(1.0), 0.0)
    g = gram(f, three_grid())
    assert max_abs(g.matrix) == 0.0
    assert psd_check(g).passed


def test_ec_scale_rejects_negative():
    with pytest.raises(NegativeScale):
        ec_scale(exp_function(1.0), -1.0)


def test_ec_sum_cosh_passes():
    f = ec_sum(exp_function(1.0), exp_function(-1.0))
    assert f(0.0) == pytest.approx(2.0)
    rep = check_exponential_convexity(f, three_grid())
    assert rep.passed


def test_ec_product_adds_exponents():
    f = ec_product(exp_function(1.0), exp_function(2.0))
    for t in (-1.0, 0.3, 2.0):
        assert f(t) == pytest.approx(math.exp(3.0 * t), rel=1e-13)
    g = gram(f, three_grid())
    eigs = np.linalg.eigvalsh(g.matrix)
    assert abs(eigs[-2]) <= 1e-10 * max_abs(g.matrix)


def test_combinator_labels():
    f = ec_sum(exp_function(1.0), exp_function(-1.0))
    assert "sum" in f.label
    assert "scale" in ec_scale(f, 2.0).label
    assert "product" in ec_product(f, f).label


def test_closure_p1_p2_p3_random():
    rng = np.random.default_rng(34)
    grid = default_grid()
    for _ in range(10):
        f1 = random_mixture(rng)
        f2 = random_mixture(rng)
        assert check_exponential_convexity(f1, grid).passed
        assert check_exponential_convexity(f2, grid).passed
        c = float(rng.uniform(0.0, 3.0))
        for combo in (ec_scale(f1, c), ec_sum(f1, f2), ec_product(f1, f2)):
            assert check_exponential_convexity(combo, grid).passed


def test_p4_lie_trace_sequence_converges():
    l = hermitian_from_diag([0.0, 1.0])
    m = validate_hermitian(np.array([[0.0, 1.0], [1.0, 0.0]]))
    grid = TGrid.equispaced(-2.0, 2.0, 6)
    pair = TracePair(l, m)
    ref = [trace_f(pair, float(t)) for t in grid.points]

    errs = []
    for p in (1, 2, 4, 8, 16, 32, 64):
        fp = lie_trace_function(l, m, p)
        assert check_exponential_convexity(fp, grid).passed
        errs.append(max(abs(fp(float(t)) - r) for t, r in zip(grid.points, ref)))
    assert errs[-1] <= 0.05 * errs[0]
    assert errs[-1] == pytest.approx(0.0, abs=1e-2)


def test_entrywise_ec_worked_instance():
    l = hermitian_from_diag([0.0, 1.0])
    m = validate_hermitian(np.array([[0.0, 1.0], [1.0, 0.0]]))
    res = entrywise_ec_check(l, m, TGrid.equispaced(-2.0, 2.0, 6))
    assert res.all_passed
    assert res.max_imag <= 1e-10
    assert len(res.reports) == 2 and len(res.reports[0]) == 2


def test_entrywise_diagonal_m_trivial():
    l = hermitian_from_diag([-1.0, 2.0])
    m = hermitian_from_diag([0.5, 0.25])
    res = entrywise_ec_check(l, m, TGrid.equispaced(-1.0, 1.0, 4))
    assert res.all_passed


def test_entrywise_rejects_negative_offdiag():
    l = hermitian_from_diag([0.0, 1.0])
    m = validate_hermitian(np.array([[0.0, -1.0], [-1.0, 0.0]]))
    with pytest.raises(HypothesisViolated):
        entrywise_ec_check(l, m, three_grid())


def test_entrywise_rejects_nondiagonal_l():
    l = validate_hermitian(np.array([[0.0, 1.0], [1.0, 0.0]]))
    m = hermitian_from_diag([0.0, 0.0])
    with pytest.raises(HypothesisViolated):
        entrywise_ec_check(l, m, three_grid())
