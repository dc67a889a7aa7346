"""Tests for the rank-one canonical-form reduction W A W* = L, W B W* = M."""

import numpy as np
import pytest

from expconvex import (
    DimensionMismatch,
    RankNotOne,
    TracePair,
    assert_rank_one,
    corner_diagonalizer,
    hermitian_from_diag,
    max_abs,
    phase_matrix,
    reduce,
    reduction_residuals,
    trace_f,
    validate_hermitian,
)


def random_rank_one(rng, n, lam=None):
    if lam is None:
        lam = float(rng.uniform(0.5, 3.0)) * (1 if rng.uniform() < 0.5 else -1)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    return validate_hermitian(lam * np.outer(v, v.conj())), lam, v


def random_hermitian(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return validate_hermitian((g + g.conj().T) / 2.0)


def test_assert_rank_one_corner_diagonal():
    cert = assert_rank_one(hermitian_from_diag([0.0, 0.0, 2.0]))
    assert cert.lambda_n == pytest.approx(2.0)
    assert np.allclose(np.abs(cert.direction), [0.0, 0.0, 1.0])


def test_assert_rank_one_recovers_outer_product():
    rng = np.random.default_rng(21)
    a, lam, v = random_rank_one(rng, 5, lam=3.0)
    cert = assert_rank_one(a)
    assert cert.lambda_n == pytest.approx(3.0, abs=1e-12)
    # direction matches v up to a unit phase
    overlap = abs(np.vdot(cert.direction, v))
    assert overlap == pytest.approx(1.0, abs=1e-12)


def test_assert_rank_one_rejects_rank_two():
    with pytest.raises(RankNotOne) as exc:
        assert_rank_one(hermitian_from_diag([1.0, 1.0]))
    assert exc.value.spectrum.shape == (2,)


def test_assert_rank_one_rejects_zero():
    with pytest.raises(RankNotOne):
        assert_rank_one(validate_hermitian(np.zeros((3, 3))))


def test_assert_rank_one_tol_sensitivity():
    a = hermitian_from_diag([1e-12, 1.0])
    cert = assert_rank_one(a)  # default tol 1e-9 * ||a||
    assert cert.lambda_n == pytest.approx(1.0)
    with pytest.raises(RankNotOne):
        assert_rank_one(a, rank_tol=1e-13)


def test_corner_diagonalizer_swap_case():
    cert = assert_rank_one(hermitian_from_diag([2.0, 0.0]))
    u = corner_diagonalizer(cert)
    out = u.mat @ np.diag([2.0, 0.0]).astype(complex) @ u.mat.conj().T
    assert max_abs(out - np.diag([0.0, 2.0])) <= 1e-12


def test_corner_diagonalizer_already_in_corner():
    cert = assert_rank_one(hermitian_from_diag([0.0, 0.0, 5.0]))
    u = corner_diagonalizer(cert)
    out = u.mat @ np.diag([0.0, 0.0, 5.0]).astype(complex) @ u.mat.conj().T
    assert max_abs(out - np.diag([0.0, 0.0, 5.0])) <= 1e-12


def test_corner_diagonalizer_random():
    rng = np.random.default_rng(22)
    for _ in range(20):
        n = int(rng.integers(2, 7))
        a, lam, _ = random_rank_one(rng, n)
        cert = assert_rank_one(a)
        u = corner_diagonalizer(cert)
        target = np.zeros((n, n), dtype=complex)
        target[-1, -1] = lam
        assert max_abs(u.mat @ a.mat @ u.mat.conj().T - target) <= 1e-10
        assert max_abs(u.mat @ u.mat.conj().T - np.eye(n)) <= 1e-12
        # last row of U is the direction conjugated, up to a unit phase
        row = u.mat[-1, :]
        assert abs(np.vdot(row.conj(), cert.direction)) == pytest.approx(1.0, abs=1e-12)


def test_phase_matrix_examples():
    omegas, omega = phase_matrix(np.array([1j]))
    assert np.allclose(omegas, [-1j])

    omegas, _ = phase_matrix(np.array([0.0j]))
    assert np.allclose(omegas, [1.0])

    g = np.array([3.0, -4.0j])
    omegas, omega = phase_matrix(g)
    assert np.allclose(omegas, [1.0, 1j])
    assert np.allclose(omega.mat @ g, [3.0, 4.0])


def test_phase_matrix_unit_modulus_identity():
    rng = np.random.default_rng(23)
    g = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    g[2] = 0.0
    omegas, _ = phase_matrix(g)
    assert np.allclose(np.abs(omegas), 1.0)
    assert max_abs(omegas * g - np.abs(g)) <= 1e-12


def test_reduce_2x2_worked_example():
    a = hermitian_from_diag([0.0, 1.0])
    b = validate_hermitian(np.array([[1.0, 1j], [-1j, 3.0]]))
    red = reduce(a, b)
    assert max_abs(red.L.mat - np.diag([0.0, 1.0])) <= 1e-14
    assert max_abs(red.M.mat - np.array([[1.0, 1.0], [1.0, 3.0]])) <= 1e-14
    ra, rb = reduction_residuals(a, b, red)
    assert ra <= 1e-10 and rb <= 1e-10


def test_reduce_already_reduced_real_pair():
    a = hermitian_from_diag([0.0, 1.0])
    b = validate_hermitian(np.array([[2.0, 0.5], [0.5, 3.0]]))
    red = reduce(a, b)
    # W is diagonal with unit phases and M comes back unchanged
    assert max_abs(red.M.mat - b.mat) <= 1e-12
    assert max_abs(red.L.mat - a.mat) <= 1e-12
    off = ~np.eye(2, dtype=bool)
    assert max_abs(red.W.mat[off]) <= 1e-12
    assert np.allclose(np.abs(np.diag(red.W.mat)), 1.0)


def test_reduce_single_dimension():
    red = reduce(hermitian_from_diag([2.0]), hermitian_from_diag([5.0]))
    assert red.L.mat[0, 0] == pytest.approx(2.0)
    assert red.M.mat[0, 0] == pytest.approx(5.0)


def test_reduce_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        reduce(hermitian_from_diag([1.0]), hermitian_from_diag([1.0, 2.0]))


def test_reduce_invariants_random():
    rng = np.random.default_rng(24)
    for _ in range(30):
        n = int(rng.integers(2, 8))
        a, _, _ = random_rank_one(rng, n)
        b = random_hermitian(rng, n)
        red = reduce(a, b)

        ra, rb = reduction_residuals(a, b, red)
        assert ra <= 1e-10
        assert rb <= 1e-10

        # L diagonal, zero outside the corner
        l = red.L.mat
        assert max_abs(l - np.diag(np.diag(l))) == 0.0
        assert max_abs(np.diag(l)[:-1]) == 0.0

        # M structure: zero strictly above the diagonal in the leading block,
        # nonnegative real coupling column
        m = red.M.mat
        for j in range(n - 1):
            for k in range(j + 1, n - 1):
                assert abs(m[j, k]) <= 1e-11
        col = m[: n - 1, n - 1]
        assert max_abs(col.imag) <= 1e-12
        assert col.real.min() >= -1e-12

        w = red.W.mat
        assert max_abs(w @ w.conj().T - np.eye(n)) <= 1e-10


def test_reduce_trace_function_invariance():
    rng = np.random.default_rng(25)
    for _ in range(10):
        n = int(rng.integers(2, 8))
        a, _, _ = random_rank_one(rng, n)
        b = random_hermitian(rng, n)
        red = reduce(a, b)
        pair_ab = TracePair(a, b)
        pair_lm = TracePair(red.L, red.M)
        for t in np.linspace(-2.0, 2.0, 11):
            fa = trace_f(pair_ab, float(t))
            fl = trace_f(pair_lm, float(t))
            assert abs(fa - fl) <= 1e-9 * max(1.0, fa)


def test_reduce_idempotent():
    rng = np.random.default_rng(26)
    for _ in range(10):
        n = int(rng.integers(2, 7))
        a, _, _ = random_rank_one(rng, n)
        b = random_hermitian(rng, n)
        red = reduce(a, b)
        red2 = reduce(red.L, red.M)
        assert max_abs(red2.L.mat - red.L.mat) <= 1e-10
        assert max_abs(red2.M.mat - red.M.mat) <= 1e-10
        # fixed point up to diagonal phases
        w = red2.W.mat
        off = ~np.eye(n, dtype=bool)
        assert max_abs(w[off]) <= 1e-10
        assert np.allclose(np.abs(np.diag(w)), 1.0, atol=1e-10)


def test_reduction_trace_fields_consistent():
    rng = np.random.default_rng(27)
    n = 6
    a, _, _ = random_rank_one(rng, n)
    b = random_hermitian(rng, n)
    red = reduce(a, b)
    tr = red.trace

    assert np.allclose(np.abs(tr.omegas), 1.0)
    assert max_abs(tr.omegas * tr.g - tr.g_abs) <= 1e-12
    assert np.all(tr.g_abs >= 0.0)
    assert np.array_equal(tr.Omega.mat, np.diag(tr.omegas))

    # M is assembled exactly from the trace pieces
    m = np.zeros((n, n), dtype=complex)
    m[: n - 1, : n - 1] = np.diag(tr.M_block)
    m[: n - 1, n - 1] = tr.g_abs
    m[n - 1, : n - 1] = tr.g_abs
    m[n - 1, n - 1] = tr.mu_n
    assert max_abs(red.M.mat - m) == 0.0

    # W factors as blockdiag(W_block, 1) @ U
    w_full = np.zeros((n, n), dtype=complex)
    w_full[: n - 1, : n - 1] = tr.W_block.mat
    w_full[n - 1, n - 1] = 1.0
    assert max_abs(red.W.mat - w_full @ tr.U.mat) == 0.0
