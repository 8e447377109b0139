"""Core primitives: validation, Frobenius norm, thin SVD, truncation."""

import math

import numpy as np
import pytest

from reorgsvd import (
    SvdFactorization,
    approx_report,
    as_matrix,
    frobenius_norm,
    parameter_count,
    rank_k_approx,
    relative_error,
    thin_svd,
)


def test_as_matrix_accepts_lists_and_coerces_dtype():
    m = as_matrix([[1, 2], [3, 4]])
    assert m.dtype == np.float64
    assert m.shape == (2, 2)


def test_as_matrix_rejects_bad_inputs():
    with pytest.raises(ValueError):
        as_matrix([1.0, 2.0])
    with pytest.raises(ValueError):
        as_matrix(np.zeros((0, 3)))
    with pytest.raises(ValueError):
        as_matrix([[np.nan]])
    with pytest.raises(ValueError):
        as_matrix([[np.inf, 1.0]])


def test_frobenius_norm_hand_values(demo_matrix):
    assert frobenius_norm([[3.0, 4.0]]) == 5.0
    assert frobenius_norm(demo_matrix) ** 2 == pytest.approx(2548.0, rel=1e-14)


def test_thin_svd_matches_lapack_singular_values():
    rng = np.random.default_rng(42)
    for _ in range(60):
        m, n = rng.integers(1, 25, size=2)
        a = rng.normal(size=(m, n))
        sig = thin_svd(a).sigma
        ref = np.linalg.svd(a, compute_uv=False)
        assert sig.shape == ref.shape
        assert np.all(np.abs(sig - ref) <= 1e-10 * max(ref[0], 1.0))


@pytest.mark.parametrize("shape", [(7, 7), (12, 5), (5, 12), (1, 9), (9, 1), (2, 2)])
def test_thin_svd_factor_invariants(shape):
    rng = np.random.default_rng(hash(shape) % 2**32)
    a = rng.normal(size=shape)
    f = thin_svd(a)
    r = min(shape)
    assert f.u.shape == (shape[0], r)
    assert f.v.shape == (shape[1], r)
    assert np.abs(f.u.T @ f.u - np.eye(r)).max() < 1e-12
    assert np.abs(f.v.T @ f.v - np.eye(r)).max() < 1e-12
    assert np.all(np.diff(f.sigma) <= 0)
    assert f.sigma[-1] >= 0
    recon = (f.u * f.sigma) @ f.v.T
    assert np.abs(recon - a).max() <= 1e-12 * max(np.abs(a).max(), 1.0)


def test_thin_svd_does_not_mutate_input():
    rng = np.random.default_rng(0)
    for shape in [(6, 18), (18, 6)]:
        a = rng.normal(size=shape)
        keep = a.copy()
        thin_svd(a)
        assert np.array_equal(a, keep)


def test_thin_svd_zero_matrix():
    f = thin_svd(np.zeros((5, 3)))
    assert np.all(f.sigma == 0.0)
    assert np.abs(f.u.T @ f.u - np.eye(3)).max() < 1e-12
    assert np.abs(f.v.T @ f.v - np.eye(3)).max() < 1e-12


def test_thin_svd_rank_deficient_input():
    rng = np.random.default_rng(9)
    a = np.outer(rng.normal(size=10), rng.normal(size=8))
    a += np.outer(rng.normal(size=10), rng.normal(size=8))
    f = thin_svd(a)
    assert f.sigma[2] <= 1e-10 * f.sigma[0]
    assert np.abs((f.u * f.sigma) @ f.v.T - a).max() <= 1e-12 * np.abs(a).max()


def test_thin_svd_identity_has_flat_spectrum():
    f = thin_svd(np.eye(6))
    assert np.allclose(f.sigma, 1.0, atol=1e-14)


def test_thin_svd_transpose_swaps_factors():
    rng = np.random.default_rng(17)
    a = rng.normal(size=(5, 11))
    f = thin_svd(a)
    ft = thin_svd(a.T)
    assert np.allclose(f.sigma, ft.sigma, rtol=1e-12)


def test_factorization_rejects_increasing_sigma():
    with pytest.raises(ValueError):
        SvdFactorization(
            u=np.eye(2), sigma=np.array([1.0, 2.0]), v=np.eye(2)
        )


def test_rank_k_error_matches_tail_energy():
    rng = np.random.default_rng(5)
    a = rng.normal(size=(12, 9))
    f = thin_svd(a)
    for k in (1, 4, 9):
        err_sq = np.sum((a - rank_k_approx(f, k)) ** 2)
        tail = float(np.sum(f.sigma[k:] ** 2))
        assert err_sq == pytest.approx(tail, rel=1e-10, abs=1e-12)


def test_rank_k_monotone_in_k():
    rng = np.random.default_rng(6)
    a = rng.normal(size=(10, 10))
    f = thin_svd(a)
    errs = [np.sum((a - rank_k_approx(f, k)) ** 2) for k in range(1, 11)]
    assert all(e1 >= e2 - 1e-12 for e1, e2 in zip(errs, errs[1:]))


def test_rank_k_rejects_out_of_range():
    f = thin_svd(np.eye(4))
    for k in (0, -1, 5, 2.0, True):
        with pytest.raises(ValueError):
            rank_k_approx(f, k)


def test_relative_error_basics():
    a = [[1.0, 0.0], [0.0, 1.0]]
    assert relative_error(a, a) == 0.0
    assert relative_error(a, [[0.0, 0.0], [0.0, 0.0]]) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        relative_error(a, [[1.0]])
    with pytest.raises(ValueError):
        relative_error([[0.0]], [[1.0]])


def test_parameter_count():
    assert parameter_count(400, 600, 5) == 5000
    assert parameter_count(3, 4, 2) == 14
    for bad in [(0, 4, 1), (3, -1, 1), (3, 4, 0), (3.5, 4, 1), (3, 4, True)]:
        with pytest.raises(ValueError):
            parameter_count(*bad)


def test_approx_report_consistency():
    rng = np.random.default_rng(8)
    a = rng.normal(size=(9, 14))
    rep = approx_report(a, 3)
    assert rep.rows == 9 and rep.cols == 14 and rep.rank == 3
    assert rep.parameters == 3 * (9 + 14)
    f = thin_svd(a)
    assert rep.rel_error == pytest.approx(
        relative_error(a, rank_k_approx(f, 3)), rel=1e-12
    )
    assert rep.abs_error_sq == pytest.approx(
        rep.rel_error**2 * frobenius_norm(a) ** 2, rel=1e-12
    )


def test_approx_report_accepts_precomputed_factorization():
    rng = np.random.default_rng(13)
    a = rng.normal(size=(8, 8))
    f = thin_svd(a)
    assert approx_report(a, 2, f=f) == approx_report(a, 2)
