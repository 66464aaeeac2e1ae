import numpy as np
import pytest

import modeiso as mi
from modeiso.eigensolver import (EigensolverError, default_shift,
                                 dense_generalized_eig, smallest_eigenpairs)


def test_square_matches_dense_oracle(square_mesh, square_matrices):
    M, A = square_matrices
    spec = smallest_eigenpairs(A, M, count=10, tol=1e-9, seed=0)
    dense = dense_generalized_eig(A, M)
    scale = dense.eigenvalues[9]
    assert np.abs(spec.eigenvalues - dense.eigenvalues[:10]).max() \
        <= 1e-9 * scale
    assert spec.residuals.max() < 1e-9 * max(scale, 1.0)


def test_eigenvalues_ascending_nonnegative(square_matrices):
    M, A = square_matrices
    spec = smallest_eigenpairs(A, M, count=6, tol=1e-9, seed=3)
    assert np.all(np.diff(spec.eigenvalues) >= -1e-12)
    assert np.all(spec.eigenvalues >= 0.0)
    assert spec.eigenvalues[0] == pytest.approx(0.0, abs=1e-9)


def test_vectors_m_orthonormal(square_matrices):
    M, A = square_matrices
    spec = smallest_eigenpairs(A, M, count=8, tol=1e-9, seed=0)
    G = spec.vectors.T @ (M @ spec.vectors)
    assert np.abs(G - np.eye(8)).max() < 1e-10


def test_deterministic_for_fixed_seed(square_matrices):
    M, A = square_matrices
    a = smallest_eigenpairs(A, M, count=5, tol=1e-9, seed=7)
    b = smallest_eigenpairs(A, M, count=5, tol=1e-9, seed=7)
    assert np.array_equal(a.eigenvalues, b.eigenvalues)
    assert np.array_equal(a.vectors, b.vectors)


def test_degenerate_multiplicities_recovered(icosphere2):
    M = mi.assemble_mass(icosphere2)
    A = mi.assemble_stiffness(icosphere2)
    spec = smallest_eigenpairs(A, M, count=9, tol=1e-9, seed=0)
    lam = spec.eigenvalues
    # clusters 1, 3, 5 of the sphere Laplacian (l = 0, 1, 2)
    assert lam[0] == pytest.approx(0.0, abs=1e-9)
    assert np.ptp(lam[1:4]) < 1e-8 * lam[1]
    assert np.ptp(lam[4:9]) < 1e-8 * lam[4]
    assert lam[4] / lam[1] == pytest.approx(3.0, rel=0.05)  # 6 / 2


def test_icosphere3_leading_eigenvalues():
    mesh = mi.generate_icosphere(3)
    M, A = mi.assemble_mass(mesh), mi.assemble_stiffness(mesh)
    spec = smallest_eigenpairs(A, M, count=9, tol=1e-9, seed=0)
    assert spec.eigenvalues[1:4].mean() == pytest.approx(2.0, rel=0.01)
    assert spec.eigenvalues[4:9].mean() == pytest.approx(6.0, rel=0.02)


def test_count_validation(square_matrices):
    M, A = square_matrices
    with pytest.raises(ValueError):
        smallest_eigenpairs(A, M, count=0)
    with pytest.raises(ValueError):
        smallest_eigenpairs(A, M, count=A.shape[0])


def test_default_shift_positive(square_matrices):
    M, A = square_matrices
    sigma = default_shift(A, M)
    assert sigma > 0
    assert sigma == pytest.approx(
        1e-3 * A.diagonal().sum() / M.diagonal().sum())


def test_error_carries_converged_count(square_matrices):
    M, A = square_matrices
    with pytest.raises(EigensolverError) as info:
        smallest_eigenpairs(A, M, count=12, tol=1e-9, seed=0, max_restarts=1)
    assert info.value.n_converged >= 0


def test_dense_oracle_order_limit():
    mesh = mi.generate_rectangle(1.0, 1.0, 50, 50)
    M = mi.assemble_mass(mesh)
    A = mi.assemble_stiffness(mesh)
    with pytest.raises(ValueError, match="dense"):
        dense_generalized_eig(A, M)


def test_interval_analytic_spectrum():
    mesh = mi.generate_interval(1.0, 200)
    M, A = mi.assemble_mass(mesh), mi.assemble_stiffness(mesh)
    spec = smallest_eigenpairs(A, M, count=4, tol=1e-10, seed=0)
    exact = (np.pi * np.arange(4)) ** 2
    assert np.allclose(spec.eigenvalues[1:], exact[1:], rtol=1e-3)
