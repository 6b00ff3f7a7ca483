"""Tests for the in-house dense eigenvalue solver.

Library routines (LU determinants, SVD, polynomial roots) serve as
oracles only; the solver under test never calls them.
"""

import numpy as np
import pytest

from betaone.eigensolve import DIM_CAP, eig_nonsymmetric, hessenberg


def matched_deviation(computed, reference):
    # worst-case distance under greedy nearest matching
    pool = list(reference)
    worst = 0.0
    for lam in computed:
        j = int(np.argmin([abs(lam - r) for r in pool]))
        worst = max(worst, abs(lam - pool.pop(j)))
    return worst


def test_diagonal_matrix_returns_diagonal():
    eigs = np.sort_complex(eig_nonsymmetric(np.diag([3.0, -1.0, 2.0])))
    assert np.allclose(eigs, [-1.0, 2.0, 3.0], rtol=0, atol=1e-14)


def test_rotation_block_gives_unit_conjugate_pair():
    eigs = np.sort_complex(eig_nonsymmetric([[0.0, 1.0], [-1.0, 0.0]]))
    assert np.allclose(eigs, [-1j, 1j], rtol=0, atol=1e-15)


def test_single_entry_and_empty():
    assert eig_nonsymmetric([[5.0]]) == np.array([5.0 + 0j])
    assert eig_nonsymmetric(np.zeros((0, 0))).size == 0


def test_upper_triangular_deflates_to_diagonal():
    T = np.triu(np.ones((6, 6))) + np.diag(np.arange(6.0))
    eigs = np.sort_complex(eig_nonsymmetric(T))
    assert np.allclose(eigs, np.arange(6.0) + 1.0, rtol=0, atol=1e-14)


def test_trace_and_determinant_random_6x6():
    rng = np.random.default_rng(11)
    for _ in range(25):
        A = rng.standard_normal((6, 6))
        eigs = eig_nonsymmetric(A)
        assert abs(eigs.sum() - np.trace(A)) <= 1e-9
        det = np.linalg.det(A)
        assert abs(eigs.prod() - det) <= 1e-8 * abs(det)


def test_companion_matrix_roots_match_polynomial():
    rng = np.random.default_rng(23)
    for _ in range(25):
        coeffs = rng.standard_normal(5)
        C = np.zeros((5, 5))
        C[1:, :4] = np.eye(4)
        C[:, 4] = -coeffs[::-1]
        reference = np.roots([1.0, *coeffs])
        dev = matched_deviation(eig_nonsymmetric(C), reference)
        assert dev <= 1e-8 * np.linalg.norm(C)


def test_agreement_on_random_matrices_up_to_cap():
    rng = np.random.default_rng(37)
    for n in (2, 3, 4, 5, 8, 13, 21, 34, DIM_CAP):
        A = rng.standard_normal((n, n))
        dev = matched_deviation(eig_nonsymmetric(A), np.linalg.eigvals(A))
        assert dev <= 1e-10 * np.linalg.norm(A)


def test_residual_spot_checks():
    # a returned value is an eigenvalue iff A - lambda I is singular
    rng = np.random.default_rng(41)
    for _ in range(10):
        A = rng.standard_normal((7, 7))
        norm = np.linalg.norm(A, 2)
        for lam in eig_nonsymmetric(A):
            smallest = np.linalg.svd(A - lam * np.eye(7), compute_uv=False)[-1]
            assert smallest <= 1e-7 * norm


def test_symmetric_input_gives_real_spectrum():
    rng = np.random.default_rng(53)
    for _ in range(40):
        G = rng.standard_normal((5, 5))
        eigs = eig_nonsymmetric(0.5 * (G + G.T))
        assert np.abs(eigs.imag).max() == 0.0


def test_complex_eigenvalues_come_in_exact_conjugate_pairs():
    rng = np.random.default_rng(59)
    for _ in range(40):
        eigs = eig_nonsymmetric(rng.standard_normal((6, 6)))
        strict = sorted(
            (z for z in eigs if z.imag != 0.0), key=lambda z: (z.real, z.imag)
        )
        assert len(strict) % 2 == 0
        for low, high in zip(strict[::2], strict[1::2]):
            assert low == high.conjugate()


def test_hessenberg_structure_and_similarity():
    rng = np.random.default_rng(61)
    A = rng.standard_normal((8, 8))
    H = hessenberg(A)
    assert np.abs(np.tril(H, -2)).max() == 0.0
    assert np.isclose(np.trace(H), np.trace(A), rtol=0, atol=1e-12)
    dev = matched_deviation(np.linalg.eigvals(H), np.linalg.eigvals(A))
    assert dev <= 1e-12 * np.linalg.norm(A)


def test_input_validation():
    with pytest.raises(ValueError):
        eig_nonsymmetric(np.zeros((3, 4)))
    with pytest.raises(ValueError):
        eig_nonsymmetric(np.zeros((DIM_CAP + 1, DIM_CAP + 1)))
    with pytest.raises(ValueError):
        eig_nonsymmetric([[np.nan, 0.0], [0.0, 1.0]])
