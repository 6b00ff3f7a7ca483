"""Pfaffians and quaternion determinants.

The Pfaffian of an even-dimensional antisymmetric matrix is computed two
ways: a combinatorial expansion along the first row (reference
implementation, factorial cost) and a skew-symmetric Parlett-Reid
elimination with partial pivoting (production path, cubic cost).  A
quaternion determinant of a self-dual block matrix reduces to the
Pfaffian of its flattened form times the inverse of the standard
symplectic block-diagonal matrix.
"""

from __future__ import annotations

import numpy as np

LAPLACE_DIM_CAP = 12
PIVOT_RATIO_FLOOR = 1e-13
ASYMMETRY_TOL = 1e-12


def as_antisymmetric(matrix):
    """Validate and return a clean antisymmetric copy of a square matrix.

    Roundoff asymmetry up to ASYMMETRY_TOL (relative to the largest
    entry) is symmetrized away; anything larger is rejected.  The
    dimension must be even.
    """
    A = np.array(matrix)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if A.shape[0] % 2 != 0:
        raise ValueError(f"dimension must be even, got {A.shape[0]}")
    scale = max(1.0, np.abs(A).max()) if A.size else 1.0
    asymmetry = np.abs(A + A.T).max() if A.size else 0.0
    if asymmetry > ASYMMETRY_TOL * scale:
        raise ValueError(f"matrix is not antisymmetric (defect {asymmetry:.3e})")
    return 0.5 * (A - A.T)


def z_matrix(n_blocks):
    """Block-diagonal matrix of n_blocks copies of [[0, -1], [1, 0]]."""
    if n_blocks < 1:
        raise ValueError("need at least one block")
    Z = np.zeros((2 * n_blocks, 2 * n_blocks))
    for k in range(n_blocks):
        Z[2 * k, 2 * k + 1] = -1.0
        Z[2 * k + 1, 2 * k] = 1.0
    return Z


def pfaffian_laplace(matrix):
    """Pfaffian by recursive expansion along the first row.

    Exponential cost; only usable as a cross-check for small matrices.
    """
    A = as_antisymmetric(matrix)
    n = A.shape[0]
    if n > LAPLACE_DIM_CAP:
        raise ValueError(f"expansion is infeasible beyond dim {LAPLACE_DIM_CAP}")
    return _laplace(A)


def _laplace(A):
    n = A.shape[0]
    if n == 0:
        return 1.0
    if n == 2:
        return A[0, 1]
    total = 0.0
    # expansion starts at the (1,2) entry; the diagonal term vanishes
    for j in range(1, n):
        keep = [k for k in range(1, n) if k != j]
        minor = A[np.ix_(keep, keep)]
        total += (-1.0) ** (j + 1) * A[0, j] * _laplace(minor)
    return total


def pfaffian(matrix):
    """Pfaffian by skew-symmetric elimination with partial pivoting.

    Equivalent to tridiagonalizing with congruence transforms whose
    determinant is +-1; the Pfaffian is the product of the resulting
    superdiagonal entries times the accumulated permutation sign.
    Structurally singular input (a pivot column that is numerically
    zero) gives an exact 0.
    """
    A = as_antisymmetric(matrix)
    n = A.shape[0]
    if n == 0:
        return 1.0
    scale = np.abs(A).max()
    if scale == 0.0:
        return 0.0
    value = 1.0 + 0.0j if np.iscomplexobj(A) else 1.0
    for k in range(0, n - 2, 2):
        # pivot: largest entry in column k below the diagonal
        kp = k + 1 + np.argmax(np.abs(A[k + 1:, k]))
        if kp != k + 1:
            A[[k + 1, kp], :] = A[[kp, k + 1], :]
            A[:, [k + 1, kp]] = A[:, [kp, k + 1]]
            value = -value
        pivot = A[k, k + 1]
        if np.abs(pivot) < PIVOT_RATIO_FLOOR * scale:
            return 0.0
        value *= pivot
        tau = A[k, k + 2:] / pivot
        col = A[k + 2:, k + 1]
        A[k + 2:, k + 2:] += np.outer(tau, col) - np.outer(col, tau)
    value *= A[n - 2, n - 1]
    if not np.iscomplexobj(A):
        return float(value)
    return complex(value)


def dual_block(block):
    """Quaternion dual of a 2x2 block: swap the diagonal, negate the rest."""
    b = np.asarray(block)
    return np.array([[b[1, 1], -b[0, 1]], [-b[1, 0], b[0, 0]]], dtype=b.dtype)


def check_self_dual(blocks, tol=1e-10):
    """Raise unless blocks[j][i] is the dual of blocks[i][j] for all pairs."""
    B = np.asarray(blocks)
    if B.ndim != 4 or B.shape[0] != B.shape[1] or B.shape[2:] != (2, 2):
        raise ValueError(f"expected an (n, n, 2, 2) block array, got shape {B.shape}")
    scale = max(1.0, np.abs(B).max())
    for i in range(B.shape[0]):
        for j in range(i, B.shape[0]):
            defect = np.abs(B[j, i] - dual_block(B[i, j])).max()
            if defect > tol * scale:
                raise ValueError(f"blocks ({i},{j})/({j},{i}) are not mutually dual")


def flatten_blocks(blocks):
    """Reshape an (n, n, 2, 2) block array into its 2n x 2n scalar form."""
    B = np.asarray(blocks)
    n = B.shape[0]
    return B.transpose(0, 2, 1, 3).reshape(2 * n, 2 * n)


def qdet(blocks):
    """Quaternion determinant of a self-dual block matrix.

    Computed as the Pfaffian of (flattened matrix) @ inverse(Z); for
    scalar blocks c*I this reduces to the ordinary determinant of the
    scalars.
    """
    B = np.asarray(blocks)
    check_self_dual(B)
    n = B.shape[0]
    flat = flatten_blocks(B)
    z_inv = -z_matrix(n)
    return pfaffian(flat @ z_inv)
