"""Dense nonsymmetric eigenvalue solver for small real matrices.

The matrix is first reduced to upper Hessenberg form by Householder
similarity transforms, then driven to quasi-triangular form by the
implicitly shifted double-step QR iteration with deflation.  Converged
1x1 diagonal blocks give real eigenvalues, 2x2 blocks give either two
reals or an exact conjugate pair.  Only eigenvalues are returned, so
the orthogonal factors are never accumulated and each sweep touches
the active block alone.

The arithmetic runs on plain floats: Monte Carlo batches solve the
same tiny matrix shape millions of times, where array dispatch costs
more than the flops.  Sizes are capped well below where a tuned
library routine would be the right tool.
"""

from __future__ import annotations

import math

import numpy as np

DIM_CAP = 64
STEPS_PER_EIGENVALUE = 500
EXCEPTIONAL_EVERY = 10
EPS = float(np.finfo(float).eps)


class NonConvergenceError(ArithmeticError):
    """QR iteration hit its step budget before full deflation."""


def _validated_rows(matrix):
    A = np.asarray(matrix, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if A.shape[0] > DIM_CAP:
        raise ValueError(f"dimension {A.shape[0]} exceeds the cap {DIM_CAP}")
    if not np.isfinite(A).all():
        raise ValueError("matrix entries must be finite")
    return [list(map(float, row)) for row in A]


def _reduce_to_hessenberg(H):
    n = len(H)
    for k in range(n - 2):
        norm2 = 0.0
        for i in range(k + 1, n):
            norm2 += H[i][k] * H[i][k]
        if norm2 == 0.0:
            continue
        alpha = -math.sqrt(norm2) if H[k + 1][k] > 0.0 else math.sqrt(norm2)
        v = [H[i][k] for i in range(k + 1, n)]
        v[0] -= alpha
        vnorm2 = sum(c * c for c in v)
        if vnorm2 == 0.0:
            continue
        beta = 2.0 / vnorm2
        for j in range(k, n):
            t = 0.0
            for i in range(k + 1, n):
                t += v[i - k - 1] * H[i][j]
            t *= beta
            for i in range(k + 1, n):
                H[i][j] -= t * v[i - k - 1]
        for i in range(n):
            row = H[i]
            t = 0.0
            for j in range(k + 1, n):
                t += row[j] * v[j - k - 1]
            t *= beta
            for j in range(k + 1, n):
                row[j] -= t * v[j - k - 1]
        H[k + 1][k] = alpha
        for i in range(k + 2, n):
            H[i][k] = 0.0
    return H


def hessenberg(matrix):
    """Upper Hessenberg form of a real square matrix.

    Householder reflections applied as similarity transforms; entries
    below the first subdiagonal are zeroed exactly.
    """
    return np.array(_reduce_to_hessenberg(_validated_rows(matrix)))


def _block_eigvals(h11, h12, h21, h22):
    # eigenvalues of a real 2x2; the discriminant form keeps conjugate
    # pairs exactly conjugate and real pairs free of cancellation
    mid = 0.5 * (h11 + h22)
    disc = 0.25 * (h11 - h22) ** 2 + h12 * h21
    if disc < 0.0:
        r = math.sqrt(-disc)
        return complex(mid, r), complex(mid, -r)
    r = math.sqrt(disc)
    lam1 = mid + r if mid >= 0.0 else mid - r
    det = h11 * h22 - h12 * h21
    lam2 = det / lam1 if lam1 != 0.0 else mid - math.copysign(r, mid)
    return complex(lam1), complex(lam2)


def _double_step(H, lo, hi, shift_sum, shift_prod):
    # chase the bulge created by the first column of the shifted product
    h00, h01 = H[lo][lo], H[lo][lo + 1]
    h10, h11 = H[lo + 1][lo], H[lo + 1][lo + 1]
    x = h00 * h00 + h01 * h10 - shift_sum * h00 + shift_prod
    y = h10 * (h00 + h11 - shift_sum)
    z = H[lo + 2][lo + 1] * h10
    for k in range(lo, hi):
        wide = k + 2 <= hi
        if k > lo:
            x, y = H[k][k - 1], H[k + 1][k - 1]
            z = H[k + 2][k - 1] if wide else 0.0
        norm = math.sqrt(x * x + y * y + z * z)
        if norm == 0.0:
            continue
        alpha = -norm if x > 0.0 else norm
        v0, v1, v2 = x - alpha, y, z
        vnorm2 = v0 * v0 + v1 * v1 + v2 * v2
        if vnorm2 == 0.0:
            continue
        beta = 2.0 / vnorm2
        r0, r1 = H[k], H[k + 1]
        if wide:
            r2 = H[k + 2]
            for j in range(max(lo, k - 1), hi + 1):
                t = beta * (v0 * r0[j] + v1 * r1[j] + v2 * r2[j])
                r0[j] -= t * v0
                r1[j] -= t * v1
                r2[j] -= t * v2
            for i in range(lo, min(k + 3, hi) + 1):
                ri = H[i]
                t = beta * (v0 * ri[k] + v1 * ri[k + 1] + v2 * ri[k + 2])
                ri[k] -= t * v0
                ri[k + 1] -= t * v1
                ri[k + 2] -= t * v2
        else:
            for j in range(max(lo, k - 1), hi + 1):
                t = beta * (v0 * r0[j] + v1 * r1[j])
                r0[j] -= t * v0
                r1[j] -= t * v1
            for i in range(lo, min(k + 3, hi) + 1):
                ri = H[i]
                t = beta * (v0 * ri[k] + v1 * ri[k + 1])
                ri[k] -= t * v0
                ri[k + 1] -= t * v1
        if k > lo:
            # the reflection maps its own bulge column onto the axis
            H[k + 1][k - 1] = 0.0
            if wide:
                H[k + 2][k - 1] = 0.0


def eig_nonsymmetric(matrix):
    """All eigenvalues of a real square matrix, as a complex array.

    Complex eigenvalues come out in exact conjugate pairs; no ordering
    is guaranteed.  Raises NonConvergenceError if the iteration budget
    is exhausted before the matrix deflates completely.
    """
    H = _reduce_to_hessenberg(_validated_rows(matrix))
    n = len(H)
    if n == 0:
        return np.empty(0, dtype=complex)
    if n == 1:
        return np.array([complex(H[0][0])])
    scale = max(abs(e) for row in H for e in row)
    if scale == 0.0:
        return np.zeros(n, dtype=complex)
    eigs = []
    budget = STEPS_PER_EIGENVALUE * n
    steps = 0
    stuck = 0
    hi = n - 1
    while hi >= 0:
        lo = hi
        while lo > 0:
            local = abs(H[lo - 1][lo - 1]) + abs(H[lo][lo])
            if abs(H[lo][lo - 1]) <= EPS * (local if local > 0.0 else scale):
                H[lo][lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            eigs.append(complex(H[hi][hi]))
            hi -= 1
            stuck = 0
            continue
        if lo == hi - 1:
            eigs.extend(_block_eigvals(H[lo][lo], H[lo][hi], H[hi][lo], H[hi][hi]))
            hi -= 2
            stuck = 0
            continue
        steps += 1
        stuck += 1
        if steps > budget:
            raise NonConvergenceError(
                f"no deflation after {budget} double steps (active block {lo}:{hi})"
            )
        if stuck % EXCEPTIONAL_EVERY == 0:
            # ad hoc shift from the subdiagonal magnitudes; breaks the
            # rare limit cycles of the trailing-block shift pair
            s = abs(H[hi][hi - 1]) + abs(H[hi - 1][hi - 2])
            d11 = 0.75 * s + H[hi][hi]
            shift_sum = 2.0 * d11
            shift_prod = d11 * d11 + 0.4375 * s * s
        else:
            shift_sum = H[hi - 1][hi - 1] + H[hi][hi]
            shift_prod = (
                H[hi - 1][hi - 1] * H[hi][hi] - H[hi - 1][hi] * H[hi][hi - 1]
            )
        _double_step(H, lo, hi, shift_sum, shift_prod)
    return np.array(eigs)
