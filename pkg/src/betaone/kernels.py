"""Correlation kernels for weights on the real line at both parities.

An n-point correlation is the Pfaffian of a 2n x 2n antisymmetric
matrix built from three scalar functions: the scalar kernel carrying
the density, its derivative-type partner, and an integrated partner
containing a sign-function term.  Even sizes pair the family
polynomials directly; odd sizes use the hatted companions plus
rank-one corrections tied to the top polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pfaffian import pfaffian
from .quadrature import integrate_line
from .skewortho import half_range_transform, poly_eval


@dataclass(frozen=True)
class PointConfiguration:
    """Evaluation points: reals plus upper-half-plane representatives."""

    reals: tuple = ()
    complexes: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "reals", tuple(float(x) for x in self.reals))
        object.__setattr__(self, "complexes", tuple(complex(z) for z in self.complexes))
        if any(z.imag <= 0.0 for z in self.complexes):
            raise ValueError("complex points must lie strictly above the real axis")

    def __len__(self):
        return len(self.reals) + len(self.complexes)


@dataclass(frozen=True)
class KernelBundle:
    """Evaluable kernel triple with its point-matrix assembler.

    scalar_kernel(x, x) is the one-point density; derivative_kernel and
    integral_kernel complete the 2x2 cell structure whose Pfaffian over
    a point configuration gives the correlations.
    """

    ensemble: str
    N: int
    parity: str
    family: object
    scalar_kernel: callable
    derivative_kernel: callable
    integral_kernel: callable
    assemble: callable


def _as_config(points):
    if isinstance(points, PointConfiguration):
        return points
    return PointConfiguration(reals=tuple(np.atleast_1d(points)))


def rho(bundle, points):
    """n-point correlation at a point configuration."""
    config = _as_config(points)
    if len(config) == 0:
        raise ValueError("need at least one point")
    return pfaffian(bundle.assemble(config))


def _line_assemble(scalar_kernel, derivative_kernel, integral_kernel):
    def assemble(config):
        if config.complexes:
            raise ValueError("this ensemble lives on the real line only")
        pts = config.reals
        n = len(pts)
        A = np.zeros((2 * n, 2 * n))
        for i in range(n):
            for j in range(n):
                A[2 * i, 2 * j] = -integral_kernel(pts[i], pts[j])
                A[2 * i, 2 * j + 1] = scalar_kernel(pts[i], pts[j])
                A[2 * i + 1, 2 * j] = -scalar_kernel(pts[j], pts[i])
                A[2 * i + 1, 2 * j + 1] = derivative_kernel(pts[i], pts[j])
        return A

    return assemble


def beta1_even_kernel(family, N=None):
    """Kernel bundle for an even number of eigenvalues."""
    N = family.N if N is None else N
    if N % 2 != 0:
        raise ValueError("even-size kernel needs even N")
    if N > family.N:
        raise ValueError("family too small for the requested size")
    pairs = N // 2
    weight = family.weight
    coeffs = family.coeffs
    norms = family.norms

    def phi(k, x):
        return half_range_transform(coeffs[k], weight, x)

    def weighted(k, x):
        return poly_eval(coeffs[k], x) * np.exp(-weight.V(x))

    def scalar_kernel(x, y):
        total = 0.0
        for k in range(pairs):
            total = total + (
                phi(2 * k, x) * weighted(2 * k + 1, y)
                - phi(2 * k + 1, x) * weighted(2 * k, y)
            ) / norms[k]
        return total

    def derivative_kernel(x, y):
        total = 0.0
        for k in range(pairs):
            total = total + (
                weighted(2 * k, x) * weighted(2 * k + 1, y)
                - weighted(2 * k + 1, x) * weighted(2 * k, y)
            ) / norms[k]
        return total

    def integral_kernel(x, y):
        total = 0.5 * np.sign(np.asarray(y) - np.asarray(x))
        for k in range(pairs):
            total = total + (
                phi(2 * k + 1, x) * phi(2 * k, y) - phi(2 * k, x) * phi(2 * k + 1, y)
            ) / norms[k]
        return total

    return KernelBundle(
        ensemble="beta1:" + weight.label,
        N=N,
        parity="even",
        family=family,
        scalar_kernel=scalar_kernel,
        derivative_kernel=derivative_kernel,
        integral_kernel=integral_kernel,
        assemble=_line_assemble(scalar_kernel, derivative_kernel, integral_kernel),
    )


def beta1_odd_kernel(hatted, N=None):
    """Kernel bundle for an odd number of eigenvalues.

    Built from the hatted companions: the pair sums run over the hatted
    norms below the top one, and the scalar/integrated kernels carry
    rank-one terms tied to the weighted top polynomial.
    """
    N = hatted.N if N is None else N
    if N % 2 != 1:
        raise ValueError("odd-size kernel needs odd N")
    if N != hatted.N:
        raise ValueError("hatted companions are built for one size only")
    pairs = (N - 1) // 2
    weight = hatted.weight
    norms = hatted.hat_norms
    top = norms[-1]

    def phi(k, x):
        return hatted.phi(k, x)

    def weighted(k, x):
        return hatted.weighted_poly(k, x)

    def scalar_kernel(x, y):
        total = weighted(N - 1, y) / (2.0 * top)
        for k in range(pairs):
            total = total + (
                phi(2 * k, x) * weighted(2 * k + 1, y)
                - phi(2 * k + 1, x) * weighted(2 * k, y)
            ) / norms[k]
        return total

    def derivative_kernel(x, y):
        total = np.zeros(np.broadcast(np.asarray(x), np.asarray(y)).shape)
        for k in range(pairs):
            total = total + (
                weighted(2 * k, x) * weighted(2 * k + 1, y)
                - weighted(2 * k + 1, x) * weighted(2 * k, y)
            ) / norms[k]
        return total

    def integral_kernel(x, y):
        total = 0.5 * np.sign(np.asarray(y) - np.asarray(x))
        total = total + (phi(N - 1, x) - phi(N - 1, y)) / (2.0 * top)
        for k in range(pairs):
            total = total + (
                phi(2 * k + 1, x) * phi(2 * k, y) - phi(2 * k, x) * phi(2 * k + 1, y)
            ) / norms[k]
        return total

    return KernelBundle(
        ensemble="beta1:" + weight.label,
        N=N,
        parity="odd",
        family=hatted,
        scalar_kernel=scalar_kernel,
        derivative_kernel=derivative_kernel,
        integral_kernel=integral_kernel,
        assemble=_line_assemble(scalar_kernel, derivative_kernel, integral_kernel),
    )


def density(bundle, x):
    """One-point correlation, vectorized over x."""
    return bundle.scalar_kernel(x, x)


def density_integral(bundle, tol=1e-9):
    """Integral of the one-point correlation; equals N."""
    return integrate_line(
        lambda x: bundle.scalar_kernel(x, x), tol=tol, degree=2 * bundle.N
    )


def dyson_recurrence_check(bundle, n, points, tol=1e-8):
    """Integrating out one argument drops an n+1 point correlation to
    (N - n) times the n point one; returns both sides and the deviation.
    """
    points = tuple(float(p) for p in points)
    if len(points) != n:
        raise ValueError("need exactly n probe points")
    base = rho(bundle, points)

    def integrand(ys):
        return np.array([rho(bundle, points + (float(y),)) for y in np.atleast_1d(ys)])

    integrated = integrate_line(
        integrand, tol=tol, breakpoints=points, degree=2 * bundle.N
    )
    expected = (bundle.N - n) * base
    scale = max(abs(expected), 1e-12)
    return {
        "n": n,
        "points": points,
        "integrated": integrated,
        "expected": expected,
        "relative_deviation": abs(integrated - expected) / scale,
    }
