"""Acceptance suite: one test per release gate, run with pytest -v.

Each test pins the tolerances and the runtime budget of its gate and
prints a single PASS line on success, so the -v output reads as a
checklist.  Reference values come from independent routes: LAPACK
determinants, closed-form pair norms, quadrature of the densities, and
seeded Monte Carlo sampling.
"""

import math
import time

import numpy as np

from betaone.ginibre import (
    ginoe_norm,
    ginoe_skew_inner,
    partition_function_check,
)
from betaone.ginoe_kernels import (
    ginoe_even_kernel,
    ginoe_odd_kernel,
    ginoe_summed_S,
    interrelations_check,
)
from betaone.kernels import (
    beta1_even_kernel,
    beta1_odd_kernel,
    density_integral,
    dyson_recurrence_check,
)
from betaone.montecarlo import (
    empirical_vs_analytic,
    ginibre_spectra,
    goe_spectra,
)
from betaone.pfaffian import (
    dual_block,
    flatten_blocks,
    pfaffian,
    pfaffian_laplace,
    qdet,
)
from betaone.reduction import (
    PointConfiguration,
    pfaffian_reduction_identity,
    factorisation_check,
    verify_odd_limit_beta1,
    verify_odd_limit_ginoe,
)
from betaone.skewortho import build_family_beta1, gaussian_weight, hatted_beta1

SQRT_2PI = math.sqrt(2.0 * math.pi)


def beta1_bundle(N):
    family = build_family_beta1(gaussian_weight(), N)
    if N % 2 == 0:
        return beta1_even_kernel(family)
    return beta1_odd_kernel(hatted_beta1(family))


def ginoe_bundle(N):
    return ginoe_even_kernel(N) if N % 2 == 0 else ginoe_odd_kernel(N)


def report(label, detail, elapsed, budget):
    assert elapsed <= budget, f"{label} exceeded its {budget:.0f}s budget"
    print(f"{label}: PASS ({detail}, {elapsed:.1f}s)")


def relative(value, reference, floor=1e-12):
    return abs(value - reference) / max(abs(reference), floor)


def test_criterion_01_pfaffian_squared_is_determinant():
    start = time.time()
    rng = np.random.default_rng(1001)
    worst = 0.0
    for trial in range(200):
        n = 2 * int(rng.integers(1, 11))
        A = rng.standard_normal((n, n))
        if trial % 2:
            A = A + 1j * rng.standard_normal((n, n))
        A = A - A.T
        det = np.linalg.det(A)
        worst = max(worst, relative(pfaffian(A) ** 2, det))
    assert worst <= 1e-10
    worst_laplace = 0.0
    for _ in range(50):
        n = 2 * int(rng.integers(1, 6))
        A = rng.standard_normal((n, n))
        A = A - A.T
        worst_laplace = max(
            worst_laplace, relative(pfaffian(A), pfaffian_laplace(A))
        )
    assert worst_laplace <= 1e-10
    report(
        "criterion 1 (pfaffian correctness)",
        f"squared gap {worst:.2e}, expansion gap {worst_laplace:.2e}",
        time.time() - start,
        10.0,
    )


def test_criterion_02_quaternion_determinant_squared():
    start = time.time()
    rng = np.random.default_rng(1002)
    worst = 0.0
    for trial in range(100):
        n_blocks = int(rng.integers(1, 7))
        dtype = complex if trial % 2 else float
        blocks = np.zeros((n_blocks, n_blocks, 2, 2), dtype=dtype)
        for i in range(n_blocks):
            blocks[i, i] = rng.normal() * np.eye(2)
            for j in range(i + 1, n_blocks):
                b = rng.normal(size=(2, 2))
                if dtype is complex:
                    b = b + 1j * rng.normal(size=(2, 2))
                blocks[i, j] = b
                blocks[j, i] = dual_block(b)
        det = np.linalg.det(flatten_blocks(blocks))
        worst = max(worst, relative(qdet(blocks) ** 2, det))
    assert worst <= 1e-10
    report(
        "criterion 2 (quaternion determinant identity)",
        f"worst relative gap {worst:.2e}",
        time.time() - start,
        5.0,
    )


def test_criterion_03_ginoe_skew_orthogonality():
    start = time.time()
    N = 8
    r0 = ginoe_norm(0)
    worst_zero = 0.0
    worst_norm = 0.0
    for j in range(1, N // 2 + 1):
        for k in range(1, N // 2 + 1):
            worst_zero = max(
                worst_zero,
                abs(ginoe_skew_inner(2 * j, 2 * k)),
                abs(ginoe_skew_inner(2 * j - 1, 2 * k - 1)),
            )
        quadrature = ginoe_skew_inner(2 * j - 1, 2 * j)
        expected = 2.0 * SQRT_2PI * math.gamma(2 * j - 1)
        worst_norm = max(worst_norm, relative(quadrature, expected))
    assert worst_zero <= 1e-6 * r0
    assert worst_norm <= 1e-5
    report(
        "criterion 3 (ginoe skew-orthogonality)",
        f"zero pairings {worst_zero:.2e}, norm gap {worst_norm:.2e}",
        time.time() - start,
        60.0,
    )


def test_criterion_04_partition_function_normalization():
    start = time.time()
    worst = max(abs(partition_function_check(N) - 1.0) for N in (2, 3, 4))
    assert worst <= 1e-4
    report(
        "criterion 4 (prefactor times pairing pfaffian)",
        f"worst gap from 1 is {worst:.2e}",
        time.time() - start,
        60.0,
    )


def test_criterion_05_density_normalization():
    start = time.time()
    worst = 0.0
    for N in (2, 3, 4, 5):
        worst = max(worst, relative(density_integral(beta1_bundle(N)), N))
    assert worst <= 1e-5
    report(
        "criterion 5 (density integrates to N)",
        f"worst relative gap {worst:.2e}",
        time.time() - start,
        30.0,
    )


def test_criterion_06_integrate_out_recurrence():
    start = time.time()
    probes = (-1.5, -0.6, 0.0, 0.8, 1.7)
    worst = 0.0
    for N in (3, 4, 5, 6):
        bundle = beta1_bundle(N)
        for x in probes:
            check = dyson_recurrence_check(bundle, 1, (x,))
            worst = max(worst, check["relative_deviation"])
    assert worst <= 1e-5
    report(
        "criterion 6 (pair density integrates down)",
        f"worst relative gap {worst:.2e}",
        time.time() - start,
        60.0,
    )


def test_criterion_07_even_to_odd_reduction():
    start = time.time()
    reports = (
        ("beta1 4->3", verify_odd_limit_beta1(4)),
        ("beta1 6->5", verify_odd_limit_beta1(6)),
        ("ginoe 4->3", verify_odd_limit_ginoe(4)),
    )
    for label, rep in reports:
        assert rep.schedule[-1] == 12.0, label
        assert rep.final_deviation <= 1e-3, label
        assert rep.monotone, label
        assert rep.identity_gap <= 1e-8, label
    # the pre-limit identity also holds for two-point configurations
    worst_identity = 0.0
    config = PointConfiguration(reals=(0.5, -0.2))
    for bundle in (beta1_bundle(4), beta1_bundle(6), ginoe_bundle(4)):
        worst_identity = max(
            worst_identity, pfaffian_reduction_identity(bundle, config, 6.0)
        )
    assert worst_identity <= 1e-8
    finals = ", ".join(f"{label} {rep.final_deviation:.1e}" for label, rep in reports)
    report(
        "criterion 7 (even to odd reduction)",
        f"final deviations {finals}; identity gap {worst_identity:.1e}",
        time.time() - start,
        120.0,
    )


def test_criterion_08_summed_kernels_match_finite_sums():
    start = time.time()
    shifts = np.linspace(-1.9, 1.9, 20)
    worst = 0.0
    for N in (4, 5):
        bundle = ginoe_bundle(N)
        for t in shifts:
            probes = {
                "rr": (t, 0.3 - 0.4 * t),
                "rc": (t, 0.2 * t + 0.6j),
                "cr": (0.2 * t + 0.6j, t),
                "cc": (0.5 * t + 0.5j, -0.4 * t + 0.9j),
            }
            for block, (mu, eta) in probes.items():
                finite = bundle.scalar_kernel(mu, eta)
                closed = ginoe_summed_S(N, block, mu, eta)
                worst = max(worst, abs(finite - closed) / max(abs(closed), 1e-10))
    assert worst <= 1e-8
    report(
        "criterion 8 (closed forms for both parities)",
        f"worst relative gap {worst:.2e} over 20-point grids",
        time.time() - start,
        30.0,
    )


def test_criterion_09_block_interrelations():
    start = time.time()
    rng = np.random.default_rng(1009)
    worst = 0.0
    for N in (4, 5):
        bundle = ginoe_bundle(N)
        reals = tuple(rng.uniform(-2.0, 2.0, size=5))
        complexes = tuple(
            complex(u, v)
            for u, v in zip(
                rng.uniform(-1.5, 1.5, size=5), rng.uniform(0.2, 1.4, size=5)
            )
        )
        relations = interrelations_check(bundle, reals, complexes)
        worst = max(worst, max(relations.values()))
    assert worst <= 1e-5
    report(
        "criterion 9 (derivative and integral relations)",
        f"worst deviation {worst:.2e} at 10 random points per size",
        time.time() - start,
        30.0,
    )


def test_criterion_10_monte_carlo_ground_truth():
    start = time.time()
    runs = (
        (ginibre_spectra, 3, ginoe_bundle(3), 2101),
        (ginibre_spectra, 4, ginoe_bundle(4), 2102),
        (goe_spectra, 3, beta1_bundle(3), 2103),
    )
    details = []
    for sampler, N, bundle, seed in runs:
        samples, meta = sampler(N, 100_000, seed)
        comparison = empirical_vs_analytic(samples, bundle, bins=40, meta=meta)
        assert comparison.flagged == (), (meta["ensemble"], N)
        assert comparison.count_within, (meta["ensemble"], N)
        details.append(
            "%s N=%d worst |z|=%.2f"
            % (meta["ensemble"], N, max(abs(z) for z in comparison.z_scores))
        )
    report(
        "criterion 10 (sampled spectra match kernels)",
        "; ".join(details),
        time.time() - start,
        600.0,
    )


def test_criterion_11_factorisation_ratio():
    start = time.time()
    config = PointConfiguration(reals=(0.07,))
    gaps = {
        "beta1": abs(
            factorisation_check(beta1_bundle(4), beta1_bundle(3), config, 10.0) - 1.0
        ),
        "ginoe": abs(
            factorisation_check(ginoe_bundle(4), ginoe_bundle(3), config, 10.0) - 1.0
        ),
    }
    assert all(gap <= 1e-2 for gap in gaps.values()), gaps
    report(
        "criterion 11 (conditioned correlation factorises)",
        ", ".join(f"{k} ratio gap {v:.2e}" for k, v in gaps.items()),
        time.time() - start,
        60.0,
    )
