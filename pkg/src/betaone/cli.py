"""Command line harness: density grids, correlations, self checks, and
Monte Carlo comparisons.

Exit codes: 0 success (and all checks passed where checks ran), 1 a
verification or comparison failed, 2 invalid configuration, 3 numerical
failure.  Output is deterministic for a fixed configuration: fixed
float formatting, no timestamps, seeded randomness only.  CSV reports
start with `# key=value` comment lines echoing the configuration and
the library version, then a column header, then data rows.
"""

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .ginibre import ginoe_norm, ginoe_skew_inner
from .ginoe_kernels import (
    ginoe_even_kernel,
    ginoe_odd_kernel,
    ginoe_rho,
    ginoe_summed_S,
    interrelations_check,
)
from .kernels import (
    PointConfiguration,
    beta1_even_kernel,
    beta1_odd_kernel,
    density_integral,
    dyson_recurrence_check,
    rho,
)
from .montecarlo import (
    MIN_COMPARISON_SAMPLES,
    REALNESS_FACTOR,
    empirical_vs_analytic,
    ginibre_spectra,
    goe_spectra,
)
from .pfaffian import dual_block, flatten_blocks, pfaffian, pfaffian_laplace, qdet
from .reduction import verify_odd_limit_beta1, verify_odd_limit_ginoe
from .skewortho import build_family_beta1, gaussian_weight, hatted_beta1, skew_inner

SUITES = ("pfaffian", "skew", "kernels", "reduction", "all")
PATHS = ("finite-sum", "summed-up", "both")
DEFAULT_TOLERANCES = {
    "pfaffian": 1e-10,
    "skew": 1e-6,
    "kernels": 1e-5,
    "reduction": 1e-3,
}
CLOSED_FORM_TOL = 1e-8
IDENTITY_TOL = 1e-8
MAX_CORRELATE_POINTS = 5
FAILURE_RATE_CAP = 1e-3


class ConfigError(ValueError):
    """Invalid run configuration; mapped to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    ensemble: str
    size: int
    seed: int
    out: str
    format: str
    grid: tuple = None
    path: str = "finite-sum"
    points: tuple = ()
    suite: str = "all"
    tolerances: dict = None
    samples: int = 0
    bins: int = 40
    threshold_factor: float = REALNESS_FACTOR

    @property
    def parity(self):
        return "even" if self.size % 2 == 0 else "odd"

    def echo(self):
        """Configuration keys in a fixed order, for report headers."""
        rows = [
            ("command", self.command),
            ("version", __version__),
            ("ensemble", self.ensemble),
            ("size", self.size),
            ("parity", self.parity),
            ("seed", self.seed),
            ("format", self.format),
        ]
        if self.command == "density":
            lo, hi, count = self.grid
            rows.append(("grid", "%s:%s:%d" % (_fmt(lo), _fmt(hi), count)))
            rows.append(("path", self.path))
        elif self.command == "correlate":
            rows.append(("points", ",".join(_fmt_point(z) for z in self.points)))
        elif self.command == "verify":
            rows.append(("suite", self.suite))
            for name in sorted(self.tolerances):
                rows.append(("tol_" + name, _fmt(self.tolerances[name])))
        elif self.command == "mc-compare":
            rows.append(("samples", self.samples))
            rows.append(("bins", self.bins))
            rows.append(("threshold_factor", _fmt(self.threshold_factor)))
        return rows


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, complex):
        return "%.17g%+.17gj" % (value.real, value.imag)
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    return str(value)


def _fmt_point(z):
    return _fmt(z.real) if z.imag == 0.0 else _fmt(z)


def _jsonable(value):
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, (np.integer, np.floating, np.bool_)):
        return value.item()
    if isinstance(value, np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return value


def _csv_text(config, columns, rows, extra=()):
    lines = ["# %s=%s" % (k, _fmt(v)) for k, v in (*config.echo(), *extra)]
    lines.append(",".join(columns))
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json_text(config, payload, extra=()):
    doc = {"config": {k: _jsonable(v) for k, v in config.echo()}}
    for k, v in (*extra, *payload.items()):
        doc[k] = _jsonable(v)
    return json.dumps(doc, indent=2) + "\n"


def _parse_grid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError("grid must look like min:max:count")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError("grid must look like min:max:count") from None
    if count < 2:
        raise ConfigError("grid needs at least two points")
    if not lo < hi:
        raise ConfigError("grid minimum must lie below its maximum")
    return lo, hi, count


def _parse_points(text):
    points = []
    for token in text.split(","):
        token = token.strip()
        try:
            points.append(complex(token))
        except ValueError:
            raise ConfigError("cannot parse point %r" % token) from None
    if not points:
        raise ConfigError("need at least one point")
    return tuple(points)


def kernel_bundle(ensemble, size):
    """Kernel bundle for the ensemble at the given size, parity derived."""
    if ensemble == "ginoe":
        if size % 2 == 0:
            return ginoe_even_kernel(size)
        return ginoe_odd_kernel(size)
    family = build_family_beta1(gaussian_weight(), size)
    if size % 2 == 0:
        return beta1_even_kernel(family)
    return beta1_odd_kernel(hatted_beta1(family))


def make_config(args):
    if args.size < 1:
        raise ConfigError("size must be a positive integer")
    command = args.command
    fields = dict(
        command=command,
        ensemble=args.ensemble,
        size=args.size,
        seed=args.seed,
        out=args.out,
        format=args.format or ("json" if command == "verify" else "csv"),
    )
    if command == "density":
        fields["grid"] = _parse_grid(args.grid)
        fields["path"] = args.path
        if args.path != "finite-sum":
            if args.ensemble != "ginoe":
                raise ConfigError("the closed-form path applies to ginoe only")
            if args.size < 2:
                raise ConfigError("the closed-form path needs size >= 2")
    elif command == "correlate":
        points = _parse_points(args.points)
        if len(points) > MAX_CORRELATE_POINTS:
            raise ConfigError(
                "at most %d points are supported" % MAX_CORRELATE_POINTS
            )
        if len(set(points)) != len(points):
            raise ConfigError("points must be distinct")
        if any(z.imag < 0 for z in points):
            raise ConfigError("complex points must lie above the real axis")
        if any(z.imag > 0 for z in points) and args.ensemble != "ginoe":
            raise ConfigError("complex points need the ginoe ensemble")
        fields["points"] = points
    elif command == "verify":
        tolerances = {
            name: getattr(args, "tol_" + name) for name in DEFAULT_TOLERANCES
        }
        if any(tol <= 0 for tol in tolerances.values()):
            raise ConfigError("tolerances must be positive")
        fields["suite"] = args.suite
        fields["tolerances"] = tolerances
    elif command == "mc-compare":
        if args.samples < MIN_COMPARISON_SAMPLES:
            raise ConfigError(
                "need at least %d samples" % MIN_COMPARISON_SAMPLES
            )
        if args.bins < 2:
            raise ConfigError("need at least two bins")
        if args.threshold <= 0:
            raise ConfigError("threshold must be positive")
        fields["samples"] = args.samples
        fields["bins"] = args.bins
        fields["threshold_factor"] = args.threshold
    return RunConfig(**fields)


def cmd_density(config):
    """One-point density on a uniform grid."""
    lo, hi, count = config.grid
    xs = np.linspace(lo, hi, count)
    bundle = kernel_bundle(config.ensemble, config.size)
    extra = [("kernel", "%s-%s" % (config.ensemble, config.parity))]
    finite = closed = None
    if config.path != "summed-up":
        finite = [float(np.real(bundle.scalar_kernel(x, x))) for x in xs]
    if config.path != "finite-sum":
        closed = [
            float(np.real(ginoe_summed_S(config.size, "rr", x, x))) for x in xs
        ]
    if config.path == "both":
        gap = max(abs(f - c) for f, c in zip(finite, closed))
        if gap > CLOSED_FORM_TOL:
            raise ArithmeticError(
                "finite-sum and closed-form densities disagree by %.3e" % gap
            )
        extra.append(("path_gap", gap))
        columns = ("x", "density_finite_sum", "density_closed_form")
        series = (finite, closed)
    else:
        columns = ("x", "density")
        series = (finite if config.path == "finite-sum" else closed,)
    if config.format == "json":
        payload = {"x": list(xs)}
        payload.update(zip(columns[1:], series))
        return _json_text(config, payload, extra), 0
    rows = list(zip(xs, *series))
    return _csv_text(config, columns, rows, extra), 0


def cmd_correlate(config):
    """Correlation at explicit points, plus the assembled matrix dump."""
    reals = tuple(z.real for z in config.points if z.imag == 0.0)
    complexes = tuple(z for z in config.points if z.imag != 0.0)
    pc = PointConfiguration(reals=reals, complexes=complexes)
    bundle = kernel_bundle(config.ensemble, config.size)
    if config.ensemble == "ginoe":
        value, residue = ginoe_rho(bundle, pc)
    else:
        value, residue = float(rho(bundle, pc)), 0.0
    matrix = np.asarray(bundle.assemble(pc))
    extra = [("imag_residue", residue)]
    if config.format == "json":
        payload = {"rho": value, "matrix": matrix}
        return _json_text(config, payload, extra), 0
    rows = [("rho", "", "", value)]
    for i in range(matrix.shape[0]):
        for j in range(matrix.shape[1]):
            entry = matrix[i, j]
            rows.append(("matrix", i, j, complex(entry) if np.iscomplexobj(matrix) else float(entry)))
    return _csv_text(config, ("record", "row", "col", "value"), rows, extra), 0


def _check(suite, name, deviation, tolerance):
    deviation = float(deviation)
    tolerance = float(tolerance)
    return {
        "suite": suite,
        "check": name,
        "deviation": deviation,
        "tolerance": tolerance,
        "passed": deviation <= tolerance,
    }


def _random_self_dual(rng, n_blocks):
    blocks = np.zeros((n_blocks, n_blocks, 2, 2))
    for i in range(n_blocks):
        blocks[i, i] = rng.normal() * np.eye(2)
        for j in range(i + 1, n_blocks):
            b = rng.normal(size=(2, 2))
            blocks[i, j] = b
            blocks[j, i] = dual_block(b)
    return blocks


def _squared_gap(A):
    # LAPACK determinant as the reference value
    det = np.linalg.det(A)
    return abs(pfaffian(A) ** 2 - det) / max(1.0, abs(det))


def _suite_pfaffian(config):
    tol = config.tolerances["pfaffian"]
    rng = np.random.default_rng(config.seed)
    worst_real = worst_complex = 0.0
    for _ in range(30):
        n = 2 * int(rng.integers(1, 7))
        A = rng.standard_normal((n, n))
        worst_real = max(worst_real, _squared_gap(A - A.T))
        B = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        worst_complex = max(worst_complex, _squared_gap(B - B.T))
    worst_cofactor = 0.0
    for _ in range(10):
        n = 2 * int(rng.integers(1, 5))
        A = rng.standard_normal((n, n))
        A = A - A.T
        reference = pfaffian_laplace(A)
        gap = abs(pfaffian(A) - reference) / max(1.0, abs(reference))
        worst_cofactor = max(worst_cofactor, gap)
    worst_qdet = 0.0
    for _ in range(10):
        blocks = _random_self_dual(rng, int(rng.integers(1, 5)))
        det = np.linalg.det(flatten_blocks(blocks))
        gap = abs(qdet(blocks) ** 2 - det) / max(1.0, abs(det))
        worst_qdet = max(worst_qdet, gap)
    return [
        _check("pfaffian", "squared-vs-determinant-real", worst_real, tol),
        _check("pfaffian", "squared-vs-determinant-complex", worst_complex, tol),
        _check("pfaffian", "elimination-vs-cofactor", worst_cofactor, tol),
        _check("pfaffian", "quaternion-determinant-squared", worst_qdet, tol),
    ]


def _suite_skew(config):
    tol = config.tolerances["skew"]
    if config.ensemble == "goe":
        family = build_family_beta1(gaussian_weight(), max(config.size, 2))
        r0 = abs(family.norms[0])
        worst = 0.0
        for j in range(family.N):
            for k in range(j + 1, family.N):
                inner = skew_inner(family.coeffs[j], family.coeffs[k], family.weight)
                if j % 2 == 0 and k == j + 1:
                    inner -= family.norms[j // 2]
                worst = max(worst, abs(inner) / r0)
        return [_check("skew", "gram-residual", worst, tol)]
    pairs = max(config.size // 2, 1)
    r0 = ginoe_norm(0)
    worst_zero = 0.0
    worst_norm = 0.0
    for j in range(1, pairs + 1):
        for k in range(1, pairs + 1):
            worst_zero = max(
                worst_zero,
                abs(ginoe_skew_inner(2 * j, 2 * k)),
                abs(ginoe_skew_inner(2 * j - 1, 2 * k - 1)),
            )
            if j != k:
                worst_zero = max(worst_zero, abs(ginoe_skew_inner(2 * j - 1, 2 * k)))
        quadrature = ginoe_skew_inner(2 * j - 1, 2 * j)
        expected = ginoe_norm(j - 1)
        worst_norm = max(worst_norm, abs(quadrature - expected) / abs(expected))
    return [
        _check("skew", "off-pair-zeros", worst_zero / r0, tol),
        _check("skew", "pair-norms", worst_norm, tol),
    ]


SUMMED_PROBES = {
    "rr": (0.4, -1.2),
    "rc": (0.4, 0.3 + 0.8j),
    "cr": (0.3 + 0.8j, 0.4),
    "cc": (0.3 + 0.8j, -0.5 + 1.1j),
}


def _suite_kernels(config):
    tol = config.tolerances["kernels"]
    bundle = kernel_bundle(config.ensemble, config.size)
    if config.ensemble == "goe":
        gap = abs(density_integral(bundle) - bundle.N) / bundle.N
        worst = 0.0
        for x in (-1.1, 0.37):
            report = dyson_recurrence_check(bundle, 1, (x,))
            worst = max(worst, report["relative_deviation"])
        return [
            _check("kernels", "density-normalization", gap, tol),
            _check("kernels", "integrate-out-recurrence", worst, tol),
        ]
    relations = interrelations_check(bundle, (0.3, -0.8), (0.4 + 0.6j,))
    checks = [
        _check("kernels", "block-interrelations", max(relations.values()), tol)
    ]
    if bundle.N >= 2:
        worst = 0.0
        for block, (mu, eta) in SUMMED_PROBES.items():
            finite = bundle.scalar_kernel(mu, eta)
            closed = ginoe_summed_S(bundle.N, block, mu, eta)
            worst = max(worst, abs(finite - closed))
        checks.append(
            _check("kernels", "closed-form-agreement", worst, CLOSED_FORM_TOL)
        )
    return checks


def _suite_reduction(config):
    tol = config.tolerances["reduction"]
    if config.size % 2 or config.size < 4:
        raise ConfigError("the reduction suite needs an even size of at least 4")
    if config.ensemble == "goe":
        report = verify_odd_limit_beta1(config.size)
    else:
        report = verify_odd_limit_ginoe(config.size)
    return [
        _check("reduction", "final-deviation", report.final_deviation, tol),
        _check(
            "reduction",
            "monotone-violation",
            0.0 if report.monotone else 1.0,
            0.0,
        ),
        _check("reduction", "pfaffian-identity-gap", report.identity_gap, IDENTITY_TOL),
    ]


SUITE_RUNNERS = {
    "pfaffian": _suite_pfaffian,
    "skew": _suite_skew,
    "kernels": _suite_kernels,
    "reduction": _suite_reduction,
}


def cmd_verify(config):
    """Self-check suites built from the library's own cross relations."""
    names = SUITES[:-1] if config.suite == "all" else (config.suite,)
    checks = []
    for name in names:
        checks.extend(SUITE_RUNNERS[name](config))
    failed = [c for c in checks if not c["passed"]]
    extra = [("passed", not failed), ("checks", len(checks))]
    if config.format == "csv":
        columns = ("suite", "check", "deviation", "tolerance", "passed")
        rows = [tuple(c[k] for k in columns) for c in checks]
        text = _csv_text(config, columns, rows, extra)
    else:
        text = _json_text(config, {"passed": not failed, "checks": checks})
    for c in failed:
        print(
            "verify failed: %s/%s deviation=%s tolerance=%s"
            % (c["suite"], c["check"], _fmt(c["deviation"]), _fmt(c["tolerance"])),
            file=sys.stderr,
        )
    return text, 1 if failed else 0


def cmd_mc_compare(config):
    """Sampled spectra against the analytic real-axis density."""
    sampler = ginibre_spectra if config.ensemble == "ginoe" else goe_spectra
    samples, meta = sampler(
        config.size, config.samples, config.seed, config.threshold_factor
    )
    rate = meta["resamples"] / config.samples
    if rate > FAILURE_RATE_CAP:
        raise ArithmeticError(
            "eigensolver failure rate %.4g exceeds %.4g"
            % (rate, FAILURE_RATE_CAP)
        )
    bundle = kernel_bundle(config.ensemble, config.size)
    report_meta = dict(config.echo())
    report_meta.update(meta)
    report = empirical_vs_analytic(
        samples, bundle, bins=config.bins, meta=report_meta
    )
    if config.format == "json":
        text = report.as_json()
    else:
        summary = [
            ("generator", meta["generator"]),
            ("resamples", meta["resamples"]),
            ("flagged_bins", len(report.flagged)),
            ("mean_real_count", report.mean_real_count),
            ("expected_real_count", report.expected_real_count),
            ("count_stderr", report.count_stderr),
            ("overflow", report.overflow),
            ("passed", report.passed),
        ]
        lines = ["# %s=%s" % (k, _fmt(v)) for k, v in (*config.echo(), *summary)]
        text = "\n".join(lines) + "\n" + report.as_csv()
    if not report.passed:
        print(
            "mc-compare failed: flagged_bins=%d count_deviation=%s stderr=%s"
            % (
                len(report.flagged),
                _fmt(report.count_deviation),
                _fmt(report.count_stderr),
            ),
            file=sys.stderr,
        )
    return text, 0 if report.passed else 1


COMMANDS = {
    "density": cmd_density,
    "correlate": cmd_correlate,
    "verify": cmd_verify,
    "mc-compare": cmd_mc_compare,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="betaone",
        description="Eigenvalue correlations for orthogonal-symmetry ensembles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument(
            "--ensemble",
            choices=("goe", "ginoe"),
            default="goe",
            help="ensemble family (default: goe)",
        )
        p.add_argument("--size", type=int, default=4, help="matrix size N (default: 4)")
        p.add_argument("--seed", type=int, default=0, help="random seed (default: 0)")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument(
            "--format",
            choices=("csv", "json"),
            default=None,
            help="report format (default: csv, or json for verify)",
        )

    p = sub.add_parser("density", help="one-point density on a uniform grid")
    common(p)
    p.add_argument(
        "--grid",
        required=True,
        help="grid as min:max:count (use --grid=-4:4:81 for negative minima)",
    )
    p.add_argument(
        "--path",
        choices=PATHS,
        default="finite-sum",
        help="kernel evaluation path; closed forms are ginoe only",
    )

    p = sub.add_parser("correlate", help="correlation at explicit points")
    common(p)
    p.add_argument(
        "--points",
        required=True,
        help="comma separated points, complex entries like 0.3+0.5j"
        " (use --points=-0.5,0.5 when the first is negative)",
    )

    p = sub.add_parser("verify", help="internal consistency suites")
    common(p)
    p.add_argument(
        "--suite", choices=SUITES, default="all", help="suite name (default: all)"
    )
    for name, default in DEFAULT_TOLERANCES.items():
        p.add_argument(
            "--tol-" + name,
            type=float,
            default=default,
            dest="tol_" + name,
            help="%s suite tolerance (default: %g)" % (name, default),
        )

    p = sub.add_parser("mc-compare", help="sampled spectra against the density")
    common(p)
    p.add_argument("--samples", type=int, required=True, help="sample count, >= 10000")
    p.add_argument("--bins", type=int, default=40, help="histogram bins (default: 40)")
    p.add_argument(
        "--threshold",
        type=float,
        default=REALNESS_FACTOR,
        help="realness threshold as a fraction of the matrix norm",
    )
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = make_config(args)
        text, code = COMMANDS[config.command](config)
    except ConfigError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print("numerical failure: %s" % exc, file=sys.stderr)
        return 3
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    if config.out:
        with open(config.out, "w") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
