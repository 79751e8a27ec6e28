"""Command-line front end: run verification suites and emit reports.

Every run writes ``report.json`` (stable schema: command, config echo,
timestamp, checks, artifacts, error), plus ``data.csv`` for tabular output and
``plot.svg`` when SVG emission is on.  Exit codes: 0 all checks passed,
1 a check failed, 2 usage/configuration error, 3 internal numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import svg
from .dirac import FredholmIndexError, dirac, fredholm_index, polar_check, \
    spectrum, summability_partial_sum, summability_report
from .fourier import FourierSeries, wedge_check
from .operators import PowerIterationError, pattern_kernel_dims, \
    rectangular_kernel_dims, shift_adjoint_pattern, shift_pattern
from .triple import AlgebraElement, boundedness_sweep, delta_absdirac_spot_check, \
    evenness_check, membership_check, rough_symbol, verify_commutator_dz, \
    verify_commutator_number, verify_delta_k, verify_dzstar_via_adjoint

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

OUTPUT_DIR_ENV = "TOEPLITZ_TRIPLE_OUTPUT_DIR"

DEFAULT_N = 256
DEFAULT_SWEEP_SIZES = [64, 128, 256, 512]
DEFAULT_INDEX_SIZES = [16, 32, 64, 128]


@dataclass
class RunConfig:
    """Echoed verbatim into report.json."""

    command: str
    n: int = DEFAULT_N
    sizes: list = field(default_factory=lambda: list(DEFAULT_SWEEP_SIZES))
    epsilon: float = 1.0
    partial_sum_terms: int = 100_000
    symbol_spec: str = "cos4k:1"
    margin: int | None = None
    output_dir: str = "."
    emit_svg: bool = False
    tolerance: float | None = None
    rough_control: bool = False

    def to_json_obj(self) -> dict:
        return {
            "command": self.command,
            "n": self.n,
            "sizes": self.sizes,
            "epsilon": self.epsilon,
            "partial_sum_terms": self.partial_sum_terms,
            "symbol_spec": self.symbol_spec,
            "margin": self.margin,
            "output_dir": self.output_dir,
            "emit_svg": self.emit_svg,
            "tolerance": self.tolerance,
            "rough_control": self.rough_control,
        }


def load_symbol(spec: str) -> FourierSeries:
    """Builtins ``cos4k:k`` and ``const:c``, or a path to a sample file.

    Sample files carry one complex value per line (Python literal syntax,
    e.g. ``0.5+0.25j``); blank lines and ``#`` comments are skipped.  The
    sample count must be a power of two.
    """
    if spec.startswith("cos4k:"):
        k = int(spec.split(":", 1)[1])
        if k < 0:
            raise ValueError("cos4k index must be >= 0")
        return FourierSeries.cosine(4 * k)
    if spec.startswith("const:"):
        return FourierSeries.constant(complex(spec.split(":", 1)[1]))
    path = Path(spec)
    if not path.is_file():
        raise ValueError(f"unknown symbol spec {spec!r}: not a builtin "
                         "(cos4k:K, const:C) and not a readable file")
    values = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values.append(complex(line))
        except ValueError as exc:
            raise ValueError(f"malformed sample line {line!r} in {spec}") from exc
    return FourierSeries.from_samples(values)


# ----------------------------------------------------------------------
# commands (each returns a list of check dicts and writes its artifacts)
# ----------------------------------------------------------------------

def _check(name, passed, **extra) -> dict:
    out = {"name": name, "passed": bool(passed)}
    out.update(extra)
    return out


def _from_report(report) -> dict:
    return _check(report.name, report.passed,
                  max_deviation=report.max_deviation,
                  tolerance=report.tolerance, n=report.n,
                  margin=report.margin, details=report.details)


def _write_csv(outdir: Path, rows, header) -> str:
    path = outdir / "data.csv"
    with open(path, "w", newline="") as stream:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return "data.csv"


def _write_svg(outdir: Path, content: str) -> str:
    (outdir / "plot.svg").write_text(content)
    return "plot.svg"


def cmd_spectrum(cfg: RunConfig, outdir: Path):
    tol = cfg.tolerance if cfg.tolerance is not None else 1e-10
    report = spectrum(dirac(cfg.n), tol)
    n = cfg.n
    expected = sorted(list(range(-(n - 1), n)) + [0])
    rounded = [round(v) for v in report.eigenvalues]
    ladder_ok = rounded == expected and \
        max(abs(v - r) for v, r in zip(report.eigenvalues, rounded)) < tol
    nonzero_mults = [m for v, m in zip(report.distinct_values, report.multiplicities)
                     if abs(v) > 0.5]
    checks = [
        _check("eigenvalue_ladder", ladder_ok,
               expected="integers -(n-1)..(n-1) with a double zero"),
        _check("eigenpair_residuals", max(report.residuals) < tol,
               max_residual=max(report.residuals), tolerance=tol),
        _check("single_spurious_zero_mode", len(report.spurious) == 1,
               spurious_indices=report.spurious),
        _check("nonzero_multiplicities_one",
               all(m == 1 for m in nonzero_mults)),
    ]
    artifacts = []
    with open(outdir / "data.csv", "w", newline="") as stream:
        report.to_csv(stream)
    artifacts.append("data.csv")
    if cfg.emit_svg:
        idx = list(range(len(report.eigenvalues)))
        artifacts.append(_write_svg(outdir, svg.chart(
            [("eigenvalues", idx, report.eigenvalues)],
            title=f"Eigenvalue ladder of the truncated Dirac block (n={n})",
            xlabel="index", ylabel="eigenvalue", scatter=True)))
    return checks, artifacts


def cmd_verify(cfg: RunConfig, outdir: Path):
    f = load_symbol(cfg.symbol_spec)
    n = cfg.n
    tol = cfg.tolerance if cfg.tolerance is not None else 1e-12
    word = AlgebraElement.unchecked_toeplitz(f, label=cfg.symbol_spec)

    wedge = wedge_check(f, 1e-9)
    checks = [_check("wedge_gluing", wedge.passed,
                     max_violation_first=wedge.max_violation_first,
                     max_violation_second=wedge.max_violation_second,
                     tolerance=wedge.tolerance)]
    reports = [
        verify_commutator_number(f, n, cfg.margin, tol),
        verify_commutator_dz(f, n, cfg.margin, tol),
        verify_delta_k(f, 1, n, cfg.margin, tol),
        verify_delta_k(f, 2, n, cfg.margin, tol),
        verify_delta_k(f, 3, n, cfg.margin, tol),
        verify_dzstar_via_adjoint(word, n, tolerance=tol),
        delta_absdirac_spot_check(f, min(n, 128)),
        evenness_check(word, min(n, 128)),
        membership_check(word, n),
    ]
    checks.extend(_from_report(r) for r in reports)
    rows = [(c["name"], int(c["passed"]), repr(c.get("max_deviation", "")))
            for c in checks]
    artifacts = [_write_csv(outdir, rows, ["check", "passed", "max_deviation"])]
    return checks, artifacts


def cmd_index(cfg: RunConfig, outdir: Path):
    sizes = cfg.sizes
    checks = []
    for small, large in zip(sizes, sizes[1:]):
        idx = fredholm_index(small, large)
        checks.append(_check(f"index_pair_{small}_{large}", idx == 1, index=idx))
    ker, coker = pattern_kernel_dims(shift_adjoint_pattern())
    checks.append(_check("exact_pattern_index", ker - coker == 1,
                         kernel=ker, cokernel=coker))
    sk, sc = rectangular_kernel_dims(shift_pattern(), sizes[-1])
    checks.append(_check("forward_shift_index", sk - sc == -1,
                         kernel=sk, cokernel=sc))
    rows = []
    for size in sizes:
        k, c = rectangular_kernel_dims(shift_adjoint_pattern(), size)
        rows.append((size, k, c, k - c))
    artifacts = [_write_csv(outdir, rows, ["n", "kernel", "cokernel", "index"])]
    return checks, artifacts


def cmd_summability(cfg: RunConfig, outdir: Path):
    eps = cfg.epsilon
    big_k = cfg.partial_sum_terms
    report = summability_report(eps, big_k)

    # partial-sum curve on a log-spaced set of prefixes
    points = sorted(set(int(v) for v in np.geomspace(1, big_k, 24)))
    curve = [summability_partial_sum(eps, k) for k in points]

    checks = [_check("partial_sums_monotone_in_K",
                     all(b >= a for a, b in zip(curve, curve[1:])))]
    if eps > 0:
        checks.append(_check(
            "doubling_increment_within_tail_bound",
            report["doubling_difference"] <= report["tail_bound"] * (1 + 1e-12),
            doubling_difference=report["doubling_difference"],
            tail_bound=report["tail_bound"]))
        if eps == 1.0:
            limit = math.pi ** 2 / 3 - 1.0
            bracketed = report["partial_sum"] <= limit <= \
                report["partial_sum"] + report["tail_bound"]
            checks.append(_check("bracket_contains_shifted_basel_limit",
                                 bracketed, known_limit=limit,
                                 partial_sum=report["partial_sum"],
                                 tail_bound=report["tail_bound"]))
    else:
        expected = report["expected_doubling"]
        if big_k >= 100:
            checks.append(_check(
                "logarithmic_divergence_rate",
                abs(report["doubling_difference"] - expected) <= 0.1 * expected,
                doubling_difference=report["doubling_difference"],
                expected_doubling=expected))
    checks.append(_check("classification",
                         True, converges=report["converges"],
                         note=report["note"]))

    rows = list(zip(points, (repr(v) for v in curve)))
    artifacts = [_write_csv(outdir, rows, ["K", "partial_sum"])]
    if cfg.emit_svg:
        artifacts.append(_write_svg(outdir, svg.chart(
            [(f"epsilon={eps:g}", points, curve)],
            title="Partial sums of (1+|k|)^-(1+eps)",
            xlabel="K", ylabel="partial sum", logx=True)))
    return checks, artifacts


def cmd_sweep(cfg: RunConfig, outdir: Path):
    sizes = cfg.sizes
    checks = []
    rows = []
    plot_series = []
    if cfg.rough_control:
        factory = lambda n: AlgebraElement.unchecked_toeplitz(  # noqa: E731
            rough_symbol(n), label="rough")
        report = boundedness_sweep(factory, sizes, "delta", order=1)
        checks.append(_check("negative_control_grows",
                             report.trend == "growing",
                             trend=report.trend, values=report.values))
        rows.extend((report.which, s, repr(v), repr(r)) for s, v, r in
                    zip(report.sizes, report.values, report.raw_values))
        plot_series.append((report.which, report.sizes, report.values))
    else:
        f = load_symbol(cfg.symbol_spec)
        word = AlgebraElement.unchecked_toeplitz(f, label=cfg.symbol_spec)
        targets = [("dirac", 1), ("delta", 1), ("delta", 2)]
        for which, order in targets:
            report = boundedness_sweep(word, sizes, which, order=order)
            checks.append(_check(
                f"stabilized_{report.which}",
                report.stabilized and report.trend == "bounded",
                values=report.values, raw_values=report.raw_values,
                trend=report.trend,
                stabilization_tol=report.stabilization_tol))
            rows.extend((report.which, s, repr(v), repr(r)) for s, v, r in
                        zip(report.sizes, report.values, report.raw_values))
            plot_series.append((report.which, report.sizes, report.values))
    artifacts = [_write_csv(outdir, rows, ["target", "size", "value",
                                           "raw_section_norm"])]
    if cfg.emit_svg:
        artifacts.append(_write_svg(outdir, svg.chart(
            plot_series, title="Commutator norm sweep",
            xlabel="truncation size", ylabel="norm estimate",
            logx=True, logy=True)))
    return checks, artifacts


def cmd_wedge(cfg: RunConfig, outdir: Path):
    f = load_symbol(cfg.symbol_spec)
    tol = cfg.tolerance if cfg.tolerance is not None else 1e-9
    report = wedge_check(f, tol, 1024)
    checks = [_check("wedge_gluing", report.passed,
                     max_violation_first=report.max_violation_first,
                     max_violation_second=report.max_violation_second,
                     tolerance=tol)]
    t = np.linspace(0.0, np.pi / 2, 1024)
    v1 = np.abs(f.evaluate(t) - f.evaluate(-t - np.pi / 2))
    v2 = np.abs(f.evaluate(-t) - f.evaluate(t + np.pi / 2))
    rows = [(repr(float(a)), repr(float(b)), repr(float(c)))
            for a, b, c in zip(t, v1, v2)]
    artifacts = [_write_csv(outdir, rows,
                            ["t", "violation_first", "violation_second"])]
    if cfg.emit_svg:
        artifacts.append(_write_svg(outdir, svg.chart(
            [("first relation", t.tolist(), np.maximum(v1, 1e-18).tolist()),
             ("second relation", t.tolist(), np.maximum(v2, 1e-18).tolist())],
            title=f"Wedge gluing violations: {cfg.symbol_spec}",
            xlabel="t", ylabel="violation", logy=True)))
    return checks, artifacts


def cmd_polar(cfg: RunConfig, outdir: Path):
    margin = cfg.margin if cfg.margin is not None else 2
    tol = cfg.tolerance if cfg.tolerance is not None else 1e-10
    report = polar_check(cfg.n, margin, tol)
    checks = [_from_report(report)]
    rows = [(k, repr(v)) for k, v in sorted(report.details.items())]
    artifacts = [_write_csv(outdir, rows, ["quantity", "value"])]
    return checks, artifacts


COMMANDS = {
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
    "index": cmd_index,
    "summability": cmd_summability,
    "sweep": cmd_sweep,
    "wedge": cmd_wedge,
    "polar": cmd_polar,
}


# ----------------------------------------------------------------------
# orchestration
# ----------------------------------------------------------------------

def _write_report(outdir: Path, cfg: RunConfig, checks, artifacts, error=None):
    report = {
        "command": cfg.command,
        "config": cfg.to_json_obj(),
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "checks": checks,
        "artifacts": artifacts,
        "error": error,
    }
    with open(outdir / "report.json", "w") as stream:
        json.dump(report, stream, indent=2)
        stream.write("\n")


def run(cfg: RunConfig) -> int:
    """Dispatch a configuration, write report.json, return the exit code."""
    outdir = Path(os.environ.get(OUTPUT_DIR_ENV, cfg.output_dir))
    try:
        outdir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create output directory {outdir}: {exc}",
              file=sys.stderr)
        return EXIT_USAGE
    try:
        checks, artifacts = COMMANDS[cfg.command](cfg, outdir)
    except ValueError as exc:
        _write_report(outdir, cfg, [], [],
                      error={"type": "config", "message": str(exc)})
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PowerIterationError, FredholmIndexError,
            np.linalg.LinAlgError) as exc:
        _write_report(outdir, cfg, [], [],
                      error={"type": "numerical", "message": str(exc)})
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    _write_report(outdir, cfg, checks, artifacts)
    for check in checks:
        status = "PASS" if check["passed"] else "FAIL"
        print(f"[{status}] {cfg.command}: {check['name']}")
    return EXIT_OK if all(c["passed"] for c in checks) else EXIT_CHECK_FAILED


def _parse_sizes(text: str) -> list:
    try:
        sizes = [int(v) for v in text.replace(",", " ").split()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from exc
    if not sizes:
        raise argparse.ArgumentTypeError("size list is empty")
    return sizes


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toeplitz-triple",
        description="Verify the truncated Toeplitz spectral triple: spectrum, "
                    "identities, index, summability.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, sizes_default=None):
        p.add_argument("--n", type=int, default=DEFAULT_N,
                       help="truncation size (default %(default)s)")
        p.add_argument("--output-dir", default=".",
                       help=f"report directory (env {OUTPUT_DIR_ENV} overrides)")
        p.add_argument("--svg", action="store_true", help="emit plot.svg")
        p.add_argument("--tolerance", type=float, default=None,
                       help="override the default check tolerance")
        p.add_argument("--margin", type=int, default=None,
                       help="interior margin override (default: automatic)")
        p.add_argument("--symbol", default="cos4k:1", dest="symbol_spec",
                       help="builtin cos4k:K / const:C or a sample file path")
        if sizes_default is not None:
            p.add_argument("--sizes", type=_parse_sizes,
                           default=list(sizes_default),
                           help="truncation sizes (default %(default)s)")

    common(sub.add_parser("spectrum", help="eigenvalue ladder and residuals"))
    common(sub.add_parser("verify", help="commutator/grading/membership suite"))
    common(sub.add_parser("index", help="Fredholm index, exact and numeric"),
           sizes_default=DEFAULT_INDEX_SIZES)
    p_sum = sub.add_parser("summability", help="resolvent-weight partial sums")
    common(p_sum)
    p_sum.add_argument("--epsilon", type=float, default=1.0,
                       help="summability exponent offset (default %(default)s)")
    p_sum.add_argument("--K", type=int, default=100_000, dest="partial_sum_terms",
                       help="partial sum cutoff (default %(default)s)")
    p_sweep = sub.add_parser("sweep", help="commutator norm sweeps")
    common(p_sweep, sizes_default=DEFAULT_SWEEP_SIZES)
    p_sweep.add_argument("--rough", action="store_true", dest="rough_control",
                         help="run the slowly-decaying negative control instead")
    common(sub.add_parser("wedge", help="wedge gluing check of a symbol"))
    common(sub.add_parser("polar", help="polar decomposition check"))
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for name in ("n", "output_dir", "tolerance", "margin", "symbol_spec",
                 "epsilon", "partial_sum_terms", "sizes", "rough_control"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    cfg.emit_svg = getattr(args, "svg", False)
    if cfg.n < 2:
        raise ValueError("n must be >= 2")
    if cfg.epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    if any(b <= a for a, b in zip(cfg.sizes, cfg.sizes[1:])):
        raise ValueError("sizes must be strictly increasing")
    return cfg


def main(argv=None) -> None:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ValueError as exc:
        parser.error(str(exc))  # exits with status 2
    sys.exit(run(cfg))


if __name__ == "__main__":
    main()
