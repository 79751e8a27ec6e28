"""Verification suite for the spectral-triple axioms on truncations.

The algebra under test is generated by Toeplitz operators with wedge-passing
symbols and by finite-rank corner blocks, combined with sums, products,
scalars and adjoints.  Every identity of the semi-infinite model is checked on
interior blocks of truncations: the truncation corrupts a boundary collar
whose width is controlled by the band widths involved, and the collar is cut
before comparing.

Boundedness sweeps measure the commutator norms across truncation sizes.  Raw
finite-section norms converge to the limiting operator norm only at rate
O(1/n^2), so each sweep value is the larger of the artifact-free section norm
and the supremum of the symbol read off the (exactly constant) interior
diagonals; both are lower bounds of the limiting norm, and their maximum
either freezes once the truncation exceeds the band interactions or keeps
growing when the commutator is genuinely unbounded.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from . import operators as op
from .dirac import abs_dirac, dirac, grading, represent
from .fourier import FourierSeries, coefficient_distance, wedge_check
from .reports import VerificationReport

__all__ = [
    "AlgebraElement",
    "SweepReport",
    "verify_commutator_number",
    "verify_commutator_dz",
    "verify_delta_k",
    "verify_dzstar_via_adjoint",
    "delta_absdirac_spot_check",
    "evenness_check",
    "membership_check",
    "boundedness_sweep",
    "random_words",
    "rough_symbol",
]

# Fixed angle grid for symbol suprema in sweeps; identical across truncation
# sizes so that frozen diagonal data yields identical values.
SUP_GRID = 4096

STABILIZATION_TOL = 1e-6
GROWTH_TOL = 1e-2


class AlgebraElement:
    """A word over the algebra generators, realized lazily per truncation size.

    Generators are Toeplitz operators whose symbols pass the wedge gluing
    check (membership in the boundary function algebra) and finite-rank
    corner blocks.  Realization is a *-homomorphic evaluation: the realization
    of a product is the product of the realizations.  Realizations are cached
    per size; the cache is only ever written once per key, so concurrent reads
    of distinct sizes are safe.
    """

    __slots__ = ("kind", "children", "series", "block", "scalar", "label",
                 "_realized", "_symbol")

    def __init__(self, kind, children=(), series=None, block=None,
                 scalar=None, label=None):
        self.kind = kind
        self.children = tuple(children)
        self.series = series
        self.block = block
        self.scalar = scalar
        self.label = label
        self._realized = {}
        self._symbol = None

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------

    @classmethod
    def toeplitz(cls, f: FourierSeries, label=None, wedge_tolerance: float = 1e-9,
                 sample_count: int = 1024) -> "AlgebraElement":
        """Toeplitz generator; the symbol must pass the wedge gluing check."""
        report = wedge_check(f, wedge_tolerance, sample_count)
        if not report.passed:
            raise ValueError(
                "symbol fails the wedge gluing check (violations "
                f"{report.max_violation_first:.3e}, "
                f"{report.max_violation_second:.3e}); use unchecked_toeplitz "
                "for negative controls")
        return cls("toeplitz", series=f, label=label)

    @classmethod
    def unchecked_toeplitz(cls, f: FourierSeries, label=None) -> "AlgebraElement":
        """Toeplitz generator without the wedge guard, for negative controls."""
        return cls("toeplitz", series=f, label=label)

    @classmethod
    def finite_rank(cls, block, label=None) -> "AlgebraElement":
        b = np.asarray(block, dtype=complex)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise ValueError("finite-rank block must be square")
        return cls("finite", block=b, label=label)

    # ------------------------------------------------------------------
    # algebra
    # ------------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return AlgebraElement("add", (self, other))

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return AlgebraElement("add", (self, (-1.0) * other))

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return AlgebraElement("mul", (self, other))
        return AlgebraElement("scale", (self,), scalar=complex(other))

    def __rmul__(self, scalar):
        return AlgebraElement("scale", (self,), scalar=complex(scalar))

    def __neg__(self):
        return (-1.0) * self

    def adjoint(self) -> "AlgebraElement":
        return AlgebraElement("adjoint", (self,))

    # ------------------------------------------------------------------
    # structure
    # ------------------------------------------------------------------

    def describe(self) -> str:
        if self.kind == "toeplitz":
            return self.label or f"T[bw{self.series.bandwidth}]"
        if self.kind == "finite":
            return self.label or f"K[{self.block.shape[0]}]"
        a = self.children[0].describe()
        if self.kind == "adjoint":
            return f"{a}*"
        if self.kind == "scale":
            return f"({self.scalar:g})*{a}"
        b = self.children[1].describe()
        return f"({a} {'+' if self.kind == 'add' else '.'} {b})"

    def band_spread(self) -> int:
        """Largest offset reach of the realization; products add reaches."""
        if self.kind == "toeplitz":
            return self.series.bandwidth
        if self.kind == "finite":
            return 0
        if self.kind == "add":
            return max(c.band_spread() for c in self.children)
        if self.kind == "mul":
            return sum(c.band_spread() for c in self.children)
        return self.children[0].band_spread()

    def compact_support(self) -> int:
        """Size bound of the corner block where the word deviates from pure Toeplitz."""
        if self.kind == "toeplitz":
            return 0
        if self.kind == "finite":
            return self.block.shape[0]
        if self.kind == "add":
            return max(c.compact_support() for c in self.children)
        if self.kind == "mul":
            left, right = self.children
            return (left.compact_support() + right.compact_support()
                    + left.band_spread() + right.band_spread())
        return self.children[0].compact_support()

    def word_depth(self) -> int:
        """Generator count along the deepest multiplicative chain."""
        if self.kind in ("toeplitz", "finite"):
            return 1
        if self.kind == "add":
            return max(c.word_depth() for c in self.children)
        if self.kind == "mul":
            return sum(c.word_depth() for c in self.children)
        return self.children[0].word_depth()

    def max_generator_bandwidth(self) -> int:
        if self.kind == "toeplitz":
            return self.series.bandwidth
        if self.kind == "finite":
            return 0
        return max(c.max_generator_bandwidth() for c in self.children)

    def auto_margin(self, extra: int = 0) -> int:
        """Interior margin: each multiplication widens the corrupted collar
        by one generator bandwidth."""
        return self.word_depth() * self.max_generator_bandwidth() + extra

    # ------------------------------------------------------------------
    # evaluation
    # ------------------------------------------------------------------

    def realize(self, n: int) -> op.TruncatedOperator:
        got = self._realized.get(n)
        if got is None:
            got = self._build(n)
            self._realized[n] = got
        return got

    def _build(self, n: int) -> op.TruncatedOperator:
        if self.kind == "toeplitz":
            return op.toeplitz(self.series, n)
        if self.kind == "finite":
            return op.finite_rank(self.block, n)
        if self.kind == "add":
            return self.children[0].realize(n) + self.children[1].realize(n)
        if self.kind == "mul":
            return self.children[0].realize(n) @ self.children[1].realize(n)
        if self.kind == "scale":
            return self.scalar * self.children[0].realize(n)
        return self.children[0].realize(n).adjoint()

    def symbol(self) -> FourierSeries:
        """Image under the quotient map onto boundary functions.

        Multiplicative on products, kills finite-rank parts, conjugates under
        the adjoint.
        """
        if self._symbol is None:
            self._symbol = self._symbol_of()
        return self._symbol

    def _symbol_of(self) -> FourierSeries:
        if self.kind == "toeplitz":
            return self.series
        if self.kind == "finite":
            return FourierSeries()
        if self.kind == "add":
            return self.children[0].symbol() + self.children[1].symbol()
        if self.kind == "mul":
            return self.children[0].symbol() * self.children[1].symbol()
        if self.kind == "scale":
            return self.scalar * self.children[0].symbol()
        return self.children[0].symbol().conjugate()


# ----------------------------------------------------------------------
# identity checks
# ----------------------------------------------------------------------

def _interior_max_dev(a: op.TruncatedOperator, b: op.TruncatedOperator,
                      margin: int) -> float:
    x = op.interior_block(a, margin).matrix
    y = op.interior_block(b, margin).matrix
    return float(np.abs(x - y).max())


def verify_commutator_number(f: FourierSeries, n: int, margin: int | None = None,
                             tolerance: float = 1e-12) -> VerificationReport:
    """[N, T_f] equals -i T_{f'} on interior blocks."""
    b = f.bandwidth
    if margin is None:
        margin = b
    if margin < b:
        raise ValueError(f"margin must be >= bandwidth {b}: boundary rows "
                         "genuinely differ under truncation")
    if n <= 4 * margin:
        raise ValueError(f"n must exceed 4*margin = {4 * margin}")
    lhs = op.commutator(op.number(n), op.toeplitz(f, n))
    rhs = (-1j) * op.toeplitz(f.derivative(), n)
    dev = _interior_max_dev(lhs, rhs, margin)
    return VerificationReport("commutator_number", dev < tolerance, dev,
                              tolerance, n, margin)


def verify_commutator_dz(f: FourierSeries, n: int, margin: int | None = None,
                         tolerance: float = 1e-12) -> VerificationReport:
    """[dz, T_f] equals -i T_{conj(u) f'} on interior blocks."""
    b = f.bandwidth
    if margin is None:
        margin = b + 1
    if margin < b + 1:
        raise ValueError(f"margin must be >= bandwidth + 1 = {b + 1}")
    if n <= 4 * margin:
        raise ValueError(f"n must exceed 4*margin = {4 * margin}")
    lhs = op.commutator(op.dz(n), op.toeplitz(f, n))
    rhs = (-1j) * op.toeplitz(f.derivative().shifted(-1), n)
    dev = _interior_max_dev(lhs, rhs, margin)
    return VerificationReport("commutator_dz", dev < tolerance, dev,
                              tolerance, n, margin)


def verify_delta_k(f: FourierSeries, k: int, n: int, margin: int | None = None,
                   tolerance: float = 1e-12) -> VerificationReport:
    """Iterated [N, .] applied k times to T_f equals (-i)^k T_{f^(k)}."""
    if k < 1:
        raise ValueError("k must be >= 1")
    b = f.bandwidth
    if margin is None:
        margin = k * b
    if margin < k * b:
        raise ValueError(f"margin must be >= k*bandwidth = {k * b}")
    if n <= 4 * margin:
        raise ValueError(f"n must exceed 4*margin = {4 * margin}")
    num = op.number(n)
    x = op.toeplitz(f, n)
    g = f
    for _ in range(k):
        x = op.commutator(num, x)
        g = g.derivative()
    rhs = (-1j) ** k * op.toeplitz(g, n)
    dev = _interior_max_dev(x, rhs, margin)
    return VerificationReport(f"delta_{k}", dev < tolerance, dev,
                              tolerance, n, margin)


def verify_dzstar_via_adjoint(a: AlgebraElement, n: int, margin: int = 0,
                              tolerance: float = 1e-12) -> VerificationReport:
    """[dz*, a] equals -[dz, a*]* (exact for finite matrices)."""
    if n <= 4 * margin:
        raise ValueError(f"n must exceed 4*margin = {4 * margin}")
    mat = a.realize(n)
    mat_star = a.adjoint().realize(n)
    lhs = op.commutator(op.dz_star(n), mat)
    rhs = -(op.commutator(op.dz(n), mat_star).adjoint())
    dev = _interior_max_dev(lhs, rhs, margin)
    return VerificationReport("dzstar_via_adjoint", dev < tolerance, dev,
                              tolerance, n, margin,
                              details={"word": a.describe()})


def delta_absdirac_spot_check(f: FourierSeries, n: int,
                              margin: int | None = None,
                              tolerance: float = 1e-10) -> VerificationReport:
    """Commutators with |D| reduce to commutators with N on the doubled space.

    |D| = diag(N+1, N) and the +1 drops out of commutators, so
    [|D|, a (+) a] should be block diagonal with both blocks equal to
    [N, a] = -i T_{f'}; |D| is formed numerically from D^2.
    """
    b = f.bandwidth
    if margin is None:
        margin = b + 1
    if n <= 4 * margin:
        raise ValueError(f"n must exceed 4*margin = {4 * margin}")
    absd = abs_dirac(n)
    doubled = represent(op.toeplitz(f, n)).matrix
    comm = absd @ doubled - doubled @ absd
    expected = ((-1j) * op.toeplitz(f.derivative(), n)).matrix
    sl = slice(margin, n - margin)
    dev = max(
        float(np.abs(comm[:n, :n][sl, sl] - expected[sl, sl]).max()),
        float(np.abs(comm[n:, n:][sl, sl] - expected[sl, sl]).max()),
        float(np.abs(comm[:n, n:][sl, sl]).max()),
        float(np.abs(comm[n:, :n][sl, sl]).max()),
    )
    return VerificationReport("delta_absdirac_spot_check", dev < tolerance,
                              dev, tolerance, n, margin)


def evenness_check(a: AlgebraElement, n: int) -> VerificationReport:
    """The four grading relations, with exact-zero residuals required.

    The grading is diagonal with entries +-1 and both D and the doubled
    representation have integer-patterned block structure, so all four
    residuals vanish exactly in floating point, not just approximately.
    """
    g = grading(n).matrix
    d = dirac(n).assembled
    p = represent(a.realize(n)).matrix
    eye = np.eye(2 * n)
    r_inv = float(np.abs(g @ g - eye).max())
    r_sa = float(np.abs(g - g.conj().T).max())
    r_anti = float(np.abs(g @ d + d @ g).max())
    r_comm = float(np.abs(g @ p - p @ g).max())
    worst = max(r_inv, r_sa, r_anti, r_comm)
    return VerificationReport(
        name="evenness",
        passed=worst == 0.0,
        max_deviation=worst,
        tolerance=0.0,
        n=n,
        details={
            "grading_squared_minus_identity": r_inv,
            "grading_self_adjointness": r_sa,
            "grading_dirac_anticommutator": r_anti,
            "grading_representation_commutator": r_comm,
            "word": a.describe(),
        },
    )


def membership_check(a: AlgebraElement, n: int, wedge_tolerance: float = 1e-8,
                     compact_tolerance: float = 1e-8,
                     sample_count: int = 1024) -> VerificationReport:
    """Estimate the symbol of a realization and test wedge membership.

    Two checks: the symbol recovered from the interior diagonals passes the
    wedge gluing relations, and subtracting the Toeplitz matrix of the exact
    symbol leaves a matrix with vanishing symbol estimate (the compact-part
    split).  Interior trimming removes both the genuine corner block and the
    truncation collar of realized products before reading diagonals.
    """
    sym = a.symbol()
    collar = a.band_spread() + a.compact_support() + 1
    if 2 * collar >= n:
        raise ValueError(f"n = {n} too small for collar {collar}")
    realized = a.realize(n)
    trimmed = op.interior_block(realized, collar)
    max_freq = max(sym.bandwidth, a.band_spread())
    if max_freq >= trimmed.dim / 4:
        raise ValueError(
            f"n = {n} too small to estimate frequencies up to {max_freq}")
    estimate = op.symbol_estimate(trimmed, max_freq)
    wedge = wedge_check(estimate, wedge_tolerance, sample_count)
    symbol_dev = coefficient_distance(estimate, sym)
    delta = realized - op.toeplitz(sym, n)
    compact_estimate = op.symbol_estimate(op.interior_block(delta, collar), max_freq)
    compact_dev = max((abs(v) for v in compact_estimate.coeffs.values()), default=0.0)
    passed = wedge.passed and compact_dev <= compact_tolerance \
        and symbol_dev <= compact_tolerance
    return VerificationReport(
        name="membership",
        passed=passed,
        max_deviation=max(compact_dev, symbol_dev),
        tolerance=compact_tolerance,
        n=n,
        margin=collar,
        details={
            "wedge_violation_first": wedge.max_violation_first,
            "wedge_violation_second": wedge.max_violation_second,
            "wedge_passed": wedge.passed,
            "symbol_estimate_deviation": symbol_dev,
            "compact_part_symbol": compact_dev,
            "word": a.describe(),
        },
    )


# ----------------------------------------------------------------------
# boundedness sweeps
# ----------------------------------------------------------------------

@dataclass
class SweepReport:
    """Norm measurements across truncation sizes.

    ``values`` estimate the limiting commutator norm at each size (maximum of
    the artifact-free section norm and the symbol supremum read from the
    interior diagonals); ``raw_values`` are the plain section norms, which
    converge only at O(1/n^2).
    """

    sizes: list
    values: list
    raw_values: list
    stabilized: bool
    trend: str
    which: str
    stabilization_tol: float = STABILIZATION_TOL
    word: str = ""

    def to_json_obj(self) -> dict:
        return {
            "which": self.which,
            "word": self.word,
            "sizes": self.sizes,
            "values": self.values,
            "raw_values": self.raw_values,
            "stabilized": self.stabilized,
            "trend": self.trend,
            "stabilization_tol": self.stabilization_tol,
        }

    def to_csv(self, stream) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["size", "value", "raw_section_norm"])
        for size, v, r in zip(self.sizes, self.values, self.raw_values):
            writer.writerow([size, repr(v), repr(r)])


def _sweep_blocks(word: AlgebraElement, which: str, order: int,
                  m: int) -> list[np.ndarray]:
    a = word.realize(m)
    if which == "dirac":
        return [op.commutator(op.dz(m), a).matrix,
                op.commutator(op.dz_star(m), a).matrix]
    num = op.number(m)
    if which == "delta":
        x = a
        for _ in range(order):
            x = op.commutator(num, x)
        return [x.matrix]
    if which == "delta_dz":
        x = op.commutator(op.dz(m), a)
        for _ in range(order):
            x = op.commutator(num, x)
        return [x.matrix]
    raise ValueError(f"unknown sweep target {which!r}")


def _sweep_value(word: AlgebraElement, n: int, which: str, order: int,
                 norm_tol: float, grid: np.ndarray) -> tuple[float, float]:
    # compute at an inflated size and keep the leading block, so every entry
    # measured equals the semi-infinite model exactly
    collar = word.band_spread() + word.compact_support() + order + 4
    blocks = _sweep_blocks(word, which, order, n + collar)
    value = 0.0
    raw = 0.0
    spread = word.band_spread() + (0 if which == "delta" else 1)
    max_freq = min(spread, n // 4 - 1)
    for x in blocks:
        lead = op.TruncatedOperator(x[:n, :n])
        try:
            section = op.operator_norm(lead, norm_tol)
        except op.PowerIterationError:
            # nearly degenerate top singular values stall the iteration;
            # fall back to the full decomposition
            section = float(np.linalg.svd(lead.matrix, compute_uv=False)[0])
        raw = max(raw, section)
        sup = 0.0
        if max_freq >= 0:
            est = op.symbol_estimate(lead, max_freq)
            if est.coeffs:
                sup = float(np.abs(est.evaluate(grid)).max())
        value = max(value, section, sup)
    return value, raw


def boundedness_sweep(word, sizes, which: str = "dirac", order: int = 1,
                      stabilization_tol: float = STABILIZATION_TOL,
                      growth_tol: float = GROWTH_TOL,
                      norm_tol: float = 1e-9) -> SweepReport:
    """Norm sweep of a commutator target over increasing truncation sizes.

    ``which`` selects the target: "dirac" for the off-diagonal blocks of
    [D, a (+) a] (their maximum is the commutator norm), "delta" for the
    order-fold iterated [N, .] of the word, "delta_dz" for the same applied
    to [dz, word].  ``word`` may be a callable size -> AlgebraElement for
    controls whose symbol changes with the truncation.
    """
    sizes = [int(s) for s in sizes]
    if len(sizes) < 2 or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("sizes must be strictly increasing, with >= 2 entries")
    grid = np.linspace(0.0, 2.0 * np.pi, SUP_GRID, endpoint=False)
    values, raws = [], []
    label = ""
    for n in sizes:
        element = word(n) if callable(word) else word
        label = element.describe()
        v, r = _sweep_value(element, n, which, order, norm_tol, grid)
        values.append(v)
        raws.append(r)
    last, prev = values[-1], values[-2]
    scale = max(abs(last), 1e-300)
    stabilized = abs(last - prev) <= stabilization_tol * scale
    trend = "growing" if last > prev * (1.0 + growth_tol) else "bounded"
    name = which if which == "dirac" else f"{which}:{order}"
    return SweepReport(sizes=sizes, values=values, raw_values=raws,
                       stabilized=stabilized, trend=trend, which=name,
                       stabilization_tol=stabilization_tol, word=label)


# ----------------------------------------------------------------------
# word sampling and controls
# ----------------------------------------------------------------------

def random_words(rng, count: int, max_depth: int = 3,
                 symbols=None, block_size: int = 2) -> list[AlgebraElement]:
    """Deterministic (given rng) random words over the default generators.

    Depth counts generator factors along multiplicative chains, so depth <= 3
    words are at most triple products; sums and adjoints do not add depth.
    """
    if symbols is None:
        symbols = [(FourierSeries.cosine(4), "T[cos4t]"),
                   (FourierSeries.cosine(8), "T[cos8t]")]

    def leaf():
        if rng.random() < 0.3:
            block = (rng.standard_normal((block_size, block_size))
                     + 1j * rng.standard_normal((block_size, block_size)))
            return AlgebraElement.finite_rank(block, label=f"K[{block_size}]")
        f, label = symbols[int(rng.integers(len(symbols)))]
        return AlgebraElement.toeplitz(f, label=label)

    def word(budget):
        if budget <= 1 or rng.random() < 0.35:
            w = leaf()
        else:
            split = int(rng.integers(1, budget))
            left, right = word(split), word(budget - split)
            w = left * right if rng.random() < 0.5 else left + right
        if rng.random() < 0.15:
            w = w.adjoint()
        if rng.random() < 0.15:
            w = complex(rng.standard_normal()) * w
        return w

    return [word(max_depth) for _ in range(count)]


def rough_symbol(n: int, power: float = 1.5) -> FourierSeries:
    """Slowly decaying symbol ``fhat(k) = |k|^{-power}`` cut at ``|k| <= n/4``.

    With power 3/2 the derivative coefficients decay like ``|k|^{-1/2}``, so
    the commutator norms grow with the truncation: the negative control for
    boundedness sweeps.
    """
    top = max(1, n // 4)
    coeffs = {}
    for k in range(1, top + 1):
        coeffs[k] = float(k) ** (-power)
        coeffs[-k] = float(k) ** (-power)
    return FourierSeries(coeffs)
