"""Finite truncations of the operator algebra on one-sided sequence space.

All operators act on ``l2(N)`` with basis ``e_0, e_1, ...`` and are stored as
their compressions to ``span{e_0, ..., e_{n-1}}``: dense complex ``n x n``
matrices with the convention ``A[r, c]`` = coefficient of ``e_r`` in the image
of ``e_c``.  A Toeplitz matrix built from a symbol ``f`` therefore has entries
``A[r, c] = fhat(r - c)``.

Besides the concrete matrices, ``BandPattern`` describes single weighted
shifts of the semi-infinite model exactly (integer/rational weights), which is
what makes kernel/cokernel dimensions and the index computable without any
truncation.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .fourier import FourierSeries

__all__ = [
    "TruncatedOperator",
    "BandPattern",
    "PowerIterationError",
    "toeplitz",
    "identity",
    "shift",
    "shift_adjoint",
    "number",
    "dz",
    "dz_star",
    "finite_rank",
    "commutator",
    "operator_norm",
    "interior_block",
    "symbol_estimate",
    "cauchy_riemann_weight_gap",
    "shift_pattern",
    "shift_adjoint_pattern",
    "dz_pattern",
    "dz_star_pattern",
    "pattern_kernel_dims",
    "rectangular_kernel_dims",
]

# Below this dimension operator_norm uses a full singular value decomposition.
FULL_SVD_DIM = 64
POWER_ITERATION_CAP = 10_000


class PowerIterationError(RuntimeError):
    """Norm estimation failed to converge within the iteration cap."""


class TruncatedOperator:
    """Dense ``n x n`` compression of an operator on ``l2(N)``.

    ``band`` is optional metadata ``(lower, upper)``: entries vanish outside
    offsets ``lower <= r - c <= upper``.  Operators are immutable values;
    arithmetic returns new instances and combines band metadata when both
    operands carry it.
    """

    __slots__ = ("matrix", "band")

    def __init__(self, matrix, band=None):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError(f"expected a square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("matrix entries must be finite")
        m.setflags(write=False)
        self.matrix = m
        self.band = None if band is None else (int(band[0]), int(band[1]))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self):
        return f"TruncatedOperator(dim={self.dim}, band={self.band})"

    def band_consistent(self) -> bool:
        """True when every nonzero entry lies inside the recorded band."""
        if self.band is None:
            return True
        lo, up = self.band
        r, c = np.nonzero(self.matrix)
        off = r - c
        return bool(np.all((off >= lo) & (off <= up)))

    def adjoint(self) -> "TruncatedOperator":
        band = None if self.band is None else (-self.band[1], -self.band[0])
        return TruncatedOperator(self.matrix.conj().T, band)

    def __add__(self, other):
        if not isinstance(other, TruncatedOperator):
            return NotImplemented
        self._check_dim(other)
        band = None
        if self.band is not None and other.band is not None:
            band = (min(self.band[0], other.band[0]),
                    max(self.band[1], other.band[1]))
        return TruncatedOperator(self.matrix + other.matrix, band)

    def __sub__(self, other):
        if not isinstance(other, TruncatedOperator):
            return NotImplemented
        return self + (-1.0) * other

    def __mul__(self, scalar):
        if isinstance(scalar, TruncatedOperator):
            return NotImplemented
        return TruncatedOperator(scalar * self.matrix, self.band)

    __rmul__ = __mul__

    def __neg__(self):
        return (-1.0) * self

    def __matmul__(self, other):
        if not isinstance(other, TruncatedOperator):
            return NotImplemented
        self._check_dim(other)
        band = None
        if self.band is not None and other.band is not None:
            m = self.dim - 1
            band = (max(self.band[0] + other.band[0], -m),
                    min(self.band[1] + other.band[1], m))
        return TruncatedOperator(self.matrix @ other.matrix, band)

    def _check_dim(self, other):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    # ------------------------------------------------------------------
    # serialization
    # ------------------------------------------------------------------

    def to_json_obj(self) -> dict:
        """Sparse JSON form {dim, band, entries: [[r, c, re, im], ...]}."""
        rows, cols = np.nonzero(self.matrix)
        entries = [
            [int(r), int(c), float(self.matrix[r, c].real), float(self.matrix[r, c].imag)]
            for r, c in zip(rows, cols)
        ]
        return {"dim": self.dim, "band": list(self.band) if self.band else None,
                "entries": entries}

    def to_csv(self, stream) -> None:
        """Row-major dump with entries formatted as ``re+imi``."""
        writer = csv.writer(stream, lineterminator="\n")
        for r in range(self.dim):
            writer.writerow(
                [f"{z.real:.17g}{z.imag:+.17g}i" for z in self.matrix[r]])


# ----------------------------------------------------------------------
# constructors
# ----------------------------------------------------------------------

def toeplitz(f: FourierSeries, n: int) -> TruncatedOperator:
    """Truncated Toeplitz matrix of symbol f: entries ``fhat(r - c)``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    m = np.zeros((n, n), dtype=complex)
    for k, v in f.coeffs.items():
        if abs(k) < n:
            idx = np.arange(n - abs(k))
            if k >= 0:
                m[idx + k, idx] = v
            else:
                m[idx, idx - k] = v
    b = f.bandwidth
    return TruncatedOperator(m, (max(-b, -(n - 1)), min(b, n - 1)))


def identity(n: int) -> TruncatedOperator:
    return TruncatedOperator(np.eye(n, dtype=complex), (0, 0))


def shift(n: int) -> TruncatedOperator:
    """S e_m = e_{m+1}; the image of e_{n-1} is cut by the truncation."""
    m = np.zeros((n, n), dtype=complex)
    m[np.arange(1, n), np.arange(n - 1)] = 1.0
    return TruncatedOperator(m, (1, 1))


def shift_adjoint(n: int) -> TruncatedOperator:
    """S* e_m = e_{m-1} for m >= 1 and S* e_0 = 0."""
    m = np.zeros((n, n), dtype=complex)
    m[np.arange(n - 1), np.arange(1, n)] = 1.0
    return TruncatedOperator(m, (-1, -1))


def number(n: int) -> TruncatedOperator:
    """N e_m = m e_m."""
    return TruncatedOperator(np.diag(np.arange(n, dtype=float)).astype(complex), (0, 0))


def dz(n: int) -> TruncatedOperator:
    """Lowering derivative: e_m -> m e_{m-1} (equals shift_adjoint @ number)."""
    m = np.zeros((n, n), dtype=complex)
    m[np.arange(n - 1), np.arange(1, n)] = np.arange(1, n, dtype=float)
    return TruncatedOperator(m, (-1, -1))


def dz_star(n: int) -> TruncatedOperator:
    """Raising adjoint: e_m -> (m+1) e_{m+1}; the image ``n*e_n`` of ``e_{n-1}``
    is cut by the truncation, so the last column is zero."""
    m = np.zeros((n, n), dtype=complex)
    m[np.arange(1, n), np.arange(n - 1)] = np.arange(1, n, dtype=float)
    return TruncatedOperator(m, (1, 1))


def finite_rank(block, n: int) -> TruncatedOperator:
    """Embed a k x k block into the top-left corner of an n x n matrix."""
    b = np.asarray(block, dtype=complex)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError(f"block must be square, got shape {b.shape}")
    k = b.shape[0]
    if k > n:
        raise ValueError(f"block size {k} exceeds truncation size {n}")
    m = np.zeros((n, n), dtype=complex)
    m[:k, :k] = b
    return TruncatedOperator(m, (-(k - 1), k - 1) if k > 0 else (0, 0))


# ----------------------------------------------------------------------
# algebra and numerics
# ----------------------------------------------------------------------

def commutator(a: TruncatedOperator, b: TruncatedOperator) -> TruncatedOperator:
    """[a, b] = ab - ba."""
    return a @ b - b @ a


def operator_norm(a: TruncatedOperator, tol: float = 1e-10,
                  max_iterations: int = POWER_ITERATION_CAP) -> float:
    """Largest singular value.

    Uses a full decomposition for ``dim <= 64``, otherwise power iteration on
    ``A* A`` started from the normalized all-ones vector (deterministic, so
    reports are reproducible).  The stop rule watches the value, not the
    vector.  Nearly degenerate top singular values slow the iteration down;
    when the cap is hit, a PowerIterationError signals the caller to fall back
    to a full decomposition.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = a.matrix
    n = a.dim
    if n <= FULL_SVD_DIM:
        return float(np.linalg.svd(m, compute_uv=False)[0])
    gram = m.conj().T @ m
    v = np.full(n, 1.0 / math.sqrt(n), dtype=complex)
    previous = -1.0
    for _ in range(max_iterations):
        w = gram @ v
        lam = float(np.real(np.vdot(v, w)))
        norm_w = float(np.linalg.norm(w))
        if norm_w == 0.0:
            return 0.0
        v = w / norm_w
        sigma = math.sqrt(max(lam, 0.0))
        if previous >= 0.0 and abs(sigma - previous) <= tol * max(sigma, 1e-300):
            return sigma
        previous = sigma
    raise PowerIterationError(
        f"operator norm did not converge within {max_iterations} iterations "
        f"(dim {n}); consider a full decomposition")


def interior_block(a: TruncatedOperator, margin: int) -> TruncatedOperator:
    """Square sub-block away from both truncation corners.

    Identities of the semi-infinite model hold on the truncation only outside
    a boundary collar whose width is set by the band widths involved; this is
    the tool that removes the collar.
    """
    if margin < 0:
        raise ValueError("margin must be >= 0")
    if 2 * margin >= a.dim:
        raise ValueError(f"margin {margin} too large for dim {a.dim}")
    if margin == 0:
        return a
    sub = a.matrix[margin:a.dim - margin, margin:a.dim - margin]
    band = None
    if a.band is not None:
        m = sub.shape[0] - 1
        band = (max(a.band[0], -m), min(a.band[1], m))
    return TruncatedOperator(sub, band)


def symbol_estimate(a: TruncatedOperator, max_freq: int) -> FourierSeries:
    """Recover a symbol from the diagonals, away from the top-left corner.

    For each ``|k| <= max_freq`` the estimate is the average of the entries
    ``A[m+k, m]`` over m in the second half of the valid diagonal range.  On
    an exact Toeplitz matrix this is ``fhat(k)``; adding a finite-rank corner
    block does not move the averaging window, so the estimate converges to the
    symbol as the dimension grows.
    """
    n = a.dim
    if max_freq < 0:
        raise ValueError("max_freq must be >= 0")
    if max_freq >= n / 4:
        raise ValueError(f"max_freq must be < dim/4 = {n / 4}")
    coeffs = {}
    for k in range(-max_freq, max_freq + 1):
        ms = max(0, -k)
        me = n - 1 - max(0, k)
        count = me - ms + 1
        lo = ms + count // 2
        rows = np.arange(lo, me + 1) + k
        cols = np.arange(lo, me + 1)
        coeffs[k] = complex(a.matrix[rows, cols].mean())
    return FourierSeries(coeffs)


def cauchy_riemann_weight_gap(n: int) -> tuple[float, int]:
    """Supremum and argmax of ``sqrt(m(m+1)) - m`` over ``0 <= m < n``.

    This is the coefficient gap between the raising/lowering weights of the
    holomorphic derivative on the disc and their integer replacements; it is
    increasing in m with limit 1/2, so it is uniformly bounded.  Evaluated as
    ``m / (sqrt(m(m+1)) + m)`` to avoid cancellation at large m.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    g = np.zeros(n)
    if n > 1:
        m = np.arange(1, n, dtype=float)
        g[1:] = m / (np.sqrt(m * (m + 1.0)) + m)
    at = int(np.argmax(g))
    return float(g[at]), at


# ----------------------------------------------------------------------
# exact band patterns
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class BandPattern:
    """Exact structural description of banded shift-type operators.

    ``offsets[i]`` places an entry at row ``m + offsets[i]``, column ``m``,
    with weight ``weights[i](m)`` given by exact rational polynomial
    coefficients in ascending order.  The semi-infinite kernel and cokernel
    are computable exactly when the pattern is a single weighted shift.
    """

    offsets: tuple
    weights: tuple  # one tuple of Fraction coefficients per offset

    @classmethod
    def weighted_shift(cls, offset: int, poly_coeffs) -> "BandPattern":
        coeffs = tuple(Fraction(c) for c in poly_coeffs)
        return cls((int(offset),), (coeffs,))

    def weight(self, i: int, m: int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.weights[i]):
            acc = acc * m + c
        return acc

    def realize(self, n: int) -> TruncatedOperator:
        """Float truncation, for cross-checks against the exact computations."""
        m = np.zeros((n, n), dtype=complex)
        for i, d in enumerate(self.offsets):
            for col in range(n):
                row = col + d
                if 0 <= row < n:
                    m[row, col] = float(self.weight(i, col))
        lo = min(self.offsets)
        up = max(self.offsets)
        return TruncatedOperator(m, (lo, up))

    def nonnegative_zeros(self, i: int) -> list[int]:
        """All integers m >= 0 with ``weights[i](m) == 0``, found exactly."""
        coeffs = self.weights[i]
        # strip leading (high-order) zeros
        top = len(coeffs) - 1
        while top > 0 and coeffs[top] == 0:
            top -= 1
        coeffs = coeffs[:top + 1]
        if len(coeffs) == 1:
            if coeffs[0] == 0:
                raise ValueError("identically zero weight has an infinite zero set")
            return []
        lead = coeffs[-1]
        bound = 1 + max(abs(c / lead) for c in coeffs[:-1])
        return [m for m in range(0, math.ceil(bound) + 1) if self.weight(i, m) == 0]


def shift_pattern() -> BandPattern:
    return BandPattern.weighted_shift(1, [1])


def shift_adjoint_pattern() -> BandPattern:
    return BandPattern.weighted_shift(-1, [1])


def dz_pattern() -> BandPattern:
    return BandPattern.weighted_shift(-1, [0, 1])


def dz_star_pattern() -> BandPattern:
    return BandPattern.weighted_shift(1, [1, 1])


def pattern_kernel_dims(p: BandPattern) -> tuple[int, int]:
    """Exact (kernel, cokernel) dimensions of a single weighted shift.

    Computed on the semi-infinite model, never from a truncation: for offset d
    and weight w, the kernel collects the columns m with ``w(m) == 0`` or
    ``m + d < 0``, and the cokernel the rows ``r >= 0`` that are not of the
    form ``m + d`` with ``w(m) != 0``.
    """
    if len(p.offsets) != 1:
        raise ValueError(
            "kernel/cokernel dimensions are exact only for single weighted "
            "shifts; use a rectangular truncation for multi-offset patterns")
    d = p.offsets[0]
    zeros = p.nonnegative_zeros(0)
    ker = len(set(zeros) | set(range(0, max(0, -d))))
    coker = max(d, 0) + sum(1 for m in zeros if m >= max(-d, 0))
    return ker, coker


def rectangular_kernel_dims(p: BandPattern, n: int,
                            rank_tol: float | None = None) -> tuple[int, int]:
    """Numeric (kernel, cokernel) dimensions from a rectangular truncation.

    The domain is the first n columns; the codomain is every row from 0 up to
    the largest row reachable from the domain.  Square truncations always have
    index zero and cannot see the Fredholm index, which is why the codomain
    must follow the band.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    reachable = [m + d
                 for i, d in enumerate(p.offsets)
                 for m in range(n)
                 if m + d >= 0 and p.weight(i, m) != 0]
    if not reachable:
        return n, 0
    top = max(reachable)
    m = np.zeros((top + 1, n), dtype=float)
    for i, d in enumerate(p.offsets):
        for col in range(n):
            row = col + d
            if 0 <= row <= top:
                m[row, col] = float(p.weight(i, col))
    rank = int(np.linalg.matrix_rank(m, tol=rank_tol))
    return n - rank, (top + 1) - rank
