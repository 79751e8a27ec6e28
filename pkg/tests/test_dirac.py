"""Tests for the block Dirac operator: spectrum, polar form, index, sums."""

import io
import math

import numpy as np
import pytest

from toeplitz_triple import operators as op
from toeplitz_triple.dirac import (
    abs_dirac,
    analytic_eigenvector,
    dirac,
    fredholm_index,
    grading,
    polar_check,
    represent,
    spectrum,
    summability_partial_sum,
    summability_report,
)
from toeplitz_triple.fourier import FourierSeries


# ----------------------------------------------------------------------
# assembly
# ----------------------------------------------------------------------

def test_dirac_n2_hand_assembly():
    d = dirac(2)
    expected = np.zeros((4, 4), dtype=complex)
    expected[0, 3] = 1.0
    expected[3, 0] = 1.0
    assert np.array_equal(d.assembled, expected)


def test_dirac_diagonal_blocks_zero():
    d = dirac(9)
    n = 9
    assert np.abs(d.assembled[:n, :n]).max() == 0.0
    assert np.abs(d.assembled[n:, n:]).max() == 0.0


def test_dirac_exactly_hermitian():
    h = dirac(17).assembled
    assert np.abs(h - h.conj().T).max() == 0.0


def test_dirac_requires_n_at_least_two():
    with pytest.raises(ValueError):
        dirac(1)


# ----------------------------------------------------------------------
# grading and representation
# ----------------------------------------------------------------------

def test_grading_relations_exact():
    n = 16
    g = grading(n).matrix
    d = dirac(n).assembled
    assert np.abs(g @ g - np.eye(2 * n)).max() == 0.0
    assert np.abs(g - g.conj().T).max() == 0.0
    assert np.abs(g @ d + d @ g).max() == 0.0


def test_grading_commutes_with_representation():
    n = 12
    g = grading(n).matrix
    p = represent(op.toeplitz(FourierSeries.cosine(4), n)).matrix
    assert np.abs(g @ p - p @ g).max() == 0.0


def test_representation_properties():
    n = 10
    a = op.toeplitz(FourierSeries.cosine(4), n)
    b = op.dz(n)
    assert np.array_equal(represent(op.identity(n)).matrix, np.eye(2 * n))
    assert np.array_equal(represent(a).adjoint().matrix,
                          represent(a.adjoint()).matrix)
    assert np.array_equal(represent(a @ b).matrix,
                          (represent(a) @ represent(b)).matrix)


# ----------------------------------------------------------------------
# analytic eigenvectors
# ----------------------------------------------------------------------

def test_eigenvector_k0():
    v = analytic_eigenvector(0, 4)
    expected = np.zeros(8, dtype=complex)
    expected[4] = 1.0
    assert np.array_equal(v, expected)


def test_eigenvector_k_plus_minus_one():
    n = 4
    s = 1 / math.sqrt(2)
    v = analytic_eigenvector(1, n)
    assert v[0] == pytest.approx(s)
    assert v[n + 1] == pytest.approx(s)
    w = analytic_eigenvector(-1, n)
    assert w[0] == pytest.approx(-s)
    assert w[n + 1] == pytest.approx(s)


def test_eigenvectors_are_exact_eigenvectors():
    n = 16
    h = dirac(n).assembled
    for k in range(-(n - 1), n):
        v = analytic_eigenvector(k, n)
        assert np.linalg.norm(h @ v - k * v) == 0.0


def test_eigenvector_out_of_range():
    with pytest.raises(ValueError):
        analytic_eigenvector(4, 4)


def test_eigenbasis_with_spurious_mode_is_orthonormal():
    n = 16
    columns = [analytic_eigenvector(k, n) for k in range(-(n - 1), n)]
    spurious = np.zeros(2 * n, dtype=complex)
    spurious[n - 1] = 1.0  # first-summand e_{n-1}, the truncation artifact
    basis = np.column_stack(columns + [spurious])
    gram = basis.conj().T @ basis
    assert np.abs(gram - np.eye(2 * n)).max() < 1e-12


# ----------------------------------------------------------------------
# spectrum
# ----------------------------------------------------------------------

@pytest.mark.parametrize("n", [8, 64])
def test_spectrum_ladder(n):
    report = spectrum(dirac(n))
    assert [round(v) for v in report.eigenvalues] == sorted(
        list(range(-(n - 1), n)) + [0])
    assert max(report.residuals) < 1e-10
    assert len(report.spurious) == 1
    assert abs(report.eigenvalues[report.spurious[0]]) < 1e-12


def test_spectrum_n2():
    report = spectrum(dirac(2))
    assert [round(v) for v in report.eigenvalues] == [-1, 0, 0, 1]


def test_spectrum_nonzero_multiplicities_one():
    report = spectrum(dirac(32))
    for value, mult in zip(report.distinct_values, report.multiplicities):
        if abs(value) > 0.5:
            assert mult == 1
        else:
            assert mult == 2
    assert sum(report.multiplicities) == 64


def test_spectrum_serialization():
    report = spectrum(dirac(4))
    obj = report.to_json_obj()
    assert set(obj) == {"dim", "eigenvalues", "residuals", "spurious",
                        "distinct_values", "multiplicities"}
    stream = io.StringIO()
    report.to_csv(stream)
    lines = stream.getvalue().splitlines()
    assert lines[0] == "index,eigenvalue,residual,spurious"
    assert len(lines) == 9


def test_spectrum_rejects_bad_tolerance():
    with pytest.raises(ValueError):
        spectrum(dirac(4), tol=0.0)


# ----------------------------------------------------------------------
# polar decomposition
# ----------------------------------------------------------------------

def test_abs_dirac_matches_number_blocks_interior():
    n = 32
    a = abs_dirac(n)
    expected_tl = np.diag(np.arange(1, n + 1, dtype=float))
    expected_br = np.diag(np.arange(n, dtype=float))
    sl = slice(2, n - 2)
    assert np.abs(a[:n, :n][sl, sl] - expected_tl[sl, sl]).max() < 1e-10
    assert np.abs(a[n:, n:][sl, sl] - expected_br[sl, sl]).max() < 1e-10


def test_polar_check_passes_at_64():
    report = polar_check(64, 2)
    assert report.passed
    assert report.max_deviation < 1e-10
    assert report.details["absdirac_interior_deviation"] < 1e-10
    assert report.details["factor_interior_deviation"] < 1e-10
    assert report.details["recomposition_interior_deviation"] < 1e-10
    # the boundary collar carries an O(n) artifact the margin removes
    assert report.details["absdirac_full_deviation_with_collar"] > 1.0


def test_polar_check_preconditions():
    with pytest.raises(ValueError):
        polar_check(64, 0)
    with pytest.raises(ValueError):
        polar_check(8, 4)


# ----------------------------------------------------------------------
# Fredholm index
# ----------------------------------------------------------------------

def test_fredholm_index_is_one():
    assert fredholm_index(16, 32) == 1


def test_fredholm_index_stable_across_pairs():
    assert {fredholm_index(a, b) for a, b in [(16, 32), (32, 64), (64, 128)]} \
        == {1}


def test_forward_shift_index_minus_one():
    k, c = op.rectangular_kernel_dims(op.shift_pattern(), 64)
    assert (k, c) == (0, 1)


def test_fredholm_index_bad_sizes():
    with pytest.raises(ValueError):
        fredholm_index(32, 16)


# ----------------------------------------------------------------------
# summability
# ----------------------------------------------------------------------

def test_partial_sum_k1():
    assert summability_partial_sum(0.0, 1) == pytest.approx(2.0, abs=1e-15)


def test_partial_sum_matches_harmonic_numbers():
    big_k = 1000
    harmonic = sum(1.0 / j for j in range(1, big_k + 2))
    assert summability_partial_sum(0.0, big_k) == pytest.approx(
        2.0 * harmonic - 1.0, rel=1e-12)


def test_doubling_difference_approaches_2log2():
    big_k = 10**5
    diff = summability_partial_sum(0.0, 2 * big_k) - summability_partial_sum(0.0, big_k)
    assert abs(diff - 2 * math.log(2)) / (2 * math.log(2)) < 0.02


def test_epsilon_one_limit_bracket():
    limit = math.pi**2 / 3 - 1.0
    report = summability_report(1.0, 10**5)
    assert report["partial_sum"] <= limit <= report["partial_sum"] + report["tail_bound"]
    assert report["tail_bound"] < 1e-3
    assert abs(report["extrapolated_limit"] - limit) < 1e-6


def test_partial_sum_monotone_in_k_and_epsilon():
    values_k = [summability_partial_sum(0.5, k) for k in (10, 100, 1000)]
    assert values_k[0] < values_k[1] < values_k[2]
    values_eps = [summability_partial_sum(e, 1000) for e in (0.0, 0.5, 1.0, 2.0)]
    assert all(b < a for a, b in zip(values_eps, values_eps[1:]))


def test_summability_report_divergent_branch():
    report = summability_report(0.0, 1000)
    assert report["converges"] is False
    assert report["tail_bound"] is None
    assert "not trace class" in report["note"]


def test_summability_preconditions():
    with pytest.raises(ValueError):
        summability_partial_sum(0.0, 0)
    with pytest.raises(ValueError):
        summability_partial_sum(-0.5, 10)
