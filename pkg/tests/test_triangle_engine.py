from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, settings, strategies as st

from app.models.triangle import GkpCoefficients, Triangle, TriangleKind
from app.services.exceptions import NonIntegralEntryError, SizeMismatchError, UnknownKindError, WorkbenchError
from app.services.triangle_engine import (
    TriangleService,
    binomial_matrix,
    diagonal_formula,
    eulerian_r,
    eulerian_shifted_reversed,
    gkp_binomial_transform,
    gkp_generate,
    matmul,
    ordered_phylo_triangle,
    quasi_eulerian,
    r_associated,
    reverse_rows,
    reverse_shift,
    stirling_cycle_r,
    stirling_second_order,
    stirling_subset_r,
    three_term_generate,
)
from tests.golden_tables import ROW_SUMS, TABLES, padded


def identity(n_max):
    return Triangle(rows=[[1 if k == n else 0 for k in range(n + 1)] for n in range(n_max + 1)])


# Golden tables

@pytest.mark.parametrize("family,r", sorted(TABLES))
def test_golden_tables(family, r):
    table = TABLES[(family, r)]
    n_max = max(table)
    service = TriangleService()
    T = service.triangle_for(family, r, n_max)
    for n, printed in table.items():
        assert T.row(n) == padded(printed, n), (family, r, n)
        assert T.row_sum(n) == ROW_SUMS[(family, r)][n]


def test_cycle_examples():
    assert stirling_cycle_r(2, 3).row(3) == [0, 6, 20, 15]
    assert stirling_cycle_r(2, 3).row_sum(3) == 41
    assert stirling_cycle_r(3, 2).row(2) == [0, 6, 40]
    assert stirling_cycle_r(4, 1).row(1) == [0, 6]
    assert stirling_cycle_r(2, 4).entry(4, 4) == 105


def test_subset_examples():
    assert stirling_subset_r(2, 4).row(4) == [0, 1, 25, 105, 105]
    assert stirling_subset_r(2, 4).row_sum(4) == 236
    assert stirling_subset_r(3, 3).row(3) == [0, 1, 35, 280]
    assert stirling_subset_r(4, 2).row(2) == [0, 1, 35]


def test_order_one_is_classical():
    assert stirling_cycle_r(1, 2).rows == [[1], [0, 1], [0, 1, 1]]
    assert stirling_subset_r(1, 4).row(4) == [0, 1, 7, 6, 1]


# GKP recurrences

def test_gkp_second_order_eulerian():
    T = gkp_generate(GkpCoefficients.of(0, 1, 1, 2, -1, -1), 3)
    assert T.row(3) == [1, 8, 6, 0]
    assert T.row_sum(3) == 15
    assert T.row(0) == [1]


def test_gkp_shifted_reversed_eulerian():
    T = gkp_generate(GkpCoefficients.of(1, 1, 0, 1, -1, 0), 3)
    assert T.row(3) == [6, 8, 1, 0]


def test_gkp_non_integral_entry():
    with pytest.raises(NonIntegralEntryError) as exc:
        gkp_generate(GkpCoefficients.of(0, 0, Fraction(1, 2), 0, 0, 0), 2)
    assert (exc.value.n, exc.value.k) == (1, 0)


def test_gkp_coefficients_serialize_as_strings():
    coeffs = GkpCoefficients.of(Fraction(1, 2), 1, "-3/4", 0, 0, 0)
    dumped = coeffs.model_dump(mode="json")
    assert dumped["alpha"] == "1/2"
    assert dumped["gamma"] == "-3/4"


def test_binomial_transform_examples():
    rec = gkp_binomial_transform(GkpCoefficients.of(0, 1, 1, 2, -1, -1), 1)
    assert rec.linear.as_tuple() == (2, -1, -1, 2, -1, -1)
    assert rec.is_two_term

    rec = gkp_binomial_transform(GkpCoefficients.of(1, 1, 0, 1, -1, 0), 1)
    assert rec.linear.as_tuple() == (2, -1, -1, 1, -1, 0)
    assert rec.is_two_term

    coeffs = GkpCoefficients.of(3, -2, 5, 1, 4, -1)
    assert gkp_binomial_transform(coeffs, 0).linear == coeffs


def test_binomial_transform_vanishing_xi():
    rec = gkp_binomial_transform(GkpCoefficients.of(0, 1, 1, 2, -1, -1))
    assert rec.xi == 1
    assert rec.lam == 0
    with pytest.raises(WorkbenchError):
        gkp_binomial_transform(GkpCoefficients.of(1, 1, 0, 1, 0, 0))


def test_binomial_transform_special_cases():
    # reversed C^(2) = E^(2)·B_1 and reversed S^(2) = shifted reversed E^(2)·B_1
    rec = gkp_binomial_transform(GkpCoefficients.of(0, 1, 1, 2, -1, -1), 1)
    assert three_term_generate(rec, 10).rows == reverse_rows(stirling_cycle_r(2, 10)).rows
    rec = gkp_binomial_transform(GkpCoefficients.of(1, 1, 0, 1, -1, 0), 1)
    assert three_term_generate(rec, 10).rows == reverse_rows(stirling_subset_r(2, 10)).rows


small = st.integers(min_value=-3, max_value=3)


@settings(max_examples=60, deadline=None)
@given(a=small, b=small, c=small, ap=small, bp=small, cp=small, xi=st.integers(min_value=-2, max_value=2))
def test_binomial_transform_matches_matrix_product(a, b, c, ap, bp, cp, xi):
    coeffs = GkpCoefficients.of(a, b, c, ap, bp, cp)
    A = gkp_generate(coeffs, 6)
    rec = gkp_binomial_transform(coeffs, xi)
    assert three_term_generate(rec, 6).rows == matmul(A, binomial_matrix(xi, 6)).rows


@given(a=small, b=small, c=small, ap=small, bp=small, cp=small, xi=st.fractions(max_denominator=5))
def test_binomial_transform_inverse_pair(a, b, c, ap, bp, cp, xi):
    coeffs = GkpCoefficients.of(a, b, c, ap, bp, cp)
    forward = gkp_binomial_transform(coeffs, xi)
    back = gkp_binomial_transform(forward.linear, -xi)
    assert back.linear == coeffs


# r-associated numbers

def test_r_associated_derangements():
    T = r_associated("cycle", 2, 4)
    assert T.entry(4, 2) == 3
    assert r_associated("subset", 3, 0).rows == [[1]]


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5])
def test_column_shift_identity(r):
    n_max = 15 if r <= 3 else 10
    C = stirling_cycle_r(r, n_max)
    S = stirling_subset_r(r, n_max)
    assoc_c = r_associated("cycle", r, r * n_max)
    assoc_s = r_associated("subset", r, r * n_max)
    for n in range(n_max + 1):
        for k in range(n + 1):
            assert C.entry(n, k) == assoc_c.entry(n + (r - 1) * k, k)
            assert S.entry(n, k) == assoc_s.entry(n + (r - 1) * k, k)


def test_r_associated_support():
    T = r_associated("cycle", 3, 12)
    for N in range(13):
        for k in range(N + 1):
            if N < 3 * k and (N, k) != (0, 0):
                assert T.entry(N, k) == 0


def test_second_order_closed_recurrences():
    assert stirling_second_order("cycle", 15).rows == stirling_cycle_r(2, 15).rows
    assert stirling_second_order("subset", 15).rows == stirling_subset_r(2, 15).rows
    with pytest.raises(UnknownKindError):
        stirling_second_order("eulerian", 3)


# Eulerian triangles

def test_eulerian_examples():
    assert eulerian_r(2, 4).row(4) == [1, 22, 58, 24, 0]
    assert eulerian_r(1, 3).row(3) == [1, 4, 1, 0]
    assert eulerian_r(5, 1).row(1) == [1, 0]


def test_shifted_reversed_eulerian():
    E = eulerian_shifted_reversed(2, 6)
    assert E.rows[0] == [1]
    assert E.row(3) == [6, 8, 1, 0]
    assert E.rows == reverse_shift(eulerian_r(2, 6)).rows


def test_reverse_rows():
    C = stirling_cycle_r(2, 6)
    assert reverse_rows(C).row(2) == [3, 2, 0]
    assert reverse_rows(C).row(0) == [1]
    C3 = stirling_cycle_r(3, 6)
    assert reverse_rows(reverse_rows(C3)).rows == C3.rows


# Matrix algebra

def test_binomial_matrix():
    assert binomial_matrix(1, 4).row(4) == [1, 4, 6, 4, 1]
    assert binomial_matrix(-1, 2).row(2) == [1, -2, 1]
    assert matmul(binomial_matrix(1, 6), binomial_matrix(-1, 6)).rows == identity(6).rows
    with pytest.raises(NonIntegralEntryError):
        binomial_matrix(Fraction(1, 2), 2)


def test_matmul():
    E = eulerian_r(2, 15)
    assert matmul(E, binomial_matrix(1, 15)).row(2) == [3, 2, 0]
    assert matmul(E, identity(15)).rows == E.rows
    with pytest.raises(SizeMismatchError):
        matmul(E, identity(3))


def test_second_order_matrix_identities():
    B = binomial_matrix(1, 15)
    assert matmul(eulerian_r(2, 15), B).rows == reverse_rows(stirling_cycle_r(2, 15)).rows
    shifted = eulerian_shifted_reversed(2, 15)
    assert matmul(shifted, B).row(3) == [15, 10, 1, 0]
    assert matmul(shifted, B).rows == reverse_rows(stirling_subset_r(2, 15)).rows


def test_quasi_eulerian_examples():
    assert quasi_eulerian("cycle", 3, 2).row(2) == [34, 6, 0]
    assert quasi_eulerian("subset", 1, 3).row(3) == [-1, 1, 1, 0]
    assert quasi_eulerian("cycle", 2, 5).row(5) == [1, 52, 328, 444, 120, 0]


def test_quasi_eulerian_second_order():
    assert quasi_eulerian("cycle", 2, 15).rows == eulerian_r(2, 15).rows
    assert quasi_eulerian("subset", 2, 15).rows == eulerian_shifted_reversed(2, 15).rows


@pytest.mark.parametrize("r", [2, 3, 4, 5])
def test_quasi_eulerian_nonnegative(r):
    for kind in ("cycle", "subset"):
        T = quasi_eulerian(kind, r, 12)
        assert all(v >= 0 for row in T.rows for v in row)


def test_quasi_eulerian_order_one_has_negatives():
    assert any(v < 0 for v in quasi_eulerian("cycle", 1, 3).row(3))


# Closed forms

def test_diagonal_formula():
    assert diagonal_formula("cycle", 3, 3) == 2240
    assert diagonal_formula("subset", 4, 2) == 35
    assert diagonal_formula("cycle", 5, 0) == 1
    assert diagonal_formula("subset", 5, 0) == 1
    with pytest.raises(UnknownKindError):
        diagonal_formula("eulerian", 2, 2)


def test_ordered_phylo_triangle():
    D = ordered_phylo_triangle(8)
    assert D.row(0) == [1]
    assert D.row(3) == [0, 24, 120, 120]
    assert D.row_sum(3) == 264
    assert D.entry(4, 2) == 1080
    for n in range(2, 9):
        for k in range(1, n + 1):
            expected = (2 * n + 2 * k - 2) * D.entry(n - 1, k - 1) + (n + 2 * k - 1) * D.entry(n - 1, k)
            assert D.entry(n, k) == expected
            assert D.entry(n, k) == factorial(n + k) // factorial(k) * comb(n - 1, k - 1)


# Triangle model

def test_triangle_invariants():
    with pytest.raises(ValueError):
        Triangle(rows=[[1], [0]])
    with pytest.raises(ValueError):
        Triangle(rows=[[2]])
    with pytest.raises(ValueError):
        Triangle(kind=TriangleKind.EULERIAN, rows=[[1], [-1, 0]])
    with pytest.raises(ValueError):
        Triangle(kind=TriangleKind.STIRLING_CYCLE, order=2, rows=[[1], [0, 2]])


def test_triangle_helpers():
    C = stirling_cycle_r(2, 4)
    assert C.column(1) == [0, 1, 2, 6, 24]
    assert C.leading(3) == [[1, 0, 0], [0, 1, 0], [0, 2, 3]]
    assert C.to_json() == {"kind": "StirlingCycle", "r": 2, "rows": C.rows}


def test_service_dispatch_and_cache():
    service = TriangleService()
    big = service.triangle_for("cycle", 2, 10)
    small = service.triangle_for("cycle", 2, 4)
    assert small.rows == big.rows[:5]
    assert service.triangle_for("cycle", 2, 4, reversed=True).row(2) == [3, 2, 0]
    assert service.triangle_for("ordered-phylo", 1, 3).row(3) == [0, 24, 120, 120]
    with pytest.raises(UnknownKindError):
        service.triangle_for("bell", 2, 3)
