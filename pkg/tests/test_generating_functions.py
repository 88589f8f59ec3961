from fractions import Fraction
from math import factorial

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from app.models.combinatorics import PhyloFlavor
from app.models.polynomial import IntPolynomial
from app.models.series import TruncatedSeries, WardSpecialization, series_ring
from app.services.combinatorial_oracles import multivariate_ward
from app.services.exceptions import NonIntegralEntryError, SeriesCompositionError, SizeMismatchError, UnknownKindError
from app.services.generating_functions import (
    GF_CHECKS,
    SERIES_MAX_ORDER,
    check_generating_function,
    degree_function,
    egf_polynomials,
    identity_instance,
    ordered_tree_egf,
    solve_autonomous_ode,
    stirling_t_fraction,
    t_fraction_expand,
    ternary_tree_egf,
    to_int_polynomial,
    tree_series,
    verify_tree_identities,
    verify_tree_identity,
    ward_egf,
    ward_polynomials,
)
from app.services.triangle_engine import ordered_phylo_triangle, stirling_cycle_r, stirling_subset_r

CYCLE2 = stirling_cycle_r(2, 8)
SUBSET2 = stirling_subset_r(2, 8)


@pytest.fixture
def R():
    return series_ring("x,y")


def _rows(polys, n_max):
    return [[polys[n].coefficient(k) for k in range(n + 1)] for n in range(n_max + 1)]


# Series arithmetic

def test_derivative_and_integral(R):
    t = TruncatedSeries.variable(R, 4)
    square = t * t
    assert square.derivative() == TruncatedSeries.from_coefficients(R, 3, [0, 2])
    assert square.derivative().integral() == square


def test_geometric_times_one_minus_t(R):
    t = TruncatedSeries.variable(R, 6)
    assert (1 - t) * t.geometric() == TruncatedSeries.one(R, 6)


def test_exp_of_log_recovers_series(R):
    x, y = R.gens
    s = TruncatedSeries.from_coefficients(R, 6, [0, x, y, 1])
    assert s.log1m().exp() == 1 - s


def test_composition_needs_zero_constant_term(R):
    s = TruncatedSeries.from_coefficients(R, 3, [1, 1])
    with pytest.raises(SeriesCompositionError):
        s.compose(s)
    with pytest.raises(SeriesCompositionError):
        s.exp()
    with pytest.raises(SeriesCompositionError):
        TruncatedSeries.variable(R, 3).reciprocal()


def test_operations_truncate_to_shorter_operand(R):
    long = TruncatedSeries.one(R, 8)
    short = TruncatedSeries.variable(R, 3)
    assert (long + short).order == 3
    assert (long * short).order == 3
    with pytest.raises(SizeMismatchError):
        short.coefficient(4)


def test_egf_coefficients_must_be_integral(R):
    s = TruncatedSeries.from_coefficients(R, 2, [0, Fraction(1, 2)])
    with pytest.raises(NonIntegralEntryError):
        s.egf_coefficients()
    assert [int(c.LC) for c in TruncatedSeries.from_coefficients(R, 2, [0, 1, Fraction(1, 2)]).egf_coefficients()[1:]] == [1, 1]


@given(st.lists(st.integers(min_value=-5, max_value=5), min_size=1, max_size=7))
@settings(max_examples=40, deadline=None)
def test_reciprocal_is_inverse(tail):
    R = series_ring("x")
    s = TruncatedSeries.from_coefficients(R, len(tail), [1] + tail)
    assert s * s.reciprocal() == TruncatedSeries.one(R, len(tail))


# Autonomous equations

def test_increasing_plane_trees():
    R = series_ring("x")
    F = solve_autonomous_ode(degree_function(R, 6, factorial), 6)
    assert [int(c.LC) if c else 0 for c in F.egf_coefficients()] == [0, 1, 1, 3, 15, 105, 945]


def test_recursive_trees():
    R = series_ring("x")
    F = solve_autonomous_ode(degree_function(R, 6, lambda i: 1), 6)
    assert [int(c.LC) if c else 0 for c in F.egf_coefficients()] == [0, 1, 1, 2, 6, 24, 120]


def test_degree_function_must_cover_order():
    R = series_ring("x")
    with pytest.raises(SizeMismatchError):
        solve_autonomous_ode(TruncatedSeries.one(R, 2), 6)


# Tree identities

def test_every_identity_instance_holds():
    reports = verify_tree_identities(8)
    assert [r.label for r in reports] == ["ternary", "binary", "power(k=2)", "power(k=3)", "power(k=4)", "cyclic"]
    assert all(r.passed for r in reports)
    assert all(r.first_failing_order is None for r in reports)


def test_power_instance_with_k_two_is_ternary():
    assert identity_instance("power", 6, 2) == identity_instance("ternary", 6)


def test_mismatched_pair_fails_precondition():
    phi_hat, _ = identity_instance("ternary", 6)
    _, chi = identity_instance("binary", 6)
    report = verify_tree_identity(phi_hat, chi, 6, "mixed")
    assert not report.precondition_holds
    assert not report.passed
    assert report.first_failing_order == 1


def test_unknown_instance():
    with pytest.raises(UnknownKindError):
        identity_instance("quartic", 4)


def test_binary_instance_at_unit_weights(R):
    x, y = R.gens
    A, B = tree_series("binary", 8)
    one = [(x, R(1)), (y, R(1))]
    A1 = TruncatedSeries(R, tuple(c.compose(one) for c in A.coeffs))
    B1 = TruncatedSeries(R, tuple(c.compose(one) for c in B.coeffs))
    assert A1.exp() - 1 == B1
    assert A1.derivative() - 1 == B1.truncate(7)


def test_ordered_tree_egf_gives_shifted_cycle_rows(R):
    x = R.gens[0]
    polys = egf_polynomials(ordered_tree_egf(8), y=1 + x)
    assert polys[0] == IntPolynomial()
    assert _rows(polys[1:], 7) == [CYCLE2.row(n) for n in range(8)]


def test_ternary_tree_egf_gives_cycle_rows(R):
    x = R.gens[0]
    polys = egf_polynomials(ternary_tree_egf(7), y=1 + x)
    assert _rows(polys, 7) == [CYCLE2.row(n) for n in range(8)]


def test_small_ternary_coefficients(R):
    x, y = R.gens
    B = ternary_tree_egf(3, primed=False)
    assert B.egf_coefficients()[1] == R(1)
    assert B.egf_coefficients()[2] == x + 2 * y


# Ward polynomials

def test_multivariate_ward_matches_enumeration():
    for n, W in enumerate(ward_polynomials(6)):
        assert sympy.expand(W.as_expr() - multivariate_ward(n).as_expr()) == 0


def test_ward_two():
    W = ward_polynomials(3)[2]
    x1, x2 = sympy.symbols("x1 x2")
    assert sympy.expand(W.as_expr() - (3 * x1**2 + x2)) == 0


@pytest.mark.parametrize(
    "specialization,triangle",
    [
        (WardSpecialization.SUBSET, SUBSET2),
        (WardSpecialization.CYCLIC, CYCLE2),
        (WardSpecialization.ORDERED, ordered_phylo_triangle(8)),
    ],
)
def test_ward_specializations(specialization, triangle):
    polys = ward_polynomials(8, specialization)
    assert _rows(polys, 7) == [triangle.row(n) for n in range(8)]


def test_cyclic_ward_differential_equation():
    W = ward_egf(9, WardSpecialization.CYCLIC)
    x = W.ring.gens[0]
    rhs = 1 + (W * x) * (W * (1 + x)).geometric()
    assert W.derivative() == rhs.truncate(8)


# T-fractions

def test_stirling_t_fraction_rows():
    polys = stirling_t_fraction(8)
    assert polys[2] == IntPolynomial((0, 1, 3))
    assert _rows(polys, 8) == [SUBSET2.row(n) for n in range(9)]


def test_t_fraction_agrees_with_subset_ward():
    assert stirling_t_fraction(10)[1:] == ward_polynomials(11, WardSpecialization.SUBSET)[1:]


def test_finite_t_fraction_is_geometric():
    polys = t_fraction_expand([IntPolynomial.constant(1)], [], 5)
    assert polys == [IntPolynomial.constant(1)] * 6


def test_catalan_continued_fraction():
    one = IntPolynomial.constant(1)
    polys = t_fraction_expand(lambda n: one, lambda n: IntPolynomial(), 6)
    assert [p.coefficient(0) for p in polys] == [1, 1, 2, 5, 14, 42, 132]


# Cross-checks

@pytest.mark.parametrize("name", GF_CHECKS)
def test_generating_function_checks(name):
    check = check_generating_function(name, 6)
    assert check.passed, check.mismatches


@pytest.mark.parametrize("flavor", list(PhyloFlavor))
def test_ward_check_for_each_flavor(flavor):
    check = check_generating_function("ward", 5, flavor)
    assert check.passed
    assert check.params["flavor"] == flavor.value


def test_check_errors():
    with pytest.raises(UnknownKindError):
        check_generating_function("bessel", 4)
    with pytest.raises(SizeMismatchError):
        ward_egf(SERIES_MAX_ORDER + 1)


def test_to_int_polynomial_rejects_leftover_variables(R):
    x, y = R.gens
    with pytest.raises(SizeMismatchError):
        to_int_polynomial(x * y)
    assert to_int_polynomial(x * y + 1, y=2) == IntPolynomial((1, 2))


def test_compose_and_log_examples(R):
    t = TruncatedSeries.variable(R, 3)
    ratio = TruncatedSeries.from_coefficients(R, 3, [0, 1, 1, 1])
    assert ratio.compose(t + t * t) == TruncatedSeries.from_coefficients(R, 3, [0, 1, 2, 3])
    u = TruncatedSeries.variable(R, 10)
    assert (-u).log1m().exp() == 1 + u


def test_trivial_degree_function_gives_t(R):
    assert solve_autonomous_ode(TruncatedSeries.one(R, 5), 5) == TruncatedSeries.variable(R, 5)


def test_tree_counts_at_unit_weights(R):
    ones = {"x": 1, "y": 1}
    ternary = egf_polynomials(ternary_tree_egf(6, primed=False), **ones)
    assert [p.coefficient(0) for p in ternary] == [0, 1, 3, 15, 105, 945, 10395]
    ordered = egf_polynomials(ordered_tree_egf(7), **ones)
    assert [p.coefficient(0) for p in ordered] == [0, 1, 1, 3, 15, 105, 945, 10395]


def test_ward_four():
    W = ward_polynomials(5)[4]
    x1, x2, x3, x4 = sympy.symbols("x1 x2 x3 x4")
    expected = 105 * x1**4 + 105 * x1**2 * x2 + 15 * x1 * x3 + 10 * x2**2 + x4
    assert sympy.expand(W.as_expr() - expected) == 0


def test_zero_t_fraction_is_constant():
    polys = t_fraction_expand([], [], 4)
    assert polys == [IntPolynomial.constant(1)] + [IntPolynomial()] * 4
