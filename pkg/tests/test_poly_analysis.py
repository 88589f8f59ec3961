from fractions import Fraction
from math import factorial

import pytest

from app.models.polynomial import IntPolynomial
from app.models.roots import RootCertificate, RootFamily, Sign
from app.models.triangle import Triangle
from app.services.exact_linalg import neville_tp_test, toeplitz_of_row
from app.services.exceptions import CertificationError, NonConvergenceError, UnknownKindError, WorkbenchError
from app.services.poly_analysis import (
    cauchy_bound,
    certify_roots,
    certify_sequence,
    derivative_quadratic,
    discriminant_sign,
    family_polynomials,
    hat_boundary_values,
    hat_recurrence_step,
    hat_sequence,
    interlaces,
    isolating_intervals,
    left_half_plane_fraction,
    log_concave_rows,
    normalized_root_cloud,
    numeric_roots,
    real_root_count,
    row_poly,
    sturm_count,
    subdiagonal_closed_forms,
)
from app.services.triangle_engine import stirling_cycle_r, stirling_subset_r


def P(*coeffs):
    return IntPolynomial(coeffs)


# Row polynomials

def test_row_poly_examples():
    assert row_poly(stirling_cycle_r(2, 4), 2) == P(0, 2, 3)
    assert row_poly(stirling_subset_r(2, 4), 3) == P(0, 1, 10, 15)
    assert row_poly(stirling_subset_r(5, 2), 0) == P(1)
    with pytest.raises(ValueError):
        row_poly(stirling_cycle_r(2, 3), 4)


# Sturm counts

def test_sturm_count_examples():
    assert sturm_count(P(-1, 0, 1), -2, 0) == 1
    assert sturm_count(P(1, 0, 1), -10, 10) == 0
    c_hat_3 = row_poly(stirling_cycle_r(2, 4), 4).divide_by_x()
    assert c_hat_3 == P(24, 130, 210, 105)
    assert sturm_count(c_hat_3, -1, 0) == 3


def test_sturm_count_open_interval_excludes_endpoint_zeros():
    assert sturm_count(P(-1, 0, 1), -1, 1) == 0
    assert sturm_count(P(-1, 0, 1), -1, 2) == 1
    assert sturm_count(P(0, -1, 0, 1), -1, 1) == 1
    assert sturm_count(P(-1, 0, 1), Fraction(1, 2), Fraction(1, 3)) == 0


def test_sturm_count_whole_line_and_multiple_zeros():
    # (x−1)²(x+2)
    p = P(2, -3, 0, 1)
    assert sturm_count(p) == 2
    assert real_root_count(p) == 2
    assert real_root_count(p, multiplicity=True) == 3
    assert sturm_count(P(7)) == 0
    with pytest.raises(WorkbenchError):
        sturm_count(IntPolynomial())


def test_cauchy_bound_encloses_zeros():
    p = P(-6, 11, -6, 1)  # zeros 1, 2, 3
    bound = cauchy_bound(p)
    assert bound == 12
    assert sturm_count(p, -bound, bound) == 3


# Certificates

@pytest.mark.parametrize("family", ["cycle2", "subset2", "orderedPhylo"])
def test_certify_roots_desk_scale(family):
    certificates = certify_roots(family, 10)
    assert [c.n for c in certificates] == list(range(1, 11))
    for cert in certificates:
        assert cert.passed
        assert cert.all_real and cert.simple and cert.interlaces_previous
        assert cert.sturm_counts == [cert.degree, cert.degree]
        assert cert.degree == cert.n - 1


def test_certificate_for_n_equal_one_is_vacuous():
    cert = certify_roots("cycle2", 1)[0]
    assert cert.degree == 0
    assert cert.value_at_zero == 1
    assert cert.sturm_counts == [0, 0]


@pytest.mark.parametrize("family", ["cycle2", "subset2"])
def test_certify_roots_full_range(family):
    assert all(c.passed for c in certify_roots(family, 25))


@pytest.mark.slow
def test_certify_ordered_phylo_full_range():
    assert all(c.passed for c in certify_roots("orderedPhylo", 20))


@pytest.mark.parametrize("family,kind", [("cycle2", "cycle"), ("subset2", "subset")])
def test_certificate_boundary_values(family, kind):
    for cert in certify_roots(family, 12):
        at_zero, at_minus_one = hat_boundary_values(kind, cert.n - 1)
        assert cert.value_at_zero == at_zero
        assert cert.value_at_minus_one == at_minus_one


def test_certify_sequence_detects_nonreal_zeros():
    polys = [row_poly(stirling_cycle_r(3, 5), n) for n in range(6)]
    certificates = certify_sequence(polys, "cycle3")
    assert certificates[0].passed and certificates[1].passed
    assert certificates[2].failed_clause == "real zeros in (-1, 0)"
    assert not certificates[2].all_real


def test_certify_sequence_requires_zero_at_origin():
    certificates = certify_sequence([P(1), P(1, 1)], "shifted")
    assert certificates[0].failed_clause == "root at zero"


def test_certify_roots_errors():
    with pytest.raises(UnknownKindError):
        certify_roots("cycle3", 4)
    with pytest.raises(ValueError):
        certify_roots("cycle2", 0)


def test_certify_roots_raises_on_failure(monkeypatch):
    from app.services import poly_analysis

    cubic = [row_poly(stirling_cycle_r(3, 4), n) for n in range(5)]
    monkeypatch.setattr(poly_analysis, "family_polynomials", lambda family, n_max: cubic)
    with pytest.raises(CertificationError) as info:
        certify_roots("cycle2", 4)
    assert info.value.n == 3


def test_certificate_model_invariant():
    with pytest.raises(ValueError):
        RootCertificate(
            family="x",
            n=3,
            degree=2,
            root_at_zero=True,
            all_real=True,
            simple=True,
            interlaces_previous=True,
            sturm_counts=[1, 1],
            value_at_zero=1,
            value_at_minus_one=1,
        )


def test_certificate_serializes_interval_as_strings():
    data = certify_roots("subset2", 2)[1].model_dump(mode="json")
    assert data["interval"] == ["-1", "0"]


def test_interlacing():
    prev = P(1, 2)  # −1/2
    assert interlaces(prev, P(3, 16, 16))  # −3/4, −1/4
    assert not interlaces(prev, P(1, 12, 32))  # −1/4, −1/8
    assert not interlaces(prev, P(1, 4, 4))  # double zero
    assert not interlaces(prev, P(0, 1, 2))  # common zero
    assert interlaces(P(1), P(1, 2))


def test_interlacing_with_exact_rational_zeros():
    # zeros −2/3, −1/3 against −3/4, −1/2, −1/4
    assert interlaces(P(2, 9, 9), P(3, 22, 48, 32))
    assert not interlaces(P(2, 9, 9), P(1, 11, 38, 40))  # −1/2, −1/4, −1/5
    assert interlaces(P(1, 2), P(3, 16, 16), Fraction(-1), Fraction(0))


def test_interlacing_irrational_neighbours():
    # 1 + 4x + 2x² has zeros −1 ± 1/√2, i.e. ≈ −1.707 and ≈ −0.293
    q = P(1, 4, 2)
    assert interlaces(P(1, 1), q, -2, 0)
    assert interlaces(P(3, 10), q, -2, 0)  # −0.3 sits just left of −0.293
    assert not interlaces(P(7, 25), q, -2, 0)  # −0.28 sits right of it


def test_isolating_intervals():
    intervals = isolating_intervals(P(3, 16, 16), -1, 0)
    assert len(intervals) == 2
    (a, b), (c, d) = intervals
    assert a <= Fraction(-3, 4) <= b < c <= Fraction(-1, 4) <= d
    assert isolating_intervals(P(1, 4, 4), -1, 0) is None
    assert isolating_intervals(P(1, 1), -1, 0) == []


@pytest.mark.parametrize("family", ["cycle2", "subset2", "orderedPhylo"])
def test_certify_roots_reaches_n18(family):
    certificates = certify_roots(family, 18)
    assert certificates[-1].degree == 17
    assert all(c.interlaces_previous for c in certificates)


def test_family_polynomials():
    assert family_polynomials(RootFamily.ORDERED_PHYLO, 2) == [P(1), P(0, 2), P(0, 6, 12)]


# Hat recurrences

def test_hat_recurrence_examples():
    one = IntPolynomial.constant(1)
    assert hat_recurrence_step(one, 1, "cycle") == P(2, 3)
    assert hat_recurrence_step(one, 1, "subset") == P(1, 3)
    assert hat_recurrence_step(IntPolynomial.constant(5), 4, "cycle") == P(25, 30)
    with pytest.raises(UnknownKindError):
        hat_recurrence_step(one, 1, "eulerian")


@pytest.mark.parametrize("kind,build", [("cycle", stirling_cycle_r), ("subset", stirling_subset_r)])
def test_hat_sequence_matches_row_polynomials(kind, build):
    T = build(2, 21)
    for n, poly in enumerate(hat_sequence(kind, 20)):
        assert poly == row_poly(T, n + 1).divide_by_x()


@pytest.mark.parametrize("kind", ["cycle", "subset"])
def test_hat_boundary_identities(kind):
    for n, poly in enumerate(hat_sequence(kind, 20)):
        assert (poly.evaluate(0), poly.evaluate(-1)) == hat_boundary_values(kind, n)


def test_hat_boundary_values():
    assert hat_boundary_values("cycle", 3) == (24, -1)
    assert hat_boundary_values("subset", 3) == (1, -24)


# Subdiagonals and discriminants

def test_subdiagonal_closed_forms_examples():
    assert subdiagonal_closed_forms(2, 3) == (20, 6)
    assert subdiagonal_closed_forms(3, 3) == (420, 24)
    assert subdiagonal_closed_forms(2, 4) == (210, 130)


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5, 6])
def test_subdiagonal_closed_forms_agree_with_engine(r):
    T = stirling_cycle_r(r, 12)
    for n in range(3, 13):
        first, second = subdiagonal_closed_forms(r, n, T)
        assert first == T.entry(n, n - 1)
        assert second == T.entry(n, n - 2)


def test_subdiagonal_closed_forms_requires_n_at_least_three():
    with pytest.raises(ValueError):
        subdiagonal_closed_forms(3, 2)


def test_discriminant_examples():
    assert discriminant_sign(3, 3) == Sign.NEGATIVE
    assert discriminant_sign(4, 5) == Sign.NEGATIVE
    assert discriminant_sign(2, 5) == Sign.POSITIVE
    with pytest.raises(ValueError):
        discriminant_sign(3, 2)


def test_derivative_quadratic_r3_n3():
    quadratic = derivative_quadratic("cycle", 3, 3)
    assert quadratic.coefficients == [24, 420, 2240]
    assert quadratic.discriminant == 420 ** 2 - 4 * 24 * 2240 == -38640
    assert quadratic.sign == Sign.NEGATIVE


@pytest.mark.parametrize("r", [3, 4, 5])
def test_cycle_discriminant_negative(r):
    T = stirling_cycle_r(r, 15)
    for n in range(3, 16):
        assert discriminant_sign(r, n) == Sign.NEGATIVE
        expected = (factorial(n - 2) * T.entry(n, n - 1)) ** 2 - 2 * factorial(n - 1) * factorial(n - 3) * T.entry(
            n, n
        ) * T.entry(n, n - 2)
        assert derivative_quadratic("cycle", r, n).discriminant == expected


@pytest.mark.parametrize("r", [4, 5])
def test_subset_discriminant_negative(r):
    for n in range(3, 16):
        assert discriminant_sign(r, n, kind="subset") == Sign.NEGATIVE


def test_subset_order_three_quadratic_is_reported():
    quadratic = derivative_quadratic("subset", 3, 3)
    assert quadratic.coefficients == [1, 35, 280]
    assert quadratic.sign == Sign.POSITIVE


# Log-concavity

@pytest.mark.parametrize("build,r", [(stirling_cycle_r, 3), (stirling_subset_r, 5)])
def test_log_concave_examples(build, r):
    report = log_concave_rows(build(r, 7), 7)
    assert report.passed
    assert report.rows_checked == 8


def test_log_concave_small_cases():
    assert log_concave_rows(Triangle(rows=[[1], [0, 1], [0, 6, 40]])).passed
    report = log_concave_rows(Triangle(rows=[[1], [1, 0], [1, 0, 1]]))
    assert [(f.n, f.k, f.reason) for f in report.failures] == [(2, 1, "internal zero")]
    report = log_concave_rows(Triangle(rows=[[1], [0, 1], [1, 1, 5]]))
    assert [(f.n, f.k) for f in report.failures] == [(2, 1)]


# Numeric roots

def test_numeric_roots_of_quadratic():
    roots = numeric_roots(P(-1, 0, 1), 128)
    assert [round(float(r.value.real), 12) for r in roots] == [-1.0, 1.0]
    assert all(r.is_real for r in roots)
    assert all(r.residual < 2.0 ** -64 for r in roots)


def test_numeric_roots_splits_off_zero():
    roots = numeric_roots(P(0, 0, 2, 2), 128)
    assert len(roots) == 3
    assert sum(1 for r in roots if r.value == 0) == 2
    with pytest.raises(WorkbenchError):
        numeric_roots(IntPolynomial())


def test_numeric_roots_of_hat_polynomial():
    c_hat_5 = hat_sequence("cycle", 5)[5]
    roots = numeric_roots(c_hat_5, 128)
    assert len(roots) == 5
    assert all(r.is_real and -1 < float(r.value.real) < 0 for r in roots)
    assert sum(1 for r in roots if r.is_real) == sturm_count(c_hat_5)


def test_numeric_roots_find_nonreal_pair():
    q = row_poly(stirling_cycle_r(3, 4), 4).divide_by_x()
    roots = numeric_roots(q, 128)
    assert sum(1 for r in roots if not r.is_real) >= 2


@pytest.mark.parametrize("kind,r", [("cycle", 3), ("cycle", 4), ("cycle", 5), ("subset", 4), ("subset", 5)])
def test_nonreal_zeros_and_exact_real_count(kind, r):
    build = stirling_cycle_r if kind == "cycle" else stirling_subset_r
    T = build(r, 10)
    for n in range(3, 11):
        q = row_poly(T, n).divide_by_x()
        roots = numeric_roots(q, 128)
        real = sum(1 for root in roots if root.is_real)
        assert real == real_root_count(q, multiplicity=True)
        assert real < q.degree


def test_real_root_count_above_sturm_degree():
    p = P(-2, *[0] * 84, 1)  # x^85 − 2
    assert real_root_count(p) == 1
    assert real_root_count(p, multiplicity=True) == 1
    assert real_root_count(P(1, 2, 1) * P(-2, *[0] * 84, 1), multiplicity=True) == 3


def test_numeric_real_count_checked_at_high_degree(monkeypatch):
    from app.services import poly_analysis

    p = P(-2, *[0] * 84, 1)
    roots = numeric_roots(p, 128)
    assert len(roots) == 85
    assert sum(1 for r in roots if r.is_real) == 1

    monkeypatch.setattr(poly_analysis, "real_root_count", lambda q, multiplicity=False: 3)
    with pytest.raises(NonConvergenceError):
        numeric_roots(p, 128)


# Root clouds

def test_root_cloud_order_one_lies_on_unit_interval():
    records = normalized_root_cloud("cycle", 1, [5, 8], 128)
    assert [rec.n for rec in records] == [5] * 5 + [8] * 8
    for rec in records:
        assert rec.im == 0.0 and rec.norm_im == 0.0
        assert -1.0 < rec.norm_re <= 0.0
    assert sum(1 for rec in records if rec.re == 0.0) == 2
    assert left_half_plane_fraction(records) == 1.0


def test_root_cloud_degree_bookkeeping():
    records = normalized_root_cloud("cycle", 3, [12], 128)
    assert len(records) == 12
    assert sum(1 for rec in records if rec.re == 0.0 and rec.im == 0.0) == 1
    for rec in records:
        assert rec.norm_re == pytest.approx(rec.re * 12)
        assert rec.norm_im == pytest.approx(rec.im * 12)


def test_root_cloud_csv_row():
    record = normalized_root_cloud("subset", 2, [2], 128)[0]
    assert record.csv_row()[:3] == ["subset", "2", "2"]


@pytest.mark.slow
def test_root_cloud_order_three_n50():
    records = normalized_root_cloud("cycle", 3, [50])
    assert len(records) == 50
    assert all(abs(rec.norm_re) < float("inf") for rec in records)
    # left-half-plane share is an observation only
    assert 0.0 <= left_half_plane_fraction(records) <= 1.0


def test_left_half_plane_fraction_empty():
    assert left_half_plane_fraction([]) == 0.0


# Toeplitz bridge between real zeros and total positivity

@pytest.mark.parametrize("n", range(1, 7))
def test_real_rooted_rows_give_tp_toeplitz(n):
    T = stirling_subset_r(2, n)
    assert all(c.passed for c in certify_sequence([row_poly(T, k) for k in range(n + 1)], "subset2"))
    assert neville_tp_test(toeplitz_of_row(T, n, n + 2)).is_tp
