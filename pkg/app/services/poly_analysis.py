"""
Polynomial Analysis Service
Row polynomials, exact Sturm certificates, zero-location criteria and multiprecision root clouds
"""

from fractions import Fraction
from math import factorial
from typing import Iterable, List, Optional, Sequence, Tuple, Union
import logging

import mpmath
import sympy
from mpmath import mp, mpc, mpf
from sympy import Poly
from sympy.polys.domains import QQ
from tenacity import Retrying, before_sleep_log, retry_if_exception_type, stop_after_attempt

from app.models.polynomial import X, IntPolynomial
from app.models.roots import (
    DerivativeQuadratic,
    LogConcavityFailure,
    LogConcavityReport,
    NumericRoot,
    RootCertificate,
    RootCloudRecord,
    RootFamily,
    Sign,
)
from app.models.triangle import Triangle
from app.services.exceptions import (
    CertificationError,
    NonConvergenceError,
    UnknownKindError,
    WorkbenchError,
)
from app.services.triangle_engine import ordered_phylo_triangle, stirling_cycle_r, stirling_subset_r

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]

STURM_MAX_DEGREE = 40
DEFAULT_PRECISION_BITS = 256
MAX_ITERATIONS = 500
RESIDUAL_EXPONENT = 64


def row_poly(T: Triangle, n: int) -> IntPolynomial:
    """Σ_k T(n,k) x^k"""
    return IntPolynomial(tuple(T.row(n)))


# Exact real-root counting

def _fraction(value) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def _rational(value: Fraction) -> sympy.Rational:
    return sympy.Rational(value.numerator, value.denominator)


def _horner(coeffs: Sequence[Fraction], point: Fraction) -> Fraction:
    result = Fraction(0)
    for c in coeffs:
        result = result * point + c
    return result


class SturmSequence:
    """Sturm chain of a nonzero polynomial over QQ, evaluated exactly with Fractions"""

    def __init__(self, poly: Poly):
        self.chain = [[_fraction(c) for c in s.all_coeffs()] for s in poly.to_field().sturm()]

    def _variations(self, signs: Iterable[int]) -> int:
        changes, last = 0, 0
        for s in signs:
            if s == 0:
                continue
            if last and s != last:
                changes += 1
            last = s
        return changes

    def variations_at(self, point: Optional[Fraction], upper: bool) -> int:
        """Sign changes at a rational point, or at ±∞ when point is None"""
        if point is None:
            signs = []
            for coeffs in self.chain:
                lead = 1 if coeffs[0] > 0 else -1
                degree = len(coeffs) - 1
                signs.append(lead if upper or degree % 2 == 0 else -lead)
            return self._variations(signs)
        signs = []
        for coeffs in self.chain:
            value = _horner(coeffs, point)
            signs.append((value > 0) - (value < 0))
        return self._variations(signs)

    def count(self, a: Optional[Fraction], b: Optional[Fraction]) -> int:
        """Distinct zeros in (a, b]; None stands for −∞ / +∞"""
        return self.variations_at(a, upper=False) - self.variations_at(b, upper=True)


def sturm_count(p: IntPolynomial, a: Optional[Rational] = None, b: Optional[Rational] = None) -> int:
    """
    Number of distinct real zeros of p in the open interval (a, b).

    Endpoints that are zeros of p are divided out exactly before the chain is
    built, so the count never includes them.
    """
    if p.is_zero:
        raise WorkbenchError("Sturm count of the zero polynomial is undefined")
    lo = None if a is None else Fraction(a)
    hi = None if b is None else Fraction(b)
    if lo is not None and hi is not None and lo >= hi:
        return 0

    poly = p.to_sympy().to_field()
    for point in (lo, hi):
        if point is None:
            continue
        linear = Poly(X - _rational(point), X, domain=QQ)
        while poly.degree() > 0 and poly.eval(_rational(point)) == 0:
            poly = poly.exquo(linear)
    return SturmSequence(poly).count(lo, hi)


def cauchy_bound(p: IntPolynomial) -> Fraction:
    """1 + max|a_k / a_d|; every complex zero lies strictly inside"""
    lead = abs(p.leading)
    return 1 + max((Fraction(abs(c), lead) for c in p.coeffs[:-1]), default=Fraction(0))


def real_root_count(p: IntPolynomial, multiplicity: bool = False) -> int:
    """Exact number of real zeros (distinct unless multiplicity=True)"""
    if p.is_zero:
        raise WorkbenchError("The zero polynomial has no finite zero count")
    if p.degree <= 0:
        return 0
    poly = p.to_sympy()
    if multiplicity:
        _, factors = poly.sqf_list()
        return sum(k * f.count_roots() for f, k in factors if f.degree() > 0)
    if p.degree <= STURM_MAX_DEGREE:
        bound = cauchy_bound(p)
        return sturm_count(p, -bound, bound)
    return poly.count_roots()


def _is_squarefree(q: IntPolynomial) -> bool:
    if q.degree <= 0:
        return True
    return q.to_sympy().gcd(q.derivative().to_sympy()).degree() == 0


def _coprime(p: IntPolynomial, q: IntPolynomial) -> bool:
    return p.to_sympy().gcd(q.to_sympy()).degree() == 0


# Isolating intervals

Interval = Tuple[Fraction, Fraction]


def _tighten(p: IntPolynomial, a: Fraction, b: Fraction) -> Interval:
    """Collapse an isolating interval onto an endpoint that is itself the zero"""
    if a != b:
        if p.evaluate(a) == 0:
            return a, a
        if p.evaluate(b) == 0:
            return b, b
    return a, b


def _isolate(p: IntPolynomial, lo: Fraction, hi: Fraction) -> List[Tuple[Interval, int]]:
    """Zeros of p strictly inside (lo, hi) with their multiplicities"""
    if p.degree <= 0:
        return []
    found = []
    for (a, b), k in p.to_sympy().intervals(inf=_rational(lo), sup=_rational(hi)):
        interval = _tighten(p, _fraction(a), _fraction(b))
        if interval in ((lo, lo), (hi, hi)):
            continue
        found.append((interval, k))
    return sorted(found)


def isolating_intervals(p: IntPolynomial, lo: Rational, hi: Rational) -> Optional[List[Interval]]:
    """
    Disjoint rational intervals, one per zero of p in (lo, hi), in increasing order.

    A degenerate interval (c, c) is an exact rational zero. Returns None when
    some zero in the range is repeated.
    """
    zeros = _isolate(p, Fraction(lo), Fraction(hi))
    if any(k != 1 for _, k in zeros):
        return None
    return [interval for interval, _ in zeros]


def _halve(p: IntPolynomial, interval: Interval) -> Interval:
    a, b = interval
    middle = (a + b) / 2
    value = p.evaluate(middle)
    if value == 0:
        return middle, middle
    if (p.evaluate(a) > 0) != (value > 0):
        return a, middle
    return middle, b


def _merged_owners(prev: IntPolynomial, prev_zeros: List[Interval], q: IntPolynomial, q_zeros: List[Interval]) -> Optional[List[str]]:
    """
    Order the zeros of two coprime polynomials by halving overlapping
    intervals until all of them are disjoint. None on a shared rational zero.
    """
    polys = {"prev": prev, "q": q}
    items = [[interval, "prev"] for interval in prev_zeros] + [[interval, "q"] for interval in q_zeros]
    while True:
        items.sort(key=lambda item: item[0])
        clash = next((i for i in range(len(items) - 1) if items[i][0][1] >= items[i + 1][0][0]), None)
        if clash is None:
            return [owner for _, owner in items]
        left, right = items[clash], items[clash + 1]
        left_width = left[0][1] - left[0][0]
        right_width = right[0][1] - right[0][0]
        if left_width == 0 and right_width == 0:
            return None
        wider = left if left_width >= right_width else right
        wider[0] = _halve(polys[wider[1]], wider[0])


def _interlaced(prev: IntPolynomial, prev_zeros: Optional[List[Interval]], q: IntPolynomial, q_zeros: Optional[List[Interval]]) -> bool:
    if prev_zeros is None or q_zeros is None:
        return False
    if len(prev_zeros) != prev.degree or len(q_zeros) != q.degree or prev.degree != q.degree - 1:
        return False
    if prev.degree > 0 and not _coprime(prev, q):
        return False
    owners = _merged_owners(prev, prev_zeros, q, q_zeros)
    return owners == ["q" if i % 2 == 0 else "prev" for i in range(len(prev_zeros) + len(q_zeros))]


def interlaces(prev: IntPolynomial, q: IntPolynomial, lo: Rational = -1, hi: Rational = 0) -> bool:
    """
    True when the zeros of prev (degree d−1) strictly interlace those of q
    (degree d) inside (lo, hi).

    Both must have only simple zeros, all of them in (lo, hi), and no common
    zero. Each polynomial is isolated on its own; overlapping intervals are
    halved by exact sign evaluation until the merged order can be read off.
    """
    if q.degree <= 0 or prev.degree != q.degree - 1:
        return False
    if q.evaluate(Fraction(lo)) == 0 or q.evaluate(Fraction(hi)) == 0:
        return False
    return _interlaced(prev, isolating_intervals(prev, lo, hi), q, isolating_intervals(q, lo, hi))


# Real-rootedness certificates

Isolated = Tuple[IntPolynomial, Optional[List[Interval]]]


def _certify_one(family: str, n: int, p: IntPolynomial, previous: Optional[Isolated]) -> Tuple[RootCertificate, Optional[Isolated]]:
    interval = (Fraction(-1), Fraction(0))
    if p.is_zero or p.coefficient(0) != 0:
        cert = RootCertificate(
            family=family,
            n=n,
            degree=p.degree,
            root_at_zero=False,
            all_real=False,
            interval=interval,
            simple=False,
            interlaces_previous=False,
            value_at_zero=p.evaluate(0),
            value_at_minus_one=p.evaluate(-1),
            failed_clause="root at zero",
        )
        return cert, None

    q = p.divide_by_x()
    degree = q.degree
    total = 0 if degree <= 0 else q.to_sympy().count_roots()
    zeros = _isolate(q, *interval)
    inside = len(zeros)
    all_real = total == degree and inside == degree
    simple = _is_squarefree(q)
    isolated = [iv for iv, _ in zeros] if all_real and simple else None
    linked = True if previous is None else _interlaced(previous[0], previous[1], q, isolated)

    failed = None
    if not all_real:
        failed = "real zeros in (-1, 0)"
    elif not simple:
        failed = "simple zeros"
    elif not linked:
        failed = "interlacing"

    cert = RootCertificate(
        family=family,
        n=n,
        degree=degree,
        root_at_zero=True,
        all_real=all_real,
        interval=interval,
        simple=simple,
        interlaces_previous=linked,
        sturm_counts=[total, inside],
        value_at_zero=q.evaluate(0),
        value_at_minus_one=q.evaluate(-1),
        failed_clause=failed,
    )
    return cert, (q, isolated)


def certify_sequence(polys: Sequence[IntPolynomial], family: str = "custom") -> List[RootCertificate]:
    """
    Certificates for q_n = p_n/x, n = 1..len(polys)−1.

    Failures are recorded on the certificate instead of raised. The isolating
    intervals of q_{n−1} are reused for the interlacing test of q_n.
    """
    certificates = []
    previous: Optional[Isolated] = None
    for n in range(1, len(polys)):
        cert, previous = _certify_one(family, n, polys[n], previous)
        logger.debug(f"{family} n={n}: degree {cert.degree}, counts {cert.sturm_counts}, failed={cert.failed_clause}")
        certificates.append(cert)
    return certificates


def family_polynomials(family: RootFamily, n_max: int) -> List[IntPolynomial]:
    if family == RootFamily.CYCLE2:
        T = stirling_cycle_r(2, n_max)
    elif family == RootFamily.SUBSET2:
        T = stirling_subset_r(2, n_max)
    else:
        T = ordered_phylo_triangle(n_max)
    return [row_poly(T, n) for n in range(n_max + 1)]


def certify_roots(kind: str, n_max: int) -> List[RootCertificate]:
    """Certify that the zeros of p_n/x are simple, real, in (−1, 0) and interlacing for n ≤ n_max"""
    if n_max < 1:
        raise ValueError(f"n_max must be at least 1, got {n_max}")
    try:
        family = RootFamily(kind)
    except ValueError:
        raise UnknownKindError(kind, [f.value for f in RootFamily])

    certificates = certify_sequence(family_polynomials(family, n_max), family.value)
    for cert in certificates:
        if not cert.passed:
            raise CertificationError(cert.n, cert.failed_clause, f"family {family.value}")
    logger.info(f"Certified {len(certificates)} polynomials of {family.value} up to n={n_max}")
    return certificates


# Hat polynomials ĉ_n = c_{2,n+1}/x and ŝ_n = s_{2,n+1}/x

def hat_recurrence_step(prev: IntPolynomial, n: int, kind: str) -> IntPolynomial:
    """
    cycle:  ĉ_n = [(n+2)x + n+1]·ĉ_{n−1} + x(x+1)·ĉ′_{n−1}
    subset: ŝ_n = [(n+2)x + 1]·ŝ_{n−1} + x(x+1)·ŝ′_{n−1}
    """
    if kind == "cycle":
        linear = IntPolynomial((n + 1, n + 2))
    elif kind == "subset":
        linear = IntPolynomial((1, n + 2))
    else:
        raise UnknownKindError(kind, ["cycle", "subset"])
    return linear * prev + IntPolynomial((0, 1, 1)) * prev.derivative()


def hat_sequence(kind: str, n_max: int) -> List[IntPolynomial]:
    polys = [IntPolynomial.constant(1)]
    for n in range(1, n_max + 1):
        polys.append(hat_recurrence_step(polys[-1], n, kind))
    return polys


def hat_boundary_values(kind: str, n: int) -> Tuple[int, int]:
    """(value at 0, value at −1) of ĉ_n or ŝ_n"""
    sign = -1 if n % 2 else 1
    if kind == "cycle":
        return factorial(n + 1), sign
    if kind == "subset":
        return 1, sign * factorial(n + 1)
    raise UnknownKindError(kind, ["cycle", "subset"])


# Nonreal zeros for r ≥ 3

def _exact_div(numerator: int, denominator: int, what: str) -> int:
    quotient, remainder = divmod(numerator, denominator)
    if remainder:
        raise WorkbenchError(f"{what} is not an integer: {numerator}/{denominator}")
    return quotient


def subdiagonal_closed_forms(r: int, n: int, T: Optional[Triangle] = None) -> Tuple[int, int]:
    """
    Closed forms for [n n−1]^(r) and [n n−2]^(r), checked against the cycle triangle.
    """
    if r < 1:
        raise ValueError(f"Order r must be at least 1, got {r}")
    if n < 3:
        raise ValueError(f"The second subdiagonal needs n ≥ 3, got {n}")
    first = _exact_div(
        factorial(r * (n - 1) + 1),
        (r + 1) * r ** (n - 2) * factorial(n - 2),
        f"[{n} {n - 1}]^({r})",
    )
    second = _exact_div(
        factorial(r * (n - 2) + 2) * (r * (r + 2) * (n - 1) + 2),
        2 * (r + 1) ** 2 * (r + 2) * r ** (n - 3) * factorial(n - 3),
        f"[{n} {n - 2}]^({r})",
    )
    if T is None or T.n_max < n or T.order != r:
        T = stirling_cycle_r(r, n)
    if T.entry(n, n - 1) != first:
        raise CertificationError(n, "first subdiagonal closed form", f"r={r}: {first} vs {T.entry(n, n - 1)}")
    if T.entry(n, n - 2) != second:
        raise CertificationError(n, "second subdiagonal closed form", f"r={r}: {second} vs {T.entry(n, n - 2)}")
    return first, second


def _stirling(kind: str, r: int, n_max: int) -> Triangle:
    if kind == "cycle":
        return stirling_cycle_r(r, n_max)
    if kind == "subset":
        return stirling_subset_r(r, n_max)
    raise UnknownKindError(kind, ["cycle", "subset"])


def derivative_quadratic(kind: str, r: int, n: int) -> DerivativeQuadratic:
    """d^{n−3}/dx^{n−3} (p_{r,n}(x)/x), a quadratic whenever n ≥ 3"""
    if n < 3:
        raise ValueError(f"The derivative quadratic needs n ≥ 3, got {n}")
    q = row_poly(_stirling(kind, r, n), n).divide_by_x()
    quadratic = q.derivative_n(n - 3)
    c, b, a = (quadratic.coefficient(k) for k in range(3))
    discriminant = b * b - 4 * a * c
    return DerivativeQuadratic(
        kind=kind,
        r=r,
        n=n,
        coefficients=[c, b, a],
        discriminant=discriminant,
        sign=Sign.of(discriminant),
    )


def discriminant_sign(r: int, n: int, kind: str = "cycle") -> Sign:
    """
    Sign of ((n−2)!·T(n,n−1))² − 2(n−1)!(n−3)!·T(n,n)·T(n,n−2).

    A negative value means the derivative quadratic, and therefore p_{r,n},
    has nonreal zeros.
    """
    if r < 1:
        raise ValueError(f"Order r must be at least 1, got {r}")
    if n < 3:
        raise ValueError(f"The discriminant needs n ≥ 3, got {n}")
    T = _stirling(kind, r, n)
    value = (factorial(n - 2) * T.entry(n, n - 1)) ** 2 - 2 * factorial(n - 1) * factorial(n - 3) * T.entry(n, n) * T.entry(n, n - 2)
    logger.debug(f"D_{r}({n}) for {kind} = {value}")
    return Sign.of(value)


# Log-concavity

def log_concave_rows(T: Triangle, n_max: Optional[int] = None) -> LogConcavityReport:
    """
    Check T(n,k)² ≥ T(n,k−1)·T(n,k+1) over the support of each row.

    The support must be contiguous; an internal zero is reported as a failure.
    """
    n_max = T.n_max if n_max is None else n_max
    failures = []
    for n in range(n_max + 1):
        row = T.row(n)
        support = [k for k, v in enumerate(row) if v != 0]
        if not support:
            continue
        first, last = support[0], support[-1]
        if len(support) != last - first + 1:
            gap = next(k for k in range(first, last + 1) if row[k] == 0)
            failures.append(LogConcavityFailure(n=n, k=gap, reason="internal zero"))
            continue
        for k in range(first, last + 1):
            left = row[k - 1] if k >= 1 else 0
            right = row[k + 1] if k + 1 < len(row) else 0
            if row[k] * row[k] < left * right:
                failures.append(LogConcavityFailure(n=n, k=k, reason=f"{row[k]}^2 < {left}*{right}"))
    return LogConcavityReport(label=T.label, rows_checked=n_max + 1, failures=failures)


# Numeric roots

def _aberth_roots(p: IntPolynomial, precision_bits: int) -> List[NumericRoot]:
    zeros = next(k for k, c in enumerate(p.coeffs) if c != 0)
    q = IntPolynomial(p.coeffs[zeros:])
    roots = [NumericRoot(value=mpc(0), residual=0.0, is_real=True) for _ in range(zeros)]
    d = q.degree
    if d <= 0:
        return roots

    with mp.workprec(precision_bits):
        coeffs = [mpf(c) for c in reversed(q.coeffs)]
        magnitudes = [abs(c) for c in coeffs]
        radius = (abs(coeffs[-1]) / abs(coeffs[0])) ** (mpf(1) / d)
        z = [radius * mpmath.expj(2 * mp.pi * k / d + mpf("0.4")) for k in range(d)]
        step_tol = mpf(2) ** (-(precision_bits // 2))
        done = [False] * d

        iteration = 0
        try:
            while not all(done):
                iteration += 1
                if iteration > MAX_ITERATIONS:
                    raise NonConvergenceError(d, precision_bits, MAX_ITERATIONS)
                for i in range(d):
                    if done[i]:
                        continue
                    value, slope = mp.polyval(coeffs, z[i], derivative=True)
                    if value == 0:
                        done[i] = True
                        continue
                    if slope == 0:
                        z[i] *= mpc(1, step_tol)
                        continue
                    ratio = value / slope
                    repulsion = mp.fsum(1 / (z[i] - z[j]) for j in range(d) if j != i)
                    correction = ratio / (1 - ratio * repulsion)
                    z[i] -= correction
                    if abs(correction) <= step_tol * abs(z[i]):
                        done[i] = True
        except ZeroDivisionError:
            raise NonConvergenceError(d, precision_bits, iteration)

        threshold = mpf(2) ** -RESIDUAL_EXPONENT
        imag_tol = mpf(2) ** (-(precision_bits // 4))
        for zi in z:
            residual = abs(mp.polyval(coeffs, zi)) / mp.polyval(magnitudes, abs(zi))
            if residual > threshold:
                logger.warning(f"Residual {mpmath.nstr(residual, 5)} above threshold at degree {d}")
                raise NonConvergenceError(d, precision_bits, iteration)
            is_real = abs(zi.imag) <= imag_tol * max(1, abs(zi))
            value = mpc(zi.real, 0) if is_real else zi
            roots.append(NumericRoot(value=value, residual=float(residual), is_real=is_real))

    logger.debug(f"Aberth iteration converged for degree {d} in {iteration} sweeps at {precision_bits} bits")
    numeric_real = sum(1 for root in roots[zeros:] if root.is_real)
    exact_real = real_root_count(q, multiplicity=True)
    if numeric_real != exact_real:
        logger.warning(f"Numeric real-zero count {numeric_real} differs from exact count {exact_real}")
        raise NonConvergenceError(d, precision_bits, iteration)
    return sorted(roots, key=lambda root: (float(root.value.real), float(root.value.imag)))


def numeric_roots(p: IntPolynomial, precision_bits: int = DEFAULT_PRECISION_BITS) -> List[NumericRoot]:
    """
    All deg(p) zeros by Aberth simultaneous iteration.

    Exact zeros at the origin are split off first. The number of real zeros
    found must match the exact count; on a mismatch or non-convergence the
    computation is repeated once at doubled precision.
    """
    if p.is_zero:
        raise WorkbenchError("The zero polynomial has no finite set of zeros")
    for attempt in Retrying(
        stop=stop_after_attempt(2),
        retry=retry_if_exception_type(NonConvergenceError),
        before_sleep=before_sleep_log(logger, logging.WARNING),
        reraise=True,
    ):
        with attempt:
            bits = precision_bits * 2 ** (attempt.retry_state.attempt_number - 1)
            return _aberth_roots(p, bits)


def normalized_root_cloud(
    kind: str,
    r: int,
    n_list: Iterable[int],
    precision_bits: int = DEFAULT_PRECISION_BITS,
) -> List[RootCloudRecord]:
    """Zeros of c_{r,n} or s_{r,n} together with their n^{r−2} rescaling"""
    ns = sorted(set(n_list))
    if not ns:
        return []
    T = _stirling(kind, r, ns[-1])
    records = []
    for n in ns:
        p = row_poly(T, n)
        if p.degree <= 0:
            continue
        roots = numeric_roots(p, precision_bits)
        keyed = []
        with mp.workprec(precision_bits):
            factor = mpf(n) ** (r - 2)
            for root in roots:
                scaled = root.value * factor
                record = RootCloudRecord(
                    kind=kind,
                    r=r,
                    n=n,
                    re=float(root.value.real),
                    im=float(root.value.imag),
                    norm_re=float(scaled.real),
                    norm_im=float(scaled.imag),
                    residual=root.residual,
                )
                keyed.append(((float(mpmath.arg(root.value)), float(abs(root.value))), record))
        records.extend(record for _, record in sorted(keyed, key=lambda item: item[0]))
        logger.debug(f"Root cloud {kind} r={r} n={n}: {len(roots)} zeros")
    return records


def left_half_plane_fraction(records: Sequence[RootCloudRecord]) -> float:
    """Share of zeros with nonpositive real part; an observation, never asserted"""
    if not records:
        return 0.0
    return sum(1 for record in records if record.re <= 0) / len(records)
