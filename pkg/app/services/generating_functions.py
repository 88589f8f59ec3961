"""
Generating Functions
Exponential generating functions of increasing and phylogenetic trees, solved as truncated
power series, with the tree-identity checks and the Stirling T-fraction
"""

from math import comb, factorial, prod
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union
import logging

import sympy
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, PolyRing, ring

from app.models.combinatorics import InterpretationCheck, PhyloFlavor
from app.models.polynomial import IntPolynomial
from app.models.series import TreeIdentityReport, TruncatedSeries, WardSpecialization, series_ring
from app.services.combinatorial_oracles import (
    compare_rows,
    edge_marked_ternary_counts,
    enumerate_phylo,
    vertex_marked_ordered_counts,
)
from app.services.exceptions import NonIntegralEntryError, SizeMismatchError, UnknownKindError
from app.services.triangle_engine import ordered_phylo_triangle, stirling_cycle_r, stirling_subset_r

logger = logging.getLogger(__name__)

SERIES_MAX_ORDER = 40

IDENTITY_INSTANCES = ["ternary", "binary", "power", "cyclic"]
GF_CHECKS = ["ordered-trees", "ternary-trees", "ward", "t-fraction"]

WARD_FLAVORS = {
    PhyloFlavor.UNORDERED: WardSpecialization.SUBSET,
    PhyloFlavor.CYCLIC: WardSpecialization.CYCLIC,
    PhyloFlavor.ORDERED: WardSpecialization.ORDERED,
}

Coefficients = Union[Sequence[IntPolynomial], Callable[[int], IntPolynomial]]


def _check_order(order: int) -> None:
    if order < 0:
        raise ValueError(f"Series order must be nonnegative, got {order}")
    if order > SERIES_MAX_ORDER:
        raise SizeMismatchError(f"Series order {order} exceeds {SERIES_MAX_ORDER}")


def _gen(R: PolyRing, name: str) -> PolyElement:
    symbol = sympy.Symbol(name)
    if symbol not in R.symbols:
        raise UnknownKindError(name, [str(s) for s in R.symbols])
    return R.gens[R.symbols.index(symbol)]


def from_int_polynomial(R: PolyRing, poly: IntPolynomial, variable: str = "x") -> PolyElement:
    x = _gen(R, variable)
    total = R.zero
    for k, c in enumerate(poly.coeffs):
        if c:
            total += c * x**k
    return total


def to_int_polynomial(p: PolyElement, variable: str = "x", **substitutions) -> IntPolynomial:
    """
    Substitute the named generators, then read the result as an integer polynomial
    in the remaining variable. Any other surviving generator or a fractional
    coefficient is an error.
    """
    R = p.ring
    if substitutions:
        p = p.compose([(_gen(R, name), R(value) if not isinstance(value, PolyElement) else value)
                       for name, value in substitutions.items()])
    index = R.symbols.index(sympy.Symbol(variable))
    coeffs: Dict[int, int] = {}
    for monom, c in p.terms():
        if any(e for i, e in enumerate(monom) if i != index):
            raise SizeMismatchError(f"Polynomial {p.as_expr()} is not univariate in {variable}")
        if QQ.denom(c) != 1:
            raise NonIntegralEntryError(-1, monom[index], c)
        coeffs[monom[index]] = int(QQ.numer(c))
    top = max(coeffs) if coeffs else -1
    return IntPolynomial(tuple(coeffs.get(d, 0) for d in range(top + 1)))


# Autonomous differential equations

def solve_autonomous_ode(phi: TruncatedSeries, order: int) -> TruncatedSeries:
    """
    F′ = Φ(F), F(0) = 0, by Picard iteration. Each pass fixes one more coefficient.

    n!·[t^n]F is the sum over increasing ordered trees on n vertices of the
    product of φ_{#children} with Φ(u) = Σ φ_i u^i/i!.
    """
    _check_order(order)
    if order < 1:
        raise ValueError(f"Series order must be at least 1, got {order}")
    if phi.order < order - 1:
        raise SizeMismatchError(f"Degree function known to order {phi.order}, need {order - 1}")
    R = phi.ring
    F = TruncatedSeries.zero(R, order)
    for step in range(order):
        updated = phi.truncate(order - 1).compose(F.truncate(order - 1)).integral()
        if updated.agrees_with(F) is None:
            logger.debug(f"Picard iteration stable after {step} passes at order {order}")
            break
        F = updated
    return F


def degree_function(R: PolyRing, order: int, weights: Callable[[int], object]) -> TruncatedSeries:
    """Φ(u) = Σ φ_i u^i/i! from the per-outdegree weights φ_i"""
    return TruncatedSeries.from_function(R, order, lambda i: _coerce_weight(R, weights(i)) * QQ(1, factorial(i)))


def _coerce_weight(R: PolyRing, value) -> PolyElement:
    if isinstance(value, PolyElement):
        return value
    if isinstance(value, Fraction):
        return R(sympy.Rational(value.numerator, value.denominator))
    return R(value)


# Tree identity: B = Φ̂(A), A′ = 1 + x·B

def identity_instance(name: str, order: int, k: int = 2) -> Tuple[TruncatedSeries, TruncatedSeries]:
    """
    (Φ̂, 𝒳) over QQ[x, y]:
    ternary  u/(1−yu) with (1+ys)²
    binary   (e^{yu}−1)/y with 1+ys
    power    ((1−(k−1)yu)^{−1/(k−1)} − 1)/y with (1+ys)^k
    cyclic   −log(1−yu)/y with e^{ys}
    """
    _check_order(order)
    R = series_ring("x,y")
    y = _gen(R, "y")

    def powers(weight: Callable[[int], Fraction]) -> TruncatedSeries:
        return TruncatedSeries.from_function(R, order, lambda i: y ** (i - 1) * _coerce_weight(R, weight(i)) if i else 0)

    if name == "ternary":
        phi_hat = powers(lambda i: Fraction(1))
        chi = TruncatedSeries.from_coefficients(R, order, [1, 2 * y, y**2])
    elif name == "binary":
        phi_hat = powers(lambda i: Fraction(1, factorial(i)))
        chi = TruncatedSeries.from_coefficients(R, order, [1, y])
    elif name == "power":
        if k < 1:
            raise ValueError(f"Exponent k must be at least 1, got {k}")
        phi_hat = powers(lambda i: Fraction(prod(1 + j * (k - 1) for j in range(1, i)), factorial(i)))
        chi = TruncatedSeries.from_function(R, order, lambda i: comb(k, i) * y**i if i <= k else 0)
    elif name == "cyclic":
        phi_hat = powers(lambda i: Fraction(1, i))
        chi = TruncatedSeries.from_function(R, order, lambda i: y**i * QQ(1, factorial(i)))
    else:
        raise UnknownKindError(name, IDENTITY_INSTANCES)
    return phi_hat, chi


def verify_tree_identity(phi_hat: TruncatedSeries, chi: TruncatedSeries, order: int, label: str = "custom") -> TreeIdentityReport:
    """
    With Φ̂(0) = 0 and Φ̂′ = 𝒳(Φ̂), the EGFs A and B of increasing trees with
    degree functions Φ = 1 + xΦ̂ and Ψ = (1 + xu)𝒳(u) satisfy B = Φ̂(A) and
    A′ = 1 + x·B. The first generator of the ring plays x.
    """
    _check_order(order)
    if order < 1:
        raise ValueError(f"Tree identities need order at least 1, got {order}")
    R = phi_hat.ring
    x = R.gens[0]
    phi_hat = phi_hat.truncate(order)
    chi = chi.truncate(order)

    if phi_hat.coefficient(0):
        return TreeIdentityReport(label=label, order=order, precondition_holds=False, first_failing_order=0)
    lhs = phi_hat.derivative()
    rhs = chi.compose(phi_hat).truncate(lhs.order)
    failing = lhs.agrees_with(rhs)
    if failing is not None:
        logger.warning(f"Tree identity {label}: Φ̂′ ≠ 𝒳(Φ̂) at t^{failing}")
        return TreeIdentityReport(label=label, order=order, precondition_holds=False, first_failing_order=failing)

    u = TruncatedSeries.variable(R, order)
    Phi = 1 + phi_hat * x
    Psi = (1 + u * x) * chi
    A = solve_autonomous_ode(Phi, order)
    B = solve_autonomous_ode(Psi, order)

    composition_failure = phi_hat.compose(A).agrees_with(B)
    derivative_failure = A.derivative().agrees_with((1 + B * x).truncate(order - 1))
    failures = [f for f in (composition_failure, derivative_failure) if f is not None]
    report = TreeIdentityReport(
        label=label,
        order=order,
        precondition_holds=True,
        composition_holds=composition_failure is None,
        derivative_holds=derivative_failure is None,
        first_failing_order=min(failures) if failures else None,
    )
    logger.info(f"Tree identity {label} to order {order}: {'holds' if report.passed else 'fails'}")
    return report


def verify_tree_identities(order: int, powers: Sequence[int] = (2, 3, 4)) -> List[TreeIdentityReport]:
    reports = []
    for name in IDENTITY_INSTANCES:
        exponents = powers if name == "power" else (2,)
        for k in exponents:
            phi_hat, chi = identity_instance(name, order, k)
            label = f"{name}(k={k})" if name == "power" else name
            reports.append(verify_tree_identity(phi_hat, chi, order, label))
    return reports


def tree_series(name: str, order: int, k: int = 2) -> Tuple[TruncatedSeries, TruncatedSeries]:
    """The pair (A, B) solved for one identity instance"""
    phi_hat, chi = identity_instance(name, order, k)
    R = phi_hat.ring
    x = R.gens[0]
    A = solve_autonomous_ode(1 + phi_hat * x, order)
    B = solve_autonomous_ode((1 + TruncatedSeries.variable(R, order) * x) * chi, order)
    return A, B


def ordered_tree_egf(order: int) -> TruncatedSeries:
    """A for Φ = 1 + xu/(1−yu): x per internal vertex, y per leaf beyond the first"""
    return tree_series("ternary", order)[0]


def ternary_tree_egf(order: int, primed: bool = True) -> TruncatedSeries:
    """B for Ψ = (1+xu)(1+yu)², or 1 + x·B when the root has only a left child"""
    B = tree_series("ternary", order)[1]
    return 1 + B * B.ring.gens[0] if primed else B


def egf_polynomials(series: TruncatedSeries, **substitutions) -> List[IntPolynomial]:
    return [to_int_polynomial(p, **substitutions) for p in series.egf_coefficients()]


# Ward polynomials

def ward_egf(order: int, specialization: WardSpecialization = WardSpecialization.MULTIVARIATE) -> TruncatedSeries:
    """
    𝒲 = t + Σ_{j≥2} x_{j−1}·𝒲^j/j!, solved by fixed-point iteration.
    (n+1)!·[t^{n+1}]𝒲 = W_n, or its subset, cyclic or ordered specialization.
    """
    _check_order(order)
    specialization = WardSpecialization(specialization)
    if specialization == WardSpecialization.MULTIVARIATE:
        R, *gens = ring(",".join(f"x{i}" for i in range(1, max(order - 1, 1) + 1)), QQ)
        weight = lambda j: gens[j - 2] * QQ(1, factorial(j))
    else:
        R = series_ring("x")
        x = R.gens[0]
        weight = {
            WardSpecialization.SUBSET: lambda j: x * QQ(1, factorial(j)),
            WardSpecialization.CYCLIC: lambda j: x * QQ(1, j),
            WardSpecialization.ORDERED: lambda j: x,
        }[specialization]
    outer = TruncatedSeries.from_function(R, order, lambda j: weight(j) if j >= 2 else 0)
    t = TruncatedSeries.variable(R, order)
    W = t
    for _ in range(order):
        updated = t + outer.compose(W)
        if updated.agrees_with(W) is None:
            break
        W = updated
    return W


def ward_polynomials(order: int, specialization: WardSpecialization = WardSpecialization.MULTIVARIATE) -> List:
    """W_0..W_{order−1}; IntPolynomial rows for the specializations"""
    specialization = WardSpecialization(specialization)
    coefficients = ward_egf(order, specialization).egf_coefficients()[1:]
    if specialization == WardSpecialization.MULTIVARIATE:
        return coefficients
    return [to_int_polynomial(p) for p in coefficients]


# T-fractions

def _term(source: Coefficients, n: int) -> IntPolynomial:
    if callable(source):
        return source(n)
    return source[n - 1] if n <= len(source) else IntPolynomial()


def t_fraction_expand(alpha: Coefficients, delta: Coefficients, order: int) -> List[IntPolynomial]:
    """
    Ordinary coefficients a_0..a_N of 1/(1 − δ₁t − α₁t/(1 − δ₂t − α₂t/(1 − …))).
    Sequences are 1-indexed (alpha[0] is α₁) and read as zero past their end.
    Cut at depth N+1, which no coefficient up to t^N can see.
    """
    _check_order(order)
    R = series_ring("x")
    t = TruncatedSeries.variable(R, order)
    g = TruncatedSeries.one(R, order)
    for n in range(order + 1, 0, -1):
        a = from_int_polynomial(R, _term(alpha, n))
        d = from_int_polynomial(R, _term(delta, n))
        g = (1 - t * d - t * g * a).reciprocal()
    return [to_int_polynomial(c) for c in g.coeffs]


def stirling_t_fraction(order: int) -> List[IntPolynomial]:
    """α_n = n·x, δ_n = n − 1: the second-order subset row polynomials"""
    return t_fraction_expand(lambda n: IntPolynomial.monomial(1, n), lambda n: IntPolynomial.constant(n - 1), order)


# Cross-checks against the triangles and the enumerations

def _rows(polys: List[IntPolynomial]) -> List[List[int]]:
    return [[p.coefficient(k) for k in range(n + 1)] for n, p in enumerate(polys)]


def check_generating_function(name: str, n_max: int, flavor: PhyloFlavor = PhyloFlavor.CYCLIC) -> InterpretationCheck:
    """
    ordered-trees  n!·[t^{n+1}]A at y = 1+x against vertex-marked ordered trees
    ternary-trees  n!·[t^n](1 + xB) at y = 1+x against edge-marked ternary trees
    ward           specialized 𝒲 against the phylogenetic enumeration
    t-fraction     the Stirling T-fraction against second-order subset rows
    The enumerations themselves are matched against the second-order triangles.
    """
    if name not in GF_CHECKS:
        raise UnknownKindError(name, GF_CHECKS)
    R = series_ring("x,y")
    y_value = 1 + _gen(R, "x")
    params = {"n_max": n_max}
    sizes = range(n_max + 1)
    cycle2 = stirling_cycle_r(2, n_max)

    if name == "ordered-trees":
        polys = egf_polynomials(ordered_tree_egf(n_max + 1), y=y_value)[1:]
        check = compare_rows(name, params, _rows(polys), [vertex_marked_ordered_counts(n) for n in sizes])
    elif name == "ternary-trees":
        polys = egf_polynomials(ternary_tree_egf(n_max), y=y_value)
        check = compare_rows(name, params, _rows(polys), [edge_marked_ternary_counts(n) for n in sizes])
    elif name == "ward":
        flavor = PhyloFlavor(flavor)
        params["flavor"] = flavor.value
        polys = ward_polynomials(n_max + 1, WARD_FLAVORS[flavor])
        check = compare_rows(name, params, _rows(polys), [enumerate_phylo(n, flavor) for n in sizes])
        expected = {
            PhyloFlavor.UNORDERED: stirling_subset_r(2, n_max),
            PhyloFlavor.CYCLIC: cycle2,
            PhyloFlavor.ORDERED: ordered_phylo_triangle(n_max),
        }[flavor]
        for n, row in enumerate(check.rows):
            check.mismatches.extend((n, k) for k, v in enumerate(row) if v != expected.entry(n, k))
        return check
    else:
        polys = stirling_t_fraction(n_max)
        return compare_rows(name, params, _rows(polys), stirling_subset_r(2, n_max).rows)

    for n, row in enumerate(check.rows):
        check.mismatches.extend((n, k) for k, v in enumerate(row) if v != cycle2.entry(n, k))
    return check
