"""
Triangle Engine
Exact recurrence and matrix-algebra construction of the Stirling, Eulerian and quasi-Eulerian triangles
"""

from fractions import Fraction
from math import comb, factorial
from typing import Callable, Dict, List, Optional, Tuple, Union
import logging

from app.models.triangle import (
    GkpCoefficients,
    ThreeTermRecurrence,
    Triangle,
    TriangleKind,
    stirling_diagonal,
)
from app.services.exceptions import (
    NonIntegralEntryError,
    SizeMismatchError,
    UnknownKindError,
    WorkbenchError,
)

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]
Weight = Callable[[int, int], int]


def _binom(n: int, k: int) -> int:
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k)


def _as_integer(value: Rational, n: int, k: int) -> int:
    if isinstance(value, Fraction):
        if value.denominator != 1:
            raise NonIntegralEntryError(n, k, value)
        return value.numerator
    return value


def _generate(n_max: int, same_row: Weight, previous_column: Weight) -> List[List[int]]:
    """Two-term recurrence T(n,k) = same_row(n,k) T(n-1,k) + previous_column(n,k) T(n-1,k-1)"""
    if n_max < 0:
        raise ValueError(f"n_max must be nonnegative, got {n_max}")
    rows = [[1]]
    for n in range(1, n_max + 1):
        prev = rows[-1]
        row = []
        for k in range(n + 1):
            value = 0
            if k < n and prev[k]:
                value += same_row(n, k) * prev[k]
            if k >= 1 and prev[k - 1]:
                value += previous_column(n, k) * prev[k - 1]
            row.append(value)
        rows.append(row)
    return rows


# GKP recurrences

def gkp_generate(
    coeffs: GkpCoefficients,
    n_max: int,
    kind: TriangleKind = TriangleKind.GENERIC,
    order: int = 1,
) -> Triangle:
    """A(n,k) = (αn+βk+γ)A(n−1,k) + (α′n+β′k+γ′)A(n−1,k−1) with A(0,k) = δ_{k0}"""
    if n_max < 0:
        raise ValueError(f"n_max must be nonnegative, got {n_max}")
    rows: List[List[int]] = [[1]]
    for n in range(1, n_max + 1):
        prev = rows[-1]
        row = []
        for k in range(n + 1):
            value = Fraction(0)
            if k < n:
                value += coeffs.same_row(n, k) * prev[k]
            if k >= 1:
                value += coeffs.previous_column(n, k) * prev[k - 1]
            row.append(_as_integer(value, n, k))
        rows.append(row)
    return Triangle(kind=kind, order=order, rows=rows)


def gkp_binomial_transform(coeffs: GkpCoefficients, xi: Optional[Rational] = None) -> ThreeTermRecurrence:
    """
    Recurrence satisfied by A·B_ξ when A obeys the GKP recurrence `coeffs`.

    With xi=None the value ξ = −β/β′ that cancels the third term is used.
    """
    if xi is None:
        if coeffs.beta_p == 0:
            raise WorkbenchError("Cannot choose xi = -beta/beta' when beta' = 0")
        xi = -coeffs.beta / coeffs.beta_p
    xi = Fraction(xi)
    a, b, c, ap, bp, cp = coeffs.as_tuple()
    linear = GkpCoefficients.of(
        a + xi * ap,
        b + 2 * xi * bp,
        c + xi * (bp + cp),
        ap,
        bp,
        cp,
    )
    return ThreeTermRecurrence(linear=linear, lam=xi * (b + xi * bp), xi=xi)


def three_term_generate(rec: ThreeTermRecurrence, n_max: int) -> Triangle:
    """Unroll a ThreeTermRecurrence from C(0,k) = δ_{k0}"""
    if n_max < 0:
        raise ValueError(f"n_max must be nonnegative, got {n_max}")
    rows: List[List[int]] = [[1]]
    for n in range(1, n_max + 1):
        prev = rows[-1]
        row = []
        for k in range(n + 1):
            value = Fraction(0)
            if k < n:
                value += rec.linear.same_row(n, k) * prev[k]
            if k >= 1:
                value += rec.linear.previous_column(n, k) * prev[k - 1]
            if k + 1 < n and rec.lam:
                value += rec.lam * (k + 1) * prev[k + 1]
            row.append(_as_integer(value, n, k))
        rows.append(row)
    return Triangle(rows=rows)


# Stirling families

def stirling_cycle_r(r: int, n_max: int) -> Triangle:
    if r < 1:
        raise ValueError(f"Order r must be at least 1, got {r}")
    lead = factorial(r - 1)
    rows = _generate(
        n_max,
        same_row=lambda n, k: n + (r - 1) * k - 1,
        previous_column=lambda n, k: lead * _binom(n + (r - 1) * k - 1, r - 1),
    )
    return Triangle(kind=TriangleKind.STIRLING_CYCLE, order=r, rows=rows, label=f"C^({r})")


def stirling_subset_r(r: int, n_max: int) -> Triangle:
    if r < 1:
        raise ValueError(f"Order r must be at least 1, got {r}")
    rows = _generate(
        n_max,
        same_row=lambda n, k: k,
        previous_column=lambda n, k: _binom(n + (r - 1) * k - 1, r - 1),
    )
    return Triangle(kind=TriangleKind.STIRLING_SUBSET, order=r, rows=rows, label=f"S^({r})")


def stirling_second_order(kind: str, n_max: int) -> Triangle:
    """
    Closed second-order recurrences:
    cycle  [n k] = (n+k−1)([n−1 k−1] + [n−1 k])
    subset {n k} = (n+k−1){n−1 k−1} + k{n−1 k}
    """
    if kind == "cycle":
        coeffs = GkpCoefficients.of(1, 1, -1, 1, 1, -1)
        target = TriangleKind.STIRLING_CYCLE
    elif kind == "subset":
        coeffs = GkpCoefficients.of(0, 1, 0, 1, 1, -1)
        target = TriangleKind.STIRLING_SUBSET
    else:
        raise UnknownKindError(kind, ["cycle", "subset"])
    return gkp_generate(coeffs, n_max, kind=target, order=2)


def r_associated(kind: str, r: int, N_max: int) -> Triangle:
    """
    r-associated numbers [N k]_r and {N k}_r (nonzero only for N ≥ rk):
    [N k]_r = (r−1)!·C(N−1,r−1)[N−r k−1]_r + (N−1)[N−1 k]_r
    {N k}_r = C(N−1,r−1){N−r k−1}_r + k{N−1 k}_r
    """
    if r < 1:
        raise ValueError(f"Order r must be at least 1, got {r}")
    if N_max < 0:
        raise ValueError(f"N_max must be nonnegative, got {N_max}")
    if kind == "cycle":
        lead = factorial(r - 1)
        target = TriangleKind.ASSOC_CYCLE
        same_row: Weight = lambda N, k: N - 1
    elif kind == "subset":
        lead = 1
        target = TriangleKind.ASSOC_SUBSET
        same_row = lambda N, k: k
    else:
        raise UnknownKindError(kind, ["cycle", "subset"])

    rows: List[List[int]] = [[1]]
    for N in range(1, N_max + 1):
        row = []
        for k in range(N + 1):
            value = 0
            if k < N:
                value += same_row(N, k) * rows[N - 1][k]
            back = N - r
            if k >= 1 and back >= 0 and k - 1 <= back:
                value += lead * _binom(N - 1, r - 1) * rows[back][k - 1]
            row.append(value)
        rows.append(row)
    return Triangle(kind=target, order=r, rows=rows)


def diagonal_formula(kind: str, r: int, n: int) -> int:
    if kind not in ("cycle", "subset"):
        raise UnknownKindError(kind, ["cycle", "subset"])
    return stirling_diagonal(kind == "cycle", r, n)


# Eulerian families

def eulerian_r(r: int, n_max: int) -> Triangle:
    """⟨n k⟩ = (rn−k−(r−1))⟨n−1 k−1⟩ + (k+1)⟨n−1 k⟩"""
    if r < 1:
        raise ValueError(f"Order r must be at least 1, got {r}")
    rows = _generate(
        n_max,
        same_row=lambda n, k: k + 1,
        previous_column=lambda n, k: r * n - k - (r - 1),
    )
    return Triangle(kind=TriangleKind.EULERIAN, order=r, rows=rows, label=f"E^({r})")


def reverse_shift(T: Triangle) -> Triangle:
    """out(n,k) = T(n, n−k−1), keeping row 0 = [1]"""
    rows = [[1]] + [[T.entry(n, n - k - 1) for k in range(n + 1)] for n in range(1, len(T.rows))]
    return Triangle(kind=T.kind, order=T.order, rows=rows, is_reversed=not T.is_reversed)


def eulerian_shifted_reversed(r: int, n_max: int) -> Triangle:
    return reverse_shift(eulerian_r(r, n_max))


def ordered_phylo_triangle(n_max: int) -> Triangle:
    """D(n,k) = (n+k)!/k! · C(n−1,k−1), row 0 = [1]"""
    if n_max < 0:
        raise ValueError(f"n_max must be nonnegative, got {n_max}")
    rows = [[1]]
    for n in range(1, n_max + 1):
        rows.append([factorial(n + k) // factorial(k) * _binom(n - 1, k - 1) for k in range(n + 1)])
    return Triangle(kind=TriangleKind.ORDERED_PHYLO, rows=rows, label="D")


# Matrix algebra

def reverse_rows(T: Triangle) -> Triangle:
    rows = [list(reversed(row)) for row in T.rows]
    return Triangle(kind=T.kind, order=T.order, rows=rows, is_reversed=not T.is_reversed)


def truncate(T: Triangle, n_max: int) -> Triangle:
    if n_max > T.n_max:
        raise SizeMismatchError(f"Cannot truncate a triangle with {T.n_max} rows to {n_max}")
    return T.model_copy(update={"rows": [list(row) for row in T.rows[: n_max + 1]]})


def binomial_matrix(xi: Rational, n_max: int) -> Triangle:
    """(B_ξ)(n,k) = C(n,k)·ξ^{n−k}"""
    if n_max < 0:
        raise ValueError(f"n_max must be nonnegative, got {n_max}")
    xi = Fraction(xi)
    rows = []
    for n in range(n_max + 1):
        rows.append([_as_integer(comb(n, k) * xi ** (n - k), n, k) for k in range(n + 1)])
    return Triangle(rows=rows)


def matmul(A: Triangle, B: Triangle) -> Triangle:
    """Exact product of two lower-triangular arrays of equal size"""
    if len(A.rows) != len(B.rows):
        raise SizeMismatchError(f"Cannot multiply triangles with {len(A.rows)} and {len(B.rows)} rows")
    rows = []
    for n in range(len(A.rows)):
        a_row = A.rows[n]
        rows.append([
            sum(a_row[i] * B.rows[i][k] for i in range(k, n + 1) if a_row[i])
            for k in range(n + 1)
        ])
    return Triangle(rows=rows)


def quasi_eulerian(kind: str, r: int, n_max: int) -> Triangle:
    """Q_C^(r) = reverse(C^(r))·B_{−1}, Q_S^(r) = reverse(S^(r))·B_{−1}"""
    if kind == "cycle":
        base = stirling_cycle_r(r, n_max)
        target = TriangleKind.QUASI_EULERIAN_CYCLE
    elif kind == "subset":
        base = stirling_subset_r(r, n_max)
        target = TriangleKind.QUASI_EULERIAN_SUBSET
    else:
        raise UnknownKindError(kind, ["cycle", "subset"])
    product = matmul(reverse_rows(base), binomial_matrix(-1, n_max))
    label = f"Q_{'C' if kind == 'cycle' else 'S'}^({r})"
    return Triangle(kind=target, order=r, rows=product.rows, label=label)


class TriangleService:
    """
    Single entry point used by the CLI, HTTP routes and campaign runner to
    obtain triangles by name. Generated triangles are cached per (kind, r)
    and served truncated when a smaller n_max is requested.
    """

    KINDS = [
        "cycle",
        "subset",
        "assoc-cycle",
        "assoc-subset",
        "eulerian",
        "eulerian-shifted-reversed",
        "quasi-cycle",
        "quasi-subset",
        "ordered-phylo",
        "binomial",
    ]

    def __init__(self):
        self._cache: Dict[Tuple[str, int], Triangle] = {}

    def _build(self, kind: str, r: int, n_max: int) -> Triangle:
        if kind == "cycle":
            return stirling_cycle_r(r, n_max)
        if kind == "subset":
            return stirling_subset_r(r, n_max)
        if kind == "assoc-cycle":
            return r_associated("cycle", r, n_max)
        if kind == "assoc-subset":
            return r_associated("subset", r, n_max)
        if kind == "eulerian":
            return eulerian_r(r, n_max)
        if kind == "eulerian-shifted-reversed":
            return eulerian_shifted_reversed(r, n_max)
        if kind == "quasi-cycle":
            return quasi_eulerian("cycle", r, n_max)
        if kind == "quasi-subset":
            return quasi_eulerian("subset", r, n_max)
        if kind == "ordered-phylo":
            return ordered_phylo_triangle(n_max)
        if kind == "binomial":
            return binomial_matrix(r, n_max)
        raise UnknownKindError(kind, self.KINDS)

    def triangle_for(self, kind: str, r: int, n_max: int, reversed: bool = False) -> Triangle:
        if kind not in self.KINDS:
            raise UnknownKindError(kind, self.KINDS)
        key = (kind, r)
        cached = self._cache.get(key)
        if cached is None or cached.n_max < n_max:
            logger.debug(f"Generating {kind} r={r} up to row {n_max}")
            cached = self._build(kind, r, n_max)
            self._cache[key] = cached
        triangle = cached if cached.n_max == n_max else truncate(cached, n_max)
        return reverse_rows(triangle) if reversed else triangle
