"""
Exact Linear Algebra Service
Total-positivity testing by Neville elimination and exhaustive minors, fraction-free determinants
"""

from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Iterator, List, Optional, Sequence, Tuple, Union
import logging

from app.models.linalg import ExactMatrix, MinorWitness, PolyMatrix, TPMethod, TPReport, TPVerdict
from app.models.polynomial import IntPolynomial
from app.models.triangle import Triangle
from app.services.exceptions import GuardExceededError, InexactDivisionError, SizeMismatchError, WorkbenchError

logger = logging.getLogger(__name__)

Index = Tuple[int, ...]


# Determinants

def _int_exquo(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if r:
        raise InexactDivisionError(f"{a} is not divisible by {b}")
    return q


def _poly_exquo(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    return a.exquo(b)


def fraction_free_det(rows: List[List[Any]], one: Any, exquo: Callable[[Any, Any], Any]) -> Any:
    """
    Bareiss elimination over an integral domain (int or IntPolynomial).

    Every division by the previous pivot is exact; a remainder raises
    InexactDivisionError.
    """
    n = len(rows)
    if n == 0:
        return one
    zero = one - one
    a = [list(row) for row in rows]
    sign = 1
    prev = one
    for k in range(n - 1):
        if not a[k][k]:
            pivot = next((i for i in range(k + 1, n) if a[i][k]), None)
            if pivot is None:
                return zero
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        pk = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            aik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = exquo(row_i[j] * pk - aik * row_k[j], prev)
        prev = pk
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


def _cofactor_det(rows: List[List[IntPolynomial]]) -> IntPolynomial:
    n = len(rows)
    if n == 0:
        return IntPolynomial.constant(1)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = IntPolynomial()
    for j, entry in enumerate(rows[0]):
        if not entry:
            continue
        sub = [row[:j] + row[j + 1:] for row in rows[1:]]
        term = entry * _cofactor_det(sub)
        total = total + term if j % 2 == 0 else total - term
    return total


def determinant(M: ExactMatrix) -> int:
    m, n = M.shape
    if m != n:
        raise SizeMismatchError(f"Determinant of a non-square {m}x{n} matrix")
    return fraction_free_det(M.to_lists(), 1, _int_exquo)


def _check_indices(shape: Tuple[int, int], rows: Sequence[int], cols: Sequence[int]) -> None:
    if len(rows) != len(cols):
        raise SizeMismatchError(f"Minor needs as many rows as columns, got {len(rows)} and {len(cols)}")
    m, n = shape
    if any(not 0 <= i < m for i in rows) or any(not 0 <= j < n for j in cols):
        raise SizeMismatchError(f"Minor indices out of range for a {m}x{n} matrix")


def minor(M: ExactMatrix, rows: Sequence[int], cols: Sequence[int]) -> int:
    _check_indices(M.shape, rows, cols)
    return fraction_free_det(M.submatrix(rows, cols), 1, _int_exquo)


def poly_minor(M: PolyMatrix, rows: Sequence[int], cols: Sequence[int]) -> IntPolynomial:
    """Cofactor expansion up to order 4, Bareiss above"""
    _check_indices(M.shape, rows, cols)
    sub = M.submatrix(rows, cols)
    if len(sub) <= 4:
        return _cofactor_det(sub)
    return fraction_free_det(sub, IntPolynomial.constant(1), _poly_exquo)


# Constructors

def toeplitz_of_row(T: Triangle, n: int, size: int) -> ExactMatrix:
    """out(i,j) = T(n, i−j), zero outside 0 ≤ i−j ≤ n"""
    row = T.row(n)
    return ExactMatrix.from_rows([
        [row[i - j] if 0 <= i - j <= n else 0 for j in range(size)]
        for i in range(size)
    ])


def hankel_of_polys(polys: Sequence[IntPolynomial], size: int) -> PolyMatrix:
    if len(polys) < 2 * size - 1:
        raise SizeMismatchError(f"A {size}x{size} Hankel matrix needs {2 * size - 1} polynomials, got {len(polys)}")
    return PolyMatrix.from_rows([[polys[i + j] for j in range(size)] for i in range(size)])


def hankel_of_sequence(values: Sequence[int], size: int) -> ExactMatrix:
    if len(values) < 2 * size - 1:
        raise SizeMismatchError(f"A {size}x{size} Hankel matrix needs {2 * size - 1} terms, got {len(values)}")
    return ExactMatrix.from_rows([[values[i + j] for j in range(size)] for i in range(size)])


# Exhaustive minor scan

class _MinorScan:
    """
    Depth-first Laplace expansion over row subsets.

    A node is a sorted row set R; it carries the minors det(R, C) for every
    column set C of the same size, obtained from its parent by expanding
    along the last row. Row sets of a fixed size are visited in
    lexicographic order, so the first negative minor recorded per order is
    the lexicographically first one of that order.
    """

    def __init__(
        self,
        entries: Sequence[Sequence[Any]],
        max_order: int,
        one: Any,
        negative: Callable[[Any], bool],
        limit: Optional[int] = None,
    ):
        self.entries = entries
        self.m = len(entries)
        self.n = len(entries[0]) if entries else 0
        self.max_order = min(max_order, self.m, self.n)
        self.one = one
        self.zero = one - one
        self.negative = negative
        self.limit = limit
        self.products = 0
        self.checked = 0
        self.best: Optional[Tuple[int, Index, Index, Any]] = None
        self._col_sets = [list(combinations(range(self.n), k)) for k in range(self.max_order + 1)]

    def _charge(self, k: int) -> None:
        self.products += len(self._col_sets[k]) * k
        if self.limit is not None and self.products > self.limit:
            raise GuardExceededError("minor search", self.limit, self.products)

    def _expand(self, row: Sequence[Any], parent: dict, k: int) -> dict:
        minors = {}
        for C in self._col_sets[k]:
            total = self.zero
            for t, j in enumerate(C):
                a = row[j]
                if not a:
                    continue
                sub = parent[C[:t] + C[t + 1:]]
                if not sub:
                    continue
                total = total + a * sub if (k - 1 + t) % 2 == 0 else total - a * sub
            minors[C] = total
        return minors

    def _visit(self, R: Index, minors: dict) -> None:
        k = len(R)
        if k:
            for C, value in minors.items():
                self.checked += 1
                if self.negative(value):
                    if self.best is None or k < self.best[0]:
                        self.best = (k, R, C, value)
                    break
        start = R[-1] + 1 if R else 0
        child_order = k + 1
        if child_order > self.max_order or (self.best is not None and child_order >= self.best[0]):
            return
        for i in range(start, self.m):
            self._charge(child_order)
            child = self._expand(self.entries[i], minors, child_order)
            self._visit(R + (i,), child)
            if self.best is not None and child_order >= self.best[0]:
                return

    def run(self) -> Optional[Tuple[int, Index, Index, Any]]:
        if self.max_order >= 1:
            self._visit((), {(): self.one})
        return self.best


def _scan(entries, max_order, one, negative, limit) -> Tuple[Optional[Tuple[int, Index, Index, Any]], _MinorScan]:
    scan = _MinorScan(entries, max_order, one, negative, limit)
    found = scan.run()
    logger.debug(f"Scanned {scan.checked} minors ({scan.products} products) up to order {scan.max_order}")
    return found, scan


def _is_negative(value: Union[int, IntPolynomial]) -> bool:
    if isinstance(value, IntPolynomial):
        return value.has_negative_coefficient()
    return value < 0


def _witness(rows: Index, cols: Index, value: Union[int, IntPolynomial]) -> MinorWitness:
    payload = list(value.coeffs) if isinstance(value, IntPolynomial) else value
    return MinorWitness(rows=list(rows), cols=list(cols), value=payload)


def find_negative_minor(
    M: Union[ExactMatrix, PolyMatrix],
    max_order: int,
    minor_search_limit: Optional[int] = None,
) -> Optional[MinorWitness]:
    """Smallest-order negative (or negative-coefficient) minor, lexicographic in (rows, cols)"""
    one = IntPolynomial.constant(1) if isinstance(M, PolyMatrix) else 1
    found, _ = _scan(M.entries, max_order, one, _is_negative, minor_search_limit)
    if found is None:
        return None
    k, R, C, value = found
    return _witness(R, C, value)


def all_minors_nonneg(M: ExactMatrix, max_order: int, minor_search_limit: Optional[int] = None) -> TPReport:
    if max_order > min(M.shape):
        raise SizeMismatchError(f"max_order {max_order} exceeds matrix dimensions {M.shape}")
    found, scan = _scan(M.entries, max_order, 1, _is_negative, minor_search_limit)
    caps = {"max_order": max_order, "minors_checked": scan.checked}
    if found is None:
        return TPReport(verdict=TPVerdict.TOTALLY_POSITIVE, method=TPMethod.MINORS, max_order_checked=max_order, caps=caps)
    k, R, C, value = found
    return TPReport(
        verdict=TPVerdict.NOT_TP,
        method=TPMethod.MINORS,
        witness=_witness(R, C, value),
        max_order_checked=k,
        caps=caps,
    )


# Neville elimination

def _positively_proportional(u: Sequence[int], v: Sequence[int]) -> bool:
    p = next((j for j, x in enumerate(u) if x), None)
    if p is None or not v[p] or (u[p] > 0) != (v[p] > 0):
        return False
    return all(u[j] * v[p] == v[j] * u[p] for j in range(len(u)))


def _reduce(rows: List[List[int]]) -> Tuple[List[List[int]], List[int], List[int]]:
    """
    Drop zero rows/columns and collapse adjacent positively proportional
    rows/columns until nothing changes. Total positivity is invariant under
    both operations; the index maps point back into the original matrix.
    """
    a = [list(row) for row in rows]
    row_map = list(range(len(a)))
    col_map = list(range(len(a[0]) if a else 0))

    def squeeze(mat: List[List[int]], index: List[int]) -> bool:
        keep = [i for i, row in enumerate(mat) if any(row)]
        i = 0
        while i + 1 < len(keep):
            if _positively_proportional(mat[keep[i]], mat[keep[i + 1]]):
                del keep[i + 1]
            else:
                i += 1
        if len(keep) == len(mat):
            return False
        mat[:] = [mat[i] for i in keep]
        index[:] = [index[i] for i in keep]
        return True

    changed = True
    while changed and a and a[0]:
        changed = squeeze(a, row_map)
        if a and a[0]:
            t = [list(col) for col in zip(*a)]
            if squeeze(t, col_map):
                changed = True
                a = [list(row) for row in zip(*t)] if t else []
    return a, row_map, col_map


def _neville(rows: List[List[int]]) -> Tuple[bool, bool]:
    """
    Neville elimination without row exchanges.

    Returns (passed, nonsingular). Fails on a negative pivot or when a zero
    pivot has a nonzero entry below it in its column segment.
    """
    a = [[Fraction(v) for v in row] for row in rows]
    m = len(a)
    n = len(a[0]) if a else 0
    for j in range(min(m, n)):
        seen_zero = False
        for i in range(j, m):
            v = a[i][j]
            if v < 0:
                return False, False
            if v == 0:
                seen_zero = True
            elif seen_zero:
                return False, False
        for i in range(m - 1, j, -1):
            if a[i][j] == 0:
                continue
            factor = a[i][j] / a[i - 1][j]
            upper = a[i - 1]
            a[i] = [x - factor * y for x, y in zip(a[i], upper)]
    nonsingular = m == n and all(a[i][i] != 0 for i in range(m))
    return True, nonsingular


def _initial_minors(m: int, n: int) -> Iterator[Tuple[Index, Index]]:
    """Consecutive rows × leading columns, then leading rows × consecutive columns, by order"""
    for k in range(1, min(m, n) + 1):
        for start in range(m - k + 1):
            yield tuple(range(start, start + k)), tuple(range(k))
        for start in range(1, n - k + 1):
            yield tuple(range(k)), tuple(range(start, start + k))


def neville_tp_test(M: ExactMatrix, minor_search_limit: Optional[int] = None) -> TPReport:
    """
    Exact total-positivity test.

    The matrix is reduced, then Neville elimination runs on it and on its
    transpose. A passing nonsingular square reduction is TP outright; any
    other outcome is settled by searching for a negative minor, initial
    minors first, then exhaustively. Witnesses are re-evaluated on M.
    """
    m, n = M.shape
    full_order = min(m, n)
    caps = {"rows": m, "cols": n}

    for i in range(m):
        for j in range(n):
            if M[i, j] < 0:
                witness = MinorWitness(rows=[i], cols=[j], value=M[i, j])
                return TPReport(verdict=TPVerdict.NOT_TP, method=TPMethod.NEVILLE, witness=witness,
                                max_order_checked=1, caps=caps)

    reduced, row_map, col_map = _reduce(M.to_lists())
    if not reduced or not reduced[0]:
        return TPReport(verdict=TPVerdict.TOTALLY_POSITIVE, method=TPMethod.NEVILLE,
                        max_order_checked=full_order, caps=caps)
    rm, rn = len(reduced), len(reduced[0])
    logger.debug(f"Reduced {m}x{n} matrix to {rm}x{rn}")

    passed, nonsingular = _neville(reduced)
    if passed:
        passed_t, nonsingular_t = _neville([list(col) for col in zip(*reduced)])
        passed = passed_t
        nonsingular = nonsingular and nonsingular_t
    if passed and nonsingular:
        return TPReport(verdict=TPVerdict.TOTALLY_POSITIVE, method=TPMethod.NEVILLE,
                        max_order_checked=full_order, caps=caps)

    if not passed:
        logger.debug("Neville elimination failed; searching initial minors")
        for rows, cols in _initial_minors(rm, rn):
            value = fraction_free_det([[reduced[i][j] for j in cols] for i in rows], 1, _int_exquo)
            if value < 0:
                return _report_witness(M, [row_map[i] for i in rows], [col_map[j] for j in cols], caps, TPMethod.NEVILLE)

    found, scan = _scan(reduced, min(rm, rn), 1, _is_negative, minor_search_limit)
    caps["minors_checked"] = scan.checked
    if found is None:
        return TPReport(verdict=TPVerdict.TOTALLY_POSITIVE, method=TPMethod.MINORS,
                        max_order_checked=full_order, caps=caps)
    k, R, C, value = found
    return _report_witness(M, [row_map[i] for i in R], [col_map[j] for j in C], caps, TPMethod.MINORS)


def _report_witness(M: ExactMatrix, rows: List[int], cols: List[int], caps: dict, method: TPMethod) -> TPReport:
    value = minor(M, rows, cols)
    if value >= 0:
        raise WorkbenchError(f"Witness rows={rows} cols={cols} re-evaluated to {value} on the original matrix")
    return TPReport(
        verdict=TPVerdict.NOT_TP,
        method=method,
        witness=MinorWitness(rows=rows, cols=cols, value=value),
        max_order_checked=len(rows),
        caps=caps,
    )


# Polynomial Hankel matrices

def coeffwise_hankel_tp(
    polys: Sequence[IntPolynomial],
    size: int,
    max_minor_order: int,
    minor_search_limit: Optional[int] = None,
) -> TPReport:
    """Every minor of order ≤ max_minor_order of the size×size Hankel matrix has nonnegative coefficients"""
    H = hankel_of_polys(polys, size)
    max_minor_order = min(max_minor_order, size)
    found, scan = _scan(H.entries, max_minor_order, IntPolynomial.constant(1), _is_negative, minor_search_limit)
    caps = {"size": size, "max_minor_order": max_minor_order, "minors_checked": scan.checked}
    if found is None:
        return TPReport(verdict=TPVerdict.TOTALLY_POSITIVE, method=TPMethod.MINORS,
                        max_order_checked=max_minor_order, caps=caps)
    k, R, C, value = found
    checked = poly_minor(H, R, C)
    if checked != value:
        raise WorkbenchError(f"Minor rows={list(R)} cols={list(C)} disagrees between expansion and elimination")
    return TPReport(verdict=TPVerdict.NOT_TP, method=TPMethod.MINORS, witness=_witness(R, C, value),
                    max_order_checked=k, caps=caps)
