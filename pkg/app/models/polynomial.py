"""
Integer Polynomial Model
Dense univariate polynomials with arbitrary-precision integer coefficients
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Tuple, Union

import sympy
from sympy import Poly
from sympy.polys.densearith import dup_add, dup_exquo, dup_mul, dup_neg, dup_sub
from sympy.polys.densetools import dup_diff
from sympy.polys.domains import ZZ
from sympy.polys.polyerrors import ExactQuotientFailed

from app.services.exceptions import InexactDivisionError

X = sympy.Symbol("x")

Number = Union[int, Fraction]


def _trim(coeffs: Iterable[int]) -> Tuple[int, ...]:
    values = [int(c) for c in coeffs]
    while values and values[-1] == 0:
        values.pop()
    return tuple(values)


@dataclass(frozen=True)
class IntPolynomial:
    """
    Polynomial in x stored constant term first.

    The zero polynomial has no coefficients and degree -1. Heavy arithmetic is
    delegated to sympy's dense polynomial routines over ZZ, which expect the
    leading coefficient first, so every call reverses on the way in and out.
    """

    coeffs: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    # Construction

    @classmethod
    def constant(cls, value: int) -> "IntPolynomial":
        return cls((value,))

    @classmethod
    def monomial(cls, degree: int, coefficient: int = 1) -> "IntPolynomial":
        return cls((0,) * degree + (coefficient,))

    @classmethod
    def from_dense(cls, high_first: List) -> "IntPolynomial":
        return cls(tuple(reversed(high_first)))

    @classmethod
    def from_sympy(cls, poly: Poly) -> "IntPolynomial":
        return cls.from_dense([int(c) for c in poly.all_coeffs()])

    @classmethod
    def parse(cls, text: str) -> "IntPolynomial":
        """Inverse of format(): 'c0;c1;...;ck'"""
        text = text.strip()
        if not text:
            return cls()
        return cls(tuple(int(part) for part in text.split(";")))

    # Properties

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def coefficient(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def has_negative_coefficient(self) -> bool:
        return any(c < 0 for c in self.coeffs)

    def one_norm(self) -> int:
        return sum(abs(c) for c in self.coeffs)

    # Arithmetic

    def _dense(self) -> List[int]:
        return list(reversed(self.coeffs))

    @staticmethod
    def _coerce(other) -> "IntPolynomial":
        if isinstance(other, IntPolynomial):
            return other
        if isinstance(other, int):
            return IntPolynomial.constant(other)
        raise TypeError(f"Cannot combine IntPolynomial with {type(other).__name__}")

    def __add__(self, other) -> "IntPolynomial":
        other = self._coerce(other)
        return IntPolynomial.from_dense(dup_add(self._dense(), other._dense(), ZZ))

    __radd__ = __add__

    def __sub__(self, other) -> "IntPolynomial":
        other = self._coerce(other)
        return IntPolynomial.from_dense(dup_sub(self._dense(), other._dense(), ZZ))

    def __rsub__(self, other) -> "IntPolynomial":
        return self._coerce(other) - self

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial.from_dense(dup_neg(self._dense(), ZZ))

    def __mul__(self, other) -> "IntPolynomial":
        other = self._coerce(other)
        if self.is_zero or other.is_zero:
            return IntPolynomial()
        return IntPolynomial.from_dense(dup_mul(self._dense(), other._dense(), ZZ))

    __rmul__ = __mul__

    def exquo(self, other: "IntPolynomial") -> "IntPolynomial":
        """Exact quotient; a nonzero remainder raises InexactDivisionError"""
        other = self._coerce(other)
        if other.is_zero:
            raise InexactDivisionError("division by the zero polynomial")
        if self.is_zero:
            return IntPolynomial()
        try:
            return IntPolynomial.from_dense(dup_exquo(self._dense(), other._dense(), ZZ))
        except ExactQuotientFailed as e:
            raise InexactDivisionError(f"{self} is not divisible by {other}") from e

    def derivative(self) -> "IntPolynomial":
        if self.degree < 1:
            return IntPolynomial()
        return IntPolynomial.from_dense(dup_diff(self._dense(), 1, ZZ))

    def derivative_n(self, m: int) -> "IntPolynomial":
        if m <= 0:
            return self
        if self.degree < m:
            return IntPolynomial()
        return IntPolynomial.from_dense(dup_diff(self._dense(), m, ZZ))

    def mul_x(self, power: int = 1) -> "IntPolynomial":
        if self.is_zero:
            return self
        return IntPolynomial((0,) * power + self.coeffs)

    def divide_by_x(self) -> "IntPolynomial":
        """p(x)/x; requires p(0) = 0"""
        if self.is_zero:
            return self
        if self.coeffs[0] != 0:
            raise ValueError(f"{self} is not divisible by x")
        return IntPolynomial(self.coeffs[1:])

    def evaluate(self, value: Number) -> Number:
        result: Number = 0
        for c in reversed(self.coeffs):
            result = result * value + c
        return result

    # Conversion

    def to_sympy(self) -> Poly:
        return Poly(self._dense() or [0], X, domain=ZZ)

    def format(self) -> str:
        """Constant-first 'c0;c1;...;ck' used in CSV cells"""
        return ";".join(str(c) for c in self.coeffs) if self.coeffs else "0"

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            elif k == 1:
                terms.append(f"{c}x")
            else:
                terms.append(f"{c}x^{k}")
        return " + ".join(terms).replace("+ -", "- ")
