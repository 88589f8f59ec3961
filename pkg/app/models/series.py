"""
Truncated Power Series Model
Power series in t up to a fixed order with coefficients in a sympy polynomial ring over QQ
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import sympy
from pydantic import BaseModel
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, PolyRing, ring

from app.services.exceptions import NonIntegralEntryError, SeriesCompositionError, SizeMismatchError


class WardSpecialization(str, Enum):
    MULTIVARIATE = "multivariate"
    SUBSET = "subset"
    CYCLIC = "cyclic"
    ORDERED = "ordered"


def series_ring(names: str = "x,y") -> PolyRing:
    R, *_ = ring(names, QQ)
    return R


def _coerce(R: PolyRing, value: Any) -> PolyElement:
    if isinstance(value, PolyElement) and value.ring == R:
        return value
    if isinstance(value, Fraction):
        return R(sympy.Rational(value.numerator, value.denominator))
    if isinstance(value, PolyElement):
        return R(value.as_expr())
    return R(value)


@dataclass(frozen=True)
class TruncatedSeries:
    """
    a_0 + a_1 t + … + a_N t^N.

    Every operation truncates at the smallest order of its operands and never
    reads coefficients beyond it.
    """

    ring: PolyRing
    coeffs: Tuple[PolyElement, ...]

    def __post_init__(self):
        if not self.coeffs:
            raise SizeMismatchError("A truncated series needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", tuple(_coerce(self.ring, c) for c in self.coeffs))

    # Construction

    @classmethod
    def from_coefficients(cls, R: PolyRing, order: int, values: Sequence[Any]) -> "TruncatedSeries":
        if order < 0:
            raise ValueError(f"Series order must be nonnegative, got {order}")
        padded = list(values[: order + 1]) + [0] * (order + 1 - min(len(values), order + 1))
        return cls(R, tuple(padded))

    @classmethod
    def from_function(cls, R: PolyRing, order: int, term: Callable[[int], Any]) -> "TruncatedSeries":
        return cls.from_coefficients(R, order, [term(n) for n in range(order + 1)])

    @classmethod
    def zero(cls, R: PolyRing, order: int) -> "TruncatedSeries":
        return cls.from_coefficients(R, order, [])

    @classmethod
    def one(cls, R: PolyRing, order: int) -> "TruncatedSeries":
        return cls.from_coefficients(R, order, [1])

    @classmethod
    def variable(cls, R: PolyRing, order: int) -> "TruncatedSeries":
        return cls.from_coefficients(R, order, [0, 1])

    # Access

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, n: int) -> PolyElement:
        if n > self.order:
            raise SizeMismatchError(f"Coefficient {n} lies beyond the truncation order {self.order}")
        return self.coeffs[n] if n >= 0 else self.ring.zero

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise SizeMismatchError(f"Cannot extend a series of order {self.order} to {order}")
        return TruncatedSeries(self.ring, self.coeffs[: order + 1])

    def valuation(self) -> Optional[int]:
        for n, c in enumerate(self.coeffs):
            if c:
                return n
        return None

    def egf_coefficients(self) -> List[PolyElement]:
        """n!·a_n; these must have integer coefficients"""
        out = []
        factorial = 1
        for n, c in enumerate(self.coeffs):
            if n:
                factorial *= n
            scaled = c * factorial
            for monom, value in scaled.terms():
                if QQ.denom(value) != 1:
                    raise NonIntegralEntryError(n, sum(monom), value)
            out.append(scaled)
        return out

    def agrees_with(self, other: "TruncatedSeries", order: Optional[int] = None) -> Optional[int]:
        """First index where the two series differ up to order, or None"""
        limit = min(self.order, other.order) if order is None else order
        for n in range(limit + 1):
            if self.coefficient(n) != other.coefficient(n):
                return n
        return None

    # Arithmetic

    def _other(self, other: Any) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            if other.ring != self.ring:
                raise SizeMismatchError("Series over different coefficient rings")
            return other
        return TruncatedSeries.from_coefficients(self.ring, self.order, [other])

    def __add__(self, other) -> "TruncatedSeries":
        other = self._other(other)
        order = min(self.order, other.order)
        return TruncatedSeries(self.ring, tuple(self.coeffs[n] + other.coeffs[n] for n in range(order + 1)))

    __radd__ = __add__

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.ring, tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> "TruncatedSeries":
        return self + (-self._other(other))

    def __rsub__(self, other) -> "TruncatedSeries":
        return self._other(other) - self

    def __mul__(self, other) -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            factor = _coerce(self.ring, other)
            return TruncatedSeries(self.ring, tuple(c * factor for c in self.coeffs))
        other = self._other(other)
        order = min(self.order, other.order)
        out = [self.ring.zero] * (order + 1)
        for i, a in enumerate(self.coeffs[: order + 1]):
            if not a:
                continue
            for j in range(order + 1 - i):
                b = other.coeffs[j]
                if b:
                    out[i + j] += a * b
        return TruncatedSeries(self.ring, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TruncatedSeries":
        if k < 0:
            return self.reciprocal() ** (-k)
        result = TruncatedSeries.one(self.ring, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def derivative(self) -> "TruncatedSeries":
        if self.order == 0:
            return TruncatedSeries.zero(self.ring, 0)
        return TruncatedSeries(self.ring, tuple(n * self.coeffs[n] for n in range(1, self.order + 1)))

    def integral(self) -> "TruncatedSeries":
        """Antiderivative with zero constant term, one order longer"""
        out = [self.ring.zero] + [c.mul_ground(QQ(1, n + 1)) for n, c in enumerate(self.coeffs)]
        return TruncatedSeries(self.ring, tuple(out))

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """self(inner(t)); inner must have zero constant term"""
        inner = self._other(inner)
        if inner.coeffs[0]:
            raise SeriesCompositionError("Inner series of a composition must have zero constant term")
        order = min(self.order, inner.order)
        inner = inner.truncate(order)
        result = TruncatedSeries.from_coefficients(self.ring, order, [self.coeffs[order]])
        for n in range(order - 1, -1, -1):
            result = result * inner + self.coeffs[n]
        return result

    def reciprocal(self) -> "TruncatedSeries":
        a0 = self.coeffs[0]
        if not a0 or not a0.is_ground:
            raise SeriesCompositionError("Reciprocal needs a nonzero constant leading coefficient")
        inv = QQ(1) / a0.LC
        out = [self.ring.one.mul_ground(inv)]
        for n in range(1, self.order + 1):
            acc = self.ring.zero
            for j in range(1, n + 1):
                if self.coeffs[j]:
                    acc += self.coeffs[j] * out[n - j]
            out.append((-acc).mul_ground(inv))
        return TruncatedSeries(self.ring, tuple(out))

    def exp(self) -> "TruncatedSeries":
        """exp(s) for s with zero constant term, via n·e_n = Σ k·s_k·e_{n−k}"""
        if self.coeffs[0]:
            raise SeriesCompositionError("exp needs a series with zero constant term")
        out = [self.ring.one]
        for n in range(1, self.order + 1):
            acc = self.ring.zero
            for k in range(1, n + 1):
                if self.coeffs[k]:
                    acc += k * self.coeffs[k] * out[n - k]
            out.append(acc.mul_ground(QQ(1, n)))
        return TruncatedSeries(self.ring, tuple(out))

    def log1m(self) -> "TruncatedSeries":
        """log(1 − s) for s with zero constant term"""
        if self.coeffs[0]:
            raise SeriesCompositionError("log(1 - s) needs a series with zero constant term")
        outer = TruncatedSeries.from_function(self.ring, self.order, lambda n: Fraction(-1, n) if n else 0)
        return outer.compose(self)

    def geometric(self) -> "TruncatedSeries":
        """1/(1 − s) for s with zero constant term"""
        if self.coeffs[0]:
            raise SeriesCompositionError("1/(1 - s) needs a series with zero constant term")
        return TruncatedSeries.from_function(self.ring, self.order, lambda n: 1).compose(self)

    def to_json(self) -> Dict[str, Any]:
        return {
            "order": self.order,
            "variables": [str(s) for s in self.ring.symbols],
            "coefficients": [str(c.as_expr()) for c in self.coeffs],
        }


class TreeIdentityReport(BaseModel):
    """Checks of B = Φ̂(A) and A′ = 1 + x·B for one pair (Φ̂, 𝒳)"""
    label: str
    order: int
    precondition_holds: bool
    composition_holds: bool = False
    derivative_holds: bool = False
    first_failing_order: Optional[int] = None

    @property
    def passed(self) -> bool:
        return self.precondition_holds and self.composition_holds and self.derivative_holds
