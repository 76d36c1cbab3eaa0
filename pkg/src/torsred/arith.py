"""Exact arithmetic over Q and quadratic fields, with valuations at a prime.

Rationals are plain :class:`fractions.Fraction` values.  A quadratic field is
``Q[theta]/(theta^2 + p1*theta + p0)``; its elements are pairs ``a + b*theta``.
Valuations are normalized so the value group is the integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import UnsupportedPrimeError, TorsredError

INF = math.inf

Rational = Fraction
Scalar = Union[int, Fraction]


def to_rational(x: Scalar | str) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError as exc:
            raise TorsredError(f"not a rational: {x!r}") from exc
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def format_rational(x: Scalar) -> str:
    x = to_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def _int_val(n: int, p: int) -> int:
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def val_p(x: Scalar, p: int) -> int | float:
    """Exponent of ``p`` in the rational ``x``; ``inf`` for zero."""
    x = to_rational(x)
    if x == 0:
        return INF
    return _int_val(x.numerator, p) - _int_val(x.denominator, p)


def rational_sqrt(x: Scalar) -> Fraction | None:
    """Exact square root of a nonnegative rational square, else ``None``."""
    x = to_rational(x)
    if x < 0:
        return None
    rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def _check_odd_prime(p: int) -> None:
    if p == 2:
        raise UnsupportedPrimeError("p = 2 is unsupported")
    if not is_prime(p):
        raise TorsredError(f"{p} is not prime")


@dataclass(frozen=True)
class QuadraticField:
    """The field Q[theta] with theta a root of x^2 + p1*x + p0."""

    p1: Fraction
    p0: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "p1", to_rational(self.p1))
        object.__setattr__(self, "p0", to_rational(self.p0))
        if rational_sqrt(self.discriminant) is not None:
            raise TorsredError(
                f"x^2 + ({self.p1})x + ({self.p0}) is reducible over Q"
            )

    @property
    def discriminant(self) -> Fraction:
        return self.p1 * self.p1 - 4 * self.p0

    @property
    def gen(self) -> QuadraticElement:
        return QuadraticElement(self, Fraction(0), Fraction(1))

    def __call__(self, a: Scalar = 0, b: Scalar = 0) -> QuadraticElement:
        return QuadraticElement(self, to_rational(a), to_rational(b))

    def to_json(self) -> dict:
        return {
            "kind": "quadratic",
            "minpoly": [format_rational(self.p1), format_rational(self.p0)],
        }

    def __str__(self) -> str:
        return f"Q[x]/(x^2 + ({self.p1})x + ({self.p0}))"


@dataclass(frozen=True, eq=False)
class QuadraticElement:
    """a + b*theta in a :class:`QuadraticField`."""

    field: QuadraticField
    a: Fraction
    b: Fraction

    def _coerce(self, other) -> QuadraticElement | None:
        if isinstance(other, QuadraticElement):
            if other.field != self.field:
                raise TorsredError("elements of different quadratic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticElement(self.field, Fraction(other), Fraction(0))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticElement(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticElement(self.field, -self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticElement(self.field, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadraticElement(self.field, self.a * other, self.b * other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        # theta^2 = -p1*theta - p0
        bd = self.b * o.b
        return QuadraticElement(
            self.field,
            self.a * o.a - bd * self.field.p0,
            self.a * o.b + self.b * o.a - bd * self.field.p1,
        )

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return (self.inverse()) ** (-n)
        result = QuadraticElement(self.field, Fraction(1), Fraction(0))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> QuadraticElement:
        return QuadraticElement(self.field, self.a - self.b * self.field.p1, -self.b)

    def norm(self) -> Fraction:
        f = self.field
        return self.a * self.a - self.a * self.b * f.p1 + self.b * self.b * f.p0

    def trace(self) -> Fraction:
        return 2 * self.a - self.b * self.field.p1

    def inverse(self) -> QuadraticElement:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in quadratic field")
        c = self.conjugate()
        return QuadraticElement(self.field, c.a / n, c.b / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return QuadraticElement(self.field, self.a / other, self.b / other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadraticElement):
            return self.field == other.field and self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.field, self.a, self.b))

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __repr__(self) -> str:
        return f"({format_rational(self.a)} + {format_rational(self.b)}*theta)"

    def to_json(self) -> dict:
        return {
            "a": format_rational(self.a),
            "b": format_rational(self.b),
            "minpoly": [format_rational(self.field.p1), format_rational(self.field.p0)],
        }


def splitting_type(field: QuadraticField, p: int) -> str:
    """Decomposition of the odd prime ``p`` in ``field``: ramified, inert or split."""
    _check_odd_prime(p)
    d = field.discriminant
    if val_p(d.denominator, p) > 0:
        raise UnsupportedPrimeError(f"discriminant {d} has {p} in its denominator")
    v = val_p(d, p)
    if v % 2 == 1:
        return "ramified"
    unit = d / Fraction(p) ** v
    residue = unit.numerator * pow(unit.denominator, -1, p) % p
    return "split" if pow(residue, (p - 1) // 2, p) == 1 else "inert"


def quad_val(alpha: QuadraticElement | Scalar, p: int, field: QuadraticField | None = None) -> int | float:
    """Normalized valuation at the unique prime above ``p``."""
    if not isinstance(alpha, QuadraticElement):
        if field is None:
            raise TorsredError("quad_val needs a field for rational input")
        alpha = field(alpha)
    kind = splitting_type(alpha.field, p)
    if kind == "split":
        raise UnsupportedPrimeError(f"{p} splits in {alpha.field}: ambiguous prime")
    if not alpha:
        return INF
    v = val_p(alpha.norm(), p)
    if kind == "ramified":
        return v
    return v // 2


def residue_reduce(alpha: QuadraticElement | Scalar, p: int) -> int:
    """Image in F_p of a valuation-nonnegative element (ramified fields only)."""
    if not isinstance(alpha, QuadraticElement):
        x = to_rational(alpha)
        if val_p(x, p) < 0:
            raise TorsredError(f"{x} has negative valuation at {p}")
        return x.numerator * pow(x.denominator, -1, p) % p
    kind = splitting_type(alpha.field, p)
    if kind == "inert":
        raise UnsupportedPrimeError(f"residue field is F_{p}^2, unsupported")
    if kind == "split":
        raise UnsupportedPrimeError(f"{p} splits in {alpha.field}: ambiguous prime")
    # theta = r + pi with r = -p1/2 and pi^2 = disc/4 of odd valuation, so
    # a + b*theta = (a + b*r) + b*pi splits into even and odd valuation parts.
    r = -alpha.field.p1 / 2
    unit_part = alpha.a + alpha.b * r
    disc_v = val_p(alpha.field.discriminant, p)
    if 2 * val_p(unit_part, p) < 0 or (alpha.b and 2 * val_p(alpha.b, p) + disc_v < 0):
        raise TorsredError(f"{alpha!r} has negative valuation above {p}")
    return residue_reduce(unit_part, p)


def field_from_json(obj: dict | None) -> QuadraticField | None:
    if obj is None or obj.get("kind", "rational") == "rational":
        return None
    if obj.get("kind") != "quadratic":
        raise TorsredError(f"unknown base kind {obj.get('kind')!r}")
    p1, p0 = obj["minpoly"]
    return QuadraticField(to_rational(p1), to_rational(p0))


def element_from_json(obj, field: QuadraticField | None = None):
    """Parse ``"n"``, ``"n/d"``, a number, or ``{"a":..,"b":..,"minpoly":..}``."""
    if isinstance(obj, dict):
        fld = field
        if "minpoly" in obj:
            p1, p0 = obj["minpoly"]
            fld = QuadraticField(to_rational(p1), to_rational(p0))
            if field is not None and fld != field:
                raise TorsredError("element minpoly does not match the curve base")
        if fld is None:
            raise TorsredError("quadratic element without a field")
        return fld(to_rational(obj["a"]), to_rational(obj.get("b", "0")))
    if isinstance(obj, bool) or not isinstance(obj, (int, str)):
        raise TorsredError(f"malformed field element {obj!r}")
    x = to_rational(obj)
    return field(x) if field is not None else x


def element_to_json(x) -> str | dict:
    if isinstance(x, QuadraticElement):
        return x.to_json()
    return format_rational(x)
