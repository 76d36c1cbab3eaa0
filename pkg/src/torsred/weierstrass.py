"""Weierstrass models, changes of coordinates and the group law."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import NamedTuple, Optional, Union

from .arith import (
    QuadraticElement,
    QuadraticField,
    element_from_json,
    element_to_json,
    field_from_json,
    to_rational,
)
from .errors import NotOnCurveError, SingularCurveError, TorsredError

FieldElement = Union[Fraction, QuadraticElement]

DEFAULT_MAX_ORDER = 200


def _coerce(field: QuadraticField | None, x) -> FieldElement:
    if isinstance(x, QuadraticElement):
        if field is None or x.field != field:
            raise TorsredError("coefficient does not belong to the model's base field")
        return x
    x = to_rational(x)
    return field(x) if field is not None else x


class Invariants(NamedTuple):
    b2: FieldElement
    b4: FieldElement
    b6: FieldElement
    b8: FieldElement
    c4: FieldElement
    c6: FieldElement
    discriminant: FieldElement
    j: FieldElement


@dataclass(frozen=True)
class WeierstrassModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Q or a quadratic field."""

    a1: FieldElement
    a2: FieldElement
    a3: FieldElement
    a4: FieldElement
    a6: FieldElement
    field: Optional[QuadraticField] = None

    def __post_init__(self) -> None:
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, _coerce(self.field, getattr(self, name)))
        if self.invariants.discriminant == 0:
            raise SingularCurveError(f"singular Weierstrass equation {self.ainvs}")

    @classmethod
    def from_ainvs(cls, ainvs, field: QuadraticField | None = None) -> WeierstrassModel:
        if len(ainvs) != 5:
            raise TorsredError("expected five a-invariants [a1, a2, a3, a4, a6]")
        return cls(*ainvs, field=field)

    @property
    def ainvs(self) -> tuple:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def coerce(self, x) -> FieldElement:
        return _coerce(self.field, x)

    @cached_property
    def invariants(self) -> Invariants:
        a1, a2, a3, a4, a6 = self.ainvs
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        c4 = b2 * b2 - 24 * b4
        c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
        disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
        j = c4 * c4 * c4 / disc if disc != 0 else None
        return Invariants(b2, b4, b6, b8, c4, c6, disc, j)

    @property
    def c4(self) -> FieldElement:
        return self.invariants.c4

    @property
    def c6(self) -> FieldElement:
        return self.invariants.c6

    @property
    def discriminant(self) -> FieldElement:
        return self.invariants.discriminant

    @property
    def j(self) -> FieldElement:
        return self.invariants.j

    def is_on_curve(self, P: CurvePoint) -> bool:
        if P.is_infinity:
            return True
        x, y = self.coerce(P.x), self.coerce(P.y)
        a1, a2, a3, a4, a6 = self.ainvs
        return y * y + a1 * x * y + a3 * y == x * x * x + a2 * x * x + a4 * x + a6

    def point(self, x, y) -> CurvePoint:
        P = CurvePoint(self.coerce(x), self.coerce(y))
        if not self.is_on_curve(P):
            raise NotOnCurveError(f"({x}, {y}) is not on {self}")
        return P

    def to_json(self) -> dict:
        base = self.field.to_json() if self.field is not None else {"kind": "rational"}
        return {"base": base, "ainv": [element_to_json(a) for a in self.ainvs]}

    @classmethod
    def from_json(cls, obj: dict) -> WeierstrassModel:
        try:
            field = field_from_json(obj.get("base"))
            ainv = [element_from_json(a, field) for a in obj["ainv"]]
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, TorsredError):
                raise
            raise TorsredError(f"malformed curve JSON: {exc}") from exc
        return cls.from_ainvs(ainv, field)

    def __str__(self) -> str:
        return "y^2 + ({})xy + ({})y = x^3 + ({})x^2 + ({})x + ({})".format(*self.ainvs)


@dataclass(frozen=True)
class CurvePoint:
    """An affine point (x, y), or the point at infinity when both are ``None``."""

    x: Optional[FieldElement] = None
    y: Optional[FieldElement] = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def to_json(self):
        if self.is_infinity:
            return "infinity"
        return {"x": element_to_json(self.x), "y": element_to_json(self.y)}

    @classmethod
    def from_json(cls, obj, model: WeierstrassModel) -> CurvePoint:
        if obj == "infinity":
            return INFINITY
        return model.point(
            element_from_json(obj["x"], model.field), element_from_json(obj["y"], model.field)
        )


INFINITY = CurvePoint()


@dataclass(frozen=True)
class ModelTransformation:
    """x = u^2 x' + r,  y = u^3 y' + s u^2 x' + t."""

    u: FieldElement
    r: FieldElement = Fraction(0)
    s: FieldElement = Fraction(0)
    t: FieldElement = Fraction(0)

    def __post_init__(self) -> None:
        for name in ("u", "r", "s", "t"):
            v = getattr(self, name)
            if not isinstance(v, QuadraticElement):
                object.__setattr__(self, name, to_rational(v))
        if self.u == 0:
            raise TorsredError("transformation with u = 0")

    def compose(self, other: ModelTransformation) -> ModelTransformation:
        """Apply ``self`` first, then ``other`` to the resulting model."""
        u1, r1, s1, t1 = self.u, self.r, self.s, self.t
        u2, r2, s2, t2 = other.u, other.r, other.s, other.t
        return ModelTransformation(
            u1 * u2,
            u1 * u1 * r2 + r1,
            u1 * s2 + s1,
            u1 * u1 * u1 * t2 + s1 * u1 * u1 * r2 + t1,
        )

    def inverse(self) -> ModelTransformation:
        u, r, s, t = self.u, self.r, self.s, self.t
        return ModelTransformation(1 / u, -r / (u * u), -s / u, (r * s - t) / (u * u * u))


IDENTITY = ModelTransformation(Fraction(1))


def transform(model: WeierstrassModel, T: ModelTransformation) -> WeierstrassModel:
    a1, a2, a3, a4, a6 = model.ainvs
    u, r, s, t = (model.coerce(v) for v in (T.u, T.r, T.s, T.t))
    u2 = u * u
    u3 = u2 * u
    return WeierstrassModel(
        (a1 + 2 * s) / u,
        (a2 - s * a1 + 3 * r - s * s) / u2,
        (a3 + r * a1 + 2 * t) / u3,
        (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / (u2 * u2),
        (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) / (u3 * u3),
        field=model.field,
    )


def transform_point(model: WeierstrassModel, T: ModelTransformation, P: CurvePoint) -> CurvePoint:
    """Image of ``P`` on ``transform(model, T)``."""
    if P.is_infinity:
        return INFINITY
    u, r, s, t = (model.coerce(v) for v in (T.u, T.r, T.s, T.t))
    x, y = model.coerce(P.x), model.coerce(P.y)
    xr = x - r
    return CurvePoint(xr / (u * u), (y - s * xr - t) / (u * u * u))


def negate(model: WeierstrassModel, P: CurvePoint) -> CurvePoint:
    if P.is_infinity:
        return P
    return CurvePoint(P.x, -P.y - model.a1 * P.x - model.a3)


def _check(model: WeierstrassModel, P: CurvePoint) -> CurvePoint:
    if P.is_infinity:
        return P
    if not model.is_on_curve(P):
        raise NotOnCurveError(f"point {P.to_json()} is not on the curve")
    return CurvePoint(model.coerce(P.x), model.coerce(P.y))


def _add(model: WeierstrassModel, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    a1, a2, a3, a4, a6 = model.ainvs
    x1, y1 = P.x, P.y
    x2, y2 = Q.x, Q.y
    if x1 == x2:
        if y1 + y2 + a1 * x2 + a3 == 0:
            return INFINITY
        den = 2 * y1 + a1 * x1 + a3
        lam = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) / den
        nu = (-x1 * x1 * x1 + a4 * x1 + 2 * a6 - a3 * y1) / den
    else:
        den = x2 - x1
        lam = (y2 - y1) / den
        nu = (y1 * x2 - y2 * x1) / den
    x3 = lam * lam + a1 * lam - a2 - x1 - x2
    y3 = -(lam + a1) * x3 - nu - a3
    return CurvePoint(x3, y3)


def add(model: WeierstrassModel, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    return _add(model, _check(model, P), _check(model, Q))


def multiply(model: WeierstrassModel, n: int, P: CurvePoint) -> CurvePoint:
    """n*P by double-and-add."""
    P = _check(model, P)
    if n < 0:
        n, P = -n, negate(model, P)
    result = INFINITY
    while n:
        if n & 1:
            result = _add(model, result, P)
        P = _add(model, P, P)
        n >>= 1
    return result


def point_order(model: WeierstrassModel, P: CurvePoint, max_order: int = DEFAULT_MAX_ORDER) -> int | None:
    """Smallest n >= 1 with nP = O, or ``None`` if it exceeds ``max_order``."""
    P = _check(model, P)
    Q = P
    for n in range(1, max_order + 1):
        if Q.is_infinity:
            return n
        Q = _add(model, Q, P)
    return None
