"""Parametrized curves with a marked torsion point at (0, 0).

Sign conventions differ between constructors on purpose: Tate normal form
reads ``y^2 + (1-c)xy - by = x^3 - bx^2`` while the X1(13) model reads
``y^2 + axy + by = x^3 + bx^2``.
"""

from __future__ import annotations

from fractions import Fraction

from .arith import QuadraticField, Scalar, rational_sqrt, to_rational
from .errors import ReducibleQuadraticError, SingularCurveError, TorsredError
from .weierstrass import CurvePoint, FieldElement, WeierstrassModel

FAMILY_ORDER = {"x1-5": 5, "x1-11": 11, "x1-13": 13}

MARKED_POINT = CurvePoint(Fraction(0), Fraction(0))


def tate_normal(b: FieldElement | Scalar, c: FieldElement | Scalar) -> WeierstrassModel:
    field = getattr(b, "field", None) or getattr(c, "field", None)
    return WeierstrassModel(1 - c, -b, -b, 0, 0, field=field)


def x1_5_c4(s, t):
    return 24 * s * t * t * (t - s) + (s * s - 6 * s * t + t * t) ** 2


def x1_5_c6(s, t):
    return -(s * s + t * t) * (s**4 - 18 * s**3 * t + 74 * s * s * t * t + 18 * s * t**3 + t**4)


def x1_5_discriminant(s, t):
    return s**5 * t**5 * (s * s - 11 * s * t - t * t)


def x1_5_model(s: Scalar, t: Scalar) -> WeierstrassModel:
    """Tate normal form with b = c = s/t, cleared by x -> x/t^2, y -> y/t^3."""
    s, t = to_rational(s), to_rational(t)
    if x1_5_discriminant(s, t) == 0:
        raise SingularCurveError(f"X1(5) member (s, t) = ({s}, {t}) is singular")
    return WeierstrassModel(t - s, -s * t, -s * t * t, 0, 0)


def x1_11_field(t: Scalar) -> QuadraticField:
    """Q(s) with s^2 - s = t^3 - t^2."""
    t = to_rational(t)
    rhs = t**3 - t**2
    root = rational_sqrt(1 + 4 * rhs)
    if root is not None:
        roots = ((1 + root) / 2, (1 - root) / 2)
        raise ReducibleQuadraticError(
            f"s^2 - s = {rhs} has rational roots {roots[0]}, {roots[1]}", roots
        )
    return QuadraticField(Fraction(-1), -rhs)


def x1_11_model(t: Scalar) -> tuple[QuadraticField, WeierstrassModel]:
    t = to_rational(t)
    field = x1_11_field(t)
    s = field.gen
    k = s * (s - 1) * (s - t)
    model = WeierstrassModel(s * t + t - s * s, k * t, k * t * t, 0, 0, field=field)
    return field, model


def x1_13_sextic(t):
    return t**6 - 2 * t**5 + t**4 - 2 * t**3 + 6 * t**2 - 4 * t + 1


def x1_13_field(t: Scalar) -> QuadraticField:
    """Q(s) with s^2 equal to the X1(13) sextic in t."""
    t = to_rational(t)
    if t == 0:
        raise TorsredError("X1(13) model is undefined at t = 0")
    d = x1_13_sextic(t)
    root = rational_sqrt(d)
    if root is not None:
        raise ReducibleQuadraticError(f"sextic value {d} is a rational square", (root, -root))
    return QuadraticField(Fraction(0), -d)


def x1_13_model(t: Scalar) -> tuple[QuadraticField, WeierstrassModel]:
    t = to_rational(t)
    field = x1_13_field(t)
    s = field.gen
    a = ((t - 1) ** 2 * (t * t + t - 1) * s
         - t**7 + 2 * t**6 + 3 * t**5 - 2 * t**4 - 5 * t**3 + 9 * t * t - 5 * t + 1) / (2 * t**5)
    b = (t - 1) ** 2 * (
        (t**5 + 2 * t**4 - 5 * t * t + 4 * t - 1) * s
        - t**8 - t**7 + 4 * t**6 + 2 * t**5 + t**4 - 13 * t**3 + 14 * t * t - 6 * t + 1
    ) / (2 * t**9)
    return field, WeierstrassModel(a, b, b, 0, 0, field=field)


def family_member(family: str, **params) -> tuple[QuadraticField | None, WeierstrassModel]:
    """Build a member of ``family`` from keyword parameters (s, t, b, c)."""
    if family == "x1-5":
        return None, x1_5_model(params["s"], params["t"])
    if family == "x1-11":
        return x1_11_model(params["t"])
    if family == "x1-13":
        return x1_13_model(params["t"])
    if family == "tate-normal":
        return None, tate_normal(to_rational(params["b"]), to_rational(params["c"]))
    raise TorsredError(f"unknown family {family!r}")
