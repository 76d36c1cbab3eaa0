"""Local analysis at a prime of residue characteristic >= 5.

Everything here works on valuation triples (v(c4), v(c6), v(Delta)).  For
p >= 5 a model is minimal iff v(c4) < 4 or v(c6) < 6 or v(Delta) < 12, and the
minimal triple alone determines the Kodaira type.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .arith import (
    INF,
    is_prime,
    quad_val,
    residue_reduce,
    splitting_type,
    val_p,
)
from .errors import ImpossibleTripleError, NotOnCurveError, TorsredError, UnsupportedPrimeError
from .weierstrass import CurvePoint, WeierstrassModel

# Kodaira type families; In and In* carry n >= 1.
TYPE_FAMILIES = ("I0", "In", "II", "III", "IV", "I0*", "In*", "IV*", "III*", "II*")
ADDITIVE_FAMILIES = ("II", "III", "IV", "I0*", "In*", "IV*", "III*", "II*")

SEMISTABILITY_DEGREE = {
    "I0": 1, "In": 1,
    "I0*": 2, "In*": 2,
    "IV": 3, "IV*": 3,
    "III": 4, "III*": 4,
    "II": 6, "II*": 6,
}

_FIXED_COMPONENT_GROUP = {
    "I0": 1, "II": 1, "II*": 1, "III": 2, "III*": 2, "IV": 3, "IV*": 3, "I0*": 4, "In*": 4,
}


@dataclass(frozen=True)
class LocalContext:
    """Residue prime p >= 5 and absolute ramification index e = v_K(p)."""

    p: int
    e: int = 1

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise TorsredError(f"{self.p} is not prime")
        if self.p < 5:
            raise UnsupportedPrimeError("residue characteristic must be at least 5")
        if self.e < 1:
            raise TorsredError("ramification index must be positive")


def _fmt_val(v):
    return "inf" if v == INF else int(v)


def _parse_val(v):
    if v in ("inf", None) or v == INF:
        return INF
    return int(v)


@dataclass(frozen=True)
class ValuationTriple:
    vc4: int | float
    vc6: int | float
    vdelta: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "vc4", _parse_val(self.vc4))
        object.__setattr__(self, "vc6", _parse_val(self.vc6))
        if self.vdelta == INF:
            raise TorsredError("v(Delta) must be finite")

    def scaled(self, d: int) -> ValuationTriple:
        return ValuationTriple(self.vc4 * d, self.vc6 * d, self.vdelta * d)

    def shifted(self, k: int) -> ValuationTriple:
        """Triple of the model rescaled by u with v(u) = k."""
        return ValuationTriple(self.vc4 - 4 * k, self.vc6 - 6 * k, self.vdelta - 12 * k)

    def to_json(self) -> list:
        return [_fmt_val(self.vc4), _fmt_val(self.vc6), int(self.vdelta)]

    def __iter__(self):
        return iter((self.vc4, self.vc6, self.vdelta))


@dataclass(frozen=True)
class ClassificationRecord:
    kodaira_type: str
    n: Optional[int]
    minimal_triple: ValuationTriple
    u_valuation: int
    component_group_order: int
    semistability_degree: int
    potentially_good: bool

    @property
    def label(self) -> str:
        if self.kodaira_type == "In":
            return f"I{self.n}"
        if self.kodaira_type == "In*":
            return f"I{self.n}*"
        return self.kodaira_type

    @property
    def is_additive(self) -> bool:
        return self.kodaira_type in ADDITIVE_FAMILIES

    @property
    def is_semistable(self) -> bool:
        return not self.is_additive

    def to_json(self) -> dict:
        return {
            "type": self.kodaira_type,
            "n": self.n,
            "label": self.label,
            "triple": self.minimal_triple.to_json(),
            "u_valuation": self.u_valuation,
            "component_group": self.component_group_order,
            "semistability_degree": self.semistability_degree,
            "potentially_good": self.potentially_good,
        }


def _val(x, ctx: LocalContext, field) -> int | float:
    if field is None:
        return val_p(x, ctx.p) * ctx.e
    base_e = 2 if splitting_type(field, ctx.p) == "ramified" else 1
    if ctx.e % base_e:
        raise TorsredError(
            f"ramification index {ctx.e} is not a multiple of the base field's {base_e}"
        )
    return quad_val(x, ctx.p, field) * (ctx.e // base_e)


def local_valuations(model: WeierstrassModel, ctx: LocalContext) -> ValuationTriple:
    """Valuations of c4, c6, Delta of an integral model of ``model``."""
    if model.field is not None and splitting_type(model.field, ctx.p) == "split":
        raise UnsupportedPrimeError(f"{ctx.p} splits in {model.field}: ambiguous prime")
    inv = model.invariants
    raw = ValuationTriple(
        _val(inv.c4, ctx, model.field),
        _val(inv.c6, ctx, model.field),
        _val(inv.discriminant, ctx, model.field),
    )
    # clear denominators with the smallest integral rescaling
    k = 0
    for v, w in zip(raw, (4, 6, 12)):
        if v != INF and v < 0:
            k = max(k, -(v // w))
    return raw.shifted(-k) if k else raw


def check_consistent(t: ValuationTriple) -> None:
    """Reject triples incompatible with 1728*Delta = c4^3 - c6^2 (v(1728) = 0)."""
    a, b = 3 * t.vc4, 2 * t.vc6
    if a == INF and b == INF:
        raise ImpossibleTripleError("c4 = c6 = 0 forces Delta = 0")
    if a != b:
        if t.vdelta != min(a, b):
            raise ImpossibleTripleError(
                f"impossible triple {t.to_json()}: v(Delta) must equal min(3v(c4), 2v(c6))"
            )
    elif t.vdelta < a:
        raise ImpossibleTripleError(
            f"impossible triple {t.to_json()}: v(Delta) below 3v(c4) = 2v(c6)"
        )


def minimalize(t: ValuationTriple) -> tuple[int, ValuationTriple]:
    if any(v < 0 for v in t):
        raise TorsredError(f"negative valuation in {t.to_json()}")
    k = min(v // w for v, w in zip(t, (4, 6, 12)) if v != INF)
    k = int(k)
    return k, t.shifted(k)


def _record(kind: str, n: int | None, minimal: ValuationTriple, k: int) -> ClassificationRecord:
    if kind == "In":
        group = n
    else:
        group = _FIXED_COMPONENT_GROUP[kind]
    return ClassificationRecord(
        kodaira_type=kind,
        n=n,
        minimal_triple=minimal,
        u_valuation=k,
        component_group_order=group,
        semistability_degree=SEMISTABILITY_DEGREE[kind],
        potentially_good=kind not in ("In", "In*"),
    )


def classify(minimal: ValuationTriple, u_valuation: int = 0) -> ClassificationRecord:
    """Kodaira type of a minimal triple, residue characteristic >= 5."""
    check_consistent(minimal)
    vc4, vc6, vd = minimal
    if vc4 >= 4 and vc6 >= 6 and vd >= 12:
        raise TorsredError(f"triple {minimal.to_json()} is not minimal")
    if vd == 0:
        return _record("I0", None, minimal, u_valuation)
    if vc4 == 0:
        return _record("In", vd, minimal, u_valuation)
    simple = {2: "II", 3: "III", 4: "IV", 6: "I0*"}
    if vd in simple:
        return _record(simple[vd], None, minimal, u_valuation)
    if vc4 == 2 and vd >= 7:
        return _record("In*", vd - 6, minimal, u_valuation)
    starred = {8: "IV*", 9: "III*", 10: "II*"}
    if vd in starred and vc4 >= 3:
        return _record(starred[vd], None, minimal, u_valuation)
    raise ImpossibleTripleError(f"impossible triple {minimal.to_json()}")


def classify_triple(t: ValuationTriple) -> ClassificationRecord:
    """Minimalize then classify."""
    k, minimal = minimalize(t)
    return classify(minimal, k)


def classify_model(model: WeierstrassModel, ctx: LocalContext) -> ClassificationRecord:
    return classify_triple(local_valuations(model, ctx))


def base_change(minimal: ValuationTriple, d: int, p: int | None = None) -> ClassificationRecord:
    """Type over the tame totally ramified extension of degree ``d``."""
    if d < 1:
        raise TorsredError("base change degree must be positive")
    if p is not None and d % p == 0:
        raise UnsupportedPrimeError(f"wild base change unsupported ({p} divides {d})")
    return classify_triple(minimal.scaled(d))


def point_reduction(model: WeierstrassModel, ctx: LocalContext, P: CurvePoint) -> dict:
    """Whether P lies in the kernel of reduction and whether its image is nonsingular."""
    if P.is_infinity:
        return {"in_kernel": True, "nonsingular_image": True}
    p = ctx.p
    if model.field is None:
        if ctx.e != 1:
            raise UnsupportedPrimeError(
                "coordinate reduction over Q needs e = 1; use the valuation predicates"
            )
    else:
        if splitting_type(model.field, p) != "ramified" or ctx.e != 2:
            raise UnsupportedPrimeError(
                "coordinate reduction over a quadratic field needs a ramified prime with e = 2"
            )
    if not model.is_on_curve(P):
        raise NotOnCurveError("point is not on the curve")
    raw = local_valuations(model, ctx)
    if any(_val(a, ctx, model.field) < 0 for a in model.ainvs):
        raise TorsredError("model is not integral at p")
    if minimalize(raw)[0] != 0:
        raise TorsredError("model is not minimal at p")
    x = model.coerce(P.x)
    if _val(x, ctx, model.field) < 0:
        return {"in_kernel": True, "nonsingular_image": True}
    a1, a2, a3, a4, a6 = (residue_reduce(a, p) for a in model.ainvs)
    xr, yr = residue_reduce(x, p), residue_reduce(model.coerce(P.y), p)
    dfdx = (a1 * yr - 3 * xr * xr - 2 * a2 * xr - a4) % p
    dfdy = (2 * yr + a1 * xr + a3) % p
    return {"in_kernel": False, "nonsingular_image": not (dfdx == 0 and dfdy == 0)}


def kernel_coordinate_valuations(vdelta_min: int) -> tuple[Fraction, Fraction]:
    """Valuations of x and y on the good model for a point entering the kernel."""
    if vdelta_min < 0 or vdelta_min % 12:
        raise TorsredError("v(Delta_min) over the extension must be a nonnegative multiple of 12")
    return Fraction(-vdelta_min, 6), Fraction(-vdelta_min, 4)


def torsion_not_in_kernel(vLp: int, vdelta_min: int, p: int, n: int) -> bool:
    """True when a point of order p^n cannot lie in the kernel of reduction over L."""
    return Fraction(vLp) < Fraction((p**n - p ** (n - 1)) * vdelta_min, 12)


def injective_on_torsion(vLp: int, p: int, n: int) -> bool:
    """True when reduction is injective on p^n-torsion."""
    return vLp < p ** (n - 1) * (p - 1)
