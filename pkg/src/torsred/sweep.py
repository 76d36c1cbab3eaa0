"""Parameter sweeps over the torsion families, checked against the type bounds."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import product
from pathlib import Path
from typing import Callable, Optional

import sympy

from .arith import format_rational, splitting_type, val_p
from .errors import TorsredError
from .families import FAMILY_ORDER, MARKED_POINT, family_member
from .localization import (
    LocalContext,
    classify_model,
    local_valuations,
    point_reduction,
)
from .theorems import allowed_additive_types, theorem_silent, type_family
from .weierstrass import CurvePoint, WeierstrassModel, multiply, point_order

FAMILY_PARAMS = {
    "x1-5": ("s", "t"),
    "x1-11": ("n",),
    "x1-13": ("n",),
    "tate-normal": ("b", "c"),
}

DEFAULT_RANGES = {"s": (1, 50), "t": (1, 50), "n": (1, 50), "b": (1, 20), "c": (1, 20)}


@dataclass(frozen=True)
class Assertion:
    name: str
    families: tuple[str, ...]
    p: Optional[int]
    e: Optional[int]
    description: str


ASSERTIONS = {
    a.name: a
    for a in (
        Assertion("prop4.1.i", ("x1-5",), 5, 1, "additive types lie in {II, III}"),
        Assertion("prop4.1.ii", ("x1-5",), 5, 2, "additive types lie in {II, III, IV, I0*, In*}"),
        Assertion("prop4.1.iii", ("x1-5",), 5, 3, "no row of type II*"),
        Assertion("prop4.1.iv", ("x1-5",), 5, 1,
                  "additive rows with a rational point of order 10 have type III"),
        Assertion("remark-x1-11", ("x1-11",), 11, 2, "every row has type II at the prime above 11"),
        Assertion("remark-x1-13", ("x1-13",), 13, 2, "every row has type II at the prime above 13"),
        Assertion("thm1.2-1.3-generic", tuple(FAMILY_PARAMS), None, None,
                  "additive types lie in the set allowed for the p-power torsion and v(p)"),
    )
}

_PROP41_ALLOWED = {
    "prop4.1.i": {"II", "III"},
    "prop4.1.ii": {"II", "III", "IV", "I0*", "In*"},
}


@dataclass(frozen=True)
class SweepSpec:
    family: str
    p: int
    e: int
    ranges: dict
    assertion: str
    workers: int = 1

    def __post_init__(self) -> None:
        if self.family not in FAMILY_PARAMS:
            raise TorsredError(f"unknown family {self.family!r}")
        if self.assertion not in ASSERTIONS:
            raise TorsredError(f"unknown assertion {self.assertion!r}")
        LocalContext(self.p, self.e)
        a = ASSERTIONS[self.assertion]
        if self.family not in a.families:
            raise TorsredError(f"assertion {a.name} does not apply to family {self.family}")
        if (a.p is not None and a.p != self.p) or (a.e is not None and a.e != self.e):
            raise TorsredError(f"assertion {a.name} needs p = {a.p}, e = {a.e}")
        for name in FAMILY_PARAMS[self.family]:
            lo, hi = self.ranges[name]
            if lo > hi:
                raise TorsredError(f"empty range for {name}: [{lo}, {hi}]")

    @classmethod
    def from_json(cls, obj: dict) -> SweepSpec:
        try:
            family = obj["family"]
            names = FAMILY_PARAMS.get(family)
            if names is None:
                raise TorsredError(f"unknown family {family!r}")
            ranges = {}
            for name in names:
                lo, hi = obj.get(name, DEFAULT_RANGES[name])
                ranges[name] = (int(lo), int(hi))
            return cls(
                family=family,
                p=int(obj["p"]),
                e=int(obj.get("e", 1)),
                ranges=ranges,
                assertion=obj["assertion"],
                workers=int(obj.get("workers", 1)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, TorsredError):
                raise
            raise TorsredError(f"malformed sweep spec: {exc!r}") from exc

    def with_bound(self, bound: int) -> SweepSpec:
        """Same spec with every range's upper end replaced by ``bound``."""
        ranges = {k: (lo, bound) for k, (lo, _) in self.ranges.items()}
        return SweepSpec(self.family, self.p, self.e, ranges, self.assertion, self.workers)

    def parameters(self):
        names = FAMILY_PARAMS[self.family]
        axes = [range(self.ranges[n][0], self.ranges[n][1] + 1) for n in names]
        for values in product(*axes):
            yield dict(zip(names, values))


@dataclass
class SweepRow:
    params: dict
    triple: Optional[list] = None
    kodaira_type: Optional[str] = None
    n: Optional[int] = None
    component_group: Optional[int] = None
    semistability_degree: Optional[int] = None
    flags: list = field(default_factory=list)
    verdict: str = "exempt"
    error: Optional[str] = None

    @property
    def label(self) -> Optional[str]:
        if self.kodaira_type == "In":
            return f"I{self.n}"
        if self.kodaira_type == "In*":
            return f"I{self.n}*"
        return self.kodaira_type

    def to_json(self) -> dict:
        out = {
            "params": self.params,
            "triple": self.triple,
            "type": self.kodaira_type,
            "n": self.n,
            "label": self.label,
            "component_group": self.component_group,
            "semistability_degree": self.semistability_degree,
            "flags": self.flags,
            "verdict": self.verdict,
        }
        if self.error is not None:
            out["error"] = self.error
        return out


@dataclass
class SweepReport:
    spec: SweepSpec
    rows: list

    @property
    def counterexamples(self) -> list:
        return [r for r in self.rows if r.verdict == "fail"]

    @property
    def verdict(self) -> str:
        return "fail" if self.counterexamples else "pass"

    @property
    def exit_code(self) -> int:
        return 0 if self.verdict == "pass" else 1

    def type_counts(self, additive_only: bool = False) -> dict:
        counts: dict = {}
        for r in self.rows:
            if r.kodaira_type is None:
                continue
            if additive_only and type_family(r.label) in ("I0", "In"):
                continue
            counts[r.label] = counts.get(r.label, 0) + 1
        return dict(sorted(counts.items()))

    def to_json(self) -> dict:
        spec = self.spec
        body = {
            "family": spec.family,
            "p": spec.p,
            "e": spec.e,
            "ranges": {k: list(v) for k, v in spec.ranges.items()},
            "assertion": spec.assertion,
            "assertion_statement": ASSERTIONS[spec.assertion].description,
            "verdict": self.verdict,
            "summary": {
                "rows": len(self.rows),
                "checked": sum(r.verdict in ("pass", "fail") for r in self.rows),
                "exempt": sum(r.verdict == "exempt" for r in self.rows),
                "errors": sum(r.verdict == "error" for r in self.rows),
                "types": self.type_counts(),
            },
            "counterexamples": [r.params for r in self.counterexamples],
            "rows": [r.to_json() for r in self.rows],
        }
        if spec.assertion.startswith("remark-"):
            body["note"] = "finite parameter range only; nothing is claimed beyond it"
        return body

    def csv_rows(self):
        names = FAMILY_PARAMS[self.spec.family]
        yield ("family", *names, "vc4", "vc6", "vdelta", "type", "n", "component_group", "verdict")
        for r in self.rows:
            triple = r.triple or [None, None, None]
            yield (
                self.spec.family,
                *(r.params[k] for k in names),
                *triple,
                r.label,
                r.n,
                r.component_group,
                r.verdict,
            )


def _rational_two_torsion(model: WeierstrassModel) -> list[CurvePoint]:
    """Rational points of order 2 on a model over Q."""
    b2, b4, b6 = model.invariants.b2, model.invariants.b4, model.invariants.b6
    x = sympy.Symbol("x")
    poly = sympy.Poly(4 * x**3 + sympy.Rational(b2.numerator, b2.denominator) * x**2
                      + 2 * sympy.Rational(b4.numerator, b4.denominator) * x
                      + sympy.Rational(b6.numerator, b6.denominator), x)
    points = []
    for root in sorted(poly.ground_roots()):
        xr = Fraction(int(root.p), int(root.q))
        yr = -(model.a1 * xr + model.a3) / 2
        points.append(model.point(xr, yr))
    return points


def _member(spec: SweepSpec, params: dict) -> tuple[dict, tuple]:
    """Extra derived parameters and the family member for one grid point."""
    if spec.family in ("x1-11", "x1-13"):
        # t_n = N*n - 3 makes the quadratic field ramify at N
        t = FAMILY_ORDER[spec.family] * params["n"] - 3
        return {"t": t}, family_member(spec.family, t=t)
    return {}, family_member(spec.family, **params)


def evaluate_row(spec: SweepSpec, params: dict) -> SweepRow:
    row = SweepRow(params=dict(params))
    ctx = LocalContext(spec.p, spec.e)
    try:
        derived, (field_, model) = _member(spec, params)
        row.params.update(derived)
        if field_ is not None:
            kind = splitting_type(field_, spec.p)
            row.flags.append(kind)
            if spec.assertion.startswith("remark-") and kind != "ramified":
                raise TorsredError(f"{spec.p} is {kind}, not ramified, in {field_}")
        triple = local_valuations(model, ctx)
        rec = classify_model(model, ctx)
    except TorsredError as exc:
        row.verdict = "error"
        row.error = f"{type(exc).__name__}: {exc}"
        return row
    row.triple = rec.minimal_triple.to_json()
    row.kodaira_type = rec.kodaira_type
    row.n = rec.n
    row.component_group = rec.component_group_order
    row.semistability_degree = rec.semistability_degree
    if triple != rec.minimal_triple:
        row.flags.append("non-minimal-model")

    if spec.family == "x1-5" and (val_p(params["s"], spec.p) > 0 or val_p(params["t"], spec.p) > 0):
        row.flags.append("multiplicative-exempt")
        return row
    row.verdict = _judge(spec, model, rec, row)
    return row


def _judge(spec: SweepSpec, model, rec, row: SweepRow) -> str:
    name = spec.assertion
    fam = rec.kodaira_type
    if name.startswith("remark-"):
        return "pass" if fam == "II" else "fail"
    if not rec.is_additive:
        return "exempt"
    if name in _PROP41_ALLOWED:
        return "pass" if fam in _PROP41_ALLOWED[name] else "fail"
    if name == "prop4.1.iii":
        return "pass" if fam != "II*" else "fail"
    if name == "prop4.1.iv":
        two_torsion = _rational_two_torsion(model)
        if not two_torsion:
            return "exempt"
        row.flags.append("order-10")
        ctx = LocalContext(spec.p, spec.e)
        singular = all(not point_reduction(model, ctx, Q)["nonsingular_image"] for Q in two_torsion)
        if singular:
            row.flags.append("2-torsion-reduces-to-singular-point")
        return "pass" if fam == "III" and singular else "fail"
    if name == "thm1.2-1.3-generic":
        order = FAMILY_ORDER.get(spec.family)
        if order is None:
            order = point_order(model, MARKED_POINT)
            if order is None:
                row.flags.append("marked-point-order-exceeds-cap")
                return "exempt"
        n = val_p(order, spec.p)
        if n == 0:
            row.flags.append("no-p-power-torsion")
            return "exempt"
        if theorem_silent(spec.p, n, spec.e):
            row.flags.append("theorem-silent")
        allowed = allowed_additive_types(spec.p, n, spec.e)
        return "pass" if fam in allowed else "fail"
    raise TorsredError(f"unhandled assertion {name}")


def _evaluate_packed(args) -> SweepRow:
    return evaluate_row(*args)


def run_sweep(spec: SweepSpec, progress: Callable[[int], None] | None = None) -> SweepReport:
    params = list(spec.parameters())
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            rows = list(pool.map(_evaluate_packed, ((spec, p) for p in params), chunksize=32))
    else:
        rows = []
        for i, p in enumerate(params):
            rows.append(evaluate_row(spec, p))
            if progress is not None:
                progress(i + 1)
    return SweepReport(spec, rows)


# ---------------------------------------------------------------- fixtures

def load_fixtures(path: str | Path | None = None) -> dict | None:
    """Vendored database curves; ``None`` when the fixture file is missing."""
    if path is None:
        res = resources.files("torsred").joinpath("data/fixtures.json")
        if not res.is_file():
            return None
        return json.loads(res.read_text(encoding="utf-8"))
    path = Path(path)
    if not path.is_file():
        return None
    return json.loads(path.read_text(encoding="utf-8"))


def check_fixture(entry: dict) -> dict:
    """Classify a fixture at its prime and confirm the order of its torsion point."""
    model = WeierstrassModel.from_json({"ainv": entry["ainv"]})
    ctx = LocalContext(int(entry["p"]))
    rec = classify_model(model, ctx)
    P = CurvePoint.from_json(entry["point"], model)
    order = point_order(model, P)
    out = {
        "label": entry["label"],
        "p": ctx.p,
        "type": rec.label,
        "expected_type": entry["expected_type"],
        "point": P.to_json(),
        "point_order": order,
        "expected_order": entry["point_order"],
    }
    if order is not None and order % 2 == 0:
        Q = multiply(model, order // 2, P)
        out["half_order_multiple"] = Q.to_json()
        out["half_order_reduction"] = point_reduction(model, ctx, Q)
    out["ok"] = rec.label == entry["expected_type"] and order == entry["point_order"]
    return out


def format_params(params: dict) -> str:
    return ",".join(f"{k}={format_rational(v)}" for k, v in params.items())
