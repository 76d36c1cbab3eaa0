"""Reduction types of elliptic curves with a rational point of p-power order."""

from .arith import QuadraticElement, QuadraticField, quad_val, residue_reduce, splitting_type, val_p
from .errors import TorsredError
from .localization import (
    ClassificationRecord,
    LocalContext,
    ValuationTriple,
    base_change,
    classify,
    classify_model,
    classify_triple,
    local_valuations,
    minimalize,
)
from .weierstrass import CurvePoint, ModelTransformation, WeierstrassModel, add, point_order, transform

__version__ = "0.1.0"

__all__ = [
    "ClassificationRecord",
    "CurvePoint",
    "LocalContext",
    "ModelTransformation",
    "QuadraticElement",
    "QuadraticField",
    "TorsredError",
    "ValuationTriple",
    "WeierstrassModel",
    "add",
    "base_change",
    "classify",
    "classify_model",
    "classify_triple",
    "local_valuations",
    "minimalize",
    "point_order",
    "quad_val",
    "residue_reduce",
    "splitting_type",
    "transform",
    "val_p",
]
