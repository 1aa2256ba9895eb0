"""Fundamental solutions of higher-order heat-type equations, their stable
subordinations and the related fractional equations."""

from .core import (
    DEFAULT_CONTROLS,
    EquationOrder,
    EvalRequest,
    EvalResult,
    GenGammaLaw,
    InvalidOrderError,
    InvalidTimeError,
    Method,
    MethodRangeError,
    NumericControls,
    NumericError,
    OracleFailure,
    PointResult,
    PoleError,
    PseudoHeatError,
    RangeError,
    StableLaw,
    derive_constants,
)
from .kernels import evaluate, evaluate_point, u

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CONTROLS",
    "EquationOrder",
    "EvalRequest",
    "EvalResult",
    "GenGammaLaw",
    "InvalidOrderError",
    "InvalidTimeError",
    "Method",
    "MethodRangeError",
    "NumericControls",
    "NumericError",
    "OracleFailure",
    "PointResult",
    "PoleError",
    "PseudoHeatError",
    "RangeError",
    "StableLaw",
    "derive_constants",
    "evaluate",
    "evaluate_point",
    "u",
]
