"""Exact-arithmetic toolkit for mod-p modular forms of level one.

Coefficients are arbitrary-precision integers or prime-field residues;
there is no floating point anywhere.  All values are immutable and all
operations are pure, so everything is safe to share between threads.
"""

from modpforms.errors import (
    BadPrime,
    ClassificationError,
    CompatibilityError,
    DegreeError,
    InputNotExact,
    InvalidDescriptor,
    InvariantViolation,
    KindError,
    MembershipError,
    ModpformsError,
    NotEigenform,
    OperatorError,
    PrecisionError,
    RingMismatch,
    ScenarioError,
    StabilityError,
    UnsupportedWeight,
    UsageError,
)
from modpforms.fieldseries import FieldContext, QExpansion, format_qexp, parse_qexp

__version__ = "0.1.0"

__all__ = [
    "FieldContext",
    "QExpansion",
    "format_qexp",
    "parse_qexp",
    "ModpformsError",
    "UsageError",
    "InvariantViolation",
    "RingMismatch",
    "PrecisionError",
    "UnsupportedWeight",
    "BadPrime",
    "KindError",
    "OperatorError",
    "NotEigenform",
    "InvalidDescriptor",
    "DegreeError",
    "InputNotExact",
    "ClassificationError",
    "ScenarioError",
    "MembershipError",
    "StabilityError",
    "CompatibilityError",
]
