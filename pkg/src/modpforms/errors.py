"""Exception hierarchy.

Two families matter downstream: precondition/usage failures (CLI exit 2)
and invariant violations (CLI exit 1).  An invariant violation means a
mathematical identity that is supposed to hold was falsified by an exact
computation; it is never recoverable.
"""


class ModpformsError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(ModpformsError):
    """A precondition on inputs was not met.  CLI exit code 2."""


class InvariantViolation(ModpformsError):
    """An exact identity failed numerically.  CLI exit code 1."""


class RingMismatch(UsageError):
    """Operands live over different coefficient rings."""


class PrecisionError(UsageError):
    """Not enough q-expansion coefficients for the requested operation."""


class UnsupportedWeight(UsageError):
    """Weight outside the range an operation supports."""


class BadPrime(UsageError):
    """A prime argument conflicts with the working characteristic."""


class KindError(UsageError):
    """A form space of the wrong kind was supplied."""


class OperatorError(UsageError):
    """Operator label invalid or not applicable in this context."""


class NotEigenform(UsageError):
    """Eigenform precondition failed numerically."""


class InvalidDescriptor(UsageError):
    """Residual-representation descriptor violates its constraints."""


class DegreeError(UsageError):
    """Truncation degree too small for the requested computation."""


class InputNotExact(UsageError):
    """A supplied sequence of maps fails exactness at some index."""

    def __init__(self, index, message=""):
        self.index = index
        super().__init__(message or f"input sequence not exact at index {index}")


class ClassificationError(UsageError):
    """Module isomorphism testing is ambiguous over this base ring."""


class ScenarioError(UsageError):
    """Malformed scenario or presentation file."""


class MembershipError(InvariantViolation):
    """A series that must lie in a form space does not."""


class StabilityError(InvariantViolation):
    """A subspace that must be operator-stable is not."""


class CompatibilityError(InvariantViolation):
    """Transition maps of an inverse system fail to commute."""
