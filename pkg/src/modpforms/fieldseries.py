"""Truncated q-expansions over Z or a prime field, with explicit precision.

A series knows exactly how many coefficients it carries; arithmetic never
reads past that, and every binary operation returns the minimum of the
operand precisions.  Precision shortfalls raise rather than truncate
silently, because downstream rank computations would otherwise be
corrupted without a trace.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from modpforms.errors import PrecisionError, RingMismatch, UsageError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldContext:
    """Working prime field F_p.  Restricted to odd primes p >= 5."""

    p: int

    def __post_init__(self):
        if not is_prime(self.p) or self.p < 5:
            raise UsageError(f"p must be a prime >= 5, got {self.p}")

    def reduce(self, n: int) -> int:
        return n % self.p

    def inv(self, n: int) -> int:
        n %= self.p
        if n == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(n, self.p - 2, self.p)


@dataclass(frozen=True)
class QExpansion:
    """Power series sum a_n q^n known modulo q^prec.

    ``p is None`` marks exact integer coefficients; otherwise coefficients
    are residues in [0, p).
    """

    coeffs: tuple[int, ...]
    p: Optional[int] = None

    def __post_init__(self):
        if len(self.coeffs) < 1:
            raise PrecisionError("a q-expansion needs at least one coefficient")
        if self.p is not None:
            object.__setattr__(self, "coeffs", tuple(c % self.p for c in self.coeffs))
        else:
            object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def prec(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int) -> int:
        if not 0 <= n < self.prec:
            raise PrecisionError(f"coefficient {n} beyond precision {self.prec}")
        return self.coeffs[n]

    def _check_ring(self, other: "QExpansion") -> None:
        if self.p != other.p:
            raise RingMismatch(f"rings differ: {self.p} vs {other.p}")

    def _norm(self, c: int) -> int:
        return c % self.p if self.p is not None else c

    def __add__(self, other: "QExpansion") -> "QExpansion":
        self._check_ring(other)
        n = min(self.prec, other.prec)
        return QExpansion(tuple(self._norm(a + b) for a, b in zip(self.coeffs[:n], other.coeffs[:n])), self.p)

    def __sub__(self, other: "QExpansion") -> "QExpansion":
        self._check_ring(other)
        n = min(self.prec, other.prec)
        return QExpansion(tuple(self._norm(a - b) for a, b in zip(self.coeffs[:n], other.coeffs[:n])), self.p)

    def __neg__(self) -> "QExpansion":
        return QExpansion(tuple(self._norm(-a) for a in self.coeffs), self.p)

    def __mul__(self, other: Union["QExpansion", int]) -> "QExpansion":
        if isinstance(other, int):
            return self.scale(other)
        return multiply(self, other)

    __rmul__ = __mul__

    def scale(self, c: int) -> "QExpansion":
        return QExpansion(tuple(self._norm(c * a) for a in self.coeffs), self.p)

    def truncate(self, n: int) -> "QExpansion":
        if n > self.prec:
            raise PrecisionError(f"cannot extend precision {self.prec} to {n}")
        if n < 1:
            raise PrecisionError("precision must be >= 1")
        return QExpansion(self.coeffs[:n], self.p)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> Optional[int]:
        """Index of the first nonzero coefficient, or None if zero to prec."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def __repr__(self):
        ring = "Z" if self.p is None else f"F{self.p}"
        head = " ".join(str(c) for c in self.coeffs[:6])
        tail = " ..." if self.prec > 6 else ""
        return f"QExpansion({ring}, prec={self.prec}; {head}{tail})"


def zero_series(prec: int, p: Optional[int] = None) -> QExpansion:
    return QExpansion((0,) * prec, p)


def one_series(prec: int, p: Optional[int] = None) -> QExpansion:
    return QExpansion((1,) + (0,) * (prec - 1), p)


def multiply(f: QExpansion, g: QExpansion) -> QExpansion:
    """Exact product truncated to min(prec_f, prec_g)."""
    if f.p != g.p:
        raise RingMismatch(f"rings differ: {f.p} vs {g.p}")
    n = min(f.prec, g.prec)
    out = [0] * n
    for i, a in enumerate(f.coeffs[:n]):
        if a:
            for j in range(n - i):
                b = g.coeffs[j]
                if b:
                    out[i + j] += a * b
    if f.p is not None:
        out = [c % f.p for c in out]
    return QExpansion(tuple(out), f.p)


def equal_up_to(f: QExpansion, g: QExpansion, n: int) -> bool:
    """True iff coefficients 0..n-1 agree.  Errors rather than truncating."""
    if f.p != g.p:
        raise RingMismatch(f"rings differ: {f.p} vs {g.p}")
    if n < 1:
        raise UsageError("n must be >= 1")
    if f.prec < n or g.prec < n:
        raise PrecisionError(f"need {n} coefficients, have {f.prec} and {g.prec}")
    return f.coeffs[:n] == g.coeffs[:n]


def reduce_mod_p(f: QExpansion, ctx: FieldContext) -> QExpansion:
    """Coefficientwise reduction of an integer series into F_p."""
    if f.p is not None:
        raise RingMismatch("reduce_mod_p expects an integer-coefficient series")
    return QExpansion(tuple(c % ctx.p for c in f.coeffs), ctx.p)


def format_qexp(f: QExpansion, weight: int) -> str:
    """One-line text form: ``p=<p> k=<k> prec=<N>; c0 c1 ... c{N-1}``."""
    ring = "Z" if f.p is None else str(f.p)
    body = " ".join(str(c) for c in f.coeffs)
    return f"p={ring} k={weight} prec={f.prec}; {body}"


def parse_qexp(line: str) -> tuple[QExpansion, int]:
    """Inverse of format_qexp.  Returns (series, weight)."""
    try:
        head, body = line.split(";", 1)
        fields = dict(item.split("=", 1) for item in head.split())
        p = None if fields["p"] == "Z" else int(fields["p"])
        weight = int(fields["k"])
        prec = int(fields["prec"])
        coeffs = tuple(int(tok) for tok in body.split())
    except (ValueError, KeyError) as exc:
        raise UsageError(f"malformed q-expansion line: {line!r}") from exc
    if len(coeffs) != prec:
        raise UsageError(f"prec={prec} but {len(coeffs)} coefficients given")
    if p is not None and (not is_prime(p) or p < 5):
        raise UsageError(f"p must be a prime >= 5, got {p}")
    return QExpansion(coeffs, p), weight


def from_coeffs(coeffs: Iterable[int], ctx: Optional[FieldContext] = None) -> QExpansion:
    return QExpansion(tuple(coeffs), None if ctx is None else ctx.p)
