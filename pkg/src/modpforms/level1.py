"""The graded algebra of level-one modular forms over Z and F_p.

For p >= 5 the weight-k space has the monomial basis E4^a E6^b with
4a + 6b = k, and the cusp subspace is Delta times the weight-(k-12)
basis.  Membership and filtration questions reduce to linear algebra on
the leading floor(k/12)+1 coefficients, which separate forms at level
one.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from modpforms import linalg
from modpforms.errors import (
    InvariantViolation,
    MembershipError,
    PrecisionError,
    UnsupportedWeight,
    UsageError,
)
from modpforms.fieldseries import FieldContext, QExpansion, multiply, reduce_mod_p


def sturm(weight: int) -> int:
    """Number of leading coefficients that separate weight-k forms."""
    return max(weight, 0) // 12 + 1


def monomial_exponents(weight: int) -> list[tuple[int, int]]:
    """Solutions (a, b) of 4a + 6b = weight, ordered by a descending."""
    if weight < 0 or weight % 2:
        return []
    out = []
    for a in range(weight // 4, -1, -1):
        rem = weight - 4 * a
        if rem % 6 == 0:
            out.append((a, rem // 6))
    return out


def dim_full(weight: int) -> int:
    return len(monomial_exponents(weight))


def dim_cusp(weight: int) -> int:
    if weight >= 4 and weight % 2 == 0:
        return dim_full(weight) - 1
    return 0


def _sigma_series(power: int, prec: int) -> list[int]:
    sums = [0] * prec
    for d in range(1, prec):
        dk = d**power
        for m in range(d, prec, d):
            sums[m] += dk
    return sums


@lru_cache(maxsize=None)
def eisenstein(weight: int, prec: int) -> QExpansion:
    """E4 or E6 over Z: 1 + 240 sum sigma_3(n) q^n, 1 - 504 sum sigma_5(n) q^n."""
    if weight not in (4, 6):
        raise UnsupportedWeight(f"only E4 and E6 are generators, got weight {weight}")
    if prec < 1:
        raise PrecisionError("prec must be >= 1")
    if weight == 4:
        coeffs = [240 * s for s in _sigma_series(3, prec)]
    else:
        coeffs = [-504 * s for s in _sigma_series(5, prec)]
    coeffs[0] = 1
    return QExpansion(tuple(coeffs))


@lru_cache(maxsize=None)
def _euler_product(prec: int) -> QExpansion:
    """prod (1 - q^n) via the pentagonal number theorem."""
    coeffs = [0] * prec
    coeffs[0] = 1
    m = 1
    while True:
        g1 = m * (3 * m - 1) // 2
        g2 = m * (3 * m + 1) // 2
        if g1 >= prec and g2 >= prec:
            break
        sign = -1 if m % 2 else 1
        if g1 < prec:
            coeffs[g1] = sign
        if g2 < prec:
            coeffs[g2] = sign
        m += 1
    return QExpansion(tuple(coeffs))


@lru_cache(maxsize=None)
def delta(prec: int) -> QExpansion:
    """Discriminant form q prod (1 - q^n)^24 over Z."""
    if prec < 1:
        raise PrecisionError("prec must be >= 1")
    eta = _euler_product(prec)
    power = QExpansion((1,) + (0,) * (prec - 1))
    base = eta
    e = 24
    while e:
        if e & 1:
            power = multiply(power, base)
        e >>= 1
        if e:
            base = multiply(base, base)
    shifted = (0,) + power.coeffs[: prec - 1]
    return QExpansion(shifted)


@lru_cache(maxsize=None)
def _gen_mod_p(p: int, weight: int, prec: int) -> QExpansion:
    return reduce_mod_p(eisenstein(weight, prec), FieldContext(p))


@lru_cache(maxsize=None)
def _monomial_mod_p(p: int, a: int, b: int, prec: int) -> QExpansion:
    if a == 0 and b == 0:
        return QExpansion((1,) + (0,) * (prec - 1), p)
    if a > 0:
        return multiply(_monomial_mod_p(p, a - 1, b, prec), _gen_mod_p(p, 4, prec))
    return multiply(_monomial_mod_p(p, a, b - 1, prec), _gen_mod_p(p, 6, prec))


@lru_cache(maxsize=None)
def _delta_mod_p(p: int, prec: int) -> QExpansion:
    return reduce_mod_p(delta(prec), FieldContext(p))


@dataclass(frozen=True)
class FormSpace:
    """A basis of weight-k level-one forms as coefficient vectors."""

    ctx: FieldContext
    weight: int
    prec: int
    kind: str  # full | cusp | ordinary | non-ordinary
    basis: tuple[QExpansion, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coeff_matrix(self) -> list[list[int]]:
        return [list(f.coeffs) for f in self.basis]

    def element(self, coords) -> QExpansion:
        if len(coords) != self.dim:
            raise UsageError("coordinate length does not match basis size")
        out = [0] * self.prec
        for c, f in zip(coords, self.basis):
            if c % self.ctx.p:
                for i, a in enumerate(f.coeffs):
                    out[i] += c * a
        return QExpansion(tuple(v % self.ctx.p for v in out), self.ctx.p)


KINDS = ("full", "cusp", "ordinary", "non-ordinary")


@lru_cache(maxsize=None)
def _basis_cached(p: int, weight: int, kind: str, prec: int) -> FormSpace:
    ctx = FieldContext(p)
    if kind not in ("full", "cusp"):
        raise UsageError(f"basis builds kinds 'full' and 'cusp', got {kind!r}")
    if weight < 0 or weight % 2:
        return FormSpace(ctx, weight, prec, kind, ())
    if prec < sturm(weight):
        raise PrecisionError(f"prec {prec} below Sturm bound {sturm(weight)} for weight {weight}")
    if kind == "full":
        forms = tuple(_monomial_mod_p(p, a, b, prec) for a, b in monomial_exponents(weight))
    else:
        if weight < 12:
            return FormSpace(ctx, weight, prec, kind, ())
        d = _delta_mod_p(p, prec)
        forms = tuple(multiply(d, _monomial_mod_p(p, a, b, prec)) for a, b in monomial_exponents(weight - 12))
    if forms and linalg.rank([list(f.coeffs) for f in forms], p) != len(forms):
        raise InvariantViolation(f"basis vectors dependent at weight {weight}, prec {prec}")
    return FormSpace(ctx, weight, prec, kind, forms)


def basis(ctx: FieldContext, weight: int, kind: str, prec: int) -> FormSpace:
    """Monomial basis of the full space, or Delta times the weight-(k-12) basis."""
    return _basis_cached(ctx.p, weight, kind, prec)


def in_span(f: QExpansion, space: FormSpace) -> Optional[list[int]]:
    """Coordinates of f in the space's basis, or None.

    Solved at the shared precision, which must reach the Sturm bound of
    the space's weight.
    """
    if f.p != space.ctx.p:
        raise UsageError("series and space live over different fields")
    n = min(f.prec, space.prec)
    if n < sturm(space.weight):
        raise PrecisionError(f"shared precision {n} below Sturm bound {sturm(space.weight)}")
    if space.dim == 0:
        return [] if not any(f.coeffs[:n]) else None
    rows = [list(b.coeffs[:n]) for b in space.basis]
    return linalg.solve_in_span(rows, list(f.coeffs[:n]), space.ctx.p)


# Certification never needs more coefficients than this; bases at huge
# precision would cost quadratic time for no extra decision power.
CERT_PREC_CAP = 64


def _cert_prec(target_weight: int, available: int) -> int:
    need = sturm(target_weight)
    if available < need:
        raise PrecisionError(
            f"precision {available} cannot certify weight-{target_weight} membership (need {need})"
        )
    return min(available, max(need, CERT_PREC_CAP))


def hasse_multiply(ctx: FieldContext, f: QExpansion, weight: int) -> QExpansion:
    """Regard f in weight k + p - 1.  The q-expansion does not change.

    The relabeled series is certified to lie in the target span; failure
    is fatal since multiplication by the weight-(p-1) form with constant
    q-expansion 1 must land there.
    """
    target = weight + ctx.p - 1
    n = _cert_prec(target, f.prec)
    space = basis(ctx, target, "full", n)
    if in_span(f.truncate(n), space) is None:
        raise MembershipError(f"Hasse relabeling of weight {weight} not in weight-{target} span")
    return f


def filtration_value(ctx: FieldContext, f: QExpansion, weight: int) -> Optional[int]:
    """Least k0 = weight mod (p-1) with f in the weight-k0 span; None for f = 0.

    Membership is decided on the leading sturm(weight) coefficients: a
    candidate matching there extends to an exact identity of forms in
    weight `weight` after Hasse relabeling.
    """
    n = sturm(weight)
    if f.p != ctx.p:
        raise UsageError("series not over the working field")
    if f.prec < n:
        raise PrecisionError(f"filtration at weight {weight} needs {n} coefficients, have {f.prec}")
    if not any(f.coeffs[:n]):
        return None
    fn = f.truncate(n)
    k0 = weight % (ctx.p - 1)
    while k0 <= weight:
        if in_span(fn, basis(ctx, k0, "full", n)) is not None:
            return k0
        k0 += ctx.p - 1
    raise MembershipError(f"series not in any weight <= {weight} space; not a weight-{weight} form?")


@dataclass(frozen=True)
class Filtration:
    """Exact filtration weight, with a distinguished value for the zero form."""

    value: Optional[int]

    @property
    def is_zero_form(self) -> bool:
        return self.value is None

    def __str__(self):
        return "ZERO" if self.value is None else str(self.value)


def filtration(ctx: FieldContext, f: QExpansion, weight: int) -> Filtration:
    return Filtration(filtration_value(ctx, f, weight))
