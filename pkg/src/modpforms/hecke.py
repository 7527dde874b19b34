"""Hecke operators on q-expansions with explicit precision contracts.

U_ell and T_ell consume precision (output has floor(prec/ell)
coefficients), V_p multiplies it, theta preserves it.  Weight-changing
operators certify their output against the target weight's basis; a
certification failure falsifies the identity being exercised and is
raised as an invariant violation, never coerced.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from modpforms import linalg
from modpforms.errors import (
    BadPrime,
    InvariantViolation,
    MembershipError,
    NotEigenform,
    OperatorError,
    PrecisionError,
    UsageError,
)
from modpforms.fieldseries import FieldContext, QExpansion, equal_up_to, is_prime
from modpforms.level1 import FormSpace, _cert_prec, basis, in_span, sturm


@dataclass(frozen=True)
class HeckeOperatorLabel:
    """Operator tag: T(n), U(ell), Vp, Theta, or Diamond(d)."""

    tag: str
    index: Optional[int] = None

    def __post_init__(self):
        if self.tag == "T":
            if self.index is None or self.index < 1:
                raise OperatorError("T(n) requires n >= 1")
        elif self.tag == "U":
            if self.index is None or not is_prime(self.index):
                raise OperatorError("U(ell) requires ell prime")
        elif self.tag == "Diamond":
            if self.index is None or self.index < 1:
                raise OperatorError("Diamond(d) requires d >= 1")
        elif self.tag in ("Vp", "Theta"):
            if self.index is not None:
                raise OperatorError(f"{self.tag} takes no index")
        else:
            raise OperatorError(f"unknown operator tag {self.tag!r}")

    @classmethod
    def parse(cls, text: str) -> "HeckeOperatorLabel":
        t = text.strip()
        low = t.lower()
        if low == "vp":
            return cls("Vp")
        if low == "theta":
            return cls("Theta")
        if t and t[0] in "TU" and t[1:].isdigit():
            return cls(t[0], int(t[1:]))
        if low.startswith("diamond") and t[7:].isdigit():
            return cls("Diamond", int(t[7:]))
        raise OperatorError(f"cannot parse operator {text!r}")

    def __str__(self):
        if self.tag in ("Vp", "Theta"):
            return self.tag
        return f"{self.tag}{self.index}"

    def preserves_weight(self) -> bool:
        return self.tag in ("T", "U", "Diamond")


def apply_Ul(f: QExpansion, ell: int) -> QExpansion:
    """(f U_ell)(q) = sum a_{n ell} q^n.  Output precision floor(prec/ell)."""
    if not is_prime(ell):
        raise UsageError(f"U_ell needs ell prime, got {ell}")
    out_prec = f.prec // ell
    if out_prec < 1:
        raise PrecisionError(f"precision {f.prec} too small for U_{ell}")
    return QExpansion(tuple(f.coeffs[n * ell] for n in range(out_prec)), f.p)


def apply_Tl(f: QExpansion, weight: int, ell: int) -> QExpansion:
    """(f T_ell)(q) = sum a_{n ell} q^n + ell^(k-1) sum a_{n/ell} q^n.

    Level one: the diamond action is trivial, so the twist is folded into
    the ell^(k-1) factor.  For ell = p use U_p instead.
    """
    if f.p is None:
        raise UsageError("T_ell is implemented on mod-p series")
    if not is_prime(ell):
        raise UsageError(f"T_ell needs ell prime, got {ell}")
    if ell == f.p:
        raise BadPrime(f"T_{ell} at the working prime acts as U_{ell}; use apply_Ul")
    p = f.p
    out_prec = f.prec // ell
    if out_prec < 1:
        raise PrecisionError(f"precision {f.prec} too small for T_{ell}")
    twist = pow(ell, (weight - 1) % (p - 1), p)
    out = []
    for n in range(out_prec):
        c = f.coeffs[n * ell]
        if n % ell == 0:
            c += twist * f.coeffs[n // ell]
        out.append(c % p)
    return QExpansion(tuple(out), p)


def _apply_T_prime_power(f: QExpansion, weight: int, ell: int, e: int) -> QExpansion:
    """T_{ell^e} via T_{ell^{s+1}} = T_ell T_{ell^s} - ell^(k-1) T_{ell^{s-1}}."""
    p = f.p
    if ell == p:
        g = f
        for _ in range(e):
            g = apply_Ul(g, ell)
        return g
    prev = f  # T_{ell^0} f
    cur = apply_Tl(f, weight, ell)
    twist = pow(ell, (weight - 1) % (p - 1), p)
    for _ in range(e - 1):
        nxt = apply_Tl(cur, weight, ell) - prev.scale(twist)
        prev, cur = cur, nxt
    return cur


def apply_Tn(f: QExpansion, weight: int, n: int) -> QExpansion:
    """Composite T_n assembled from the prime factorization; T_1 = id."""
    if n < 1:
        raise UsageError("T_n needs n >= 1")
    if f.p is None:
        raise UsageError("T_n is implemented on mod-p series")
    if f.prec // n < 1:
        raise PrecisionError(f"precision {f.prec} too small for T_{n}")
    g = f
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            g = _apply_T_prime_power(g, weight, d, e)
        d += 1
    if m > 1:
        g = _apply_T_prime_power(g, weight, m, 1)
    return g


def apply_Vp(ctx: FieldContext, f: QExpansion, weight: int) -> QExpansion:
    """(f V_p)(q) = sum a_n q^{pn}, landing in weight p*k.

    The spread series is certified against basis(p*k); that membership is
    part of the operator's definition, so failure is fatal.
    """
    if f.p != ctx.p:
        raise UsageError("series not over the working field")
    p = ctx.p
    out_prec = p * (f.prec - 1) + 1
    out = [0] * out_prec
    for n, c in enumerate(f.coeffs):
        out[p * n] = c
    g = QExpansion(tuple(out), p)
    target = p * weight
    m = _cert_prec(target, g.prec)
    if in_span(g.truncate(m), basis(ctx, target, "full", m)) is None:
        raise MembershipError(f"V_p image of a weight-{weight} form not in weight-{target} span")
    return g


def apply_theta(ctx: FieldContext, f: QExpansion, weight: int) -> QExpansion:
    """(theta f)(q) = sum n a_n q^n, landing in weight k + p + 1.

    A certification failure here would falsify the theta operator's
    weight shift at this instance and is treated as fatal.
    """
    if f.p != ctx.p:
        raise UsageError("series not over the working field")
    p = ctx.p
    target = weight + p + 1
    if f.prec < sturm(target):
        raise PrecisionError(
            f"theta at weight {weight} needs {sturm(target)} coefficients, have {f.prec}"
        )
    g = QExpansion(tuple((n * c) % p for n, c in enumerate(f.coeffs)), p)
    m = _cert_prec(target, g.prec)
    if in_span(g.truncate(m), basis(ctx, target, "full", m)) is None:
        raise MembershipError(f"theta image of a weight-{weight} form not in weight-{target} span")
    return g


def apply_label(ctx: FieldContext, label: HeckeOperatorLabel, f: QExpansion, weight: int) -> QExpansion:
    if label.tag == "T":
        return apply_Tn(f, weight, label.index)
    if label.tag == "U":
        return apply_Ul(f, label.index)
    if label.tag == "Vp":
        return apply_Vp(ctx, f, weight)
    if label.tag == "Theta":
        return apply_theta(ctx, f, weight)
    if label.tag == "Diamond":
        return f  # trivial character at level one
    raise OperatorError(f"unknown label {label}")


def required_input_prec(labels: Sequence[HeckeOperatorLabel], out_prec: int, p: int) -> int:
    """Input precision needed so a pipeline emits out_prec coefficients.

    Folded right to left: T_n and U_n multiply the requirement by n, V_p
    divides it (rounding up), theta and diamond pass it through.
    """
    need = out_prec
    for label in reversed(labels):
        if label.tag in ("T", "U"):
            need = need * label.index
        elif label.tag == "Vp":
            need = (need - 1 + p - 1) // p + 1
    return need


def operator_matrix(space: FormSpace, label: HeckeOperatorLabel) -> list[list[int]]:
    """Matrix of a weight-preserving operator in the space's basis.

    Column j holds the coordinates of the image of the j-th basis form;
    application is matrix times coordinate column vector.
    """
    if not label.preserves_weight():
        raise OperatorError(f"{label} changes weight; no matrix on a fixed space")
    ctx = space.ctx
    d = space.dim
    cols = []
    for b in space.basis:
        image = apply_label(ctx, label, b, space.weight)
        coords = in_span(image, space)
        if coords is None:
            raise MembershipError(f"{label} does not preserve the weight-{space.weight} {space.kind} space")
        cols.append(coords)
    return [[cols[j][i] for j in range(d)] for i in range(d)]


@dataclass(frozen=True)
class FittingDecomposition:
    """U_p-stable splitting: invertible part plus nilpotent part."""

    ordinary: FormSpace
    nonordinary: FormSpace

    @property
    def weight(self) -> int:
        return self.ordinary.weight


def ord_no_decompose(space: FormSpace, up_matrix: Optional[list[list[int]]] = None) -> FittingDecomposition:
    """Fitting decomposition of a weight-k space (k >= 2) under U_p.

    ordinary = image of U_p^dim, non-ordinary = kernel of U_p^dim.
    """
    ctx = space.ctx
    if space.weight < 2:
        raise UsageError("Fitting decomposition needs weight >= 2")
    d = space.dim
    if d == 0:
        empty = FormSpace(ctx, space.weight, space.prec, "ordinary", ())
        empty_no = FormSpace(ctx, space.weight, space.prec, "non-ordinary", ())
        return FittingDecomposition(empty, empty_no)
    u = up_matrix if up_matrix is not None else operator_matrix(space, HeckeOperatorLabel("U", ctx.p))
    ud = linalg.matpow(u, d, ctx.p)
    col_basis, _ = linalg.rref(linalg.transpose(ud), ctx.p)
    ker_basis = linalg.nullspace(ud, ctx.p)
    if len(col_basis) + len(ker_basis) != d:
        raise InvariantViolation("Fitting decomposition is not a direct sum")
    if col_basis and linalg.rank([list(r) for r in col_basis] + [list(r) for r in ker_basis], ctx.p) != d:
        raise InvariantViolation("ordinary and non-ordinary parts overlap")
    ord_forms = tuple(space.element(v) for v in col_basis)
    no_forms = tuple(space.element(v) for v in ker_basis)
    ordinary = FormSpace(ctx, space.weight, space.prec, "ordinary", ord_forms)
    nonordinary = FormSpace(ctx, space.weight, space.prec, "non-ordinary", no_forms)
    return FittingDecomposition(ordinary, nonordinary)


def nonordinary_from_ordinary(
    ctx: FieldContext,
    f: QExpansion,
    weight: int,
    a_p: int,
    test_primes: Iterable[int] = (2, 3),
) -> QExpansion:
    """Build the weight-p*k non-ordinary companion of an ordinary eigenform.

    g has the q-expansion f(q) - a_p f(q^p): the weight-k form relabeled
    into weight p*k by a Hasse power, minus a_p times its V_p image.  The
    construction is certified: g lies in the weight-p*k space, U_p kills
    it, and T_ell fixes the eigenvalues a_ell(f) away from p.
    """
    p = ctx.p
    test_primes = tuple(test_primes)
    if weight < 2:
        raise NotEigenform(f"need weight >= 2, got {weight}")
    if a_p % p == 0:
        raise NotEigenform("a_p must be a unit")
    target = p * weight
    needed = max([p] + [ell for ell in test_primes]) * sturm(target)
    if f.prec < needed:
        raise PrecisionError(f"need {needed} coefficients of the eigenform, have {f.prec}")
    uf = apply_Ul(f, p)
    if not equal_up_to(uf, f.scale(a_p), uf.prec):
        raise NotEigenform("U_p f = a_p f fails at the available precision")
    vf = apply_Vp(ctx, f, weight)
    g = f - vf.scale(a_p)
    m = _cert_prec(target, g.prec)
    if in_span(g.truncate(m), basis(ctx, target, "full", m)) is None:
        raise MembershipError(f"constructed series not in the weight-{target} space")
    ug = apply_Ul(g, p)
    if any(ug.coeffs):
        raise InvariantViolation("U_p does not annihilate the constructed form")
    for ell in test_primes:
        if ell == p:
            continue
        tg = apply_Tl(g, target, ell)
        expected = g.scale(f.coeffs[ell]).truncate(tg.prec)
        if not equal_up_to(tg, expected, min(tg.prec, expected.prec)):
            raise InvariantViolation(f"T_{ell} eigenvalue not preserved by the construction")
    return g
