"""Hecke algebras as matrix algebras, duality pairings, and quotient spaces.

The full algebra T(M) is generated by T_ell for small primes ell plus
U_p; the anemic algebra T^p(M) omits everything at p.  Their dimension
gap is measured three independent ways (algebra closure, V_p-image
intersection, a lower-weight dimension), and quotient spaces by Hasse
multiples carry induced operators whose characteristic polynomials feed
the periodicity, twist, and k-versus-pk comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from modpforms import linalg
from modpforms.errors import (
    KindError,
    MembershipError,
    PrecisionError,
    StabilityError,
    UsageError,
)
from modpforms.fieldseries import FieldContext, QExpansion, is_prime
from modpforms.hecke import HeckeOperatorLabel, operator_matrix, ord_no_decompose
from modpforms.level1 import FormSpace, basis, in_span, sturm


def primes_up_to(bound: int) -> list[int]:
    return [n for n in range(2, bound + 1) if is_prime(n)]


def default_prime_bound(weight: int) -> int:
    return max(sturm(weight), 7)


def generator_labels(ctx: FieldContext, prime_bound: int, include_p: bool) -> tuple[HeckeOperatorLabel, ...]:
    labels = [HeckeOperatorLabel("T", ell) for ell in primes_up_to(prime_bound) if ell != ctx.p]
    if include_p:
        labels.append(HeckeOperatorLabel("U", ctx.p))
    return tuple(labels)


@dataclass(frozen=True)
class HeckeAlgebra:
    """Unital matrix algebra generated by chosen operators on a form space."""

    ambient: FormSpace
    generators: tuple[HeckeOperatorLabel, ...]
    include_p: bool
    basis_matrices: tuple[tuple[tuple[int, ...], ...], ...]
    degenerate: bool = False

    @property
    def dim(self) -> int:
        return len(self.basis_matrices)


def _flatten(mat: Sequence[Sequence[int]]) -> list[int]:
    return [x for row in mat for x in row]


def generate_algebra(space: FormSpace, prime_bound: int, include_p: bool) -> HeckeAlgebra:
    """Span-closure of the unital algebra generated by the operator matrices.

    Fixed-point iteration on pairwise products; the dimension is bounded
    by dim(space)^2 so it terminates.  Deterministic processing order
    keeps the resulting basis reproducible.
    """
    ctx = space.ctx
    labels = generator_labels(ctx, prime_bound, include_p)
    d = space.dim
    if d == 0:
        return HeckeAlgebra(space, labels, include_p, (), degenerate=True)
    p = ctx.p
    span = linalg.RowSpan(d * d, p)
    mats: list[list[list[int]]] = []

    def push(m) -> None:
        if span.add(_flatten(m)):
            mats.append([list(row) for row in m])

    push(linalg.identity(d))
    for label in labels:
        push(operator_matrix(space, label))
    grew = True
    while grew:
        grew = False
        snapshot = list(mats)
        before = len(mats)
        for a in snapshot:
            for b in snapshot:
                prod = linalg.matmul(a, b, p)
                push(prod)
        if len(mats) > before:
            grew = True
    frozen = tuple(tuple(tuple(row) for row in m) for m in mats)
    return HeckeAlgebra(space, labels, include_p, frozen)


def _is_cusp_like(space: FormSpace) -> bool:
    return space.kind != "full" and all(f.coeffs[0] == 0 for f in space.basis)


def vp_intersection_dim(space: FormSpace) -> int:
    """dim of the subspace of forms supported on q-powers divisible by p.

    Sound at precision >= sturm(weight + p + 1): such a truncated vector
    is killed by theta as a form, hence lies in the V_p image.
    """
    ctx = space.ctx
    need = sturm(space.weight + ctx.p + 1)
    if space.prec < need:
        raise PrecisionError(f"V_p intersection at weight {space.weight} needs precision {need}")
    if space.dim == 0:
        return 0
    cols = [n for n in range(need) if n % ctx.p]
    condition = [[f.coeffs[n] for n in cols] for f in space.basis]
    return space.dim - linalg.rank(linalg.transpose(condition), ctx.p)


@dataclass(frozen=True)
class DualityVerdict:
    rank: int
    dim_space: int
    dim_algebra: int
    dim_vp_intersection: int
    perfect: bool


def duality_pairing(alg: HeckeAlgebra, space: FormSpace) -> tuple[list[list[int]], DualityVerdict]:
    """Pairing matrix P[i][j] = a_1(T_i f_j) and its rank verdict.

    Full algebras must pair perfectly (rank = dim space); anemic algebras
    must realize rank = dim space minus the V_p-supported part.
    """
    if not _is_cusp_like(space):
        raise KindError("duality pairing is defined on cusp-kind spaces")
    if space.prec < 2:
        raise PrecisionError("need the q^1 coefficient for the pairing")
    p = space.ctx.p
    a1 = [f.coeffs[1] for f in space.basis]
    pairing = [
        [sum(mat[m][j] * a1[m] for m in range(space.dim)) % p for j in range(space.dim)]
        for mat in alg.basis_matrices
    ]
    r = linalg.rank(pairing, p) if pairing else 0
    inter = vp_intersection_dim(space)
    if alg.include_p:
        perfect = r == space.dim == alg.dim
    else:
        perfect = r == alg.dim == space.dim - inter
    return pairing, DualityVerdict(r, space.dim, alg.dim, inter, perfect)


def j_of_k(p: int, k: int) -> Optional[int]:
    """Largest j >= 0 with j = k mod (p-1) and p*j <= k, or None."""
    j = k // p
    while j >= 0 and (j - k) % (p - 1):
        j -= 1
    return j if j >= 0 else None


@dataclass(frozen=True)
class CokernelReport:
    weight: int
    kind: str
    dim_full: int
    dim_anemic: int
    dim_cokernel: int
    j_of_k: Optional[int]
    dim_weight_j_space: int
    dim_vp_intersection: int
    verdict: bool


def _cusp_kind_space(ctx: FieldContext, k: int, kind: str, prec: int) -> FormSpace:
    cusp = basis(ctx, k, "cusp", prec)
    if kind == "cusp":
        return cusp
    if kind == "cusp-nonordinary":
        if k < 2 or cusp.dim == 0:
            return FormSpace(ctx, k, prec, "non-ordinary", ())
        return ord_no_decompose(cusp).nonordinary
    raise UsageError(f"unknown kind {kind!r}")


def cokernel_report(ctx: FieldContext, k: int, kind: str = "cusp", prime_bound: Optional[int] = None) -> CokernelReport:
    """Three independent computations of dim T - dim T^p on the weight-k space.

    Algebra closure, explicit intersection with the V_p image, and the
    dimension of the weight-j(k) space of the same kind must agree.
    """
    if k < 4 or k % 2:
        raise UsageError("cokernel report needs even weight >= 4")
    p = ctx.p
    bound = prime_bound if prime_bound is not None else default_prime_bound(k)
    prec = max(bound, p) * sturm(k)
    prec = max(prec, sturm(k + p + 1))
    space = _cusp_kind_space(ctx, k, kind, prec)
    alg_full = generate_algebra(space, bound, include_p=True)
    alg_anemic = generate_algebra(space, bound, include_p=False)
    dim_coker = alg_full.dim - alg_anemic.dim
    j = j_of_k(p, k)
    if j is None:
        dim_j = 0
    else:
        prec_j = max(p * sturm(j), sturm(j + p + 1))
        dim_j = _cusp_kind_space(ctx, j, kind, prec_j).dim
    inter = vp_intersection_dim(space)
    return CokernelReport(
        weight=k,
        kind=kind,
        dim_full=alg_full.dim,
        dim_anemic=alg_anemic.dim,
        dim_cokernel=dim_coker,
        j_of_k=j,
        dim_weight_j_space=dim_j,
        dim_vp_intersection=inter,
        verdict=(dim_coker == dim_j == inter),
    )


class SerreQuotientSpace:
    """Weight-k forms modulo Hasse multiples of weight k-(p-1).

    Operators away from p descend to the quotient; an operator failing to
    preserve the submodule falsifies the construction and raises.
    """

    def __init__(self, ctx: FieldContext, weight: int, prec: Optional[int] = None):
        if weight < 0:
            raise UsageError("weight must be >= 0")
        self.ctx = ctx
        self.weight = weight
        p = ctx.p
        if prec is None:
            prec = max(default_prime_bound(weight), 2) * sturm(weight)
        self.prec = prec
        self.ambient = basis(ctx, weight, "full", prec)
        sub = basis(ctx, weight - (p - 1), "full", prec)
        coords = []
        for g in sub.basis:
            c = in_span(g, self.ambient)
            if c is None:
                raise MembershipError(
                    f"Hasse multiple of weight {weight - (p - 1)} missing from weight {weight}"
                )
            coords.append(c)
        self._sub = linalg.RowSpan(self.ambient.dim, p)
        for c in coords:
            self._sub.add(c)
        self.sub_dim = self._sub.dim
        pivots = set(self._sub.pivots)
        self.section = tuple(j for j in range(self.ambient.dim) if j not in pivots)

    @property
    def dim(self) -> int:
        return self.ambient.dim - self.sub_dim

    def quotient_coords(self, ambient_coords: Sequence[int]) -> list[int]:
        red = self._sub.reduce(ambient_coords)
        return [red[j] for j in self.section]

    def induced_matrix(self, label: HeckeOperatorLabel) -> list[list[int]]:
        if label.tag == "U" and label.index == self.ctx.p:
            raise UsageError("only operators away from p descend to the quotient")
        amb = operator_matrix(self.ambient, label)
        p = self.ctx.p
        for row in self._sub.rows:
            image = linalg.matvec(amb, row, p)
            if any(self._sub.reduce(image)):
                raise StabilityError(f"{label} does not preserve the Hasse submodule at weight {self.weight}")
        cols = []
        for j in self.section:
            col = [amb[i][j] for i in range(self.ambient.dim)]
            cols.append(self.quotient_coords(col))
        d = self.dim
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def charpoly(self, label: HeckeOperatorLabel) -> tuple[int, ...]:
        return linalg.charpoly(self.induced_matrix(label), self.ctx.p)


def serre_quotient(ctx: FieldContext, weight: int, prec: Optional[int] = None) -> SerreQuotientSpace:
    return SerreQuotientSpace(ctx, weight, prec)


@dataclass(frozen=True)
class ComparisonReport:
    weight_a: int
    weight_b: int
    dim_a: int
    dim_b: int
    charpoly_a: tuple[int, ...]
    charpoly_b: tuple[int, ...]
    verdict: bool


def periodicity_check(ctx: FieldContext, k: int, label: HeckeOperatorLabel) -> ComparisonReport:
    """Induced operator on S(k) versus S(k + p^2 - 1): equal charpolys."""
    k2 = k + ctx.p**2 - 1
    n = label.index if label.tag in ("T", "U") else 1
    qa = serre_quotient(ctx, k, n * sturm(k) if k else n)
    qb = serre_quotient(ctx, k2, n * sturm(k2))
    ca, cb = qa.charpoly(label), qb.charpoly(label)
    return ComparisonReport(k, k2, qa.dim, qb.dim, ca, cb, qa.dim == qb.dim and ca == cb)


def twist_check(ctx: FieldContext, k: int, ell: int) -> ComparisonReport:
    """S(k) twisted into S(k + p + 1): eigenvalues of T_ell scale by ell.

    Verified through the charpoly identity c_b(x) = ell^dim * c_a(x/ell).
    """
    if ell == ctx.p or not is_prime(ell):
        raise UsageError("twist check needs a prime ell away from p")
    p = ctx.p
    k2 = k + p + 1
    label = HeckeOperatorLabel("T", ell)
    qa = serre_quotient(ctx, k, max(ell * sturm(k), 1))
    qb = serre_quotient(ctx, k2, ell * sturm(k2))
    ca, cb = qa.charpoly(label), qb.charpoly(label)
    if qa.dim != qb.dim:
        return ComparisonReport(k, k2, qa.dim, qb.dim, ca, cb, False)
    d = qa.dim
    transformed = tuple((ca[i] * pow(ell, d - i, p)) % p for i in range(d + 1))
    return ComparisonReport(k, k2, qa.dim, qb.dim, ca, cb, transformed == cb)


def k_pk_check(ctx: FieldContext, k: int, ell: int) -> ComparisonReport:
    """S(k) versus S(pk): same dimension and same T_ell charpoly."""
    if ell == ctx.p or not is_prime(ell):
        raise UsageError("k vs pk check needs a prime ell away from p")
    k2 = ctx.p * k
    label = HeckeOperatorLabel("T", ell)
    qa = serre_quotient(ctx, k, max(ell * sturm(k), 1))
    qb = serre_quotient(ctx, k2, ell * sturm(k2))
    ca, cb = qa.charpoly(label), qb.charpoly(label)
    return ComparisonReport(k, k2, qa.dim, qb.dim, ca, cb, qa.dim == qb.dim and ca == cb)


def socle_dim(ctx: FieldContext, k: int, eigensystem: dict[int, int], prec: Optional[int] = None) -> int:
    """dim of the simultaneous eigenspace in S(k) for the given T_ell values."""
    if not eigensystem:
        raise UsageError("eigensystem must specify at least one prime")
    p = ctx.p
    max_ell = max(eigensystem)
    if prec is None:
        prec = max(max_ell * sturm(k), 1)
    quot = serre_quotient(ctx, k, prec)
    if quot.dim == 0:
        return 0
    stacked: list[list[int]] = []
    for ell in sorted(eigensystem):
        if ell == p or not is_prime(ell):
            raise UsageError(f"eigensystem primes must avoid p and be prime, got {ell}")
        lam = eigensystem[ell] % p
        m = quot.induced_matrix(HeckeOperatorLabel("T", ell))
        for i, row in enumerate(m):
            shifted = list(row)
            shifted[i] = (shifted[i] - lam) % p
            stacked.append(shifted)
    return len(linalg.nullspace(stacked, p))


def hasse_restriction_surjects(ctx: FieldContext, k: int, prime_bound: Optional[int] = None) -> bool:
    """Restricting T(S_{k+p-1}) along the Hasse image of S_k lands onto T(S_k).

    Each algebra basis matrix must preserve the embedded copy of S_k, and
    the restricted matrices must span the full algebra of the smaller
    space.  Restriction of a well-defined action is automatically an
    algebra map, so the span comparison is the whole check.
    """
    p = ctx.p
    k2 = k + p - 1
    bound = prime_bound if prime_bound is not None else max(default_prime_bound(k2), p)
    prec = max(bound, p) * sturm(k2)
    small = basis(ctx, k, "cusp", prec)
    big = basis(ctx, k2, "cusp", prec)
    if small.dim == 0:
        return True
    embed = []
    for f in small.basis:
        c = in_span(f, big)
        if c is None:
            raise MembershipError(f"Hasse image of S_{k} missing from S_{k2}")
        embed.append(c)
    alg_big = generate_algebra(big, bound, include_p=True)
    alg_small = generate_algebra(small, bound, include_p=True)
    restricted_span = linalg.RowSpan(small.dim**2, p)
    for mat in alg_big.basis_matrices:
        images = [linalg.matvec([list(r) for r in mat], e, p) for e in embed]
        rest_cols = []
        for img in images:
            c = linalg.solve_in_span(embed, img, p)
            if c is None:
                raise StabilityError(f"operator does not preserve the Hasse image of S_{k}")
            rest_cols.append(c)
        rest = [[rest_cols[j][i] for j in range(small.dim)] for i in range(small.dim)]
        restricted_span.add(_flatten(rest))
    target_span = linalg.RowSpan(small.dim**2, p)
    for mat in alg_small.basis_matrices:
        target_span.add(_flatten(mat))
    if restricted_span.dim != target_span.dim:
        return False
    return all(target_span.contains(row) for row in restricted_span.rows)


@lru_cache(maxsize=None)
def delta_eigensystem(p: int, primes: tuple[int, ...] = (2, 3)) -> dict[int, int]:
    """T_ell eigenvalues of the discriminant form reduced mod p."""
    from modpforms.level1 import delta

    prec = max(primes) + 1
    d = delta(prec)
    return {ell: d.coeffs[ell] % p for ell in primes if ell != p}
