"""Serre weights from symbolic descriptors of a local mod-p representation.

A descriptor records the inertia shape (semisimple exponents or a wild
extension), the ramification flags, and nothing Galois-cohomological:
the tres/peu ramifiee distinction is an input bit, not derived.  The
weight recipes are case formulas; the scan cross-checks the least weight
carrying a non-ordinary eigenform against them without asserting the
correspondence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from modpforms.errors import InvalidDescriptor, UsageError
from modpforms.fieldseries import FieldContext, is_prime
from modpforms.hecke import HeckeOperatorLabel, operator_matrix, ord_no_decompose
from modpforms.level1 import basis, sturm

CASES = ("irreducible", "tame-reducible", "wild")
SHAPES = ("generic", "eps_b_extension_of_1_ramified", "unramified")


@dataclass(frozen=True)
class ResidualDescriptor:
    """Inertia data feeding the weight recipes.

    irreducible: exponents 0 <= a < b <= p-1 of the two fundamental
    characters.  tame-reducible: cyclotomic exponents 0 <= a <= b <= p-2.
    wild: an extension of eps^alpha by eps^beta with alpha in [0, p-2],
    beta in [1, p-1], plus the cyclotomic-ratio and tres-ramifiee flags.
    """

    p: int
    case: str
    a: int = 0
    b: int = 0
    alpha: Optional[int] = None
    beta: Optional[int] = None
    ratio_is_cyclotomic: bool = False
    tres_ramifiee: bool = False
    unramified_shape: str = "generic"

    def __post_init__(self):
        p = self.p
        if not is_prime(p) or p < 5:
            raise InvalidDescriptor(f"p must be a prime >= 5, got {p}")
        if self.case not in CASES:
            raise InvalidDescriptor(f"case must be one of {CASES}, got {self.case!r}")
        if self.unramified_shape not in SHAPES:
            raise InvalidDescriptor(f"unknown shape {self.unramified_shape!r}")
        if self.case == "irreducible":
            if not (0 <= self.a < self.b <= p - 1):
                raise InvalidDescriptor(f"irreducible case needs 0 <= a < b <= p-1, got ({self.a},{self.b})")
            if self.ratio_is_cyclotomic or self.tres_ramifiee:
                raise InvalidDescriptor("wild flags are meaningless in the irreducible case")
        elif self.case == "tame-reducible":
            if not (0 <= self.a <= self.b <= p - 2):
                raise InvalidDescriptor(f"tame case needs 0 <= a <= b <= p-2, got ({self.a},{self.b})")
            if self.ratio_is_cyclotomic or self.tres_ramifiee:
                raise InvalidDescriptor("wild flags are meaningless in the tame case")
        else:
            if self.alpha is None or self.beta is None:
                raise InvalidDescriptor("wild case needs alpha and beta")
            if not (0 <= self.alpha <= p - 2 and 1 <= self.beta <= p - 1):
                raise InvalidDescriptor(
                    f"wild case needs alpha in [0,p-2], beta in [1,p-1], got ({self.alpha},{self.beta})"
                )
            ratio = (self.beta - self.alpha - 1) % (p - 1) == 0
            if self.ratio_is_cyclotomic != ratio:
                raise InvalidDescriptor("ratio_is_cyclotomic flag contradicts the exponents")
            if self.tres_ramifiee and not ratio:
                raise InvalidDescriptor("tres ramifiee requires the cyclotomic ratio")
            object.__setattr__(self, "a", min(self.alpha, self.beta))
            object.__setattr__(self, "b", max(self.alpha, self.beta))
        shape = self._derived_shape()
        if self.unramified_shape != shape:
            raise InvalidDescriptor(
                f"shape {self.unramified_shape!r} inconsistent with the descriptor (expected {shape!r})"
            )

    def _derived_shape(self) -> str:
        if self.case == "irreducible":
            return "generic"
        if self.case == "tame-reducible":
            if self.a == 0 and self.b == 0:
                return "unramified"
            return "eps_b_extension_of_1_ramified" if self.a == 0 else "generic"
        # wild: the quotient character is trivial on inertia iff alpha = 0
        return "eps_b_extension_of_1_ramified" if self.alpha == 0 else "generic"

    @classmethod
    def from_dict(cls, data: dict) -> "ResidualDescriptor":
        try:
            p = int(data["p"])
            case = str(data["case"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidDescriptor(f"descriptor needs integer 'p' and string 'case': {data!r}") from exc
        kwargs: dict = {}
        if case in ("wild",):
            if "alpha" not in data or "beta" not in data:
                raise InvalidDescriptor("wild descriptor needs 'alpha' and 'beta'")
            kwargs["alpha"] = int(data["alpha"])
            kwargs["beta"] = int(data["beta"])
            kwargs["tres_ramifiee"] = bool(data.get("tres_ramifiee", False))
            if "ratio_is_cyclotomic" in data:
                kwargs["ratio_is_cyclotomic"] = bool(data["ratio_is_cyclotomic"])
        else:
            kwargs["a"] = int(data.get("a", 0))
            kwargs["b"] = int(data.get("b", 0))
        probe = make_descriptor(p, case, **kwargs)
        if "unramified_shape" in data:
            if str(data["unramified_shape"]) != probe.unramified_shape:
                raise InvalidDescriptor(
                    f"declared shape {data['unramified_shape']!r} does not match {probe.unramified_shape!r}"
                )
        return probe


def _shape_default(p, case, a, b, alpha):
    # mirrors _derived_shape for constructor convenience
    if case == "irreducible":
        return "generic"
    if case == "tame-reducible":
        if a == 0 and b == 0:
            return "unramified"
        return "eps_b_extension_of_1_ramified" if a == 0 else "generic"
    return "eps_b_extension_of_1_ramified" if alpha == 0 else "generic"


def make_descriptor(p: int, case: str, **kwargs) -> ResidualDescriptor:
    """Constructor that fills the derived shape so callers can omit it."""
    case = {"tame": "tame-reducible"}.get(case, case)
    a = kwargs.get("a", 0)
    b = kwargs.get("b", 0)
    alpha = kwargs.get("alpha")
    beta = kwargs.get("beta")
    if case == "wild":
        if alpha is None or beta is None:
            raise InvalidDescriptor("wild case needs alpha and beta")
        kwargs.setdefault("ratio_is_cyclotomic", (beta - alpha - 1) % (p - 1) == 0)
    kwargs.setdefault("unramified_shape", _shape_default(p, case, a, b, alpha))
    return ResidualDescriptor(p=p, case=case, **kwargs)


@dataclass(frozen=True)
class SerreWeightReport:
    k: int
    k_no: int
    case_trace: str


def serre_weight(d: ResidualDescriptor) -> int:
    """Case formula 1 + p*a + b, shifted by p-1 in the tres ramifiee case."""
    if d.case == "wild" and d.tres_ramifiee:
        return d.p + d.p * d.a + d.b
    return 1 + d.p * d.a + d.b


def nonordinary_serre_weight(d: ResidualDescriptor) -> int:
    """p^2 when unramified, p*k for a ramified extension of 1, else k."""
    if d.unramified_shape == "unramified":
        return d.p**2
    if d.unramified_shape == "eps_b_extension_of_1_ramified":
        return d.p * serre_weight(d)
    return serre_weight(d)


def weight_report(d: ResidualDescriptor) -> SerreWeightReport:
    k = serre_weight(d)
    k_no = nonordinary_serre_weight(d)
    if not 1 <= k <= d.p**2 - 1:
        raise InvalidDescriptor(f"computed weight {k} outside [1, p^2-1]")
    if d.case == "wild":
        trace = (
            f"wild: alpha={d.alpha}, beta={d.beta}, (a,b)=({d.a},{d.b}), "
            f"{'tres' if d.tres_ramifiee else 'not tres'} ramifiee -> k={k}"
        )
    else:
        trace = f"{d.case}: (a,b)=({d.a},{d.b}) -> k={k}"
    trace += f"; shape={d.unramified_shape} -> k_no={k_no}"
    return SerreWeightReport(k, k_no, trace)


def enumerate_descriptors(p: int) -> Iterator[ResidualDescriptor]:
    """All valid descriptors for a given prime, in a fixed order."""
    for a in range(p):
        for b in range(a + 1, p):
            yield make_descriptor(p, "irreducible", a=a, b=b)
    for a in range(p - 1):
        for b in range(a, p - 1):
            yield make_descriptor(p, "tame-reducible", a=a, b=b)
    for alpha in range(p - 1):
        for beta in range(1, p):
            yield make_descriptor(p, "wild", alpha=alpha, beta=beta)
            if (beta - alpha - 1) % (p - 1) == 0:
                yield make_descriptor(p, "wild", alpha=alpha, beta=beta, tres_ramifiee=True)


def nonordinary_eigenspace_dim(ctx: FieldContext, k: int, eigensystem: dict[int, int]) -> int:
    """dim of the simultaneous eigenspace inside the non-ordinary cusp part."""
    p = ctx.p
    if k < 2:
        return 0
    prec = max([p] + [ell for ell in eigensystem]) * sturm(k)
    space = basis(ctx, k, "cusp", prec)
    if space.dim == 0:
        return 0
    part = ord_no_decompose(space).nonordinary
    if part.dim == 0:
        return 0
    if not eigensystem:
        return part.dim
    from modpforms import linalg

    stacked = []
    for ell in sorted(eigensystem):
        if ell == p or not is_prime(ell):
            raise UsageError(f"eigensystem primes must be primes away from p, got {ell}")
        lam = eigensystem[ell] % p
        m = operator_matrix(part, HeckeOperatorLabel("T", ell))
        for i, row in enumerate(m):
            shifted = list(row)
            shifted[i] = (shifted[i] - lam) % p
            stacked.append(shifted)
    return len(linalg.nullspace(stacked, p))


def min_nonordinary_weight_scan(ctx: FieldContext, eigensystem: dict[int, int], k_max: int) -> Optional[int]:
    """Least 2 <= k <= k_max whose non-ordinary cusp part carries the system.

    An empty eigensystem degenerates to scanning for any nonzero
    non-ordinary part; callers should flag that case to the user.
    """
    if k_max < 2:
        raise UsageError("k_max must be at least 2")
    for k in range(2, k_max + 1):
        if nonordinary_eigenspace_dim(ctx, k, eigensystem) > 0:
            return k
    return None
