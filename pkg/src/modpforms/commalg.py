"""Truncated multivariate local rings over F_p and their Hilbert functions.

A ring is F_p[[x_1..x_v]] modulo relations with zero constant term, with
every computation performed in the quotient by the (D+1)-st power of the
maximal ideal.  Graded pieces come from dense linear algebra on monomial
multiples of the relations; no standard-basis machinery.  All verdicts
are truncation-qualified: nothing here claims a property of the
untruncated complete ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from modpforms.errors import DegreeError, ScenarioError, UsageError
from modpforms.fieldseries import FieldContext

Monomial = tuple[int, ...]
Poly = dict[Monomial, int]


@lru_cache(maxsize=None)
def monomials_of_degree(nvars: int, degree: int) -> tuple[Monomial, ...]:
    """Exponent vectors of total degree `degree`, lexicographic, first var heaviest."""
    if nvars == 0:
        return ((),) if degree == 0 else ()
    if nvars == 1:
        return ((degree,),)
    out = []
    for e in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - e):
            out.append((e,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomials_up_to(nvars: int, degree: int) -> tuple[Monomial, ...]:
    out = []
    for d in range(degree + 1):
        out.extend(monomials_of_degree(nvars, d))
    return tuple(out)


def poly_degree(f: Poly) -> int:
    return max((sum(m) for m in f), default=0)


def poly_order(f: Poly) -> int:
    """Total degree of the lowest term (the initial-form degree)."""
    return min((sum(m) for m in f), default=0)


def _tokenize(text: str) -> list[str]:
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "+-*^()":
            if c == "*" and i + 1 < len(text) and text[i + 1] == "*":
                tokens.append("^")
                i += 2
            else:
                tokens.append(c)
                i += 1
        elif c.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(text[i:j])
            i = j
        elif c.isalpha() or c == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(text[i:j])
            i = j
        else:
            raise ScenarioError(f"unexpected character {c!r} in polynomial {text!r}")
    return tokens


def parse_poly(text: str, variables: Sequence[str], p: int) -> Poly:
    """Parse sums of integer-coefficient monomial terms like ``x^2*y - 3*c``."""
    var_index = {v: i for i, v in enumerate(variables)}
    nvars = len(variables)
    tokens = _tokenize(text)
    if not tokens:
        raise ScenarioError("empty polynomial")
    out: Poly = {}
    pos = 0
    sign = 1
    while pos < len(tokens):
        if tokens[pos] == "+":
            sign = 1
            pos += 1
            continue
        if tokens[pos] == "-":
            sign = -1
            pos += 1
            continue
        coeff = sign
        expo = [0] * nvars
        expect_factor = True
        while pos < len(tokens) and tokens[pos] not in "+-":
            tok = tokens[pos]
            if tok == "*":
                pos += 1
                expect_factor = True
                continue
            if not expect_factor:
                raise ScenarioError(f"missing operator before {tok!r} in {text!r}")
            if tok.isdigit():
                coeff *= int(tok)
                pos += 1
            elif tok in var_index:
                e = 1
                pos += 1
                if pos < len(tokens) and tokens[pos] == "^":
                    if pos + 1 >= len(tokens) or not tokens[pos + 1].isdigit():
                        raise ScenarioError(f"malformed exponent in {text!r}")
                    e = int(tokens[pos + 1])
                    pos += 2
                expo[var_index[tok]] += e
            else:
                raise ScenarioError(f"unknown variable {tok!r} in {text!r} (vars: {list(variables)})")
            expect_factor = False
        key = tuple(expo)
        out[key] = (out.get(key, 0) + coeff) % p
        sign = 1
    return {m: c for m, c in out.items() if c}


@dataclass(frozen=True)
class TruncatedLocalRing:
    """F_p[[vars]] / (relations), computed modulo m^(trunc_degree + 1)."""

    ctx: FieldContext
    vars: tuple[str, ...]
    relations: tuple[tuple[tuple[Monomial, int], ...], ...]
    trunc_degree: int

    @classmethod
    def make(
        cls,
        ctx: FieldContext,
        variables: Sequence[str],
        relations: Sequence[str | Poly],
        trunc_degree: int,
    ) -> "TruncatedLocalRing":
        if trunc_degree < 0:
            raise DegreeError("truncation degree must be >= 0")
        if len(set(variables)) != len(variables):
            raise UsageError("variable names must be distinct")
        polys = []
        for rel in relations:
            f = parse_poly(rel, variables, ctx.p) if isinstance(rel, str) else dict(rel)
            if not f:
                continue
            if f.get((0,) * len(variables)):
                raise UsageError("relations must have zero constant term")
            polys.append(tuple(sorted(f.items())))
        return cls(ctx, tuple(variables), tuple(polys), trunc_degree)

    @classmethod
    def from_dict(cls, data: dict) -> "TruncatedLocalRing":
        try:
            ctx = FieldContext(int(data["p"]))
            variables = [str(v) for v in data["vars"]]
            relations = [str(r) for r in data.get("relations", [])]
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"ring presentation needs 'p', 'vars', 'relations': {data!r}") from exc
        trunc = int(data["trunc"]) if "trunc" in data else 6
        return cls.make(ctx, variables, relations, trunc)

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def relation_polys(self) -> list[Poly]:
        return [dict(rel) for rel in self.relations]

    def parse(self, text: str) -> Poly:
        return parse_poly(text, self.vars, self.ctx.p)


def _monomial_index(nvars: int, degree: int) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomials_up_to(nvars, degree))}


def _poly_times_monomial_vector(f: Poly, m: Monomial, index: dict[Monomial, int], limit: int, p: int) -> list[int]:
    vec = [0] * len(index)
    for expo, c in f.items():
        shifted = tuple(a + b for a, b in zip(expo, m))
        if sum(shifted) <= limit:
            vec[index[shifted]] = (vec[index[shifted]] + c) % p
    return vec


class _IdealData:
    """Echelonized span of relation multiples inside P_{<= D}.

    Columns are ordered by ascending total degree, so the pivot columns
    found by a single forward sweep give the rank of every degree-prefix
    projection for free.
    """

    def __init__(self, ring: TruncatedLocalRing):
        p = ring.ctx.p
        nv = ring.nvars
        d = ring.trunc_degree
        self.index = _monomial_index(nv, d)
        self.monomials = monomials_up_to(nv, d)
        self.ncols = len(self.monomials)
        rows = []
        for rel in ring.relation_polys():
            order = poly_order(rel)
            for m in monomials_up_to(nv, d - order):
                vec = _poly_times_monomial_vector(rel, m, self.index, d, p)
                if any(vec):
                    rows.append(vec)
        from modpforms import linalg

        span = linalg.RowSpan(self.ncols, p)
        for row in rows:
            span.add(row)
        self.span = span
        self.pivot_cols = list(span.pivots)
        self.col_degree = [sum(m) for m in self.monomials]

    def prefix_rank(self, degree: int) -> int:
        return sum(1 for c in self.pivot_cols if self.col_degree[c] <= degree)

    @property
    def rank(self) -> int:
        return len(self.pivot_cols)


@lru_cache(maxsize=None)
def _ideal_data(ring: TruncatedLocalRing) -> _IdealData:
    return _IdealData(ring)


@dataclass(frozen=True)
class HilbertFunction:
    """Dimension counts H(0..D) of the graded pieces m^n / m^(n+1)."""

    coeffs: tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)


def hilbert_function(ring: TruncatedLocalRing) -> HilbertFunction:
    """H(n) = monomial count in degree n minus the rank the relations add there."""
    data = _ideal_data(ring)
    nv, d = ring.nvars, ring.trunc_degree
    out = []
    prev_rank = 0
    for n in range(d + 1):
        r = data.prefix_rank(n)
        out.append(len(monomials_of_degree(nv, n)) - (r - prev_rank))
        prev_rank = r
    return HilbertFunction(tuple(out))


def is_regular_up_to(ring: TruncatedLocalRing, f: "Poly | str", d_prime: int) -> bool:
    """Certify that f is a non-zero-divisor through degree d_prime.

    True iff multiplication by f is injective from the degree <= d_prime
    part of the quotient into degrees <= d_prime + deg f.  The product
    degrees stay below the truncation, so no fake kernel can appear.
    """
    if isinstance(f, str):
        f = ring.parse(f)
    if not f:
        return False
    p = ring.ctx.p
    nv, d = ring.nvars, ring.trunc_degree
    if d_prime < 0:
        raise DegreeError("d_prime must be >= 0")
    if d_prime + poly_degree(f) > d:
        raise DegreeError(
            f"d_prime + deg(f) = {d_prime + poly_degree(f)} exceeds truncation degree {d}"
        )
    if f.get((0,) * nv):
        return True  # unit in the local ring
    data = _ideal_data(ring)
    from modpforms import linalg

    domain_mons = monomials_up_to(nv, d_prime)
    mult_rows = [_poly_times_monomial_vector(f, m, data.index, d, p) for m in domain_mons]
    ideal_rows = [list(r) for r in data.span.rows]
    rank_w = data.rank
    rank_joint = linalg.rank(mult_rows + ideal_rows, p)
    dim_kernel = len(domain_mons) - (rank_joint - rank_w)
    # part of the ideal that lives entirely in degrees <= d_prime
    high_cols = [i for i, deg in enumerate(data.col_degree) if deg > d_prime]
    proj = [[row[i] for i in high_cols] for row in ideal_rows]
    dim_low_ideal = rank_w - linalg.rank(proj, p)
    return dim_kernel == dim_low_ideal


@dataclass(frozen=True)
class StabilizationReport:
    """Per-coefficient index from which the sequence matches the target."""

    i_max: int
    target: tuple[int, ...]
    stabilized_at: tuple[Optional[int], ...]

    def stabilized(self, i: int) -> bool:
        return self.stabilized_at[i] is not None


def hilbert_limit_compare(
    sequence: Sequence[TruncatedLocalRing], target: TruncatedLocalRing, i_max: int
) -> StabilizationReport:
    """Coefficientwise convergence of H along a ring sequence.

    For each i <= i_max, reports the earliest index from which H(i)
    equals the target's value through the end of the (finite) sequence,
    or None when the last entry still disagrees.
    """
    if not sequence:
        raise UsageError("need a nonempty sequence of rings")
    nv = target.nvars
    for ring in list(sequence) + [target]:
        if ring.nvars != nv:
            raise UsageError("all rings must share the variable count")
        if ring.trunc_degree < i_max:
            raise DegreeError(f"every ring needs truncation degree >= i_max = {i_max}")
    target_h = hilbert_function(target)
    seq_h = [hilbert_function(r) for r in sequence]
    stab: list[Optional[int]] = []
    for i in range(i_max + 1):
        idx: Optional[int] = None
        for s in range(len(seq_h) - 1, -1, -1):
            if seq_h[s][i] != target_h[i]:
                break
            idx = s
        stab.append(idx)
    return StabilizationReport(i_max, tuple(target_h.coeffs[: i_max + 1]), tuple(stab))
