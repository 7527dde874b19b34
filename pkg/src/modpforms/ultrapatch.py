"""Finite-scale ultraproducts and patching of module sequences.

The base ring is a truncated polynomial algebra over F_p (a group
algebra of a cyclic p-group is the univariate special case).  Sequences
of finitely presented modules are eventually periodic; the pigeonhole
ultraproduct picks one isomorphism class through a deterministic
selector standing in for a non-principal ultrafilter, and patching takes
the inverse limit of those choices along a descending ideal chain to a
declared finite depth.  Isomorphism is decided by invariant factors:
Smith-style reduction with unit transformations, which is complete over
chain rings and reports ambiguity rather than guessing elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

from modpforms import linalg
from modpforms.commalg import Monomial, Poly, monomials_up_to, parse_poly
from modpforms.errors import (
    ClassificationError,
    CompatibilityError,
    InputNotExact,
    ScenarioError,
    UsageError,
)
from modpforms.fieldseries import FieldContext

RingElem = tuple[int, ...]  # dense coefficients over the monomial basis
Ideal = tuple[RingElem, ...]


@dataclass(frozen=True)
class BaseRing:
    """F_p[y_1..y_r] truncated at a total degree, with a descending ideal chain."""

    ctx: FieldContext
    vars: tuple[str, ...]
    trunc_degree: int
    ideal_chain: tuple[Ideal, ...]

    @classmethod
    def make(
        cls,
        ctx: FieldContext,
        variables: Sequence[str],
        trunc_degree: int,
        chain: Sequence[Sequence[str]],
    ) -> "BaseRing":
        if trunc_degree < 1:
            raise UsageError("truncation degree must be >= 1")
        if not variables:
            raise UsageError("need at least one variable")
        base = cls(ctx, tuple(variables), trunc_degree, ())
        ideals = tuple(
            tuple(base.elem(g) for g in gens) for gens in chain
        )
        base = cls(ctx, tuple(variables), trunc_degree, ideals)
        base._validate_chain()
        return base

    @classmethod
    def group_algebra(cls, ctx: FieldContext, exponent: int, depth: Optional[int] = None) -> "BaseRing":
        """F_p[Z/p^m Z] presented as F_p[y]/(y^(p^m)) via y = g - 1."""
        if exponent < 1:
            raise UsageError("group order exponent must be >= 1")
        order = ctx.p**exponent
        depth = depth if depth is not None else min(order - 1, 6)
        chain = [[f"y^{t}"] for t in range(1, depth + 1)]
        return cls.make(ctx, ["y"], order - 1, chain)

    def _validate_chain(self) -> None:
        prev: Optional[linalg.RowSpan] = None
        for i, gens in enumerate(self.ideal_chain):
            span = self.ideal_span(gens)
            if prev is not None:
                for row in span.rows:
                    if not prev.contains(row):
                        raise UsageError(f"ideal chain is not descending at position {i}")
            prev = span

    @property
    def nvars(self) -> int:
        return len(self.vars)

    @property
    def monomials(self) -> tuple[Monomial, ...]:
        return monomials_up_to(self.nvars, self.trunc_degree)

    @property
    def dim_f(self) -> int:
        return len(self.monomials)

    def _index(self) -> dict[Monomial, int]:
        return _mon_index(self.nvars, self.trunc_degree)

    def elem(self, value: "str | Poly | RingElem") -> RingElem:
        if isinstance(value, tuple):
            if len(value) != self.dim_f:
                raise UsageError("ring element vector has the wrong length")
            return tuple(c % self.ctx.p for c in value)
        poly = parse_poly(value, self.vars, self.ctx.p) if isinstance(value, str) else value
        vec = [0] * self.dim_f
        index = self._index()
        for mono, c in poly.items():
            if sum(mono) <= self.trunc_degree:
                vec[index[mono]] = (vec[index[mono]] + c) % self.ctx.p
        return tuple(vec)

    def zero(self) -> RingElem:
        return (0,) * self.dim_f

    def one(self) -> RingElem:
        return (1,) + (0,) * (self.dim_f - 1)

    def mul(self, a: RingElem, b: RingElem) -> RingElem:
        p = self.ctx.p
        index = self._index()
        mons = self.monomials
        out = [0] * self.dim_f
        for i, ca in enumerate(a):
            if not ca:
                continue
            mi = mons[i]
            for j, cb in enumerate(b):
                if not cb:
                    continue
                s = tuple(x + y for x, y in zip(mi, mons[j]))
                if sum(s) <= self.trunc_degree:
                    k = index[s]
                    out[k] = (out[k] + ca * cb) % p
        return tuple(out)

    def add(self, a: RingElem, b: RingElem) -> RingElem:
        p = self.ctx.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a: RingElem, b: RingElem) -> RingElem:
        p = self.ctx.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def ideal_span(self, gens: Ideal) -> linalg.RowSpan:
        span = linalg.RowSpan(self.dim_f, self.ctx.p)
        for g in gens:
            for mono in self.monomials:
                span.add(self.mul(g, self.elem({mono: 1})))
        return span

    def divide(self, denom: RingElem, numer: RingElem) -> Optional[RingElem]:
        """Solve u * denom = numer; None when numer is not a multiple."""
        rows = [self.mul(denom, self.elem({mono: 1})) for mono in self.monomials]
        coords = linalg.solve_in_span(rows, list(numer), self.ctx.p)
        if coords is None:
            return None
        vec = [0] * self.dim_f
        for c, mono in zip(coords, self.monomials):
            if c:
                vec[self._index()[mono]] = c
        return tuple(vec)

    def maximal_ideal_power_gens(self, t: int) -> Ideal:
        from modpforms.commalg import monomials_of_degree

        return tuple(self.elem({m: 1}) for m in monomials_of_degree(self.nvars, t))


@lru_cache(maxsize=None)
def _mon_index(nvars: int, degree: int) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomials_up_to(nvars, degree))}


@dataclass(frozen=True)
class Presentation:
    """Cokernel of a matrix over the base: S^gens / span(columns)."""

    base: BaseRing
    gens: int
    columns: tuple[tuple[RingElem, ...], ...]

    def __post_init__(self):
        if self.gens < 0:
            raise UsageError("generator count must be >= 0")
        for col in self.columns:
            if len(col) != self.gens:
                raise UsageError("presentation column length must equal the generator count")

    @classmethod
    def make(cls, base: BaseRing, gens: int, columns: Sequence[Sequence[str]]) -> "Presentation":
        cols = tuple(tuple(base.elem(entry) for entry in col) for col in columns)
        return cls(base, gens, cols)

    @classmethod
    def cyclic(cls, base: BaseRing, annihilators: Sequence[str]) -> "Presentation":
        return cls.make(base, 1, [[a] for a in annihilators])

    def tensor(self, ideal: Ideal) -> "Presentation":
        extra = []
        for g in ideal:
            for i in range(self.gens):
                col = [self.base.zero()] * self.gens
                col[i] = g
                extra.append(tuple(col))
        return Presentation(self.base, self.gens, self.columns + tuple(extra))


def smith_invariants(pres: Presentation) -> tuple[Ideal, ...]:
    """Diagonalize the presentation matrix by unit row/column operations.

    Returns one principal-ideal generator per cyclic factor (zero entries
    mean free factors).  Raises ClassificationError when no entry divides
    all the others, which cannot happen over a chain ring.
    """
    base = pres.base
    zero = base.zero()
    matrix = [[pres.columns[j][i] for j in range(len(pres.columns))] for i in range(pres.gens)]
    diagonal: list[RingElem] = []
    while matrix and matrix[0]:
        entries = [(i, j) for i in range(len(matrix)) for j in range(len(matrix[0])) if any(matrix[i][j])]
        if not entries:
            break
        pivot = None
        for i, j in entries:
            e = matrix[i][j]
            if all(base.divide(e, matrix[a][b]) is not None for a, b in entries):
                pivot = (i, j)
                break
        if pivot is None:
            raise ClassificationError("no entry divides all others; module classification is ambiguous")
        pi, pj = pivot
        matrix[0], matrix[pi] = matrix[pi], matrix[0]
        for row in matrix:
            row[0], row[pj] = row[pj], row[0]
        e = matrix[0][0]
        for i in range(1, len(matrix)):
            if any(matrix[i][0]):
                u = base.divide(e, matrix[i][0])
                matrix[i] = [base.sub(x, base.mul(u, y)) for x, y in zip(matrix[i], matrix[0])]
        for j in range(1, len(matrix[0])):
            if any(matrix[0][j]):
                u = base.divide(e, matrix[0][j])
                for i in range(len(matrix)):
                    matrix[i][j] = base.sub(matrix[i][j], base.mul(u, matrix[i][0]))
        diagonal.append(e)
        matrix = [row[1:] for row in matrix[1:]]
    free_rows = pres.gens - len(diagonal)
    return tuple(diagonal) + tuple([zero] * free_rows)


def _ideal_key(base: BaseRing, gen: RingElem) -> tuple:
    span = base.ideal_span((gen,))
    return tuple(tuple(row) for row in span.rows)


def signature(pres: Presentation) -> tuple:
    """Canonical isomorphism invariant: sorted multiset of factor ideals.

    Unit factors (the whole ring) contribute nothing; a zero generator is
    the zero ideal, marking a free cyclic factor.
    """
    base = pres.base
    keys = []
    full_dim = base.dim_f
    for gen in smith_invariants(pres):
        key = _ideal_key(base, gen)
        if len(key) == full_dim:
            continue  # unit: S/(gen) = 0
        keys.append(key)
    return tuple(sorted(keys))


def signature_direct_sum(*sigs: tuple) -> tuple:
    merged = []
    for s in sigs:
        merged.extend(s)
    return tuple(sorted(merged))


def module_dim_f(pres: Presentation) -> int:
    base = pres.base
    total = 0
    for key in signature(pres):
        total += base.dim_f - len(key)
    return total


@dataclass(frozen=True)
class ModuleSequence:
    """Eventually periodic sequence of finitely presented modules.

    Positions are 0-based; the entry at position j is expected to be
    annihilated by the ideal generated by y_i^(j+1).  Violations are
    recorded, not fatal: at finite depth the functor is computable
    without the annihilation hypothesis, which only controls the infinite
    limit.
    """

    base: BaseRing
    prefix: tuple[Presentation, ...]
    period: tuple[Presentation, ...]
    generator_bound: int
    annihilation_violation: Optional[int] = field(default=None, compare=False)

    @classmethod
    def make(
        cls,
        base: BaseRing,
        prefix: Sequence[Presentation],
        period: Sequence[Presentation],
        generator_bound: Optional[int] = None,
    ) -> "ModuleSequence":
        if not period:
            raise UsageError("the periodic part must be nonempty")
        entries = list(prefix) + list(period)
        max_gens = max((e.gens for e in entries), default=0)
        bound = generator_bound if generator_bound is not None else max_gens
        if bound < max_gens:
            raise UsageError(f"an entry needs {max_gens} generators, above the bound {bound}")
        for e in entries:
            if e.base != base:
                raise UsageError("all entries must share the base ring")
        violation = cls._first_annihilation_violation(base, list(prefix), list(period))
        return cls(base, tuple(prefix), tuple(period), bound, violation)

    @staticmethod
    def _first_annihilation_violation(base, prefix, period) -> Optional[int]:
        horizon = len(prefix) + len(period)
        for j in range(horizon):
            pres = prefix[j] if j < len(prefix) else period[j - len(prefix)]
            gens = tuple(
                base.elem({tuple((j + 1) if t == i else 0 for t in range(base.nvars)): 1})
                for i in range(base.nvars)
            )
            if not _annihilates(pres, gens):
                return j
        return None

    @property
    def annihilation_ok(self) -> bool:
        return self.annihilation_violation is None

    def entry(self, position: int) -> Presentation:
        if position < 0:
            raise UsageError("positions are 0-based")
        if position < len(self.prefix):
            return self.prefix[position]
        return self.period[(position - len(self.prefix)) % len(self.period)]

    @property
    def horizon(self) -> int:
        return len(self.prefix) + 2 * len(self.period)


def _annihilates(pres: Presentation, gens: Ideal) -> bool:
    realized = RealizedModule(pres)
    base = pres.base
    for g in gens:
        for i in range(pres.gens):
            vec = [0] * (pres.gens * base.dim_f)
            vec[i * base.dim_f : (i + 1) * base.dim_f] = list(g)
            if any(realized.reduce(vec)):
                return False
    return True


class RealizedModule:
    """A presentation realized as an explicit F_p quotient space."""

    def __init__(self, pres: Presentation):
        self.pres = pres
        base = pres.base
        p = base.ctx.p
        self.total = pres.gens * base.dim_f
        self.span = linalg.RowSpan(self.total, p)
        for col in pres.columns:
            for mono in base.monomials:
                m = base.elem({mono: 1})
                vec: list[int] = []
                for entry in col:
                    vec.extend(base.mul(m, entry))
                self.span.add(vec)
        pivots = set(self.span.pivots)
        self.section = [i for i in range(self.total) if i not in pivots]

    @property
    def dim(self) -> int:
        return self.total - self.span.dim

    def reduce(self, vec: Sequence[int]) -> list[int]:
        return self.span.reduce(vec)

    def coords(self, vec: Sequence[int]) -> list[int]:
        red = self.reduce(vec)
        return [red[i] for i in self.section]

    def lift(self, k: int) -> list[int]:
        vec = [0] * self.total
        vec[self.section[k]] = 1
        return vec


def _apply_matrix_elem(base: BaseRing, matrix, vec: Sequence[int], gens_in: int, gens_out: int) -> list[int]:
    components = [tuple(vec[i * base.dim_f : (i + 1) * base.dim_f]) for i in range(gens_in)]
    out: list[int] = []
    for i in range(gens_out):
        acc = base.zero()
        for j in range(gens_in):
            acc = base.add(acc, base.mul(matrix[i][j], components[j]))
        out.extend(acc)
    return out


def morphism_matrix_f(src: RealizedModule, dst: RealizedModule, matrix) -> list[list[int]]:
    """F_p matrix of an S-linear map given by a generator matrix over S.

    Validates well-definedness: the source relations must land in the
    target relation span.
    """
    base = src.pres.base
    for col in src.pres.columns:
        vec: list[int] = []
        for entry in col:
            vec.extend(entry)
        image = _apply_matrix_elem(base, matrix, vec, src.pres.gens, dst.pres.gens)
        if any(dst.reduce(image)):
            raise ScenarioError("map does not send source relations into target relations")
    cols = []
    for k in range(src.dim):
        image = _apply_matrix_elem(base, matrix, src.lift(k), src.pres.gens, dst.pres.gens)
        cols.append(dst.coords(image))
    return [[cols[j][i] for j in range(src.dim)] for i in range(dst.dim)]


@dataclass(frozen=True)
class UltrafilterSurrogate:
    """Deterministic stand-in for a non-principal ultrafilter.

    Chooses, among the isomorphism classes of infinite density in an
    eventually periodic sequence, the one containing the smallest
    admissible position.  ``preference`` restricts admissible positions
    to a parity when possible.
    """

    preference: str = "least"

    def __post_init__(self):
        if self.preference not in ("least", "even", "odd"):
            raise UsageError("preference must be least, even, or odd")

    def select(self, classes: list[list[int]], prefix_len: int) -> int:
        """Pick the index of the winning class.  Classes are position lists."""
        infinite = [i for i, pos in enumerate(classes) if any(q >= prefix_len for q in pos)]
        if not infinite:
            raise ClassificationError("no class of infinite density; horizon too short")
        if self.preference == "least":
            return min(infinite, key=lambda i: classes[i][0])
        want = 0 if self.preference == "even" else 1
        qualifying = [
            i for i in infinite if any(q >= prefix_len and q % 2 == want for q in classes[i])
        ]
        pool = qualifying or infinite
        return min(pool, key=lambda i: min(q for q in classes[i] if q % 2 == want) if qualifying else classes[i][0])


@dataclass(frozen=True)
class UltraproductResult:
    module: Presentation
    witness: int
    signature: tuple
    class_positions: tuple[int, ...]


def ultraproduct(seq: ModuleSequence, mod_ideal: Ideal, uf: UltrafilterSurrogate) -> UltraproductResult:
    """Pigeonhole identification of the sequence tensored down to S/ideal.

    Positions up to one prefix plus two periods are classified by
    invariant-factor signature; the selector picks a class of infinite
    density and the result is the representative at its least position.
    """
    horizon = seq.horizon
    tensored = [seq.entry(j).tensor(mod_ideal) for j in range(horizon)]
    sigs = [signature(t) for t in tensored]
    class_map: dict[tuple, list[int]] = {}
    for j, s in enumerate(sigs):
        class_map.setdefault(s, []).append(j)
    classes = [sorted(v) for _, v in sorted(class_map.items(), key=lambda kv: kv[1][0])]
    chosen = uf.select(classes, len(seq.prefix))
    positions = classes[chosen]
    if uf.preference in ("even", "odd"):
        want = 0 if uf.preference == "even" else 1
        parity_positions = [q for q in positions if q % 2 == want]
        witness = parity_positions[0] if parity_positions else positions[0]
    else:
        witness = positions[0]
    rep = tensored[witness]
    return UltraproductResult(rep, witness, sigs[witness], tuple(positions))


@dataclass(frozen=True)
class PatchResult:
    module: Presentation
    depth: int
    witnesses: tuple[int, ...]
    signature: tuple
    compatible: bool


def patch(seq: ModuleSequence, uf: UltrafilterSurrogate, depth: int) -> PatchResult:
    """Inverse limit of the levelwise ultraproducts along the ideal chain.

    A finite chain of compatible surjections has the deepest level as its
    limit, so the returned module is the depth-level representative; the
    compatibility certificate checks that each deeper representative
    base-changes to the shallower one's class.
    """
    chain = seq.base.ideal_chain
    if depth < 1 or depth > len(chain):
        raise UsageError(f"depth must be in [1, {len(chain)}]")
    levels = [ultraproduct(seq, chain[t], uf) for t in range(depth)]
    for t in range(depth - 1):
        deeper = levels[t + 1].module.tensor(chain[t])
        if signature(deeper) != levels[t].signature:
            raise CompatibilityError(
                f"transition square at chain position {t + 1} does not commute"
            )
    return PatchResult(
        module=levels[-1].module,
        depth=depth,
        witnesses=tuple(lv.witness for lv in levels),
        signature=levels[-1].signature,
        compatible=True,
    )


def free_rank_over(pres: Presentation, ideal: Ideal) -> Optional[int]:
    """Rank when the module is free over S/ideal, else None."""
    sig = signature(pres.tensor(ideal))
    quotient_key = _quotient_ideal_key(pres.base, ideal)
    if all(key == quotient_key for key in sig):
        return len(sig)
    return None


def _quotient_ideal_key(base: BaseRing, ideal: Ideal) -> tuple:
    span = base.ideal_span(ideal)
    return tuple(tuple(row) for row in span.rows)


@dataclass(frozen=True)
class MapSequence:
    """Eventually periodic sequence of S-linear maps between module sequences."""

    source: ModuleSequence
    target: ModuleSequence
    prefix: tuple[tuple[tuple[RingElem, ...], ...], ...]
    period: tuple[tuple[tuple[RingElem, ...], ...], ...]

    @classmethod
    def make(cls, source: ModuleSequence, target: ModuleSequence, prefix, period) -> "MapSequence":
        if len(prefix) != len(source.prefix) or len(period) != len(source.period):
            raise ScenarioError("map sequence must align with the module sequence shape")
        if len(source.prefix) != len(target.prefix) or len(source.period) != len(target.period):
            raise ScenarioError("source and target sequences must share prefix and period lengths")
        base = source.base

        def conv(mats):
            out = []
            for pos, mat in enumerate(mats):
                entry_src = None
                entry_dst = None
                rows = tuple(tuple(base.elem(e) for e in row) for row in mat)
                out.append(rows)
            return tuple(out)

        built = cls(source, target, conv(prefix), conv(period))
        for j in range(len(source.prefix) + len(source.period)):
            mat = built.entry(j)
            src, dst = source.entry(j), target.entry(j)
            if len(mat) != dst.gens or any(len(row) != src.gens for row in mat):
                raise ScenarioError(f"map matrix at position {j} has the wrong shape")
        return built

    def entry(self, position: int):
        if position < len(self.prefix):
            return self.prefix[position]
        return self.period[(position - len(self.prefix)) % len(self.period)]


@dataclass(frozen=True)
class ExactnessReport:
    exact: bool
    split_input: bool
    split_patched: bool
    witness: int
    depth: int


def _check_right_exact(a: Presentation, b: Presentation, c: Presentation, fmat, gmat) -> bool:
    ra, rb, rc = RealizedModule(a), RealizedModule(b), RealizedModule(c)
    p = a.base.ctx.p
    mf = morphism_matrix_f(ra, rb, fmat)
    mg = morphism_matrix_f(rb, rc, gmat)
    if rc.dim and (not mg or linalg.rank(mg, p) != rc.dim):
        return False
    if mf and mg:
        comp = linalg.matmul(mg, mf, p)
        if any(any(row) for row in comp):
            return False
    rank_f = linalg.rank(mf, p) if mf else 0
    rank_g = linalg.rank(mg, p) if mg else 0
    return rank_f == rb.dim - rank_g


def patch_exactness_check(
    a_seq: ModuleSequence,
    b_seq: ModuleSequence,
    c_seq: ModuleSequence,
    f_maps: MapSequence,
    g_maps: MapSequence,
    uf: UltrafilterSurrogate,
    depth: int,
) -> ExactnessReport:
    """Right-exactness (and splitness) of a patched three-term sequence.

    Every supplied position is first checked for right-exactness over the
    full base; the patched verdict is then computed on the diagram class
    selected at the deepest chain level.  Splitness is decided by
    invariant-factor bookkeeping: the middle term must match the direct
    sum of the outer terms.
    """
    base = a_seq.base
    chain = base.ideal_chain
    if depth < 1 or depth > len(chain):
        raise UsageError(f"depth must be in [1, {len(chain)}]")
    if f_maps.source is not a_seq or f_maps.target is not b_seq:
        raise ScenarioError("f must map the first sequence into the second")
    if g_maps.source is not b_seq or g_maps.target is not c_seq:
        raise ScenarioError("g must map the second sequence into the third")
    horizon = max(a_seq.horizon, b_seq.horizon, c_seq.horizon)
    split_input = True
    for j in range(horizon):
        a, b, c = a_seq.entry(j), b_seq.entry(j), c_seq.entry(j)
        if not _check_right_exact(a, b, c, f_maps.entry(j), g_maps.entry(j)):
            raise InputNotExact(j)
        if signature(b) != signature_direct_sum(signature(a), signature(c)):
            split_input = False
    ideal = chain[depth - 1]
    diag_sigs = []
    for j in range(horizon):
        a, b, c = (s.entry(j).tensor(ideal) for s in (a_seq, b_seq, c_seq))
        ra, rb, rc = RealizedModule(a), RealizedModule(b), RealizedModule(c)
        p = base.ctx.p
        mf = morphism_matrix_f(ra, rb, f_maps.entry(j))
        mg = morphism_matrix_f(rb, rc, g_maps.entry(j))
        diag_sigs.append(
            (
                signature(a),
                signature(b),
                signature(c),
                linalg.rank(mf, p) if mf else 0,
                linalg.rank(mg, p) if mg else 0,
            )
        )
    class_map: dict[tuple, list[int]] = {}
    for j, s in enumerate(diag_sigs):
        class_map.setdefault(s, []).append(j)
    classes = [sorted(v) for _, v in sorted(class_map.items(), key=lambda kv: kv[1][0])]
    prefix_len = max(len(a_seq.prefix), len(b_seq.prefix), len(c_seq.prefix))
    chosen = uf.select(classes, prefix_len)
    witness = classes[chosen][0]
    a, b, c = (s.entry(witness).tensor(ideal) for s in (a_seq, b_seq, c_seq))
    exact = _check_right_exact(a, b, c, f_maps.entry(witness), g_maps.entry(witness))
    split_patched = signature(b) == signature_direct_sum(signature(a), signature(c))
    return ExactnessReport(exact, split_input, split_patched, witness, depth)
