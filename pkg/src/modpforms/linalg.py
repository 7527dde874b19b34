"""Dense exact linear algebra over a prime field.

Vectors are tuples of ints in [0, p); matrices are tuples of row tuples.
Everything is deterministic: row echelon always pivots on the leftmost
column using the first nonzero row, so coordinates and basis choices are
reproducible across runs.
"""

from __future__ import annotations

from typing import Optional, Sequence


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("inverse of 0 mod p")
    return pow(a, p - 2, p)


def rref(rows: Sequence[Sequence[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form.  Returns (nonzero rows, pivot column list)."""
    mat = [[x % p for x in row] for row in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == len(mat):
            break
        piv = None
        for i in range(r, len(mat)):
            if mat[i][c]:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = inv_mod(mat[r][c], p)
        mat[r] = [(x * inv) % p for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                t = mat[i][c]
                mat[i] = [(a - t * b) % p for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
    return mat[:r], pivots


def rank(rows: Sequence[Sequence[int]], p: int) -> int:
    return len(rref(rows, p)[0])


class RowSpan:
    """Incrementally maintained row span in reduced echelon form."""

    def __init__(self, ncols: int, p: int):
        self.ncols = ncols
        self.p = p
        self.rows: list[list[int]] = []
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Sequence[int]) -> list[int]:
        p = self.p
        v = [x % p for x in vec]
        for row, c in zip(self.rows, self.pivots):
            if v[c]:
                t = v[c]
                v = [(a - t * b) % p for a, b in zip(v, row)]
        return v

    def contains(self, vec: Sequence[int]) -> bool:
        return not any(self.reduce(vec))

    def add(self, vec: Sequence[int]) -> bool:
        """Insert vec; returns True if the span grew."""
        v = self.reduce(vec)
        c = next((i for i, x in enumerate(v) if x), None)
        if c is None:
            return False
        inv = inv_mod(v[c], self.p)
        v = [(x * inv) % self.p for x in v]
        for i, row in enumerate(self.rows):
            if row[c]:
                t = row[c]
                self.rows[i] = [(a - t * b) % self.p for a, b in zip(row, v)]
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < c:
            pos += 1
        self.rows.insert(pos, v)
        self.pivots.insert(pos, c)
        return True


def solve_in_span(basis: Sequence[Sequence[int]], vec: Sequence[int], p: int) -> Optional[list[int]]:
    """Coordinates of vec in the span of basis rows, or None.

    Coordinates refer to the rows as given (not to their echelon form);
    the solve augments each row with an indicator block to track them.
    """
    if not basis:
        return None if any(x % p for x in vec) else []
    n = len(basis)
    ncols = len(basis[0])
    aug = [list(row) + [1 if j == i else 0 for j in range(n)] for i, row in enumerate(basis)]
    span = RowSpan(ncols + n, p)
    for row in aug:
        span.add(row)
    red = [x % p for x in vec] + [0] * n
    for row, c in zip(span.rows, span.pivots):
        if c >= ncols:
            break
        if red[c]:
            t = red[c]
            red = [(a - t * b) % p for a, b in zip(red, row)]
    if any(red[:ncols]):
        return None
    # the trailing block now holds -coords of the combination
    coeffs = [(-x) % p for x in red[ncols:]]
    return coeffs


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    bt = [[b[r][c] for r in range(k)] for c in range(m)]
    return [[sum(x * y for x, y in zip(row, col)) % p for col in bt] for row in a]


def matvec(a: Sequence[Sequence[int]], v: Sequence[int], p: int) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) % p for row in a]


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matpow(a: Sequence[Sequence[int]], e: int, p: int) -> list[list[int]]:
    n = len(a)
    result = identity(n)
    base = [list(row) for row in a]
    while e > 0:
        if e & 1:
            result = matmul(result, base, p)
        base = matmul(base, base, p)
        e >>= 1
    return result


def mat_add(a, b, p):
    return [[(x + y) % p for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, s, p):
    return [[(x * s) % p for x in row] for row in a]


def nullspace(rows: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    """Basis of {v : M v = 0} for M given by rows.  Deterministic order."""
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = rref(rows, p)
    pivset = set(pivots)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, c in zip(red, pivots):
            v[c] = (-row[f]) % p
        basis.append(v)
    return basis


def kernel_dim(rows: Sequence[Sequence[int]], p: int) -> int:
    if not rows:
        return 0
    return len(rows[0]) - rank(rows, p)


def transpose(a: Sequence[Sequence[int]]) -> list[list[int]]:
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def charpoly(mat: Sequence[Sequence[int]], p: int) -> tuple[int, ...]:
    """Characteristic polynomial of a square matrix over F_p.

    Hessenberg reduction by similarity transforms, then the standard
    recurrence on leading principal minors.  Returned as coefficients in
    ascending degree, monic of degree n.
    """
    n = len(mat)
    if n == 0:
        return (1,)
    h = [[x % p for x in row] for row in mat]
    for j in range(n - 2):
        piv = None
        for i in range(j + 1, n):
            if h[i][j]:
                piv = i
                break
        if piv is None:
            continue
        if piv != j + 1:
            h[piv], h[j + 1] = h[j + 1], h[piv]
            for row in h:
                row[piv], row[j + 1] = row[j + 1], row[piv]
        inv = inv_mod(h[j + 1][j], p)
        for i in range(j + 2, n):
            if h[i][j]:
                t = (h[i][j] * inv) % p
                h[i] = [(a - t * b) % p for a, b in zip(h[i], h[j + 1])]
                for row in h:
                    row[j + 1] = (row[j + 1] + t * row[i]) % p
    # polys[m] = charpoly of the leading m x m block, ascending coefficients
    polys: list[list[int]] = [[1]]
    for m in range(1, n + 1):
        d = h[m - 1][m - 1]
        prev = polys[m - 1]
        cur = [0] + prev  # x * prev
        for i in range(len(prev)):
            cur[i] = (cur[i] - d * prev[i]) % p
        t = 1
        for i in range(1, m):
            t = (t * h[m - i][m - i - 1]) % p
            coef = (h[m - 1 - i][m - 1] * t) % p
            if coef:
                q = polys[m - 1 - i]
                for idx in range(len(q)):
                    cur[idx] = (cur[idx] - coef * q[idx]) % p
        polys.append(cur)
    return tuple(x % p for x in polys[n])


def charpoly_naive(mat: Sequence[Sequence[int]], p: int) -> tuple[int, ...]:
    """det(xI - M) by cofactor expansion over F_p[x].  Test oracle; O(n!)."""
    n = len(mat)

    def poly_mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] = (out[i + j] + x * y) % p
        return out

    def poly_add(a, b):
        m = max(len(a), len(b))
        return [((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % p for i in range(m)]

    # entries of xI - M as polynomials
    entries = [[([(-mat[i][j]) % p, 1] if i == j else [(-mat[i][j]) % p]) for j in range(n)] for i in range(n)]

    def det(rows, cols):
        if len(rows) == 1:
            return entries[rows[0]][cols[0]]
        total = [0]
        r = rows[0]
        for k, c in enumerate(cols):
            minor = det(rows[1:], cols[:k] + cols[k + 1:])
            term = poly_mul(entries[r][c], minor)
            if k % 2:
                term = [(-x) % p for x in term]
            total = poly_add(total, term)
        return total

    if n == 0:
        return (1,)
    d = det(list(range(n)), list(range(n)))
    d = d + [0] * (n + 1 - len(d))
    return tuple(x % p for x in d)
