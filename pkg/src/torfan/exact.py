"""Exact rational and integer linear algebra.

Vectors are tuples, matrices are tuples of row tuples.  Rational entries are
:class:`fractions.Fraction`; lattice data is plain ``int``.  Nothing in here
ever touches a float.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
import math
from math import gcd
from operator import mul
from typing import Iterable, Optional, Sequence

Vector = tuple
Matrix = tuple


def frac(x) -> Fraction:
    """Coerce ``int``/``Fraction``/``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def qvec(xs: Iterable) -> Vector:
    return tuple(frac(x) for x in xs)


def qmat(rows: Iterable[Iterable]) -> Matrix:
    return tuple(qvec(r) for r in rows)


def zmat(rows: Iterable[Iterable[int]]) -> Matrix:
    out = []
    for r in rows:
        row = []
        for x in r:
            x = frac(x)
            if x.denominator != 1:
                raise ValueError(f"non-integer entry {x} in integer matrix")
            row.append(int(x))
        out.append(tuple(row))
    return tuple(out)


def dot(u: Sequence, v: Sequence):
    return sum(map(mul, u, v), 0)


def mat_vec(M: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(dot(row, v) for row in M)


def transpose(M: Sequence[Sequence], ncols: Optional[int] = None) -> Matrix:
    if not M:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*M))


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence], ncols: Optional[int] = None) -> Matrix:
    Bt = transpose(B, ncols)
    return tuple(tuple(dot(row, col) for col in Bt) for row in A)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def vec_add(u, v) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v) -> Vector:
    return tuple(c * a for a in v)


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b) if a and b else 0


def to_integer_vector(v: Sequence) -> tuple[int, ...]:
    """Positive multiple of ``v`` that is a primitive integer vector.

    The zero vector is returned unchanged (as ints).
    """
    v = [x if isinstance(x, (int, Fraction)) else frac(x) for x in v]
    den = math.lcm(*(x.denominator for x in v)) if v else 1
    ints = [x.numerator * (den // x.denominator) for x in v]
    g = gcd(*ints) if ints else 0
    if g <= 1:
        return tuple(ints)
    return tuple(x // g for x in ints)


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = reduce(gcd, v, 0)
    if g in (0, 1):
        return tuple(v)
    return tuple(x // g for x in v)


def normalize_sign(v: Sequence[int]) -> tuple[int, ...]:
    """Scale so that the leading nonzero entry is positive."""
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


# --------------------------------------------------------------------------
# rational elimination


def rref(M: Sequence[Sequence], ncols: Optional[int] = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q.  Returns (nonzero rows, pivot columns)."""
    rows = [[frac(x) for x in r] for r in M]
    n = len(rows[0]) if rows else (ncols or 0)
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        if pv != 1:
            rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(M: Sequence[Sequence]) -> int:
    if not M:
        return 0
    if all(type(x) is int for row in M for x in row):
        return _int_rank(M)
    return len(rref(M)[1])


def _int_rank(M: Sequence[Sequence[int]]) -> int:
    """Fraction-free elimination, keeping rows primitive."""
    rows = [list(r) for r in M if any(r)]
    r = 0
    n = len(rows[0]) if rows else 0
    for c in range(n):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pr = rows[r]
        a = pr[c]
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f:
                row = [a * x - f * y for x, y in zip(rows[i], pr)]
                g = reduce(gcd, row, 0)
                rows[i] = [x // g for x in row] if g > 1 else row
        r += 1
        if r == len(rows):
            break
    return r


def homogeneous(x: Sequence) -> tuple[int, ...]:
    """``(den * x, den)`` with the smallest positive integer ``den``."""
    x = [v if isinstance(v, (int, Fraction)) else frac(v) for v in x]
    den = math.lcm(*(v.denominator for v in x)) if x else 1
    return tuple(v.numerator * (den // v.denominator) for v in x) + (den,)


def int_nullspace(M: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Integer vectors spanning {x : M x = 0} over Q (fraction-free)."""
    rows = [list(r) for r in M if any(r)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pr = rows[r]
        a = pr[c]
        for i in range(len(rows)):
            f = rows[i][c]
            if i != r and f:
                row = [a * x - f * y for x, y in zip(rows[i], pr)]
                g = gcd(*row)
                rows[i] = [x // g for x in row] if g > 1 else row
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    rows = rows[:r]
    out = []
    for f in (c for c in range(n) if c not in pivots):
        D = 1
        for row, p in zip(rows, pivots):
            if row[f]:
                D = lcm(D, abs(row[p]))
        x = [0] * n
        x[f] = D
        for row, p in zip(rows, pivots):
            x[p] = -row[f] * D // row[p]
        out.append(primitive(x))
    return out


def nullspace(M: Sequence[Sequence], ncols: Optional[int] = None) -> list[Vector]:
    """Rational basis of {x : M x = 0}."""
    n = len(M[0]) if M else (ncols or 0)
    R, pivots = rref(M, n)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, p in zip(R, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def row_space_basis(M: Sequence[Sequence], ncols: Optional[int] = None) -> list[Vector]:
    R, _ = rref(M, ncols)
    return [tuple(r) for r in R]


def solve_rational(A: Sequence[Sequence], b: Sequence, ncols: Optional[int] = None) -> Optional[Vector]:
    """Some x with A x = b, or ``None`` when the system is inconsistent."""
    n = len(A[0]) if A else (ncols or 0)
    aug = [list(map(frac, row)) + [frac(bi)] for row, bi in zip(A, b)]
    R, pivots = rref(aug, n + 1)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, p in zip(R, pivots):
        x[p] = row[n]
    return tuple(x)


def determinant(M: Sequence[Sequence]) -> Fraction:
    rows = [[frac(x) for x in r] for r in M]
    n = len(rows)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            det = -det
        det *= rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] / rows[c][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return det


def inverse(M: Sequence[Sequence]) -> Matrix:
    n = len(M)
    aug = [list(map(frac, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    R, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(R) < n:
        raise ZeroDivisionError("matrix is singular")
    return tuple(tuple(r[n:]) for r in R)


def orthogonal_complement(vectors: Sequence[Sequence], dim: int) -> list[tuple[int, ...]]:
    """Primitive integer basis (rationally) of the orthogonal complement."""
    return [to_integer_vector(v) for v in nullspace(list(vectors), dim)]


class Projector:
    """Orthogonal projection onto the complement of a rational subspace.

    Stored as an integer matrix ``M`` and denominator ``D`` with
    ``proj(x) = M x / D``.
    """

    def __init__(self, basis: Sequence[Sequence], dim: int):
        self.dim = dim
        self.basis = [qvec(b) for b in row_space_basis(basis, dim)] if basis else []
        if not self.basis:
            self.matrix, self.den = None, 1
            return
        gram = [[dot(u, v) for v in self.basis] for u in self.basis]
        GB = mat_mul(inverse(gram), self.basis)
        # I - B^T G^-1 B
        rows = [[Fraction(int(i == j)) - sum((b[i] * g[j] for b, g in zip(self.basis, GB)), Fraction(0))
                 for j in range(dim)] for i in range(dim)]
        D = 1
        for r in rows:
            for x in r:
                D = lcm(D, x.denominator)
        self.matrix = tuple(tuple(int(x * D) for x in r) for r in rows)
        self.den = D

    def __call__(self, x: Sequence, den: int = 1) -> Vector:
        """Projection of ``x / den``."""
        if self.matrix is None:
            return tuple(Fraction(v, den) for v in x)
        D = self.den * den
        return tuple(Fraction(dot(row, x), D) for row in self.matrix)

    def direction(self, x: Sequence[int]) -> tuple[int, ...]:
        """Primitive integer vector along the projection of integer ``x``."""
        if self.matrix is None:
            return to_integer_vector(x)
        return to_integer_vector(tuple(dot(row, x) for row in self.matrix))


# --------------------------------------------------------------------------
# integer lattices


def hermite_normal_form(M: Sequence[Sequence[int]], ncols: Optional[int] = None) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``H = U M``, ``U`` unimodular, and ``H`` in echelon
    form with positive pivots, entries above each pivot reduced into
    ``[0, pivot)`` and zero rows at the bottom.  Among rows competing for a
    pivot, the smallest absolute value wins, ties going to the lowest index.
    """
    rows = [[int(x) for x in r] for r in M]
    m = len(rows)
    n = len(rows[0]) if rows else (ncols or 0)
    U = [[int(i == j) for j in range(m)] for i in range(m)]

    def axpy(dst, src, q):
        rows[dst] = [a - q * b for a, b in zip(rows[dst], rows[src])]
        U[dst] = [a - q * b for a, b in zip(U[dst], U[src])]

    r = 0
    for c in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if rows[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(rows[i][c]), i))
            if p != r:
                rows[r], rows[p] = rows[p], rows[r]
                U[r], U[p] = U[p], U[r]
            clean = True
            for i in range(r + 1, m):
                if rows[i][c]:
                    axpy(i, r, rows[i][c] // rows[r][c])
                    if rows[i][c]:
                        clean = False
            if clean:
                break
        if rows[r][c] == 0:
            continue
        if rows[r][c] < 0:
            rows[r] = [-x for x in rows[r]]
            U[r] = [-x for x in U[r]]
        for i in range(r):
            if rows[i][c]:
                axpy(i, r, rows[i][c] // rows[r][c])
        r += 1
    return tuple(map(tuple, rows)), tuple(map(tuple, U))


def lattice_basis(vectors: Sequence[Sequence[int]], dim: int) -> list[tuple[int, ...]]:
    """HNF basis of the lattice generated by integer ``vectors``."""
    if not vectors:
        return []
    H, _ = hermite_normal_form(vectors, dim)
    return [row for row in H if any(row)]


def integer_rank(M: Sequence[Sequence[int]]) -> int:
    return rank(M)


def integer_kernel_basis(M: Sequence[Sequence[int]], ncols: Optional[int] = None) -> list[tuple[int, ...]]:
    """Saturated Z-basis of ker(M) cap Z^n, returned in Hermite normal form."""
    n = len(M[0]) if M else (ncols or 0)
    H, U = hermite_normal_form(transpose(M, n), len(M))
    kernel = [u for h, u in zip(H, U) if not any(h)]
    return lattice_basis(kernel, n)


def integer_image_basis(M: Sequence[Sequence[int]], ncols: Optional[int] = None) -> list[tuple[int, ...]]:
    """Z-basis (HNF) of the image lattice M Z^n in Z^d."""
    d = len(M)
    return lattice_basis(list(transpose(M, ncols)), d)


def saturated_basis(vectors: Sequence[Sequence], dim: int) -> list[tuple[int, ...]]:
    """HNF basis of span_Q(vectors) cap Z^dim."""
    if not vectors or rank(vectors) == 0:
        return []
    comp = orthogonal_complement(vectors, dim)
    return integer_kernel_basis(comp, dim)
