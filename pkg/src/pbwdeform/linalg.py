"""Dense exact linear algebra over a cyclotomic field.

Every elimination is Gauss-Jordan with the leftmost nonzero pivot and full
reduction, so reduced echelon forms (and hence subspace bases) are canonical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .scalar import CyclotomicContext, Scalar

Vector = tuple  # tuple of Scalars


class DimensionError(ValueError):
    pass


class Matrix:
    """Immutable rows x cols matrix of Scalars, stored row-major."""

    __slots__ = ("ctx", "rows", "cols", "entries")

    def __init__(self, ctx: CyclotomicContext, data: Sequence[Sequence], cols: Optional[int] = None):
        self.ctx = ctx
        self.entries = tuple(tuple(ctx(x) for x in row) for row in data)
        self.rows = len(self.entries)
        if cols is None:
            cols = len(self.entries[0]) if self.entries else 0
        self.cols = cols
        if any(len(r) != cols for r in self.entries):
            raise DimensionError("ragged matrix rows")

    @classmethod
    def identity(cls, ctx: CyclotomicContext, n: int) -> "Matrix":
        return cls(ctx, [[ctx.one if i == j else ctx.zero for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, ctx: CyclotomicContext, rows: int, cols: int) -> "Matrix":
        return cls(ctx, [[ctx.zero] * cols for _ in range(rows)], cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        zero = self.ctx.zero
        out = []
        for r in self.entries:
            row = []
            for j in range(other.cols):
                acc = zero
                for k, a in enumerate(r):
                    if a:
                        b = other.entries[k][j]
                        if b:
                            acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Matrix(self.ctx, out, other.cols)

    def apply(self, v: Sequence[Scalar]) -> Vector:
        """Matrix times column vector."""
        if len(v) != self.cols:
            raise DimensionError("vector length does not match matrix columns")
        zero = self.ctx.zero
        out = []
        for r in self.entries:
            acc = zero
            for a, x in zip(r, v):
                if a and x:
                    acc = acc + a * x
            out.append(acc)
        return tuple(out)

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.ctx, [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.ctx, [[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)], self.cols)

    def scale(self, c) -> "Matrix":
        return Matrix(self.ctx, [[a * c for a in r] for r in self.entries], self.cols)

    def transpose(self) -> "Matrix":
        return Matrix(self.ctx, [self.column(j) for j in range(self.cols)], self.rows)

    def conjugate_transpose(self) -> "Matrix":
        return Matrix(self.ctx, [[x.conjugate() for x in self.column(j)] for j in range(self.cols)], self.rows)

    def is_identity(self) -> bool:
        return self.rows == self.cols and all(
            (x == 1) if i == j else x.is_zero() for i, r in enumerate(self.entries) for j, x in enumerate(r)
        )

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(x) for x in r) for r in self.entries)
        return f"Matrix([{body}])"


def rref(rows: Iterable[Sequence[Scalar]], ncols: int) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form.  Returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pivot_row = m[r]
        pv = pivot_row[c]
        if pv != 1:
            inv = pv.inverse()
            pivot_row = [x * inv if x else x for x in pivot_row]
            m[r] = pivot_row
        nz = [k for k in range(c, ncols) if pivot_row[k]]
        for i in range(len(m)):
            if i != r:
                f = m[i][c]
                if f:
                    row = m[i]
                    for k in nz:
                        row[k] = row[k] - f * pivot_row[k]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


@dataclass(frozen=True)
class Subspace:
    """A subspace of ctx^ambient_dim with its canonical reduced echelon basis."""

    ctx: CyclotomicContext
    ambient_dim: int
    basis: tuple  # tuple of Vectors
    pivots: tuple

    @classmethod
    def span(cls, ctx: CyclotomicContext, ambient_dim: int, vectors: Iterable[Sequence[Scalar]]) -> "Subspace":
        vecs = [tuple(ctx(x) for x in v) for v in vectors]
        if any(len(v) != ambient_dim for v in vecs):
            raise DimensionError("spanning vector of wrong length")
        rows, pivots = rref(vecs, ambient_dim)
        return cls(ctx, ambient_dim, tuple(tuple(r) for r in rows), tuple(pivots))

    @classmethod
    def full(cls, ctx: CyclotomicContext, n: int) -> "Subspace":
        return cls.span(ctx, n, Matrix.identity(ctx, n).entries)

    @classmethod
    def zero(cls, ctx: CyclotomicContext, n: int) -> "Subspace":
        return cls(ctx, n, (), ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coordinates(self, v: Sequence[Scalar]) -> Optional[tuple]:
        """Coefficients of v in the echelon basis, or None if v is not in the span."""
        residue = [self.ctx(x) for x in v]
        coeffs = []
        for b, p in zip(self.basis, self.pivots):
            c = residue[p]
            coeffs.append(c)
            if c:
                residue = [x - c * y for x, y in zip(residue, b)]
        if any(residue):
            return None
        return tuple(coeffs)

    def contains(self, v: Sequence[Scalar]) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionError("vector of wrong length")
        return self.coordinates(v) is not None

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.ctx, self.ambient_dim, self.basis + other.basis)

    def intersection(self, other: "Subspace") -> "Subspace":
        # x = sum a_i b_i = sum c_j d_j  <=>  (a, -c) in nullspace of [B^T | -D^T]
        n = self.ambient_dim
        k = self.dim
        cols = list(self.basis) + [tuple(-x for x in d) for d in other.basis]
        if not cols:
            return Subspace.zero(self.ctx, n)
        A = Matrix(self.ctx, [[c[i] for c in cols] for i in range(n)], len(cols))
        ker = nullspace(A)
        vecs = []
        for sol in ker.basis:
            v = [self.ctx.zero] * n
            for a, b in zip(sol[:k], self.basis):
                if a:
                    v = [x + a * y for x, y in zip(v, b)]
            vecs.append(v)
        return Subspace.span(self.ctx, n, vecs)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def nullspace(A: Matrix) -> Subspace:
    """Canonical basis of {x : A x = 0}."""
    rows, pivots = rref(A.entries, A.cols)
    ctx = A.ctx
    free = [c for c in range(A.cols) if c not in set(pivots)]
    vecs = []
    for f in free:
        v = [ctx.zero] * A.cols
        v[f] = ctx.one
        for r, p in zip(rows, pivots):
            if r[f]:
                v[p] = -r[f]
        vecs.append(v)
    return Subspace.span(ctx, A.cols, vecs)


def rank(A: Matrix) -> int:
    return len(rref(A.entries, A.cols)[1])


def solve_affine(A: Matrix, b: Sequence[Scalar]) -> Optional[tuple[Vector, Subspace]]:
    """Solve A x = b.  None if b is outside the column space, else (particular, kernel).

    The particular solution has zeros in every free coordinate.
    """
    if len(b) != A.rows:
        raise DimensionError(f"right-hand side has length {len(b)}, expected {A.rows}")
    ctx = A.ctx
    augmented = [list(r) + [ctx(x)] for r, x in zip(A.entries, b)]
    rows, pivots = rref(augmented, A.cols + 1)
    if pivots and pivots[-1] == A.cols:
        return None
    x = [ctx.zero] * A.cols
    for r, p in zip(rows, pivots):
        x[p] = r[A.cols]
    return tuple(x), nullspace(A)


def inverse(A: Matrix) -> Matrix:
    if A.rows != A.cols:
        raise DimensionError("only square matrices are invertible")
    n = A.rows
    ctx = A.ctx
    aug = [list(r) + [ctx.one if i == j else ctx.zero for j in range(n)] for i, r in enumerate(A.entries)]
    rows, pivots = rref(aug, 2 * n)
    if len(pivots) < n or pivots[n - 1] != n - 1:
        raise ZeroDivisionError("matrix is singular")
    return Matrix(ctx, [r[n:] for r in rows], n)


def determinant(A: Matrix) -> Scalar:
    """Determinant by elimination (used only for small invertibility checks)."""
    if A.rows != A.cols:
        raise DimensionError("determinant of a non-square matrix")
    m = [list(r) for r in A.entries]
    n = A.rows
    det = A.ctx.one
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c]), None)
        if p is None:
            return A.ctx.zero
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det = det * m[c][c]
        inv = m[c][c].inverse()
        for i in range(c + 1, n):
            f = m[i][c] * inv
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det
