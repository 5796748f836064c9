"""Dense exact linear algebra over the rationals.

Scalars are ``fractions.Fraction`` (always in lowest terms with a positive
denominator, so the representation is canonical).  Vectors are tuples of
Fractions; matrices are immutable row-major containers.  Subspaces are kept
in reduced row-echelon form, which makes equality of subspaces a plain
tuple comparison.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import DimensionMismatch

Q = Fraction
Vec = tuple[Fraction, ...]

ZERO = Q(0)
ONE = Q(1)


def qvec(items: Iterable) -> Vec:
    return tuple(Q(x) for x in items)


def zero_vec(n: int) -> Vec:
    return (ZERO,) * n


def unit_vec(n: int, i: int) -> Vec:
    """Standard basis vector e_i (0-indexed)."""
    return tuple(ONE if j == i else ZERO for j in range(n))


def vec_add(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c: Fraction, u: Vec) -> Vec:
    return tuple(c * a for a in u)


def is_zero_vec(u: Vec) -> bool:
    return all(a == 0 for a in u)


class Matrix:
    """Immutable rows x cols matrix of Fractions, row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        self.rows = rows
        self.cols = cols
        self.entries = tuple(Q(x) for x in entries)
        if len(self.entries) != rows * cols:
            raise DimensionMismatch(
                "expected %d entries, got %d" % (rows * cols, len(self.entries))
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "Matrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise DimensionMismatch("ragged rows")
            flat.extend(row)
        return cls(r, c, flat)

    @classmethod
    def zero(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, [ZERO] * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, [ONE if i == j else ZERO for i in range(n) for j in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vec:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> Vec:
        return self.entries[j :: self.cols]

    def row_list(self) -> list[Vec]:
        return [self.row(i) for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix(
            self.cols,
            self.rows,
            [self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)],
        )

    def matvec(self, v: Sequence[Fraction]) -> Vec:
        if len(v) != self.cols:
            raise DimensionMismatch("matvec: %d vs %d" % (self.cols, len(v)))
        return tuple(
            sum((self.entries[i * self.cols + j] * v[j] for j in range(self.cols)), ZERO)
            for i in range(self.rows)
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise DimensionMismatch("matmul: %d vs %d" % (self.cols, other.rows))
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum((ri[k] * other[k, j] for k in range(self.cols)), ZERO))
        return Matrix(self.rows, other.cols, out)

    def __add__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("matrix add shape mismatch")
        return Matrix(self.rows, self.cols, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("matrix sub shape mismatch")
        return Matrix(self.rows, self.cols, [a - b for a, b in zip(self.entries, other.entries)])

    def scale(self, c) -> "Matrix":
        c = Q(c)
        return Matrix(self.rows, self.cols, [c * a for a in self.entries])

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.entries)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(
            ", ".join(str(x) for x in self.row(i)) for i in range(self.rows)
        )
        return "Matrix(%dx%d: %s)" % (self.rows, self.cols, body)


def _rref_rows(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """In-place RREF; returns (rows, pivot column indices)."""
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = ONE / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rref(m: Matrix) -> Matrix:
    """Reduced row-echelon form; the row space is preserved."""
    rows, _ = _rref_rows([list(m.row(i)) for i in range(m.rows)])
    return Matrix.from_rows(rows) if rows else m


def rank(m: Matrix) -> int:
    _, pivots = _rref_rows([list(m.row(i)) for i in range(m.rows)])
    return len(pivots)


def solve(m: Matrix, b: Sequence[Fraction]) -> Vec | None:
    """One exact solution of m x = b, or None when inconsistent.

    Free variables are set to zero.
    """
    if len(b) != m.rows:
        raise DimensionMismatch("solve: %d vs %d" % (m.rows, len(b)))
    aug = [list(m.row(i)) + [b[i]] for i in range(m.rows)]
    rows, pivots = _rref_rows(aug)
    if m.cols in pivots:
        return None
    x = [ZERO] * m.cols
    for r, c in enumerate(pivots):
        x[c] = rows[r][m.cols]
    return tuple(x)


class Subspace:
    """Subspace of Q^n held as a canonical RREF basis (no zero rows)."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, basis: Sequence[Vec]):
        self.ambient_dim = ambient_dim
        self.basis = tuple(tuple(v) for v in basis)

    @classmethod
    def from_vectors(cls, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        rows = []
        for v in vectors:
            v = qvec(v)
            if len(v) != ambient_dim:
                raise DimensionMismatch("vector length %d in Q^%d" % (len(v), ambient_dim))
            rows.append(list(v))
        reduced, pivots = _rref_rows(rows)
        return cls(ambient_dim, [tuple(reduced[i]) for i in range(len(pivots))])

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, [])

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, [unit_vec(ambient_dim, i) for i in range(ambient_dim)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence[Fraction]) -> bool:
        v = list(qvec(v))
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector length mismatch")
        for row in self.basis:
            p = _pivot_col(row)
            if v[p] != 0:
                f = v[p]
                v = [a - f * b for a, b in zip(v, row)]
        return all(a == 0 for a in v)

    def coords(self, v: Sequence[Fraction]) -> Vec | None:
        """Coordinates of v in the canonical basis, or None if v is outside."""
        v = list(qvec(v))
        out = []
        for row in self.basis:
            p = _pivot_col(row)
            c = v[p]
            out.append(c)
            if c != 0:
                v = [a - c * b for a, b in zip(v, row)]
        if any(a != 0 for a in v):
            return None
        return tuple(out)

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(v) for v in self.basis)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return "Subspace(dim=%d of Q^%d)" % (self.dim, self.ambient_dim)


def _pivot_col(row: Vec) -> int:
    for j, x in enumerate(row):
        if x != 0:
            return j
    raise ValueError("zero row in canonical basis")


def kernel(m: Matrix) -> Subspace:
    """Null space {v : m v = 0} as a canonical subspace of Q^cols."""
    rows, pivots = _rref_rows([list(m.row(i)) for i in range(m.rows)])
    free = [c for c in range(m.cols) if c not in pivots]
    vecs = []
    for f in free:
        v = [ZERO] * m.cols
        v[f] = ONE
        for r, c in enumerate(pivots):
            v[c] = -rows[r][f]
        vecs.append(v)
    return Subspace.from_vectors(m.cols, vecs)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("ambient mismatch")
    return Subspace.from_vectors(a.ambient_dim, list(a.basis) + list(b.basis))


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Zassenhaus: reduce [A|A] over [B|0]; rows with zero left block give a cap b."""
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("ambient mismatch")
    n = a.ambient_dim
    rows = [list(v) + list(v) for v in a.basis]
    rows += [list(v) + [ZERO] * n for v in b.basis]
    reduced, pivots = _rref_rows(rows)
    out = []
    for i in range(len(pivots)):
        left = reduced[i][:n]
        if all(x == 0 for x in left):
            out.append(reduced[i][n:])
    return Subspace.from_vectors(n, out)


def quotient_coords(s: Subspace, complement: Subspace, v: Sequence[Fraction]) -> Vec:
    """Coordinates of v modulo s, written in complement's basis.

    Requires v in s + complement; the reconstruction
    v - sum(coords_i * complement.basis[i]) lies in s exactly.
    """
    if s.ambient_dim != complement.ambient_dim:
        raise DimensionMismatch("ambient mismatch")
    n = s.ambient_dim
    v = qvec(v)
    if len(v) != n:
        raise DimensionMismatch("vector length mismatch")
    cols = list(complement.basis) + list(s.basis)
    if not cols:
        if is_zero_vec(v):
            return ()
        raise ValueError("v outside s + complement")
    m = Matrix.from_rows(cols).transpose()
    x = solve(m, v)
    if x is None:
        raise ValueError("v outside s + complement")
    return x[: complement.dim]
