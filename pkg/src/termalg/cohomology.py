"""Scalar-valued cocycles, coboundaries and the second cohomology space.

A cocycle is an n x n rational Matrix M: the bilinear form sending
(e_i, e_j) to M[i][j].  Matrices flatten row-major into Q^(n^2); all
subspace computations happen there.  The cocycle condition is the
theta-shaped version of the conservative identity with the companion
product fixed to 2/3 xy + 1/3 yx; it is linear in theta, so the space of
cocycles is a kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import Algebra
from .errors import DependentClasses, DimensionMismatch, NotACocycle
from .exactmath import Matrix, Q, Subspace, Vec, kernel, qvec, solve


def flatten_cocycle(th: Matrix) -> Vec:
    return th.entries


def unflatten_cocycle(n: int, v: Sequence[Fraction]) -> Matrix:
    return Matrix(n, n, v)


def cocycle_from_triples(n: int, triples: Sequence[tuple[int, int, Fraction]]) -> Matrix:
    """Sparse (i, j, value) triples, 1-based indices."""
    entries = [Q(0)] * (n * n)
    for i, j, v in triples:
        if not (1 <= i <= n and 1 <= j <= n):
            raise DimensionMismatch("cocycle index (%d,%d) out of range" % (i, j))
        entries[(i - 1) * n + (j - 1)] += Q(v)
    return Matrix(n, n, entries)


def cocycle_to_triples(th: Matrix) -> list[tuple[int, int, Fraction]]:
    out = []
    for i in range(th.rows):
        for j in range(th.cols):
            v = th[i, j]
            if v != 0:
                out.append((i + 1, j + 1, v))
    return out


def _defect_pairs(a: Algebra, ia: int, ib: int, ix: int, iy: int):
    """Signed argument pairs (sign, u, v) such that the cocycle defect at the
    basis quadruple equals sum(sign * theta(u, v)) / (3 * D^2); u, v are
    integer-scaled vectors from the fast tables."""
    f = a.fast()
    p = f.p
    n = f.n
    eb = tuple(1 if k == ib else 0 for k in range(n))
    ea = tuple(1 if k == ia else 0 for k in range(n))
    ex = tuple(1 if k == ix else 0 for k in range(n))
    ey = tuple(1 if k == iy else 0 for k in range(n))
    inner = tuple(
        u - v - w
        for u, v, w in zip(f.lmul(ia, p[ix][iy]), f.rmul(p[ia][ix], iy), f.lmul(ix, p[ia][iy]))
    )
    p3 = tuple(2 * u + v for u, v in zip(p[ia][ib], p[ib][ia]))
    # every pair below carries exactly two D-scaled products, so the raw
    # bilinear value is (3 * D^2) times the true defect
    return (
        (3, eb, inner),
        (-3, ea, f.rmul(p[ib][ix], iy)),
        (3, f.lmul(ia, p[ib][ix]), ey),
        (3, p[ib][ix], p[ia][iy]),
        (-3, ea, f.lmul(ix, p[ib][iy])),
        (3, p[ia][ix], p[ib][iy]),
        (3, ex, f.lmul(ia, p[ib][iy])),
        (1, p3, p[ix][iy]),
        (-1, f.rmul(p3, ix), ey),
        (-1, ex, f.rmul(p3, iy)),
    )


def cocycle_defect(a: Algebra, th: Matrix, q: tuple[int, int, int, int]) -> Fraction:
    """Exact LHS - RHS of the cocycle identity at basis indices (a,b,x,y)."""
    if th.rows != a.dim or th.cols != a.dim:
        raise DimensionMismatch("cocycle shape mismatch")
    f = a.fast()
    total = Q(0)
    for sign, u, v in _defect_pairs(a, *q):
        s = 0
        for i, ui in enumerate(u):
            if ui:
                row = th.row(i)
                for j, vj in enumerate(v):
                    if vj:
                        s += ui * vj * row[j]
        total += sign * s
    return total / (3 * f.den_scale ** 2)


def is_cocycle(a: Algebra, th: Matrix) -> bool:
    n = a.dim
    for ia in range(n):
        for ib in range(n):
            for ix in range(n):
                for iy in range(n):
                    if cocycle_defect(a, th, (ia, ib, ix, iy)) != 0:
                        return False
    return True


def z2_basis(a: Algebra) -> Subspace:
    """All cocycles, as a canonical subspace of Q^(n^2)."""
    n = a.dim
    rows = set()
    for ia in range(n):
        for ib in range(n):
            for ix in range(n):
                for iy in range(n):
                    row = [0] * (n * n)
                    nonzero = False
                    for sign, u, v in _defect_pairs(a, ia, ib, ix, iy):
                        for i, ui in enumerate(u):
                            if ui:
                                base = i * n
                                for j, vj in enumerate(v):
                                    if vj:
                                        row[base + j] += sign * ui * vj
                                        nonzero = True
                    if nonzero and any(row):
                        g = 0
                        for x in row:
                            g = math.gcd(g, x)
                        rows.add(tuple(x // g for x in row))
    if not rows:
        return Subspace.full(n * n)
    return kernel(Matrix.from_rows(sorted(rows)))


def b2_basis(a: Algebra) -> Subspace:
    """Coboundaries f(xy): spanned by the k-slices of the structure tensor."""
    n = a.dim
    slices = []
    for k in range(n):
        slices.append([a.c[i][j][k] for i in range(n) for j in range(n)])
    return Subspace.from_vectors(n * n, slices)


def coboundary(a: Algebra, f_row: Sequence[Fraction]) -> Matrix:
    """delta f with f the linear functional given by f_row."""
    n = a.dim
    f_row = qvec(f_row)
    entries = []
    for i in range(n):
        for j in range(n):
            entries.append(sum((f_row[k] * a.c[i][j][k] for k in range(n)), Q(0)))
    return Matrix(n, n, entries)


@dataclass(frozen=True)
class CohomologyBasis:
    z2: Subspace
    b2: Subspace
    reps: tuple[Matrix, ...]

    @property
    def dim_h2(self) -> int:
        return len(self.reps)


def h2(a: Algebra, preferred_reps: Optional[Sequence[Matrix]] = None) -> CohomologyBasis:
    """Cohomology basis with chosen class representatives.

    Preferred representatives must be cocycles with classes independent mod
    coboundaries; when they do not span the whole quotient the complement
    is filled deterministically (lexicographically-first pivots of the
    cocycle space not already covered).
    """
    z2 = z2_basis(a)
    b2 = b2_basis(a)
    n = a.dim
    chosen: list[Vec] = []
    span_rows = [list(v) for v in b2.basis]

    def try_add(flat: Vec) -> bool:
        cand = Subspace.from_vectors(n * n, span_rows + [list(flat)])
        if cand.dim == len(span_rows) + 1:
            span_rows.append(list(flat))
            return True
        return False

    if preferred_reps:
        for th in preferred_reps:
            flat = flatten_cocycle(th)
            if not z2.contains(flat):
                raise NotACocycle("preferred representative is not a cocycle")
            if not try_add(flat):
                raise DependentClasses(
                    "preferred representatives dependent modulo coboundaries"
                )
            chosen.append(flat)
    for v in z2.basis:
        if len(span_rows) == z2.dim:
            break
        if try_add(v):
            chosen.append(v)
    reps = tuple(unflatten_cocycle(n, v) for v in chosen)
    return CohomologyBasis(z2=z2, b2=b2, reps=reps)


def class_coords(cb: CohomologyBasis, th: Matrix) -> Vec:
    """Coordinates of [theta] in the representative basis (exact)."""
    flat = flatten_cocycle(th)
    if not cb.z2.contains(flat):
        raise NotACocycle("not a cocycle for this algebra")
    cols = [flatten_cocycle(r) for r in cb.reps] + [v for v in cb.b2.basis]
    if not cols:
        return ()
    m = Matrix.from_rows(cols).transpose()
    x = solve(m, flat)
    if x is None:
        raise NotACocycle("cocycle outside reps + coboundaries")
    return x[: len(cb.reps)]


def ann_of_cocycle(a: Algebra, th: Matrix) -> Subspace:
    """Ann(theta) = {x : theta(x, A) = theta(A, x) = 0}."""
    if th.rows != a.dim or th.cols != a.dim:
        raise DimensionMismatch("cocycle shape mismatch")
    rows = [list(th.col(j)) for j in range(th.cols)]  # theta(x, e_j) = 0
    rows += [list(th.row(i)) for i in range(th.rows)]  # theta(e_i, x) = 0
    return kernel(Matrix.from_rows(rows))
