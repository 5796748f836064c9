"""The terminal identity, checked two independent ways.

The primary route evaluates the degree-4 conservative-form identity with
the companion product fixed to 2/3 xy + 1/3 yx; the oracle route expands
the defining nested-bracket condition directly.  Both are multilinear, so
scanning basis quadruples decides them.  Scans run on integer-scaled
structure tensors (the identities are homogeneous in the tensor, so
zero-testing is unaffected).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Optional, Sequence

from .algebra import Algebra
from .errors import DimensionMismatch
from .exactmath import Q, Vec, qvec, vec_sub, zero_vec


@dataclass(frozen=True)
class DefectReport:
    """holds=True means no witness; witness indices are 0-based."""

    holds: bool
    witness: Optional[tuple[tuple[int, int, int, int], Vec]] = None

    def __post_init__(self):
        assert self.holds == (self.witness is None)


def pstar(a: Algebra) -> Algebra:
    """Companion product 2/3 xy + 1/3 yx on the same space."""
    n = a.dim
    c = tuple(
        tuple(
            tuple(Q(2, 3) * a.c[i][j][k] + Q(1, 3) * a.c[j][i][k] for k in range(n))
            for j in range(n)
        )
        for i in range(n)
    )
    return Algebra(a.name + "*", n, c, a.binding)


def conservative_defect(
    a: Algebra, ps: Algebra, q: Sequence[Sequence]
) -> Vec:
    """LHS - RHS of the degree-4 conservative identity at vectors (a,b,x,y)."""
    if ps.dim != a.dim:
        raise DimensionMismatch("companion algebra dimension mismatch")
    av, bv, xv, yv = (qvec(v) for v in q)
    m = a.multiply
    inner = vec_sub(vec_sub(m(av, m(xv, yv)), m(m(av, xv), yv)), m(xv, m(av, yv)))
    lhs = list(m(bv, inner))
    terms = (
        (-1, m(av, m(m(bv, xv), yv))),
        (1, m(m(av, m(bv, xv)), yv)),
        (1, m(m(bv, xv), m(av, yv))),
        (-1, m(av, m(xv, m(bv, yv)))),
        (1, m(m(av, xv), m(bv, yv))),
        (1, m(xv, m(av, m(bv, yv)))),
    )
    for s, t in terms:
        lhs = [u + s * v for u, v in zip(lhs, t)]
    p = ps.multiply(av, bv)
    rhs = [Q(0)] * a.dim
    for s, t in ((-1, m(p, m(xv, yv))), (1, m(m(p, xv), yv)), (1, m(xv, m(p, yv)))):
        rhs = [u + s * v for u, v in zip(rhs, t)]
    return tuple(u - v for u, v in zip(lhs, rhs))


def terminal_defect_direct(a: Algebra, q: Sequence[Sequence]) -> Vec:
    """Nested-bracket expansion at vectors (a,x,y,z): with B1(u,v) =
    a(uv) - (au)v - u(av), returns the trilinear bracket of B1 against the
    product at (x,y,z)."""
    av, xv, yv, zv = (qvec(v) for v in q)
    m = a.multiply

    def b1(u, v):
        return vec_sub(vec_sub(m(av, m(u, v)), m(m(av, u), v)), m(u, m(av, v)))

    out = list(b1(m(xv, yv), zv))
    for s, t in (
        (1, b1(xv, m(yv, zv))),
        (1, b1(yv, m(xv, zv))),
        (-1, m(b1(xv, yv), zv)),
        (-1, m(xv, b1(yv, zv))),
        (-1, m(yv, b1(xv, zv))),
    ):
        out = [u + s * v for u, v in zip(out, t)]
    return tuple(out)


def _vec_iadd(acc: list[int], v: Sequence[int], s: int) -> None:
    for k, x in enumerate(v):
        if x:
            acc[k] += s * x


def _terminal_witness_scan(a: Algebra) -> Optional[tuple[int, int, int, int]]:
    """First basis quadruple (lexicographic) violating the conservative form."""
    f = a.fast()
    n = f.n
    p = f.p
    rng = range(n)
    for ia in rng:
        pa = p[ia]
        for ib in rng:
            p3 = tuple(2 * u + v for u, v in zip(p[ia][ib], p[ib][ia]))
            pb = p[ib]
            for ix in rng:
                pbx = pb[ix]
                a_bx = f.lmul(ia, pbx)
                rx_p3 = f.rmul(p3, ix)
                for iy in rng:
                    acc = [0] * n
                    inner = [
                        u - v - w
                        for u, v, w in zip(
                            f.lmul(ia, p[ix][iy]),
                            f.rmul(pa[ix], iy),
                            f.lmul(ix, pa[iy]),
                        )
                    ]
                    _vec_iadd(acc, f.lmul(ib, inner), 3)
                    _vec_iadd(acc, f.lmul(ia, f.rmul(pbx, iy)), -3)
                    _vec_iadd(acc, f.rmul(a_bx, iy), 3)
                    _vec_iadd(acc, f.vmul(pbx, pa[iy]), 3)
                    _vec_iadd(acc, f.lmul(ia, f.lmul(ix, pb[iy])), -3)
                    _vec_iadd(acc, f.vmul(pa[ix], pb[iy]), 3)
                    _vec_iadd(acc, f.lmul(ix, f.lmul(ia, pb[iy])), 3)
                    _vec_iadd(acc, f.vmul(p3, p[ix][iy]), 1)
                    _vec_iadd(acc, f.rmul(rx_p3, iy), -1)
                    _vec_iadd(acc, f.lmul(ix, f.rmul(p3, iy)), -1)
                    if any(acc):
                        return (ia, ib, ix, iy)
    return None


def is_terminal(a: Algebra) -> DefectReport:
    """Scan all basis quadruples; report the first failing one, if any."""
    bad = _terminal_witness_scan(a)
    if bad is None:
        return DefectReport(holds=True)
    n = a.dim
    basis = [tuple(Q(1) if i == k else Q(0) for i in range(n)) for k in range(n)]
    ps = pstar(a)
    vec = conservative_defect(a, ps, tuple(basis[i] for i in bad))
    return DefectReport(holds=False, witness=(bad, vec))


def _direct_zero_scan(a: Algebra) -> bool:
    """Integer scan of the nested-bracket expansion over basis quadruples."""
    f = a.fast()
    n = f.n
    p = f.p
    rng = range(n)
    units = [tuple(1 if i == k else 0 for i in range(n)) for k in rng]
    for ia in rng:
        # b1[i][j] = B1(e_i, e_j) with B1 from terminal_defect_direct
        b1 = [
            [
                tuple(
                    u - v - w
                    for u, v, w in zip(
                        f.lmul(ia, p[i][j]),
                        f.vmul(f.lmul(ia, units[i]), units[j]),
                        f.vmul(units[i], f.lmul(ia, units[j])),
                    )
                )
                for j in rng
            ]
            for i in rng
        ]
        for ix in rng:
            for iy in rng:
                pxy = p[ix][iy]
                b1xy = b1[ix][iy]
                for iz in rng:
                    acc = [0] * n
                    for k in rng:
                        if pxy[k]:
                            _vec_iadd(acc, b1[k][iz], pxy[k])
                        cyz = p[iy][iz][k]
                        if cyz:
                            _vec_iadd(acc, b1[ix][k], cyz)
                        cxz = p[ix][iz][k]
                        if cxz:
                            _vec_iadd(acc, b1[iy][k], cxz)
                    _vec_iadd(acc, f.rmul(b1xy, iz), -1)
                    _vec_iadd(acc, f.lmul(ix, b1[iy][iz]), -1)
                    _vec_iadd(acc, f.lmul(iy, b1[ix][iz]), -1)
                    if any(acc):
                        return False
    return True


def is_terminal_direct(a: Algebra) -> bool:
    """Oracle formulation: the nested-bracket expansion vanishes identically."""
    return _direct_zero_scan(a)


def jordan_identity_holds(a: Algebra) -> bool:
    """(x^2 y) x == x^2 (y x) on all basis pairs (only meaningful when
    commutative)."""
    n = a.dim
    units = [tuple(Q(1) if i == k else Q(0) for i in range(n)) for k in range(n)]
    for x in units:
        x2 = a.multiply(x, x)
        for y in units:
            lhs = a.multiply(a.multiply(x2, y), x)
            rhs = a.multiply(x2, a.multiply(y, x))
            if lhs != rhs:
                return False
    return True


def random_algebra(rng, dim: int, density: float = 0.8) -> Algebra:
    """Dense-ish random rational algebra (generically not terminal)."""
    c = [[zero_vec(dim) for _ in range(dim)] for _ in range(dim)]
    for i, j in iproduct(range(dim), repeat=2):
        row = [
            Q(rng.randint(-3, 3)) if rng.random() < density else Q(0)
            for _ in range(dim)
        ]
        c[i][j] = tuple(row)
    return Algebra("random", dim, tuple(tuple(r) for r in c))
