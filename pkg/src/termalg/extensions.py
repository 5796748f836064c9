"""Central extensions A + V with product xy + theta(x,y).

New basis vectors are appended after the base basis, one per cocycle, and
annihilate everything.  Construction validates the cocycle condition
eagerly: a non-cocycle would produce a non-terminal extension.
"""

from __future__ import annotations

from typing import Optional, Sequence

from dataclasses import dataclass

from .algebra import Algebra, annihilator
from .cohomology import (
    CohomologyBasis,
    class_coords,
    cocycle_defect,
    ann_of_cocycle,
    is_cocycle,
)
from .errors import DimensionMismatch, NotACocycle
from .exactmath import Matrix, Q, Subspace, intersect, subspace_sum, unit_vec, zero_vec


@dataclass(frozen=True)
class ExtensionSpec:
    base: Algebra
    cocycles: tuple[Matrix, ...]
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if not self.cocycles:
            raise DimensionMismatch("need at least one cocycle")
        for th in self.cocycles:
            if th.rows != self.base.dim or th.cols != self.base.dim:
                raise DimensionMismatch("cocycle shape mismatch")


def _first_defect(a: Algebra, th: Matrix):
    n = a.dim
    for q in ((ia, ib, ix, iy) for ia in range(n) for ib in range(n)
              for ix in range(n) for iy in range(n)):
        d = cocycle_defect(a, th, q)
        if d != 0:
            return q, d
    return None


def extend(spec: ExtensionSpec, name: Optional[str] = None) -> Algebra:
    """Algebra of dimension n+s realizing the given cocycles."""
    base = spec.base
    n = base.dim
    s = len(spec.cocycles)
    for idx, th in enumerate(spec.cocycles):
        bad = _first_defect(base, th)
        if bad is not None:
            q, d = bad
            raise NotACocycle(
                "cocycle %d fails at basis quadruple %s with defect %s"
                % (idx + 1, tuple(i + 1 for i in q), d)
            )
    m = n + s
    c = [[zero_vec(m) for _ in range(m)] for _ in range(m)]
    for i in range(n):
        for j in range(n):
            row = list(base.c[i][j]) + [th[i, j] for th in spec.cocycles]
            c[i][j] = tuple(row)
    return Algebra(
        name or (base.name + "_ext"),
        m,
        tuple(tuple(r) for r in c),
        base.binding,
    )


def check_Ts(a: Algebra, cb: CohomologyBasis, cocycles: Sequence[Matrix]) -> bool:
    """Classes independent in the quotient and no common annihilator vector
    shared with Ann(A): exactly the subspaces giving non-split extensions."""
    coords = [class_coords(cb, th) for th in cocycles]
    if not coords:
        return False
    span = Subspace.from_vectors(len(cb.reps), coords)
    if span.dim != len(cocycles):
        return False
    common = annihilator(a)
    for th in cocycles:
        common = intersect(common, ann_of_cocycle(a, th))
    return common.dim == 0


def verify_ann_lemma(a: Algebra, cocycles: Sequence[Matrix]) -> bool:
    """Ann of the extension equals (Ann(theta) meet Ann(A)) + V, computed on
    both sides from scratch."""
    for th in cocycles:
        if not is_cocycle(a, th):
            raise NotACocycle("annihilator lemma requires cocycles")
    ext = extend(ExtensionSpec(base=a, cocycles=tuple(cocycles)))
    n, s = a.dim, len(cocycles)
    lhs = annihilator(ext)
    core = annihilator(a)
    for th in cocycles:
        core = intersect(core, ann_of_cocycle(a, th))
    embedded = [tuple(v) + (Q(0),) * s for v in core.basis]
    new_vecs = [unit_vec(n + s, n + k) for k in range(s)]
    rhs = Subspace.from_vectors(n + s, embedded + new_vecs)
    return lhs == rhs
