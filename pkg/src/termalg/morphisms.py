"""Homomorphisms, automorphism families, the induced action on cohomology
classes, and isomorphism-invariant profiles.

A linear map is an n x n Matrix whose column j is the image of e_j.  The
action on a cocycle theta is the pullback theta(m x, m y), i.e. m^T M m on
matrices; coboundaries are stable under it, so the action descends to
class coordinates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .algebra import Algebra, annihilator, evaluate_word_sum, power_chain, product_space
from .cohomology import CohomologyBasis, class_coords, flatten_cocycle
from .errors import (
    DimensionMismatch,
    EvaluationError,
    ExclusionViolated,
    NotAnAutomorphism,
    TermalgError,
)
from .exactmath import Matrix, ParamExpr, Q, Subspace, Vec, kernel, qvec, rank


def is_homomorphism(a: Algebra, b: Algebra, m: Matrix) -> bool:
    """m(e_i e_j) == m(e_i) m(e_j) on all basis pairs."""
    if a.dim != b.dim or m.rows != a.dim or m.cols != a.dim:
        raise DimensionMismatch("map shape mismatch")
    cols = [m.col(j) for j in range(m.cols)]
    for i in range(a.dim):
        for j in range(a.dim):
            if m.matvec(a.c[i][j]) != b.multiply(cols[i], cols[j]):
                return False
    return True


def is_invertible(m: Matrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def is_automorphism(a: Algebra, m: Matrix) -> bool:
    return is_invertible(m) and is_homomorphism(a, a, m)


def act_on_cocycle(m: Matrix, th: Matrix) -> Matrix:
    """Pullback (x, y) -> theta(m x, m y)."""
    if th.rows != m.rows or th.cols != m.rows:
        raise DimensionMismatch("cocycle/map shape mismatch")
    return m.transpose() @ th @ m


def act_on_class(a: Algebra, cb: CohomologyBasis, m: Matrix, coords: Sequence[Fraction]) -> Vec:
    """Class coordinates of the pullback of sum(coords_i * reps_i)."""
    if len(coords) != len(cb.reps):
        raise DimensionMismatch("coordinate length mismatch")
    if not is_automorphism(a, m):
        raise NotAnAutomorphism("map is not an automorphism of %s" % a.name)
    th = Matrix.zero(a.dim, a.dim)
    for c, rep in zip(coords, cb.reps):
        th = th + rep.scale(c)
    return class_coords(cb, act_on_cocycle(m, th))


@dataclass(frozen=True)
class AutFamily:
    """Parametric matrices (entries are expressions in the family parameters)
    that specialize to automorphisms at any nondegenerate binding."""

    dim: int
    entries: tuple[tuple[ParamExpr, ...], ...]
    params: tuple[str, ...]
    nondegeneracy: tuple[ParamExpr, ...] = ()

    def specialize(self, binding: Mapping[str, Fraction]) -> Matrix:
        """binding must cover the family parameters plus any parameters the
        entries inherit from a parametric base algebra."""
        for expr in self.nondegeneracy:
            if expr.evaluate(binding) == 0:
                raise ExclusionViolated("degenerate automorphism binding")
        flat = []
        for row in self.entries:
            for e in row:
                flat.append(e.evaluate(binding))
        return Matrix(self.dim, self.dim, flat)

    def random_binding(
        self, rng: random.Random, extra: Optional[Mapping[str, Fraction]] = None
    ) -> dict[str, Fraction]:
        """Nondegenerate random rational binding (resamples until valid);
        includes `extra` in the returned mapping."""
        while True:
            binding = dict(extra or {})
            binding.update(
                (p, Q(rng.randint(-5, 5), rng.randint(1, 3))) for p in self.params
            )
            try:
                ok = all(e.evaluate(binding) != 0 for e in self.nondegeneracy)
            except EvaluationError:
                ok = False
            if ok:
                return binding


def verify_action_formula(
    a: Algebra,
    cb: CohomologyBasis,
    fam: AutFamily,
    claimed: Sequence[ParamExpr],
    samples: int = 20,
    seed: int = 0,
    coord_names: Optional[Sequence[str]] = None,
    extra_binding: Optional[Mapping[str, Fraction]] = None,
) -> bool:
    return action_formula_witness(
        a, cb, fam, claimed, samples, seed, coord_names, extra_binding
    ) is None


def action_formula_witness(
    a: Algebra,
    cb: CohomologyBasis,
    fam: AutFamily,
    claimed: Sequence[ParamExpr],
    samples: int = 20,
    seed: int = 0,
    coord_names: Optional[Sequence[str]] = None,
    extra_binding: Optional[Mapping[str, Fraction]] = None,
) -> Optional[dict]:
    """None when the claimed coordinate formulas match the computed action at
    `samples` random nondegenerate bindings; otherwise a witness record."""
    k = len(cb.reps)
    if len(claimed) != k:
        raise DimensionMismatch("one claimed expression per class coordinate")
    names = list(coord_names) if coord_names else ["a%d" % (i + 1) for i in range(k)]
    rng = random.Random(seed)
    for _ in range(samples):
        binding = fam.random_binding(rng, extra=extra_binding)
        coords = tuple(Q(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(k))
        m = fam.specialize(binding)
        if not is_automorphism(a, m):
            return {"kind": "not-automorphism", "binding": binding}
        got = act_on_class(a, cb, m, coords)
        env = dict(binding)
        env.update(zip(names, coords))
        want = tuple(e.evaluate(env) for e in claimed)
        if got != want:
            bad = next(i for i in range(k) if got[i] != want[i])
            return {
                "kind": "mismatch",
                "binding": binding,
                "coords": coords,
                "coordinate": bad + 1,
                "computed": got[bad],
                "claimed": want[bad],
            }
    return None


def subspace_action_equal(
    a: Algebra,
    cb: CohomologyBasis,
    m: Matrix,
    w1: Sequence[Sequence[Fraction]],
    w2: Sequence[Sequence[Fraction]],
) -> bool:
    """span(m . w1) == span(w2) inside the class-coordinate space."""
    k = len(cb.reps)
    img = [act_on_class(a, cb, m, qvec(w)) for w in w1]
    return Subspace.from_vectors(k, img) == Subspace.from_vectors(k, [qvec(w) for w in w2])


@dataclass(frozen=True)
class InvariantProfile:
    """Basis-independent integers; equality is a necessary condition for
    isomorphism."""

    power_dims: tuple[int, ...]
    ann_dim: int
    left_ann_dim: int
    right_ann_dim: int
    prod_dims: tuple[tuple[tuple[int, int], int], ...]
    commutator_dim: int
    plus_dim: int


def _left_annihilator(a: Algebra) -> Subspace:
    n = a.dim
    rows = []
    for j in range(n):
        for k in range(n):
            rows.append([a.c[i][j][k] for i in range(n)])
    return kernel(Matrix.from_rows(rows))


def _right_annihilator(a: Algebra) -> Subspace:
    n = a.dim
    rows = []
    for i in range(n):
        for k in range(n):
            rows.append([a.c[i][j][k] for j in range(n)])
    return kernel(Matrix.from_rows(rows))


def invariant_profile(a: Algebra) -> InvariantProfile:
    chain = power_chain(a)
    n = a.dim

    def power(k: int) -> Subspace:
        return chain[k - 1] if k <= len(chain) else chain[-1]

    prod_dims = []
    for i in range(1, 4):
        for j in range(1, 4):
            if i + j <= 4:
                d = product_space(a, power(i), power(j)).dim
                prod_dims.append(((i, j), d))
    comm = []
    plus = []
    for i in range(n):
        for j in range(n):
            comm.append(tuple(x - y for x, y in zip(a.c[i][j], a.c[j][i])))
            plus.append(tuple(x + y for x, y in zip(a.c[i][j], a.c[j][i])))
    return InvariantProfile(
        power_dims=tuple(s.dim for s in chain),
        ann_dim=annihilator(a).dim,
        left_ann_dim=_left_annihilator(a).dim,
        right_ann_dim=_right_annihilator(a).dim,
        prod_dims=tuple(prod_dims),
        commutator_dim=Subspace.from_vectors(n, comm).dim,
        plus_dim=Subspace.from_vectors(n, plus).dim,
    )


def profiles_distinguish(p: InvariantProfile, q: InvariantProfile) -> bool:
    return p != q


def find_isomorphism(
    a: Algebra,
    b: Algebra,
    generator_candidates: Sequence[Sequence[Fraction]],
) -> Optional[Matrix]:
    """Certificate search: push a's recorded generator words through each
    candidate generator image in b; accept the first bijective homomorphism.

    Returning None only means no certificate was found among the candidates.
    """
    if a.dim != b.dim:
        return None
    words = a.generator_words
    if words is None or any(k not in words for k in range(a.dim)):
        raise TermalgError("source algebra carries no generator words")
    for g in generator_candidates:
        g = qvec(g)
        cols = [evaluate_word_sum(b, words[k], g) for k in range(a.dim)]
        m = Matrix.from_rows(cols).transpose()
        if is_invertible(m) and is_homomorphism(a, b, m):
            return m
    return None
