"""Finite-dimensional algebras given by structure constants over Q.

An AlgebraTemplate carries products whose coefficients are rational
functions of named parameters together with exclusion constraints; binding
every parameter to a Fraction yields an Algebra with an exact structure
tensor.  Indices are 0-based internally, 1-based in file formats and
reports.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .errors import DimensionMismatch, EvaluationError, ExclusionViolated, TermalgError
from .exactmath import ParamExpr, Q, Subspace, Vec, qvec, unit_vec, zero_vec

# A generator word is either the atom "g" or a pair (left, right).
Word = object


def word_to_str(w: Word) -> str:
    if w == "g":
        return "g"
    return "(%s*%s)" % (word_to_str(w[0]), word_to_str(w[1]))


def word_degree(w: Word) -> int:
    if w == "g":
        return 1
    return word_degree(w[0]) + word_degree(w[1])


@dataclass(frozen=True)
class AlgebraTemplate:
    """Parametric multiplication table; absent products mean zero."""

    name: str
    dim: int
    params: tuple[str, ...] = ()
    exclusions: tuple[ParamExpr, ...] = ()
    # products[(i, j)][k] = coefficient of e_k in e_i e_j (0-based)
    products: Mapping[tuple[int, int], Mapping[int, ParamExpr]] = field(default_factory=dict)
    # generator_words[k] = ((scale, word), ...): e_k == sum of scale * word(g)
    generator_words: Optional[Mapping[int, tuple[tuple[ParamExpr, Word], ...]]] = None

    def check_binding(self, binding: Mapping[str, Fraction]) -> dict[str, Fraction]:
        bound = {}
        for p in self.params:
            if p not in binding:
                raise EvaluationError("missing parameter %r for %s" % (p, self.name))
            bound[p] = Q(binding[p])
        for excl in self.exclusions:
            if excl.evaluate(bound) == 0:
                raise ExclusionViolated(
                    "%s: excluded binding %s" % (self.name, _fmt_binding(bound))
                )
        return bound

    def specialize(self, binding: Mapping[str, Fraction] | None = None) -> "Algebra":
        bound = self.check_binding(binding or {})
        n = self.dim
        c = [[zero_vec(n) for _ in range(n)] for _ in range(n)]
        for (i, j), coeffs in self.products.items():
            row = [Q(0)] * n
            for k, expr in coeffs.items():
                row[k] = expr.evaluate(bound)
            c[i][j] = tuple(row)
        words = None
        if self.generator_words is not None:
            words = {
                k: tuple((scale.evaluate(bound), w) for scale, w in terms)
                for k, terms in self.generator_words.items()
            }
        return Algebra(
            name=self.name,
            dim=n,
            c=tuple(tuple(row) for row in c),
            binding=bound,
            generator_words=words,
        )


def _fmt_binding(binding: Mapping[str, Fraction]) -> str:
    return "{" + ", ".join("%s=%s" % (k, v) for k, v in sorted(binding.items())) + "}"


class Algebra:
    """Bound algebra: c[i][j] is the product vector e_i e_j in Q^n."""

    __slots__ = ("name", "dim", "c", "binding", "generator_words", "_fast")

    def __init__(self, name, dim, c, binding=None, generator_words=None):
        self.name = name
        self.dim = dim
        self.c = c
        self.binding = dict(binding or {})
        self.generator_words = generator_words
        self._fast = None

    @classmethod
    def from_tensor(cls, name: str, c: Sequence[Sequence[Sequence]], binding=None) -> "Algebra":
        n = len(c)
        tensor = tuple(tuple(qvec(c[i][j]) for j in range(n)) for i in range(n))
        return cls(name, n, tensor, binding)

    def multiply(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vec:
        n = self.dim
        if len(x) != n or len(y) != n:
            raise DimensionMismatch("vectors must have length %d" % n)
        out = [Q(0)] * n
        for i in range(n):
            xi = x[i]
            if xi == 0:
                continue
            ci = self.c[i]
            for j in range(n):
                yj = y[j]
                if yj == 0:
                    continue
                f = xi * yj
                prod = ci[j]
                for k in range(n):
                    if prod[k] != 0:
                        out[k] += f * prod[k]
        return tuple(out)

    def basis_product(self, i: int, j: int) -> Vec:
        return self.c[i][j]

    def is_commutative(self) -> bool:
        n = self.dim
        return all(self.c[i][j] == self.c[j][i] for i in range(n) for j in range(i + 1, n))

    def fast(self) -> "FastOps":
        if self._fast is None:
            self._fast = FastOps(self)
        return self._fast

    def __repr__(self):
        return "Algebra(%s, dim=%d%s)" % (
            self.name,
            self.dim,
            ", " + _fmt_binding(self.binding) if self.binding else "",
        )


class FastOps:
    """Integer-scaled product tables for identity scans.

    The structure tensor is multiplied by the lcm D of all coefficient
    denominators; the identities we scan are homogeneous in the tensor, so
    zero-testing is unaffected while all arithmetic stays in int.
    """

    __slots__ = ("n", "p", "left", "right", "den_scale")

    def __init__(self, a: Algebra):
        n = a.dim
        den = 1
        for i in range(n):
            for j in range(n):
                for x in a.c[i][j]:
                    den = den * x.denominator // math.gcd(den, x.denominator)
        self.n = n
        self.den_scale = den
        self.p = tuple(
            tuple(tuple(int(x * den) for x in a.c[i][j]) for j in range(n)) for i in range(n)
        )
        # left[i][k][j] = coeff of e_k in e_i e_j ; right[j][k][i] likewise
        self.left = tuple(
            tuple(tuple(self.p[i][j][k] for j in range(n)) for k in range(n)) for i in range(n)
        )
        self.right = tuple(
            tuple(tuple(self.p[i][j][k] for i in range(n)) for k in range(n)) for j in range(n)
        )

    def lmul(self, i: int, v: Sequence[int]) -> tuple[int, ...]:
        """e_i * v (v already carries any D factors)."""
        m = self.left[i]
        rng = range(self.n)
        return tuple(sum(mk[j] * v[j] for j in rng) for mk in m)

    def rmul(self, v: Sequence[int], j: int) -> tuple[int, ...]:
        """v * e_j."""
        m = self.right[j]
        rng = range(self.n)
        return tuple(sum(mk[i] * v[i] for i in rng) for mk in m)

    def vmul(self, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
        """u * v via the scaled table (adds one factor of D)."""
        n = self.n
        out = [0] * n
        for i in range(n):
            ui = u[i]
            if ui == 0:
                continue
            pi = self.p[i]
            for j in range(n):
                vj = v[j]
                if vj == 0:
                    continue
                f = ui * vj
                pij = pi[j]
                for k in range(n):
                    if pij[k]:
                        out[k] += f * pij[k]
        return tuple(out)


def multiply(a: Algebra, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vec:
    return a.multiply(qvec(x), qvec(y))


def product_space(a: Algebra, u: Subspace, w: Subspace) -> Subspace:
    """Span of all products u_i * w_j over basis pairs."""
    if u.ambient_dim != a.dim or w.ambient_dim != a.dim:
        raise DimensionMismatch("subspace ambient must equal algebra dim")
    vecs = [a.multiply(x, y) for x in u.basis for y in w.basis]
    return Subspace.from_vectors(a.dim, vecs)


def power_chain(a: Algebra) -> list[Subspace]:
    """A^1 = A, A^k = sum of A^i A^j over i+j=k, until provably constant.

    The chain is nonincreasing but may plateau for a while and then drop
    again (products of two mid-sized factors can survive one step), so a
    single repeat is not a stopping certificate.  If the value at position
    p persists through position 2p it is constant forever: for m >= 2p-1,
    A^(m+1) = sum over i of (A^i S + S A^i), which no longer depends on m.
    The returned sequence ends at the first position with the final value.
    """
    chain = [Subspace.full(a.dim)]
    plateau_start = None
    while True:
        k = len(chain) + 1
        vecs = []
        for i in range(1, k):
            j = k - i
            piece = product_space(a, chain[i - 1], chain[j - 1])
            vecs.extend(piece.basis)
        nxt = Subspace.from_vectors(a.dim, vecs)
        if nxt.dim == 0:
            chain.append(nxt)
            return chain
        if nxt == chain[-1]:
            if plateau_start is None:
                plateau_start = k - 1
            if k >= 2 * plateau_start:
                return chain
        else:
            plateau_start = None
        chain.append(nxt)


def is_nilpotent(a: Algebra) -> bool:
    return power_chain(a)[-1].dim == 0


def annihilator(a: Algebra) -> Subspace:
    """Ann(A) = {x : xA + Ax = 0}, the kernel of all left/right multiplications."""
    n = a.dim
    rows = []
    for j in range(n):
        for k in range(n):
            rows.append([a.c[i][j][k] for i in range(n)])  # (x e_j)_k
    for i in range(n):
        for k in range(n):
            rows.append([a.c[i][j][k] for j in range(n)])  # (e_i x)_k
    from .exactmath import Matrix, kernel

    return kernel(Matrix.from_rows(rows))


def generated_subalgebra(a: Algebra, x: Sequence[Fraction]) -> Subspace:
    """Smallest subspace containing x and closed under the product."""
    span = Subspace.from_vectors(a.dim, [x])
    while True:
        vecs = list(span.basis)
        grew = False
        for u in span.basis:
            for v in span.basis:
                p = a.multiply(u, v)
                if not span.contains(p):
                    vecs.append(p)
                    grew = True
        if not grew:
            return span
        span = Subspace.from_vectors(a.dim, vecs)


def _random_vec(rng: random.Random, n: int) -> Vec:
    return tuple(Q(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n))


def find_generator(a: Algebra, seed: int = 0, tries: int = 20) -> Optional[Vec]:
    """A single element generating all of A, if one is found.

    Searches the basis vectors first, then seeded random rational vectors.
    """
    if not is_nilpotent(a):
        raise TermalgError("generator search requires a nilpotent algebra")
    full = Subspace.full(a.dim)
    for i in range(a.dim):
        e = unit_vec(a.dim, i)
        if generated_subalgebra(a, e) == full:
            return e
    rng = random.Random(seed)
    for _ in range(tries):
        v = _random_vec(rng, a.dim)
        if generated_subalgebra(a, v) == full:
            return v
    return None


def is_one_generated(a: Algebra) -> bool:
    """codim of A^2 equals 1; for nilpotent algebras this is one-generatedness."""
    chain = power_chain(a)
    if chain[-1].dim != 0:
        raise TermalgError("one-generated test requires a nilpotent algebra")
    a2 = chain[1] if len(chain) > 1 else Subspace.zero(a.dim)
    return a.dim - a2.dim == 1


def evaluate_word(a: Algebra, word: Word, g: Sequence[Fraction]) -> Vec:
    if word == "g":
        return qvec(g)
    return a.multiply(evaluate_word(a, word[0], g), evaluate_word(a, word[1], g))


def evaluate_word_sum(
    a: Algebra, terms: Sequence[tuple[Fraction, Word]], g: Sequence[Fraction]
) -> Vec:
    out = zero_vec(a.dim)
    for scale, w in terms:
        out = tuple(
            acc + scale * x for acc, x in zip(out, evaluate_word(a, w, g))
        )
    return out


def basis_from_words(a: Algebra, g: Sequence[Fraction]) -> Optional[list[Vec]]:
    """Images of the recorded generator words at g, or None if not recorded."""
    if a.generator_words is None:
        return None
    out = []
    for k in range(a.dim):
        if k not in a.generator_words:
            return None
        out.append(evaluate_word_sum(a, a.generator_words[k], qvec(g)))
    return out
