"""Catalog data model: algebra entries and derivation blocks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from typing import Mapping, Optional, Sequence

from ..algebra import AlgebraTemplate
from ..errors import EvaluationError
from ..exactmath import ParamExpr, Q
from ..morphisms import AutFamily

ALL_CLAIMS = ("terminal", "nilpotent", "one-generated")

# Fixed specialization values tried for every parameter, before exclusion
# filtering; two seeded random rationals are appended per parameter.
SAMPLE_POOL = (Q(0), Q(1), Q(-1), Q(2), Q(1, 2), Q(-3), Q(7))


@dataclass(frozen=True)
class CatalogEntry:
    template: AlgebraTemplate
    source: str = ""
    claims: tuple[str, ...] = ALL_CLAIMS

    @property
    def name(self) -> str:
        return self.template.name

    @property
    def dim(self) -> int:
        return self.template.dim


@dataclass(frozen=True)
class OrbitRep:
    """One orbit representative: s coordinate rows over the nabla basis."""

    coords: tuple[tuple[ParamExpr, ...], ...]
    result: str
    result_binding: tuple[tuple[str, ParamExpr], ...] = ()
    params: tuple[str, ...] = ()
    exclusions: tuple[ParamExpr, ...] = ()
    perm: Optional[tuple[int, ...]] = None  # printed e_i = extended e_perm[i-1]


@dataclass(frozen=True)
class DerivationEntry:
    """A cohomology-plus-action block over one base algebra (or a slice of a
    parametric family), with its verified orbit representatives."""

    name: str
    base: str
    s: int
    nablas: tuple[tuple[tuple[int, int, ParamExpr], ...], ...]
    aut_entries: tuple[tuple[ParamExpr, ...], ...]
    aut_params: tuple[str, ...]
    aut_nondegeneracy: tuple[ParamExpr, ...]
    actions: tuple[ParamExpr, ...]
    orbits: tuple[OrbitRep, ...]
    base_binding: tuple[tuple[str, ParamExpr], ...] = ()
    params: tuple[str, ...] = ()
    exclusions: tuple[ParamExpr, ...] = ()
    note: str = ""

    def aut_family(self, dim: int) -> AutFamily:
        return AutFamily(
            dim=dim,
            entries=self.aut_entries,
            params=self.aut_params,
            nondegeneracy=self.aut_nondegeneracy,
        )


@dataclass
class Catalog:
    entries: list[CatalogEntry] = field(default_factory=list)
    derivations: list[DerivationEntry] = field(default_factory=list)

    def __post_init__(self):
        self.by_name = {e.name: e for e in self.entries}

    def entry(self, name: str) -> CatalogEntry:
        return self.by_name[name]

    def dims(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for e in self.entries:
            out[e.dim] = out.get(e.dim, 0) + 1
        return out


def _binding_ok(
    params: Sequence[str],
    exclusions: Sequence[ParamExpr],
    binding: Mapping[str, Fraction],
) -> bool:
    try:
        return all(e.evaluate(binding) != 0 for e in exclusions)
    except EvaluationError:
        return False


def sample_bindings(
    params: Sequence[str],
    exclusions: Sequence[ParamExpr],
    seed: int,
    per_param: int = 5,
    n_random: int = 2,
) -> list[dict[str, Fraction]]:
    """Deterministic specialization grid plus seeded random bindings.

    Per parameter the first `per_param` pool values that survive the
    single-parameter exclusions are combined into a grid, then jointly
    filtered; `n_random` small random rational bindings are appended.
    """
    if not params:
        return [{}]
    single = {}
    for p in params:
        vals = []
        for v in SAMPLE_POOL:
            ok = True
            for e in exclusions:
                if e.parameters() == {p}:
                    try:
                        ok = e.evaluate({p: v}) != 0
                    except EvaluationError:
                        ok = False
                    if not ok:
                        break
            if ok:
                vals.append(v)
            if len(vals) == per_param:
                break
        single[p] = vals
    out: list[dict[str, Fraction]] = []
    for combo in iproduct(*(single[p] for p in params)):
        binding = dict(zip(params, combo))
        if _binding_ok(params, exclusions, binding):
            out.append(binding)
    rng = random.Random(seed)
    added = 0
    guard = 0
    while added < n_random and guard < 200:
        guard += 1
        binding = {
            p: Q(rng.randint(-12, 12), rng.randint(1, 5)) for p in params
        }
        if _binding_ok(params, exclusions, binding) and binding not in out:
            out.append(binding)
            added += 1
    return out


def entry_sample_bindings(
    entry: CatalogEntry, seed: int, per_param: int = 5
) -> list[dict[str, Fraction]]:
    t = entry.template
    return sample_bindings(
        t.params, t.exclusions, seed=seed ^ _name_seed(entry.name), per_param=per_param
    )


def _name_seed(name: str) -> int:
    h = 0
    for ch in name:
        h = (h * 131 + ord(ch)) % (1 << 30)
    return h
