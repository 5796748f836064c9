"""Command-line front-end.

Exit codes: 0 all checks pass, 1 a verification failed, 2 usage or parse
error.  All randomness is seeded; the seed appears in every report header.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import catalog as catmod
from .algebra import is_nilpotent, is_one_generated
from .catalog.model import Catalog
from .catalog.parser import parse_catalog, write_catalog
from .catalog.verify import VerificationReport, fmt_binding, verify_all
from .cohomology import (
    b2_basis,
    cocycle_from_triples,
    cocycle_to_triples,
    h2,
    flatten_cocycle,
    unflatten_cocycle,
    z2_basis,
)
from .errors import TermalgError
from .exactmath import Matrix, Q, parse_rational, unit_vec
from .extensions import ExtensionSpec, extend
from .identities import is_terminal
from .morphisms import act_on_class, find_isomorphism, invariant_profile


def _load_file(path: str) -> Catalog:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_catalog(fh.read())


def _single_algebra(cat: Catalog, params: list[str]):
    if len(cat.entries) != 1:
        raise TermalgError("expected exactly one algebra in the file")
    entry = cat.entries[0]
    binding = {}
    for kv in params or []:
        if "=" not in kv:
            raise TermalgError("--param expects name=value, got %r" % kv)
        name, val = kv.split("=", 1)
        binding[name] = parse_rational(val)
    return entry, entry.template.specialize(binding)


def _parse_triples_arg(dim: int, text: str) -> Matrix:
    triples = []
    for piece in text.split():
        piece = piece.strip("()")
        i, j, v = piece.split(",", 2)
        triples.append((int(i), int(j), parse_rational(v)))
    return cocycle_from_triples(dim, triples)


def _triples_str(th: Matrix) -> str:
    return " ".join("(%d,%d,%s)" % (i, j, v) for i, j, v in cocycle_to_triples(th))


def _seed_from_env(value) -> int:
    if value is not None:
        return value
    env = os.environ.get("TERMALG_SEED")
    return int(env) if env else 0


def cmd_verify(args) -> int:
    entry, a = _single_algebra(_load_file(args.file), args.param)
    rep = is_terminal(a)
    nil = is_nilpotent(a)
    one = is_one_generated(a) if nil else False
    print("algebra: %s  binding: %s" % (entry.name, fmt_binding(a.binding)))
    print("terminal: %s" % ("yes" if rep.holds else "no"))
    if not rep.holds:
        q, d = rep.witness
        print("  witness quadruple: %s  defect: %s" % (
            tuple(i + 1 for i in q), [str(x) for x in d]))
    print("nilpotent: %s" % ("yes" if nil else "no"))
    print("one-generated: %s" % ("yes" if one else "no"))
    return 0 if (rep.holds and nil and one) else 1


def cmd_cohomology(args) -> int:
    entry, a = _single_algebra(_load_file(args.file), args.param)
    z2 = z2_basis(a)
    b2 = b2_basis(a)
    print("algebra: %s  binding: %s" % (entry.name, fmt_binding(a.binding)))
    print("Z2=%d B2=%d H2=%d" % (z2.dim, b2.dim, z2.dim - b2.dim))
    if args.which in ("z2", "b2"):
        basis = z2 if args.which == "z2" else b2
        for v in basis.basis:
            print(_triples_str(unflatten_cocycle(a.dim, v)))
    else:
        cb = h2(a)
        for rep in cb.reps:
            print(_triples_str(rep))
    return 0


def cmd_extend(args) -> int:
    entry, a = _single_algebra(_load_file(args.file), args.param)
    cocycles = tuple(_parse_triples_arg(a.dim, c) for c in args.cocycle)
    ext = extend(ExtensionSpec(base=a, cocycles=cocycles), name=entry.name + "_ext")
    print("algebra %s dim=%d" % (ext.name, ext.dim))
    for i in range(ext.dim):
        for j in range(ext.dim):
            prod = ext.c[i][j]
            terms = [
                ("e%d" % (k + 1)) if v == 1 else ("%s*e%d" % (v, k + 1))
                for k, v in enumerate(prod)
                if v != 0
            ]
            if terms:
                print("e%d e%d = %s" % (i + 1, j + 1, " + ".join(terms)))
    return 0


def cmd_act(args) -> int:
    entry, a = _single_algebra(_load_file(args.file), args.param)
    rows = [r.split(",") for r in args.aut.split(";")]
    m = Matrix.from_rows([[parse_rational(x) for x in row] for row in rows])
    cb = h2(a)
    coords = tuple(parse_rational(x) for x in args.cls.split(","))
    got = act_on_class(a, cb, m, coords)
    print("reps:")
    for rep in cb.reps:
        print("  " + _triples_str(rep))
    print("coords: %s" % ",".join(str(x) for x in got))
    return 0


def cmd_iso(args) -> int:
    entry_a, a = _single_algebra(_load_file(args.fileA), args.param)
    entry_b, b = _single_algebra(_load_file(args.fileB), args.param_b)
    pa, pb = invariant_profile(a), invariant_profile(b)
    print("profiles %s" % ("match" if pa == pb else "differ"))
    if pa != pb:
        print("verdict: distinguished")
        return 1
    import random

    rng = random.Random(_seed_from_env(args.seed))
    cands = [unit_vec(a.dim, k) for k in range(a.dim)]
    for _ in range(args.candidates):
        cands.append(tuple(Q(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(a.dim)))
    cert = find_isomorphism(a, b, cands)
    if cert is None:
        print("verdict: none found among %d candidates" % len(cands))
        return 1
    print("verdict: certificate-isomorphic")
    for i in range(cert.rows):
        print("  " + " ".join(str(x) for x in cert.row(i)))
    return 0


def cmd_catalog_verify_all(args) -> int:
    if args.file:
        with open(args.file, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = catmod.builtin_text()
    cat = parse_catalog(text)
    seed = _seed_from_env(args.seed)
    report = verify_all(
        cat,
        seed=seed,
        samples_per_param=args.samples,
        action_samples=args.action_samples,
        with_pairs=not args.no_pairs,
        jobs=args.jobs,
        catalog_text=text,
    )
    lines = report.to_lines()
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    out = sys.stdout
    for line in lines:
        out.write(line + "\n")
    counts = report.counts()
    sys.stderr.write(
        "checks: %d  pass: %d  fail: %d\n"
        % (len(report.records), counts["pass"], counts["fail"])
    )
    return 0 if report.ok else 1


def cmd_catalog_dump(args) -> int:
    cat = catmod.load_builtin()
    sys.stdout.write(write_catalog(cat))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="termalg",
        description="exact verification toolkit for terminal algebras",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add_param(q):
        q.add_argument("--param", action="append", default=[], metavar="k=v",
                       help="bind a template parameter (repeatable)")

    q = sub.add_parser("verify", help="terminal/nilpotent/one-generated checks")
    q.add_argument("file")
    add_param(q)
    q.set_defaults(func=cmd_verify)

    for which in ("z2", "b2", "h2"):
        q = sub.add_parser(which, help="print the %s basis and dimensions" % which)
        q.add_argument("file")
        add_param(q)
        q.set_defaults(func=cmd_cohomology, which=which)

    q = sub.add_parser("extend", help="central extension by given cocycles")
    q.add_argument("file")
    add_param(q)
    q.add_argument("--cocycle", action="append", required=True,
                   metavar="(i,j,q) ...", help="sparse cocycle triples (repeatable)")
    q.set_defaults(func=cmd_extend)

    q = sub.add_parser("act", help="transform class coordinates by an automorphism")
    q.add_argument("file")
    add_param(q)
    q.add_argument("--aut", required=True, help="matrix rows 'a,b,..;c,d,..'")
    q.add_argument("--class", dest="cls", required=True, help="coords 'c1,c2,..'")
    q.set_defaults(func=cmd_act)

    q = sub.add_parser("iso", help="isomorphism certificate search")
    q.add_argument("fileA")
    q.add_argument("fileB")
    add_param(q)
    q.add_argument("--param-b", action="append", default=[], metavar="k=v")
    q.add_argument("--candidates", type=int, default=50)
    q.add_argument("--seed", type=int, default=None)
    q.set_defaults(func=cmd_iso)

    q = sub.add_parser("catalog", help="catalog operations")
    csub = q.add_subparsers(dest="subcommand", required=True)
    v = csub.add_parser("verify-all", help="replay the whole classification")
    v.add_argument("--file", default=None, help="catalog file (default: bundled)")
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--samples", type=int, default=5, metavar="N",
                   help="specialization values per parameter")
    v.add_argument("--action-samples", type=int, default=20)
    v.add_argument("--no-pairs", action="store_true",
                   help="skip the pairwise non-isomorphism sweep")
    v.add_argument("--report", default=None, help="also write the report here")
    v.add_argument("--jobs", type=int, default=1,
                   help="worker process count for entry/derivation checks")
    v.set_defaults(func=cmd_catalog_verify_all)
    dump = csub.add_parser("dump", help="print the bundled catalog")
    dump.set_defaults(func=cmd_catalog_dump)

    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return 2 if ex.code not in (0, None) else 0
    try:
        return args.func(args)
    except TermalgError as ex:
        sys.stderr.write("error: %s\n" % ex)
        return 2
    except OSError as ex:
        sys.stderr.write("error: %s\n" % ex)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
