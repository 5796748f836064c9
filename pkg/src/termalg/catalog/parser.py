"""Line-oriented catalog format.

    # comment
    algebra <name> dim=<n> [params=p,q] [exclude=e;e] [source=s] [claims=c,c]
    e<i> e<j> = <expr>*e<k> [+ <expr>*e<k'> ...]
    generatorword e<k> = [<expr> *] <word over g>
    derivation <name> base=<name>[(p=expr,...)] s=<1|2> [params=...] [exclude=...]
    nabla <idx> = (i,j,<expr>) ...
    aut = <expr>,... ; <expr>,... ; ...
    autparams = x,y,z
    autnz = <expr>;<expr>
    action <idx> = <expr>
    orbit rep=[c1,...,ck|...] [params=...] [exclude=...] result=<name>[(p=expr,...)] [perm=id|i1,i2,...]
    note = free text

Expressions use rational literals, parameter names and + - * / ^ with
integer exponents.  Compound product coefficients must be parenthesized.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional

from ..algebra import AlgebraTemplate, Word, word_to_str
from ..errors import CatalogError, ExprError
from ..exactmath import ONE_EXPR, ParamExpr, Q, format_expr, parse_expr
from .model import ALL_CLAIMS, Catalog, CatalogEntry, DerivationEntry, OrbitRep

_PRODUCT_RE = re.compile(r"^e(\d+)\s+e(\d+)\s*=\s*(.+)$")
_BASIS_TERM_RE = re.compile(r"^(?:(.*?)\*)?\s*e(\d+)$")


def _split_top(text: str, sep: str) -> list[str]:
    """Split on sep at parenthesis depth zero."""
    parts = []
    depth = 0
    cur = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _split_signed_terms(text: str) -> list[tuple[int, str]]:
    """Split a sum into (sign, term) pieces at depth zero."""
    out = []
    depth = 0
    sign = 1
    cur = []
    start = True
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-" and not start:
            out.append((sign, "".join(cur).strip()))
            sign = 1 if ch == "+" else -1
            cur = []
            continue
        if depth == 0 and ch == "-" and start:
            sign = -sign
            start = False
            continue
        if not ch.isspace():
            start = False
        cur.append(ch)
    out.append((sign, "".join(cur).strip()))
    return [(s, t) for s, t in out if t]


def _parse_kv(tokens: list[str], line_no: int) -> dict[str, str]:
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise CatalogError("expected key=value, got %r" % tok, line_no)
        key, val = tok.split("=", 1)
        if key in out:
            raise CatalogError("duplicate attribute %r" % key, line_no)
        out[key] = val
    return out


def _parse_expr(text: str, line_no: int) -> ParamExpr:
    try:
        return parse_expr(text)
    except ExprError as ex:
        raise CatalogError(str(ex), line_no)


def _parse_exclusions(text: str, line_no: int) -> tuple[ParamExpr, ...]:
    if not text:
        return ()
    return tuple(_parse_expr(p, line_no) for p in text.split(";") if p)


def _parse_names(text: str) -> tuple[str, ...]:
    return tuple(p for p in text.split(",") if p)


def _parse_ref(text: str, line_no: int) -> tuple[str, tuple[tuple[str, ParamExpr], ...]]:
    """`name` or `name(p=expr,...)`."""
    m = re.match(r"^([A-Za-z_0-9]+)(?:\((.*)\))?$", text)
    if m is None:
        raise CatalogError("bad reference %r" % text, line_no)
    name, args = m.group(1), m.group(2)
    binding = []
    if args:
        for piece in _split_top(args, ","):
            if "=" not in piece:
                raise CatalogError("bad reference binding %r" % piece, line_no)
            p, e = piece.split("=", 1)
            binding.append((p.strip(), _parse_expr(e, line_no)))
    return name, tuple(binding)


def _parse_word(text: str, line_no: int) -> Word:
    text = text.strip()
    pos = 0

    def parse_node():
        nonlocal pos
        if pos < len(text) and text[pos] == "g":
            pos += 1
            return "g"
        if pos < len(text) and text[pos] == "(":
            pos += 1
            left = parse_node()
            if pos >= len(text) or text[pos] != "*":
                raise CatalogError("expected '*' in generator word", line_no)
            pos += 1
            right = parse_node()
            if pos >= len(text) or text[pos] != ")":
                raise CatalogError("expected ')' in generator word", line_no)
            pos += 1
            return (left, right)
        raise CatalogError("bad generator word %r" % text, line_no)

    node = parse_node()
    if pos != len(text):
        raise CatalogError("trailing input in generator word %r" % text, line_no)
    return node


def _parse_word_term(piece: str, line_no: int) -> tuple[ParamExpr, Word]:
    piece = piece.strip()
    if piece == "g":
        return ONE_EXPR, "g"
    if not piece.endswith(")"):
        raise CatalogError("generator word term must end with ')' or be 'g'", line_no)
    depth = 0
    start = None
    for i in range(len(piece) - 1, -1, -1):
        if piece[i] == ")":
            depth += 1
        elif piece[i] == "(":
            depth -= 1
            if depth == 0:
                start = i
                break
    if start is None:
        raise CatalogError("unbalanced generator word", line_no)
    word_text = piece[start:]
    prefix = piece[:start].strip()
    if prefix:
        if not prefix.endswith("*"):
            raise CatalogError("scale and word must be joined by '*'", line_no)
        scale = _parse_expr(prefix[:-1].strip(), line_no)
    else:
        scale = ONE_EXPR
    return scale, _parse_word(word_text, line_no)


def _parse_generatorword(rhs: str, line_no: int) -> tuple[tuple[ParamExpr, Word], ...]:
    terms = []
    for sign, piece in _split_signed_terms(rhs):
        scale, w = _parse_word_term(piece, line_no)
        if sign < 0:
            scale = -scale
        terms.append((scale, w))
    if not terms:
        raise CatalogError("empty generator word", line_no)
    return tuple(terms)


def _parse_triples(text: str, line_no: int) -> tuple[tuple[int, int, ParamExpr], ...]:
    triples = []
    depth = 0
    cur: list[str] = []
    groups = []
    for ch in text:
        if ch == "(":
            if depth == 0:
                cur = []
                depth += 1
                continue
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth == 0:
                groups.append("".join(cur))
                continue
        if depth > 0:
            cur.append(ch)
        elif not ch.isspace():
            raise CatalogError("unexpected %r between cocycle triples" % ch, line_no)
    if depth != 0:
        raise CatalogError("unbalanced parentheses in cocycle triples", line_no)
    for g in groups:
        parts = _split_top(g, ",")
        if len(parts) != 3:
            raise CatalogError("cocycle triple needs (i,j,expr): %r" % g, line_no)
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise CatalogError("bad indices in cocycle triple %r" % g, line_no)
        triples.append((i, j, _parse_expr(parts[2], line_no)))
    return tuple(triples)


class _AlgebraBlock:
    def __init__(self, name, dim, params, exclusions, source, claims, line_no):
        self.name = name
        self.dim = dim
        self.params = params
        self.exclusions = exclusions
        self.source = source
        self.claims = claims
        self.line_no = line_no
        self.products: dict[tuple[int, int], dict[int, ParamExpr]] = {}
        self.words: dict[int, tuple[ParamExpr, Word]] = {}

    def finish(self) -> CatalogEntry:
        known = set(self.params)
        for coeffs in self.products.values():
            for e in coeffs.values():
                extra = e.parameters() - known
                if extra:
                    raise CatalogError(
                        "%s: unknown parameter %s" % (self.name, sorted(extra)[0]),
                        self.line_no,
                    )
        template = AlgebraTemplate(
            name=self.name,
            dim=self.dim,
            params=self.params,
            exclusions=self.exclusions,
            products=self.products,
            generator_words=self.words or None,
        )
        return CatalogEntry(template=template, source=self.source, claims=self.claims)


class _DerivationBlock:
    def __init__(self, name, base, base_binding, s, params, exclusions, line_no):
        self.name = name
        self.base = base
        self.base_binding = base_binding
        self.s = s
        self.params = params
        self.exclusions = exclusions
        self.line_no = line_no
        self.nablas: dict[int, tuple] = {}
        self.aut_entries = None
        self.aut_params: tuple[str, ...] = ()
        self.aut_nz: tuple[ParamExpr, ...] = ()
        self.actions: dict[int, ParamExpr] = {}
        self.orbits: list[OrbitRep] = []
        self.note = ""

    def finish(self) -> DerivationEntry:
        if self.aut_entries is None:
            raise CatalogError("derivation %s lacks aut matrix" % self.name, self.line_no)
        k = len(self.nablas)
        if sorted(self.nablas) != list(range(1, k + 1)):
            raise CatalogError("derivation %s: nabla indices must be 1..k" % self.name, self.line_no)
        if sorted(self.actions) != list(range(1, k + 1)):
            raise CatalogError("derivation %s: need one action per nabla" % self.name, self.line_no)
        for orbit in self.orbits:
            for row in orbit.coords:
                if len(row) != k:
                    raise CatalogError(
                        "derivation %s: orbit coords need %d entries" % (self.name, k),
                        self.line_no,
                    )
            if len(orbit.coords) != self.s:
                raise CatalogError(
                    "derivation %s: orbit needs s=%d coordinate rows" % (self.name, self.s),
                    self.line_no,
                )
        return DerivationEntry(
            name=self.name,
            base=self.base,
            base_binding=self.base_binding,
            s=self.s,
            params=self.params,
            exclusions=self.exclusions,
            nablas=tuple(self.nablas[i] for i in range(1, k + 1)),
            aut_entries=self.aut_entries,
            aut_params=self.aut_params,
            aut_nondegeneracy=self.aut_nz,
            actions=tuple(self.actions[i] for i in range(1, k + 1)),
            orbits=tuple(self.orbits),
            note=self.note,
        )


def parse_catalog(text: str) -> Catalog:
    entries: list[CatalogEntry] = []
    derivations: list[DerivationEntry] = []
    names: set[str] = set()
    block = None

    def close():
        nonlocal block
        if block is None:
            return
        if isinstance(block, _AlgebraBlock):
            entries.append(block.finish())
        else:
            derivations.append(block.finish())
        block = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split(None, 1)[0]

        if head == "algebra":
            close()
            tokens = line.split()
            if len(tokens) < 3:
                raise CatalogError("algebra needs a name and dim=", line_no)
            name = tokens[1]
            if name in names:
                raise CatalogError("duplicate algebra %r" % name, line_no)
            names.add(name)
            kv = _parse_kv(tokens[2:], line_no)
            try:
                dim = int(kv.pop("dim"))
            except (KeyError, ValueError):
                raise CatalogError("algebra %s needs integer dim=" % name, line_no)
            params = _parse_names(kv.pop("params", ""))
            exclusions = _parse_exclusions(kv.pop("exclude", ""), line_no)
            source = kv.pop("source", "")
            claims = tuple(_parse_names(kv.pop("claims", ""))) or ALL_CLAIMS
            for c in claims:
                if c not in ALL_CLAIMS:
                    raise CatalogError("unknown claim %r" % c, line_no)
            if kv:
                raise CatalogError("unknown attribute %r" % sorted(kv)[0], line_no)
            block = _AlgebraBlock(name, dim, params, exclusions, source, claims, line_no)
            continue

        if head == "derivation":
            close()
            tokens = line.split()
            if len(tokens) < 3:
                raise CatalogError("derivation needs a name and base=", line_no)
            name = tokens[1]
            kv = _parse_kv(tokens[2:], line_no)
            if "base" not in kv:
                raise CatalogError("derivation %s needs base=" % name, line_no)
            base, base_binding = _parse_ref(kv.pop("base"), line_no)
            try:
                s = int(kv.pop("s"))
            except (KeyError, ValueError):
                raise CatalogError("derivation %s needs s=" % name, line_no)
            params = _parse_names(kv.pop("params", ""))
            exclusions = _parse_exclusions(kv.pop("exclude", ""), line_no)
            if kv:
                raise CatalogError("unknown attribute %r" % sorted(kv)[0], line_no)
            block = _DerivationBlock(name, base, base_binding, s, params, exclusions, line_no)
            continue

        if block is None:
            raise CatalogError("statement outside any block: %r" % line, line_no)

        if isinstance(block, _AlgebraBlock):
            m = _PRODUCT_RE.match(line)
            if m:
                i, j = int(m.group(1)), int(m.group(2))
                if not (1 <= i <= block.dim and 1 <= j <= block.dim):
                    raise CatalogError("basis index out of range in product", line_no)
                if (i - 1, j - 1) in block.products:
                    raise CatalogError("duplicate product e%d e%d" % (i, j), line_no)
                coeffs: dict[int, ParamExpr] = {}
                for sign, term in _split_signed_terms(m.group(3)):
                    tm = _BASIS_TERM_RE.match(term)
                    if tm is None:
                        raise CatalogError("bad product term %r" % term, line_no)
                    k = int(tm.group(2))
                    if not (1 <= k <= block.dim):
                        raise CatalogError("basis index e%d out of range" % k, line_no)
                    coeff = (
                        _parse_expr(tm.group(1), line_no) if tm.group(1) else ONE_EXPR
                    )
                    if sign < 0:
                        coeff = -coeff
                    if k - 1 in coeffs:
                        coeffs[k - 1] = coeffs[k - 1] + coeff
                    else:
                        coeffs[k - 1] = coeff
                block.products[(i - 1, j - 1)] = coeffs
                continue
            if head == "generatorword":
                m = re.match(r"^generatorword\s+e(\d+)\s*=\s*(.+)$", line)
                if m is None:
                    raise CatalogError("bad generatorword line", line_no)
                k = int(m.group(1))
                if not (1 <= k <= block.dim):
                    raise CatalogError("generatorword index out of range", line_no)
                block.words[k - 1] = _parse_generatorword(m.group(2), line_no)
                continue
            raise CatalogError("unexpected line in algebra block: %r" % line, line_no)

        # derivation block
        if head == "nabla":
            m = re.match(r"^nabla\s+(\d+)\s*=\s*(.*)$", line)
            if m is None:
                raise CatalogError("bad nabla line", line_no)
            idx = int(m.group(1))
            if idx in block.nablas:
                raise CatalogError("duplicate nabla %d" % idx, line_no)
            block.nablas[idx] = _parse_triples(m.group(2), line_no)
            continue
        if head == "aut":
            body = line.split("=", 1)[1]
            rows = []
            for row_text in body.split(";"):
                rows.append(
                    tuple(_parse_expr(p, line_no) for p in _split_top(row_text, ","))
                )
            if any(len(r) != len(rows) for r in rows):
                raise CatalogError("aut matrix must be square", line_no)
            block.aut_entries = tuple(rows)
            continue
        if head == "autparams":
            block.aut_params = _parse_names(line.split("=", 1)[1].strip())
            continue
        if head == "autnz":
            block.aut_nz = _parse_exclusions(line.split("=", 1)[1].strip(), line_no)
            continue
        if head == "action":
            m = re.match(r"^action\s+(\d+)\s*=\s*(.*)$", line)
            if m is None:
                raise CatalogError("bad action line", line_no)
            idx = int(m.group(1))
            if idx in block.actions:
                raise CatalogError("duplicate action %d" % idx, line_no)
            block.actions[idx] = _parse_expr(m.group(2), line_no)
            continue
        if head == "orbit":
            kv = _parse_kv(line.split()[1:], line_no)
            if "rep" not in kv or "result" not in kv:
                raise CatalogError("orbit needs rep= and result=", line_no)
            rep_text = kv.pop("rep")
            if not (rep_text.startswith("[") and rep_text.endswith("]")):
                raise CatalogError("orbit rep must be [c1,...|...]", line_no)
            coords = tuple(
                tuple(_parse_expr(p, line_no) for p in _split_top(row, ","))
                for row in rep_text[1:-1].split("|")
            )
            result, result_binding = _parse_ref(kv.pop("result"), line_no)
            params = _parse_names(kv.pop("params", ""))
            exclusions = _parse_exclusions(kv.pop("exclude", ""), line_no)
            perm_text = kv.pop("perm", "id")
            if perm_text == "id":
                perm = None
            else:
                perm = tuple(int(p) for p in perm_text.split(","))
                if sorted(perm) != list(range(1, len(perm) + 1)):
                    raise CatalogError("perm must be a permutation of 1..m", line_no)
            if kv:
                raise CatalogError("unknown attribute %r" % sorted(kv)[0], line_no)
            block.orbits.append(
                OrbitRep(
                    coords=coords,
                    result=result,
                    result_binding=result_binding,
                    params=params,
                    exclusions=exclusions,
                    perm=perm,
                )
            )
            continue
        if head == "note":
            block.note = line.split("=", 1)[1].strip()
            continue
        raise CatalogError("unexpected line in derivation block: %r" % line, line_no)

    close()
    catalog = Catalog(entries=entries, derivations=derivations)
    _resolve(catalog)
    return catalog


def _resolve(catalog: Catalog):
    """Cross-reference validation."""
    for d in catalog.derivations:
        if d.base not in catalog.by_name:
            raise CatalogError("derivation %s: unknown base %r" % (d.name, d.base))
        base = catalog.entry(d.base)
        bound = {p for p, _ in d.base_binding}
        for p in base.template.params:
            if p not in bound:
                raise CatalogError(
                    "derivation %s: base parameter %r unbound" % (d.name, p)
                )
        known = set(d.params)
        for _, e in d.base_binding:
            extra = e.parameters() - known
            if extra:
                raise CatalogError(
                    "derivation %s: unknown parameter %r" % (d.name, sorted(extra)[0])
                )
        for orbit in d.orbits:
            if orbit.result not in catalog.by_name:
                raise CatalogError(
                    "derivation %s: unknown result %r" % (d.name, orbit.result)
                )
            result = catalog.entry(orbit.result)
            bound = {p for p, _ in orbit.result_binding}
            for p in result.template.params:
                if p not in bound:
                    raise CatalogError(
                        "derivation %s: result parameter %r unbound" % (d.name, p)
                    )
            known = set(d.params) | set(orbit.params)
            for row in orbit.coords:
                for e in row:
                    extra = e.parameters() - known
                    if extra:
                        raise CatalogError(
                            "derivation %s: unknown parameter %r in orbit coords"
                            % (d.name, sorted(extra)[0])
                        )
            for _, e in orbit.result_binding:
                extra = e.parameters() - known
                if extra:
                    raise CatalogError(
                        "derivation %s: unknown parameter %r in result binding"
                        % (d.name, sorted(extra)[0])
                    )
            if orbit.perm is not None and len(orbit.perm) != base.dim + d.s:
                raise CatalogError(
                    "derivation %s: perm length must be %d" % (d.name, base.dim + d.s)
                )


def _fmt_ref(name: str, binding) -> str:
    if not binding:
        return name
    return "%s(%s)" % (name, ",".join("%s=%s" % (p, format_expr(e)) for p, e in binding))


def write_catalog(catalog: Catalog) -> str:
    """Serialize so that parse(write(parse(t))) == parse(t)."""
    out = []
    for entry in catalog.entries:
        t = entry.template
        head = "algebra %s dim=%d" % (t.name, t.dim)
        if t.params:
            head += " params=%s" % ",".join(t.params)
        if t.exclusions:
            head += " exclude=%s" % ";".join(format_expr(e) for e in t.exclusions)
        if entry.source:
            head += " source=%s" % entry.source
        if entry.claims != ALL_CLAIMS:
            head += " claims=%s" % ",".join(entry.claims)
        out.append(head)
        for (i, j) in sorted(t.products):
            coeffs = t.products[(i, j)]
            terms = [
                "%s*e%d" % (format_expr(coeffs[k]), k + 1) for k in sorted(coeffs)
            ]
            out.append("e%d e%d = %s" % (i + 1, j + 1, " + ".join(terms)))
        if t.generator_words:
            for k in sorted(t.generator_words):
                parts = []
                for scale, w in t.generator_words[k]:
                    rhs = word_to_str(w)
                    if scale != ONE_EXPR:
                        rhs = "%s * %s" % (format_expr(scale), rhs)
                    parts.append(rhs)
                out.append("generatorword e%d = %s" % (k + 1, " + ".join(parts)))
        out.append("")
    for d in catalog.derivations:
        head = "derivation %s base=%s s=%d" % (d.name, _fmt_ref(d.base, d.base_binding), d.s)
        if d.params:
            head += " params=%s" % ",".join(d.params)
        if d.exclusions:
            head += " exclude=%s" % ";".join(format_expr(e) for e in d.exclusions)
        out.append(head)
        for idx, triples in enumerate(d.nablas, start=1):
            body = " ".join(
                "(%d,%d,%s)" % (i, j, format_expr(e)) for i, j, e in triples
            )
            out.append("nabla %d = %s" % (idx, body))
        out.append(
            "aut = %s"
            % " ; ".join(
                ",".join(format_expr(e) for e in row) for row in d.aut_entries
            )
        )
        if d.aut_params:
            out.append("autparams = %s" % ",".join(d.aut_params))
        if d.aut_nondegeneracy:
            out.append("autnz = %s" % ";".join(format_expr(e) for e in d.aut_nondegeneracy))
        for idx, action in enumerate(d.actions, start=1):
            out.append("action %d = %s" % (idx, format_expr(action)))
        for orbit in d.orbits:
            rep = "|".join(
                ",".join(format_expr(e) for e in row) for row in orbit.coords
            )
            line = "orbit rep=[%s]" % rep
            if orbit.params:
                line += " params=%s" % ",".join(orbit.params)
            if orbit.exclusions:
                line += " exclude=%s" % ";".join(format_expr(e) for e in orbit.exclusions)
            line += " result=%s" % _fmt_ref(orbit.result, orbit.result_binding)
            if orbit.perm is not None:
                line += " perm=%s" % ",".join(str(p) for p in orbit.perm)
            out.append(line)
        if d.note:
            out.append("note = %s" % d.note)
        out.append("")
    return "\n".join(out)
