"""Text format for semigroups, graphs, categories, actions and coverings.

Grammar (``#`` starts a comment, names are bare words or double-quoted)::

    file       = { block } ;
    block      = semigroup | graph | category | action | covering ;
    semigroup  = "semigroup" NAME "{" { sg_stmt } "}" ;
    sg_stmt    = "elements" ":" names ";"
               | "table" ":" rows ";"            (one row per line)
               | "projections" ":" names ";"
               | "lambda" ":" names ";" | "rho" ":" names ";" ;
    graph      = "graph" NAME "{" { "vertices" ":" names ";"
                                  | "edges" ":" edge { "," edge } ";"
                                  | "truncate" ":" INT ";" } "}" ;
    edge       = NAME ":" NAME "->" NAME ;          (source -> target)
    category   = "category" NAME "{" { "objects" ":" names ";"
                                     | "morphisms" ":" edge { "," edge } ";"
                                     | "unit" NAME "=" NAME ";"
                                     | "compose" NAME NAME "=" NAME ";"
                                     | "overflow" NAME NAME ";" } "}" ;
    action     = "action" NAME "on" NAME "over" "{" names "}"
                 "{" { NAME ":" [ pair { "," pair } ] ";"
                     | "domain" NAME ":" "{" names "}" ";" } "}" ;
    pair       = NAME "->" NAME ;
    covering   = "covering" NAME "from" NAME "to" NAME
                 "{" { "objects" ":" pair { "," pair } ";"
                     | "morphisms" ":" NAME "->" "{" names "}"
                                   { "," NAME "->" "{" names "}" } ";" } "}" ;
    names      = NAME { [","] NAME } ;

In a category every object without a ``unit`` statement gets a unit
morphism named after the object. ``compose a b = c`` means ``ab = c`` with
b applied first.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .cat import OVERFLOW, FinCat, graph_category
from .conv import CoveringMorphism
from .errors import DSLError, DSLSemanticError
from .rsem import FinRS
from .spectrum import EtaleAction

# --------------------------------------------------------------------------
# tokens

_BARE = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_.']*")
_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<arrow>->)
  | (?P<name>[A-Za-z0-9_][A-Za-z0-9_.']*)
  | (?P<punct>[{}:;,=])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    col: int


def tokenize(text):
    out, line, start, pos = [], 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DSLError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        col = pos - start + 1
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind == "string":
            raw = m.group()[1:-1]
            out.append(Token("name", re.sub(r"\\(.)", r"\1", raw), line, col))
        elif kind == "arrow":
            out.append(Token("punct", "->", line, col))
        elif kind in ("name", "punct"):
            out.append(Token(kind, m.group(), line, col))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


def quote(name):
    name = str(name)
    if _BARE.fullmatch(name):
        return name
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


# --------------------------------------------------------------------------
# definitions


def _pos():
    return field(default=0, compare=False, repr=False)


@dataclass(frozen=True)
class SemigroupDef:
    name: str
    elements: tuple
    table: tuple
    projections: tuple
    lam: tuple | None = None
    rho: tuple | None = None
    line: int = _pos()
    row_lines: tuple = field(default=(), compare=False, repr=False)


@dataclass(frozen=True)
class GraphDef:
    name: str
    vertices: tuple
    edges: tuple
    truncate: int | None = None
    line: int = _pos()


@dataclass(frozen=True)
class CategoryDef:
    name: str
    objects: tuple
    morphisms: tuple
    units: tuple = ()
    products: tuple = ()
    overflow: tuple = ()
    line: int = _pos()


@dataclass(frozen=True)
class ActionDef:
    name: str
    semigroup: str
    points: tuple
    maps: tuple
    domains: tuple = ()
    line: int = _pos()


@dataclass(frozen=True)
class CoveringDef:
    name: str
    source: str
    target: str
    objects: tuple
    morphisms: tuple
    line: int = _pos()


_KIND = {SemigroupDef: "semigroup", GraphDef: "graph", CategoryDef: "category",
         ActionDef: "action", CoveringDef: "covering"}


# --------------------------------------------------------------------------
# parser


class _Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return DSLError(msg, tok.line, tok.col)

    def next(self):
        t = self.tok
        self.i += 1
        return t

    def at(self, value):
        return self.tok.kind == "punct" and self.tok.value == value

    def expect(self, value):
        if not self.at(value):
            found = self.tok.value or "end of input"
            raise self.error(f"expected {value!r}, found {found!r}")
        return self.next()

    def name(self, what="name"):
        if self.tok.kind != "name":
            found = self.tok.value or "end of input"
            raise self.error(f"expected {what}, found {found!r}")
        return self.next().value

    def keyword(self, *words):
        t = self.tok
        if t.kind != "name" or t.value not in words:
            raise self.error(f"expected one of {', '.join(words)}, found {t.value!r}")
        return self.next().value

    def names(self, stop):
        out = []
        while not self.at(stop):
            out.append(self.name())
            if self.at(","):
                self.next()
        return tuple(out)

    def separated(self, item):
        out = [item()]
        while self.at(","):
            self.next()
            out.append(item())
        return out

    def edge(self):
        n = self.name("morphism name")
        self.expect(":")
        src = self.name("source")
        self.expect("->")
        return (n, src, self.name("target"))

    def pair(self):
        a = self.name()
        self.expect("->")
        return (a, self.name())

    def braced_names(self):
        self.expect("{")
        out = self.names("}")
        self.expect("}")
        return out

    # blocks

    def file(self):
        defs = []
        while self.tok.kind != "eof":
            kw = self.keyword("semigroup", "graph", "category", "action", "covering")
            defs.append(getattr(self, kw)())
        return defs

    def _once(self, seen, key, tok):
        if key in seen:
            raise DSLError(f"duplicate {key!r} statement", tok.line, tok.col)
        seen.add(key)

    def semigroup(self):
        line = self.toks[self.i - 1].line
        name = self.name("semigroup name")
        self.expect("{")
        got, seen = {}, set()
        while not self.at("}"):
            t = self.tok
            key = self.keyword("elements", "table", "projections", "lambda", "rho")
            self._once(seen, key, t)
            self.expect(":")
            if key == "table":
                got[key] = self.rows()
            else:
                got[key] = self.names(";")
            self.expect(";")
        self.expect("}")
        for key in ("elements", "table", "projections"):
            if key not in got:
                raise DSLSemanticError(f"semigroup {name!r} has no {key}", line)
        rows = got["table"]
        return SemigroupDef(name, got["elements"], tuple(r for _, r in rows),
                            got["projections"], got.get("lambda"), got.get("rho"), line,
                            tuple(l for l, _ in rows))

    def rows(self):
        rows, cur, cur_line = [], [], None
        while not self.at(";"):
            t = self.tok
            if t.kind != "name":
                raise self.error(f"unexpected {t.value or 'end of input'!r} in table")
            if cur_line is not None and t.line != cur_line:
                rows.append((cur_line, tuple(cur)))
                cur = []
            cur_line = t.line
            cur.append(self.next().value)
            if self.at(","):
                self.next()
        if cur:
            rows.append((cur_line, tuple(cur)))
        return tuple(rows)

    def graph(self):
        line = self.toks[self.i - 1].line
        name = self.name("graph name")
        self.expect("{")
        vertices, edges, truncate, seen = (), [], None, set()
        while not self.at("}"):
            t = self.tok
            key = self.keyword("vertices", "edges", "truncate")
            self.expect(":")
            if key == "vertices":
                self._once(seen, key, t)
                vertices = self.names(";")
            elif key == "edges":
                edges.extend(self.separated(self.edge))
            else:
                self._once(seen, key, t)
                v = self.name("integer")
                if not v.isdigit():
                    raise DSLError("truncation must be a non-negative integer", t.line, t.col)
                truncate = int(v)
            self.expect(";")
        self.expect("}")
        return GraphDef(name, vertices, tuple(edges), truncate, line)

    def category(self):
        line = self.toks[self.i - 1].line
        name = self.name("category name")
        self.expect("{")
        objects, morphisms, units, products, overflow = (), [], [], [], []
        seen = set()
        while not self.at("}"):
            t = self.tok
            key = self.keyword("objects", "morphisms", "unit", "compose", "overflow")
            if key == "objects":
                self._once(seen, key, t)
                self.expect(":")
                objects = self.names(";")
            elif key == "morphisms":
                self.expect(":")
                morphisms.extend(self.separated(self.edge))
            elif key == "unit":
                o = self.name("object")
                self.expect("=")
                units.append((o, self.name("morphism")))
            elif key == "compose":
                a, b = self.name(), self.name()
                self.expect("=")
                products.append((a, b, self.name()))
            else:
                overflow.append((self.name(), self.name()))
            self.expect(";")
        self.expect("}")
        return CategoryDef(name, objects, tuple(morphisms), tuple(units), tuple(products),
                           tuple(overflow), line)

    def action(self):
        line = self.toks[self.i - 1].line
        name = self.name("action name")
        self.keyword("on")
        sg = self.name("semigroup name")
        self.keyword("over")
        points = self.braced_names()
        self.expect("{")
        maps, domains = [], []
        while not self.at("}"):
            if self.tok.kind == "name" and self.tok.value == "domain" and \
                    self.toks[self.i + 1].kind == "name":
                self.next()
                e = self.name("projection")
                self.expect(":")
                domains.append((e, self.braced_names()))
            else:
                s = self.name("element")
                self.expect(":")
                pairs = () if self.at(";") else tuple(self.separated(self.pair))
                maps.append((s, pairs))
            self.expect(";")
        self.expect("}")
        return ActionDef(name, sg, points, tuple(maps), tuple(domains), line)

    def covering(self):
        line = self.toks[self.i - 1].line
        name = self.name("covering name")
        self.keyword("from")
        src = self.name("category name")
        self.keyword("to")
        tgt = self.name("category name")
        self.expect("{")
        objects, morphisms = [], []
        while not self.at("}"):
            key = self.keyword("objects", "morphisms")
            self.expect(":")
            if key == "objects":
                objects.extend(self.separated(self.pair))
            else:
                def item():
                    a = self.name()
                    self.expect("->")
                    return (a, self.braced_names())
                morphisms.extend(self.separated(item))
            self.expect(";")
        self.expect("}")
        return CoveringDef(name, src, tgt, tuple(objects), tuple(morphisms), line)


# --------------------------------------------------------------------------
# workspace


class Workspace:
    """Named definitions by kind. Graphs and categories share one namespace."""

    def __init__(self, defs=()):
        self.defs = {k: {} for k in ("semigroup", "category", "action", "covering")}
        self.order = []
        self._built = {}
        for d in defs:
            self.add(d)

    def add(self, d):
        kind = _KIND[type(d)]
        space = "category" if kind == "graph" else kind
        if d.name in self.defs[space]:
            raise DSLSemanticError(f"duplicate {space} name {d.name!r}", d.line)
        self.defs[space][d.name] = d
        self.order.append(d)

    def __eq__(self, other):
        return isinstance(other, Workspace) and self.order == other.order

    def names(self, kind):
        return list(self.defs[kind])

    def get(self, kind, name):
        space = self.defs[kind]
        if name is None:
            if len(space) != 1:
                raise DSLSemanticError(
                    f"{'no' if not space else 'several'} {kind} definitions; pick one by name")
            return next(iter(space.values()))
        if name not in space:
            raise DSLSemanticError(f"unknown {kind} {name!r}")
        return space[name]

    def validate(self):
        for d in self.order:
            if isinstance(d, SemigroupDef):
                self.semigroup(d.name)
            elif isinstance(d, ActionDef):
                self.action(d.name)
            elif isinstance(d, CoveringDef):
                self.covering(d.name)
            elif isinstance(d, CategoryDef) or d.truncate is not None:
                self.category(d.name)
        return self

    # builders

    def _memo(self, key, build):
        if key not in self._built:
            self._built[key] = build()
        return self._built[key]

    def semigroup(self, name=None) -> FinRS:
        d = self.get("semigroup", name)
        return self._memo(("semigroup", d.name), lambda: self._build_semigroup(d))

    def _build_semigroup(self, d):
        idx = _index(d.elements, "element", d.line)
        table = []
        lines = d.row_lines or (d.line,) * len(d.table)
        for line, row in zip(lines, d.table):
            if len(row) != len(d.elements):
                raise DSLSemanticError(
                    f"table row has {len(row)} entries, expected {len(d.elements)}", line)
            table.append([_lookup(idx, x, "element", line) for x in row])
        if len(table) != len(d.elements):
            raise DSLSemanticError(
                f"table has {len(table)} rows, expected {len(d.elements)}", d.line)
        E = [_lookup(idx, x, "element", d.line) for x in d.projections]
        lam = None if d.lam is None else [_lookup(idx, x, "element", d.line) for x in d.lam]
        rho = None if d.rho is None else [_lookup(idx, x, "element", d.line) for x in d.rho]
        for given, label in ((lam, "lambda"), (rho, "rho")):
            if given is not None and len(given) != len(d.elements):
                raise DSLSemanticError(f"{label} needs one entry per element", d.line)
        return FinRS.build(table, E, names=d.elements, lam=lam, rho=rho)

    def category(self, name=None, truncate=None) -> FinCat:
        """Built objects are cached, so repeated lookups return the same instance."""
        d = self.get("category", name)
        return self._memo(("category", d.name, truncate),
                          lambda: self._build_category(d, truncate))

    def _build_category(self, d, truncate):
        if isinstance(d, GraphDef):
            N = truncate if truncate is not None else d.truncate
            if N is None:
                raise DSLSemanticError(f"graph {d.name!r} needs a truncation length", d.line)
            vidx = _index(d.vertices, "vertex", d.line)
            for e, s, t in d.edges:
                _lookup(vidx, s, "vertex", d.line)
                _lookup(vidx, t, "vertex", d.line)
            _index([e for e, _, _ in d.edges] + list(d.vertices), "morphism", d.line)
            return graph_category(d.vertices, d.edges, N, d.name)
        _index(d.objects, "object", d.line)
        morphisms = list(d.morphisms)
        declared = {m for m, _, _ in morphisms}
        units = dict(d.units)
        for o in d.objects:
            if o not in units:
                units[o] = o
                if o not in declared:
                    morphisms.append((o, o, o))
        products = {(a, b): c for a, b, c in d.products}
        for a, b in d.overflow:
            products[(a, b)] = OVERFLOW
        return FinCat.from_products(d.objects, morphisms, products, units, d.name)

    def graph_edges(self, name=None):
        d = self.get("category", name)
        if not isinstance(d, GraphDef):
            raise DSLSemanticError(f"{d.name!r} is not a graph")
        return [e for e, _, _ in d.edges]

    def is_graph(self, name=None):
        return isinstance(self.get("category", name), GraphDef)

    def action(self, name=None) -> EtaleAction:
        d = self.get("action", name)
        return self._memo(("action", d.name), lambda: self._build_action(d))

    def _build_action(self, d):
        S = self.semigroup(d.semigroup)
        pidx = _index(d.points, "point", d.line)
        maps = [None] * S.n
        for s, pairs in d.maps:
            i = _lookup_elem(S, s, d.line)
            if maps[i] is not None:
                raise DSLSemanticError(f"element {s!r} mapped twice", d.line)
            m = {}
            for p, q in pairs:
                x, y = _lookup(pidx, p, "point", d.line), _lookup(pidx, q, "point", d.line)
                if m.setdefault(x, y) != y:
                    raise DSLSemanticError(f"{s!r} sends {p!r} to two points", d.line)
            maps[i] = m
        for e, pts in d.domains:
            i = _lookup_elem(S, e, d.line)
            if i not in S.E:
                raise DSLSemanticError(f"domain given for non-projection {e!r}", d.line)
            ident = {_lookup(pidx, p, "point", d.line): _lookup(pidx, p, "point", d.line)
                     for p in pts}
            if maps[i] is None:
                maps[i] = ident
            elif maps[i] != ident:
                raise DSLSemanticError(f"map of {e!r} is not the identity on its domain",
                                       d.line)
        maps = [m if m is not None else {} for m in maps]
        return EtaleAction.from_maps(S, d.points, maps)

    def action_semigroup(self, name=None):
        return self.get("action", name).semigroup

    def covering(self, name=None) -> CoveringMorphism:
        d = self.get("covering", name)
        C, D = self.category(d.source), self.category(d.target)
        objects = dict(d.objects)
        for o in C.objects:
            if o not in objects:
                raise DSLSemanticError(f"object {o!r} of {d.source!r} has no image", d.line)
        for v, w in d.objects:
            if v not in C.objects:
                raise DSLSemanticError(f"unknown object {v!r}", d.line)
            if w not in D.objects:
                raise DSLSemanticError(f"unknown object {w!r}", d.line)
        morphisms = dict(d.morphisms)
        for a, xs in d.morphisms:
            if a not in C.morphisms:
                raise DSLSemanticError(f"unknown morphism {a!r}", d.line)
            for x in xs:
                if x not in D.morphisms:
                    raise DSLSemanticError(f"unknown morphism {x!r}", d.line)
        return CoveringMorphism.from_names(C, D, objects, morphisms)


def _index(names, what, line):
    idx = {}
    for i, x in enumerate(names):
        if x in idx:
            raise DSLSemanticError(f"duplicate {what} {x!r}", line)
        idx[x] = i
    return idx


def _lookup(idx, x, what, line):
    if x not in idx:
        raise DSLSemanticError(f"unknown {what} {x!r}", line)
    return idx[x]


def _lookup_elem(S, x, line):
    if x not in S.names:
        raise DSLSemanticError(f"unknown element {x!r}", line)
    return S.names.index(x)


def parse(text) -> Workspace:
    ws = Workspace(_Parser(text).file())
    _resolve(ws)
    return ws


def _resolve(ws):
    for d in ws.order:
        if isinstance(d, ActionDef) and d.semigroup not in ws.defs["semigroup"]:
            raise DSLSemanticError(f"action {d.name!r} refers to unknown semigroup "
                                   f"{d.semigroup!r}", d.line)
        if isinstance(d, CoveringDef):
            for c in (d.source, d.target):
                if c not in ws.defs["category"]:
                    raise DSLSemanticError(f"covering {d.name!r} refers to unknown "
                                           f"category {c!r}", d.line)


# --------------------------------------------------------------------------
# printer


def _names(xs):
    return " ".join(quote(x) for x in xs)


def format_def(d) -> str:
    q = quote
    if isinstance(d, SemigroupDef):
        lines = [f"semigroup {q(d.name)} {{", f"  elements: {_names(d.elements)};",
                 "  table:"]
        lines += [f"    {_names(row)}" for row in d.table]
        lines[-1] += ";"
        lines.append(f"  projections: {_names(d.projections)};")
        if d.lam is not None:
            lines.append(f"  lambda: {_names(d.lam)};")
        if d.rho is not None:
            lines.append(f"  rho: {_names(d.rho)};")
    elif isinstance(d, GraphDef):
        lines = [f"graph {q(d.name)} {{", f"  vertices: {_names(d.vertices)};"]
        if d.edges:
            lines.append("  edges: " + ", ".join(f"{q(e)}: {q(s)} -> {q(t)}"
                                                 for e, s, t in d.edges) + ";")
        if d.truncate is not None:
            lines.append(f"  truncate: {d.truncate};")
    elif isinstance(d, CategoryDef):
        lines = [f"category {q(d.name)} {{", f"  objects: {_names(d.objects)};"]
        if d.morphisms:
            lines.append("  morphisms: " + ", ".join(f"{q(m)}: {q(s)} -> {q(t)}"
                                                     for m, s, t in d.morphisms) + ";")
        lines += [f"  unit {q(o)} = {q(m)};" for o, m in d.units]
        lines += [f"  compose {q(a)} {q(b)} = {q(c)};" for a, b, c in d.products]
        lines += [f"  overflow {q(a)} {q(b)};" for a, b in d.overflow]
    elif isinstance(d, ActionDef):
        lines = [f"action {q(d.name)} on {q(d.semigroup)} over {{{_names(d.points)}}} {{"]
        lines += [f"  {q(s)}: " + ", ".join(f"{q(p)} -> {q(r)}" for p, r in pairs) + ";"
                  for s, pairs in d.maps]
        lines += [f"  domain {q(e)}: {{{_names(pts)}}};" for e, pts in d.domains]
    else:
        lines = [f"covering {q(d.name)} from {q(d.source)} to {q(d.target)} {{"]
        if d.objects:
            lines.append("  objects: " + ", ".join(f"{q(v)} -> {q(w)}"
                                                   for v, w in d.objects) + ";")
        if d.morphisms:
            lines.append("  morphisms: " + ", ".join(f"{q(a)} -> {{{_names(xs)}}}"
                                                     for a, xs in d.morphisms) + ";")
    lines.append("}")
    return "\n".join(lines)


def format_workspace(ws: Workspace) -> str:
    return "\n\n".join(format_def(d) for d in ws.order) + "\n"


# --------------------------------------------------------------------------
# expressions: + - * ^ parentheses, numbers (suffix i for imaginary), names

_EXPR_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?i?)
  | (?P<name>[A-Za-z_][A-Za-z0-9_.']*)
  | (?P<quoted>'[^']*'|"[^"]*"|\[[^\]]*\])
  | (?P<op>[-+*^()])
""", re.VERBOSE)


def _expr_tokens(text):
    out, pos = [], 0
    while pos < len(text):
        m = _EXPR_TOKEN.match(text, pos)
        if not m:
            raise DSLError(f"unexpected character {text[pos]!r} in expression", 1, pos + 1)
        kind = m.lastgroup
        if kind == "quoted":
            out.append(("name", m.group()[1:-1], pos + 1))
        elif kind != "ws":
            out.append((kind, m.group(), pos + 1))
        pos = m.end()
    out.append(("eof", "", pos + 1))
    return out


def parse_expression(text):
    """AST of nested tuples: ("num", text), ("name", text), ("add"|"sub"|"mul", a, b),
    ("neg", a), ("pow", a, k)."""
    toks = _expr_tokens(text)
    i = 0

    def peek():
        return toks[i]

    def take(kind=None, value=None):
        nonlocal i
        t = toks[i]
        if (kind and t[0] != kind) or (value and t[1] != value):
            raise DSLError(f"unexpected {t[1] or 'end of expression'!r}", 1, t[2])
        i += 1
        return t

    def expr():
        node = term()
        while peek()[1] in ("+", "-") and peek()[0] == "op":
            op = take()[1]
            node = ("add" if op == "+" else "sub", node, term())
        return node

    def term():
        node = unary()
        while peek()[:2] == ("op", "*"):
            take()
            node = ("mul", node, unary())
        return node

    def unary():
        if peek()[0] == "op" and peek()[1] in ("+", "-"):
            op = take()[1]
            node = unary()
            return ("neg", node) if op == "-" else node
        return power()

    def power():
        node = atom()
        if peek()[0] == "op" and peek()[1] == "^":
            take()
            t = take("num")
            if not t[1].isdigit():
                raise DSLError("exponent must be a non-negative integer", 1, t[2])
            node = ("pow", node, int(t[1]))
        return node

    def atom():
        t = peek()
        if t[0] == "num":
            take()
            return ("num", t[1])
        if t[0] == "name":
            take()
            return ("name", t[1])
        take("op", "(")
        node = expr()
        take("op", ")")
        return node

    tree = expr()
    take("eof")
    return tree


def number_value(text, exact=False):
    imag = text.endswith("i")
    body = text[:-1] if imag else text
    if exact:
        if imag:
            raise DSLSemanticError("exact mode supports real rationals only")
        return Fraction(body)
    v = float(body)
    return complex(0, v) if imag else complex(v)


def evaluate(tree, algebra):
    """Fold an expression AST through ``algebra`` (scalar, atom, add, mul, neg)."""
    kind = tree[0]
    if kind == "num":
        return algebra.scalar(tree[1])
    if kind == "name":
        return algebra.atom(tree[1])
    if kind == "neg":
        return algebra.neg(evaluate(tree[1], algebra))
    if kind == "pow":
        base = evaluate(tree[1], algebra)
        out = algebra.scalar("1")
        for _ in range(tree[2]):
            out = algebra.mul(out, base)
        return out
    a, b = evaluate(tree[1], algebra), evaluate(tree[2], algebra)
    if kind == "add":
        return algebra.add(a, b)
    if kind == "sub":
        return algebra.add(a, algebra.neg(b))
    return algebra.mul(a, b)


_VAR = re.compile(r"x(\d*)")


class PolynomialAlgebra:
    """Noncommutative polynomials as {word: coefficient}; ``x`` is ``x1``."""

    def __init__(self, names=()):
        if isinstance(names, dict):
            self.names = dict(names)
        else:
            self.names = {n: i for i, n in enumerate(names)}

    def scalar(self, text):
        return {(): number_value(text)}

    def atom(self, name):
        if name in self.names:
            return {(self.names[name],): 1.0 + 0j}
        m = _VAR.fullmatch(name)
        if not m or m.group(1) == "0":
            raise DSLSemanticError(f"unknown variable {name!r}")
        return {(int(m.group(1) or 1) - 1,): 1.0 + 0j}

    def add(self, a, b):
        out = dict(a)
        for w, c in b.items():
            out[w] = out.get(w, 0) + c
        return {w: c for w, c in out.items() if c != 0}

    def neg(self, a):
        return {w: -c for w, c in a.items()}

    def mul(self, a, b):
        out = {}
        for w1, c1 in a.items():
            for w2, c2 in b.items():
                out[w1 + w2] = out.get(w1 + w2, 0) + c1 * c2
        return {w: c for w, c in out.items() if c != 0}


def parse_polynomial(text, names=()):
    return evaluate(parse_expression(text), PolynomialAlgebra(names))


# --------------------------------------------------------------------------
# export


def semigroup_to_def(S: FinRS, name) -> SemigroupDef:
    T = S.table
    table = tuple(tuple(S.name(int(T[s, t])) for t in range(S.n)) for s in range(S.n))
    return SemigroupDef(name, S.names, table, tuple(S.name(e) for e in S.E))


def category_to_def(C: FinCat, name) -> CategoryDef:
    units = set(int(u) for u in C.unit)
    morphisms = tuple((m, C.objects[C.d[i]], C.objects[C.r[i]])
                      for i, m in enumerate(C.morphisms)
                      if not (i in units and m == C.objects[C.d[i]]))
    unit_stmts = tuple((o, C.morphisms[C.unit[k]]) for k, o in enumerate(C.objects)
                       if C.morphisms[C.unit[k]] != o)
    products, overflow = [], []
    for a in range(C.n):
        for b in range(C.n):
            c = int(C.comp[a, b])
            if a in units or b in units or c == -1:
                continue
            if c == OVERFLOW:
                overflow.append((C.morphisms[a], C.morphisms[b]))
            else:
                products.append((C.morphisms[a], C.morphisms[b], C.morphisms[c]))
    return CategoryDef(name, C.objects, morphisms, unit_stmts, tuple(products), tuple(overflow))
