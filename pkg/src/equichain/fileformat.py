"""Line-oriented input format.

One declaration per line; ``#`` starts a comment.  Simplices inside chains,
levels and subcomplexes are written as hyphen-joined vertex ids (``1-2``).

    entry NAME
    complex NAME [exact]
    simplex COMPLEX: v1 v2 ...
    action NAME on COMPLEX order N: v->w, ...
    map NAME: SOURCE -> TARGET: v->w, ...
    subcomplex NAME of COMPLEX: s1 s2 ...
    filtration NAME on COMPLEX action ACTION
    level k ALPHA: {s1 s2 ...}, {...}
    chain NAME [on COMPLEX] dim k: s1 s2 ...
    square NAME: top=MAP left=MAP right=MAP bottom=MAP
    additivity NAME: MAP
    quotient NAME: FILTRATION via MAP to FILTRATION
    expect KEY = VALUE : provenance

``complex NAME`` closes its simplices under faces; ``complex NAME exact``
takes them literally and rejects a list that is not face-closed.  ``level``
lines belong to the most recent ``filtration``.  An action of order 2 may
list each swap once.  An expected VALUE is a single token without spaces.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .cells import (CellularMap, Chain, Complex, GroupAction, MAX_GROUP_ORDER,
                    all_faces, simplex)
from .equivariant import FiltrationData, validate_filtration_data
from .errors import EquichainError, InputError
from .gf2 import Subspace

NAME = r"[A-Za-z_][\w.]*"
ENTRY = r"[A-Za-z_][\w.-]*"
VERTEX = re.compile(r"^[\w.+]+$")
DECLARATIONS = {"entry", "action", "map", "subcomplex", "filtration", "level", "chain",
                "square", "additivity", "quotient", "expect"}


@dataclass
class Filtration:
    name: str
    complex: str
    action: str
    levels: dict[tuple[int, int], list[frozenset]] = field(default_factory=dict)


@dataclass
class Expectation:
    key: str
    value: str
    provenance: str


@dataclass
class Document:
    entry: str | None = None
    complexes: dict[str, Complex] = field(default_factory=dict)
    exact: set[str] = field(default_factory=set)
    actions: dict[str, tuple[str, GroupAction, dict]] = field(default_factory=dict)
    maps: dict[str, tuple[str, str, CellularMap]] = field(default_factory=dict)
    subcomplexes: dict[str, tuple[str, frozenset]] = field(default_factory=dict)
    filtrations: dict[str, Filtration] = field(default_factory=dict)
    chains: dict[str, tuple[str, Chain]] = field(default_factory=dict)
    squares: dict[str, dict[str, str]] = field(default_factory=dict)
    additivity: dict[str, str] = field(default_factory=dict)
    quotients: dict[str, tuple[str, str, str]] = field(default_factory=dict)
    expectations: list[Expectation] = field(default_factory=list)

    def filtration_data(self, name: str) -> FiltrationData:
        f = self.filtrations[name]
        action = self.actions[f.action][1]
        gens = {key: [list(c) for c in chains] for key, chains in f.levels.items()}
        return FiltrationData.from_generators(action, gens)

    def action(self, name: str) -> GroupAction:
        return self.actions[name][1]

    def __eq__(self, other):
        return isinstance(other, Document) and dump(self) == dump(other)


# ------------------------------------------------------------------ parse

def _tok_simplex(tok: str, line: int) -> tuple:
    parts = tok.split("-")
    if not all(VERTEX.match(p) for p in parts):
        raise InputError(f"bad simplex token {tok!r}", line)
    return simplex(parts)


def _pairs(text: str, line: int) -> dict:
    out = {}
    for item in filter(None, (t.strip() for t in text.split(","))):
        m = re.fullmatch(r"([\w.+]+)\s*->\s*([\w.+]+)", item)
        if not m:
            raise InputError(f"expected v->w, got {item!r}", line)
        if m.group(1) in out:
            raise InputError(f"vertex {m.group(1)} assigned twice", line)
        out[m.group(1)] = m.group(2)
    return out


class _Parser:
    def __init__(self):
        self.doc = Document()
        self.raw: dict[str, list[tuple]] = {}
        self.order: list[str] = []
        self.current_filtration: Filtration | None = None
        self.last_complex: str | None = None
        self.deferred: list = []

    def complex(self, name: str, line: int) -> Complex:
        if name not in self.doc.complexes:
            raise InputError(f"unknown complex {name!r}", line)
        return self.doc.complexes[name]

    def cells(self, cname: str, tokens, k: int | None, line: int) -> frozenset:
        x = self.complex(cname, line)
        out = set()
        for tok in tokens:
            s = _tok_simplex(tok, line)
            if s not in x.simplices:
                missing = [v for v in s if (v,) not in x.simplices]
                what = f"undeclared vertex {missing[0]}" if missing else f"simplex {tok} not in {cname}"
                raise InputError(what, line)
            if k is not None and len(s) != k + 1:
                raise InputError(f"simplex {tok} does not have dimension {k}", line)
            if s in out:
                raise InputError(f"simplex {tok} listed twice", line)
            out.add(s)
        return frozenset(out)

    def finish_complexes(self):
        for name in self.order:
            simplices = self.raw[name]
            if name in self.doc.exact:
                x = Complex(s for s, _ in simplices)
                try:
                    x.validate()
                except EquichainError as e:
                    bad = str(e)
                    line = next((ln for s, ln in simplices if str(s) in bad), None)
                    raise InputError(bad, line) from None
            else:
                x = Complex.from_facets(s for s, _ in simplices)
            self.doc.complexes[name] = x

    def parse(self, text: str) -> Document:
        lines = []
        for n, raw in enumerate(text.splitlines(), 1):
            body = raw.split("#", 1)[0].strip()
            if body:
                lines.append((n, body))
        # complexes first so that later lines may refer to them in any order
        for n, body in lines:
            head = body.split()[0]
            if head == "complex":
                m = re.fullmatch(rf"complex\s+({NAME})(\s+exact)?", body)
                if not m:
                    raise InputError("expected 'complex NAME [exact]'", n)
                name = m.group(1)
                if name in self.raw:
                    raise InputError(f"complex {name!r} declared twice", n)
                self.raw[name] = []
                self.order.append(name)
                if m.group(2):
                    self.doc.exact.add(name)
            elif head == "simplex":
                m = re.fullmatch(rf"simplex\s+({NAME})\s*:\s*(.*)", body)
                if not m:
                    raise InputError("expected 'simplex COMPLEX: v1 v2 ...'", n)
                if m.group(1) not in self.raw:
                    raise InputError(f"unknown complex {m.group(1)!r}", n)
                verts = m.group(2).split()
                if not verts or not all(VERTEX.match(v) for v in verts):
                    raise InputError("a simplex needs vertex ids", n)
                if len(set(verts)) != len(verts):
                    raise InputError("repeated vertex in simplex", n)
                self.raw[m.group(1)].append((simplex(verts), n))
        self.finish_complexes()
        for n, body in lines:
            head = body.split()[0]
            if head in ("complex", "simplex"):
                self.last_complex = body.split()[1].rstrip(":")
                continue
            if head not in DECLARATIONS:
                raise InputError(f"unknown declaration {head!r}", n)
            getattr(self, "_" + head)(body, n)
        for check in self.deferred:
            check()
        return self.doc

    # each handler parses one declaration kind

    def _entry(self, body, n):
        m = re.fullmatch(rf"entry\s+({ENTRY})", body)
        if not m:
            raise InputError("expected 'entry NAME'", n)
        self.doc.entry = m.group(1)

    def _action(self, body, n):
        m = re.fullmatch(rf"action\s+({NAME})\s+on\s+({NAME})\s+order\s+(\d+)\s*:\s*(.*)", body)
        if not m:
            raise InputError("expected 'action NAME on COMPLEX order N: v->w, ...'", n)
        name, cname, order = m.group(1), m.group(2), int(m.group(3))
        self._fresh(name, n)
        x = self.complex(cname, n)
        gen = _pairs(m.group(4), n)
        verts = set(x.vertices)
        for v, w in gen.items():
            if v not in verts or w not in verts:
                raise InputError(f"undeclared vertex {v if v not in verts else w}", n)
        if not 1 <= order <= MAX_GROUP_ORDER:
            raise InputError(f"order must be between 1 and {MAX_GROUP_ORDER}", n)
        if order == 2:
            full = dict(gen)
            for v, w in gen.items():
                if full.setdefault(w, v) != v:
                    raise InputError(f"{w} is sent to {full[w]}, so {v}->{w} is not an involution", n)
            action = GroupAction.involution(x, full)
        elif order == 1:
            if any(v != w for v, w in gen.items()):
                raise InputError("an action of order 1 must be trivial", n)
            action = GroupAction(x, ("e",), {("e", "e"): "e"}, {"e": {v: v for v in x.vertices}})
        else:
            action = GroupAction.cyclic(x, gen, order)
        try:
            action.validate()
        except EquichainError as e:
            raise InputError(str(e), n) from None
        self.doc.actions[name] = (cname, action, gen)

    def _map(self, body, n):
        m = re.fullmatch(rf"map\s+({NAME})\s*:\s*({NAME})\s*->\s*({NAME})\s*:\s*(.*)", body)
        if not m:
            raise InputError("expected 'map NAME: SOURCE -> TARGET: v->w, ...'", n)
        name, src, tgt = m.group(1), m.group(2), m.group(3)
        self._fresh(name, n)
        xs, xt = self.complex(src, n), self.complex(tgt, n)
        vm = _pairs(m.group(4), n)
        missing = [v for v in xs.vertices if v not in vm]
        if missing:
            raise InputError(f"map does not assign vertex {missing[0]}", n)
        stray = [v for v in vm if (v,) not in xs.simplices] + [w for w in vm.values() if (w,) not in xt.simplices]
        if stray:
            raise InputError(f"undeclared vertex {stray[0]}", n)
        f = CellularMap(xs, xt, vm)
        try:
            f.validate()
        except EquichainError as e:
            raise InputError(str(e), n) from None
        self.doc.maps[name] = (src, tgt, f)

    def _subcomplex(self, body, n):
        m = re.fullmatch(rf"subcomplex\s+({NAME})\s+of\s+({NAME})\s*:\s*(.*)", body)
        if not m:
            raise InputError("expected 'subcomplex NAME of COMPLEX: s1 s2 ...'", n)
        self._fresh(m.group(1), n)
        gens = self.cells(m.group(2), m.group(3).split(), None, n)
        closed = frozenset(f for s in gens for f in all_faces(s))
        self.doc.subcomplexes[m.group(1)] = (m.group(2), closed)

    def _filtration(self, body, n):
        m = re.fullmatch(rf"filtration\s+({NAME})\s+on\s+({NAME})\s+action\s+({NAME})", body)
        if not m:
            raise InputError("expected 'filtration NAME on COMPLEX action ACTION'", n)
        name, cname, aname = m.groups()
        self._fresh(name, n)
        self.complex(cname, n)
        if aname not in self.doc.actions:
            raise InputError(f"unknown action {aname!r}", n)
        if self.doc.actions[aname][0] != cname:
            raise InputError(f"action {aname} does not act on {cname}", n)
        f = Filtration(name, cname, aname)
        self.doc.filtrations[name] = f
        self.current_filtration = f

        def check():
            try:
                validate_filtration_data(self.doc.filtration_data(name))
            except EquichainError as e:
                raise InputError(f"filtration {name}: {e}", n) from None
        self.deferred.append(check)

    def _level(self, body, n):
        m = re.fullmatch(r"level\s+(\d+)\s+(-?\d+)\s*:\s*(.*)", body)
        if not m:
            raise InputError("expected 'level k ALPHA: {s1 s2 ...}, ...'", n)
        f = self.current_filtration
        if f is None:
            raise InputError("level outside a filtration", n)
        k, alpha = int(m.group(1)), int(m.group(2))
        if (k, alpha) in f.levels:
            raise InputError(f"level {k} {alpha} declared twice", n)
        rest = m.group(3).strip()
        chains = []
        if rest:
            groups = re.findall(r"\{([^{}]*)\}", rest)
            if re.sub(r"\{[^{}]*\}", "", rest).replace(",", "").strip():
                raise InputError("generators must be written as {s1 s2 ...}", n)
            chains = [self.cells(f.complex, g.split(), k, n) for g in groups]
        f.levels[(k, alpha)] = chains

    def _chain(self, body, n):
        m = re.fullmatch(rf"chain\s+({NAME})(?:\s+on\s+({NAME}))?\s+dim\s+(\d+)\s*:\s*(.*)", body)
        if not m:
            raise InputError("expected 'chain NAME [on COMPLEX] dim k: s1 s2 ...'", n)
        name, cname, k = m.group(1), m.group(2) or self.last_complex, int(m.group(3))
        self._fresh(name, n)
        if cname is None:
            raise InputError("chain declared before any complex", n)
        x = self.complex(cname, n)
        self.doc.chains[name] = (cname, Chain(x, k, self.cells(cname, m.group(4).split(), k, n)))

    def _square(self, body, n):
        m = re.fullmatch(rf"square\s+({NAME})\s*:\s*(.*)", body)
        if not m:
            raise InputError("expected 'square NAME: top=MAP left=MAP right=MAP bottom=MAP'", n)
        self._fresh(m.group(1), n)
        edges = dict(re.findall(rf"(\w+)=({NAME})", m.group(2)))
        if set(edges) != {"top", "left", "right", "bottom"}:
            raise InputError("a square needs top, left, right and bottom maps", n)
        for e in edges.values():
            if e not in self.doc.maps:
                raise InputError(f"unknown map {e!r}", n)
        t, l, r, b = (self.doc.maps[edges[k]] for k in ("top", "left", "right", "bottom"))
        if not (t[0] == l[0] and t[1] == r[0] and l[1] == b[0] and r[1] == b[1]):
            raise InputError("square maps do not fit together", n)
        self.doc.squares[m.group(1)] = edges

    def _additivity(self, body, n):
        m = re.fullmatch(rf"additivity\s+({NAME})\s*:\s*({NAME})", body)
        if not m:
            raise InputError("expected 'additivity NAME: MAP'", n)
        self._fresh(m.group(1), n)
        if m.group(2) not in self.doc.maps:
            raise InputError(f"unknown map {m.group(2)!r}", n)
        src, tgt, f = self.doc.maps[m.group(2)]
        if any(f.vertex_map[v] != v for v in f.source.vertices) or not f.source.simplices <= f.target.simplices:
            raise InputError("additivity needs the inclusion of a subcomplex", n)
        self.doc.additivity[m.group(1)] = m.group(2)

    def _quotient(self, body, n):
        m = re.fullmatch(rf"quotient\s+({NAME})\s*:\s*({NAME})\s+via\s+({NAME})\s+to\s+({NAME})", body)
        if not m:
            raise InputError("expected 'quotient NAME: FILTRATION via MAP to FILTRATION'", n)
        name, up, pi, down = m.groups()
        self._fresh(name, n)

        def check():
            for f in (up, down):
                if f not in self.doc.filtrations:
                    raise InputError(f"unknown filtration {f!r}", n)
            if pi not in self.doc.maps:
                raise InputError(f"unknown map {pi!r}", n)
            src, tgt, _ = self.doc.maps[pi]
            if self.doc.filtrations[up].complex != src or self.doc.filtrations[down].complex != tgt:
                raise InputError("quotient map does not join the two filtered complexes", n)
        self.deferred.append(check)
        self.doc.quotients[name] = (up, pi, down)

    def _expect(self, body, n):
        m = re.fullmatch(r"expect\s+(\S+)\s*=\s*(\S+)\s+:\s+(.+)", body)
        if not m:
            raise InputError("expected 'expect KEY = VALUE : provenance'", n)
        self.doc.expectations.append(Expectation(*m.groups()))

    def _fresh(self, name, n):
        d = self.doc
        taken = (set(d.actions) | set(d.maps) | set(d.subcomplexes) | set(d.filtrations) | set(d.chains)
                 | set(d.squares) | set(d.additivity) | set(d.quotients))
        if name in taken:
            raise InputError(f"name {name!r} declared twice", n)


def parse(text: str) -> Document:
    return _Parser().parse(text)


# ------------------------------------------------------------------ print

def _tok(s) -> str:
    return "-".join(s)


def _facets(x: Complex) -> list:
    sims = sorted(x.simplices, key=lambda s: (-len(s), s))
    out = []
    for s in sims:
        if not any(set(s) < set(t) for t in out):
            out.append(s)
    return sorted(out, key=lambda s: (len(s), s))


def _level_basis(doc: Document, f: Filtration, k: int, alpha: int) -> list[list]:
    x = doc.complexes[f.complex]
    cells = x.cells(k)
    sub = Subspace.span(x.n_cells(k), [sum(1 << x.index(s) for s in c) for c in f.levels[(k, alpha)]])
    return [[cells[i] for i in range(len(cells)) if v >> i & 1] for v in sub.basis]


def dump(doc: Document) -> str:
    """Canonical text: sorted declarations, facets only, reduced level bases."""
    out = []
    if doc.entry:
        out.append(f"entry {doc.entry}")
    for name in sorted(doc.complexes):
        x = doc.complexes[name]
        exact = name in doc.exact
        out.append(f"complex {name}" + (" exact" if exact else ""))
        sims = sorted(x.simplices, key=lambda s: (len(s), s)) if exact else _facets(x)
        out.extend(f"simplex {name}: {' '.join(s)}" for s in sims)
    for name in sorted(doc.actions):
        cname, a, _ = doc.actions[name]
        g = a.elements[1] if a.order > 1 else a.elements[0]
        moves = sorted((v, w) for v, w in a.maps[g].items() if v != w)
        if a.order == 2:
            moves = [(v, w) for v, w in moves if v < w]
        out.append(f"action {name} on {cname} order {a.order}: " + ", ".join(f"{v}->{w}" for v, w in moves))
    for name in sorted(doc.maps):
        src, tgt, f = doc.maps[name]
        pairs = ", ".join(f"{v}->{f.vertex_map[v]}" for v in sorted(f.vertex_map))
        out.append(f"map {name}: {src} -> {tgt}: {pairs}")
    for name in sorted(doc.subcomplexes):
        cname, cells = doc.subcomplexes[name]
        gens = _facets(Complex(cells)) if cells else []
        out.append(f"subcomplex {name} of {cname}: " + " ".join(_tok(s) for s in gens))
    for name in sorted(doc.filtrations):
        f = doc.filtrations[name]
        out.append(f"filtration {name} on {f.complex} action {f.action}")
        for k, alpha in sorted(f.levels):
            basis = _level_basis(doc, f, k, alpha)
            gens = ", ".join("{" + " ".join(_tok(s) for s in c) + "}" for c in basis)
            out.append(f"level {k} {alpha}: {gens}".rstrip())
    for name in sorted(doc.chains):
        cname, c = doc.chains[name]
        out.append(f"chain {name} on {cname} dim {c.k}: " + " ".join(_tok(s) for s in c.sorted_support()))
    for name in sorted(doc.squares):
        e = doc.squares[name]
        out.append(f"square {name}: " + " ".join(f"{k}={e[k]}" for k in ("top", "left", "right", "bottom")))
    for name in sorted(doc.additivity):
        out.append(f"additivity {name}: {doc.additivity[name]}")
    for name in sorted(doc.quotients):
        up, pi, down = doc.quotients[name]
        out.append(f"quotient {name}: {up} via {pi} to {down}")
    for e in sorted(doc.expectations, key=lambda e: e.key):
        out.append(f"expect {e.key} = {e.value} : {e.provenance}")
    return "\n".join(s.rstrip() for s in out) + "\n"
