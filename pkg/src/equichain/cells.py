"""Finite simplicial models with group actions and the chain calculus on them.

A simplex is a sorted tuple of vertex identifiers.  A k-chain is stored in
fully quotiented form: the set of k-simplices in its support.  Under that
representation the symmetric-difference relation and the vanishing of
lower-dimensional closed sets hold by construction, and the class of a closed
subcomplex ``A`` in degree ``k`` is just the set of k-simplices of ``A``.

Boundary is the odd-incidence rule: a (k-1)-face is in the boundary exactly
when an odd number of support simplices contain it.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Mapping

from . import gf2
from .errors import InputError, PreconditionError, StructuralError
from .gf2 import Gf2Matrix, Gf2Vector

Simplex = tuple
MAX_GROUP_ORDER = 24


def simplex(vertices: Iterable[Hashable]) -> Simplex:
    return tuple(sorted(set(vertices)))


def faces(s: Simplex) -> list[Simplex]:
    """Codimension-one faces of ``s``."""
    return [s[:i] + s[i + 1:] for i in range(len(s))] if len(s) > 1 else []


def all_faces(s: Simplex) -> Iterable[Simplex]:
    for r in range(1, len(s) + 1):
        yield from itertools.combinations(s, r)


@dataclass(frozen=True, eq=False)
class Complex:
    """A finite abstract simplicial complex.

    ``Complex(simplices)`` stores exactly what it is given; call
    :meth:`validate` to check face closure.  :meth:`from_facets` closes a
    list of simplices under faces.
    """

    simplices: frozenset

    def __init__(self, simplices: Iterable[Iterable[Hashable]]):
        object.__setattr__(self, "simplices", frozenset(simplex(s) for s in simplices))
        if () in self.simplices:
            raise StructuralError("the empty simplex is not allowed")

    @classmethod
    def from_facets(cls, facets: Iterable[Iterable[Hashable]]) -> Complex:
        out = set()
        for f in facets:
            out.update(all_faces(simplex(f)))
        return cls(out)

    def __eq__(self, other):
        return isinstance(other, Complex) and self.simplices == other.simplices

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self):
        return hash(self.simplices)

    def __repr__(self):
        return f"Complex(dim={self.dim}, counts={self.counts})"

    @cached_property
    def dim(self) -> int:
        return max((len(s) for s in self.simplices), default=0) - 1

    @cached_property
    def _by_dim(self) -> dict[int, tuple[Simplex, ...]]:
        groups = defaultdict(list)
        for s in self.simplices:
            groups[len(s) - 1].append(s)
        return {k: tuple(sorted(v)) for k, v in groups.items()}

    def cells(self, k: int) -> tuple[Simplex, ...]:
        """The k-simplices in sorted order; this order indexes chain vectors."""
        return self._by_dim.get(k, ())

    @cached_property
    def _index(self) -> dict[Simplex, int]:
        return {s: i for k in self._by_dim for i, s in enumerate(self._by_dim[k])}

    def index(self, s: Simplex) -> int:
        return self._index[s]

    def n_cells(self, k: int) -> int:
        return len(self.cells(k))

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(self.n_cells(k) for k in range(self.dim + 1))

    @cached_property
    def vertices(self) -> tuple:
        return tuple(s[0] for s in self.cells(0))

    def __contains__(self, s) -> bool:
        return simplex(s) in self.simplices

    def validate(self) -> dict:
        """Check face closure; return dimension and per-dimension counts."""
        for s in sorted(self.simplices, key=lambda t: (len(t), t)):
            for f in faces(s):
                if f not in self.simplices:
                    raise StructuralError(f"simplex {s} is missing its face {f}")
        return {"valid": True, "dim": self.dim, "counts": self.counts}

    @cached_property
    def _cofaces(self) -> dict[Simplex, tuple[Simplex, ...]]:
        out = defaultdict(list)
        for s in self.simplices:
            for f in faces(s):
                out[f].append(s)
        return {f: tuple(sorted(v)) for f, v in out.items()}

    def cofaces(self, s: Simplex) -> tuple[Simplex, ...]:
        return self._cofaces.get(s, ())

    def star(self, s: Simplex) -> list[Simplex]:
        """All simplices containing ``s``."""
        target = set(s)
        return [t for t in self.simplices if target <= set(t)]

    def boundary_matrix(self, k: int) -> Gf2Matrix:
        """Matrix of the boundary map C_k -> C_{k-1}."""
        return self._boundary_matrices(k)

    def _boundary_matrices(self, k):
        cache = self.__dict__.setdefault("_bd_cache", {})
        if k not in cache:
            rows = self.n_cells(k - 1) if k >= 1 else 0
            columns = []
            for s in self.cells(k):
                col = 0
                for f in faces(s):
                    col ^= 1 << self.index(f)
                columns.append(col)
            cache[k] = Gf2Matrix.from_columns(rows, columns)
        return cache[k]

    def chain(self, k: int, support: Iterable) -> Chain:
        return Chain(self, k, frozenset(simplex(s) for s in support))

    def zero_chain(self, k: int) -> Chain:
        return Chain(self, k, frozenset())

    def fundamental_chain(self, k: int) -> Chain:
        return Chain(self, k, frozenset(self.cells(k)))

    def whole(self) -> ClosedSubcomplex:
        return ClosedSubcomplex(self, self.simplices)

    def empty(self) -> ClosedSubcomplex:
        return ClosedSubcomplex(self, frozenset())

    def subcomplex(self, simplices: Iterable) -> ClosedSubcomplex:
        """Closed subcomplex generated by ``simplices`` (closure under faces)."""
        cells = set()
        for s in simplices:
            s = simplex(s)
            if s not in self.simplices:
                raise InputError(f"{s} is not a simplex of the complex")
            cells.update(all_faces(s))
        return ClosedSubcomplex(self, frozenset(cells))


@dataclass(frozen=True)
class ClosedSubcomplex:
    parent: Complex
    cells: frozenset

    def __post_init__(self):
        object.__setattr__(self, "cells", frozenset(simplex(s) for s in self.cells))
        for s in self.cells:
            if s not in self.parent.simplices:
                raise StructuralError(f"{s} is not a simplex of the parent complex")
            for f in faces(s):
                if f not in self.cells:
                    raise StructuralError(f"subcomplex contains {s} but not its face {f}")

    def as_complex(self) -> Complex:
        return Complex(self.cells)

    def cells_of_dim(self, k: int) -> list[Simplex]:
        return sorted(s for s in self.cells if len(s) == k + 1)

    def __contains__(self, s) -> bool:
        return simplex(s) in self.cells

    def __and__(self, other: ClosedSubcomplex) -> ClosedSubcomplex:
        return ClosedSubcomplex(self.parent, self.cells & other.cells)

    def __or__(self, other: ClosedSubcomplex) -> ClosedSubcomplex:
        return ClosedSubcomplex(self.parent, self.cells | other.cells)

    @property
    def dim(self) -> int:
        return max((len(s) for s in self.cells), default=0) - 1


def closure(cells: Iterable[Simplex]) -> frozenset:
    out = set()
    for s in cells:
        out.update(all_faces(s))
    return frozenset(out)


@dataclass(frozen=True)
class Chain:
    """A class in C_k over GF(2), stored as its set of k-simplices."""

    parent: Complex
    k: int
    support: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        for s in self.support:
            if len(s) != self.k + 1:
                raise InputError(f"{s} does not have dimension {self.k}")
            if s not in self.parent.simplices:
                raise InputError(f"{s} is not a simplex of the complex")

    def _same(self, other: Chain):
        if other.parent != self.parent or other.k != self.k:
            raise InputError("chains live in different groups")

    def __add__(self, other: Chain) -> Chain:
        self._same(other)
        return Chain(self.parent, self.k, self.support ^ other.support)

    __sub__ = __add__

    def __bool__(self):
        return bool(self.support)

    def __len__(self):
        return len(self.support)

    def to_vector(self) -> Gf2Vector:
        idx = self.parent.index
        return Gf2Vector.from_indices(self.parent.n_cells(self.k), (idx(s) for s in self.support))

    @property
    def bits(self) -> int:
        return self.to_vector().bits

    @classmethod
    def from_bits(cls, parent: Complex, k: int, bits: int) -> Chain:
        cells = parent.cells(k)
        return cls(parent, k, frozenset(cells[i] for i in gf2.iter_bits(bits)))

    def sorted_support(self) -> list[Simplex]:
        return sorted(self.support)

    def __repr__(self):
        return f"Chain(k={self.k}, {self.sorted_support()})"


def chain_class(a: ClosedSubcomplex | Iterable[Simplex], k: int, parent: Complex | None = None) -> Chain:
    """The class ``[A]`` in C_k of a closed representative ``A``."""
    if isinstance(a, ClosedSubcomplex):
        parent, cells = a.parent, a.cells
    else:
        cells = closure(simplex(s) for s in a)
    return Chain(parent, k, frozenset(s for s in cells if len(s) == k + 1))


def boundary(c: Chain) -> Chain:
    """Odd-incidence boundary; the boundary of a 0-chain is the empty (-1)-chain."""
    if c.k == 0:
        return Chain(c.parent, -1, frozenset())
    counts = Counter(f for s in c.support for f in faces(s))
    return Chain(c.parent, c.k - 1, frozenset(f for f, n in counts.items() if n % 2))


def betti_numbers(x: Complex, sub: Complex | ClosedSubcomplex | None = None) -> tuple[int, ...]:
    """GF(2) Betti numbers of ``x`` (relative to a closed subcomplex when given)."""
    drop = set()
    if sub is not None:
        drop = sub.cells if isinstance(sub, ClosedSubcomplex) else sub.simplices
    out = []
    ranks = {}
    keep = {}
    for k in range(x.dim + 2):
        keep[k] = [i for i, s in enumerate(x.cells(k)) if s not in drop]
    for k in range(x.dim + 2):
        if k == 0:
            ranks[k] = 0
            continue
        m = x.boundary_matrix(k)
        rowmask = 0
        for i in keep[k - 1]:
            rowmask |= 1 << i
        cols = [m.columns[j] & rowmask for j in keep[k]]
        ranks[k] = len(keep[k]) - len(gf2.kernel_columns(cols))
    for k in range(x.dim + 1):
        out.append(len(keep[k]) - ranks[k] - ranks[k + 1])
    return tuple(out)


# ----------------------------------------------------------------- actions

@dataclass(frozen=True, eq=False)
class GroupAction:
    """A finite group acting on a complex by vertex permutations.

    ``elements`` lists group element names, the first being the identity;
    ``table[(g, h)]`` is the product ``g h`` (apply ``h`` first); ``maps[g]``
    is the vertex permutation of ``g``.
    """

    parent: Complex
    elements: tuple
    table: Mapping
    maps: Mapping

    @classmethod
    def involution(cls, parent: Complex, mapping: Mapping) -> GroupAction:
        """The Z/2 action ``{e, s}`` where ``s`` permutes vertices by ``mapping``.

        Vertices absent from ``mapping`` are fixed.
        """
        full = {v: mapping.get(v, v) for v in parent.vertices}
        ident = {v: v for v in parent.vertices}
        table = {("e", "e"): "e", ("e", "s"): "s", ("s", "e"): "s", ("s", "s"): "e"}
        return cls(parent, ("e", "s"), table, {"e": ident, "s": full})

    @classmethod
    def trivial(cls, parent: Complex) -> GroupAction:
        return cls.involution(parent, {})

    @classmethod
    def cyclic(cls, parent: Complex, generator: Mapping, order: int) -> GroupAction:
        names = tuple(f"g{i}" for i in range(order))
        perms = []
        cur = {v: v for v in parent.vertices}
        gen = {v: generator.get(v, v) for v in parent.vertices}
        for _ in range(order):
            perms.append(cur)
            cur = {v: gen[cur[v]] for v in parent.vertices}
        table = {(names[i], names[j]): names[(i + j) % order] for i in range(order) for j in range(order)}
        return cls(parent, names, table, dict(zip(names, perms)))

    @property
    def identity(self):
        return self.elements[0]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def is_z2(self) -> bool:
        return self.order == 2

    @property
    def sigma(self):
        """The non-identity element of a Z/2 action."""
        if not self.is_z2:
            raise PreconditionError("action is not by the two-element group")
        return self.elements[1]

    def is_trivial(self) -> bool:
        return all(v == w for g in self.elements for v, w in self.maps[g].items())

    def image(self, g, s: Simplex) -> Simplex:
        m = self.maps[g]
        return simplex(m[v] for v in s)

    def validate(self) -> dict:
        x = self.parent
        if self.order > MAX_GROUP_ORDER:
            raise StructuralError(f"group order {self.order} exceeds {MAX_GROUP_ORDER}")
        elems = set(self.elements)
        if len(elems) != self.order:
            raise StructuralError("duplicate group element names")
        verts = set(x.vertices)
        for g in self.elements:
            m = self.maps.get(g)
            if m is None or set(m) != verts or set(m.values()) != verts:
                raise StructuralError(f"element {g} does not permute the vertices")
            for s in x.simplices:
                if self.image(g, s) not in x.simplices:
                    raise StructuralError(f"element {g} sends simplex {s} outside the complex")
        e = self.identity
        if any(v != w for v, w in self.maps[e].items()):
            raise StructuralError("the identity element acts nontrivially")
        for g in self.elements:
            for h in self.elements:
                gh = self.table.get((g, h))
                if gh not in elems:
                    raise StructuralError(f"product {g}*{h} is not a group element")
                mg, mh, mgh = self.maps[g], self.maps[h], self.maps[gh]
                if any(mg[mh[v]] != mgh[v] for v in verts):
                    raise StructuralError(f"composition table violated at {g}*{h}")
        return {"valid": True, "order": self.order}

    def chain_matrix(self, g, k: int) -> Gf2Matrix:
        x = self.parent
        cols = [1 << x.index(self.image(g, s)) for s in x.cells(k)]
        return Gf2Matrix.from_columns(x.n_cells(k), cols)

    def sigma_plus_one(self, k: int) -> Gf2Matrix:
        """Matrix of ``1 + σ`` on C_k."""
        return self.chain_matrix(self.sigma, k) + Gf2Matrix.identity(self.parent.n_cells(k))

    def is_invariant(self, cells: Iterable[Simplex]) -> bool:
        cells = set(cells)
        return all(self.image(g, s) in cells for g in self.elements for s in cells)

    def orbit(self, s: Simplex) -> frozenset:
        return frozenset(self.image(g, s) for g in self.elements)

    def is_regular(self) -> bool:
        """True when every setwise-invariant simplex is fixed pointwise."""
        for g in self.elements:
            m = self.maps[g]
            for s in self.parent.simplices:
                if self.image(g, s) == s and any(m[v] != v for v in s):
                    return False
        return True


def act(action: GroupAction, g, c: Chain) -> Chain:
    """``g.c``: the image of the support under ``g``."""
    if c.parent != action.parent:
        raise InputError("chain does not live on the acted-upon complex")
    if g not in action.maps:
        raise InputError(f"{g} is not an element of the group")
    return Chain(c.parent, c.k, frozenset(action.image(g, s) for s in c.support))


def fixed_subcomplex(action: GroupAction) -> ClosedSubcomplex:
    """Simplices every vertex of which is fixed by every group element."""
    fixed_v = {v for v in action.parent.vertices if all(action.maps[g][v] == v for g in action.elements)}
    return ClosedSubcomplex(action.parent, frozenset(s for s in action.parent.simplices if set(s) <= fixed_v))


# -------------------------------------------------------------------- maps

@dataclass(frozen=True, eq=False)
class CellularMap:
    source: Complex
    target: Complex
    vertex_map: Mapping

    def __post_init__(self):
        object.__setattr__(self, "vertex_map", dict(self.vertex_map))

    def image(self, s: Simplex) -> Simplex:
        return simplex(self.vertex_map[v] for v in s)

    def validate(self) -> dict:
        missing = set(self.source.vertices) - set(self.vertex_map)
        if missing:
            raise StructuralError(f"vertices {sorted(missing)} have no image")
        for s in self.source.simplices:
            if self.image(s) not in self.target.simplices:
                raise StructuralError(f"image of {s} is not a simplex of the target")
        return {"valid": True}

    def compose(self, first: CellularMap) -> CellularMap:
        """``self ∘ first``."""
        if first.target != self.source:
            raise InputError("maps are not composable")
        return CellularMap(first.source, self.target, {v: self.vertex_map[w] for v, w in first.vertex_map.items()})

    @classmethod
    def identity(cls, x: Complex) -> CellularMap:
        return cls(x, x, {v: v for v in x.vertices})

    def chain_matrix(self, k: int) -> Gf2Matrix:
        cols = []
        for s in self.source.cells(k):
            t = self.image(s)
            cols.append(1 << self.target.index(t) if len(t) == len(s) else 0)
        return Gf2Matrix.from_columns(self.target.n_cells(k), cols)

    def is_equivariant(self, a: GroupAction, b: GroupAction, element_map: Mapping | None = None) -> bool:
        element_map = element_map or {g: g for g in a.elements}
        return all(
            b.maps[element_map[g]][self.vertex_map[v]] == self.vertex_map[a.maps[g][v]]
            for g in a.elements for v in self.source.vertices
        )


def pushforward(f: CellularMap, c: Chain) -> Chain:
    """Nondegenerate images counted mod 2."""
    if c.parent != f.source:
        raise InputError("chain does not live on the map's source")
    counts = Counter()
    for s in c.support:
        t = f.image(s)
        if len(t) == len(s):
            counts[t] += 1
    return Chain(f.target, c.k, frozenset(t for t, n in counts.items() if n % 2))


# -------------------------------------------------- restriction and closure

@dataclass(frozen=True)
class OpenChain:
    """A chain on the open complement ``X ∖ Y`` of a closed subcomplex."""

    removed: ClosedSubcomplex
    k: int
    support: frozenset

    def __post_init__(self):
        bad = [s for s in self.support if s in self.removed.cells]
        if bad:
            raise InputError(f"{bad[0]} lies in the removed subcomplex")

    @property
    def parent(self) -> Complex:
        return self.removed.parent

    def __add__(self, other: OpenChain) -> OpenChain:
        return OpenChain(self.removed, self.k, self.support ^ other.support)


def restrict_to_open(c: Chain, y: ClosedSubcomplex) -> OpenChain:
    if y.parent != c.parent:
        raise InputError("subcomplex and chain live on different complexes")
    return OpenChain(y, c.k, frozenset(s for s in c.support if s not in y.cells))


def restrict_to_closed(c: Chain, y: ClosedSubcomplex) -> Chain:
    if y.parent != c.parent:
        raise InputError("subcomplex and chain live on different complexes")
    return Chain(c.parent, c.k, c.support & y.cells)


def open_boundary(c: OpenChain) -> OpenChain:
    """Boundary in the Borel-Moore complex of ``X ∖ Y``."""
    b = boundary(Chain(c.parent, c.k, c.support))
    return OpenChain(c.removed, c.k - 1, frozenset(s for s in b.support if s not in c.removed.cells))


def closure_chain(c: OpenChain) -> Chain:
    """Closure in X of a chain on an open complement (same k-cells)."""
    return Chain(c.parent, c.k, c.support)


def act_open(action: GroupAction, g, c: OpenChain) -> OpenChain:
    if not action.is_invariant(c.removed.cells):
        raise PreconditionError("removed subcomplex is not invariant")
    return OpenChain(c.removed, c.k, frozenset(action.image(g, s) for s in c.support))


def class_intersect(c: Chain, a3: ClosedSubcomplex) -> Chain:
    """``[A ∩ A3]`` for any closed representative ``A`` of ``c``."""
    if a3.parent != c.parent:
        raise InputError("subcomplex and chain live on different complexes")
    return Chain(c.parent, c.k, c.support & a3.cells)


# --------------------------------------------------------------- pullback

@dataclass(frozen=True)
class PullbackSquare:
    """``π: X̃ → X`` with closed ``Y ⊆ X``; ``Ỹ = π⁻¹(Y)``."""

    pi: CellularMap
    y: ClosedSubcomplex

    @cached_property
    def y_tilde(self) -> ClosedSubcomplex:
        return ClosedSubcomplex(
            self.pi.source,
            frozenset(s for s in self.pi.source.simplices if self.pi.image(s) in self.y.cells),
        )

    @cached_property
    def correspondence(self) -> dict[Simplex, Simplex]:
        """Bijection from simplices of ``X ∖ Y`` to simplices of ``X̃ ∖ Ỹ``."""
        src, tgt = self.pi.source, self.pi.target
        out = {}
        for s in src.simplices:
            if s in self.y_tilde.cells:
                continue
            t = self.pi.image(s)
            if len(t) != len(s):
                raise PreconditionError(f"π collapses {s} outside Ỹ")
            if t in self.y.cells:
                raise PreconditionError(f"π sends {s} into Y although it lies outside Ỹ")
            if t in out:
                raise PreconditionError(f"π is not injective outside Ỹ: {out[t]} and {s} both map to {t}")
            out[t] = s
        missing = [t for t in tgt.simplices if t not in self.y.cells and t not in out]
        if missing:
            raise PreconditionError(f"π misses {sorted(missing)[0]} outside Y")
        return out

    def validate(self):
        self.pi.validate()
        if self.y.parent != self.pi.target:
            raise InputError("Y must be a subcomplex of the target of π")
        self.correspondence
        return {"valid": True}


def pullback(square: PullbackSquare, c: Chain) -> Chain:
    """Inverse image of the part of ``c`` outside Y."""
    if c.parent != square.pi.target:
        raise InputError("chain does not live on the base of the square")
    corr = square.correspondence
    return Chain(square.pi.source, c.k, frozenset(corr[s] for s in c.support if s not in square.y.cells))


# ------------------------------------------------------------ subdivision

@dataclass(frozen=True)
class Subdivision:
    """Barycentric subdivision with transport of chains, actions and maps.

    Vertices of the subdivision are the simplices of the original complex;
    a simplex of the subdivision is a flag ``s0 < s1 < ... < sk``.
    """

    original: Complex
    complex: Complex

    def carrier(self, flag: Simplex) -> Simplex:
        return max(flag, key=len)

    def chain(self, c: Chain) -> Chain:
        """Replace each k-simplex by the (k+1)! flags ending at it."""
        if c.parent != self.original:
            raise InputError("chain does not live on the subdivided complex")
        out = set()
        for s in c.support:
            out.update(_flags_ending_at(s))
        return Chain(self.complex, c.k, frozenset(out))

    def action(self, a: GroupAction) -> GroupAction:
        maps = {g: {s: a.image(g, s) for s in self.original.simplices} for g in a.elements}
        return GroupAction(self.complex, a.elements, a.table, maps)

    def subcomplex(self, y: ClosedSubcomplex) -> ClosedSubcomplex:
        return ClosedSubcomplex(self.complex, frozenset(f for f in self.complex.simplices if all(v in y.cells for v in f)))


def _flags_ending_at(s: Simplex) -> list[Simplex]:
    return [simplex(simplex(perm[: i + 1]) for i in range(len(s))) for perm in itertools.permutations(s)]


def barycentric_subdivide(x: Complex) -> Subdivision:
    flags = set()
    for s in x.simplices:
        for f in _flags_ending_at(s):
            flags.update(all_faces(f))
    return Subdivision(x, Complex(flags))


# --------------------------------------------------------------- quotient

@dataclass(frozen=True)
class Quotient:
    """Orbit complex of a free Z/2 action, possibly after subdivision."""

    complex: Complex
    projection: CellularMap
    action: GroupAction
    subdivisions: int


def _orbit_quotient(action: GroupAction):
    x = action.parent
    rep = {}
    for v in x.vertices:
        rep[v] = min(action.maps[g][v] for g in action.elements)
    q = CellularMap(x, Complex(simplex(rep[v] for v in s) for s in x.simplices), rep)
    pre = defaultdict(set)
    for s in x.simplices:
        t = q.image(s)
        if len(t) != len(s):
            return None
        pre[t].add(s)
    for t, ss in pre.items():
        if len(ss) != action.order:
            return None
        if len({action.orbit(s) for s in ss}) != 1:
            return None
    return q


def quotient_complex(action: GroupAction, max_subdivisions: int = 2) -> Quotient:
    """Orbit complex of a free action; subdivides when orbits are not simplicial."""
    fixed = fixed_subcomplex(action)
    if fixed.cells:
        raise PreconditionError(f"action fixes {sorted(fixed.cells)[0]}; quotient requires a free action")
    for g in action.elements[1:]:
        if any(action.maps[g][v] == v for v in action.parent.vertices):
            raise PreconditionError(f"element {g} fixes a vertex; action is not free")
    current = action
    for n in range(max_subdivisions + 1):
        if current.is_regular():
            q = _orbit_quotient(current)
            if q is not None:
                return Quotient(q.target, q, current, n)
        if n < max_subdivisions:
            current = barycentric_subdivide(current.parent).action(current)
    raise PreconditionError("orbit space is not simplicial after the allowed subdivisions")


def orbit_pushforward(action: GroupAction, c: Chain) -> frozenset:
    """Push a chain to the orbit set: each orbit keeps its cell count mod 2."""
    counts = Counter(action.orbit(s) for s in c.support)
    return frozenset(o for o, n in counts.items() if n % 2)
