"""Filtered chain complexes over GF(2) and their spectral sequences.

Homological indexing throughout: ``F_p C_n`` is increasing in ``p`` and the
differential ``d^r`` on page ``r`` has bidegree ``(-r, r - 1)``.  Pages are
computed from the subspaces

    Z^r_p = F_p ∩ ∂^{-1}(F_{p-r}),
    E^r_p = Z^r_p / (Z^{r-1}_{p-1} + ∂ Z^{r-1}_{p+r-1}),

which for bounded filtrations reach ``E^∞`` after ``hi - lo + 1`` pages.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Mapping

from . import gf2
from .cells import CellularMap, ClosedSubcomplex, Complex, GroupAction
from .errors import InputError, PreconditionError, StructuralError
from .gf2 import Gf2Matrix, QuotientBasis, Subspace

CANONICAL_SHIFT = 0
CONE_SHIFT = 0


@dataclass(frozen=True, eq=False)
class ChainComplex:
    """Bounded complex: ``dims[n] = dim C_n`` and ``d[n]: C_n -> C_{n-1}``.

    ``actions`` optionally maps a group element to its matrices per degree.
    """

    dims: Mapping[int, int]
    d: Mapping[int, Gf2Matrix] = field(default_factory=dict)
    actions: Mapping | None = None

    @classmethod
    def zero(cls) -> ChainComplex:
        return cls({0: 0}, {})

    @classmethod
    def from_complex(cls, x: Complex, sub: Complex | ClosedSubcomplex | None = None,
                     action: GroupAction | None = None) -> ChainComplex:
        """Simplicial chains of ``x``, relative to ``sub`` when given."""
        basis = cell_basis(x, sub)
        dims = {k: len(basis[k]) for k in basis}
        d = {}
        for k in basis:
            if k == 0:
                continue
            pos = {s: i for i, s in enumerate(basis[k - 1])}
            cols = []
            for s in basis[k]:
                col = 0
                for f in _faces(s):
                    if f in pos:
                        col ^= 1 << pos[f]
                cols.append(col)
            d[k] = Gf2Matrix.from_columns(dims[k - 1], cols)
        actions = None
        if action is not None:
            actions = {}
            for g in action.elements:
                per = {}
                for k in basis:
                    pos = {s: i for i, s in enumerate(basis[k])}
                    per[k] = Gf2Matrix.from_columns(dims[k], [1 << pos[action.image(g, s)] for s in basis[k]])
                actions[g] = per
        return cls(dims, d, actions)

    @property
    def degrees(self) -> list[int]:
        return sorted(self.dims)

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def diff(self, n: int) -> Gf2Matrix:
        m = self.d.get(n)
        if m is None:
            return Gf2Matrix.zeros(self.dim(n - 1), self.dim(n))
        return m

    def validate(self) -> dict:
        for n in self.degrees:
            m = self.diff(n)
            if (m.rows, m.cols) != (self.dim(n - 1), self.dim(n)):
                raise StructuralError(f"differential in degree {n} has the wrong shape")
            if not (self.diff(n - 1) @ m).is_zero():
                raise StructuralError(f"∂∂ ≠ 0 in degree {n}")
        if self.actions:
            for g, per in self.actions.items():
                for n in self.degrees:
                    a = per.get(n, Gf2Matrix.identity(self.dim(n)))
                    b = per.get(n - 1, Gf2Matrix.identity(self.dim(n - 1)))
                    if self.diff(n) @ a != b @ self.diff(n):
                        raise StructuralError(f"action of {g} does not commute with ∂ in degree {n}")
        return {"valid": True}

    def cycles(self, n: int) -> Subspace:
        return gf2.kernel_basis(self.diff(n))

    def boundaries(self, n: int) -> Subspace:
        return Subspace.full(self.dim(n + 1)).image(self.diff(n + 1))

    def betti(self, n: int) -> int:
        return self.cycles(n).dim - gf2.rank(self.diff(n + 1))

    def homology(self) -> dict[int, int]:
        return {n: self.betti(n) for n in self.degrees}

    def total_dim(self) -> int:
        return sum(self.dims.values())


def _faces(s):
    return [s[:i] + s[i + 1:] for i in range(len(s))] if len(s) > 1 else []


def cell_basis(x: Complex, sub=None) -> dict[int, list]:
    drop = set()
    if sub is not None:
        drop = sub.cells if isinstance(sub, ClosedSubcomplex) else sub.simplices
    return {k: [s for s in x.cells(k) if s not in drop] for k in range(max(x.dim, 0) + 1)}


def chain_map_matrices(f: CellularMap, src_sub=None, tgt_sub=None) -> dict[int, Gf2Matrix]:
    """Matrices of ``f_*`` between (relative) simplicial chain complexes."""
    src = cell_basis(f.source, src_sub)
    tgt = cell_basis(f.target, tgt_sub)
    tgt_drop = set()
    if tgt_sub is not None:
        tgt_drop = tgt_sub.cells if isinstance(tgt_sub, ClosedSubcomplex) else tgt_sub.simplices
    out = {}
    for k in src:
        pos = {s: i for i, s in enumerate(tgt.get(k, []))}
        cols = []
        for s in src[k]:
            t = f.image(s)
            if len(t) != len(s) or t in tgt_drop:
                cols.append(0)
            else:
                cols.append(1 << pos[t])
        out[k] = Gf2Matrix.from_columns(len(tgt.get(k, [])), cols)
    return out


@dataclass(frozen=True, eq=False)
class FilteredComplex:
    """``levels[n][p] = F_p C_n`` for ``lo <= p < hi``; zero below, everything above."""

    complex: ChainComplex
    levels: Mapping[int, Mapping[int, Subspace]]
    lo: int
    hi: int

    @classmethod
    def from_function(cls, cc: ChainComplex, lo: int, hi: int,
                      level: Callable[[int, int], Subspace]) -> FilteredComplex:
        levels = {n: {p: level(p, n) for p in range(lo, hi)} for n in cc.degrees}
        return cls(cc, levels, lo, hi)

    @classmethod
    def trivial(cls, cc: ChainComplex, jump: int = 0) -> FilteredComplex:
        """``F_p = 0`` for ``p < jump`` and everything from ``jump`` on."""
        return cls(cc, {n: {} for n in cc.degrees}, jump, jump)

    def F(self, p: int, n: int) -> Subspace:
        dim = self.complex.dim(n)
        if p < self.lo:
            return Subspace.zero(dim)
        if p >= self.hi:
            return Subspace.full(dim)
        level = self.levels.get(n, {}).get(p)
        return Subspace.full(dim) if level is None else level

    def validate(self) -> dict:
        cc = self.complex
        cc.validate()
        for n in cc.degrees:
            for p in range(self.lo - 1, self.hi + 1):
                lower, upper = self.F(p, n), self.F(p + 1, n)
                if lower.ambient != cc.dim(n):
                    raise StructuralError(f"F_{p} C_{n} lives in the wrong space")
                if not lower <= upper:
                    raise StructuralError(f"F_{p} C_{n} is not contained in F_{p + 1} C_{n}")
                if not lower.image(cc.diff(n)) <= self.F(p, n - 1):
                    raise StructuralError(f"∂ does not map F_{p} C_{n} into F_{p} C_{n - 1}")
                if cc.actions:
                    for g, per in cc.actions.items():
                        if n in per and not lower.image(per[n]) <= lower:
                            raise StructuralError(f"F_{p} C_{n} is not stable under {g}")
        return {"valid": True, "lo": self.lo, "hi": self.hi}

    @property
    def length(self) -> int:
        return self.hi - self.lo + 1

    def z(self, r: int, p: int, n: int) -> Subspace:
        """``Z^r_p`` in total degree ``n``."""
        return self._z(r, p, n)

    def _z(self, r, p, n):
        cache = self.__dict__.setdefault("_zcache", {})
        key = (r, p, n)
        if key not in cache:
            fp = self.F(p, n)
            if r <= 0:
                cache[key] = fp
            else:
                target = self.F(p - r, n - 1)
                cache[key] = fp & gf2.preimage(self.complex.diff(n), target)
        return cache[key]

    def page_space(self, r: int, p: int, n: int) -> QuotientBasis:
        """``E^r_{p, n-p}`` as a quotient of ``Z^r_p`` by the page denominator."""
        cache = self.__dict__.setdefault("_pcache", {})
        key = (r, p, n)
        if key not in cache:
            num = self.z(r, p, n)
            below = self.z(r - 1, p - 1, n)
            above = self.z(r - 1, p + r - 1, n + 1).image(self.complex.diff(n + 1))
            cache[key] = QuotientBasis(num, below + above)
        return cache[key]


def canonical_filtration(cc: ChainComplex, shift: int = CANONICAL_SHIFT) -> FilteredComplex:
    """Truncation filtration: ``F_p C_n`` is 0 for ``n < shift - p``, the cycles
    for ``n = shift - p`` and everything for ``n > shift - p``."""
    degrees = cc.degrees
    lo, hi = shift - max(degrees), shift - min(degrees) + 1

    def level(p, n):
        jump = shift - p
        if n < jump:
            return Subspace.zero(cc.dim(n))
        if n == jump:
            return cc.cycles(n)
        return Subspace.full(cc.dim(n))

    return FilteredComplex.from_function(cc, lo, hi, level)


@dataclass
class Page:
    r: int
    dims: dict[tuple[int, int], int]
    differentials: dict[tuple[int, int], Gf2Matrix]

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    def nonzero(self) -> dict[tuple[int, int], int]:
        return {k: v for k, v in sorted(self.dims.items()) if v}


@dataclass
class SpectralSequence:
    pages: list[Page]
    limit: dict[tuple[int, int], int]
    stabilized_at: int
    homology_filtration: dict[int, dict[int, int]]

    def page(self, r: int) -> Page:
        return self.pages[min(r, len(self.pages) - 1)]

    def limit_total(self, n: int) -> int:
        return sum(v for (p, q), v in self.limit.items() if p + q == n)


def spectral_sequence(fc: FilteredComplex) -> SpectralSequence:
    """All pages up to ``E^∞`` plus the induced filtration on homology."""
    cc = fc.complex
    degrees = cc.degrees
    ps = range(fc.lo, fc.hi + 1)
    last = fc.hi - fc.lo + 1
    pages = []
    for r in range(last + 1):
        dims, diffs = {}, {}
        for n in degrees:
            for p in ps:
                src = fc.page_space(r, p, n)
                dims[(p, n - p)] = src.dim
                if n - 1 in cc.dims and fc.lo <= p - r <= fc.hi:
                    tgt = fc.page_space(r, p - r, n - 1)
                    diffs[(p, n - p)] = gf2.matrix_between(src, tgt, cc.diff(n))
        pages.append(Page(r, dims, diffs))
    limit = dict(pages[-1].dims)
    stable = last
    while stable > 0 and pages[stable - 1].dims == limit:
        stable -= 1
    graded = {}
    for n in degrees:
        z, b = cc.cycles(n), cc.boundaries(n)
        prev = 0
        graded[n] = {}
        for p in ps:
            cur = ((fc.F(p, n) & z) + b).dim - b.dim
            graded[n][p] = cur - prev
            prev = cur
    return SpectralSequence(pages, limit, stable, graded)


# ------------------------------------------------------------ filtered maps

@dataclass(frozen=True, eq=False)
class FilteredMap:
    """Degree-wise matrices ``maps[n]: C_n(source) -> C_n(target)``."""

    source: FilteredComplex
    target: FilteredComplex
    maps: Mapping[int, Gf2Matrix]
    element_map: Mapping | None = None

    def matrix(self, n: int) -> Gf2Matrix:
        m = self.maps.get(n)
        if m is None:
            return Gf2Matrix.zeros(self.target.complex.dim(n), self.source.complex.dim(n))
        return m

    def validate(self) -> dict:
        a, b = self.source.complex, self.target.complex
        degrees = sorted(set(a.degrees) | set(b.degrees))
        for n in degrees:
            m = self.matrix(n)
            if (m.rows, m.cols) != (b.dim(n), a.dim(n)):
                raise InputError(f"map in degree {n} has the wrong shape")
            if b.diff(n) @ m != self.matrix(n - 1) @ a.diff(n):
                raise PreconditionError(f"map does not commute with ∂ in degree {n}")
            for p in range(min(self.source.lo, self.target.lo) - 1, max(self.source.hi, self.target.hi) + 1):
                if not self.source.F(p, n).image(m) <= self.target.F(p, n):
                    raise PreconditionError(f"map does not send F_{p} C_{n} into F_{p} C_{n}")
        return {"valid": True, "equivariant": self.is_equivariant()}

    def is_equivariant(self) -> bool | None:
        sa, ta = self.source.complex.actions, self.target.complex.actions
        if not sa or not ta:
            return None
        emap = self.element_map or {g: g for g in sa}
        for g in sa:
            h = emap.get(g)
            if h not in ta:
                return False
            for n in self.source.complex.degrees:
                ga = sa[g].get(n, Gf2Matrix.identity(self.source.complex.dim(n)))
                hb = ta[h].get(n, Gf2Matrix.identity(self.target.complex.dim(n)))
                if self.matrix(n) @ ga != hb @ self.matrix(n):
                    return False
        return True

    def compose(self, first: FilteredMap) -> FilteredMap:
        """``self ∘ first``."""
        degrees = set(first.maps) | set(self.maps)
        return FilteredMap(first.source, self.target, {n: self.matrix(n) @ first.matrix(n) for n in degrees})

    def page_map(self, r: int, p: int, n: int) -> Gf2Matrix:
        return gf2.matrix_between(self.source.page_space(r, p, n), self.target.page_space(r, p, n), self.matrix(n))


@dataclass
class QuasiIsoResult:
    ok: bool
    failures: list[tuple[int, int]]
    equivariant: bool | None = None

    def __bool__(self):
        return self.ok


def is_filtered_quasi_iso(f: FilteredMap) -> QuasiIsoResult:
    """True iff ``f`` induces isomorphisms on every ``E^1_{p,q}``."""
    f.validate()
    degrees = sorted(set(f.source.complex.degrees) | set(f.target.complex.degrees))
    lo = min(f.source.lo, f.target.lo)
    hi = max(f.source.hi, f.target.hi)
    failures = []
    for n in degrees:
        for p in range(lo, hi + 1):
            m = f.page_map(1, p, n)
            if not (m.rows == m.cols == gf2.rank(m)):
                failures.append((p, n - p))
    return QuasiIsoResult(not failures, failures, f.is_equivariant())


def is_acyclic(fc: FilteredComplex) -> bool:
    """True iff ``E^1`` vanishes in every bidegree."""
    for n in fc.complex.degrees:
        for p in range(fc.lo, fc.hi + 1):
            if fc.page_space(1, p, n).dim:
                return False
    return True


# ----------------------------------------------------------- cube diagrams

def _block_columns(parts: list[tuple[int, Gf2Matrix | None, int]], rows: int) -> list[int]:
    """Stack column blocks; each part is (column-count, matrix or None, row offset)."""
    cols = []
    for ncols, m, off in parts:
        for j in range(ncols):
            cols.append(0 if m is None else m.columns[j] << off)
    return cols


def cone(f: FilteredMap, shift: int = CONE_SHIFT) -> FilteredComplex:
    """Mapping cone ``B_n ⊕ A_{n-1}``, ``d(b, a) = (∂b + f a, ∂a)``.

    The filtration is ``F_p = F_p(B)_n ⊕ F_{p-shift}(A)_{n-1}``: with
    ``shift=1`` the source enters the cone one filtration step later.
    """
    A, B = f.source, f.target
    ca, cb = A.complex, B.complex
    degrees = sorted(set(cb.degrees) | {n + 1 for n in ca.degrees})
    dims = {n: cb.dim(n) + ca.dim(n - 1) for n in degrees}
    d = {}
    for n in degrees:
        rows = dims.get(n - 1, 0)
        bb = cb.dim(n - 1)
        fm, da = f.matrix(n - 1), ca.diff(n - 1)
        cols = list(cb.diff(n).columns)
        cols += [fm.columns[j] | (da.columns[j] << bb) for j in range(ca.dim(n - 1))]
        d[n] = Gf2Matrix.from_columns(rows, cols)
    actions = None
    if ca.actions and cb.actions:
        emap = f.element_map or {g: g for g in ca.actions}
        actions = {}
        for g in ca.actions:
            h = emap[g]
            per = {}
            for n in degrees:
                gb = cb.actions[h].get(n, Gf2Matrix.identity(cb.dim(n)))
                ga = ca.actions[g].get(n - 1, Gf2Matrix.identity(ca.dim(n - 1)))
                cols = list(gb.columns) + [c << cb.dim(n) for c in ga.columns]
                per[n] = Gf2Matrix.from_columns(dims[n], cols)
            actions[h] = per
    cc = ChainComplex(dims, d, actions)
    lo = min(B.lo, A.lo + shift)
    hi = max(B.hi, A.hi + shift)

    def level(p, n):
        vb = B.F(p, n).basis
        va = A.F(p - shift, n - 1).basis
        off = cb.dim(n)
        return Subspace.span(dims[n], list(vb) + [v << off for v in va])

    fc = FilteredComplex.from_function(cc, lo, hi, level)
    for n in ca.degrees:
        for p in range(lo - 1, hi + 1):
            if not A.F(p - shift, n).image(f.matrix(n)) <= B.F(p, n):
                raise PreconditionError(
                    f"cone shift {shift} is incompatible with the map: F_{p - shift} A_{n} is not sent into F_{p} B_{n}")
    return fc


@dataclass
class CubeDiagram:
    """An arrow ``A -> B`` (``shape='arrow'``) or a square.

    A square is given by its four edges ``top: Ỹ -> X̃``, ``left: Ỹ -> Y``,
    ``right: X̃ -> X`` and ``bottom: Y -> X``.
    """

    shape: str
    edges: dict[str, FilteredMap]

    @classmethod
    def arrow(cls, f: FilteredMap) -> CubeDiagram:
        return cls("arrow", {"arrow": f})

    @classmethod
    def square(cls, top, left, right, bottom) -> CubeDiagram:
        return cls("square", {"top": top, "left": left, "right": right, "bottom": bottom})

    def validate(self) -> dict:
        for e in self.edges.values():
            e.validate()
        if self.shape == "square":
            e = self.edges
            degrees = e["top"].source.complex.degrees
            for n in degrees:
                if e["right"].matrix(n) @ e["top"].matrix(n) != e["bottom"].matrix(n) @ e["left"].matrix(n):
                    raise PreconditionError(f"square does not commute in degree {n}")
        elif self.shape != "arrow":
            raise InputError(f"unknown diagram shape {self.shape!r}")
        return {"valid": True}


def simple_complex(diagram: CubeDiagram, shift: int = CONE_SHIFT) -> FilteredComplex:
    """Filtered simple complex: the cone of an arrow, or the cone of the
    induced map between the cones of the two rows of a square."""
    diagram.validate()
    if diagram.shape == "arrow":
        return cone(diagram.edges["arrow"], shift)
    e = diagram.edges
    upper = cone(e["top"], shift)
    lower = cone(e["bottom"], shift)
    maps = {}
    for n in sorted(set(upper.complex.degrees) | set(lower.complex.degrees)):
        right, left = e["right"].matrix(n), e["left"].matrix(n - 1)
        cols = list(right.columns) + [c << right.rows for c in left.columns]
        maps[n] = Gf2Matrix.from_columns(lower.complex.dim(n), cols)
    induced = FilteredMap(upper, lower, maps, e["top"].element_map)
    return cone(induced, shift)


def check_additivity(inclusion: FilteredMap, candidate: FilteredComplex,
                     comparison: FilteredMap | None, shift: int = CONE_SHIFT) -> QuasiIsoResult:
    """Is ``simple(Y -> X)`` filtered quasi-isomorphic to the candidate for ``X ∖ Y``?"""
    if comparison is None:
        raise InputError("additivity check needs a comparison map from the cone to the candidate")
    total = cone(inclusion, shift)
    for n in sorted(set(total.complex.degrees) | set(candidate.complex.degrees)):
        m = comparison.matrix(n)
        if (m.rows, m.cols) != (candidate.complex.dim(n), total.complex.dim(n)):
            raise InputError(f"comparison map has the wrong shape in degree {n}")
    return is_filtered_quasi_iso(FilteredMap(total, candidate, comparison.maps, comparison.element_map))
