"""Filtration data on complexes with an involution and the Smith sequence.

A filtration is given degree by degree: ``N_α C_k`` for ``-k-1 <= α <= 0``,
zero at the bottom and everything at the top.  From it we build

    T^{α+1}_k = {c ∈ N_{α+1} C_k : (1+σ)c ∈ N_α C_k}

and check exactness of

    0 -> N_α C(X^G) ⊕ (1+σ)T^{α+1} -> N_α C(X) -> (1+σ)N_α C(X) -> 0

one chain degree at a time.  Everything is a rank computation over GF(2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import gf2
from .cells import (Chain, CellularMap, Complex, GroupAction, Simplex,
                    fixed_subcomplex, quotient_complex, restrict_to_closed)
from .errors import (ExactnessError, InputError, PreconditionError,
                     UnsupportedGroupError, ValidationError)
from .gf2 import Gf2Matrix, Subspace


def _as_bits(x: Complex, k: int, gen) -> int:
    if isinstance(gen, Chain):
        if gen.k != k or gen.parent != x:
            raise InputError(f"generator {gen} is not a {k}-chain of the filtered complex")
        return gen.bits
    if isinstance(gen, int):
        return gen
    bits = 0
    for s in gen:
        s = tuple(sorted(s))
        if len(s) != k + 1 or s not in x.simplices:
            raise InputError(f"{s} is not a {k}-simplex of the complex")
        bits ^= 1 << x.index(s)
    return bits


@dataclass(frozen=True, eq=False)
class FiltrationData:
    """Levels ``N_α C_k`` of an increasing filtration on the chains of ``action.parent``.

    ``levels[k][α]`` holds the declared subspaces.  A level that is not
    declared repeats the closest declared level below it (zero if there is
    none); ``α >= 0`` is always the whole space.
    """

    action: GroupAction
    levels: Mapping[int, Mapping[int, Subspace]] = field(default_factory=dict)

    @property
    def complex(self) -> Complex:
        return self.action.parent

    @classmethod
    def from_generators(cls, action: GroupAction, gens: Mapping[tuple[int, int], Iterable]) -> FiltrationData:
        """``gens[(k, α)]`` lists generating k-chains (Chains, bitsets or simplex lists)."""
        x = action.parent
        levels: dict[int, dict[int, Subspace]] = {}
        for (k, alpha), vs in gens.items():
            levels.setdefault(k, {})[alpha] = Subspace.span(x.n_cells(k), [_as_bits(x, k, v) for v in vs])
        return cls(action, levels)

    @classmethod
    def trivial(cls, action: GroupAction) -> FiltrationData:
        return cls(action, {})

    def N(self, alpha: int, k: int) -> Subspace:
        n = self.complex.n_cells(k)
        if alpha >= 0:
            declared = self.levels.get(k, {}).get(alpha)
            return declared if declared is not None and alpha == 0 else Subspace.full(n)
        best = None
        for a, sub in self.levels.get(k, {}).items():
            if a <= alpha and (best is None or a > best[0]):
                best = (a, sub)
        return Subspace.zero(n) if best is None else best[1]

    def alphas(self, k: int) -> range:
        return range(-k - 1, 1)

    @property
    def degrees(self) -> range:
        return range(self.complex.dim + 1)

    def table(self) -> dict[tuple[int, int], int]:
        return {(k, a): self.N(a, k).dim for k in self.degrees for a in self.alphas(k)}


def _component_sums(x: Complex, n: int) -> list[int]:
    """Sums of the top cells of each face-connected component of n-cells."""
    top = x.cells(n)
    parent = list(range(len(top)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for f in x.cells(n - 1) if n > 0 else ():
        cof = [x.index(t) for t in x.cofaces(f) if len(t) == n + 1]
        for i in cof[1:]:
            parent[find(i)] = find(cof[0])
    sums: dict[int, int] = {}
    for i in range(len(top)):
        r = find(i)
        sums[r] = sums.get(r, 0) | (1 << i)
    return list(sums.values())


def default_filtration(action: GroupAction) -> FiltrationData:
    """Filtration used when an input supplies none.

    The pure level ``N_{-k} C_k`` is spanned by the cycle-valued component
    sums in the top dimension and by all k-cycles below it; intermediate
    levels are ``{c : ∂c ∈ N_α C_{k-1}}``, the largest choice compatible
    with the boundary.
    """
    x = action.parent
    top = x.dim
    levels: dict[int, dict[int, Subspace]] = {}
    for k in range(top + 1):
        d = x.boundary_matrix(k) if k > 0 else Gf2Matrix.zeros(0, x.n_cells(0))
        if k == top:
            pure = Subspace.span(x.n_cells(k), [v for v in _component_sums(x, k) if d.apply(v) == 0])
        else:
            pure = gf2.kernel_basis(d)
        levels[k] = {-k: pure}
        for alpha in range(-k + 1, 0):
            below = levels[k - 1][alpha] if alpha in levels.get(k - 1, {}) else Subspace.full(x.n_cells(k - 1))
            levels[k][alpha] = gf2.preimage(d, below)
    return FiltrationData(action, levels)


def validate_filtration_data(fd: FiltrationData) -> dict:
    """Check bounds, monotonicity, boundary compatibility and equivariance."""
    x = fd.complex
    for k, per in fd.levels.items():
        if not 0 <= k <= x.dim:
            raise ValidationError("bounds", f"no chains in degree {k}")
        for alpha, sub in per.items():
            if sub.ambient != x.n_cells(k):
                raise ValidationError("bounds", f"N_{alpha} C_{k} lives in the wrong space")
            if alpha < -k - 1 or alpha > 0:
                raise ValidationError("bounds", f"level α={alpha} is outside [-{k + 1}, 0] in degree {k}")
    for k in fd.degrees:
        if fd.N(-k - 1, k).dim:
            raise ValidationError("bounds", f"N_{-k - 1} C_{k} is not zero")
        if fd.N(0, k).dim != x.n_cells(k):
            raise ValidationError("bounds", f"N_0 C_{k} is not all of C_{k}")
        for alpha in fd.alphas(k):
            cur = fd.N(alpha, k)
            if not cur <= fd.N(alpha + 1, k):
                raise ValidationError("monotone", f"N_{alpha} C_{k} is not inside N_{alpha + 1} C_{k}")
            if k > 0 and not cur.image(x.boundary_matrix(k)) <= fd.N(alpha, k - 1):
                raise ValidationError("boundary", f"∂ sends N_{alpha} C_{k} outside N_{alpha} C_{k - 1}")
            for g in fd.action.elements[1:]:
                if not cur.image(fd.action.chain_matrix(g, k)) <= cur:
                    raise ValidationError("equivariance", f"N_{alpha} C_{k} is not stable under {g}")
    return {"valid": True, "dims": fd.table()}


def invariant_subspace(fd: FiltrationData, k: int, alpha: int = 0) -> Subspace:
    """``(N_α C_k)^G``: the intersection of the kernels of ``1 + g``."""
    a = fd.action
    out = fd.N(alpha, k)
    n = fd.complex.n_cells(k)
    for g in a.elements[1:]:
        out = out & gf2.kernel_basis(a.chain_matrix(g, k) + Gf2Matrix.identity(n))
    return out


def _require_z2(fd: FiltrationData):
    if not fd.action.is_z2:
        raise UnsupportedGroupError(f"the Smith machinery needs Z/2, got a group of order {fd.action.order}")


@dataclass(frozen=True)
class TFiltration:
    """``levels[k][β] = T^β_k`` for ``-k-1 <= β <= 1``."""

    data: FiltrationData
    levels: Mapping[int, Mapping[int, Subspace]]

    def T(self, beta: int, k: int) -> Subspace:
        n = self.data.complex.n_cells(k)
        if beta < -k - 1:
            return Subspace.zero(n)
        if beta > 1:
            return Subspace.full(n)
        return self.levels[k][beta]


def t_filtration(fd: FiltrationData) -> TFiltration:
    _require_z2(fd)
    x = fd.complex
    levels = {}
    for k in fd.degrees:
        p = fd.action.sigma_plus_one(k)
        levels[k] = {a + 1: fd.N(a + 1, k) & gf2.preimage(p, fd.N(a, k)) for a in range(-k - 2, 1)}
    tf = TFiltration(fd, levels)
    for k in fd.degrees:
        if tf.T(-k - 1, k).dim:
            raise ValidationError("t-filtration", f"T^{-k - 1}_{k} is not zero")
        if tf.T(1, k).dim != x.n_cells(k):
            raise ValidationError("t-filtration", f"T^1_{k} is not all of C_{k}")
        for b in range(-k - 1, 1):
            if not tf.T(b, k) <= tf.T(b + 1, k):
                raise ValidationError("t-filtration", f"T^{b}_{k} is not inside T^{b + 1}_{k}")
        if k > 0:
            for b in range(-k, 2):
                if not tf.T(b, k).image(x.boundary_matrix(k)) <= tf.T(b, k - 1):
                    raise ValidationError("t-filtration", f"∂ does not preserve T^{b} in degree {k}")
    return tf


# ---------------------------------------------------------- Smith sequence

def _fixed_filtration(fd: FiltrationData, fixed_fd: FiltrationData | None, alpha: int, k: int) -> Subspace:
    """``N_α C_k(X^G)`` as a subspace of ``C_k(X)``."""
    x = fd.complex
    fixed = fixed_subcomplex(fd.action)
    cells = [s for s in x.cells(k) if s in fixed.cells]
    support = sum(1 << x.index(s) for s in cells)
    if fixed_fd is None:
        on_fixed = Subspace.span(x.n_cells(k), [1 << x.index(s) for s in cells])
        return fd.N(alpha, k) & on_fixed
    y = fixed_fd.complex
    if set(y.simplices) != set(fixed.cells):
        raise InputError("the supplied fixed-point filtration does not live on the fixed subcomplex")
    vecs = []
    for v in fixed_fd.N(alpha, k).basis:
        vecs.append(sum(1 << x.index(y.cells(k)[i]) for i in gf2.iter_bits(v)))
    out = Subspace.span(x.n_cells(k), vecs)
    assert all(v & ~support == 0 for v in out.basis)
    return out


@dataclass
class SmithRow:
    """Exactness data for one chain degree."""

    k: int
    fixed: int
    tee: int
    left: int
    middle: int
    right: int
    kernel: int
    injective: bool
    middle_exact: bool
    surjective: bool
    chain_maps: bool
    composition_zero: bool
    witness: int | None = None

    @property
    def exact(self) -> bool:
        return (self.injective and self.middle_exact and self.surjective
                and self.chain_maps and self.composition_zero)


@dataclass
class SmithReport:
    alpha: int
    rows: list[SmithRow]

    @property
    def exact(self) -> bool:
        return all(r.exact for r in self.rows)

    def failures(self) -> list[str]:
        out = []
        for r in self.rows:
            for name in ("injective", "middle_exact", "surjective", "chain_maps", "composition_zero"):
                if not getattr(r, name):
                    out.append(f"k={r.k} {name}")
        return out


def _smith_parts(fd, tf, fixed_fd, alpha, k):
    p = fd.action.sigma_plus_one(k)
    fixed = _fixed_filtration(fd, fixed_fd, alpha, k)
    tee = tf.T(alpha + 1, k).image(p)
    return p, fixed, tee


def verify_smith_exactness(fd: FiltrationData, alpha: int, fixed_fd: FiltrationData | None = None) -> SmithReport:
    """Rank checks of the Smith sequence at level ``α`` in every chain degree."""
    _require_z2(fd)
    x = fd.complex
    tf = t_filtration(fd)
    rows = []
    for k in fd.degrees:
        p, fixed, tee = _smith_parts(fd, tf, fixed_fd, alpha, k)
        middle = fd.N(alpha, k)
        left = fixed + tee
        right = middle.image(p)
        kernel = middle & gf2.kernel_basis(p)
        injective = left.dim == fixed.dim + tee.dim
        witness = None
        middle_exact = left <= middle and left == kernel
        if not middle_exact:
            stray = [v for v in kernel.basis if not left.contains(v)] or [v for v in left.basis if not middle.contains(v)]
            witness = stray[0] if stray else None
        surjective = middle.image(p) == right
        chain_maps = True
        if k > 0:
            d = x.boundary_matrix(k)
            pm, fixed_m, tee_m = _smith_parts(fd, tf, fixed_fd, alpha, k - 1)
            chain_maps = (fixed.image(d) <= fixed_m and tee.image(d) <= tee_m
                          and d @ p == pm @ d)
        composition_zero = left.image(p).dim == 0
        rows.append(SmithRow(k, fixed.dim, tee.dim, left.dim, middle.dim, right.dim, kernel.dim,
                             injective, middle_exact, surjective, chain_maps, composition_zero, witness))
    return SmithReport(alpha, rows)


def decompose_invariant_chain(fd: FiltrationData, c: Chain, alpha: int,
                              fixed_fd: FiltrationData | None = None) -> Chain:
    """Find ``c'`` in ``N_{α+1} C_k`` with ``c = c|_{X^G} + (1+σ)c'``."""
    _require_z2(fd)
    x, k = fd.complex, c.k
    if c.parent != x:
        raise InputError("chain does not live on the filtered complex")
    v = c.bits
    if not fd.N(alpha, k).contains(v):
        raise PreconditionError(f"chain is not in N_{alpha} C_{k}")
    sigma_c = fd.action.chain_matrix(fd.action.sigma, k).apply(v)
    if sigma_c != v:
        raise PreconditionError("chain is not invariant")
    on_fixed = restrict_to_closed(c, fixed_subcomplex(fd.action))
    if not _fixed_filtration(fd, fixed_fd, alpha, k).contains(on_fixed.bits):
        raise ExactnessError(f"restriction to the fixed set is not in N_{alpha} C_{k}(X^G)", on_fixed)
    target = v ^ on_fixed.bits
    p = fd.action.sigma_plus_one(k)
    space = fd.N(alpha + 1, k)
    coeffs = gf2.solve_bits([p.apply(b) for b in space.basis], target)
    if coeffs is None:
        raise ExactnessError(f"no c' in N_{alpha + 1} C_{k} with (1+σ)c' = c + c|X^G", c)
    out = 0
    for i in gf2.iter_bits(coeffs):
        out ^= space.basis[i]
    if p.apply(out) != target or not space.contains(out):
        raise ExactnessError("solver returned a chain that does not re-verify", c)
    return Chain.from_bits(x, k, out)


# -------------------------------------------------------- free quotients

@dataclass
class QuotientRow:
    k: int
    alpha: int
    invariant: int
    tee: int
    quotient: int
    kernel_ok: bool
    image_ok: bool

    @property
    def ok(self) -> bool:
        return self.kernel_ok and self.image_ok and self.invariant == self.tee == self.quotient


@dataclass
class QuotientReport:
    projection: CellularMap
    rows: list[QuotientRow]
    supplied: bool

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)


def _check_projection(action: GroupAction, pi: CellularMap):
    pi.validate()
    x = action.parent
    sigma = action.maps[action.sigma]
    if any(pi.vertex_map[sigma[v]] != pi.vertex_map[v] for v in x.vertices):
        raise PreconditionError("projection is not constant on orbits")
    count: dict[Simplex, int] = {}
    for s in x.simplices:
        t = pi.image(s)
        if len(t) != len(s):
            raise PreconditionError(f"projection collapses {s}")
        count[t] = count.get(t, 0) + 1
    bad = [t for t in pi.target.simplices if count.get(t) != 2]
    if bad:
        raise PreconditionError(f"quotient cell {bad[0]} does not have exactly two preimages")


def quotient_comparison(fd: FiltrationData, alpha: int | None = None,
                        projection: CellularMap | None = None,
                        quotient_fd: FiltrationData | None = None) -> QuotientReport:
    """Compare ``(N_α C_k)^G``, ``(1+σ)T^{α+1}_k`` and ``N_α C_k(X/G)``.

    ``π_*`` restricted to ``T^{α+1}_k`` must have kernel ``(T^{α+1}_k)^G``
    and image the quotient level.  Without ``quotient_fd`` the quotient
    level is taken to be that image, so only the kernel and the dimension
    count carry information.
    """
    _require_z2(fd)
    if fixed_subcomplex(fd.action).cells:
        raise PreconditionError("quotient comparison needs a free action")
    if projection is None:
        q = quotient_complex(fd.action)
        if q.subdivisions:
            raise PreconditionError("orbit space needs subdivision; supply the quotient and its projection")
        projection = q.projection
    _check_projection(fd.action, projection)
    if quotient_fd is not None and quotient_fd.complex != projection.target:
        raise InputError("quotient filtration does not live on the target of the projection")
    tf = t_filtration(fd)
    rows = []
    for k in fd.degrees:
        p = fd.action.sigma_plus_one(k)
        push = projection.chain_matrix(k)
        for a in ([alpha] if alpha is not None else list(fd.alphas(k))):
            t = tf.T(a + 1, k)
            inv = invariant_subspace(fd, k, a)
            tee = t.image(p)
            image = t.image(push)
            kernel = t & gf2.kernel_basis(push)
            target = image if quotient_fd is None else quotient_fd.N(a, k)
            rows.append(QuotientRow(k, a, inv.dim, tee.dim, target.dim,
                                    kernel == (t & gf2.kernel_basis(p)), image == target))
    return QuotientReport(projection, rows, quotient_fd is not None)


@dataclass
class FreePartRow:
    k: int
    alpha: int
    symmetrized: int
    image: int

    @property
    def ok(self) -> bool:
        return self.symmetrized == self.image


def free_part_image(fd: FiltrationData, alpha: int | None = None) -> list[FreePartRow]:
    """``dim (1+σ)N_α C_k`` against the image of ``N_α C_k`` in ``C_k((X ∖ X^G)/G)``."""
    _require_z2(fd)
    a, x = fd.action, fd.complex
    fixed = fixed_subcomplex(a)
    rows = []
    for k in fd.degrees:
        orbits = sorted({tuple(sorted(a.orbit(s))) for s in x.cells(k) if s not in fixed.cells})
        where = {s: i for i, o in enumerate(orbits) for s in o}
        cols = [1 << where[s] if s in where else 0 for s in x.cells(k)]
        push = Gf2Matrix.from_columns(len(orbits), cols)
        p = a.sigma_plus_one(k)
        for al in ([alpha] if alpha is not None else list(fd.alphas(k))):
            n = fd.N(al, k)
            rows.append(FreePartRow(k, al, n.image(p).dim, n.image(push).dim))
    return rows


__all__ = [
    "FiltrationData", "TFiltration", "SmithRow", "SmithReport", "QuotientRow", "QuotientReport",
    "FreePartRow", "default_filtration", "validate_filtration_data", "invariant_subspace",
    "t_filtration", "verify_smith_exactness", "decompose_invariant_chain", "quotient_comparison",
    "free_part_image",
]
