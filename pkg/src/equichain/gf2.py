"""Bit-packed linear algebra over the two-element field.

Vectors and matrix rows are Python integers used as bitsets: coordinate
``j`` is bit ``j``.  Elimination XORs whole rows at once, so the inner loop
runs at machine-word granularity inside the integer implementation.

Pivots are always the lowest set bit of a row.  A row-reduced basis in which
every pivot bit appears in exactly one row is canonical, so two subspaces are
equal exactly when their bases are equal as tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import ContainmentError, InputError


def bits_of(v) -> int:
    if isinstance(v, Gf2Vector):
        return v.bits
    return int(v)


def iter_bits(x: int) -> Iterator[int]:
    """Yield the indices of set bits of ``x`` in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def mask(n: int) -> int:
    return (1 << n) - 1


@dataclass(frozen=True)
class Gf2Vector:
    length: int
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.length:
            raise InputError(f"bits {self.bits:#x} do not fit in length {self.length}")

    @classmethod
    def from_indices(cls, length: int, indices: Iterable[int]) -> Gf2Vector:
        bits = 0
        for i in indices:
            bits ^= 1 << i
        return cls(length, bits)

    @classmethod
    def from_list(cls, entries: Sequence[int]) -> Gf2Vector:
        return cls.from_indices(len(entries), (i for i, e in enumerate(entries) if e & 1))

    @classmethod
    def zero(cls, length: int) -> Gf2Vector:
        return cls(length, 0)

    def indices(self) -> list[int]:
        return list(iter_bits(self.bits))

    def to_list(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.length)]

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def __getitem__(self, i: int) -> int:
        return (self.bits >> i) & 1

    def __add__(self, other: Gf2Vector) -> Gf2Vector:
        if self.length != other.length:
            raise InputError("vector lengths differ")
        return Gf2Vector(self.length, self.bits ^ other.bits)

    __sub__ = __add__

    def __bool__(self):
        return self.bits != 0

    def __repr__(self):
        return f"Gf2Vector({''.join(map(str, self.to_list()))})"


@dataclass(frozen=True)
class Gf2Matrix:
    """A ``rows x cols`` matrix stored as a tuple of row bitsets."""

    rows: int
    cols: int
    data: tuple[int, ...]

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise InputError("row count does not match data")
        limit = mask(self.cols)
        if any(r & ~limit for r in self.data):
            raise InputError("row entries exceed column count")

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]], cols: int | None = None) -> Gf2Matrix:
        if cols is None:
            cols = len(entries[0]) if entries else 0
        data = []
        for row in entries:
            if len(row) != cols:
                raise InputError("ragged matrix")
            data.append(Gf2Vector.from_list(row).bits)
        return cls(len(entries), cols, tuple(data))

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[int]) -> Gf2Matrix:
        data = [0] * rows
        for j, col in enumerate(columns):
            for i in iter_bits(col):
                data[i] |= 1 << j
        return cls(rows, len(columns), tuple(data))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Gf2Matrix:
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> Gf2Matrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    @cached_property
    def columns(self) -> tuple[int, ...]:
        cols = [0] * self.cols
        for i, row in enumerate(self.data):
            for j in iter_bits(row):
                cols[j] |= 1 << i
        return tuple(cols)

    def transpose(self) -> Gf2Matrix:
        return Gf2Matrix(self.cols, self.rows, self.columns)

    def apply(self, x: int) -> int:
        """Image of the bitset ``x`` (length ``cols``) as a bitset of length ``rows``."""
        out = 0
        cols = self.columns
        for j in iter_bits(x):
            out ^= cols[j]
        return out

    def __matmul__(self, other):
        if isinstance(other, Gf2Vector):
            if other.length != self.cols:
                raise InputError("matrix-vector dimension mismatch")
            return Gf2Vector(self.rows, self.apply(other.bits))
        if isinstance(other, Gf2Matrix):
            if other.rows != self.cols:
                raise InputError("matrix product dimension mismatch")
            return Gf2Matrix.from_columns(self.rows, [self.apply(c) for c in other.columns])
        return NotImplemented

    def __add__(self, other: Gf2Matrix) -> Gf2Matrix:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InputError("matrix shapes differ")
        return Gf2Matrix(self.rows, self.cols, tuple(a ^ b for a, b in zip(self.data, other.data)))

    def is_zero(self) -> bool:
        return not any(self.data)

    def to_lists(self) -> list[list[int]]:
        return [Gf2Vector(self.cols, r).to_list() for r in self.data]


class Eliminator:
    """Incremental row reduction with optional tags recording combinations.

    Each stored row is kept fully reduced against the others, so reducing a
    new vector is order independent and the stored rows form the canonical
    basis of their span.
    """

    def __init__(self):
        self.rows: dict[int, tuple[int, int]] = {}  # pivot bit -> (row, tag)

    def reduce(self, v: int, tag: int = 0) -> tuple[int, int]:
        rows = self.rows
        x = v
        while x:
            low = x & -x
            hit = rows.get(low)
            if hit is not None:
                v ^= hit[0]
                tag ^= hit[1]
                x &= v
            x &= ~low
        return v, tag

    def add(self, v: int, tag: int = 0) -> tuple[int, int]:
        """Insert ``v``; return its residue and tag (residue 0 means dependent)."""
        v, tag = self.reduce(v, tag)
        if v:
            pivot = v & -v
            for p, (row, rtag) in list(self.rows.items()):
                if row & pivot:
                    self.rows[p] = (row ^ v, rtag ^ tag)
            self.rows[pivot] = (v, tag)
        return v, tag

    def __len__(self):
        return len(self.rows)

    def basis(self) -> tuple[int, ...]:
        return tuple(self.rows[p][0] for p in sorted(self.rows))


def rref_rows(vectors: Iterable[int]) -> tuple[int, ...]:
    e = Eliminator()
    for v in vectors:
        e.add(v)
    return e.basis()


def rank(m: Gf2Matrix) -> int:
    """Dimension of the row space of ``m``."""
    e = Eliminator()
    for row in m.data:
        e.add(row)
    return len(e)


def solve(m: Gf2Matrix, b: Gf2Vector) -> Gf2Vector | None:
    """Some ``x`` with ``m @ x == b``, or ``None`` when the system is inconsistent."""
    if b.length != m.rows:
        raise InputError(f"right-hand side has length {b.length}, matrix has {m.rows} rows")
    x = solve_bits(m.columns, b.bits)
    return None if x is None else Gf2Vector(m.cols, x)


def solve_bits(columns: Sequence[int], target: int) -> int | None:
    """Coefficients ``x`` (bitset over ``columns``) with ``sum x_j columns[j] == target``."""
    e = Eliminator()
    for j, col in enumerate(columns):
        e.add(col, 1 << j)
    residue, tag = e.reduce(target)
    return None if residue else tag


def kernel_columns(columns: Sequence[int]) -> list[int]:
    """Basis (as coefficient bitsets) of the relations among ``columns``."""
    e = Eliminator()
    out = []
    for j, col in enumerate(columns):
        residue, tag = e.add(col, 1 << j)
        if not residue:
            out.append(tag)
    return out


def kernel_basis(m: Gf2Matrix) -> Subspace:
    """The null space ``{x : m @ x == 0}``."""
    return Subspace.span(m.cols, kernel_columns(m.columns))


@dataclass(frozen=True)
class Subspace:
    ambient: int
    basis: tuple[int, ...]

    @classmethod
    def span(cls, ambient: int, vectors: Iterable) -> Subspace:
        limit = mask(ambient)
        raw = []
        for v in vectors:
            b = bits_of(v)
            if b & ~limit or b < 0:
                raise InputError("vector outside the ambient space")
            raw.append(b)
        return cls(ambient, rref_rows(raw))

    @classmethod
    def zero(cls, ambient: int) -> Subspace:
        return cls(ambient, ())

    @classmethod
    def full(cls, ambient: int) -> Subspace:
        return cls(ambient, tuple(1 << i for i in range(ambient)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def _eliminator(self) -> Eliminator:
        e = Eliminator()
        for i, v in enumerate(self.basis):
            e.rows[v & -v] = (v, 1 << i)
        return e

    def reduce(self, v) -> int:
        """Canonical residue of ``v`` modulo this subspace."""
        return self._eliminator.reduce(bits_of(v))[0]

    def coordinates(self, v) -> int:
        """Coordinates of a member ``v`` in ``basis`` as a bitset."""
        residue, tag = self._eliminator.reduce(bits_of(v))
        if residue:
            raise ContainmentError("vector is not in the subspace")
        return tag

    def contains(self, v) -> bool:
        return self.reduce(v) == 0

    __contains__ = contains

    def vectors(self) -> list[Gf2Vector]:
        return [Gf2Vector(self.ambient, b) for b in self.basis]

    def members(self) -> Iterator[int]:
        """Every element, as bitsets (``2**dim`` of them)."""
        for coeffs in range(1 << self.dim):
            v = 0
            for i in iter_bits(coeffs):
                v ^= self.basis[i]
            yield v

    def _check(self, other: Subspace):
        if self.ambient != other.ambient:
            raise InputError("subspaces live in different ambient spaces")

    def issubset(self, other: Subspace) -> bool:
        self._check(other)
        return all(other.contains(v) for v in self.basis)

    __le__ = issubset

    def __add__(self, other: Subspace) -> Subspace:
        self._check(other)
        return Subspace.span(self.ambient, self.basis + other.basis)

    def __and__(self, other: Subspace) -> Subspace:
        return intersection(self, other)

    def image(self, m: Gf2Matrix) -> Subspace:
        if m.cols != self.ambient:
            raise InputError("map does not start from this ambient space")
        return Subspace.span(m.rows, (m.apply(v) for v in self.basis))


def intersection(a: Subspace, b: Subspace) -> Subspace:
    """``a ∩ b`` from the relations of the stacked bases."""
    a._check(b)
    e = Eliminator()
    for v in a.basis:
        e.add(v)
    out = []
    for j, v in enumerate(b.basis):
        residue, tag = e.add(v, 1 << j)
        if not residue:
            w = 0
            for i in iter_bits(tag):
                w ^= b.basis[i]
            out.append(w)
    return Subspace.span(a.ambient, out)


def preimage(m: Gf2Matrix, w: Subspace) -> Subspace:
    """``{x : m @ x ∈ w}``."""
    if m.rows != w.ambient:
        raise InputError("target subspace does not match the map")
    residues = [w.reduce(c) for c in m.columns]
    return Subspace.span(m.cols, kernel_columns(residues))


def quotient_dim(a: Subspace, b: Subspace) -> int:
    """``dim a - dim b`` for ``b ⊆ a``."""
    if not b.issubset(a):
        raise ContainmentError("second subspace is not contained in the first")
    return a.dim - b.dim


class QuotientBasis:
    """Coordinates on ``top / bottom`` for nested subspaces ``bottom ⊆ top``."""

    def __init__(self, top: Subspace, bottom: Subspace):
        if not bottom.issubset(top):
            raise ContainmentError("bottom subspace is not contained in top")
        self.top = top
        self.bottom = bottom
        self.residues = Subspace.span(top.ambient, (bottom.reduce(v) for v in top.basis))

    @property
    def dim(self) -> int:
        return self.residues.dim

    @property
    def representatives(self) -> tuple[int, ...]:
        return self.residues.basis

    def coordinates(self, v) -> int:
        return self.residues.coordinates(self.bottom.reduce(v))


def matrix_between(domain: QuotientBasis, codomain: QuotientBasis, m: Gf2Matrix) -> Gf2Matrix:
    """Matrix of the map induced by ``m`` between two quotient spaces."""
    columns = [codomain.coordinates(m.apply(r)) for r in domain.representatives]
    return Gf2Matrix.from_columns(codomain.dim, columns)
