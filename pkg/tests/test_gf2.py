import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equichain import gf2
from equichain.errors import ContainmentError, InputError
from equichain.gf2 import Gf2Matrix, Gf2Vector, Subspace

import oracles


def M(rows):
    return Gf2Matrix.from_lists(rows)


def V(entries):
    return Gf2Vector.from_list(entries)


matrices = st.integers(1, 6).flatmap(lambda c: st.lists(
    st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=1, max_size=6))


def brute_rank(rows):
    return oracles.rank([frozenset(i for i, e in enumerate(r) if e) for r in rows])


@pytest.mark.parametrize("rows, r", [
    ([[1, 1], [1, 1]], 1),
    ([[0] * 3] * 3, 0),
    ([[1, 0, 1], [0, 1, 1], [1, 1, 0]], 2),
])
def test_rank_examples(rows, r):
    assert gf2.rank(M(rows)) == r


def test_solve_examples():
    assert gf2.solve(M([[1, 0], [0, 1]]), V([1, 0])) == V([1, 0])
    x = gf2.solve(M([[1, 1]]), V([1]))
    assert x in (V([1, 0]), V([0, 1]))
    assert gf2.solve(M([[1, 1], [1, 1]]), V([1, 0])) is None


def test_kernel_examples():
    assert gf2.kernel_basis(Gf2Matrix.identity(3)).dim == 0
    assert gf2.kernel_basis(M([[1, 1, 0]])).dim == 2
    assert gf2.kernel_basis(Gf2Matrix.zeros(2, 3)) == Subspace.full(3)


def test_subspace_examples():
    a, b = Subspace.span(2, [V([1, 0])]), Subspace.span(2, [V([0, 1])])
    assert a + b == Subspace.full(2)
    c = Subspace.span(3, [V([1, 1, 0]), V([0, 0, 1])])
    d = Subspace.span(3, [V([1, 1, 1])])
    assert c & d == d
    assert gf2.preimage(Gf2Matrix.identity(2), Subspace.zero(2)) == Subspace.zero(2)


def test_shape_errors():
    with pytest.raises(InputError):
        gf2.solve(M([[1, 0]]), V([1, 0]))
    with pytest.raises(InputError):
        Gf2Matrix.from_lists([[1, 0], [1]])
    with pytest.raises(ContainmentError):
        Subspace.span(2, [1]).coordinates(2)


@given(matrices)
def test_rank_matches_elimination_oracle(rows):
    assert gf2.rank(M(rows)) == brute_rank(rows)


@given(matrices)
def test_rank_nullity(rows):
    m = M(rows)
    assert gf2.rank(m) + gf2.kernel_basis(m).dim == m.cols
    assert gf2.rank(m) == gf2.rank(m.transpose())


@given(matrices, st.data())
def test_solve_agrees_with_enumeration(rows, data):
    m = M(rows)
    b = data.draw(st.integers(0, (1 << m.rows) - 1))
    x = gf2.solve(m, Gf2Vector(m.rows, b))
    reachable = {m.apply(v) for v in range(1 << m.cols)}
    assert (x is not None) == (b in reachable)
    if x is not None:
        assert m.apply(x.bits) == b


@settings(max_examples=50)
@given(st.integers(1, 5), st.data())
def test_dimension_formula(n, data):
    vecs = st.lists(st.integers(0, (1 << n) - 1), max_size=4)
    a = Subspace.span(n, data.draw(vecs))
    b = Subspace.span(n, data.draw(vecs))
    assert (a + b).dim + (a & b).dim == a.dim + b.dim
    members_a, members_b = set(a.members()), set(b.members())
    assert set((a & b).members()) == members_a & members_b
    assert len(members_a) == 2 ** a.dim


@given(matrices, st.data())
def test_preimage_by_enumeration(rows, data):
    m = M(rows)
    w = Subspace.span(m.rows, data.draw(st.lists(st.integers(0, (1 << m.rows) - 1), max_size=3)))
    pre = gf2.preimage(m, w)
    assert set(pre.members()) == {x for x in range(1 << m.cols) if w.contains(m.apply(x))}


def test_subspace_equality_is_canonical():
    vs = [0b011, 0b110, 0b101]
    for perm in itertools.permutations(vs):
        assert Subspace.span(3, perm) == Subspace.span(3, vs[:2])
