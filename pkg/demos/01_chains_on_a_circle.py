# Chains mod 2 on a hexagon, and what the antipodal map does to them.
#
# A k-chain is a set of k-simplices; adding two chains is symmetric
# difference.  Run with `python demos/01_chains_on_a_circle.py`.

from equichain import Complex, GroupAction, betti_numbers, quotient_complex
from equichain.cells import act, boundary, fixed_subcomplex, pushforward

# The circle as a hexagon 1-2-3-4-5-6-1.

hexagon = Complex.from_facets([(i, i % 6 + 1) for i in range(1, 7)])
print("cells per dimension:", hexagon.counts)
print("betti numbers mod 2:", betti_numbers(hexagon))

# The boundary of an arc is its two endpoints; the whole cycle has none.

arc = hexagon.chain(1, [(1, 2), (2, 3), (3, 4)])
print("boundary of the arc 1..4:", sorted(boundary(arc).support))
print("boundary of the cycle:", sorted(boundary(hexagon.fundamental_chain(1)).support))

# The antipodal involution i -> i+3.  It has to be given in both
# directions; vertices left out would be fixed.

sigma = GroupAction.involution(hexagon, {i: (i + 2) % 6 + 1 for i in range(1, 7)})
sigma.validate()
print("image of the arc:", act(sigma, "s", arc).sorted_support())
print("fixed cells:", sorted(fixed_subcomplex(sigma).cells))

# No cell is fixed, so the orbit space is again a simplicial complex: a
# triangle, i.e. another circle.

q = quotient_complex(sigma)
print("orbit space cells:", q.complex.counts, "after", q.subdivisions, "subdivisions")
print("its betti numbers:", betti_numbers(q.complex))

# Pushing the arc down covers half the triangle, and the full cycle goes to
# zero: every edge downstairs is hit twice.

print("arc downstairs:", pushforward(q.projection, arc).sorted_support())
print("cycle downstairs:", pushforward(q.projection, hexagon.fundamental_chain(1)).sorted_support())
