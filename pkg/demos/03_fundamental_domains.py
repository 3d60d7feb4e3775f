# Halving a surface along an involution.
#
# Choose one top cell from each orbit so that the chosen half A meets its
# mirror image along a common boundary W.  The search grows A cell by cell
# and only falls back to enumeration when asked.

from equichain import SplitProblem, find_split, verify_split
from equichain.catalog import entry

for name in ("hexagon-antipodal", "octahedron-antipodal", "square-reflection", "torus-swap"):
    doc = entry(name).document
    (action,) = [a for _, a, _ in doc.actions.values() if a.is_z2 and not a.is_trivial()]
    problem = SplitProblem(action)
    result = find_split(problem)
    print(f"{name}: |A|={len(result.a)} |W|={len(result.interface)} by {result.strategy}")

# A certificate lists the checks one by one.

r = find_split(SplitProblem(entry("octahedron-antipodal").document.action("sigma")))
print("\n".join(r.certificate.lines()))
print("hemisphere:", sorted(r.a))
print("equator:", [f for f in r.interface if len(f) == 2])

# A bad choice on the hexagon: an edge together with its antipode.

hexagon = entry("hexagon-antipodal").document.action("sigma")
bad = verify_split(SplitProblem(hexagon), [("1", "2"), ("4", "5"), ("2", "3")])
print("bad choice valid?", bad.valid, {k: v for k, v in bad.checks.items() if not v})
