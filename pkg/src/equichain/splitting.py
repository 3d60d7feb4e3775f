"""Split a closed pseudomanifold with an involution as ``M = A ∪ σ(A)``.

``A`` is the closure of a set ``a`` of top cells holding one cell from each
σ-orbit.  The split is valid when ``A ∩ σ(A)`` is exactly the closure of the
interface faces, i.e. the codimension-one faces with one coface in ``a``.
The search grows ``a`` breadth-first in the dual graph, repairs locally, and
falls back to enumerating all representative choices on small inputs.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .cells import Complex, GroupAction, Simplex, closure, fixed_subcomplex
from .errors import InputError, NoSplitFound, PreconditionError

EXHAUSTIVE_LIMIT = 20
REPAIR_PASSES = 8


@dataclass(frozen=True, eq=False)
class SplitProblem:
    action: GroupAction

    @property
    def complex(self) -> Complex:
        return self.action.parent

    @property
    def n(self) -> int:
        return self.complex.dim

    @property
    def sigma(self) -> dict:
        return self.action.maps[self.action.sigma]

    def image(self, s: Simplex) -> Simplex:
        return self.action.image(self.action.sigma, s)

    def top(self) -> tuple[Simplex, ...]:
        return self.complex.cells(self.n)

    def top_cofaces(self, f: Simplex) -> list[Simplex]:
        return [t for t in self.complex.cofaces(f) if len(t) == self.n + 1]

    def orbits(self) -> list[tuple[Simplex, Simplex]]:
        seen, out = set(), []
        for t in self.top():
            if t not in seen:
                u = self.image(t)
                seen.update((t, u))
                out.append((t, u))
        return out

    def neighbours(self, t: Simplex) -> list[Simplex]:
        out = []
        for i in range(len(t)):
            f = t[:i] + t[i + 1:]
            out.extend(u for u in self.top_cofaces(f) if u != t)
        return out

    def validate(self) -> dict:
        a, x = self.action, self.complex
        a.validate()
        if not a.is_z2 or a.is_trivial():
            raise PreconditionError("splitting needs a nontrivial involution")
        n = self.n
        if n < 1:
            raise PreconditionError("splitting needs a complex of dimension at least 1")
        for f in x.cells(n - 1):
            if len(self.top_cofaces(f)) != 2:
                raise PreconditionError(f"face {f} does not bound exactly two top cells")
        top = self.top()
        seen, queue = {top[0]}, deque([top[0]])
        while queue:
            for u in self.neighbours(queue.popleft()):
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        if len(seen) != len(top):
            raise PreconditionError("top cells are not connected through codimension-one faces")
        if fixed_subcomplex(a).dim >= n:
            raise PreconditionError("the fixed set has codimension 0")
        for t in top:
            if self.image(t) == t:
                raise PreconditionError(f"top cell {t} is invariant under σ")
        return {"valid": True, "n": n, "orbits": len(self.orbits())}


@dataclass
class Certificate:
    """One named verdict per condition plus the data they were computed from."""

    checks: dict[str, bool]
    details: dict[str, object] = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return all(self.checks.values())

    def lines(self) -> list[str]:
        return [f"{k}: {'pass' if v else 'fail'}" for k, v in self.checks.items()]


@dataclass
class SplitResult:
    a: frozenset
    s: frozenset
    certificate: Certificate
    strategy: str

    @property
    def interface(self) -> list[Simplex]:
        return self.certificate.details["interface"]


def _euler_parity(cells) -> int:
    return sum(1 for c in cells if len(c) % 2) - sum(1 for c in cells if len(c) % 2 == 0)


def verify_split(p: SplitProblem, a) -> Certificate:
    """Check every condition of a split and report each one separately."""
    x, n = p.complex, p.n
    a = frozenset(a)
    top = set(p.top())
    foreign = sorted(a - top, key=repr)
    if foreign:
        raise InputError(f"{foreign[0]} is not a top cell of the complex")
    sa = frozenset(p.image(t) for t in a)
    checks: dict[str, bool] = {}
    checks["representatives"] = a <= top and all((t in a) != (u in a) for t, u in p.orbits())
    checks["cover"] = a | sa == top
    checks["disjoint"] = not (a & sa)
    interface = frozenset(f for f in x.cells(n - 1) if sum(t in a for t in p.top_cofaces(f)) == 1)
    odd = frozenset(f for f in x.cells(n - 1) if sum(t in a for t in p.top_cofaces(f)) % 2)
    odd_sigma = frozenset(f for f in x.cells(n - 1) if sum(t in sa for t in p.top_cofaces(f)) % 2)
    closed_a, closed_sa = closure(a), closure(sa)
    meet = closed_a & closed_sa
    s = closure(interface)
    checks["interface"] = meet == s
    checks["boundary"] = odd == interface
    checks["parity"] = odd == odd_sigma == interface
    checks["invariant"] = all(p.image(f) in s for f in s)
    fixed = fixed_subcomplex(p.action).cells
    bad_links = []
    for f in sorted(closed_a):
        if f in fixed:
            continue
        link = [tuple(v for v in t if v not in f) for t in closed_a if set(f) < set(t)]
        if (_euler_parity(link) % 2 == 1) != (f in s):
            bad_links.append(f)
    checks["link_parity"] = not bad_links
    junk = sorted(meet - s)
    return Certificate(checks, {
        "a": sorted(a), "s": sorted(s), "interface": sorted(interface),
        "junk": junk, "bad_links": bad_links,
    })


def _grow(p: SplitProblem, seed: Simplex) -> frozenset:
    chosen, blocked = {seed}, {p.image(seed)}
    queue = deque([seed])
    remaining = {t for t in p.top() if t not in chosen and t not in blocked}
    while remaining:
        while queue:
            for u in p.neighbours(queue.popleft()):
                if u in remaining:
                    chosen.add(u)
                    blocked.add(p.image(u))
                    remaining -= {u, p.image(u)}
                    queue.append(u)
        if remaining:
            t = min(remaining)
            chosen.add(t)
            remaining -= {t, p.image(t)}
            queue.append(t)
    return frozenset(chosen)


def _defect(p: SplitProblem, cert: Certificate) -> int:
    return sum(not v for v in cert.checks.values()) * 1000 + len(cert.details["junk"]) + len(cert.details["bad_links"])


def _repair(p: SplitProblem, a: frozenset):
    cert = verify_split(p, a)
    for _ in range(REPAIR_PASSES):
        if cert.valid:
            return a, cert
        bad = set(cert.details["junk"]) | set(cert.details["bad_links"])
        candidates = sorted(t for t in a if any(set(f) <= set(t) for f in bad)) or sorted(a)
        best = None
        for t in candidates:
            trial = (a - {t}) | {p.image(t)}
            c = verify_split(p, trial)
            if best is None or _defect(p, c) < best[0]:
                best = (_defect(p, c), trial, c)
        if best is None or best[0] >= _defect(p, cert):
            break
        _, a, cert = best
    return a, cert


def _compact(p: SplitProblem, a: frozenset, cert: Certificate):
    """Swap single representatives while the split stays valid and its interface shrinks."""
    improved = True
    while improved:
        improved = False
        for t in sorted(a):
            trial = (a - {t}) | {p.image(t)}
            c = verify_split(p, trial)
            if c.valid and len(c.details["interface"]) < len(cert.details["interface"]):
                a, cert, improved = trial, c, True
                break
    return a, cert


def find_split(p: SplitProblem, exhaustive: bool = True) -> SplitResult:
    """Breadth-first growth from every seed, then local repair, then enumeration."""
    p.validate()
    grown, best = [], None
    for seed in p.top():
        a = _grow(p, seed)
        cert = verify_split(p, a)
        if not cert.valid:
            grown.append(a)
        elif best is None or len(cert.details["interface"]) < len(best[1].details["interface"]):
            best = (a, cert)
    if best is not None:
        a, cert = _compact(p, *best)
        return SplitResult(a, frozenset(cert.details["s"]), cert, "grow")
    for a in grown:
        a, cert = _repair(p, a)
        if cert.valid:
            return SplitResult(a, frozenset(cert.details["s"]), cert, "repair")
    orbits = p.orbits()
    if exhaustive and len(orbits) <= EXHAUSTIVE_LIMIT:
        for picks in itertools.product((0, 1), repeat=len(orbits)):
            a = frozenset(o[i] for o, i in zip(orbits, picks))
            cert = verify_split(p, a)
            if cert.valid:
                return SplitResult(a, frozenset(cert.details["s"]), cert, "exhaustive")
        raise NoSplitFound(f"no valid split among all {2 ** len(orbits)} representative choices")
    raise NoSplitFound("heuristic search failed" + ("" if exhaustive else " (exhaustive search disabled)")
                       + ("" if len(orbits) <= EXHAUSTIVE_LIMIT else f"; {len(orbits)} orbits exceed the enumeration limit"))
