"""Commands run on a parsed document, producing named pass/fail checks."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import filtered as flt
from .cells import (Chain, ClosedSubcomplex, GroupAction, betti_numbers, fixed_subcomplex,
                    quotient_complex)
from .equivariant import (FiltrationData, decompose_invariant_chain, default_filtration,
                          free_part_image, invariant_subspace, quotient_comparison,
                          verify_smith_exactness)
from .errors import EquichainError, InputError, NoSplitFound, PreconditionError
from .fileformat import Document
from .gf2 import Gf2Matrix
from .splitting import SplitProblem, find_split

COMMANDS = ("validate", "homology", "ss", "smith", "decompose", "split", "quotient", "check-all")


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, tuple)):
        return ",".join(_fmt(x) for x in v) if v else "none"
    return str(v)


def _tok(s) -> str:
    return "-".join(s)


@dataclass
class Check:
    name: str
    ok: bool
    fields: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.fields = {k: _fmt(v) for k, v in self.fields.items()}


@dataclass
class Options:
    alpha: int | None = None
    chain: str | None = None
    filtration: str | None = None
    exhaustive: bool = False
    cone_shift: int = flt.CONE_SHIFT


@dataclass
class Report:
    checks: list[Check]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def machine(self) -> str:
        lines = []
        for c in self.checks:
            kv = " ".join(f"{k}={v}" for k, v in sorted(c.fields.items()))
            lines.append(f"CHECK {c.name} {'PASS' if c.ok else 'FAIL'}" + (f" {kv}" if kv else ""))
        return "\n".join(sorted(lines)) + ("\n" if lines else "")

    def text(self) -> str:
        out = []
        for c in sorted(self.checks, key=lambda c: c.name):
            out.append(f"[{'pass' if c.ok else 'FAIL'}] {c.name}")
            out.extend(f"    {k}: {v}" for k, v in sorted(c.fields.items()))
        n_bad = sum(not c.ok for c in self.checks)
        out.append(f"{len(self.checks)} checks, {n_bad} failed")
        return "\n".join(out) + "\n"

    def values(self) -> dict[str, str]:
        out = {}
        for c in self.checks:
            out[f"{c.name}.ok"] = _fmt(c.ok)
            for k, v in c.fields.items():
                out[f"{c.name}.{k}"] = v
        return out


# ------------------------------------------------------------ helpers

def _z2_actions(doc: Document) -> dict[str, GroupAction]:
    return {n: a for n, (_, a, _) in sorted(doc.actions.items()) if a.is_z2 and not a.is_trivial()}


def _filtrations(doc: Document, opts: Options) -> dict[str, FiltrationData]:
    """Declared filtrations, plus the default one for each involution without any."""
    out = {}
    covered = set()
    for name in sorted(doc.filtrations):
        fd = doc.filtration_data(name)
        out[name] = fd
        covered.add(doc.filtrations[name].action)
    for name, (_, a, _) in sorted(doc.actions.items()):
        if a.is_z2 and name not in covered:
            out[f"default_{name}"] = default_filtration(a)
    if opts.filtration is not None:
        if opts.filtration not in out:
            raise InputError(f"unknown filtration {opts.filtration!r}")
        out = {opts.filtration: out[opts.filtration]}
    return out


def _canonical(x, sub=None, shift=flt.CANONICAL_SHIFT):
    return flt.canonical_filtration(flt.ChainComplex.from_complex(x, sub), shift)


def _filtered_map(f, source, target):
    return flt.FilteredMap(source, target, flt.chain_map_matrices(f))


# ------------------------------------------------------------ commands

def cmd_validate(doc: Document, opts: Options) -> list[Check]:
    checks = []
    for name, x in sorted(doc.complexes.items()):
        rep = x.validate()
        checks.append(Check(f"validate.complex.{name}", True, {"dim": rep["dim"], "counts": list(x.counts)}))
    for name, (cname, a, _) in sorted(doc.actions.items()):
        a.validate()
        fixed = fixed_subcomplex(a)
        checks.append(Check(f"validate.action.{name}", True, {
            "order": a.order, "regular": a.is_regular(),
            "fixed": list(fixed.as_complex().counts) if fixed.cells else "empty"}))
    for name, (_, _, f) in sorted(doc.maps.items()):
        f.validate()
        checks.append(Check(f"validate.map.{name}", True))
    for name in sorted(doc.filtrations):
        table = doc.filtration_data(name).table()
        checks.append(Check(f"validate.filtration.{name}", True,
                            {"dims": [f"{k}:{a}:{d}" for (k, a), d in sorted(table.items())]}))
    for name, (_, c) in sorted(doc.chains.items()):
        checks.append(Check(f"validate.chain.{name}", True, {"dim": c.k, "size": len(c)}))
    for name in sorted(doc.squares):
        _square(doc, name).validate()
        checks.append(Check(f"validate.square.{name}", True))
    return checks


def cmd_homology(doc: Document, opts: Options) -> list[Check]:
    checks = []
    for name, x in sorted(doc.complexes.items()):
        checks.append(Check(f"homology.{name}", True, {"betti": list(betti_numbers(x))}))
    for name, a in _z2_actions(doc).items():
        fixed = fixed_subcomplex(a)
        if fixed.cells:
            checks.append(Check(f"homology.fixed.{name}", True,
                                {"betti": list(betti_numbers(fixed.as_complex()))}))
            continue
        try:
            q = quotient_complex(a)
        except PreconditionError as e:
            checks.append(Check(f"homology.quotient.{name}", False, {"error": str(e).replace(" ", "_")}))
            continue
        checks.append(Check(f"homology.quotient.{name}", True, {
            "betti": list(betti_numbers(q.complex)), "counts": list(q.complex.counts),
            "subdivisions": q.subdivisions}))
    return checks


def _square(doc: Document, name: str) -> flt.CubeDiagram:
    edges = doc.squares[name]
    nodes = {}
    for key in ("top", "left", "right", "bottom"):
        src, tgt, _ = doc.maps[edges[key]]
        for c in (src, tgt):
            if c not in nodes:
                nodes[c] = _canonical(doc.complexes[c])
    fm = {}
    for key in ("top", "left", "right", "bottom"):
        src, tgt, f = doc.maps[edges[key]]
        fm[key] = _filtered_map(f, nodes[src], nodes[tgt])
    return flt.CubeDiagram.square(fm["top"], fm["left"], fm["right"], fm["bottom"])


def _additivity(doc: Document, name: str, shift: int):
    src, tgt, f = doc.maps[doc.additivity[name]]
    x, y = doc.complexes[tgt], doc.complexes[src]
    sub = ClosedSubcomplex(x, y.simplices)
    a, b = _canonical(y), _canonical(x)
    rel = _canonical(x, sub)
    inclusion = _filtered_map(f, a, b)
    total = flt.cone(inclusion, shift)
    whole, kept = flt.cell_basis(x), flt.cell_basis(x, sub)
    maps = {}
    for n in total.complex.degrees:
        pos = {c: i for i, c in enumerate(kept.get(n, []))}
        cols = [1 << pos[c] if c in pos else 0 for c in whole.get(n, [])]
        cols += [0] * (total.complex.dim(n) - len(cols))
        maps[n] = Gf2Matrix.from_columns(rel.complex.dim(n), cols)
    return flt.check_additivity(inclusion, rel, flt.FilteredMap(total, rel, maps), shift)


def cmd_ss(doc: Document, opts: Options) -> list[Check]:
    checks = []
    for name, x in sorted(doc.complexes.items()):
        fc = _canonical(x)
        ss = flt.spectral_sequence(fc)
        e1 = ss.page(1).total
        h = sum(fc.complex.homology().values())
        checks.append(Check(f"ss.{name}", e1 == h, {
            "e1_total": e1, "homology_total": h, "stabilized_at": ss.stabilized_at,
            "limit_total": sum(ss.limit.values())}))
    for name in sorted(doc.squares):
        # the verdict is data; the catalog records the expected one
        total = flt.simple_complex(_square(doc, name), opts.cone_shift)
        ss = flt.spectral_sequence(total)
        checks.append(Check(f"ss.square.{name}", True, {
            "acyclic": flt.is_acyclic(total), "e1_total": ss.page(1).total,
            "e2_total": ss.page(2).total, "homology_total": sum(total.complex.homology().values()),
            "cone_shift": opts.cone_shift}))
    for name in sorted(doc.additivity):
        res = _additivity(doc, name, opts.cone_shift)
        checks.append(Check(f"ss.additivity.{name}", True, {
            "quasi_iso": res.ok, "failures": [f"{p}:{n}" for p, n in res.failures],
            "cone_shift": opts.cone_shift}))
    return checks


def _alphas(fd: FiltrationData, opts: Options) -> list[int]:
    if opts.alpha is not None:
        return [opts.alpha]
    return list(range(-fd.complex.dim - 1, 1))


def cmd_smith(doc: Document, opts: Options) -> list[Check]:
    checks = []
    for name, fd in _filtrations(doc, opts).items():
        if not fd.action.is_z2:
            continue
        for alpha in _alphas(fd, opts):
            r = verify_smith_exactness(fd, alpha)
            checks.append(Check(f"smith.{name}.{alpha}", r.exact, {
                "exact": r.exact,
                "fixed": [x.fixed for x in r.rows], "tee": [x.tee for x in r.rows],
                "middle": [x.middle for x in r.rows], "right": [x.right for x in r.rows],
                "invariant": [x.kernel for x in r.rows],
                "failures": [f.replace(" ", ":") for f in r.failures()]}))
    return checks


def cmd_decompose(doc: Document, opts: Options) -> list[Check]:
    checks = []
    fds = _filtrations(doc, opts)
    if opts.chain is not None:
        if opts.chain not in doc.chains:
            raise InputError(f"unknown chain {opts.chain!r}")
        cname, c = doc.chains[opts.chain]
        found = False
        for name, fd in fds.items():
            if fd.complex != doc.complexes[cname] or not fd.action.is_z2:
                continue
            for alpha in _alphas(fd, opts):
                if not fd.N(alpha, c.k).contains(c.bits) or alpha < -c.k:
                    continue
                found = True
                try:
                    cp = decompose_invariant_chain(fd, c, alpha)
                    checks.append(Check(f"decompose.{name}.{opts.chain}.{alpha}", True,
                                        {"c_prime": [_tok(s) for s in cp.sorted_support()]}))
                except EquichainError as e:
                    checks.append(Check(f"decompose.{name}.{opts.chain}.{alpha}", False,
                                        {"error": str(e).replace(" ", "_")}))
        if not found:
            raise InputError(f"chain {opts.chain} lies in no filtration level of its complex")
        return checks
    for name, fd in fds.items():
        if not fd.action.is_z2:
            continue
        for alpha in _alphas(fd, opts):
            solved = total = 0
            for k in fd.degrees:
                if alpha < -k - 1:
                    continue
                for v in invariant_subspace(fd, k, alpha).basis:
                    total += 1
                    try:
                        decompose_invariant_chain(fd, Chain.from_bits(fd.complex, k, v), alpha)
                        solved += 1
                    except EquichainError:
                        pass
            checks.append(Check(f"decompose.{name}.{alpha}", solved == total, {"solved": f"{solved}/{total}"}))
    return checks


def cmd_split(doc: Document, opts: Options, strict: bool = True) -> list[Check]:
    checks = []
    for name, a in _z2_actions(doc).items():
        p = SplitProblem(a)
        try:
            p.validate()
        except PreconditionError:
            continue
        try:
            r = find_split(p, exhaustive=opts.exhaustive)
        except NoSplitFound as e:
            checks.append(Check(f"split.{name}", False, {"error": str(e).replace(" ", "_")}))
            continue
        fields = {"a_size": len(r.a), "interface_size": len(r.interface), "strategy": r.strategy,
                  "a": [_tok(s) for s in sorted(r.a)]}
        fields.update(r.certificate.checks)
        checks.append(Check(f"split.{name}", r.certificate.valid, fields))
    if strict and not checks:
        raise InputError("no involution on a closed pseudomanifold to split")
    return checks


def cmd_quotient(doc: Document, opts: Options, strict: bool = True) -> list[Check]:
    checks = []
    for name in sorted(doc.quotients):
        up, pi, down = doc.quotients[name]
        if opts.filtration is not None and opts.filtration != up:
            continue
        r = quotient_comparison(doc.filtration_data(up), opts.alpha, doc.maps[pi][2], doc.filtration_data(down))
        checks.append(_quotient_check(f"quotient.{name}", r))
    for name, fd in _filtrations(doc, opts).items():
        if not fd.action.is_z2:
            continue
        if not fixed_subcomplex(fd.action).cells:
            try:
                r = quotient_comparison(fd, opts.alpha)
            except PreconditionError:
                r = None
            if r is not None:
                checks.append(_quotient_check(f"quotient.{name}", r))
        rows = free_part_image(fd, opts.alpha)
        checks.append(Check(f"freepart.{name}", all(x.ok for x in rows), {
            "dims": [f"{x.k}:{x.alpha}:{x.symmetrized}:{x.image}" for x in rows]}))
    if strict and not checks:
        raise InputError("no involution with filtration data to compare")
    return checks


def _quotient_check(name, r) -> Check:
    return Check(name, r.ok, {
        "supplied": r.supplied,
        "dims": [f"{x.k}:{x.alpha}:{x.invariant}:{x.tee}:{x.quotient}" for x in r.rows],
        "kernel": all(x.kernel_ok for x in r.rows), "image": all(x.image_ok for x in r.rows)})


def cmd_check_all(doc: Document, opts: Options) -> list[Check]:
    checks = []
    checks += cmd_validate(doc, opts)
    checks += cmd_homology(doc, opts)
    checks += cmd_ss(doc, opts)
    checks += cmd_smith(doc, opts)
    checks += cmd_decompose(doc, opts)
    checks += cmd_split(doc, Options(exhaustive=True, cone_shift=opts.cone_shift), strict=False)
    checks += cmd_quotient(doc, opts, strict=False)
    values = Report(checks).values()
    for e in doc.expectations:
        got = values.get(e.key)
        checks.append(Check(f"expect.{e.key}", got == e.value,
                            {"expected": e.value, "got": got if got is not None else "missing"}))
    return checks


def run(command: str, doc: Document, opts: Options | None = None) -> Report:
    opts = opts or Options()
    table = {
        "validate": cmd_validate, "homology": cmd_homology, "ss": cmd_ss, "smith": cmd_smith,
        "decompose": cmd_decompose, "split": cmd_split, "quotient": cmd_quotient,
        "check-all": cmd_check_all,
    }
    if command not in table:
        raise InputError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
    checks = table[command](doc, opts)
    if doc.entry:
        for c in checks:
            c.name = f"{doc.entry}/{c.name}"
    return Report(checks)
