"""``structura`` command line: one subcommand per pipeline.

Exit status is 0 on success, 1 when the input is well formed but fails a
mathematical condition, and 2 for malformed input or bad options.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .cohom import (
    cech_cohomology,
    compare_cech_derived,
    derived_limit_cohomology,
    refined_cech,
    structured_cohomology,
)
from .complex import TRIVIAL, grid_cohomologies
from .errors import InputError, OptionConflict, Rejection, UnknownCommand, WrongValueKind
from .formats import (
    load_json,
    open_key,
    parse_algebra,
    parse_bundle,
    parse_cover_chains,
    parse_family,
    parse_grid,
    parse_monoid,
    parse_presheaf,
    parse_ring,
    parse_space,
    parse_verticals,
    render_group,
)
from .hochschild import hochschild_cohomology, structured_hochschild
from .ktheory import grothendieck_complete, k0
from .ringspec import check_locally_ringed, spec
from .rings import describe_ring, is_local
from .sheaf import ABGROUP, STRUCTURED, check_presheaf_laws, check_sheaf_axioms, decompose_structured, \
    is_isomorphic_unit, sheafify_with_unit

COMMANDS = ("check", "cohomology", "hochschild", "spec", "k0", "complete")


class Report:
    """Collects text lines and a JSON document side by side."""

    def __init__(self, command: str):
        self.lines: list[str] = []
        self.doc: dict = {"command": command}

    def line(self, text: str = ""):
        self.lines.append(text)

    def emit(self, fmt: str, out) -> None:
        if fmt == "json":
            out.write(json.dumps(self.doc, indent=2) + "\n")
        else:
            out.write("\n".join(self.lines) + "\n")


def _groups_doc(groups) -> list:
    return [render_group(g) for g in groups]


def _degree_lines(rep: Report, groups, prefix: str = "H"):
    for n, g in enumerate(groups):
        rep.line(f"{prefix}^{n} = {g}")


def _load_presheaf(paths: Sequence[str]):
    if len(paths) == 1:
        return parse_presheaf(load_json(paths[0]))
    if len(paths) == 2:
        space = parse_space(load_json(paths[0]))
        return parse_presheaf(load_json(paths[1]), space)
    raise OptionConflict("expected [space.json] presheaf.json")


# ------------------------------------------------------------------ check


def _check_presheaf(F, rep: Report) -> int:
    laws = check_presheaf_laws(F)
    rep.doc["kind"] = F.kind
    rep.doc["presheaf_laws"] = [list(map(str, v)) for v in laws.violations]
    if not laws.ok:
        rep.line("presheaf laws: FAIL")
        for v in laws.violations:
            rep.line(f"  {v}")
        return 1
    rep.line("presheaf laws: ok")
    comps = decompose_structured(F) if F.kind == STRUCTURED else [F]
    status = 0
    rep.doc["sheaf"] = []
    for p, C in enumerate(comps, start=1):
        where = f"component {p}: " if F.kind == STRUCTURED else ""
        if C.kind == ABGROUP:
            report = check_sheaf_axioms(C)
            entry = {"ok": report.ok, "failures": [
                {"open": name, "axiom": ax, "witness": list(w)} for name, ax, w in report.failures]}
            rep.doc["sheaf"].append(entry)
            if report.ok:
                rep.line(f"{where}sheaf axioms: ok")
            else:
                status = 1
                rep.line(f"{where}sheaf axioms: FAIL")
                for f in entry["failures"]:
                    rep.line(f"  {f['axiom']} fails over {f['open']}: witness family {f['witness']}")
        else:
            _, unit = sheafify_with_unit(C)
            ok = is_isomorphic_unit(C, unit)
            rep.doc["sheaf"].append({"ok": ok})
            rep.line(f"{where}sheaf condition: {'ok' if ok else 'FAIL'}")
            status = status or (0 if ok else 1)
    return status


def cmd_check(args, rep: Report) -> int:
    obj = load_json(args.files[-1])
    if len(args.files) == 2:
        F = parse_presheaf(obj, parse_space(load_json(args.files[0])))
        return _check_presheaf(F, rep)
    if not isinstance(obj, dict):
        raise InputError("model file must hold a JSON object")
    if "kind" in obj:
        return _check_presheaf(parse_presheaf(obj), rep)
    if "rows" in obj:
        grid = parse_grid(obj)
        table = grid_cohomologies(grid)
        rep.doc["model"] = "grid"
        rep.doc["hpq"] = {f"{r},{c}": render_group(g) for (r, c), g in table.items()}
        rep.line(f"grid with {len(grid.rows)} rows: ok")
        for (r, c), g in table.items():
            rep.line(f"H^{{{r},{c}}} = {g}")
        return 0
    if "points" in obj:
        X = parse_space(obj)
        collapsed = {str(k): str(v) for k, v in X.collapse.items() if k != v}
        rep.doc.update(model="space", points=[str(x) for x in X.points],
                       opens=[open_key(X, u) for u in X.sorted_opens()], collapsed=collapsed)
        rep.line(f"space with {len(X.points)} points and {len(X.opens)} opens: ok")
        for k, v in collapsed.items():
            rep.line(f"  {k} identified with {v}")
        return 0
    if "base" in obj:
        E = parse_bundle(obj)
        rep.doc.update(model="bundle", rank_matrix=[list(r) for r in E.rank_matrix])
        rep.line(f"bundle: ok, rank matrix {[list(r) for r in E.rank_matrix]}")
        return 0
    if "entries" in obj:
        fam = parse_family(obj)
        rep.doc.update(model="family", tags=[str(t) for t in fam.tags])
        rep.line(f"family of {len(fam)} entries: ok ({', '.join(map(str, fam.tags))})")
        return 0
    if "field" in obj and "mul" in obj:
        A = parse_algebra(obj)
        rep.doc.update(model="algebra", dim=A.dim, field=str(A.field))
        rep.line(f"algebra of dimension {A.dim} over {A.field}: ok")
        return 0
    if "window" in obj or "table" in obj:
        M = parse_monoid(obj)
        rep.doc.update(model="monoid", size=M.size)
        rep.line(f"monoid with {M.size} elements: ok")
        return 0
    if "zmod" in obj or "product" in obj or "add" in obj:
        R = parse_ring(obj)
        rep.doc.update(model="ring", size=R.size, local=is_local(R))
        rep.line(f"ring {describe_ring(R)}: ok")
        return 0
    raise InputError("cannot tell what kind of model this file holds")


# ------------------------------------------------------------- cohomology


def _load_verticals(args, rows, field=None):
    if not args.verticals:
        return TRIVIAL
    obj = load_json(args.verticals)
    raw = obj.get("verticals", "trivial") if isinstance(obj, dict) else obj
    return parse_verticals(raw, rows, "verticals", field)


def _emit_table(rep: Report, assembly: str, table, render=str, doc=render_group, prefix: str = "H"):
    if assembly == "rows":
        rep.doc["rows"] = [[doc(g) for g in row] for row in table]
        for p, row in enumerate(table, start=1):
            rep.line(f"row {p}: " + ", ".join(render(g) for g in row))
    elif assembly == "hpq":
        rep.doc["hpq"] = {f"{r},{c}": doc(g) for (r, c), g in table.items()}
        for (r, c), g in table.items():
            rep.line(f"{prefix}^{{{r},{c}}} = {render(g)}")
    else:
        rep.doc["total"] = [doc(g) for g in table]
        for n, g in enumerate(table):
            rep.line(f"{prefix}^{n} = {render(g)}")


def cmd_cohomology(args, rep: Report) -> int:
    F = _load_presheaf(args.files)
    n = args.max_degree
    rep.doc.update(mode=args.mode, max_degree=n)
    chains = parse_cover_chains(F.space, load_json(args.covers)) if args.covers else None
    if F.kind == STRUCTURED:
        mode = "cech" if args.mode == "cech" else "sheaf"
        if mode == "cech" and not chains:
            raise OptionConflict("--mode cech needs --covers")
        kw = dict(mode=mode, assembly=args.assembly, max_degree=n, cover_chain=chains, commuting=args.commuting)
        if args.verticals:
            first = structured_cohomology(F, **dict(kw, assembly="rows"))
            kw["verticals"] = _load_verticals(args, [row.groups for row in first.grid.rows])
        result = structured_cohomology(F, **kw)
        rep.doc["assembly"] = args.assembly
        _emit_table(rep, args.assembly, result.table)
        return 0
    if args.mode == "structured":
        raise WrongValueKind("--mode structured needs a Structured presheaf")
    if F.kind != ABGROUP:
        raise WrongValueKind(f"cohomology needs an AbGroup presheaf, got {F.kind}")
    if args.mode == "derived":
        groups = derived_limit_cohomology(F, n)
        rep.doc["cohomology"] = _groups_doc(groups)
        _degree_lines(rep, groups)
        if args.compare:
            cmp = compare_cech_derived(F, n)
            rep.doc["cech_minimal_cover"] = _groups_doc(cmp.cech)
            rep.doc["disagreements"] = cmp.disagreements
            rep.line("Cech on the minimal-open cover: " + ", ".join(map(str, cmp.cech)))
            rep.line("disagreements in degrees: " + (", ".join(map(str, cmp.disagreements)) or "none"))
        return 0
    if not chains:
        raise OptionConflict("--mode cech needs --covers")
    chain = chains[0] if isinstance(chains[0], list) else chains
    if len(chain) == 1:
        groups = cech_cohomology(chain[0], F, n)
    else:
        refined = refined_cech(F, chain, n)
        groups = refined.groups
        rep.doc["per_cover"] = [_groups_doc(g) for g in refined.per_cover]
    rep.doc["cohomology"] = _groups_doc(groups)
    _degree_lines(rep, groups)
    return 0


# ------------------------------------------------------------- hochschild


def cmd_hochschild(args, rep: Report) -> int:
    obj = load_json(args.files[-1])
    n = args.max_degree
    rep.doc["max_degree"] = n
    if len(args.files) == 1 and isinstance(obj, dict) and "mul" in obj:
        A = parse_algebra(obj)
        dims = hochschild_cohomology(A, n)
        rep.doc.update(field=str(A.field), dim=A.dim, hochschild=dims)
        for k, d in enumerate(dims):
            rep.line(f"HH^{k} dimension {d}")
        return 0
    F = _load_presheaf(args.files)
    if F.kind != STRUCTURED:
        raise WrongValueKind("hochschild needs an algebra file or a Structured ring-valued presheaf")
    kw = dict(assembly=args.assembly, max_degree=n, commuting=args.commuting)
    if args.verticals:
        first = structured_hochschild(F.space, F, **dict(kw, assembly="rows"), check_union=False)
        kw["verticals"] = _load_verticals(args, [row.groups for row in first.grid.rows], first.algebras[0].field)
    result = structured_hochschild(F.space, F, **kw)
    rep.doc.update(assembly=args.assembly, field=str(result.algebras[0].field),
                   union_rows_agree=result.union_rows == result.rows)
    _emit_table(rep, args.assembly, result.table, render=lambda d: f"dimension {d}", doc=lambda d: d, prefix="HH")
    rep.line("disjoint-union route: " + ("same rows" if result.union_rows == result.rows else "DIFFERENT rows"))
    return 0


# ------------------------------------------------------------------- spec


def cmd_spec(args, rep: Report) -> int:
    R = parse_ring(load_json(args.files[-1]))
    X = spec(R)
    report = check_locally_ringed(X)
    points = [str(x) for x in X.space.points]
    rep.doc.update(ring=describe_ring(R), points=points, opens=[open_key(X.space, u) for u in X.space.sorted_opens()],
                   stalks={str(x): describe_ring(S) for x, (S, _) in report.stalks.items()},
                   locally_ringed=report.ok)
    rep.line(f"Spec({describe_ring(R)}): {len(points)} point{'s' if len(points) != 1 else ''}")
    rep.line("opens: " + ", ".join("{" + open_key(X.space, u).replace("|", ",") + "}" for u in X.space.sorted_opens()))
    for x, (S, local) in report.stalks.items():
        rep.line(f"stalk at {x}: {describe_ring(S)}{'' if local else ' (not local)'}")
    rep.line(f"locally ringed: {'yes' if report.ok else 'no'}")
    return 0 if report.ok else 1


# --------------------------------------------------------------- k-theory


def cmd_k0(args, rep: Report) -> int:
    obj = load_json(args.files[-1])
    if isinstance(obj, dict) and "base" in obj:
        E = parse_bundle(obj)
        if args.m is not None and args.m != E.m:
            raise OptionConflict(f"--m {args.m} disagrees with the bundle's m = {E.m}")
        base, m = E.base, E.m
        rep.doc["bundle_class"] = [list(r) for r in E.rank_matrix]
    else:
        base, m = parse_space(obj), args.m if args.m is not None else 1
    result = k0(base, m)
    rep.doc.update(m=m, k0=render_group(result.group), generators=[[c, p] for c, p in result.generators])
    rep.line(f"K^0 = {result.group}")
    rep.line("generators: " + ", ".join(f"{c} p={p}" for c, p in result.generators))
    if "bundle_class" in rep.doc:
        flat = [k for row in rep.doc["bundle_class"] for k in row]
        rep.line(f"class of the bundle: {tuple(flat)}")
    return 0


def cmd_complete(args, rep: Report) -> int:
    M = parse_monoid(load_json(args.files[-1]))
    C = grothendieck_complete(M)
    rep.doc.update(group=render_group(C.group), canonical_map={k: list(v) for k, v in C.canonical_map.items()})
    rep.line(f"group completion: {C.group}")
    for k, v in C.canonical_map.items():
        rep.line(f"  {k} -> {list(v)}")
    return 0


# ------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="structura", description=__doc__.splitlines()[0])
    parser.add_argument("--output", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_, nfiles="+"):
        p = sub.add_parser(name, help=help_)
        p.add_argument("files", nargs=nfiles)
        p.add_argument("--output", choices=("text", "json"), default=argparse.SUPPRESS)
        return p

    add("check", "validate a model file and report law/axiom violations")
    p = add("cohomology", "sheaf, Cech or structured cohomology of a presheaf")
    p.add_argument("--mode", choices=("cech", "derived", "structured"), default="derived")
    p.add_argument("--assembly", choices=("rows", "hpq", "total"), default="total")
    p.add_argument("--max-degree", type=int, default=2)
    p.add_argument("--covers")
    p.add_argument("--verticals")
    p.add_argument("--commuting", action="store_true")
    p.add_argument("--compare", action="store_true", help="also report Cech on the minimal-open cover")
    p = add("hochschild", "Hochschild cohomology of an algebra or a structural ringed space")
    p.add_argument("--assembly", choices=("rows", "hpq", "total"), default="total")
    p.add_argument("--max-degree", type=int, default=2)
    p.add_argument("--verticals")
    p.add_argument("--commuting", action="store_true")
    add("spec", "prime spectrum and stalks of a finite ring", 1)
    p = add("k0", "K^0 of a base space (or of a bundle's base)", 1)
    p.add_argument("--m", type=int)
    add("complete", "Grothendieck completion of a finite monoid", 1)
    return parser


HANDLERS = {
    "check": cmd_check,
    "cohomology": cmd_cohomology,
    "hochschild": cmd_hochschild,
    "spec": cmd_spec,
    "k0": cmd_k0,
    "complete": cmd_complete,
}


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    err = err or sys.stderr
    positional = [a for a in argv if not a.startswith("-")]
    if positional and positional[0] not in COMMANDS and not (argv and argv[0] == "--output"):
        err.write(f"structura: {UnknownCommand.__name__}: unknown command {positional[0]!r}\n")
        return 2
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    rep = Report(args.command)
    try:
        status = HANDLERS[args.command](args, rep)
    except Rejection as e:
        err.write(f"structura: {type(e).__name__}: {e}\n")
        rep.doc.update(status="rejected", error=type(e).__name__, message=str(e))
        if args.output == "json":
            rep.emit("json", out)
        return 1
    except InputError as e:
        err.write(f"structura: {type(e).__name__}: {e}\n")
        return 2
    rep.doc["status"] = "ok" if status == 0 else "rejected"
    rep.emit(args.output, out)
    return status


if __name__ == "__main__":
    sys.exit(main())
