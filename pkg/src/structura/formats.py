"""JSON model files: parsing into library objects and rendering results.

Every parser takes the decoded JSON value plus a ``path`` naming where it
sits in the file, so errors point at the offending entry.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import InputError, ParseError, StructuraError
from .exactla import QQ, DiagonalGroup, ExactFieldMatrix, FgAbGroup, GroupMap, PrimeField
from .finspace import Cover, FiniteSpace, make_cover, validate_space
from .hochschild import FiniteDimAlgebra
from .ktheory import AbelianMonoidPresentation, BundleModel, naturals_window, validate_bundle
from .rings import FiniteRing, RingMap, product_ring, zmod
from .sheaf import ABGROUP, KINDS, RING, STRUCTURED, Presheaf
from .strcat import (
    AB_GROUP,
    RING as RING_TAG,
    FamilyEntry,
    FormalIdentity,
    StructuredFamily,
    StructuredHom,
    StructureTag,
    Alignment,
    opaque,
    vector_space,
)


def load_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None


def _fail(path: str, msg: str):
    raise ParseError(f"{path or '<root>'}: {msg}")


def _need(obj, key: str, path: str):
    if not isinstance(obj, dict):
        _fail(path, "expected an object")
    if key not in obj:
        _fail(path, f"missing key {key!r}")
    return obj[key]


def _int(v, path: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        _fail(path, f"expected an integer, got {v!r}")
    return v


def _int_matrix(v, path: str) -> list[list[int]]:
    if not isinstance(v, list) or any(not isinstance(r, list) for r in v):
        _fail(path, "expected a list of rows")
    return [[_int(x, f"{path}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(v)]


def _wrap(path: str, fn, *args, **kw):
    """Call a constructor, prefixing library errors with the file position."""
    try:
        return fn(*args, **kw)
    except StructuraError as e:
        raise type(e)(f"{path or '<root>'}: {e}") from None
    except (ValueError, TypeError, KeyError, IndexError) as e:
        raise ParseError(f"{path or '<root>'}: {e}") from None


# ----------------------------------------------------------------- spaces


def open_key(space: FiniteSpace, u) -> str:
    return "|".join(str(x) for x in space.sort_points(u))


def parse_space(obj, path: str = "") -> FiniteSpace:
    points = _need(obj, "points", path)
    opens = _need(obj, "opens", path)
    if not isinstance(points, list):
        _fail(f"{path}points", "expected a list of point labels")
    if not isinstance(opens, list):
        _fail(f"{path}opens", "expected a list of opens")
    for i, u in enumerate(opens):
        if not isinstance(u, list):
            _fail(f"{path}opens[{i}]", "an open is a list of points")
    return _wrap(path, validate_space, points, [[]] + opens)


def _parse_open(space: FiniteSpace, key: str, path: str) -> frozenset:
    u = frozenset(x for x in key.split("|") if x) if key else frozenset()
    names = {str(x): x for x in space.points}
    try:
        u = frozenset(space.collapse.get(names[x], names[x]) for x in u)
    except KeyError as e:
        _fail(path, f"unknown point {e.args[0]!r} in {key!r}")
    if u not in space.opens:
        _fail(path, f"{key!r} is not an open")
    return u


def parse_cover(space: FiniteSpace, members, path: str = "") -> Cover:
    if not isinstance(members, list):
        _fail(path, "a cover is a list of opens")
    opens = [_parse_open(space, "|".join(map(str, m)) if isinstance(m, list) else str(m), f"{path}[{i}]")
             for i, m in enumerate(members)]
    return _wrap(path, make_cover, space, opens, space.full)


def parse_cover_chains(space: FiniteSpace, obj, path: str = "") -> list:
    """``{"covers": [cover, ...]}`` (one chain) or ``{"chains": [[cover, ...], ...]}`` (one per component)."""
    if isinstance(obj, dict) and "chains" in obj:
        return [[parse_cover(space, c, f"{path}chains[{k}][{i}]") for i, c in enumerate(chain)]
                for k, chain in enumerate(obj["chains"])]
    covers = _need(obj, "covers", path)
    return [parse_cover(space, c, f"{path}covers[{i}]") for i, c in enumerate(covers)]


# ----------------------------------------------------------------- groups


def parse_group(obj, path: str = ""):
    """``{"rank", "torsion"}`` in invariant-factor form, or ``{"orders": [...]}`` for a sum of cyclics."""
    if isinstance(obj, dict) and "orders" in obj:
        orders = [_int(d, f"{path}.orders[{i}]") for i, d in enumerate(obj["orders"])]
        return _wrap(path, DiagonalGroup, tuple(orders))
    rank = _int(_need(obj, "rank", path), f"{path}.rank")
    torsion = [_int(d, f"{path}.torsion[{i}]") for i, d in enumerate(obj.get("torsion", []))]
    return _wrap(path, FgAbGroup, rank, tuple(torsion))


def render_group(g) -> dict:
    g = g.canonical()
    return {"rank": g.rank, "torsion": list(g.torsion)}


def parse_group_map(obj, source, target, path: str = "") -> GroupMap:
    if obj == "identity":
        if source.orders != target.orders:
            _fail(path, "identity between different groups")
        return GroupMap.identity(source)
    if obj == "zero":
        return GroupMap.zero(source, target)
    if isinstance(obj, dict) and "source" in obj:
        if parse_group(obj["source"], f"{path}.source").orders != source.orders:
            _fail(path, "declared source differs from the value it restricts from")
    if isinstance(obj, dict) and "target" in obj:
        if parse_group(obj["target"], f"{path}.target").orders != target.orders:
            _fail(path, "declared target differs from the value it restricts to")
    mat = _int_matrix(_need(obj, "matrix", path), f"{path}.matrix")
    return _wrap(path, GroupMap, source, target, mat)


def parse_map_literal(obj, path: str = "") -> GroupMap:
    source = parse_group(_need(obj, "source", path), f"{path}.source")
    target = parse_group(_need(obj, "target", path), f"{path}.target")
    return parse_group_map(obj, source, target, path)


# ------------------------------------------------------------------ rings


def parse_field(obj, path: str = ""):
    if obj in ("Q", "QQ"):
        return QQ
    if isinstance(obj, str):
        m = re.fullmatch(r"F_?(\d+)", obj)
        if m:
            return _wrap(path, PrimeField, int(m.group(1)))
    if isinstance(obj, dict) and "prime" in obj:
        return _wrap(path, PrimeField, _int(obj["prime"], f"{path}.prime"))
    _fail(path, f"unknown field {obj!r}")


def parse_ring(obj, path: str = "") -> FiniteRing:
    if isinstance(obj, dict) and "zmod" in obj:
        return _wrap(path, zmod, _int(obj["zmod"], f"{path}.zmod"))
    if isinstance(obj, dict) and "product" in obj:
        parts = obj["product"]
        if not isinstance(parts, list) or not parts:
            _fail(f"{path}.product", "expected a nonempty list of rings")
        out = parse_ring(parts[0], f"{path}.product[0]")
        for i, r in enumerate(parts[1:], start=1):
            out = _wrap(path, product_ring, out, parse_ring(r, f"{path}.product[{i}]"))
        return out
    labels = _need(obj, "elements", path)
    if not isinstance(labels, list) or not labels:
        _fail(f"{path}.elements", "expected a nonempty list")
    labels = [str(x) for x in labels]
    pos = {x: i for i, x in enumerate(labels)}

    def table(key):
        rows = _need(obj, key, path)
        try:
            return [[pos[str(v)] for v in row] for row in rows]
        except KeyError as e:
            _fail(f"{path}.{key}", f"unknown element {e.args[0]!r}")
        except TypeError:
            _fail(f"{path}.{key}", "expected a list of rows")

    zero = pos.get(str(obj.get("zero", "0")), 0)
    one = pos.get(str(obj.get("one", "1")), 1 if len(labels) > 1 else 0)
    return _wrap(path, FiniteRing, labels, table("add"), table("mul"), zero, one, allow_zero_ring=len(labels) == 1)


def parse_ring_map(obj, source: FiniteRing, target: FiniteRing, path: str = "") -> RingMap:
    if obj == "identity":
        if source.size != target.size:
            _fail(path, "identity between rings of different sizes")
        return RingMap.identity(source)
    images = _need(obj, "table", path)
    pos = {str(x): i for i, x in enumerate(target.labels)}
    try:
        table = [pos[str(v)] for v in images]
    except KeyError as e:
        _fail(f"{path}.table", f"unknown element {e.args[0]!r}")
    return _wrap(path, RingMap, source, target, table)


def parse_algebra(obj, path: str = "") -> FiniteDimAlgebra:
    field = parse_field(_need(obj, "field", path), f"{path}.field")

    def scalar(v, p):
        if isinstance(v, str):
            try:
                return Fraction(v)
            except ValueError:
                _fail(p, f"bad scalar {v!r}")
        if isinstance(v, bool) or not isinstance(v, int):
            _fail(p, f"bad scalar {v!r}")
        return v

    mul = _need(obj, "mul", path)
    one = _need(obj, "one", path)
    try:
        mul = [[[scalar(c, f"{path}.mul[{i}][{j}][{k}]") for k, c in enumerate(v)] for j, v in enumerate(row)]
               for i, row in enumerate(mul)]
        one = [scalar(c, f"{path}.one[{i}]") for i, c in enumerate(one)]
    except TypeError:
        _fail(f"{path}.mul", "expected nested arrays")
    if "dim" in obj and _int(obj["dim"], f"{path}.dim") != len(mul):
        _fail(f"{path}.dim", f"dim {obj['dim']} but {len(mul)} basis vectors in mul")
    return _wrap(path, FiniteDimAlgebra, field, mul, one)


# --------------------------------------------------------------- families


_TAG = re.compile(r"(VectorSpace|Opaque)\((.*)\)")


def parse_tag(obj, path: str = "") -> StructureTag:
    if obj == "AbGroup":
        return AB_GROUP
    if obj == "Ring":
        return RING_TAG
    if isinstance(obj, str):
        m = _TAG.fullmatch(obj)
        if m and m.group(1) == "VectorSpace":
            return vector_space(parse_field(m.group(2), path))
        if m and m.group(2):
            return opaque(m.group(2))
    _fail(path, f"unknown structure tag {obj!r}")


def parse_family(obj, path: str = "") -> StructuredFamily:
    entries = _need(obj, "entries", path)
    if not isinstance(entries, list):
        _fail(f"{path}.entries", "expected a list")
    out = []
    for i, e in enumerate(entries):
        ep = f"{path}.entries[{i}]"
        p = _int(_need(e, "p", ep), f"{ep}.p")
        tag = parse_tag(_need(e, "tag", ep), f"{ep}.tag")
        carrier = None
        if tag.kind == "AbGroup":
            carrier = parse_group(_need(e, "carrier", ep), f"{ep}.carrier")
        elif tag.kind == "Ring":
            carrier = parse_ring(_need(e, "carrier", ep), f"{ep}.carrier")
        elif tag.kind == "VectorSpace":
            carrier = _int(_need(e, "carrier", ep), f"{ep}.carrier")
        out.append(FamilyEntry(p, tag, carrier))
    return _wrap(path, StructuredFamily, tuple(out), bool(obj.get("partitionable", True)))


def _parse_component(obj, src: FamilyEntry, tgt: FamilyEntry, path: str):
    kind = src.tag.kind
    if kind == "AbGroup":
        return parse_group_map(obj, src.carrier, tgt.carrier, path)
    if kind == "Ring":
        return parse_ring_map(obj, src.carrier, tgt.carrier, path)
    if kind == "VectorSpace":
        if obj == "identity":
            return ExactFieldMatrix.identity(src.tag.field, src.carrier)
        rows = _need(obj, "matrix", path)
        return _wrap(path, ExactFieldMatrix, src.tag.field, rows, (tgt.carrier, src.carrier))
    return FormalIdentity()


def parse_structured_hom(obj, source: StructuredFamily, target: StructuredFamily, path: str = "") -> StructuredHom:
    pairs = obj.get("alignment") if isinstance(obj, dict) else None
    align = Alignment(tuple(tuple(p) for p in pairs)) if pairs else Alignment.identity(len(source))
    comps_obj = obj.get("components", {}) if isinstance(obj, dict) else {}
    comps = {}
    for a, b in align.pairs:
        raw = "identity" if obj == "identity" else comps_obj.get(str(a), "identity")
        comps[a] = _parse_component(raw, source[a], target[b], f"{path}.components.{a}")
    return _wrap(path, StructuredHom, source, target, align, comps)


# -------------------------------------------------------------- presheaves


def parse_presheaf(obj, space: FiniteSpace | None = None, path: str = "") -> Presheaf:
    if isinstance(obj, dict) and "space" in obj:
        space = parse_space(obj["space"], f"{path}space")
    if space is None:
        _fail(path, "presheaf has no space; pass a space file")
    kind = _need(obj, "kind", path)
    if kind == "Structured" or kind == "StructuredFamily":
        kind = STRUCTURED
    if kind not in KINDS:
        _fail(f"{path}kind", f"unknown kind {kind!r}")
    parse_value = {ABGROUP: parse_group, RING: parse_ring, STRUCTURED: parse_family}[kind]
    raw_values = _need(obj, "values", path)
    values = {}
    for key, v in raw_values.items():
        u = _parse_open(space, key, f"{path}values.{key}")
        if u:
            values[u] = parse_value(v, f"{path}values.{key}")
    missing = [open_key(space, u) for u in space.sorted_opens() if u and u not in values]
    if missing:
        _fail(f"{path}values", f"no value for the open{'s' if len(missing) > 1 else ''} {', '.join(missing)}")
    restrictions = {}
    for key, m in obj.get("restrictions", {}).items():
        rp = f"{path}restrictions.{key}"
        if "<=" not in key:
            _fail(rp, "restriction keys look like 'U<=V'")
        lo, hi = key.split("<=", 1)
        u, v = _parse_open(space, lo, rp), _parse_open(space, hi, rp)
        if not u <= v:
            _fail(rp, "restrictions go from a larger open to a smaller one")
        if not u:
            continue
        if u not in values or v not in values:
            _fail(rp, "restriction between opens with no value")
        if kind == ABGROUP:
            restrictions[(u, v)] = parse_group_map(m, values[v], values[u], rp)
        elif kind == RING:
            restrictions[(u, v)] = parse_ring_map(m, values[v], values[u], rp)
        else:
            restrictions[(u, v)] = parse_structured_hom(m, values[v], values[u], rp)
    return _wrap(path, Presheaf, space, kind, values, restrictions)


# ------------------------------------------------------------ bundles etc


def parse_bundle(obj, path: str = "") -> BundleModel:
    base = parse_space(_need(obj, "base", path), f"{path}base")
    m = _int(_need(obj, "m", path), f"{path}m")
    ranks = _need(obj, "ranks", path)
    names = {str(x): x for x in base.points}
    try:
        ranks = {names[str(k)]: v for k, v in ranks.items()}
    except KeyError as e:
        _fail(f"{path}ranks", f"unknown point {e.args[0]!r}")
    missing = [x for x in base.points if x not in ranks]
    if missing:
        _fail(f"{path}ranks", f"no ranks for {missing}")
    return _wrap(path, validate_bundle, base, m, ranks, str(obj.get("field", "R")))


def parse_monoid(obj, path: str = "") -> AbelianMonoidPresentation:
    """``{"window": "N", "bound": B}`` or ``{"elements", "zero", "table"}`` (``null`` = undefined)."""
    if isinstance(obj, dict) and "window" in obj:
        if obj["window"] != "N":
            _fail(f"{path}window", "only the window 'N' is known")
        return _wrap(path, naturals_window, _int(_need(obj, "bound", path), f"{path}bound"))
    labels = [str(x) for x in _need(obj, "elements", path)]
    pos = {x: i for i, x in enumerate(labels)}
    try:
        table = [[None if v is None else pos[str(v)] for v in row] for row in _need(obj, "table", path)]
    except KeyError as e:
        _fail(f"{path}table", f"unknown element {e.args[0]!r}")
    zero = str(obj.get("zero", labels[0]))
    if zero not in pos:
        _fail(f"{path}zero", f"unknown element {zero!r}")
    return _wrap(path, AbelianMonoidPresentation, labels, table, pos[zero])


def parse_grid(obj, path: str = ""):
    """``{"rows": [{"groups": [...], "differentials": [...]}, ...], "verticals": "trivial" | [[map, ...], ...]}``."""
    from .complex import assemble_grid

    rows = []
    for r, row in enumerate(_need(obj, "rows", path)):
        rp = f"{path}rows[{r}]"
        groups = [parse_group(g, f"{rp}.groups[{i}]") for i, g in enumerate(_need(row, "groups", rp))]
        diffs_raw = row.get("differentials", [])
        if len(diffs_raw) != max(len(groups) - 1, 0):
            _fail(f"{rp}.differentials", f"{len(groups)} groups need {max(len(groups) - 1, 0)} differentials")
        diffs = [parse_group_map(d, groups[i], groups[i + 1], f"{rp}.differentials[{i}]")
                 for i, d in enumerate(diffs_raw)]
        rows.append((groups, diffs))
    verticals = parse_verticals(obj.get("verticals", "trivial"), [g for g, _ in rows], f"{path}verticals")
    return _wrap(path, assemble_grid, rows, verticals, bool(obj.get("commuting", False)))


def parse_verticals(obj, row_groups, path: str = "", field=None):
    """``"trivial"`` or ``verticals[r][c]`` maps from row ``r`` to row ``r + 1`` at column ``c``.

    ``row_groups[r][c]`` gives the groups (or dimensions, over ``field``).
    """
    from .complex import TRIVIAL

    if obj in ("trivial", None):
        return TRIVIAL
    if not isinstance(obj, list) or len(obj) != len(row_groups) - 1:
        _fail(path, f"expected {len(row_groups) - 1} lists of vertical maps")
    out = {}
    for r, maps in enumerate(obj):
        for c, m in enumerate(maps):
            mp = f"{path}[{r}][{c}]"
            if c >= len(row_groups[r]) or c >= len(row_groups[r + 1]):
                _fail(mp, "no such grid column")
            if m in ("zero", None):
                continue
            if field is None:
                out[(r, c)] = parse_group_map(m, row_groups[r][c], row_groups[r + 1][c], mp)
            else:
                shape = (row_groups[r + 1][c], row_groups[r][c])
                if m == "identity":
                    if shape[0] != shape[1]:
                        _fail(mp, "identity between spaces of different dimension")
                    out[(r, c)] = ExactFieldMatrix.identity(field, shape[0])
                else:
                    out[(r, c)] = _wrap(mp, ExactFieldMatrix, field, _need(m, "matrix", mp), shape)
    return out
