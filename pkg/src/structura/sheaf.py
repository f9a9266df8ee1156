"""Presheaves and sheaves on finite spaces.

Values are abelian groups (``AbGroup``), finite rings (``RingFamily``) or
structured families (``Structured``).  Restriction maps are stored for some
pairs ``U <= V`` (typically the covering pairs of the inclusion order) and
every other restriction is obtained by composing along stored pairs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Mapping, Sequence

from .errors import (
    IndexSetMismatch,
    InputError,
    NotPartitionable,
    PresheafLawsViolated,
    TagMismatch,
    TooLarge,
    WrongValueKind,
)
from .exactla import (
    ZERO,
    DiagonalGroup,
    FgAbGroup,
    GroupMap,
    Subquotient,
    block_map,
    direct_sum,
    kernel,
)
from .finspace import FiniteSpace, Open, connected_components, minimal_open
from .rings import FiniteRing, RingMap, max_elements, zero_ring
from .strcat import (
    Alignment,
    FamilyEntry,
    StructuredFamily,
    StructuredHom,
    StructureTag,
)

ABGROUP = "AbGroup"
RING = "RingFamily"
STRUCTURED = "Structured"
KINDS = (ABGROUP, RING, STRUCTURED)


def _zero_value(kind: str, like=None):
    if kind == ABGROUP:
        return ZERO
    if kind == RING:
        return zero_ring()
    entries = like.entries if like is not None else ()
    zeros = []
    for e in entries:
        carrier = {"AbGroup": ZERO, "Ring": None, "VectorSpace": 0}.get(e.tag.kind)
        if e.tag.kind == "Ring":
            carrier = zero_ring()
        zeros.append(FamilyEntry(e.p, e.tag, carrier))
    return StructuredFamily(tuple(zeros), like.partitionable if like is not None else True)


def _identity(kind: str, value):
    if kind == ABGROUP:
        return GroupMap.identity(value)
    if kind == RING:
        return RingMap.identity(value)
    return StructuredHom.identity(value)


def _to_zero(kind: str, value, zero):
    if kind == ABGROUP:
        return GroupMap.zero(value, zero)
    if kind == RING:
        return RingMap.to_zero(value, zero)
    from .exactla import ExactFieldMatrix
    from .strcat import FormalIdentity

    comps = {}
    for e, z in zip(value.entries, zero.entries):
        k = e.tag.kind
        if k == "AbGroup":
            comps[e.p] = GroupMap.zero(e.carrier, z.carrier)
        elif k == "Ring":
            comps[e.p] = RingMap.to_zero(e.carrier, z.carrier)
        elif k == "VectorSpace":
            comps[e.p] = ExactFieldMatrix.zero(e.tag.field, 0, e.carrier)
        else:
            comps[e.p] = FormalIdentity()
    return StructuredHom(value, zero, Alignment.identity(len(value)), comps)


def _open_name(space: FiniteSpace, u: Open) -> str:
    return "{" + ",".join(map(str, space.sort_points(u))) + "}"


class Presheaf:
    """A presheaf on a finite space.

    ``values`` maps every nonempty open to its value; ``restrictions`` maps
    pairs ``(U, V)`` with ``U <= V`` to the morphism ``F(V) -> F(U)``.  The
    value at the empty set is replaced by the zero object.
    """

    def __init__(self, space: FiniteSpace, kind: str, values: Mapping, restrictions: Mapping):
        if kind not in KINDS:
            raise WrongValueKind(f"unknown value kind {kind!r}")
        self.space = space
        self.kind = kind
        vals = {frozenset(u): v for u, v in values.items()}
        for u in space.opens:
            if u and u not in vals:
                raise InputError(f"no value given for the open {_open_name(space, u)}")
        for u in vals:
            if u not in space.opens:
                raise InputError(f"{_open_name(space, u)} is not an open")
        like = vals.get(space.full)
        vals[frozenset()] = _zero_value(kind, like)
        self.values = vals
        res = {}
        for (u, v), m in restrictions.items():
            u, v = frozenset(u), frozenset(v)
            if not u <= v or u not in space.opens or v not in space.opens:
                raise InputError(f"restriction {_open_name(space, v)} -> {_open_name(space, u)} is not along an inclusion of opens")
            if not u:
                continue
            res[(u, v)] = m
        for v in space.opens:
            if v:
                zero = vals[frozenset()]
                if kind == STRUCTURED and vals[v].tags != zero.tags:
                    zero = _zero_value(kind, vals[v])  # shape mismatch; decomposition reports it
                res[(frozenset(), v)] = _to_zero(kind, vals[v], zero)
        self.stored = res
        self._cache: dict = {}

    # ---------------------------------------------------------------- access

    def __call__(self, u: Iterable) -> Any:
        return self.value(u)

    def value(self, u: Iterable) -> Any:
        u = frozenset(u)
        try:
            return self.values[u]
        except KeyError:
            raise InputError(f"{_open_name(self.space, u)} is not an open") from None

    def sections(self, u: Iterable) -> Any:
        """Sections over ``u``; the section functor is the value assignment."""
        return self.value(u)

    @cached_property
    def opens(self) -> list[Open]:
        return self.space.sorted_opens()

    def restriction(self, u: Iterable, v: Iterable):
        """The morphism ``F(v) -> F(u)`` for opens ``u <= v``."""
        u, v = frozenset(u), frozenset(v)
        key = (u, v)
        if key in self.stored:
            return self.stored[key]
        if key in self._cache:
            return self._cache[key]
        if not u <= v:
            raise InputError(f"{_open_name(self.space, u)} is not contained in {_open_name(self.space, v)}")
        if u == v:
            out = _identity(self.kind, self.values[u])
        else:
            steps = sorted(
                (w for (w, x) in self.stored if x == v and w != v and u <= w),
                key=lambda w: (-len(w), self.space.open_sort_key(w)),
            )
            if not steps:
                raise InputError(
                    f"no stored restriction path from {_open_name(self.space, v)} to {_open_name(self.space, u)}"
                )
            w = steps[0]
            out = self.restriction(u, w) @ self.stored[(w, v)]
        self._cache[key] = out
        return out

    def __repr__(self):
        return f"Presheaf({self.kind}, {len(self.values)} opens)"


# ------------------------------------------------------------------ laws


@dataclass
class LawReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_presheaf_laws(F: Presheaf) -> LawReport:
    """Identity and composition laws over every chain ``U <= V <= W`` of opens."""
    report = LawReport()
    name = lambda u: _open_name(F.space, u)  # noqa: E731
    opens = F.opens
    for u in opens:
        if F.restriction(u, u) != _identity(F.kind, F.values[u]):
            report.violations.append((name(u), name(u), name(u), "restriction to itself is not the identity"))
    for w in opens:
        for v in opens:
            if not v <= w:
                continue
            for u in opens:
                if not u <= v:
                    continue
                try:
                    lhs = F.restriction(u, v) @ F.restriction(v, w)
                except Exception as e:  # shape errors are law violations here
                    report.violations.append((name(u), name(v), name(w), f"maps do not compose: {e}"))
                    continue
                if lhs != F.restriction(u, w):
                    report.violations.append((name(u), name(v), name(w), "composite differs from direct restriction"))
    return report


def _require(F: Presheaf, kind: str):
    if F.kind != kind:
        raise WrongValueKind(f"expected a {kind}-valued presheaf, got {F.kind}")


@dataclass
class SheafReport:
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def equalizer_maps(F: Presheaf, target: Open, members: Sequence[Open]):
    """``F(target) -> prod F(V_i) -> prod_{i<j} F(V_i & V_j)`` for a cover."""
    _require(F, ABGROUP)
    target = frozenset(target)
    members = [frozenset(m) for m in members]
    src = [F.values[target]]
    mids = [F.values[m] for m in members]
    pairs = [(i, j) for i in range(len(members)) for j in range(i + 1, len(members))]
    tops = [F.values[members[i] & members[j]] for i, j in pairs]
    r = block_map(src, mids, {(i, 0): F.restriction(m, target) for i, m in enumerate(members)})
    blocks = {}
    for k, (i, j) in enumerate(pairs):
        w = members[i] & members[j]
        blocks[(k, j)] = F.restriction(w, members[j])
        blocks[(k, i)] = -F.restriction(w, members[i])
    d = block_map(mids, tops, blocks)
    return r, d


def cover_axiom_failures(F: Presheaf, target: Open, members: Sequence[Open]) -> list[tuple[str, tuple]]:
    """Locality and gluing failures of ``F`` on one cover, with witnesses.

    A locality witness is a nonzero section restricting to zero everywhere; a
    gluing witness is a compatible family that no section restricts to.
    """
    r, d = equalizer_maps(F, target, members)
    out = []
    ker = kernel(r)
    if not ker.group.is_trivial():
        out.append(("locality", ker.representatives[0]))
    glue = Subquotient(d, r)
    if not glue.group.is_trivial():
        out.append(("gluing", glue.representatives[0]))
    return out


def check_sheaf_axioms(F: Presheaf) -> SheafReport:
    """Gluing and locality on every open, tested on its minimal-open cover."""
    _require(F, ABGROUP)
    report = SheafReport()
    for u in F.opens:
        if not u:
            continue
        members = [minimal_open(F.space, x) for x in F.space.sort_points(u)]
        for axiom, witness in cover_axiom_failures(F, u, members):
            report.failures.append((_open_name(F.space, u), axiom, witness))
    return report


def is_sheaf(F: Presheaf) -> bool:
    return check_sheaf_axioms(F).ok


# ----------------------------------------------------------------- stalks


@dataclass
class Stalk:
    value: Any
    germs: dict


def stalk(F: Presheaf, x) -> Stalk:
    """The stalk at ``x``: attained at the minimal open, with germ maps."""
    ux = minimal_open(F.space, x)
    germs = {u: F.restriction(ux, u) for u in F.opens if x in u}
    return Stalk(F.values[ux], germs)


# ---------------------------------------------------------- sheafification


class _FamilySpace:
    """Compatible germ families over one open, as a kernel inside prod F(U_x)."""

    def __init__(self, F: Presheaf, u: Open):
        space = F.space
        self.points = space.sort_points(u)
        self.minimal = [minimal_open(space, x) for x in self.points]
        self.parts = [F.values[m] for m in self.minimal]
        self.offsets = [0]
        for g in self.parts:
            self.offsets.append(self.offsets[-1] + g.ngens)
        pairs = [
            (i, j)
            for i in range(len(self.points))
            for j in range(len(self.points))
            if i != j and self.minimal[i] < self.minimal[j]
        ]
        tops = [self.parts[i] for i, _ in pairs]
        blocks = {}
        for k, (i, j) in enumerate(pairs):
            blocks[(k, j)] = F.restriction(self.minimal[i], self.minimal[j])
            blocks[(k, i)] = -GroupMap.identity(self.parts[i])
        self.ambient = direct_sum(self.parts)
        self.delta = block_map(self.parts, tops, blocks)
        self.kernel = kernel(self.delta)

    def project(self, vec: Sequence[int], pts: Sequence) -> list[int]:
        pos = {x: i for i, x in enumerate(self.points)}
        out = []
        for x in pts:
            i = pos[x]
            out.extend(vec[self.offsets[i]:self.offsets[i + 1]])
        return out


def sheafify_with_unit(F: Presheaf) -> tuple[Presheaf, dict]:
    """Sheafification together with the canonical maps ``F(U) -> F~(U)``."""
    if F.kind == RING:
        return _sheafify_rings(F)
    _require(F, ABGROUP)
    laws = check_presheaf_laws(F)
    if not laws.ok:
        raise PresheafLawsViolated(f"presheaf laws fail: {laws.violations[0]}")
    fams = {u: _FamilySpace(F, u) for u in F.opens}
    values = {u: fams[u].kernel.group for u in F.opens if u}
    restrictions = {}
    for v in F.opens:
        for u in F.opens:
            if u and u <= v and u != v:
                fv, fu = fams[v], fams[u]
                cols = [fu.kernel.coordinates(fv.project(rep, fu.points)) for rep in fv.kernel.representatives]
                mat = [[c[i] for c in cols] for i in range(fu.kernel.group.ngens)]
                restrictions[(u, v)] = GroupMap(fv.kernel.group, fu.kernel.group, mat)
    sheaf = Presheaf(F.space, ABGROUP, values, restrictions)
    unit = {}
    for u in F.opens:
        fam = fams[u]
        germ = block_map([F.values[u]], fam.parts, {(i, 0): F.restriction(m, u) for i, m in enumerate(fam.minimal)})
        cols = []
        for e in range(F.values[u].ngens):
            v = [0] * F.values[u].ngens
            v[e] = 1
            cols.append(fam.kernel.coordinates(germ(v)))
        mat = [[c[i] for c in cols] for i in range(fam.kernel.group.ngens)]
        unit[u] = GroupMap(F.values[u], sheaf.values[u], mat)
    return sheaf, unit


def sheafify(F: Presheaf) -> Presheaf:
    """The sheaf of compatible germ families (kernel description)."""
    return sheafify_with_unit(F)[0]


def _ring_families(F: Presheaf, u: Open) -> tuple[list, list, list]:
    space = F.space
    pts = space.sort_points(u)
    mins = [minimal_open(space, x) for x in pts]
    rings = [F.values[m] for m in mins]
    constraints = {
        j: [(i, F.restriction(mins[i], mins[j])) for i in range(j) if mins[i] < mins[j]]
        + [(i, F.restriction(mins[j], mins[i])) for i in range(j) if mins[j] < mins[i]]
        for j in range(len(pts))
    }
    out: list = []
    limit = max_elements()

    def extend(partial):
        j = len(partial)
        if j == len(pts):
            out.append(tuple(partial))
            if len(out) > limit:
                raise TooLarge(f"more than {limit} sections over {_open_name(space, u)}")
            return
        for a in rings[j].elements:
            ok = True
            for i, rho in constraints[j]:
                if mins[i] < mins[j]:
                    ok = rho(a) == partial[i]
                else:
                    ok = rho(partial[i]) == a
                if not ok:
                    break
            if ok:
                extend(partial + [a])

    extend([])
    return pts, rings, out


def _sheafify_rings(F: Presheaf) -> tuple[Presheaf, dict]:
    laws = check_presheaf_laws(F)
    if not laws.ok:
        raise PresheafLawsViolated(f"presheaf laws fail: {laws.violations[0]}")
    data = {}
    values = {}
    for u in F.opens:
        if not u:
            continue
        pts, rings, fams = _ring_families(F, u)
        pos = {f: i for i, f in enumerate(fams)}
        add = [[pos[tuple(R.add[a][b] for R, a, b in zip(rings, f, g))] for g in fams] for f in fams]
        mul = [[pos[tuple(R.mul[a][b] for R, a, b in zip(rings, f, g))] for g in fams] for f in fams]
        zero = pos[tuple(R.zero for R in rings)]
        one = pos[tuple(R.one for R in rings)]
        labels = ["(" + ",".join(str(R.labels[a]) for R, a in zip(rings, f)) + ")" for f in fams]
        values[u] = FiniteRing(labels, add, mul, zero, one, allow_zero_ring=True, check=False)
        data[u] = (pts, pos, fams)
    restrictions = {}
    for v in F.opens:
        for u in F.opens:
            if u and u <= v and u != v:
                pv, _, fv = data[v]
                pu, posu, _ = data[u]
                idx = [pv.index(x) for x in pu]
                table = [posu[tuple(f[i] for i in idx)] for f in fv]
                restrictions[(u, v)] = RingMap(values[v], values[u], table, check=False)
    sheaf = Presheaf(F.space, RING, values, restrictions)
    unit = {}
    for u in F.opens:
        if not u:
            continue
        pts, pos, _ = data[u]
        mins = [minimal_open(F.space, x) for x in pts]
        germs = [F.restriction(m, u) for m in mins]
        table = [pos[tuple(g(a) for g in germs)] for a in F.values[u].elements]
        unit[u] = RingMap(F.values[u], values[u], table, check=False)
    return sheaf, unit


def is_isomorphic_unit(F: Presheaf, unit: Mapping) -> bool:
    """Whether every component of a natural map out of ``F`` is bijective."""
    from .exactla import is_isomorphism

    for u, m in unit.items():
        if not u:
            continue
        if F.kind == RING:
            if not m.is_bijective():
                return False
        elif not is_isomorphism(m):
            return False
    return True


# ------------------------------------------------------------ decomposition


def _tag_kind(tag: StructureTag) -> str:
    if tag.kind == "AbGroup":
        return ABGROUP
    if tag.kind == "Ring":
        return RING
    raise WrongValueKind(f"entries tagged {tag} cannot be decomposed into computable presheaves")


def decompose_structured(F: Presheaf) -> list[Presheaf]:
    """Split a family-valued presheaf into one presheaf per fixed neighbourhood."""
    _require(F, STRUCTURED)
    ref = F.values[F.space.full]
    for u in F.opens:
        if not u:
            continue
        fam = F.values[u]
        name = _open_name(F.space, u)
        if not fam.partitionable:
            raise NotPartitionable(f"value over {name} is not partitionable")
        if fam.indices != ref.indices:
            raise IndexSetMismatch(f"value over {name} has indices {fam.indices}, expected {ref.indices}")
        if fam.tags != ref.tags:
            raise TagMismatch(f"value over {name} has tags {[str(t) for t in fam.tags]}")
    for (u, v), hom in F.stored.items():
        if u and hom.alignment != Alignment.identity(len(ref)):
            raise IndexSetMismatch(
                f"restriction {_open_name(F.space, v)} -> {_open_name(F.space, u)} is not index-preserving"
            )
    out = []
    for entry in ref.entries:
        kind = _tag_kind(entry.tag)
        values = {u: F.values[u][entry.p].carrier for u in F.opens if u}
        res = {(u, v): hom.components[entry.p] for (u, v), hom in F.stored.items() if u}
        out.append(Presheaf(F.space, kind, values, res))
    return out


def rebundle(components: Sequence[Presheaf], tags: Sequence[StructureTag] | None = None) -> Presheaf:
    """Reassemble per-index presheaves into one family-valued presheaf."""
    if not components:
        raise InputError("need at least one component")
    space = components[0].space
    if tags is None:
        tags = [StructureTag("AbGroup" if c.kind == ABGROUP else "Ring") for c in components]
    values = {}
    for u in space.opens:
        if u:
            values[u] = StructuredFamily(tuple(FamilyEntry(p, t, c.values[u])
                                               for p, (t, c) in enumerate(zip(tags, components), start=1)))
    pairs = set()
    for c in components:
        pairs |= {k for k in c.stored if k[0]}
    res = {}
    ident = Alignment.identity(len(components))
    for (u, v) in pairs:
        res[(u, v)] = StructuredHom(values[v], values[u], ident,
                                    {p: c.restriction(u, v) for p, c in enumerate(components, start=1)})
    return Presheaf(space, STRUCTURED, values, res)


# ------------------------------------------------------------ constructors


def covering_pairs(space: FiniteSpace) -> list[tuple[Open, Open]]:
    """Pairs ``U < V`` of nonempty opens with no open strictly between them."""
    opens = [u for u in space.sorted_opens() if u]
    return [
        (u, v)
        for v in opens
        for u in opens
        if u < v and not any(u < w < v for w in opens)
    ]


def constant_presheaf(space: FiniteSpace, group: FgAbGroup | DiagonalGroup = FgAbGroup(1)) -> Presheaf:
    """The same group on every nonempty open with identity restrictions."""
    values = {u: group for u in space.opens if u}
    res = {(u, v): GroupMap.identity(group) for u, v in covering_pairs(space)}
    return Presheaf(space, ABGROUP, values, res)


def constant_sheaf(space: FiniteSpace, group: FgAbGroup | DiagonalGroup = FgAbGroup(1)) -> Presheaf:
    """Locally constant sections: one copy of the group per connected component."""
    comps = {u: connected_components(space, u) for u in space.opens}
    values = {u: direct_sum([group] * len(comps[u])) for u in space.opens if u}
    if group == FgAbGroup(1) or group.orders == (0,):
        values = {u: FgAbGroup(len(comps[u])) for u in values}
    k = group.ngens
    res = {}
    for u, v in covering_pairs(space):
        mat = [[0] * (k * len(comps[v])) for _ in range(k * len(comps[u]))]
        for i, cu in enumerate(comps[u]):
            j = next(j for j, cv in enumerate(comps[v]) if cu <= cv)
            for t in range(k):
                mat[i * k + t][j * k + t] = 1
        res[(u, v)] = GroupMap(values[v], values[u], mat)
    return Presheaf(space, ABGROUP, values, res)


def supported_presheaf(space: FiniteSpace, group, support: Iterable[Open], zero_restrictions: bool = False) -> Presheaf:
    """``group`` on the opens in ``support``, 0 elsewhere.

    With identity restrictions ``support`` must be closed upward or downward
    under inclusion; with zero restrictions it must be closed upward.
    """
    support = {frozenset(u) for u in support if u}
    values = {u: (group if u in support else ZERO) for u in space.opens if u}
    res = {}
    for u, v in covering_pairs(space):
        if u in support and v in support and not zero_restrictions:
            res[(u, v)] = GroupMap.identity(group)
        else:
            res[(u, v)] = GroupMap.zero(values[v], values[u])
    return Presheaf(space, ABGROUP, values, res)


def direct_sum_presheaf(parts: Sequence[Presheaf]) -> Presheaf:
    """Pointwise direct sum of group-valued presheaves on one space."""
    space = parts[0].space
    values = {u: direct_sum(p.values[u] for p in parts) for u in space.opens if u}
    res = {}
    for u, v in covering_pairs(space):
        res[(u, v)] = block_map([p.values[v] for p in parts], [p.values[u] for p in parts],
                                {(i, i): p.restriction(u, v) for i, p in enumerate(parts)})
    return Presheaf(space, ABGROUP, values, res)


def canonical_values(F: Presheaf) -> dict:
    """Invariant-factor form of every value (group-valued presheaves)."""
    return {u: F.values[u].canonical() for u in F.opens}
