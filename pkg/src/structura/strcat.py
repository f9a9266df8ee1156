"""Structured families, alignments and structured homomorphisms.

A structured family is a finite indexed list of fixed neighbourhoods, each
carrying a structure tag and (for tags the engine can compute with) a
concrete carrier.  Two families live in the same category when an alignment,
a tag-preserving bijection of indices, pairs them up; morphisms are families
of carrier homomorphisms, one per aligned pair, composed componentwise.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence

from .errors import AlignmentMismatch, ComponentShapeMismatch, ShapeMismatch
from .exactla import DiagonalGroup, ExactFieldMatrix, FgAbGroup, GroupMap
from .rings import FiniteRing, RingMap, are_isomorphic

COMPUTABLE = ("AbGroup", "Ring", "VectorSpace")


@dataclass(frozen=True)
class StructureTag:
    kind: str
    field: Any = None
    name: str | None = None

    def __post_init__(self):
        if self.kind not in COMPUTABLE + ("Opaque",):
            raise ValueError(f"unknown structure kind {self.kind!r}")
        if self.kind == "VectorSpace" and self.field is None:
            raise ValueError("a VectorSpace tag needs a field")
        if self.kind == "Opaque" and not self.name:
            raise ValueError("an Opaque tag needs a nonempty name")

    @property
    def computable(self) -> bool:
        return self.kind != "Opaque"

    def __str__(self):
        if self.kind == "VectorSpace":
            return f"VectorSpace({self.field})"
        if self.kind == "Opaque":
            return f"Opaque({self.name})"
        return self.kind


AB_GROUP = StructureTag("AbGroup")
RING = StructureTag("Ring")


def vector_space(field) -> StructureTag:
    return StructureTag("VectorSpace", field=field)


def opaque(name: str) -> StructureTag:
    return StructureTag("Opaque", name=name)


@dataclass(frozen=True)
class FamilyEntry:
    p: int
    tag: StructureTag
    carrier: Any = None


@dataclass(frozen=True)
class StructuredFamily:
    entries: tuple
    partitionable: bool = True

    def __post_init__(self):
        entries = tuple(self.entries)
        object.__setattr__(self, "entries", entries)
        if [e.p for e in entries] != list(range(1, len(entries) + 1)):
            raise ValueError("family indices must be 1, 2, ..., m in order")
        for e in entries:
            if not e.tag.computable:
                continue
            ok = {
                "AbGroup": lambda c: isinstance(c, (FgAbGroup, DiagonalGroup)),
                "Ring": lambda c: isinstance(c, FiniteRing),
                "VectorSpace": lambda c: isinstance(c, int) and c >= 0,
            }[e.tag.kind](e.carrier)
            if not ok:
                raise ValueError(f"entry {e.p} with tag {e.tag} has an unsuitable carrier {e.carrier!r}")

    @classmethod
    def of(cls, *items, partitionable: bool = True) -> "StructuredFamily":
        """Build from ``(tag, carrier)`` pairs or bare carriers (tag inferred)."""
        entries = []
        for p, item in enumerate(items, start=1):
            if isinstance(item, tuple):
                tag, carrier = item
            elif isinstance(item, StructureTag):
                tag, carrier = item, None
            elif isinstance(item, FgAbGroup):
                tag, carrier = AB_GROUP, item
            elif isinstance(item, FiniteRing):
                tag, carrier = RING, item
            else:
                raise ValueError(f"cannot infer a tag for {item!r}")
            entries.append(FamilyEntry(p, tag, carrier))
        return cls(tuple(entries), partitionable)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, p: int) -> FamilyEntry:
        return self.entries[p - 1]

    @property
    def indices(self) -> list[int]:
        return [e.p for e in self.entries]

    @property
    def tags(self) -> tuple:
        return tuple(e.tag for e in self.entries)


@dataclass(frozen=True)
class Alignment:
    """A bijection between entry indices: ``pairs`` of ``(p in X, q in Y)``."""

    pairs: tuple

    def __post_init__(self):
        pairs = tuple(sorted(tuple(p) for p in self.pairs))
        object.__setattr__(self, "pairs", pairs)
        left = [a for a, _ in pairs]
        right = [b for _, b in pairs]
        if len(set(left)) != len(left) or len(set(right)) != len(right):
            raise ValueError("alignment is not injective")

    @classmethod
    def identity(cls, m: int) -> "Alignment":
        return cls(tuple((p, p) for p in range(1, m + 1)))

    def __call__(self, p: int) -> int:
        return dict(self.pairs)[p]

    def then(self, other: "Alignment") -> "Alignment":
        """``other`` after ``self``."""
        m = dict(other.pairs)
        try:
            return Alignment(tuple((a, m[b]) for a, b in self.pairs))
        except KeyError as e:
            raise AlignmentMismatch(f"index {e.args[0]} is not in the domain of the second alignment") from None

    def inverse(self) -> "Alignment":
        return Alignment(tuple((b, a) for a, b in self.pairs))


def carriers_equivalent(tag: StructureTag, a, b) -> bool:
    if tag.kind == "AbGroup":
        return a.canonical() == b.canonical()
    if tag.kind == "Ring":
        return are_isomorphic(a, b)
    if tag.kind == "VectorSpace":
        return a == b
    return True


@dataclass
class MembershipReport:
    accepted: bool
    pairs: list = field(default_factory=list)
    violation: str | None = None


def check_category_membership(X: StructuredFamily, Y: StructuredFamily, h: Alignment,
                              compare_carriers: bool = True) -> MembershipReport:
    """Accept iff ``h`` is a tag-preserving bijection between the entries of X and Y.

    With ``compare_carriers`` the carriers of computable tags must also be
    isomorphic, which is how equivalence of structures is decided here.
    """
    report = MembershipReport(True)
    if sorted(a for a, _ in h.pairs) != X.indices or sorted(b for _, b in h.pairs) != Y.indices:
        report.accepted = False
        report.violation = "alignment is not a bijection between the index sets"
        return report
    for a, b in h.pairs:
        ea, eb = X[a], Y[b]
        if ea.tag != eb.tag:
            report.accepted = False
            report.violation = f"pair ({a}, {b}): tag {ea.tag} vs {eb.tag}"
            return report
        if compare_carriers and ea.tag.computable and not carriers_equivalent(ea.tag, ea.carrier, eb.carrier):
            report.accepted = False
            report.violation = f"pair ({a}, {b}): carriers of tag {ea.tag} are not isomorphic"
            return report
        report.pairs.append((a, b, ea.tag))
    return report


class FormalIdentity:
    """The only morphism offered on an Opaque entry."""

    def __matmul__(self, other):
        if not isinstance(other, FormalIdentity):
            raise ComponentShapeMismatch("formal identities only compose with each other")
        return self

    def __eq__(self, other):
        return isinstance(other, FormalIdentity)

    def __hash__(self):
        return hash("FormalIdentity")

    def __repr__(self):
        return "FormalIdentity()"


def _component_identity(entry: FamilyEntry):
    kind = entry.tag.kind
    if kind == "AbGroup":
        return GroupMap.identity(entry.carrier)
    if kind == "Ring":
        return RingMap.identity(entry.carrier)
    if kind == "VectorSpace":
        return ExactFieldMatrix.identity(entry.tag.field, entry.carrier)
    return FormalIdentity()


def _check_component(src: FamilyEntry, tgt: FamilyEntry, comp):
    kind = src.tag.kind
    where = f"component ({src.p} -> {tgt.p})"
    if kind == "AbGroup":
        if not isinstance(comp, GroupMap) or comp.source.orders != src.carrier.orders \
                or comp.target.orders != tgt.carrier.orders:
            raise ComponentShapeMismatch(f"{where} is not a group map between the carriers")
    elif kind == "Ring":
        if not isinstance(comp, RingMap) or comp.source.size != src.carrier.size \
                or comp.target.size != tgt.carrier.size:
            raise ComponentShapeMismatch(f"{where} is not a ring map between the carriers")
    elif kind == "VectorSpace":
        if not isinstance(comp, ExactFieldMatrix) or comp.shape != (tgt.carrier, src.carrier):
            raise ComponentShapeMismatch(f"{where} is not a {tgt.carrier}x{src.carrier} matrix")
    elif not isinstance(comp, FormalIdentity):
        raise ComponentShapeMismatch(f"{where}: opaque entries admit only the formal identity")


class StructuredHom:
    """A morphism ``source -> target``: one carrier map per aligned pair.

    ``components[p]`` is the map out of source entry ``p``.
    """

    __slots__ = ("source", "target", "alignment", "components")

    def __init__(self, source: StructuredFamily, target: StructuredFamily, alignment: Alignment,
                 components: Mapping[int, Any]):
        report = check_category_membership(source, target, alignment, compare_carriers=False)
        if not report.accepted:
            raise AlignmentMismatch(report.violation)
        if set(components) != set(source.indices):
            raise ComponentShapeMismatch("need exactly one component per aligned pair")
        for a, b in alignment.pairs:
            _check_component(source[a], target[b], components[a])
        self.source, self.target, self.alignment = source, target, alignment
        self.components = dict(sorted(components.items()))

    @classmethod
    def identity(cls, X: StructuredFamily) -> "StructuredHom":
        return cls(X, X, Alignment.identity(len(X)), {e.p: _component_identity(e) for e in X.entries})

    def __matmul__(self, other: "StructuredHom") -> "StructuredHom":
        return compose_structured_homs(other, self)

    def __eq__(self, other):
        if not isinstance(other, StructuredHom):
            return NotImplemented
        return self.alignment == other.alignment and self.components == other.components

    def __hash__(self):
        return hash(self.alignment)

    def __repr__(self):
        return f"StructuredHom({self.alignment.pairs}, {self.components})"


def compose_structured_homs(f: StructuredHom, g: StructuredHom) -> StructuredHom:
    """``g`` after ``f``, computed componentwise along the composed alignment."""
    if f.target.tags != g.source.tags or len(f.target) != len(g.source):
        raise AlignmentMismatch("target of f and source of g are different families")
    h = f.alignment.then(g.alignment)
    fmap = dict(f.alignment.pairs)
    comps = {}
    for a in f.source.indices:
        try:
            comps[a] = g.components[fmap[a]] @ f.components[a]
        except ShapeMismatch as e:
            raise ComponentShapeMismatch(f"component {a}: {e}") from None
    return StructuredHom(f.source, g.target, h, comps)


def project(family: StructuredFamily, p: int):
    return family[p].carrier


def rebundle(carriers: Sequence, tags: Sequence[StructureTag], partitionable: bool = True) -> StructuredFamily:
    return StructuredFamily(tuple(FamilyEntry(p, t, c) for p, (t, c) in enumerate(zip(tags, carriers), start=1)),
                            partitionable)
