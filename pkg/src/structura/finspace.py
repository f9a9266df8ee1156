"""Finite topological spaces, minimal opens, covers and refinements."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, product
from typing import Hashable, Iterable, Sequence

from .errors import (
    MissingEmptyOrFull,
    NotACover,
    NotAnOpen,
    NotARefinement,
    NotClosedUnderIntersection,
    NotClosedUnderUnion,
    UnknownPoint,
)

Point = Hashable
Open = frozenset


@dataclass(frozen=True, eq=False)
class FiniteSpace:
    """A validated finite T0 space.  Build it with :func:`validate_space`.

    ``collapse`` maps every input point to its representative in the
    Kolmogorov quotient (the identity for T0 input).
    """

    points: tuple
    opens: frozenset
    collapse: dict = field(default_factory=dict, compare=False)

    def __eq__(self, other):
        if not isinstance(other, FiniteSpace):
            return NotImplemented
        return self.points == other.points and self.opens == other.opens

    def __hash__(self):
        return hash((self.points, self.opens))

    @cached_property
    def full(self) -> Open:
        return frozenset(self.points)

    @cached_property
    def _position(self) -> dict:
        return {x: i for i, x in enumerate(self.points)}

    @cached_property
    def _minimal(self) -> dict:
        out = {}
        for x in self.points:
            u = self.full
            for v in self.opens:
                if x in v:
                    u &= v
            out[x] = u
        return out

    def index(self, x: Point) -> int:
        try:
            return self._position[x]
        except KeyError:
            raise UnknownPoint(f"{x!r} is not a point of the space") from None

    def sort_points(self, pts: Iterable[Point]) -> list:
        return sorted(pts, key=self.index)

    def sorted_opens(self) -> list[Open]:
        """Opens in a deterministic order: by size, then by point positions."""
        return sorted(self.opens, key=self.open_sort_key)

    def open_sort_key(self, u: Open):
        return (len(u), sorted(self.index(x) for x in u))

    def is_open(self, u: Iterable[Point]) -> bool:
        return frozenset(u) in self.opens

    def leq(self, x: Point, y: Point) -> bool:
        """Specialization order: ``x <= y`` iff ``U_x`` is contained in ``U_y``."""
        return self._minimal[x] <= self._minimal[y]

    def __repr__(self):
        return f"FiniteSpace(points={list(self.points)!r}, {len(self.opens)} opens)"


def _label(u) -> str:
    return "{" + ",".join(map(str, u)) + "}"


def validate_space(points: Sequence[Point], opens: Iterable[Iterable[Point]]) -> FiniteSpace:
    """Check the axioms of a finite topology and return the T0 quotient.

    ``opens`` must list the empty set and the full set explicitly.  Points
    with equal minimal opens are identified with the first such point in
    input order; ``space.collapse`` records the identification.
    """
    points = tuple(points)
    if not points:
        raise ValueError("a space needs at least one point")
    if len(set(points)) != len(points):
        raise ValueError("duplicate point labels")
    full = frozenset(points)
    opens = {frozenset(u) for u in opens}
    for u in opens:
        extra = u - full
        if extra:
            raise UnknownPoint(f"open {_label(u)} mentions unknown points {sorted(map(str, extra))}")
    if frozenset() not in opens or full not in opens:
        missing = [name for name, s in (("empty set", frozenset()), ("full set", full)) if s not in opens]
        raise MissingEmptyOrFull(f"opens are missing the {' and the '.join(missing)}")
    olist = sorted(opens, key=lambda u: (len(u), sorted(points.index(x) for x in u)))
    for u, v in combinations(olist, 2):
        if u | v not in opens:
            raise NotClosedUnderUnion(f"{_label(u)} union {_label(v)} is not open")
        if u & v not in opens:
            raise NotClosedUnderIntersection(f"{_label(u)} intersect {_label(v)} is not open")

    minimal = {}
    for x in points:
        m = full
        for u in opens:
            if x in u:
                m &= u
        minimal[x] = m
    rep = {}
    collapse = {}
    for x in points:
        rep.setdefault(minimal[x], x)
        collapse[x] = rep[minimal[x]]
    kept = tuple(x for x in points if collapse[x] == x)
    if len(kept) != len(points):
        opens = {frozenset(collapse[x] for x in u) for u in opens}
    return FiniteSpace(kept, frozenset(opens), collapse)


def minimal_open(space: FiniteSpace, x: Point) -> Open:
    """The smallest open containing ``x``."""
    space.index(x)
    return space._minimal[x]


def spec_order(space: FiniteSpace) -> frozenset:
    """The specialization order as a set of pairs ``(x, y)`` with ``x <= y``."""
    return frozenset((x, y) for x in space.points for y in space.points if space.leq(x, y))


def strict_chains(space: FiniteSpace, length: int) -> list[tuple]:
    """Strict chains ``x_0 < x_1 < ... < x_{length-1}`` in lexicographic point order."""
    pts = space.points
    out = []

    def extend(chain):
        if len(chain) == length:
            out.append(tuple(chain))
            return
        for y in pts:
            if y != chain[-1] and space.leq(chain[-1], y):
                extend(chain + [y])

    if length <= 0:
        return [()]
    for x in pts:
        extend([x])
    return out


def _require_open(space: FiniteSpace, u) -> Open:
    u = frozenset(u)
    for x in u:
        space.index(x)
    if u not in space.opens:
        raise NotAnOpen(f"{_label(space.sort_points(u))} is not an open")
    return u


def connected_components(space: FiniteSpace, within: Iterable[Point] | None = None) -> list[Open]:
    """Connected components of an open subspace, ordered by their first point."""
    within = space.full if within is None else _require_open(space, within)
    parent = {x: x for x in within}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for x in within:
        for y in space._minimal[x]:
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[ry] = rx
    groups: dict = {}
    for x in space.sort_points(within):
        groups.setdefault(find(x), []).append(x)
    return [frozenset(g) for g in groups.values()]


@dataclass(frozen=True)
class Cover:
    """An ordered list of opens whose union is ``target``."""

    space: FiniteSpace
    target: Open
    members: tuple

    def __post_init__(self):
        target = _require_open(self.space, self.target)
        members = tuple(_require_open(self.space, m) for m in self.members)
        union = frozenset().union(*members)
        if union != target:
            raise NotACover(f"members cover {_label(self.space.sort_points(union))}, "
                            f"not {_label(self.space.sort_points(target))}")
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "members", members)

    def __len__(self):
        return len(self.members)

    def intersection(self, indices: Sequence[int]) -> Open:
        out = self.target
        for i in indices:
            out = out & self.members[i]
        return out


def make_cover(space: FiniteSpace, members: Iterable[Iterable[Point]], target=None) -> Cover:
    members = tuple(frozenset(m) for m in members)
    if target is None:
        target = frozenset().union(*members) if members else frozenset()
    return Cover(space, frozenset(target), members)


def minimal_open_cover(space: FiniteSpace, within=None) -> Cover:
    """The canonical cover ``{U_x : x in within}`` in point order."""
    within = space.full if within is None else _require_open(space, within)
    return Cover(space, within, tuple(space._minimal[x] for x in space.sort_points(within)))


def refine_cover(coarse: Cover, fine: Cover) -> tuple[int, ...]:
    """For each fine member, the least index of a coarse member containing it."""
    if coarse.space != fine.space or coarse.target != fine.target:
        raise NotARefinement("covers do not target the same open of the same space")
    out = []
    for j, v in enumerate(fine.members):
        i = next((i for i, u in enumerate(coarse.members) if v <= u), None)
        if i is None:
            raise NotARefinement(
                f"fine member {j} {_label(fine.space.sort_points(v))} lies in no coarse member"
            )
        out.append(i)
    return tuple(out)


# ------------------------------------------------------------- constructors


def from_order(points: Sequence[Point], leq_pairs: Iterable[tuple]) -> FiniteSpace:
    """The space whose opens are the down-sets of a partial order.

    ``leq_pairs`` need only generate the order; reflexive-transitive closure
    is taken.
    """
    points = tuple(points)
    below = {x: {x} for x in points}
    for a, b in leq_pairs:
        below[b].add(a)
    changed = True
    while changed:
        changed = False
        for x in points:
            new = set().union(*(below[y] for y in below[x]))
            if new != below[x]:
                below[x] = new
                changed = True
    opens = set()
    for bits in product((0, 1), repeat=len(points)):
        s = {x for x, b in zip(points, bits) if b}
        if all(below[x] <= s for x in s):
            opens.add(frozenset(s))
    return validate_space(points, opens)


def one_point(label="x") -> FiniteSpace:
    return validate_space([label], [[], [label]])


def sierpinski() -> FiniteSpace:
    return validate_space(["a", "b"], [[], ["a"], ["a", "b"]])


def discrete(points: Sequence[Point]) -> FiniteSpace:
    points = list(points)
    opens = [s for k in range(len(points) + 1) for s in combinations(points, k)]
    return validate_space(points, opens)


def pseudocircle() -> FiniteSpace:
    """Four points, two open (a, b) and two closed (c, d); weakly a circle."""
    return validate_space(
        ["a", "b", "c", "d"],
        [[], ["a"], ["b"], ["a", "b"], ["a", "b", "c"], ["a", "b", "d"], ["a", "b", "c", "d"]],
    )


def all_t0_spaces(n: int, labels: Sequence[Point] | None = None) -> list[FiniteSpace]:
    """Every T0 topology on ``n`` labelled points (one per partial order)."""
    labels = list(labels) if labels is not None else [chr(ord("a") + i) for i in range(n)]
    pairs = [(a, b) for a in labels for b in labels if a != b]
    out = []
    for bits in product((0, 1), repeat=len(pairs)):
        rel = {p for p, b in zip(pairs, bits) if b}
        if any((b, a) in rel for a, b in rel):
            continue
        if any((a, d) not in rel for a, b in rel for c, d in rel if b == c and a != d):
            continue
        out.append(from_order(labels, rel))
    return out
