"""Vector bundles over finite bases in the rank-function model, the monoid of
their isomorphism classes, Grothendieck completion, and K^0."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Hashable, Mapping, Sequence

from .errors import BaseMismatch, IndexMismatch, MonoidAxiomsFail, RankNotLocallyConstant, TooLarge
from .exactla import FgAbGroup, GroupMap, cokernel
from .finspace import FiniteSpace, connected_components
from .rings import max_elements


@dataclass(frozen=True)
class BundleModel:
    """Fibre dimensions ``ranks[x][p - 1]`` of a bundle split along ``m`` fixed neighbourhoods."""

    base: FiniteSpace
    field: str
    m: int
    ranks: tuple  # per point, in base point order: tuple of m ranks

    def rank(self, x, p: int) -> int:
        return self.ranks[self.base.index(x)][p - 1]

    @property
    def rank_matrix(self) -> tuple:
        """Ranks per connected component (rows) and index p (columns)."""
        return tuple(self.ranks[self.base.index(min(c, key=self.base.index))]
                     for c in connected_components(self.base))

    def __add__(self, other: "BundleModel") -> "BundleModel":
        return whitney_sum(self, other)


def validate_bundle(base: FiniteSpace, m: int, ranks: Mapping, field: str = "R") -> BundleModel:
    """Accept a rank assignment that is constant on each connected component, per ``p``."""
    rows = []
    for x in base.points:
        r = tuple(int(k) for k in ranks[x])
        if len(r) != m:
            raise IndexMismatch(f"point {x} has {len(r)} ranks, expected {m}")
        if any(k < 0 for k in r):
            raise ValueError(f"negative rank at {x}")
        rows.append(r)
    for comp in connected_components(base):
        pts = base.sort_points(comp)
        x0 = pts[0]
        for y in pts[1:]:
            for p in range(m):
                if rows[base.index(y)][p] != rows[base.index(x0)][p]:
                    raise RankNotLocallyConstant(
                        f"rank {rows[base.index(x0)][p]} at {x0} but {rows[base.index(y)][p]} at {y} for p={p + 1}"
                    )
    return BundleModel(base, field, m, tuple(rows))


def zero_bundle(base: FiniteSpace, m: int, field: str = "R") -> BundleModel:
    return BundleModel(base, field, m, tuple((0,) * m for _ in base.points))


def whitney_sum(E1: BundleModel, E2: BundleModel) -> BundleModel:
    """Fibrewise direct sum in every component: ranks add."""
    if E1.base != E2.base or E1.field != E2.field:
        raise BaseMismatch("bundles live over different bases or fields")
    if E1.m != E2.m:
        raise IndexMismatch(f"bundles have {E1.m} and {E2.m} fixed neighbourhoods")
    return BundleModel(E1.base, E1.field, E1.m,
                       tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(E1.ranks, E2.ranks)))


# ---------------------------------------------------------------- monoids


class AbelianMonoidPresentation:
    """A finite commutative monoid by operation table.

    ``table[a][b]`` may be ``None`` for a *window* onto a larger monoid
    (for instance ``{0..B}`` inside the naturals); laws are checked wherever
    all the sums involved are defined.
    """

    def __init__(self, labels: Sequence[Hashable], table: Sequence[Sequence], zero: int = 0):
        n = len(labels)
        if n > max_elements():
            raise TooLarge(f"monoid has {n} elements; the bound is {max_elements()}")
        self.labels = list(labels)
        self.table = [list(row) for row in table]
        self.zero = zero
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise MonoidAxiomsFail(f"operation table must be {n}x{n}")
        self.partial = any(v is None for row in self.table for v in row)
        self._check()

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def elements(self) -> range:
        return range(self.size)

    def add(self, a: int, b: int):
        return self.table[a][b]

    def _check(self):
        T, z, lab = self.table, self.zero, self.labels
        for a in self.elements:
            if T[z][a] != a or T[a][z] != a:
                raise MonoidAxiomsFail(f"{lab[z]} is not an identity for {lab[a]}")
            for b in self.elements:
                if T[a][b] is not None and not 0 <= T[a][b] < self.size:
                    raise MonoidAxiomsFail(f"{lab[a]} + {lab[b]} is not an element")
                if T[a][b] != T[b][a]:
                    raise MonoidAxiomsFail(f"{lab[a]} + {lab[b]} != {lab[b]} + {lab[a]}")
        for a, b, c in product(self.elements, repeat=3):
            ab, bc = T[a][b], T[b][c]
            if ab is None or bc is None:
                continue
            left, right = T[ab][c], T[a][bc]
            if left is not None and right is not None and left != right:
                raise MonoidAxiomsFail(f"({lab[a]} + {lab[b]}) + {lab[c]} != {lab[a]} + ({lab[b]} + {lab[c]})")


def naturals_window(bound: int) -> AbelianMonoidPresentation:
    """``{0, ..., bound}`` under addition, sums above the bound left undefined."""
    n = bound + 1
    return AbelianMonoidPresentation(list(range(n)),
                                     [[a + b if a + b <= bound else None for b in range(n)] for a in range(n)])


def rank_monoid_window(base: FiniteSpace, m: int, bound: int) -> tuple[AbelianMonoidPresentation, list]:
    """Rank matrices with entries at most ``bound`` under entrywise addition."""
    c = len(connected_components(base))
    mats = list(product(range(bound + 1), repeat=c * m))
    pos = {v: i for i, v in enumerate(mats)}

    def plus(u, v):
        s = tuple(a + b for a, b in zip(u, v))
        return pos.get(s)

    table = [[plus(u, v) for v in mats] for u in mats]
    return AbelianMonoidPresentation([str(v) for v in mats], table, pos[(0,) * (c * m)]), mats


@dataclass
class Completion:
    """The group completion with the canonical map ``element -> class``."""

    monoid: AbelianMonoidPresentation
    group: FgAbGroup
    images: list  # images[a] = canonical coordinates of the class of (a, 0)

    def class_of(self, a: int, b: int) -> tuple:
        """Canonical coordinates of the formal difference ``a - b``."""
        orders = self.group.orders
        return tuple((x - y) % d if d else x - y for x, y, d in zip(self.images[a], self.images[b], orders))

    def same_class(self, x: tuple, y: tuple) -> bool:
        return self.class_of(*x) == self.class_of(*y)

    @property
    def canonical_map(self) -> dict:
        return {self.monoid.labels[a]: tuple(v) for a, v in enumerate(self.images)}


def grothendieck_complete(M: AbelianMonoidPresentation) -> Completion:
    """Universal abelian group of ``M``: free on the elements modulo ``[a] + [b] = [a + b]`` and ``[0] = 0``.

    Its elements are the classes of pairs ``(a1, a2)`` standing for ``a1 - a2``,
    added componentwise.
    """
    n = M.size
    relations = [[int(i == M.zero) for i in range(n)]]
    for a in M.elements:
        for b in M.elements:
            s = M.add(a, b)
            if b < a or s is None:
                continue
            rel = [0] * n
            rel[a] += 1
            rel[b] += 1
            rel[s] -= 1
            relations.append(rel)
    free = FgAbGroup(n)
    f = GroupMap(FgAbGroup(len(relations)), free, [[r[i] for r in relations] for i in range(n)])
    Q = cokernel(f)
    images = [Q.coordinates([int(i == a) for i in range(n)]) for a in M.elements]
    return Completion(M, Q.group, images)


def pair_equivalent(M: AbelianMonoidPresentation, x: tuple, y: tuple) -> bool:
    """``(a1, a2) ~ (b1, b2)`` iff ``a1 + b2 + c = a2 + b1 + c`` for some ``c`` (where defined)."""
    (a1, a2), (b1, b2) = x, y

    def s(*xs):
        out = M.zero
        for v in xs:
            if out is None:
                return None
            out = M.add(out, v)
        return out

    for c in M.elements:
        lhs, rhs = s(a1, b2, c), s(a2, b1, c)
        if lhs is not None and lhs == rhs:
            return True
    return False


# ---------------------------------------------------------------------- K^0


@dataclass
class K0Result:
    group: FgAbGroup
    generators: list  # (component, p) labels of the free generators


def k0(base: FiniteSpace, m: int) -> K0Result:
    """Completion of the rank-matrix monoid ``N^(components x m)``: ``Z^(c m)``."""
    if m < 1:
        raise IndexMismatch("need at least one fixed neighbourhood")
    comps = connected_components(base)
    gens = [("{" + ",".join(map(str, base.sort_points(c))) + "}", p) for c in comps for p in range(1, m + 1)]
    return K0Result(FgAbGroup(len(gens)), gens)
