"""Finite commutative rings given by operation tables, and maps between them."""
from __future__ import annotations

import os
from functools import cached_property
from itertools import product
from typing import Hashable, Iterable, Sequence

from .errors import NotAHomomorphism, NotARing, ShapeMismatch, TooLarge

DEFAULT_MAX_ELEMENTS = 64


def max_elements() -> int:
    """Enumeration bound for rings and monoids (``STRUCTURA_MAX_ELEMENTS``)."""
    return int(os.environ.get("STRUCTURA_MAX_ELEMENTS", DEFAULT_MAX_ELEMENTS))


class FiniteRing:
    """A finite commutative ring with unit.

    Elements are referred to by index ``0..n-1``; ``labels`` are for display.
    The ring axioms are checked exhaustively at construction.
    """

    def __init__(self, labels: Sequence[Hashable], add, mul, zero: int = 0, one: int = 1,
                 allow_zero_ring: bool = False, check: bool = True):
        n = len(labels)
        if n > max_elements():
            raise TooLarge(f"ring has {n} elements; the bound is {max_elements()}")
        self.labels = tuple(labels)
        self.add = tuple(tuple(row) for row in add)
        self.mul = tuple(tuple(row) for row in mul)
        self.zero = zero
        self.one = one
        if check:
            self._check(allow_zero_ring)

    def _check(self, allow_zero_ring):
        n = self.size
        for name, t in (("addition", self.add), ("multiplication", self.mul)):
            if len(t) != n or any(len(r) != n for r in t) or any(not 0 <= v < n for r in t for v in r):
                raise NotARing(f"{name} table is not an {n}x{n} table of elements")
        if not 0 <= self.zero < n or not 0 <= self.one < n:
            raise NotARing("zero or one is not an element")
        if n == 1 and not allow_zero_ring:
            raise NotARing("zero ring not allowed here")
        if n > 1 and self.zero == self.one:
            raise NotARing("zero equals one")
        A, M = self.add, self.mul
        for a in range(n):
            if A[a][self.zero] != a:
                raise NotARing(f"{self.labels[a]} + 0 != {self.labels[a]}")
            if M[a][self.one] != a:
                raise NotARing(f"{self.labels[a]} * 1 != {self.labels[a]}")
            if not any(A[a][b] == self.zero for b in range(n)):
                raise NotARing(f"{self.labels[a]} has no additive inverse")
            for b in range(n):
                if A[a][b] != A[b][a]:
                    raise NotARing(f"addition not commutative at ({self.labels[a]}, {self.labels[b]})")
                if M[a][b] != M[b][a]:
                    raise NotARing(f"multiplication not commutative at ({self.labels[a]}, {self.labels[b]})")
        for a, b, c in product(range(n), repeat=3):
            if A[A[a][b]][c] != A[a][A[b][c]]:
                raise NotARing(f"addition not associative at {self._lab(a, b, c)}")
            if M[M[a][b]][c] != M[a][M[b][c]]:
                raise NotARing(f"multiplication not associative at {self._lab(a, b, c)}")
            if M[a][A[b][c]] != A[M[a][b]][M[a][c]]:
                raise NotARing(f"distributivity fails at {self._lab(a, b, c)}")

    def _lab(self, *xs):
        return "(" + ", ".join(str(self.labels[x]) for x in xs) + ")"

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self):
        return self.size

    @property
    def elements(self) -> range:
        return range(self.size)

    @cached_property
    def neg(self) -> tuple[int, ...]:
        return tuple(next(b for b in self.elements if self.add[a][b] == self.zero) for a in self.elements)

    def sub(self, a: int, b: int) -> int:
        return self.add[a][self.neg[b]]

    def element(self, label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ShapeMismatch(f"{label!r} is not an element") from None

    @cached_property
    def units(self) -> frozenset:
        return frozenset(a for a in self.elements if any(self.mul[a][b] == self.one for b in self.elements))

    def additive_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.zero:
            x = self.add[x][a]
            k += 1
        return k

    @cached_property
    def characteristic(self) -> int:
        return self.additive_order(self.one) if self.size > 1 else 1

    def __repr__(self):
        return f"FiniteRing({self.size} elements)"


def zmod(n: int) -> FiniteRing:
    if n < 1:
        raise ValueError("modulus must be positive")
    labels = [str(i) for i in range(n)]
    return FiniteRing(labels, [[(a + b) % n for b in range(n)] for a in range(n)],
                      [[(a * b) % n for b in range(n)] for a in range(n)], 0, 1 % n,
                      allow_zero_ring=(n == 1))


def product_ring(R: FiniteRing, S: FiniteRing) -> FiniteRing:
    pairs = [(a, b) for a in R.elements for b in S.elements]
    pos = {p: i for i, p in enumerate(pairs)}
    labels = [f"({R.labels[a]},{S.labels[b]})" for a, b in pairs]
    add = [[pos[(R.add[a][c], S.add[b][d])] for c, d in pairs] for a, b in pairs]
    mul = [[pos[(R.mul[a][c], S.mul[b][d])] for c, d in pairs] for a, b in pairs]
    return FiniteRing(labels, add, mul, pos[(R.zero, S.zero)], pos[(R.one, S.one)],
                      allow_zero_ring=True)


def zero_ring() -> FiniteRing:
    return FiniteRing(["0"], [[0]], [[0]], 0, 0, allow_zero_ring=True)


class RingMap:
    """A unital ring homomorphism, given by the image index of every element."""

    __slots__ = ("source", "target", "table")

    def __init__(self, source: FiniteRing, target: FiniteRing, table: Sequence[int], check: bool = True):
        if len(table) != source.size or any(not 0 <= t < target.size for t in table):
            raise ShapeMismatch("ring map table does not match source and target")
        self.source, self.target, self.table = source, target, tuple(table)
        if check:
            self._check()

    def _check(self):
        R, S, f = self.source, self.target, self.table
        if f[R.one] != S.one:
            raise NotAHomomorphism("unit is not preserved")
        for a, b in product(R.elements, repeat=2):
            if f[R.add[a][b]] != S.add[f[a]][f[b]]:
                raise NotAHomomorphism(f"addition not preserved at {R._lab(a, b)}")
            if f[R.mul[a][b]] != S.mul[f[a]][f[b]]:
                raise NotAHomomorphism(f"multiplication not preserved at {R._lab(a, b)}")

    @classmethod
    def identity(cls, R: FiniteRing) -> "RingMap":
        return cls(R, R, tuple(R.elements), check=False)

    @classmethod
    def to_zero(cls, R: FiniteRing, target: FiniteRing | None = None) -> "RingMap":
        target = target or zero_ring()
        return cls(R, target, (0,) * R.size, check=False)

    def __call__(self, a: int) -> int:
        return self.table[a]

    def __matmul__(self, other: "RingMap") -> "RingMap":
        if other.target is not self.source and other.target.size != self.source.size:
            raise ShapeMismatch("ring maps do not compose")
        return RingMap(other.source, self.target, tuple(self.table[t] for t in other.table), check=False)

    def is_bijective(self) -> bool:
        return self.source.size == self.target.size and len(set(self.table)) == self.source.size

    def __eq__(self, other):
        if not isinstance(other, RingMap):
            return NotImplemented
        return self.source.size == other.source.size and self.target.size == other.target.size \
            and self.table == other.table

    def __hash__(self):
        return hash(self.table)

    def __repr__(self):
        return f"RingMap({self.table})"


def ring_generators(R: FiniteRing) -> list[int]:
    """A small set of elements generating ``R`` as a ring (with the unit)."""
    gens: list[int] = []
    span = _closure(R, [])
    while len(span) < R.size:
        best = max((a for a in R.elements if a not in span), key=lambda a: len(_closure(R, gens + [a])))
        gens.append(best)
        span = _closure(R, gens)
    return gens


def _closure(R: FiniteRing, gens: Iterable[int]) -> set:
    seen = {R.zero, R.one, *gens}
    frontier = list(seen)
    while frontier:
        new = []
        for a in frontier:
            for b in list(seen):
                for c in (R.add[a][b], R.mul[a][b]):
                    if c not in seen:
                        seen.add(c)
                        new.append(c)
        frontier = new
    return seen


def _extend(R: FiniteRing, S: FiniteRing, assignment: dict) -> dict | None:
    """Extend a partial map on generators to their closure; None on conflict."""
    f = dict(assignment)
    frontier = list(f)
    while frontier:
        new = []
        for a in frontier:
            for b in list(f):
                for c, v in ((R.add[a][b], S.add[f[a]][f[b]]), (R.mul[a][b], S.mul[f[a]][f[b]])):
                    if c in f:
                        if f[c] != v:
                            return None
                    else:
                        f[c] = v
                        new.append(c)
        frontier = new
    return f


def ring_homs(R: FiniteRing, S: FiniteRing, bijective_only: bool = False) -> list[RingMap]:
    """All unital ring homomorphisms ``R -> S`` (isomorphisms if requested)."""
    if bijective_only and R.size != S.size:
        return []
    gens = ring_generators(R)
    out = []
    for images in product(S.elements, repeat=len(gens)):
        base = {R.zero: S.zero, R.one: S.one}
        ok = True
        for g, v in zip(gens, images):
            if g in base and base[g] != v:
                ok = False
            base[g] = v
        if not ok:
            continue
        f = _extend(R, S, base)
        if f is None or len(f) != R.size:
            continue
        table = tuple(f[a] for a in R.elements)
        try:
            m = RingMap(R, S, table)
        except NotAHomomorphism:
            continue
        if bijective_only and not m.is_bijective():
            continue
        if m not in out:
            out.append(m)
    return out


def ring_isomorphisms(R: FiniteRing, S: FiniteRing) -> list[RingMap]:
    if R.size != S.size or R.characteristic != S.characteristic or len(R.units) != len(S.units):
        return []
    return ring_homs(R, S, bijective_only=True)


def are_isomorphic(R: FiniteRing, S: FiniteRing) -> bool:
    if R.size != S.size or R.characteristic != S.characteristic or len(R.units) != len(S.units):
        return False
    return bool(ring_isomorphisms(R, S))


# ------------------------------------------------------------------ ideals


def ideal_closure(R: FiniteRing, gens: Iterable[int]) -> frozenset:
    """The ideal generated by ``gens``: close under addition and multiplication by R."""
    ideal = {R.zero, *gens}
    frontier = list(ideal)
    while frontier:
        new = []
        for a in frontier:
            for r in R.elements:
                c = R.mul[r][a]
                if c not in ideal:
                    ideal.add(c)
                    new.append(c)
            for b in list(ideal):
                c = R.add[a][b]
                if c not in ideal:
                    ideal.add(c)
                    new.append(c)
        frontier = new
    return frozenset(ideal)


def ideals(R: FiniteRing) -> list[frozenset]:
    """Every ideal of ``R``, smallest first."""
    found = {ideal_closure(R, [])}
    frontier = list(found)
    while frontier:
        new = []
        for I in frontier:
            for a in R.elements:
                if a not in I:
                    J = ideal_closure(R, I | {a})
                    if J not in found:
                        found.add(J)
                        new.append(J)
        frontier = new
    return sorted(found, key=lambda I: (len(I), sorted(I)))


def is_prime(R: FiniteRing, P: frozenset) -> bool:
    if len(P) == R.size:
        return False
    return all(a in P or b in P for a in R.elements for b in R.elements if R.mul[a][b] in P)


def prime_ideals(R: FiniteRing) -> list[frozenset]:
    return [I for I in ideals(R) if is_prime(R, I)]


def maximal_ideals(R: FiniteRing) -> list[frozenset]:
    proper = [I for I in ideals(R) if len(I) < R.size]
    return [I for I in proper if not any(I < J for J in proper)]


def is_local(R: FiniteRing) -> bool:
    return len(maximal_ideals(R)) == 1


def quotient_ring(R: FiniteRing, I: frozenset) -> tuple[FiniteRing, RingMap]:
    """``R/I`` with the projection map."""
    cosets: list[frozenset] = []
    which = {}
    for a in R.elements:
        if a in which:
            continue
        c = frozenset(R.add[a][i] for i in I)
        for b in c:
            which[b] = len(cosets)
        cosets.append(c)
    reps = [min(c) for c in cosets]
    n = len(cosets)
    add = [[which[R.add[reps[i]][reps[j]]] for j in range(n)] for i in range(n)]
    mul = [[which[R.mul[reps[i]][reps[j]]] for j in range(n)] for i in range(n)]
    labels = [R.labels[r] if len(I) == 1 else f"[{R.labels[r]}]" for r in reps]
    Q = FiniteRing(labels, add, mul, which[R.zero], which[R.one], allow_zero_ring=True)
    return Q, RingMap(R, Q, tuple(which[a] for a in R.elements), check=False)


def ideal_label(R: FiniteRing, I: frozenset) -> str:
    """Short name ``(g)`` or ``(g, h, ...)`` from the fewest generators found greedily."""
    for g in R.elements:
        if ideal_closure(R, [g]) == I:
            return f"({R.labels[g]})"
    gens: list[int] = []
    while ideal_closure(R, gens) != I:
        gens.append(next(a for a in sorted(I) if a not in ideal_closure(R, gens)))
    return "(" + ", ".join(str(R.labels[g]) for g in gens) + ")"


def describe_ring(R: FiniteRing) -> str:
    """``Z/n`` when the ring is cyclic, otherwise a size/characteristic summary."""
    if R.size == 1:
        return "0"
    if R.characteristic == R.size:
        return f"Z/{R.size}"
    return f"ring of order {R.size}, characteristic {R.characteristic}"
