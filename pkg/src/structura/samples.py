"""Seeded random generators of spaces, presheaves, homomorphisms and algebras.

Used by the property tests and the demos; every function takes a
``random.Random`` so runs are reproducible.
"""
from __future__ import annotations

import random
from math import gcd

from .exactla import QQ, ExactFieldMatrix, FgAbGroup, GroupMap, PrimeField
from .finspace import FiniteSpace, from_order
from .hochschild import FiniteDimAlgebra
from .rings import product_ring, ring_homs, zmod
from .sheaf import (
    Presheaf,
    constant_presheaf,
    constant_sheaf,
    direct_sum_presheaf,
    rebundle,
    supported_presheaf,
)
from .strcat import (
    AB_GROUP,
    RING,
    Alignment,
    FamilyEntry,
    FormalIdentity,
    StructuredFamily,
    StructuredHom,
    opaque,
    vector_space,
)

SMALL_GROUPS = (FgAbGroup(1), FgAbGroup(0, (2,)), FgAbGroup(0, (3,)), FgAbGroup(0, (4,)), FgAbGroup(2))


def random_space(rng: random.Random, max_points: int = 5) -> FiniteSpace:
    """A random T0 space: the down-set topology of a random partial order."""
    n = rng.randint(1, max_points)
    labels = [chr(ord("a") + i) for i in range(n)]
    order = labels[:]
    rng.shuffle(order)
    density = rng.random()
    pairs = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density * 0.6]
    return from_order(labels, pairs)


def random_block_presheaf(rng: random.Random, space: FiniteSpace) -> Presheaf:
    """One of: constant presheaf, constant sheaf, or a group supported on an up/down-closed set of opens."""
    G = rng.choice(SMALL_GROUPS)
    kind = rng.randrange(4)
    if kind == 0:
        return constant_presheaf(space, G)
    if kind == 1:
        return constant_sheaf(space, G)
    opens = [u for u in space.opens if u]
    w = rng.choice(opens)
    if kind == 2:
        return supported_presheaf(space, G, [u for u in opens if u <= w])
    return supported_presheaf(space, G, [u for u in opens if w <= u], zero_restrictions=rng.random() < 0.5)


def random_group_presheaf(rng: random.Random, space: FiniteSpace, max_blocks: int = 2) -> Presheaf:
    blocks = [random_block_presheaf(rng, space) for _ in range(rng.randint(1, max_blocks))]
    return blocks[0] if len(blocks) == 1 else direct_sum_presheaf(blocks)


def random_structured_presheaf(rng: random.Random, max_points: int = 5, max_components: int = 3):
    """A partitionable family-valued presheaf and its components, all group-tagged."""
    space = random_space(rng, max_points)
    comps = [random_group_presheaf(rng, space) for _ in range(rng.randint(1, max_components))]
    return rebundle(comps), comps


# ----------------------------------------------------------- homomorphisms


def random_group_map(rng: random.Random, G, H, spread: int = 4) -> GroupMap:
    """A random homomorphism ``G -> H`` between sums of cyclic groups."""
    mat = []
    for e in H.orders:
        row = []
        for d in G.orders:
            if d == 0:
                row.append(rng.randint(-spread, spread))
            elif e == 0:
                row.append(0)
            else:
                step = e // gcd(d, e)
                row.append(step * rng.randint(0, d))
        mat.append(row)
    return GroupMap(G, H, mat)


F3 = PrimeField(3)
_RING_POOL = None


def _ring_pool():
    global _RING_POOL
    if _RING_POOL is None:
        _RING_POOL = (zmod(2), zmod(4), product_ring(zmod(2), zmod(2)))
    return _RING_POOL


def _random_carrier(rng: random.Random, tag, like=None):
    if tag.kind == "AbGroup":
        return rng.choice(SMALL_GROUPS)
    if tag.kind == "VectorSpace":
        return rng.randint(0, 3)
    if tag.kind == "Ring":
        return like
    return None


def random_family_shape(rng: random.Random, m: int) -> list:
    """Tags, plus the ring for Ring entries (one ring per shape, so any alignment has maps)."""
    shape = []
    ring = rng.choice(_ring_pool())
    for _ in range(m):
        k = rng.randrange(4)
        if k == 0:
            shape.append((RING, ring))
        elif k == 1:
            shape.append((vector_space(F3), None))
        elif k == 2:
            shape.append((opaque("unital magma"), None))
        else:
            shape.append((AB_GROUP, None))
    return shape


def random_family(rng: random.Random, shape: list) -> StructuredFamily:
    entries = [FamilyEntry(p, tag, _random_carrier(rng, tag, ring)) for p, (tag, ring) in enumerate(shape, start=1)]
    return StructuredFamily(tuple(entries))


def random_alignment(rng: random.Random, X: StructuredFamily, Y: StructuredFamily) -> Alignment:
    """A random tag-preserving bijection (assumes Y's tags are a permutation of X's)."""
    pairs = []
    free = list(Y.indices)
    rng.shuffle(free)
    for e in X.entries:
        q = next(q for q in free if Y[q].tag == e.tag)
        free.remove(q)
        pairs.append((e.p, q))
    return Alignment(tuple(pairs))


def random_component(rng: random.Random, src: FamilyEntry, tgt: FamilyEntry):
    kind = src.tag.kind
    if kind == "AbGroup":
        return random_group_map(rng, src.carrier, tgt.carrier)
    if kind == "VectorSpace":
        rows = [[rng.randrange(3) for _ in range(src.carrier)] for _ in range(tgt.carrier)]
        return ExactFieldMatrix(F3, rows, (tgt.carrier, src.carrier))
    if kind == "Ring":
        return rng.choice(ring_homs(src.carrier, tgt.carrier))
    return FormalIdentity()


def random_structured_hom(rng: random.Random, X: StructuredFamily, Y: StructuredFamily,
                          alignment: Alignment | None = None) -> StructuredHom:
    h = alignment or random_alignment(rng, X, Y)
    comps = {a: random_component(rng, X[a], Y[b]) for a, b in h.pairs}
    return StructuredHom(X, Y, h, comps)


def random_composable_triple(rng: random.Random, max_entries: int = 4):
    """Homs ``f: X -> Y``, ``g: Y -> Z``, ``h: Z -> W`` on permuted copies of one shape."""
    m = rng.randint(1, max_entries)
    shape = random_family_shape(rng, m)
    fams = []
    for _ in range(4):
        perm = shape[:]
        rng.shuffle(perm)
        fams.append(random_family(rng, perm))
    X, Y, Z, W = fams
    return (random_structured_hom(rng, X, Y), random_structured_hom(rng, Y, Z),
            random_structured_hom(rng, Z, W))


# ---------------------------------------------------------------- algebras


def _algebra_tables(field) -> list[tuple[list, list]]:
    """Structure constants and unit of small algebras, dimensions 1 to 3."""

    def blank(d):
        return [[[0] * d for _ in range(d)] for _ in range(d)]

    out = [([[[1]]], [1])]
    c = blank(2)
    c[0][0][0] = c[1][1][1] = 1
    out.append((c, [1, 1]))  # K x K
    c = blank(2)
    c[0][0][0] = c[0][1][1] = c[1][0][1] = 1
    out.append((c, [1, 0]))  # K[x]/x^2
    c = blank(3)
    for i in range(3):
        c[i][i][i] = 1
    out.append((c, [1, 1, 1]))  # K^3
    c = blank(3)
    for i in range(3):
        for j in range(3 - i):
            c[i][j][i + j] = 1
    out.append((c, [1, 0, 0]))  # K[x]/x^3
    c = blank(3)
    c[0][0][0] = 1
    c[1][1][1] = c[1][2][2] = c[2][1][2] = 1
    out.append((c, [1, 1, 0]))  # K x K[x]/x^2
    c = blank(3)
    c[0][0][0] = c[0][1][1] = c[1][2][1] = c[2][2][2] = 1
    out.append((c, [1, 0, 1]))  # upper-triangular 2x2
    c = blank(3)
    c[0][0][0] = c[0][1][1] = c[1][0][1] = c[0][2][2] = c[2][0][2] = 1
    out.append((c, [1, 0, 0]))  # K[x,y]/(x,y)^2
    return out


def _invert(field, P: list) -> list:
    n = len(P)
    M = [[field(v) for v in row] + [field(int(i == j)) for j in range(n)] for i, row in enumerate(P)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("singular")
        M[col], M[piv] = M[piv], M[col]
        inv = field.inv(M[col][col])
        M[col] = [field(v * inv) for v in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [field(a - f * b) for a, b in zip(M[r], M[col])]
    return [row[n:] for row in M]


def change_basis(A: FiniteDimAlgebra, P: list) -> FiniteDimAlgebra:
    """The same algebra in the basis ``f_i = sum_a P[i][a] e_a``."""
    K, d = A.field, A.dim
    Pinv = _invert(K, P)
    mul = []
    for i in range(d):
        row = []
        for j in range(d):
            prod = A.product([K(v) for v in P[i]], [K(v) for v in P[j]])
            row.append([K(sum(prod[k] * Pinv[k][l] for k in range(d))) for l in range(d)])
        mul.append(row)
    one = [K(sum(A.one[k] * Pinv[k][l] for k in range(d))) for l in range(d)]
    return FiniteDimAlgebra(K, mul, one)


def random_algebra(rng: random.Random, field=None) -> FiniteDimAlgebra:
    """A small known algebra presented in a random basis."""
    field = field or rng.choice([PrimeField(2), PrimeField(3), PrimeField(5), QQ])
    mul, one = rng.choice(_algebra_tables(field))
    A = FiniteDimAlgebra(field, mul, one)
    while True:
        q = getattr(field, "q", 7)
        P = [[rng.randrange(q) if q <= 7 else rng.randint(-3, 3) for _ in range(A.dim)] for _ in range(A.dim)]
        try:
            return change_basis(A, P)
        except ZeroDivisionError:
            continue
