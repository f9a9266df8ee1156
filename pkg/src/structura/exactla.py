"""Exact linear algebra over Z and over exact fields.

Integer matrices are plain lists of lists of Python ints (arbitrary
precision, so Smith-form intermediates cannot overflow).  Finitely generated
abelian groups are kept in invariant-factor form (:class:`FgAbGroup`) or, for
direct sums built along the way, as a plain list of cyclic orders
(:class:`DiagonalGroup`).  Homomorphisms between either are
:class:`GroupMap` values.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import (
    CompositionNotZero,
    NotAHomomorphism,
    NotDirected,
    NotFunctorial,
    ShapeMismatch,
)

Matrix = list  # list[list[int]]


def identity_matrix(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zero_matrix(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence], n: int | None = None) -> Matrix:
    """Product of an m x k and a k x n matrix.

    ``n`` is only needed when ``B`` has no rows (k = 0).
    """
    if n is None:
        n = len(B[0]) if B else 0
    k = len(B)
    return [[sum(row[t] * B[t][j] for t in range(k)) for j in range(n)] for row in A]


def matvec(A: Sequence[Sequence], x: Sequence) -> list:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def transpose(A: Sequence[Sequence], n: int | None = None) -> Matrix:
    if n is None:
        n = len(A[0]) if A else 0
    return [[A[i][j] for i in range(len(A))] for j in range(n)]


def _snf(A: Sequence[Sequence[int]], m: int, n: int):
    """Smith form with transforms: returns (U, Uinv, S, V), U A V = S."""
    S = [[int(x) for x in row] for row in A]
    U = identity_matrix(m)
    Ui = identity_matrix(m)
    V = identity_matrix(n)

    def row_add(i, j, k):  # row i += k * row j
        if k == 0:
            return
        S[i] = [a + k * b for a, b in zip(S[i], S[j])]
        U[i] = [a + k * b for a, b in zip(U[i], U[j])]
        for r in range(m):
            Ui[r][j] -= k * Ui[r][i]

    def row_swap(i, j):
        if i == j:
            return
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]
        for r in range(m):
            Ui[r][i], Ui[r][j] = Ui[r][j], Ui[r][i]

    def row_neg(i):
        S[i] = [-a for a in S[i]]
        U[i] = [-a for a in U[i]]
        for r in range(m):
            Ui[r][i] = -Ui[r][i]

    def col_add(i, j, k):  # col i += k * col j
        if k == 0:
            return
        for r in range(m):
            S[r][i] += k * S[r][j]
        for r in range(n):
            V[r][i] += k * V[r][j]

    def col_swap(i, j):
        if i == j:
            return
        for r in range(m):
            S[r][i], S[r][j] = S[r][j], S[r][i]
        for r in range(n):
            V[r][i], V[r][j] = V[r][j], V[r][i]

    for t in range(min(m, n)):
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if S[i][j] and (pivot is None or abs(S[i][j]) < abs(S[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        row_swap(t, pivot[0])
        col_swap(t, pivot[1])
        while True:
            p = S[t][t]
            moved = False
            for i in range(t + 1, m):
                if S[i][t]:
                    row_add(i, t, -(S[i][t] // p))
                    if S[i][t]:
                        row_swap(i, t)
                        moved = True
                        break
            if moved:
                continue
            for j in range(t + 1, n):
                if S[t][j]:
                    col_add(j, t, -(S[t][j] // p))
                    if S[t][j]:
                        col_swap(j, t)
                        moved = True
                        break
            if moved:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % p),
                None,
            )
            if bad is None:
                break
            row_add(t, bad, 1)
        if S[t][t] < 0:
            row_neg(t)
    return U, Ui, S, V


def smith_normal_form(A: Sequence[Sequence[int]], shape: tuple[int, int] | None = None):
    """Smith normal form of an integer matrix.

    Returns ``(U, S, V)`` with ``U @ A @ V == S``, ``U`` and ``V`` unimodular and
    ``S`` diagonal with nonnegative entries ``s_1 | s_2 | ...``.  Pass ``shape``
    when ``A`` may be empty in a dimension.
    """
    m, n = shape if shape is not None else (len(A), len(A[0]) if A else 0)
    U, _, S, V = _snf(A, m, n)
    return U, S, V


def invariant_factors(A: Sequence[Sequence[int]], shape: tuple[int, int] | None = None) -> list[int]:
    m, n = shape if shape is not None else (len(A), len(A[0]) if A else 0)
    _, _, S, _ = _snf(A, m, n)
    return [S[i][i] for i in range(min(m, n))]


@dataclass(frozen=True)
class FgAbGroup:
    """``Z^rank (+) Z/d_1 (+) ... (+) Z/d_k`` with ``d_1 | d_2 | ... | d_k``.

    Generators are ordered free-first.  Two groups are isomorphic iff they
    compare equal.
    """

    rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"invariant factor {d} not allowed (fold 0 into rank, drop 1)")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")

    @classmethod
    def from_orders(cls, orders: Iterable[int]) -> "FgAbGroup":
        """Canonical form of a direct sum of cyclic groups (0 meaning Z)."""
        orders = [abs(int(d)) for d in orders]
        k = len(orders)
        diag = [[orders[i] if i == j else 0 for j in range(k)] for i in range(k)]
        return cls.from_factors(invariant_factors(diag, (k, k)))

    @classmethod
    def from_factors(cls, factors: Iterable[int]) -> "FgAbGroup":
        factors = list(factors)
        return cls(sum(1 for d in factors if d == 0), tuple(sorted(d for d in factors if d > 1)))

    @property
    def orders(self) -> tuple[int, ...]:
        return (0,) * self.rank + self.torsion

    @property
    def ngens(self) -> int:
        return self.rank + len(self.torsion)

    def is_trivial(self) -> bool:
        return self.ngens == 0

    def canonical(self) -> "FgAbGroup":
        return self

    def __str__(self):
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " (+) ".join(parts) if parts else "0"


ZERO = FgAbGroup()
Z = FgAbGroup(1)


def cyclic(d: int) -> FgAbGroup:
    return FgAbGroup.from_orders([d])


def free(r: int) -> FgAbGroup:
    return FgAbGroup(r)


@dataclass(frozen=True)
class DiagonalGroup:
    """A direct sum of cyclic groups in a fixed generator order.

    Used for direct sums (cochain groups, families of sections) where the
    generator order must follow the summands rather than the invariant
    factors.  ``orders[i] == 0`` marks a free generator.
    """

    orders: tuple[int, ...] = ()

    def __post_init__(self):
        orders = tuple(abs(int(d)) for d in self.orders)
        if any(d == 1 for d in orders):
            raise ValueError("order 1 generators are not stored")
        object.__setattr__(self, "orders", orders)

    @property
    def ngens(self) -> int:
        return len(self.orders)

    def canonical(self) -> FgAbGroup:
        return FgAbGroup.from_orders(self.orders)

    def is_trivial(self) -> bool:
        return not self.orders

    def __str__(self):
        return " (+) ".join("Z" if d == 0 else f"Z/{d}" for d in self.orders) or "0"


def direct_sum(groups: Iterable) -> DiagonalGroup:
    return DiagonalGroup(tuple(d for g in groups for d in g.orders))


def _reduce(x: int, order: int) -> int:
    return x % order if order else x


class GroupMap:
    """A homomorphism given by an integer matrix (target gens x source gens).

    Entries are reduced modulo the target orders, so two maps are equal iff
    their matrices are.  Construction checks that the relations of the source
    are respected.
    """

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source, target, matrix: Sequence[Sequence[int]], check: bool = True):
        m, n = target.ngens, source.ngens
        if len(matrix) != m or any(len(row) != n for row in matrix):
            raise ShapeMismatch(f"matrix must be {m}x{n} for {source} -> {target}")
        tord = target.orders
        mat = tuple(tuple(_reduce(int(a), tord[i]) for a in row) for i, row in enumerate(matrix))
        if check:
            for j, d in enumerate(source.orders):
                if d == 0:
                    continue
                for i, e in enumerate(tord):
                    if _reduce(d * mat[i][j], e):
                        raise NotAHomomorphism(
                            f"generator {j} of order {d} maps to an element of infinite or "
                            f"incompatible order (row {i})"
                        )
        self.source = source
        self.target = target
        self.matrix = mat

    @classmethod
    def identity(cls, group) -> "GroupMap":
        return cls(group, group, identity_matrix(group.ngens), check=False)

    @classmethod
    def zero(cls, source, target) -> "GroupMap":
        return cls(source, target, zero_matrix(target.ngens, source.ngens), check=False)

    @classmethod
    def scalar(cls, group, k: int) -> "GroupMap":
        n = group.ngens
        return cls(group, group, [[k if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.target.ngens, self.source.ngens)

    def __call__(self, x: Sequence[int]) -> tuple[int, ...]:
        if len(x) != self.source.ngens:
            raise ShapeMismatch("vector length does not match the source")
        return tuple(_reduce(v, e) for v, e in zip(matvec(self.matrix, x), self.target.orders))

    def __matmul__(self, other: "GroupMap") -> "GroupMap":
        """``self @ other`` is ``self`` after ``other``."""
        if other.target.orders != self.source.orders:
            raise ShapeMismatch(f"cannot compose {other.source}->{other.target} with {self.source}->{self.target}")
        return GroupMap(other.source, self.target, matmul(self.matrix, other.matrix, other.source.ngens), check=False)

    def _check_parallel(self, other):
        if self.source.orders != other.source.orders or self.target.orders != other.target.orders:
            raise ShapeMismatch("maps are not parallel")

    def __add__(self, other: "GroupMap") -> "GroupMap":
        self._check_parallel(other)
        mat = [[a + b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)]
        return GroupMap(self.source, self.target, mat, check=False)

    def __neg__(self) -> "GroupMap":
        return self.scaled(-1)

    def __sub__(self, other: "GroupMap") -> "GroupMap":
        return self + (-other)

    def scaled(self, k: int) -> "GroupMap":
        return GroupMap(self.source, self.target, [[k * a for a in row] for row in self.matrix], check=False)

    def is_zero(self) -> bool:
        return all(a == 0 for row in self.matrix for a in row)

    def __eq__(self, other):
        if not isinstance(other, GroupMap):
            return NotImplemented
        return (
            self.source.orders == other.source.orders
            and self.target.orders == other.target.orders
            and self.matrix == other.matrix
        )

    def __hash__(self):
        return hash((self.source.orders, self.target.orders, self.matrix))

    def __repr__(self):
        return f"GroupMap({self.source} -> {self.target}, {[list(r) for r in self.matrix]})"


def block_map(sources: Sequence, targets: Sequence, blocks: Mapping[tuple[int, int], GroupMap]) -> GroupMap:
    """Map between direct sums; ``blocks[(i, j)]`` goes from source j to target i."""
    src = direct_sum(sources)
    tgt = direct_sum(targets)
    mat = zero_matrix(tgt.ngens, src.ngens)
    roff = [0]
    for g in targets:
        roff.append(roff[-1] + g.ngens)
    coff = [0]
    for g in sources:
        coff.append(coff[-1] + g.ngens)
    for (i, j), f in blocks.items():
        if f.source.orders != sources[j].orders or f.target.orders != targets[i].orders:
            raise ShapeMismatch(f"block ({i}, {j}) has the wrong source or target")
        for a, row in enumerate(f.matrix):
            for b, v in enumerate(row):
                mat[roff[i] + a][coff[j] + b] += v
    return GroupMap(src, tgt, mat, check=False)


class Subquotient:
    """``ker(g) / im(f)`` with explicit generators.

    ``group`` is the canonical form; ``representatives[k]`` is a cycle (in the
    middle group's coordinates) mapping to the k-th canonical generator, and
    :meth:`coordinates` sends a cycle to its class in canonical coordinates.
    """

    def __init__(self, g: GroupMap, f: GroupMap):
        if f.target.orders != g.source.orders:
            raise ShapeMismatch(f"f lands in {f.target} but g starts at {g.source}")
        if not (g @ f).is_zero():
            raise CompositionNotZero("g after f is not the zero map")
        middle = g.source
        n = middle.ngens
        self.middle = middle

        # L = {x in Z^n : g x lies in the relation lattice of the target}
        t_rel = [e for e in g.target.orders]
        t_cols = [i for i, e in enumerate(t_rel) if e]
        t = g.target.ngens
        wide = [list(g.matrix[i]) + [-t_rel[i] if i == c else 0 for c in t_cols] for i in range(t)]
        wn = n + len(t_cols)
        _, _, S, V = _snf(wide, t, wn)
        r = sum(1 for i in range(min(t, wn)) if S[i][i])
        kernel_gens = [[V[row][col] for col in range(r, wn)] for row in range(n)]
        kcols = wn - r

        Uk, Uki, Sk, _ = _snf(kernel_gens, n, kcols)
        rk = sum(1 for i in range(min(n, kcols)) if Sk[i][i])
        self._Uk = Uk
        self._sk = [Sk[i][i] for i in range(rk)]
        self._basis = [[Uki[row][i] * self._sk[i] for i in range(rk)] for row in range(n)]
        self._rk = rk

        rels = [list(col) for col in transpose(f.matrix, f.source.ngens)]
        rels += [[d if i == j else 0 for i in range(n)] for j, d in enumerate(middle.orders) if d]
        Q = transpose([self._lattice_coords(v) for v in rels], rk) if rels else [[] for _ in range(rk)]
        Uq, Uqi, Sq, _ = _snf(Q, rk, len(rels))
        diag = [Sq[i][i] if i < len(rels) else 0 for i in range(rk)]
        self._Uq = Uq
        self._free_idx = [i for i, d in enumerate(diag) if d == 0]
        self._tors_idx = [i for i, d in enumerate(diag) if d > 1]
        self._tors = [diag[i] for i in self._tors_idx]
        self.group = FgAbGroup(len(self._free_idx), tuple(self._tors))
        self.representatives = []
        for i in self._free_idx + self._tors_idx:
            c = [Uqi[row][i] for row in range(rk)]
            x = matvec(self._basis, c)
            self.representatives.append(tuple(_reduce(v, d) for v, d in zip(x, middle.orders)))

    def _lattice_coords(self, x: Sequence[int]) -> list[int]:
        y = matvec(self._Uk, x)
        if any(y[i] for i in range(self._rk, len(y))):
            raise ValueError("vector is not a cycle")
        out = []
        for i in range(self._rk):
            q, rem = divmod(y[i], self._sk[i])
            if rem:
                raise ValueError("vector is not a cycle")
            out.append(q)
        return out

    def coordinates(self, x: Sequence[int]) -> tuple[int, ...]:
        """Class of the cycle ``x`` in canonical generator coordinates."""
        y = matvec(self._Uq, self._lattice_coords(x))
        return tuple(y[i] for i in self._free_idx) + tuple(
            y[i] % d for i, d in zip(self._tors_idx, self._tors)
        )

    def is_cycle(self, x: Sequence[int]) -> bool:
        try:
            self._lattice_coords(x)
        except ValueError:
            return False
        return True

    def induced_map(self, other: "Subquotient", chain_map: GroupMap) -> GroupMap:
        """Map ``self.group -> other.group`` induced by a map of middle groups."""
        cols = [other.coordinates(chain_map(rep)) for rep in self.representatives]
        mat = transpose(cols, other.group.ngens) if cols else zero_matrix(other.group.ngens, 0)
        return GroupMap(self.group, other.group, mat)


def subquotient(g: GroupMap, f: GroupMap) -> FgAbGroup:
    """Canonical form of ``ker(g) / im(f)``."""
    return Subquotient(g, f).group


def kernel(g: GroupMap) -> Subquotient:
    return Subquotient(g, GroupMap.zero(ZERO, g.source))


def cokernel(f: GroupMap) -> Subquotient:
    return Subquotient(GroupMap.zero(f.target, ZERO), f)


def is_isomorphism(g: GroupMap) -> bool:
    return kernel(g).group.is_trivial() and cokernel(g).group.is_trivial()


def direct_limit(objects: Mapping, maps: Mapping[tuple, GroupMap]):
    """Colimit of a diagram of groups over a finite directed preorder.

    ``objects`` maps index -> group; ``maps[(i, j)]`` is the structure map
    ``objects[i] -> objects[j]`` for ``i <= j``.  The preorder is the reflexive
    closure of the keys of ``maps``; it must be transitive (the composite map
    must be supplied), directed, and the maps functorial.

    Returns ``(group, insertions)`` with ``insertions[i]: objects[i] -> group``.
    """
    idx = list(objects)
    for (i, j), f in maps.items():
        if i not in objects or j not in objects:
            raise NotFunctorial(f"map ({i!r}, {j!r}) refers to an unknown object")
        if f.source.orders != objects[i].orders or f.target.orders != objects[j].orders:
            raise ShapeMismatch(f"map ({i!r}, {j!r}) has the wrong source or target")
        if i == j and f != GroupMap.identity(objects[i]):
            raise NotFunctorial(f"map ({i!r}, {i!r}) is not the identity")

    def arrow(i, j):
        if (i, j) in maps:
            return maps[(i, j)]
        if i == j:
            return GroupMap.identity(objects[i])
        return None

    for (i, j), f in maps.items():
        for k in idx:
            g = maps.get((j, k))
            if g is None or j == k or i == j:
                continue
            h = arrow(i, k)
            if h is None:
                raise NotFunctorial(f"no map for the composite pair ({i!r}, {k!r}) via {j!r}")
            if g @ f != h:
                raise NotFunctorial(f"maps are not functorial on the triple ({i!r}, {j!r}, {k!r})")
    for a in idx:
        for b in idx:
            if not any(arrow(a, k) is not None and arrow(b, k) is not None for k in idx):
                raise NotDirected(f"objects {a!r} and {b!r} have no common upper bound")

    offsets = {}
    total = 0
    for i in idx:
        offsets[i] = total
        total += objects[i].ngens
    big = direct_sum(objects[i] for i in idx)
    rels = []
    for (i, j), f in maps.items():
        if i == j:
            continue
        for e in range(objects[i].ngens):
            v = [0] * total
            v[offsets[i] + e] += 1
            for a, row in enumerate(f.matrix):
                v[offsets[j] + a] -= row[e]
            rels.append(v)
    rel_map = GroupMap(FgAbGroup(len(rels)), big, transpose(rels, total) if rels else zero_matrix(total, 0))
    quot = cokernel(rel_map)
    insertions = {}
    for i in idx:
        cols = []
        for e in range(objects[i].ngens):
            v = [0] * total
            v[offsets[i] + e] = 1
            cols.append(quot.coordinates(v))
        mat = transpose(cols, quot.group.ngens) if cols else zero_matrix(quot.group.ngens, 0)
        insertions[i] = GroupMap(objects[i], quot.group, mat)
    return quot.group, insertions


# ---------------------------------------------------------------- exact fields


@dataclass(frozen=True)
class PrimeField:
    q: int

    def __post_init__(self):
        if self.q < 2 or any(self.q % p == 0 for p in range(2, int(self.q**0.5) + 1)):
            raise ValueError(f"{self.q} is not prime")

    def __call__(self, x) -> int:
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.q) % self.q
        return int(x) % self.q

    def inv(self, x: int) -> int:
        return pow(x, -1, self.q)

    @property
    def characteristic(self) -> int:
        return self.q

    def __str__(self):
        return f"F_{self.q}"


@dataclass(frozen=True)
class Rationals:
    def __call__(self, x) -> Fraction:
        return Fraction(x)

    def inv(self, x: Fraction) -> Fraction:
        return 1 / x

    @property
    def characteristic(self) -> int:
        return 0

    def __str__(self):
        return "Q"


QQ = Rationals()


class ExactFieldMatrix:
    """A matrix over a prime field or the rationals with exact entries."""

    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field, rows: Sequence[Sequence], shape: tuple[int, int] | None = None):
        nrows, ncols = shape if shape is not None else (len(rows), len(rows[0]) if rows else 0)
        if len(rows) != nrows or any(len(r) != ncols for r in rows):
            raise ShapeMismatch(f"expected a {nrows}x{ncols} matrix")
        self.field = field
        self.rows = tuple(tuple(field(a) for a in r) for r in rows)
        self.nrows = nrows
        self.ncols = ncols

    @classmethod
    def zero(cls, field, nrows: int, ncols: int) -> "ExactFieldMatrix":
        return cls(field, zero_matrix(nrows, ncols), (nrows, ncols))

    @classmethod
    def identity(cls, field, n: int) -> "ExactFieldMatrix":
        return cls(field, identity_matrix(n), (n, n))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __matmul__(self, other: "ExactFieldMatrix") -> "ExactFieldMatrix":
        if self.ncols != other.nrows or self.field != other.field:
            raise ShapeMismatch(f"cannot multiply {self.shape} by {other.shape}")
        return ExactFieldMatrix(self.field, matmul(self.rows, other.rows, other.ncols), (self.nrows, other.ncols))

    def __add__(self, other):
        if self.shape != other.shape:
            raise ShapeMismatch("shapes differ")
        return ExactFieldMatrix(self.field, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.shape)

    def scaled(self, k) -> "ExactFieldMatrix":
        return ExactFieldMatrix(self.field, [[k * a for a in r] for r in self.rows], self.shape)

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def rank(self) -> int:
        F = self.field
        M = [list(r) for r in self.rows]
        rank = 0
        for col in range(self.ncols):
            piv = next((i for i in range(rank, self.nrows) if M[i][col] != 0), None)
            if piv is None:
                continue
            M[rank], M[piv] = M[piv], M[rank]
            inv = F.inv(M[rank][col])
            M[rank] = [F(a * inv) for a in M[rank]]
            for i in range(self.nrows):
                if i != rank and M[i][col] != 0:
                    c = M[i][col]
                    M[i] = [F(a - c * b) for a, b in zip(M[i], M[rank])]
            rank += 1
        return rank

    def __eq__(self, other):
        if not isinstance(other, ExactFieldMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.rows == other.rows

    def __repr__(self):
        return f"ExactFieldMatrix({self.field}, {self.shape})"


def field_cohomology(d_out: ExactFieldMatrix, d_in: ExactFieldMatrix) -> int:
    """``dim ker(d_out) - rank(d_in)`` for ``V --d_in--> W --d_out--> X``."""
    if d_out.ncols != d_in.nrows or d_out.field != d_in.field:
        raise ShapeMismatch(f"d_in {d_in.shape} does not compose with d_out {d_out.shape}")
    if not (d_out @ d_in).is_zero():
        raise CompositionNotZero("d_out after d_in is not zero")
    return d_out.ncols - d_out.rank() - d_in.rank()


def enumerate_group(group) -> list[tuple[int, ...]]:
    """All elements of a finite group as reduced coordinate vectors."""
    if any(d == 0 for d in group.orders):
        raise ValueError("group is infinite")
    return list(product(*(range(d) for d in group.orders)))
