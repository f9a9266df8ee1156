"""Hochschild cochain complexes of finite-dimensional algebras, and the
structured Hochschild table of a structural ringed space."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .complex import TRIVIAL, ComplexGrid, FieldCochainComplex, grid_cohomologies, total_cohomology
from .errors import (
    DegreeTooLarge,
    MixedCharacteristic,
    NotAssociative,
    OptionConflict,
    SectionRingNotAlgebra,
    ShapeMismatch,
)
from .exactla import ExactFieldMatrix, PrimeField, zero_matrix
from .finspace import FiniteSpace
from .rings import FiniteRing
from .sheaf import Presheaf, sheafify_with_unit

DEFAULT_MAX_DEGREE = 3


class FiniteDimAlgebra:
    """A unital associative algebra given by structure constants.

    ``mul[i][j][k]`` is the coefficient of ``e_k`` in ``e_i * e_j``.
    """

    def __init__(self, field, mul: Sequence, one: Sequence):
        d = len(mul)
        if d < 1:
            raise ShapeMismatch("an algebra needs positive dimension")
        if any(len(row) != d or any(len(v) != d for v in row) for row in mul) or len(one) != d:
            raise ShapeMismatch(f"structure constants must be {d}x{d}x{d} with a length-{d} unit")
        self.field = field
        self.dim = d
        self.mul = [[[field(c) for c in v] for v in row] for row in mul]
        self.one = [field(c) for c in one]
        self._check()

    def product(self, x: Sequence, y: Sequence) -> list:
        d, c = self.dim, self.mul
        out = [self.field(0)] * d
        for i in range(d):
            if not x[i]:
                continue
            for j in range(d):
                if not y[j]:
                    continue
                s = x[i] * y[j]
                for k in range(d):
                    if c[i][j][k]:
                        out[k] = self.field(out[k] + s * c[i][j][k])
        return out

    def basis(self, i: int) -> list:
        return [self.field(int(i == k)) for k in range(self.dim)]

    def _check(self):
        d = self.dim
        E = [self.basis(i) for i in range(d)]
        for i, j, k in product(range(d), repeat=3):
            if self.product(self.product(E[i], E[j]), E[k]) != self.product(E[i], self.product(E[j], E[k])):
                raise NotAssociative(f"(e{i} e{j}) e{k} != e{i} (e{j} e{k})")
        for i in range(d):
            if self.product(self.one, E[i]) != E[i] or self.product(E[i], self.one) != E[i]:
                raise NotAssociative(f"the unit vector is not a two-sided unit on e{i}")

    @property
    def is_commutative(self) -> bool:
        return all(self.mul[i][j] == self.mul[j][i] for i in range(self.dim) for j in range(self.dim))

    def __repr__(self):
        return f"FiniteDimAlgebra({self.field}, dim={self.dim})"


def hochschild_differential(A: FiniteDimAlgebra, n: int) -> ExactFieldMatrix:
    """``C^n -> C^{n+1}`` with ``C^n = Hom(A^{(x)n}, A)``.

    Coordinates: ``(input basis tuple, output basis index)`` with the tuple
    most significant, lexicographic.
    """
    d, c, K = A.dim, A.mul, A.field
    cols = d ** (n + 1)
    rows = d ** (n + 2)
    mat = zero_matrix(rows, cols)

    def col(I, k):
        idx = 0
        for i in I:
            idx = idx * d + i
        return idx * d + k

    for r, J in enumerate(product(range(d), repeat=n + 1)):
        for kk in range(d):
            row = mat[r * d + kk]
            tail, head = J[1:], J[:-1]
            for k in range(d):
                # a_1 f(a_2, ..., a_{n+1})
                if c[J[0]][k][kk]:
                    row[col(tail, k)] += c[J[0]][k][kk]
                # (-1)^{n+1} f(a_1, ..., a_n) a_{n+1}
                if c[k][J[-1]][kk]:
                    row[col(head, k)] += (-1) ** (n + 1) * c[k][J[-1]][kk]
            # (-1)^i f(..., a_i a_{i+1}, ...)
            for i in range(1, n + 1):
                a, b = J[i - 1], J[i]
                for l in range(d):
                    if c[a][b][l]:
                        I = J[:i - 1] + (l,) + J[i + 1:]
                        row[col(I, kk)] += (-1) ** i * c[a][b][l]
    return ExactFieldMatrix(K, [[K(v) for v in row] for row in mat], (rows, cols))


def hochschild_complex(A: FiniteDimAlgebra, max_degree: int, bound: int = DEFAULT_MAX_DEGREE) -> FieldCochainComplex:
    """Cochains in degrees ``0..max_degree+1`` so that ``HH^max_degree`` is defined."""
    if max_degree > bound:
        raise DegreeTooLarge(f"degree {max_degree} exceeds the bound {bound}")
    dims = [A.dim ** (n + 1) for n in range(max_degree + 2)]
    return FieldCochainComplex(A.field, dims, [hochschild_differential(A, n) for n in range(max_degree + 1)])


def hochschild_cohomology(A: FiniteDimAlgebra, max_degree: int, bound: int = DEFAULT_MAX_DEGREE) -> list[int]:
    return hochschild_complex(A, max_degree, bound).cohomologies(max_degree)


# ----------------------------------------------------- rings as algebras


def algebra_from_ring(R: FiniteRing) -> FiniteDimAlgebra:
    """View a finite ring of prime characteristic q as an algebra over F_q."""
    q = R.characteristic
    if R.size == 1 or any(q % p == 0 for p in range(2, int(q ** 0.5) + 1)):
        raise SectionRingNotAlgebra(f"characteristic {q} is not prime")
    K = PrimeField(q)

    def scale(k, a):
        out = R.zero
        for _ in range(k):
            out = R.add[out][a]
        return out

    basis: list[int] = []
    coords = {R.zero: ()}
    for a in R.elements:
        if a in coords:
            continue
        basis.append(a)
        grown = {}
        for x, v in coords.items():
            for k in range(q):
                grown[R.add[x][scale(k, a)]] = v + (k,)
        coords = grown
    dim = len(basis)
    full = {x: list(v) + [0] * (dim - len(v)) for x, v in coords.items()}
    mul = [[full[R.mul[a][b]] for b in basis] for a in basis]
    return FiniteDimAlgebra(K, mul, full[R.one])


# ------------------------------------------------------ structured table


@dataclass
class HochschildResult:
    assembly: str
    table: object
    rows: list  # per-component HH dimensions
    union_rows: list | None = None
    grid: ComplexGrid | None = None
    algebras: list = field(default_factory=list)


def section_algebras(F: Presheaf) -> list[FiniteDimAlgebra]:
    """Global sections of each sheafified component, as algebras over one prime field."""
    from .ringspec import _components

    rings = [sheafify_with_unit(c)[0].values[F.space.full] for c in _components(F)]
    algebras = [algebra_from_ring(R) for R in rings]
    chars = {A.field.q for A in algebras}
    if len(chars) > 1:
        raise MixedCharacteristic(f"section rings have characteristics {sorted(chars)}")
    return algebras


def structured_hochschild(
    space: FiniteSpace,
    F: Presheaf,
    verticals=TRIVIAL,
    assembly: str = "total",
    max_degree: int = 2,
    commuting: bool = False,
    check_union: bool = True,
) -> HochschildResult:
    """Per-component Hochschild rows assembled into a grid.

    With ``check_union`` the rows are recomputed through the disjoint union
    of the component ringed spaces and compared.
    """
    if assembly not in ("rows", "hpq", "total"):
        raise OptionConflict(f"unknown assembly {assembly!r}")
    algebras = section_algebras(F)
    rows = [hochschild_complex(A, max_degree) for A in algebras]
    row_dims = [r.cohomologies(max_degree) for r in rows]
    union_rows = None
    if check_union:
        from .ringspec import disjoint_union_assembly

        union = disjoint_union_assembly(space, F)
        union_rows = []
        for p in range(1, union.m + 1):
            comp = union.component(p)
            A = algebra_from_ring(comp.sheaf.values[comp.space.full])
            union_rows.append(hochschild_cohomology(A, max_degree))
        if union_rows != row_dims:
            raise AssertionError("disjoint-union rows differ from the decomposed rows")
    grid = ComplexGrid(rows, verticals, commuting)
    if assembly == "rows":
        table = row_dims
    elif assembly == "hpq":
        table = {k: v for k, v in grid_cohomologies(grid).items() if k[1] <= max_degree}
    else:
        table = total_cohomology(grid, max_degree)
    return HochschildResult(assembly, table, row_dims, union_rows, grid, algebras)
