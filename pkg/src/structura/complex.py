"""Cochain complexes, grids of complexes, and total complexes.

Two coefficient flavours share the same grid code: integer complexes of
finitely generated abelian groups (:class:`CochainComplex`) and complexes of
finite-dimensional vector spaces over an exact field
(:class:`FieldCochainComplex`).

Sign convention: a grid's vertical maps must anticommute with the
horizontal ones, and the total differential is ``D = d_h + d_v``.  A family
whose squares commute can be passed with ``commuting=True``; it is then
twisted to ``(-1)^column * d_v`` on the way in.
"""
from __future__ import annotations

from typing import Sequence

from .errors import (
    AnticommutationFails,
    CompositionNotZero,
    RowNotAComplex,
    ShapeMismatch,
    TruncationExceeded,
    VerticalShapeMismatch,
)
from .exactla import (
    ZERO,
    ExactFieldMatrix,
    FgAbGroup,
    GroupMap,
    Subquotient,
    block_map,
    direct_sum,
    field_cohomology,
    zero_matrix,
)


class TrivialFamily:
    """All vertical maps zero."""

    def __repr__(self):
        return "TRIVIAL"


TRIVIAL = TrivialFamily()


class CochainComplex:
    """``C^0 -> C^1 -> ... -> C^N`` of abelian groups; d^{n+1} d^n = 0 is checked."""

    def __init__(self, groups: Sequence, differentials: Sequence[GroupMap]):
        groups = list(groups)
        differentials = list(differentials)
        if len(differentials) != max(len(groups) - 1, 0):
            raise ShapeMismatch(f"{len(groups)} groups need {max(len(groups) - 1, 0)} differentials")
        for n, d in enumerate(differentials):
            if d.source.orders != groups[n].orders or d.target.orders != groups[n + 1].orders:
                raise ShapeMismatch(f"differential {n} has the wrong source or target")
        for n in range(len(differentials) - 1):
            if not (differentials[n + 1] @ differentials[n]).is_zero():
                raise CompositionNotZero(f"d^{n + 1} d^{n} != 0")
        self.groups = groups
        self.differentials = differentials
        self._homology: dict = {}

    def __len__(self):
        return len(self.groups)

    def obj(self, n: int):
        return self.groups[n] if 0 <= n < len(self.groups) else ZERO

    def d(self, n: int) -> GroupMap:
        """``d^n: C^n -> C^{n+1}``; zero outside the stored range."""
        if 0 <= n < len(self.differentials):
            return self.differentials[n]
        return GroupMap.zero(self.obj(n), self.obj(n + 1))

    def homology(self, n: int) -> Subquotient:
        if n not in self._homology:
            self._homology[n] = Subquotient(self.d(n), self.d(n - 1))
        return self._homology[n]

    def cohomology(self, n: int) -> FgAbGroup:
        return self.homology(n).group

    def cohomologies(self, upto: int | None = None) -> list[FgAbGroup]:
        upto = len(self.groups) - 1 if upto is None else upto
        return [self.cohomology(n) for n in range(upto + 1)]

    # grid backend
    @staticmethod
    def _zero(a, b):
        return GroupMap.zero(a, b)

    @staticmethod
    def _sum(objs):
        return direct_sum(objs)

    @staticmethod
    def _block(sources, targets, blocks):
        return block_map(sources, targets, blocks)

    @classmethod
    def _build(cls, objs, maps, like):
        return cls(objs, maps)


class FieldCochainComplex:
    """A complex of vector spaces of the given dimensions over an exact field."""

    def __init__(self, field, dims: Sequence[int], differentials: Sequence[ExactFieldMatrix]):
        dims = list(dims)
        differentials = list(differentials)
        if len(differentials) != max(len(dims) - 1, 0):
            raise ShapeMismatch(f"{len(dims)} spaces need {max(len(dims) - 1, 0)} differentials")
        for n, d in enumerate(differentials):
            if d.shape != (dims[n + 1], dims[n]) or d.field != field:
                raise ShapeMismatch(f"differential {n} should be {dims[n + 1]}x{dims[n]} over {field}")
        for n in range(len(differentials) - 1):
            if not (differentials[n + 1] @ differentials[n]).is_zero():
                raise CompositionNotZero(f"d^{n + 1} d^{n} != 0")
        self.field = field
        self.groups = dims
        self.differentials = differentials

    def __len__(self):
        return len(self.groups)

    def obj(self, n: int) -> int:
        return self.groups[n] if 0 <= n < len(self.groups) else 0

    def d(self, n: int) -> ExactFieldMatrix:
        if 0 <= n < len(self.differentials):
            return self.differentials[n]
        return ExactFieldMatrix.zero(self.field, self.obj(n + 1), self.obj(n))

    def cohomology(self, n: int) -> int:
        return field_cohomology(self.d(n), self.d(n - 1))

    def cohomologies(self, upto: int | None = None) -> list[int]:
        upto = len(self.groups) - 1 if upto is None else upto
        return [self.cohomology(n) for n in range(upto + 1)]

    def _zero(self, a, b):
        return ExactFieldMatrix.zero(self.field, b, a)

    @staticmethod
    def _sum(objs):
        return sum(objs)

    def _block(self, sources, targets, blocks):
        m, n = sum(targets), sum(sources)
        mat = zero_matrix(m, n)
        roff = [sum(targets[:i]) for i in range(len(targets))]
        coff = [sum(sources[:j]) for j in range(len(sources))]
        for (i, j), f in blocks.items():
            if f.shape != (targets[i], sources[j]):
                raise ShapeMismatch(f"block ({i}, {j}) has shape {f.shape}")
            for a, row in enumerate(f.rows):
                for b, v in enumerate(row):
                    mat[roff[i] + a][coff[j] + b] += v
        return ExactFieldMatrix(self.field, mat, (m, n))

    @classmethod
    def _build(cls, objs, maps, like):
        return cls(like.field, objs, maps)


def _check_source_target(row_lo, row_hi, c, f):
    if isinstance(f, GroupMap):
        ok = f.source.orders == row_lo.obj(c).orders and f.target.orders == row_hi.obj(c).orders
    else:
        ok = f.shape == (row_hi.obj(c), row_lo.obj(c))
    if not ok:
        raise VerticalShapeMismatch(f"vertical map at column {c} has the wrong shape")


class ComplexGrid:
    """Rows of cochain complexes stacked vertically with a family of vertical maps.

    ``verticals[(r, c)]`` maps ``rows[r]`` degree ``c`` to ``rows[r + 1]``
    degree ``c``; missing entries are zero.  Pass :data:`TRIVIAL` for the
    all-zero family.
    """

    def __init__(self, rows: Sequence, verticals=TRIVIAL, commuting: bool = False):
        self.rows = list(rows)
        if not self.rows:
            raise ShapeMismatch("a grid needs at least one row")
        kinds = {type(r) for r in self.rows}
        if len(kinds) != 1:
            raise ShapeMismatch("rows must all be integer complexes or all field complexes")
        self.width = max(len(r) for r in self.rows)
        self.trivial = verticals is TRIVIAL or verticals is None
        self.verticals: dict = {}
        if not self.trivial:
            for (r, c), f in dict(verticals).items():
                if not (0 <= r < len(self.rows) - 1) or c < 0:
                    raise VerticalShapeMismatch(f"no vertical position ({r}, {c})")
                _check_source_target(self.rows[r], self.rows[r + 1], c, f)
                self.verticals[(r, c)] = f.scaled(-1) if commuting and c % 2 else f
            self._check_squares()

    def vertical(self, r: int, c: int):
        lo, hi = self.rows[r], self.rows[r + 1]
        f = self.verticals.get((r, c))
        return f if f is not None else lo._zero(lo.obj(c), hi.obj(c))

    def _check_squares(self):
        for r in range(len(self.rows) - 1):
            lo, hi = self.rows[r], self.rows[r + 1]
            for c in range(self.width):
                lhs = hi.d(c) @ self.vertical(r, c) + self.vertical(r, c + 1) @ lo.d(c)
                if not lhs.is_zero():
                    raise AnticommutationFails(f"square at row {r}, column {c} does not anticommute")
                if r + 2 < len(self.rows) and not (self.vertical(r + 1, c) @ self.vertical(r, c)).is_zero():
                    raise AnticommutationFails(f"vertical maps at column {c} rows {r},{r + 1} compose to nonzero")

    @property
    def max_total_degree(self) -> int:
        return max(r + len(row) - 1 for r, row in enumerate(self.rows))

    def total_complex(self):
        """``Tot^N = (+)_{r+c=N} row_r[c]`` with ``D = d_h + d_v``; D^2 = 0 is checked."""
        rows = self.rows
        like = rows[0]
        T = self.max_total_degree
        spots = [[(r, N - r) for r in range(len(rows)) if 0 <= N - r < len(rows[r])] for N in range(T + 1)]
        objs = [like._sum([rows[r].obj(c) for r, c in spots[N]]) for N in range(T + 1)]
        maps = []
        for N in range(T):
            src, tgt = spots[N], spots[N + 1]
            tpos = {rc: i for i, rc in enumerate(tgt)}
            blocks = {}
            for j, (r, c) in enumerate(src):
                if (r, c + 1) in tpos:
                    blocks[(tpos[(r, c + 1)], j)] = rows[r].d(c)
                if (r + 1, c) in tpos and not self.trivial:
                    blocks[(tpos[(r + 1, c)], j)] = self.vertical(r, c)
            maps.append(like._block([rows[r].obj(c) for r, c in src], [rows[r].obj(c) for r, c in tgt], blocks))
        return type(like)._build(objs, maps, like)


def assemble_grid(rows: Sequence, verticals=TRIVIAL, commuting: bool = False) -> ComplexGrid:
    """Validate rows and vertical family and build the grid.

    Rows may be complexes or ``(groups, differentials)`` pairs of integer data.
    """
    built = []
    for i, row in enumerate(rows):
        if isinstance(row, (CochainComplex, FieldCochainComplex)):
            built.append(row)
            continue
        try:
            built.append(CochainComplex(*row))
        except CompositionNotZero as e:
            raise RowNotAComplex(f"row {i}: {e}") from None
    return ComplexGrid(built, verticals, commuting)


def total_cohomology(grid: ComplexGrid, max_degree: int) -> list:
    if max_degree > grid.max_total_degree:
        raise TruncationExceeded(
            f"degree {max_degree} is beyond the grid's truncation ({grid.max_total_degree})"
        )
    return grid.total_complex().cohomologies(max_degree)


def grid_cohomologies(grid: ComplexGrid) -> dict:
    """Horizontal cohomology at every grid position, keyed ``(row, column)``."""
    return {(r, c): row.cohomology(c) for r, row in enumerate(grid.rows) for c in range(len(row))}


def shifted_sum(per_row: Sequence[Sequence], degree: int, integer: bool = True):
    """``(+)_r H^{degree - r}(row_r)`` from per-row cohomology lists."""
    parts = [rows[degree - r] for r, rows in enumerate(per_row) if 0 <= degree - r < len(rows)]
    if integer:
        return FgAbGroup.from_orders([d for g in parts for d in g.orders])
    return sum(parts)
