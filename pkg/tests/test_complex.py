import random

import pytest
from hypothesis import given, settings, strategies as st

from structura.complex import (
    TRIVIAL,
    CochainComplex,
    ComplexGrid,
    FieldCochainComplex,
    assemble_grid,
    grid_cohomologies,
    shifted_sum,
    total_cohomology,
)
from structura.errors import (
    AnticommutationFails,
    CompositionNotZero,
    RowNotAComplex,
    ShapeMismatch,
    TruncationExceeded,
    VerticalShapeMismatch,
)
from structura.exactla import ExactFieldMatrix, FgAbGroup, GroupMap, PrimeField, cyclic

Z = FgAbGroup(1)
ZERO = FgAbGroup(0)


def times(k):
    return GroupMap.scalar(Z, k)


def test_single_row_cohomology():
    C = CochainComplex([Z, Z], [times(2)])
    assert C.cohomologies() == [ZERO, cyclic(2)]
    with pytest.raises(CompositionNotZero):
        CochainComplex([Z, Z, Z], [times(1), times(1)])
    with pytest.raises(ShapeMismatch):
        CochainComplex([Z, Z], [])


def test_assemble_grid_wraps_row_errors():
    with pytest.raises(RowNotAComplex):
        assemble_grid([([Z, Z, Z], [times(1), times(1)])])
    grid = assemble_grid([([Z, Z], [times(2)])])
    assert total_cohomology(grid, 1) == [ZERO, cyclic(2)]


def test_trivial_verticals_give_shifted_sum():
    rows = [CochainComplex([Z, Z], [times(2)]), CochainComplex([Z, Z], [times(3)])]
    grid = ComplexGrid(rows, TRIVIAL)
    per_row = [r.cohomologies() for r in rows]
    assert total_cohomology(grid, 2) == [shifted_sum(per_row, n) for n in range(3)]
    assert total_cohomology(grid, 2) == [ZERO, cyclic(2), cyclic(3)]
    hpq = grid_cohomologies(grid)
    assert hpq[(1, 1)] == cyclic(3)


def test_anticommuting_and_commuting_verticals():
    row = CochainComplex([Z, Z], [times(1)])
    vert = {(0, 0): times(1), (0, 1): times(1)}
    with pytest.raises(AnticommutationFails):
        ComplexGrid([row, row], vert)
    anti = {(0, 0): times(1), (0, 1): times(-1)}
    grid = ComplexGrid([row, row], anti)
    assert total_cohomology(grid, 2) == [ZERO, ZERO, ZERO]
    assert total_cohomology(ComplexGrid([row, row], vert, commuting=True), 2) == [ZERO, ZERO, ZERO]


def test_vertical_shape_checks():
    row = CochainComplex([Z, Z], [times(1)])
    with pytest.raises(VerticalShapeMismatch):
        ComplexGrid([row, row], {(1, 0): times(1)})
    with pytest.raises(TruncationExceeded):
        total_cohomology(ComplexGrid([row]), 5)


def test_field_rows():
    F2 = PrimeField(2)
    row = FieldCochainComplex(F2, [1, 1], [ExactFieldMatrix(F2, [[0]])])
    grid = ComplexGrid([row, row])
    assert total_cohomology(grid, 2) == [1, 2, 1]


@st.composite
def integer_complexes(draw):
    """Random one-differential complexes Z^a -> Z^b."""
    a, b = draw(st.integers(1, 3)), draw(st.integers(1, 3))
    d0 = [[draw(st.integers(-3, 3)) for _ in range(a)] for _ in range(b)]
    return CochainComplex([FgAbGroup(a), FgAbGroup(b)], [GroupMap(FgAbGroup(a), FgAbGroup(b), d0)])


@settings(max_examples=50, deadline=None)
@given(st.lists(integer_complexes(), min_size=1, max_size=3))
def test_total_equals_shifted_sum_for_trivial_verticals(rows):
    grid = ComplexGrid(rows)
    per_row = [r.cohomologies() for r in rows]
    top = grid.max_total_degree
    assert total_cohomology(grid, top) == [shifted_sum(per_row, n) for n in range(top + 1)]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_total_differential_squares_to_zero(seed):
    rng = random.Random(seed)
    k = rng.randint(-3, 3)
    row = CochainComplex([Z, Z], [times(k)])
    c = rng.randint(-3, 3)
    grid = ComplexGrid([row, row], {(0, 0): times(c), (0, 1): times(-c)})
    T = grid.total_complex()
    for d1, d2 in zip(T.differentials, T.differentials[1:]):
        assert (d2 @ d1).is_zero()
