import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import order_complex_cohomology
from structura.cohom import (
    _perm_sign,
    cech_cohomology,
    compare_cech_derived,
    derived_limit_cohomology,
    refined_cech_cohomology,
    structured_cohomology,
)
from structura.complex import shifted_sum, total_cohomology
from structura.errors import NotASheaf, OptionConflict, TruncationExceeded, WrongValueKind
from structura.exactla import FgAbGroup, GroupMap, cyclic
from structura.finspace import make_cover, minimal_open_cover, pseudocircle, sierpinski
from structura.samples import random_group_presheaf, random_space
from structura.sheaf import RING, Presheaf, constant_presheaf, constant_sheaf, rebundle, sheafify
from structura.rings import RingMap, zmod

Z = FgAbGroup(1)
ZERO = FgAbGroup(0)


def test_pseudocircle_by_both_methods():
    X = pseudocircle()
    F = constant_sheaf(X)
    assert cech_cohomology(minimal_open_cover(X), F, 2) == [Z, Z, ZERO]
    cmp = compare_cech_derived(F, 2)
    assert cmp.derived == [Z, Z, ZERO] and cmp.disagreements == []


def test_torsion_coefficients():
    X = pseudocircle()
    assert derived_limit_cohomology(constant_sheaf(X, cyclic(2)), 2) == [cyclic(2), cyclic(2), ZERO]


def test_non_sheaf_rejected():
    with pytest.raises(NotASheaf, match=r"gluing fails over \{a,b\}"):
        derived_limit_cohomology(constant_presheaf(pseudocircle()), 1)


def test_refinement_chain():
    X = pseudocircle()
    F = constant_sheaf(X)
    chain = [make_cover(X, [X.full]), make_cover(X, [{"a", "b", "c"}, {"a", "b", "d"}]), minimal_open_cover(X)]
    assert refined_cech_cohomology(F, chain, 2) == [Z, Z, ZERO]
    assert cech_cohomology(chain[0], F, 2) == [Z, ZERO, ZERO]


def test_permutation_sign():
    assert _perm_sign([0, 1, 2]) == 1
    assert _perm_sign([1, 0, 2]) == -1
    assert _perm_sign([2, 0, 1]) == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_constant_sheaf_matches_order_complex(seed):
    X = random_space(random.Random(seed), 5)
    got = derived_limit_cohomology(constant_sheaf(X), 2)
    assert [(g.rank, g.torsion) for g in got] == order_complex_cohomology(X, 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_global_sections_in_degree_zero(seed):
    rng = random.Random(seed)
    X = random_space(rng, 4)
    S = sheafify(random_group_presheaf(rng, X))
    cmp = compare_cech_derived(S, 1)
    assert cmp.derived[0] == cmp.cech[0] == S.values[X.full].canonical()


def test_structured_modes_and_assemblies():
    X = pseudocircle()
    F = rebundle([constant_sheaf(X), constant_sheaf(X, cyclic(2))])
    rows = structured_cohomology(F, assembly="rows").table
    assert rows == [[Z, Z, ZERO], [cyclic(2), cyclic(2), ZERO]]
    total = structured_cohomology(F, assembly="total").table
    assert total == [shifted_sum(rows, n) for n in range(3)]
    hpq = structured_cohomology(F, assembly="hpq").table
    assert hpq[(1, 0)] == cyclic(2) and hpq[(0, 1)] == Z
    chain = [make_cover(X, [X.full]), minimal_open_cover(X)]
    cech = structured_cohomology(F, mode="cech", assembly="rows", cover_chain=chain).table
    assert cech == rows
    with pytest.raises(OptionConflict):
        structured_cohomology(F, mode="cech")
    with pytest.raises(OptionConflict):
        structured_cohomology(F, assembly="diagonal")


def test_structured_sign_twist_with_identity_verticals():
    X = sierpinski()
    F = rebundle([constant_sheaf(X), constant_sheaf(X)])
    # derived-limit rows on the Sierpinski space: Z^2 -> Z -> 0
    ident = {(0, 0): GroupMap.identity(FgAbGroup(2)), (0, 1): GroupMap.identity(Z)}
    table = structured_cohomology(F, verticals=ident, commuting=True, assembly="total", max_degree=1).table
    assert table == [ZERO, ZERO]


def test_structured_rejects_ring_components_and_deep_truncation():
    X = sierpinski()
    a = frozenset("a")
    R = Presheaf(X, RING, {a: zmod(2), X.full: zmod(2)}, {(a, X.full): RingMap.identity(zmod(2))})
    with pytest.raises(WrongValueKind):
        structured_cohomology(rebundle([R]))
    F = rebundle([constant_sheaf(X)])
    res = structured_cohomology(F, max_degree=1)
    assert res.table == [Z, ZERO]
    with pytest.raises(TruncationExceeded):
        total_cohomology(res.grid, 7)
