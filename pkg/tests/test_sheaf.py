import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import all_covers_report
from structura.errors import IndexSetMismatch, NotPartitionable, PresheafLawsViolated, WrongValueKind
from structura.exactla import FgAbGroup, GroupMap, cyclic, is_isomorphism
from structura.finspace import discrete, minimal_open, one_point, pseudocircle, sierpinski, validate_space
from structura.rings import RingMap, zmod
from structura.samples import random_group_presheaf, random_space, random_structured_presheaf
from structura.sheaf import (
    RING,
    Presheaf,
    check_presheaf_laws,
    check_sheaf_axioms,
    constant_presheaf,
    constant_sheaf,
    decompose_structured,
    is_isomorphic_unit,
    is_sheaf,
    rebundle,
    sheafify,
    sheafify_with_unit,
    stalk,
)
from structura.strcat import Alignment, StructuredFamily, StructuredHom

Z = FgAbGroup(1)


def test_constant_presheaf_fails_gluing_on_disconnected_open():
    X = pseudocircle()
    rep = check_sheaf_axioms(constant_presheaf(X))
    assert [(name, ax) for name, ax, _ in rep.failures] == [("{a,b}", "gluing")]
    assert is_sheaf(constant_sheaf(X))


def test_sheafification_of_constant_presheaf():
    X = discrete(["p", "q"])
    S, unit = sheafify_with_unit(constant_presheaf(X))
    assert S.values[X.full] == FgAbGroup(2)
    assert unit[X.full].matrix in (((1,), (1,)), ((-1,), (-1,)))
    assert is_sheaf(S)


def test_stalks_are_values_on_minimal_opens():
    X = pseudocircle()
    F = constant_sheaf(X, cyclic(3))
    for x in X.points:
        assert stalk(F, x).value.canonical() == cyclic(3)


def test_presheaf_laws_detect_bad_composition():
    X = validate_chain()
    a, ab, abc = frozenset("a"), frozenset("ab"), frozenset("abc")
    F = Presheaf(X, "AbGroup", {a: Z, ab: Z, abc: Z},
                 {(ab, abc): GroupMap.identity(Z), (a, ab): GroupMap.identity(Z), (a, abc): GroupMap.scalar(Z, 2)})
    assert not check_presheaf_laws(F).ok
    with pytest.raises(PresheafLawsViolated):
        sheafify(F)


def validate_chain():
    return validate_space(["a", "b", "c"], [[], ["a"], ["a", "b"], ["a", "b", "c"]])


def test_ring_sheafification_on_discrete_space():
    X = discrete(["p", "q"])
    R = zmod(2)
    values = {frozenset("p"): R, frozenset("q"): R, X.full: R}
    res = {(frozenset("p"), X.full): RingMap.identity(R), (frozenset("q"), X.full): RingMap.identity(R)}
    F = Presheaf(X, RING, values, res)
    S, unit = sheafify_with_unit(F)
    assert S.values[X.full].size == 4
    assert not is_isomorphic_unit(F, unit)
    S2, unit2 = sheafify_with_unit(S)
    assert is_isomorphic_unit(S, unit2)


def test_wrong_kind_is_rejected():
    X = one_point()
    F = Presheaf(X, RING, {X.full: zmod(2)}, {})
    with pytest.raises(WrongValueKind):
        check_sheaf_axioms(F)


def test_decompose_and_rebundle():
    rng = random.Random(3)
    F, comps = random_structured_presheaf(rng, 4, 3)
    parts = decompose_structured(F)
    assert len(parts) == len(comps)
    for p, c in zip(parts, comps):
        for u in F.opens:
            assert p.values[u] == c.values[u]
            for v in F.opens:
                if u and u <= v:
                    assert p.restriction(u, v) == c.restriction(u, v)


def test_decomposition_rejections():
    X = sierpinski()
    a = frozenset("a")
    fam = StructuredFamily.of(Z)
    fam2 = StructuredFamily.of(Z, Z)
    with pytest.raises(IndexSetMismatch):
        decompose_structured(Presheaf(X, "Structured", {a: fam, X.full: fam2}, {}))
    np = StructuredFamily(fam.entries, partitionable=False)
    with pytest.raises(NotPartitionable):
        decompose_structured(Presheaf(X, "Structured", {a: np, X.full: np}, {}))
    swap_fam = StructuredFamily.of(Z, Z)
    swap = StructuredHom(swap_fam, swap_fam, Alignment(((1, 2), (2, 1))),
                         {1: GroupMap.identity(Z), 2: GroupMap.identity(Z)})
    with pytest.raises(IndexSetMismatch):
        decompose_structured(Presheaf(X, "Structured", {a: swap_fam, X.full: swap_fam}, {(a, X.full): swap}))


def test_rebundle_of_single_component():
    X = pseudocircle()
    F = rebundle([constant_sheaf(X)])
    assert decompose_structured(F)[0].values[X.full] == Z


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_sheafify_properties(seed):
    rng = random.Random(seed)
    X = random_space(rng, 4)
    F = random_group_presheaf(rng, X)
    S, unit = sheafify_with_unit(F)
    assert is_sheaf(S)
    # the unit is an isomorphism on minimal opens, i.e. on stalks
    for x in X.points:
        assert is_isomorphism(unit[minimal_open(X, x)])
    S2, unit2 = sheafify_with_unit(S)
    assert is_isomorphic_unit(S, unit2)
    assert is_sheaf(F) == is_isomorphic_unit(F, unit)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_canonical_check_matches_all_covers_on_finite_groups(seed):
    rng = random.Random(seed)
    X = random_space(rng, 4)
    F = random_group_presheaf(rng, X)
    if any(0 in F.values[u].orders for u in F.opens):
        return
    got = {(u, ax) for u in F.opens for name, ax, _ in check_sheaf_axioms(F).failures
           if name == "{" + ",".join(X.sort_points(u)) + "}"}
    assert got == all_covers_report(F)
