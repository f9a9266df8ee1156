import random

import pytest
from hypothesis import given, settings, strategies as st

from structura.errors import AlignmentMismatch, ComponentShapeMismatch
from structura.exactla import FgAbGroup, GroupMap, cyclic
from structura.rings import RingMap, zmod
from structura.samples import random_composable_triple
from structura.strcat import (
    AB_GROUP,
    RING,
    Alignment,
    FormalIdentity,
    StructuredFamily,
    StructuredHom,
    check_category_membership,
    compose_structured_homs,
    opaque,
    project,
    rebundle,
)

Z = FgAbGroup(1)


def test_membership_accepts_tag_preserving_bijection():
    X = StructuredFamily.of(Z, zmod(2))
    Y = StructuredFamily.of(zmod(2), Z)
    rep = check_category_membership(X, Y, Alignment(((1, 2), (2, 1))))
    assert rep.accepted and rep.pairs == [(1, 2, AB_GROUP), (2, 1, RING)]
    bad = check_category_membership(X, Y, Alignment.identity(2))
    assert not bad.accepted and "tag" in bad.violation


def test_membership_compares_carriers_up_to_isomorphism():
    X = StructuredFamily.of(cyclic(6))
    Y = StructuredFamily.of(FgAbGroup.from_orders([2, 3]))
    assert check_category_membership(X, Y, Alignment.identity(1)).accepted
    W = StructuredFamily.of(cyclic(4))
    assert not check_category_membership(X, W, Alignment.identity(1)).accepted
    assert check_category_membership(X, W, Alignment.identity(1), compare_carriers=False).accepted


def test_opaque_entries_take_only_formal_identities():
    X = StructuredFamily.of(opaque("magma"))
    f = StructuredHom(X, X, Alignment.identity(1), {1: FormalIdentity()})
    assert f == StructuredHom.identity(X)
    with pytest.raises(ComponentShapeMismatch):
        StructuredHom(X, X, Alignment.identity(1), {1: GroupMap.identity(Z)})


def test_homs_check_shapes():
    X = StructuredFamily.of(Z)
    Y = StructuredFamily.of(cyclic(2))
    with pytest.raises(ComponentShapeMismatch):
        StructuredHom(X, Y, Alignment.identity(1), {1: GroupMap.identity(Z)})
    with pytest.raises(AlignmentMismatch):
        StructuredHom(X, StructuredFamily.of(zmod(2)), Alignment.identity(1), {1: GroupMap.identity(Z)})
    R = StructuredFamily.of(zmod(4))
    S = StructuredFamily.of(zmod(2))
    red = RingMap(zmod(4), zmod(2), [0, 1, 0, 1])
    StructuredHom(R, S, Alignment.identity(1), {1: red})


def test_composition_follows_alignments():
    X = StructuredFamily.of(Z, cyclic(2))
    Y = StructuredFamily.of(cyclic(2), Z)
    swap = Alignment(((1, 2), (2, 1)))
    f = StructuredHom(X, Y, swap, {1: GroupMap.scalar(Z, 3), 2: GroupMap.identity(cyclic(2))})
    g = StructuredHom(Y, X, swap, {1: GroupMap.identity(cyclic(2)), 2: GroupMap.scalar(Z, 5)})
    gf = compose_structured_homs(f, g)
    assert gf.alignment == Alignment.identity(2)
    assert gf.components[1] == GroupMap.scalar(Z, 15)
    assert (g @ f) == gf


def test_project_and_rebundle_round_trip():
    X = StructuredFamily.of(Z, zmod(3))
    Y = rebundle([project(X, p) for p in X.indices], list(X.tags))
    assert Y == X


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_category_laws(seed):
    f, g, h = random_composable_triple(random.Random(seed))
    assert compose_structured_homs(compose_structured_homs(f, g), h) == \
        compose_structured_homs(f, compose_structured_homs(g, h))
    assert compose_structured_homs(StructuredHom.identity(f.source), f) == f
    assert compose_structured_homs(f, StructuredHom.identity(f.target)) == f
