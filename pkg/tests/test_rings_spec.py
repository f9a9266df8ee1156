import pytest
from hypothesis import given, settings, strategies as st
from sympy import factorint

from structura.errors import DecompositionFails, NotACover, NotARing, NotPrime, StalkNotLocal
from structura.finspace import discrete, one_point, sierpinski
from structura.rings import (
    FiniteRing,
    RingMap,
    are_isomorphic,
    describe_ring,
    ideals,
    is_local,
    maximal_ideals,
    prime_ideals,
    product_ring,
    ring_homs,
    zmod,
)
from structura.ringspec import (
    _components,
    check_locally_ringed,
    component_count,
    disjoint_union_assembly,
    is_isomorphic_to_spec,
    localize_at_prime,
    recognize_structural_scheme,
    ringed_point,
    spec,
)
from structura.exactla import FgAbGroup
from structura.sheaf import RING, Presheaf, constant_sheaf, rebundle


def test_ring_axioms_checked():
    with pytest.raises(NotARing):
        FiniteRing(["0", "1"], [[0, 1], [1, 0]], [[0, 0], [0, 0]])
    assert zmod(6).characteristic == 6


def test_ideals_of_cyclic_rings():
    assert len(ideals(zmod(12))) == 6
    assert len(prime_ideals(zmod(12))) == 2
    assert len(maximal_ideals(zmod(9))) == 1
    assert is_local(zmod(8)) and not is_local(zmod(6))


def test_homs_and_isomorphism():
    assert are_isomorphic(zmod(6), product_ring(zmod(2), zmod(3)))
    assert not are_isomorphic(zmod(4), product_ring(zmod(2), zmod(2)))
    assert len(ring_homs(zmod(4), zmod(2))) == 1
    assert ring_homs(zmod(2), zmod(4)) == []
    with pytest.raises(Exception):
        RingMap(zmod(2), zmod(4), [0, 1])


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 60))
def test_spec_of_cyclic_ring_matches_crt(n):
    X = spec(zmod(n))
    primes = factorint(n)
    assert len(X.space.points) == len(primes)
    assert len(X.space.opens) == 2 ** len(primes)
    stalks = sorted(X.stalk(x).size for x in X.space.points)
    assert stalks == sorted(p ** k for p, k in primes.items())
    assert check_locally_ringed(X).ok


def test_localization_at_prime():
    R = zmod(12)
    P = next(P for P in prime_ideals(R) if 2 in P)
    assert are_isomorphic(localize_at_prime(R, P), zmod(4))
    with pytest.raises(NotPrime):
        localize_at_prime(R, frozenset({0, 6}))


def test_spec_of_product_has_global_sections():
    R = product_ring(zmod(2), zmod(4))
    X = spec(R)
    assert len(X.space.points) == 2
    assert are_isomorphic(X.sheaf.values[X.space.full], R)
    assert describe_ring(zmod(4))


def test_scheme_recognition():
    P = ringed_point(zmod(4))
    F = rebundle([P.sheaf, ringed_point(zmod(3)).sheaf])
    rep = recognize_structural_scheme(P.space, F, [P.space.full], [[zmod(4), zmod(3)]])
    assert rep.accepted
    X = spec(zmod(12))
    assert is_isomorphic_to_spec(X.space, X.sheaf, zmod(12)) is not None
    assert is_isomorphic_to_spec(X.space, X.sheaf, zmod(6)) is None
    with pytest.raises(StalkNotLocal):
        recognize_structural_scheme(P.space, rebundle([ringed_point(zmod(6)).sheaf]), [P.space.full], [[zmod(6)]])
    with pytest.raises(NotACover):
        recognize_structural_scheme(X.space, rebundle([X.sheaf]), [frozenset({X.space.points[0]})], [[zmod(12)]])


def test_disjoint_union_on_sierpinski():
    X = sierpinski()
    a = frozenset("a")

    def const(R):
        return Presheaf(X, RING, {a: R, X.full: R}, {(a, X.full): RingMap.identity(R)})

    F = rebundle([const(zmod(2)), const(zmod(3))])
    U = disjoint_union_assembly(X, F)
    assert len(U.space.points) == 4
    assert len(U.space.opens) == 9
    assert component_count(U) == 2
    assert U.component(2).sheaf.values[U.component(2).space.full].size == 3


def test_decomposition_of_group_family_fails_for_rings():
    with pytest.raises(DecompositionFails):
        _components(rebundle([constant_sheaf(one_point(), FgAbGroup(1))]))
    assert len(discrete(["p"]).points) == 1
