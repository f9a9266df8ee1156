from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from structura.errors import BaseMismatch, IndexMismatch, MonoidAxiomsFail, RankNotLocallyConstant
from structura.exactla import FgAbGroup, cyclic
from structura.finspace import discrete, pseudocircle, sierpinski
from structura.ktheory import (
    AbelianMonoidPresentation,
    grothendieck_complete,
    k0,
    naturals_window,
    pair_equivalent,
    rank_monoid_window,
    validate_bundle,
    whitney_sum,
    zero_bundle,
)


def test_bundles_and_whitney_sum():
    X = pseudocircle()
    E = validate_bundle(X, 2, {x: (1, 2) for x in X.points})
    F = validate_bundle(X, 2, {x: (0, 3) for x in X.points})
    assert (E + F).rank_matrix == ((1, 5),)
    assert whitney_sum(E, zero_bundle(X, 2)) == E
    with pytest.raises(RankNotLocallyConstant):
        validate_bundle(X, 1, {"a": (1,), "b": (1,), "c": (2,), "d": (1,)})
    with pytest.raises(IndexMismatch):
        whitney_sum(E, zero_bundle(X, 1))
    with pytest.raises(BaseMismatch):
        whitney_sum(E, zero_bundle(sierpinski(), 2))
    D = discrete(["p", "q"])
    B = validate_bundle(D, 1, {"p": (1,), "q": (4,)})
    assert B.rank_matrix == ((1,), (4,))


def test_k0_values():
    assert k0(pseudocircle(), 2).group == FgAbGroup(2)
    assert k0(discrete(["p", "q"]), 2).group == FgAbGroup(4)
    assert k0(sierpinski(), 3).generators == [("{a,b}", 1), ("{a,b}", 2), ("{a,b}", 3)]
    with pytest.raises(IndexMismatch):
        k0(pseudocircle(), 0)


def test_completion_of_finite_monoids():
    # Z/3 under addition is already a group
    z3 = AbelianMonoidPresentation(["0", "1", "2"], [[(a + b) % 3 for b in range(3)] for a in range(3)])
    assert grothendieck_complete(z3).group == cyclic(3)
    # max on {0, 1, 2}: every element idempotent, so the completion is trivial
    mx = AbelianMonoidPresentation(["0", "1", "2"], [[max(a, b) for b in range(3)] for a in range(3)])
    assert grothendieck_complete(mx).group.is_trivial()
    # {0, 1, inf} with inf absorbing: trivial
    absorb = AbelianMonoidPresentation(["0", "1", "inf"], [[0, 1, 2], [1, 2, 2], [2, 2, 2]])
    assert grothendieck_complete(absorb).group.is_trivial()


def test_monoid_axioms():
    with pytest.raises(MonoidAxiomsFail):
        AbelianMonoidPresentation(["0", "1"], [[0, 1], [0, 1]])
    with pytest.raises(MonoidAxiomsFail):
        AbelianMonoidPresentation(["0", "1", "2"], [[0, 1, 2], [1, 0, 1], [2, 1, 0]])


def test_rank_window_completes_to_k0():
    X = discrete(["p", "q"])
    M, mats = rank_monoid_window(X, 2, 1)
    assert len(mats) == 16
    assert grothendieck_complete(M).group == k0(X, 2).group


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 8))
def test_naturals_window_completion(bound):
    N = naturals_window(bound)
    C = grothendieck_complete(N)
    assert C.group == FgAbGroup(1)
    for x, y in product(product(N.elements, repeat=2), repeat=2):
        same = (x[0] - x[1]) == (y[0] - y[1])
        assert C.same_class(x, y) == same
        if same and max(x[0] + y[1], x[1] + y[0]) <= bound:
            assert pair_equivalent(N, x, y)
    assert C.canonical_map[1] in ((1,), (-1,))
