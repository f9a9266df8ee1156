from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from oracles import diagonal_by_elementary_ops
from structura.errors import CompositionNotZero, NotAHomomorphism, NotDirected, NotFunctorial, ShapeMismatch
from structura.exactla import (
    QQ,
    ExactFieldMatrix,
    FgAbGroup,
    GroupMap,
    PrimeField,
    cokernel,
    cyclic,
    direct_limit,
    direct_sum,
    enumerate_group,
    invariant_factors,
    is_isomorphism,
    kernel,
    smith_normal_form,
    subquotient,
)

Z = FgAbGroup(1)


def matrices(max_dim=5, bound=9):
    return st.integers(1, max_dim).flatmap(
        lambda m: st.integers(1, max_dim).flatmap(
            lambda n: st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n), min_size=m, max_size=m)
        )
    )


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_snf_reconstructs_and_is_unimodular(A):
    U, S, V = smith_normal_form(A)
    assert (Matrix(U) * Matrix(A) * Matrix(V)).tolist() == S
    assert abs(Matrix(U).det()) == 1
    assert abs(Matrix(V).det()) == 1


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_invariant_factors_match_sympy_and_naive(A):
    ours = [d for d in invariant_factors(A) if d]
    S = sympy_snf(Matrix(A), domain=ZZ)
    theirs = [abs(int(S[i, i])) for i in range(min(S.shape)) if S[i, i]]
    assert sorted(ours) == sorted(theirs)
    assert sorted(ours) == sorted(diagonal_by_elementary_ops(A))


@settings(max_examples=100, deadline=None)
@given(matrices(4, 6))
def test_cokernel_of_integer_matrix(A):
    m, n = len(A), len(A[0])
    f = GroupMap(FgAbGroup(n), FgAbGroup(m), A)
    factors = [d for d in invariant_factors(A)]
    expected = FgAbGroup(m - sum(1 for d in factors if d), tuple(d for d in factors if d > 1))
    assert cokernel(f).group == expected
    assert kernel(f).group == FgAbGroup(n - Matrix(A).rank())


def test_canonical_forms():
    assert FgAbGroup.from_orders([2, 3]) == cyclic(6)
    assert FgAbGroup.from_orders([2, 4, 0]) == FgAbGroup(1, (2, 4))
    assert FgAbGroup.from_orders([6, 4]) == FgAbGroup(0, (2, 12))
    assert str(FgAbGroup(2, (2,))) == "Z^2 (+) Z/2"
    assert str(FgAbGroup()) == "0"
    assert direct_sum([cyclic(2), cyclic(3)]).canonical() == cyclic(6)
    with pytest.raises(ValueError):
        FgAbGroup(0, (2, 3))


def test_group_maps_respect_orders():
    with pytest.raises(NotAHomomorphism):
        GroupMap(cyclic(2), Z, [[1]])
    f = GroupMap(cyclic(2), cyclic(4), [[2]])
    assert f((1,)) == (2,)
    assert (f + f).is_zero()
    with pytest.raises(ShapeMismatch):
        GroupMap(Z, Z, [[1, 2]])


def test_subquotient_and_composition_check():
    double = GroupMap.scalar(Z, 2)
    assert subquotient(GroupMap.zero(Z, FgAbGroup()), double) == cyclic(2)
    with pytest.raises(CompositionNotZero):
        subquotient(double, double)
    assert is_isomorphism(GroupMap.identity(cyclic(5)))
    assert not is_isomorphism(double)


@settings(max_examples=60, deadline=None)
@given(matrices(3, 5), st.lists(st.integers(-5, 5), min_size=5, max_size=5))
def test_boundaries_have_zero_class(A, x):
    m, n = len(A), len(A[0])
    f = GroupMap(FgAbGroup(n), FgAbGroup(m), A)
    Q = cokernel(f)
    image = f(x[:n])
    assert all(c == 0 for c in Q.coordinates(image))


def test_direct_limit_of_chain_and_span():
    double = GroupMap.scalar(Z, 2)
    group, ins = direct_limit({0: Z, 1: Z, 2: Z}, {(0, 1): double, (1, 2): double, (0, 2): double @ double})
    assert group == Z
    assert abs(ins[0].matrix[0][0]) == 4
    span, _ = direct_limit({0: Z, 1: cyclic(2)}, {(0, 1): GroupMap(Z, cyclic(2), [[1]])})
    assert span == cyclic(2)
    with pytest.raises(NotDirected):
        direct_limit({0: Z, 1: Z}, {})
    with pytest.raises(NotFunctorial):
        direct_limit({0: Z, 1: Z, 2: Z}, {(0, 1): double, (1, 2): double, (0, 2): double})


def test_exact_field_matrices():
    F5 = PrimeField(5)
    M = ExactFieldMatrix(F5, [[1, 2], [2, 4]])
    assert M.rank() == 1
    assert ExactFieldMatrix(QQ, [[Fraction(1, 2), 1], [1, 2]]).rank() == 1
    assert (M @ ExactFieldMatrix.identity(F5, 2)) == M
    assert F5.inv(2) == 3
    with pytest.raises(ValueError):
        PrimeField(4)


def test_enumerate_group():
    assert len(enumerate_group(direct_sum([cyclic(2), cyclic(3)]))) == 6
