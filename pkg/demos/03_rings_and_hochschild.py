"""Spectra of finite rings and Hochschild cohomology of small algebras.

Run with ``python3 demos/03_rings_and_hochschild.py``.
"""
from structura.exactla import QQ, PrimeField
from structura.finspace import one_point
from structura.hochschild import FiniteDimAlgebra, algebra_from_ring, hochschild_cohomology, structured_hochschild
from structura.rings import are_isomorphic, describe_ring, product_ring, zmod
from structura.ringspec import is_isomorphic_to_spec, spec
from structura.sheaf import RING, Presheaf, rebundle

X = spec(zmod(12))
print("Spec(Z/12) has", len(X.space.points), "points:", X.space.points)
for x in X.space.points:
    print(f"  stalk at {x}: {describe_ring(X.stalk(x))}")
print("global sections recover Z/12:", are_isomorphic(X.sheaf.values[X.space.full], zmod(12)))
print("isomorphic to Spec(Z/6)?", is_isomorphic_to_spec(X.space, X.sheaf, zmod(6)) is not None)

F2, F3 = PrimeField(2), PrimeField(3)


def dual_numbers(K):
    c = [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]
    c[0][0][0] = c[0][1][1] = c[1][0][1] = 1
    return FiniteDimAlgebra(K, c, [1, 0])


print("HH of F3[e]/e^2:", hochschild_cohomology(dual_numbers(F3), 3))
print("HH of F2[e]/e^2:", hochschild_cohomology(dual_numbers(F2), 3))
print("HH of Q x Q:   ", hochschild_cohomology(FiniteDimAlgebra(QQ, [[[1, 0], [0, 0]], [[0, 0], [0, 1]]], [1, 1]), 3))
print("HH of F2 x F2 as a ring:", hochschild_cohomology(algebra_from_ring(product_ring(zmod(2), zmod(2))), 2))

P = one_point()
point = lambda R: Presheaf(P, RING, {P.full: R}, {})  # noqa: E731
res = structured_hochschild(P, rebundle([point(zmod(2)), point(product_ring(zmod(2), zmod(2)))]),
                            assembly="rows", max_degree=2)
print("structured rows over a point:", res.table)
