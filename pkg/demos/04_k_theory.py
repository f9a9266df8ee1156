"""Bundles of free modules, K^0, and group completion of finite monoids.

Run with ``python3 demos/04_k_theory.py``.
"""
from structura.finspace import discrete, pseudocircle
from structura.ktheory import (
    AbelianMonoidPresentation,
    grothendieck_complete,
    k0,
    naturals_window,
    rank_monoid_window,
    validate_bundle,
)

X = pseudocircle()
E = validate_bundle(X, 2, {x: (1, 2) for x in X.points})
F = validate_bundle(X, 2, {x: (0, 3) for x in X.points})
print("rank matrix of E + F:", (E + F).rank_matrix)
K = k0(X, 2)
print("K^0 of the pseudocircle with two neighbourhoods:", K.group, "generated by", K.generators)
print("K^0 of two discrete points:", k0(discrete(["p", "q"]), 2).group)

M, _ = rank_monoid_window(discrete(["p", "q"]), 2, 1)
print("completion of the rank window on two points:", grothendieck_complete(M).group)

N = grothendieck_complete(naturals_window(5))
print("completion of {0..5} under capped addition:", N.group, "with 1 ->", N.canonical_map[1])

mx = AbelianMonoidPresentation(["0", "1", "2"], [[max(a, b) for b in range(3)] for a in range(3)])
print("completion of ({0,1,2}, max):", grothendieck_complete(mx).group)
