"""The pseudocircle: a four-point space with the cohomology of a circle.

Run with ``python3 demos/01_pseudocircle.py``.
"""
from structura.cohom import cech_cohomology, compare_cech_derived, derived_limit_cohomology, refined_cech
from structura.finspace import make_cover, minimal_open, minimal_open_cover, pseudocircle
from structura.sheaf import check_sheaf_axioms, constant_presheaf, sheafify

X = pseudocircle()
print("points:", X.points)
print("opens: ", ["{" + ",".join(X.sort_points(u)) + "}" for u in X.sorted_opens()])
for x in X.points:
    print(f"  smallest open around {x}: {sorted(minimal_open(X, x))}")

# The constant presheaf assigns Z to every open, including the disconnected {a,b}.
P = constant_presheaf(X)
for name, axiom, witness in check_sheaf_axioms(P).failures:
    print(f"constant presheaf: {axiom} fails over {name}, witness {list(witness)}")

# Sheafifying replaces each value by locally constant sections.
S = sheafify(P)
print("sections of the sheafification over {a,b}:", S.values[frozenset("ab")])
print("global sections:", S.values[X.full])

print("derived-limit cohomology:", [str(g) for g in derived_limit_cohomology(S, 2)])

two = make_cover(X, [{"a", "b", "c"}, {"a", "b", "d"}])
print("Cech on {U_c, U_d}:    ", [str(g) for g in cech_cohomology(two, S, 1)])

chain = [make_cover(X, [X.full]), two, minimal_open_cover(X)]
r = refined_cech(S, chain, 2)
for cover, groups in zip(chain, r.per_cover):
    print(f"  cover with {len(cover.members)} member(s): {[str(g) for g in groups]}")
print("limit along the chain:", [str(g) for g in r.groups])

cmp = compare_cech_derived(S, 2)
print("Cech on the minimal-open cover vs derived:", "agree" if not cmp.disagreements else cmp.disagreements)
