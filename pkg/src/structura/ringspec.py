"""Spectra of finite commutative rings, locally ringed checks, structural
schemes, and the disjoint-union assembly of a structural ringed space."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Sequence

from .errors import (
    DecompositionFails,
    NotPrime,
    Rejection,
    StalkNotLocal,
    WrongValueKind,
)
from .finspace import FiniteSpace, connected_components, make_cover, minimal_open, validate_space
from .rings import (
    FiniteRing,
    RingMap,
    describe_ring,
    ideal_label,
    ideals,
    is_local,
    is_prime,
    prime_ideals,
    quotient_ring,
    ring_isomorphisms,
    zero_ring,
)
from .sheaf import RING, STRUCTURED, Presheaf, decompose_structured, sheafify_with_unit


@dataclass
class RingedFiniteSpace:
    space: FiniteSpace
    sheaf: Presheaf
    ring: FiniteRing | None = None
    primes: dict = field(default_factory=dict)  # point label -> prime ideal

    def stalk(self, x) -> FiniteRing:
        return self.sheaf.values[minimal_open(self.space, x)]


def _annihilator(R: FiniteRing, S) -> frozenset:
    return frozenset(r for r in R.elements if any(R.mul[s][r] == R.zero for s in S))


def _localize(R: FiniteRing, S) -> tuple[FiniteRing, RingMap]:
    Q, proj = quotient_ring(R, _annihilator(R, S))
    for s in S:
        if proj(s) not in Q.units:
            raise ArithmeticError(f"{R.labels[s]} does not become a unit in the localization")
    return Q, proj


def localize_at_prime(R: FiniteRing, P: frozenset) -> FiniteRing:
    """``R_P`` for a finite ring: ``R`` modulo the elements killed by something outside ``P``."""
    P = frozenset(P)
    if not is_prime(R, P):
        raise NotPrime(f"{ideal_label(R, P)} is not a prime ideal")
    Q, _ = _localize(R, [s for s in R.elements if s not in P])
    if not is_local(Q):
        raise ArithmeticError("localization at a prime is not local")
    return Q


def spec(R: FiniteRing) -> RingedFiniteSpace:
    """Prime ideals with the Zariski topology and the structure sheaf.

    Over an open ``U`` the structure sheaf is ``R`` localized at the elements
    lying in no prime of ``U``; restrictions are the induced quotient maps.
    """
    primes = sorted(prime_ideals(R), key=lambda P: sorted(P))
    labels = [ideal_label(R, P) for P in primes]
    by_label = dict(zip(labels, primes))
    opens = set()
    for I in ideals(R):
        closed = {lab for lab, P in by_label.items() if I <= P}
        opens.add(frozenset(labels) - closed)
    space = validate_space(labels, opens)
    loc = {}
    for u in space.opens:
        if u:
            S = [s for s in R.elements if not any(s in by_label[x] for x in u)]
            loc[u] = _localize(R, S)
    values = {u: Q for u, (Q, _) in loc.items()}
    restrictions = {}
    for v, (Qv, pv) in loc.items():
        rep = {}
        for r in R.elements:
            rep.setdefault(pv(r), r)
        for u, (Qu, pu) in loc.items():
            if u < v:
                restrictions[(u, v)] = RingMap(Qv, Qu, [pu(rep[q]) for q in Qv.elements])
    return RingedFiniteSpace(space, Presheaf(space, RING, values, restrictions), R, by_label)


@dataclass
class LocalReport:
    stalks: dict  # point -> (ring, is local)

    @property
    def ok(self) -> bool:
        return all(local for _, local in self.stalks.values())


def check_locally_ringed(X: RingedFiniteSpace) -> LocalReport:
    return LocalReport({x: (X.stalk(x), is_local(X.stalk(x))) for x in X.space.points})


def ringed_point(R: FiniteRing, label="x") -> RingedFiniteSpace:
    """A one-point space carrying ``R``."""
    space = validate_space([label], [[], [label]])
    return RingedFiniteSpace(space, Presheaf(space, RING, {space.full: R}, {}), R)


# ------------------------------------------------------- structural schemes


def _components(F: Presheaf) -> list[Presheaf]:
    if F.kind != STRUCTURED:
        raise WrongValueKind("a structural ringed space needs a family-valued sheaf")
    try:
        comps = decompose_structured(F)
    except Rejection as e:
        raise DecompositionFails(str(e)) from None
    except WrongValueKind as e:
        raise DecompositionFails(str(e)) from None
    for p, c in enumerate(comps, start=1):
        if c.kind != RING:
            raise DecompositionFails(f"fixed neighbourhood {p} is not ring-valued")
    return comps


def _restricted(space: FiniteSpace, F: Presheaf, u: frozenset) -> tuple[FiniteSpace, Presheaf]:
    sub = validate_space(space.sort_points(u), [w for w in space.opens if w <= u])
    opens = [w for w in sub.opens if w]
    values = {w: F.values[w] for w in opens}
    res = {(w, v): F.restriction(w, v) for w in opens for v in opens if w < v}
    return sub, Presheaf(sub, RING, values, res)


def _homeomorphisms(A: FiniteSpace, B: FiniteSpace):
    if len(A.points) != len(B.points) or len(A.opens) != len(B.opens):
        return
    for image in permutations(B.points):
        phi = dict(zip(A.points, image))
        if all(frozenset(phi[x] for x in u) in B.opens for u in A.opens):
            yield phi


def _sheaf_isomorphism(A: FiniteSpace, F: Presheaf, B: FiniteSpace, G: Presheaf, phi: dict):
    """Ring isomorphisms on minimal opens, natural along their inclusions."""
    pts = list(A.points)
    mins = {x: minimal_open(A, x) for x in pts}
    gmins = {x: minimal_open(B, phi[x]) for x in pts}
    choices = {}
    for x in pts:
        choices[x] = ring_isomorphisms(F.values[mins[x]], G.values[gmins[x]])
        if not choices[x]:
            return None
    chosen: dict = {}

    def natural(x, y):
        # x < y: alpha_x . rho == rho' . alpha_y
        rho = F.restriction(mins[x], mins[y])
        rho2 = G.restriction(gmins[x], gmins[y])
        return chosen[x] @ rho == rho2 @ chosen[y]

    def search(i):
        if i == len(pts):
            return dict(chosen)
        x = pts[i]
        for alpha in choices[x]:
            chosen[x] = alpha
            ok = all(
                natural(x, y) if mins[x] < mins[y] else natural(y, x)
                for y in pts[:i]
                if mins[x] < mins[y] or mins[y] < mins[x]
            )
            if ok:
                found = search(i + 1)
                if found is not None:
                    return found
        chosen.pop(x, None)
        return None

    return search(0)


def is_isomorphic_to_spec(space: FiniteSpace, F: Presheaf, R: FiniteRing) -> dict | None:
    """A point bijection plus natural stalk isomorphisms onto ``spec(R)``, if any."""
    target = spec(R)
    for phi in _homeomorphisms(space, target.space):
        if _sheaf_isomorphism(space, F, target.space, target.sheaf, phi) is not None:
            return phi
    return None


@dataclass
class SchemeReport:
    accepted: bool
    matches: dict = field(default_factory=dict)  # (member index, p) -> point bijection or None

    @property
    def affine(self) -> bool:
        return self.accepted and len({i for i, _ in self.matches}) == 1


def recognize_structural_scheme(space: FiniteSpace, F: Presheaf, cover: Sequence, candidates: Sequence) -> SchemeReport:
    """Decide whether every cover member, per fixed neighbourhood, is an affine spectrum.

    ``candidates[i][p - 1]`` is the ring whose spectrum member ``i`` should
    match in component ``p``.
    """
    members = [frozenset(m) for m in cover]
    make_cover(space, members, space.full)
    comps = _components(F)
    sheaves = [sheafify_with_unit(c)[0] for c in comps]
    for p, S in enumerate(sheaves, start=1):
        for x in space.points:
            if not is_local(S.values[minimal_open(space, x)]):
                raise StalkNotLocal(f"stalk at {x} in component {p} is not local")
    if len(candidates) != len(members) or any(len(c) != len(sheaves) for c in candidates):
        raise DecompositionFails("need one candidate ring per cover member and component")
    report = SchemeReport(True)
    for i, u in enumerate(members):
        for p, S in enumerate(sheaves, start=1):
            sub, restricted = _restricted(space, S, u)
            phi = is_isomorphic_to_spec(sub, restricted, candidates[i][p - 1])
            report.matches[(i, p)] = phi
            if phi is None:
                report.accepted = False
    return report


# ------------------------------------------------------- disjoint union


def product_of(rings: Sequence[FiniteRing]) -> tuple[FiniteRing, list]:
    """The product ring with its element tuples (index order = lexicographic)."""
    if not rings:
        return zero_ring(), [()]
    tuples = list(product(*(R.elements for R in rings)))
    pos = {t: i for i, t in enumerate(tuples)}

    def op(name):
        return [[pos[tuple(getattr(R, name)[a][b] for R, a, b in zip(rings, s, t))] for t in tuples] for s in tuples]

    labels = ["(" + ",".join(str(R.labels[a]) for R, a in zip(rings, t)) + ")" for t in tuples]
    if len(rings) == 1:
        labels = list(rings[0].labels)
    P = FiniteRing(labels, op("add"), op("mul"), pos[tuple(R.zero for R in rings)],
                   pos[tuple(R.one for R in rings)], allow_zero_ring=True, check=False)
    return P, tuples


@dataclass
class SemiStructuralSpace:
    space: FiniteSpace
    sheaf: Presheaf
    m: int
    slabs: list  # slabs[p - 1] = the open X x {p}

    def component(self, p: int) -> RingedFiniteSpace:
        """The ringed space on ``X x {p}``."""
        sub, F = _restricted(self.space, self.sheaf, self.slabs[p - 1])
        return RingedFiniteSpace(sub, F)


def disjoint_union_assembly(space: FiniteSpace, F: Presheaf) -> SemiStructuralSpace:
    """The disjoint union over ``p`` of the ringed spaces ``(X, sheafified F_p)``.

    Points are tagged ``(x, p)``.
    """
    sheaves = [sheafify_with_unit(c)[0] for c in _components(F)]
    m = len(sheaves)
    points = [(x, p) for p in range(1, m + 1) for x in space.points]
    base_opens = space.sorted_opens()
    choice_of = {}
    for choice in product(base_opens, repeat=m):
        u = frozenset((x, p) for p, w in enumerate(choice, start=1) for x in w)
        choice_of[u] = choice
    union = validate_space(points, choice_of)
    values, tuples = {}, {}
    for u, choice in choice_of.items():
        if u:
            values[u], tuples[u] = product_of([S.values[w] for S, w in zip(sheaves, choice)])
    res = {}
    for v, cv in choice_of.items():
        if not v:
            continue
        for u, cu in choice_of.items():
            if u and u < v:
                pos = {t: i for i, t in enumerate(tuples[u])}
                maps = [S.restriction(a, b) for S, a, b in zip(sheaves, cu, cv)]
                table = [pos[tuple(f(a) for f, a in zip(maps, t))] for t in tuples[v]]
                res[(u, v)] = RingMap(values[v], values[u], table, check=False)
    slabs = [frozenset((x, p) for x in space.points) for p in range(1, m + 1)]
    return SemiStructuralSpace(union, Presheaf(union, RING, values, res), m, slabs)


def stalk_table(X: RingedFiniteSpace) -> list[tuple]:
    """``(point, ring description, is local)`` rows in point order."""
    return [(x, describe_ring(R), local) for x, (R, local) in check_locally_ringed(X).stalks.items()]


def component_count(X: SemiStructuralSpace) -> int:
    return len(connected_components(X.space))
