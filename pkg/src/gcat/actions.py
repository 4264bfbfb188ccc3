"""Finite monoids and groups acting strictly on finite categories.

Actions are stored as one explicit endofunctor per monoid element and
verified exhaustively (unit acts as identity, act(mn) = act(m)∘act(n)).
Also here: chaotic categories, deloopings, graph subgroups, good subgroups,
free-action quotients, and equivariant retractions of free right actions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .config import DEFAULT_CAPS, SizeCaps
from .errors import (
    ActionNotFree,
    EquivarianceViolation,
    GcatError,
    NotAHomomorphism,
    NotASubgroup,
    SubgroupNotInUnits,
)
from .fincat import (
    FinCat,
    Functor,
    discrete_category,
    identity_functor,
    pair_mor,
    pair_obj,
    product_category,
    product_functor,
    validate_category,
)


# ---------------------------------------------------------------------------
# monoids and groups


@dataclass(frozen=True, eq=False)
class FinMonoid:
    elements: tuple
    table: dict  # (a, b) -> a·b
    unit: str

    def mul(self, a, b):
        return self.table[(a, b)]

    def validate(self):
        els = set(self.elements)
        if self.unit not in els:
            raise GcatError("unit not an element")
        for a in self.elements:
            for b in self.elements:
                if (a, b) not in self.table or self.table[(a, b)] not in els:
                    raise GcatError(f"multiplication undefined/invalid on ({a!r},{b!r})")
        for a in self.elements:
            if self.mul(a, self.unit) != a or self.mul(self.unit, a) != a:
                raise GcatError(f"unit law fails at {a!r}")
        for a, b, c in itertools.product(self.elements, repeat=3):
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                raise GcatError(f"associativity fails on ({a!r},{b!r},{c!r})")
        return self

    def is_group(self):
        return all(self.inverse(a) is not None for a in self.elements)

    def inverse(self, a):
        for b in self.elements:
            if self.mul(a, b) == self.unit and self.mul(b, a) == self.unit:
                return b
        return None

    def to_doc(self):
        els = list(self.elements)
        return {
            "elements": els,
            "table": [[self.mul(a, b) for b in els] for a in els],
            "unit": self.unit,
        }


class FinGroup(FinMonoid):
    def validate(self):
        super().validate()
        if not self.is_group():
            raise GcatError("not a group: some element has no inverse")
        return self

    def inv(self, a):
        return self.inverse(a)


def make_monoid(elements, table, unit) -> FinMonoid:
    return FinMonoid(tuple(sorted(str(e) for e in elements)),
                     {(str(a), str(b)): str(v) for (a, b), v in table.items()},
                     str(unit)).validate()


def make_group(elements, table, unit) -> FinGroup:
    return FinGroup(tuple(sorted(str(e) for e in elements)),
                    {(str(a), str(b)): str(v) for (a, b), v in table.items()},
                    str(unit)).validate()


def monoid_from_doc(doc) -> FinMonoid:
    els = doc["elements"]
    table = {(a, b): doc["table"][i][j] for i, a in enumerate(els) for j, b in enumerate(els)}
    m = FinMonoid(tuple(els), table, doc["unit"])
    m.validate()
    return FinGroup(m.elements, m.table, m.unit) if m.is_group() else m


def trivial_group() -> FinGroup:
    return make_group(["e"], {("e", "e"): "e"}, "e")


def cyclic_group(n: int) -> FinGroup:
    els = [f"c{i}" for i in range(n)]
    table = {(f"c{i}", f"c{j}"): f"c{(i + j) % n}" for i in range(n) for j in range(n)}
    return make_group(els, table, "c0")


def symmetric_group(n: int) -> FinGroup:
    """S_n with elements named by their one-line image strings."""
    perms = list(itertools.permutations(range(n)))

    def name(p):
        return "s" + "".join(str(i) for i in p)

    table = {}
    for p in perms:
        for q in perms:
            comp = tuple(p[q[i]] for i in range(n))  # p after q
            table[(name(p), name(q))] = name(comp)
    return make_group([name(p) for p in perms], table, name(tuple(range(n))))


def product_monoid(M: FinMonoid, N: FinMonoid) -> FinMonoid:
    els = [pair_obj(a, b) for a in M.elements for b in N.elements]
    table = {}
    for a, b in itertools.product(M.elements, N.elements):
        for c, d in itertools.product(M.elements, N.elements):
            table[(pair_obj(a, b), pair_obj(c, d))] = pair_obj(M.mul(a, c), N.mul(b, d))
    cls = FinGroup if isinstance(M, FinGroup) and isinstance(N, FinGroup) else FinMonoid
    return cls(tuple(sorted(els)), table, pair_obj(M.unit, N.unit)).validate()


def submonoid_check(M: FinMonoid, subset) -> bool:
    subset = set(subset)
    if M.unit not in subset:
        return False
    return all(M.mul(a, b) in subset for a in subset for b in subset)


def subgroup_from_elements(M: FinMonoid, elements) -> FinGroup:
    """The subset as a FinGroup sharing M's unit; raises NotASubgroup."""
    elements = tuple(sorted(set(str(e) for e in elements)))
    if not submonoid_check(M, elements):
        raise NotASubgroup(f"{elements} is not closed / missing unit")
    table = {(a, b): M.mul(a, b) for a in elements for b in elements}
    try:
        return FinGroup(elements, table, M.unit).validate()
    except GcatError as exc:
        raise NotASubgroup(str(exc)) from exc


def units_group(M: FinMonoid) -> FinGroup:
    """Maximal subgroup of two-sided invertible elements."""
    invertible = [a for a in M.elements if M.inverse(a) is not None]
    return subgroup_from_elements(M, invertible)


def is_good_subgroup(M: FinMonoid, H: FinGroup) -> bool:
    """True iff right multiplication by H on M is free."""
    if not submonoid_check(M, H.elements) or H.unit != M.unit:
        raise NotASubgroup("H is not a subgroup of M")
    for m in M.elements:
        for h in H.elements:
            if h != H.unit and M.mul(m, h) == m:
                return False
    return True


def subgroups(G: FinGroup):
    """All subgroups, as sorted element tuples (exhaustive closure)."""
    found = set()
    for seed in range(1 << len(G.elements)):
        gen = [e for i, e in enumerate(G.elements) if seed >> i & 1]
        closure = {G.unit, *gen}
        changed = True
        while changed:
            changed = False
            for a in list(closure):
                for b in list(closure):
                    v = G.mul(a, b)
                    if v not in closure:
                        closure.add(v)
                        changed = True
        found.add(tuple(sorted(closure)))
    return [subgroup_from_elements(G, els) for els in sorted(found, key=lambda t: (len(t), t))]


def homomorphisms(H: FinGroup, G: FinGroup):
    """All homomorphisms H -> G as dicts (brute force with early pruning)."""
    els = list(H.elements)
    out = []

    def backtrack(k, phi):
        if k == len(els):
            out.append(dict(phi))
            return
        a = els[k]
        if a == H.unit:
            phi[a] = G.unit
            backtrack(k + 1, phi)
            del phi[a]
            return
        for g in G.elements:
            phi[a] = g
            ok = True
            for b in list(phi):
                for x, y in ((a, b), (b, a)):
                    v = H.mul(x, y)
                    if v in phi and G.mul(phi[x], phi[y]) != phi[v]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                backtrack(k + 1, phi)
            del phi[a]

    backtrack(0, {})
    out.sort(key=lambda d: tuple(sorted(d.items())))
    return out


def check_homomorphism(H: FinMonoid, G: FinMonoid, phi: dict):
    for a in H.elements:
        if a not in phi or phi[a] not in set(G.elements):
            raise NotAHomomorphism(f"phi undefined/invalid at {a!r}")
    if phi[H.unit] != G.unit:
        raise NotAHomomorphism("phi does not preserve the unit")
    for a in H.elements:
        for b in H.elements:
            if phi[H.mul(a, b)] != G.mul(phi[a], phi[b]):
                raise NotAHomomorphism(f"phi breaks multiplication on ({a!r},{b!r})")
    return phi


@dataclass(frozen=True, eq=False)
class GraphSubgroup:
    """Γ_{H,φ} = {(h, φ(h))} inside the product monoid H×G."""

    H: FinGroup
    G: FinGroup
    phi: dict
    ambient: FinMonoid
    group: FinGroup

    def pair(self, h):
        return pair_obj(h, self.phi[h])


def graph_subgroup(H: FinGroup, phi: dict, G: FinGroup) -> GraphSubgroup:
    check_homomorphism(H, G, phi)
    ambient = product_monoid(H, G)
    els = [pair_obj(h, phi[h]) for h in H.elements]
    grp = subgroup_from_elements(ambient, els)
    if grp.elements != tuple(sorted(els)) or len(els) != len(H.elements):
        raise NotASubgroup("graph subgroup has wrong order")
    return GraphSubgroup(H, G, dict(phi), ambient, grp)


# ---------------------------------------------------------------------------
# chaotic categories and deloopings


def chaotic_mor(x, y):
    return f"{x}>{y}"


def chaotic_category(X) -> FinCat:
    """E(X): exactly one morphism per ordered pair; empty X gives the empty category."""
    X = sorted(str(x) for x in X)
    morphisms = [(chaotic_mor(x, y), x, y) for x in X for y in X]
    identity = {x: chaotic_mor(x, x) for x in X}
    compose = {}
    for x, y, z in itertools.product(X, repeat=3):
        compose[(chaotic_mor(y, z), chaotic_mor(x, y))] = chaotic_mor(x, z)
    if not X:
        return FinCat((), (), {}, {})
    return validate_category(X, morphisms, identity, compose)


def chaotic_functor(E_src: FinCat, E_dst: FinCat, object_map: dict) -> Functor:
    """The unique functor E(X) -> E(Y) extending a map of sets."""
    mm = {}
    for x in E_src.objects:
        for y in E_src.objects:
            mm[chaotic_mor(x, y)] = chaotic_mor(object_map[x], object_map[y])
    return Functor(E_src, E_dst, dict(object_map), mm)


def delooping(H: FinMonoid) -> FinCat:
    """B(H): one object, morphisms the elements, composition the multiplication."""
    mors = [(h, "*", "*") for h in H.elements]
    compose = {(g, f): H.mul(g, f) for g in H.elements for f in H.elements}
    return validate_category(["*"], mors, {"*": H.unit}, compose)


# ---------------------------------------------------------------------------
# actions on categories


@dataclass(eq=False)
class MonoidActionCat:
    """Strict left action of a finite monoid on a FinCat."""

    monoid: FinMonoid
    carrier: FinCat
    act: dict  # element -> Functor (endofunctor of carrier)

    def validate(self):
        ident = identity_functor(self.carrier)
        for m in self.monoid.elements:
            F = self.act.get(m)
            if F is None:
                raise GcatError(f"action undefined at {m!r}")
            F.validate()
            if F.source is not self.carrier or F.target is not self.carrier:
                raise GcatError("action functor is not an endofunctor of the carrier")
        if not self.act[self.monoid.unit].same_maps(ident):
            raise GcatError("unit does not act as the identity")
        for m in self.monoid.elements:
            for n in self.monoid.elements:
                if not self.act[n].then(self.act[m]).same_maps(self.act[self.monoid.mul(m, n)]):
                    raise GcatError(f"act({m!r}·{n!r}) ≠ act({m!r})∘act({n!r})")
        return self

    def ob(self, m, x):
        return self.act[m].object_map[x]

    def mor(self, m, f):
        return self.act[m].morphism_map[f]


def trivial_action(M: FinMonoid, C: FinCat) -> MonoidActionCat:
    ident = identity_functor(C)
    return MonoidActionCat(M, C, {m: ident for m in M.elements}).validate()


def action_from_object_maps(M: FinMonoid, C: FinCat, object_maps: dict, morphism_maps: dict) -> MonoidActionCat:
    act = {m: Functor(C, C, object_maps[m], morphism_maps[m]) for m in M.elements}
    return MonoidActionCat(M, C, act).validate()


def chaotic_action(M: FinMonoid, element_action: dict) -> MonoidActionCat:
    """Action on E(X) induced by a monoid action on the set X.

    element_action: monoid element -> dict mapping X to X.
    """
    X = sorted(element_action[M.unit])
    E = chaotic_category(X)
    act = {m: chaotic_functor(E, E, dict(element_action[m])) for m in M.elements}
    return MonoidActionCat(M, E, act).validate()


def translation_action(G: FinGroup) -> MonoidActionCat:
    """E(G) with the left translation G-action (free on objects and morphisms)."""
    return chaotic_action(G, {g: {h: G.mul(g, h) for h in G.elements} for g in G.elements})


def product_action(A: MonoidActionCat, B: MonoidActionCat, caps: SizeCaps = DEFAULT_CAPS) -> MonoidActionCat:
    """Diagonal action on the product carrier; monoids must coincide."""
    if A.monoid is not B.monoid and A.monoid.elements != B.monoid.elements:
        raise GcatError("product_action requires the same acting monoid")
    prod = product_category(A.carrier, B.carrier, caps)
    act = {
        m: product_functor(A.act[m], B.act[m], prod, prod)
        for m in A.monoid.elements
    }
    return MonoidActionCat(A.monoid, prod, act).validate()


def restrict_action(A: MonoidActionCat, H: FinMonoid) -> MonoidActionCat:
    """Restrict along a submonoid (elements must be elements of A.monoid)."""
    return MonoidActionCat(H, A.carrier, {h: A.act[h] for h in H.elements}).validate()


def pullback_action(A: MonoidActionCat, H: FinMonoid, phi: dict) -> MonoidActionCat:
    """φ*A: H acts through φ: H -> A.monoid."""
    check_homomorphism(H, A.monoid, phi)
    return MonoidActionCat(H, A.carrier, {h: A.act[phi[h]] for h in H.elements}).validate()


def check_equivariant(F: Functor, A: MonoidActionCat, B: MonoidActionCat):
    """F: A.carrier -> B.carrier commuting with both actions (same monoid)."""
    for m in A.monoid.elements:
        lhs = A.act[m].then(F)
        rhs = F.then(B.act[m])
        if not lhs.same_maps(rhs):
            raise EquivarianceViolation(f"functor not equivariant at {m!r}", witness=m)
    return F


def fixed_category(A: MonoidActionCat, H: FinGroup) -> FinCat:
    """Full subcategory of objects and morphisms fixed by every act(h), h in H.

    H must be a subgroup of the units of the acting monoid.
    """
    units = units_group(A.monoid)
    if not set(H.elements) <= set(units.elements):
        raise SubgroupNotInUnits(f"{H.elements} not inside units {units.elements}")
    subgroup_from_elements(A.monoid, H.elements)
    C = A.carrier
    objs = [x for x in C.objects if all(A.ob(h, x) == x for h in H.elements)]
    oset = set(objs)
    mors = [
        (m, s, t)
        for m, s, t in C.morphisms
        if s in oset and t in oset and all(A.mor(h, m) == m for h in H.elements)
    ]
    mids = {m for m, _, _ in mors}
    ident = {x: C.identity[x] for x in objs}
    comp = {(g, f): h for (g, f), h in C.compose.items() if g in mids and f in mids}
    return FinCat(tuple(objs), tuple(mors), ident, comp)


def fixed_functor(F: Functor, A: MonoidActionCat, B: MonoidActionCat, H: FinGroup) -> Functor:
    """Restriction F^H: A^H -> B^H of an equivariant functor."""
    CH = fixed_category(A, H)
    DH = fixed_category(B, H)
    return Functor(
        CH, DH,
        {x: F.object_map[x] for x in CH.objects},
        {m: F.morphism_map[m] for m in CH.morphism_ids},
    ).validate()


# ---------------------------------------------------------------------------
# free right actions, retractions, quotients


def check_free_right_action(H: FinGroup, elements, act):
    """act: (s, h) -> s·h; raises ActionNotFree with a witness pair."""
    els = list(elements)
    for s in els:
        if act(s, H.unit) != s:
            raise GcatError(f"right action breaks unit at {s!r}")
        for h in H.elements:
            for k in H.elements:
                if act(act(s, h), k) != act(s, H.mul(h, k)):
                    raise GcatError(f"right action breaks multiplication at ({s!r},{h!r},{k!r})")
    for s in els:
        for h in H.elements:
            if h != H.unit and act(s, h) == s:
                raise ActionNotFree(s, h)


def equivariant_retraction(H: FinGroup, elements, act) -> dict:
    """Right H-equivariant r: S -> H for a free right action.

    Orbit representatives are lexicographically least; r(rep·h) = h.
    """
    check_free_right_action(H, elements, act)
    r = {}
    for s in sorted(elements):
        if s in r:
            continue
        orbit = sorted(act(s, h) for h in H.elements)
        rep = orbit[0]
        for h in H.elements:
            r[act(rep, h)] = h
    return r


def right_translation_functor(E: FinCat, K: FinGroup, h) -> Functor:
    """E(K) -> E(K), x ↦ x·h (right translation)."""
    return chaotic_functor(E, E, {x: K.mul(x, h) for x in K.elements})


@dataclass(eq=False)
class CellCategory:
    """(E(K) ×_φ G) := (E(K) × G)/Γ_{H,φ} with its left G-action.

    `coherence[(k1, k2)]` maps each object of the quotient to the image of the
    unique E(K)-morphism k1 -> k2 acting at it: the categorical part of the
    left (E(K) × G)-action, used by the saturation checks.
    """

    K: FinGroup
    G: FinGroup
    H: FinGroup
    phi: dict
    category: FinCat
    g_action: MonoidActionCat          # left G-action on the quotient
    kg_action: MonoidActionCat         # discrete left (K×G)-action
    quotient_functor: Functor
    coherence: dict


def cell_category(K: FinGroup, G: FinGroup, H: FinGroup, phi: dict,
                  caps: SizeCaps = DEFAULT_CAPS) -> CellCategory:
    """Build (E(K) × G)/Γ_{H,φ} for H a subgroup of K and φ: H -> G."""
    check_homomorphism(H, G, phi)
    subgroup_from_elements(K, H.elements)
    EK = chaotic_category(K.elements)
    Gd = discrete_category(G.elements)
    EKxG = product_category(EK, Gd, caps)

    def translate(h):
        """Left-action functor of Γ-element for h (descends the right action by h⁻¹)."""
        hinv = H.inv(h)
        om = {pair_obj(m, g): pair_obj(K.mul(m, hinv), G.mul(g, phi[hinv]))
              for m in K.elements for g in G.elements}
        mm = {}
        for m1 in K.elements:
            for m2 in K.elements:
                for g in G.elements:
                    mm[pair_mor(chaotic_mor(m1, m2), f"id:{g}")] = pair_mor(
                        chaotic_mor(K.mul(m1, hinv), K.mul(m2, hinv)),
                        f"id:{G.mul(g, phi[hinv])}")
        return Functor(EKxG, EKxG, om, mm)

    gamma = graph_subgroup(H, phi, G)
    gact = MonoidActionCat(gamma.group, EKxG, {gamma.pair(h): translate(h) for h in H.elements}).validate()
    cell, q = quotient_by_free_action(gact)

    def descend(om_amb, mm_amb):
        """Endofunctor of the quotient induced by an equivariant endofunctor upstairs."""
        om = {}
        mm = {}
        for x in cell.objects:
            om[x] = q.object_map[om_amb[x]]
        for m in cell.morphism_ids:
            mm[m] = q.morphism_map[mm_amb[m]]
        return Functor(cell, cell, om, mm)

    def left_kg(k, g):
        om_amb = {pair_obj(m, gg): pair_obj(K.mul(k, m), G.mul(g, gg))
                  for m in K.elements for gg in G.elements}
        mm_amb = {}
        for m1 in K.elements:
            for m2 in K.elements:
                for gg in G.elements:
                    mm_amb[pair_mor(chaotic_mor(m1, m2), f"id:{gg}")] = pair_mor(
                        chaotic_mor(K.mul(k, m1), K.mul(k, m2)), f"id:{G.mul(g, gg)}")
        return descend(om_amb, mm_amb)

    g_act = {g: left_kg(K.unit, g) for g in G.elements}
    g_action = MonoidActionCat(G, cell, g_act).validate()
    KxG = product_monoid(K, G)
    kg_act = {pair_obj(k, g): left_kg(k, g) for k in K.elements for g in G.elements}
    kg_action = MonoidActionCat(KxG, cell, kg_act).validate()

    coherence = {}
    for k1 in K.elements:
        for k2 in K.elements:
            comp = {}
            for x in cell.objects:
                # x is the least orbit member (m, g); act the morphism k1 -> k2 at it
                m, g = x[1:-1].split(",")
                amb = pair_mor(chaotic_mor(K.mul(k1, m), K.mul(k2, m)), f"id:{g}")
                comp[x] = q.morphism_map[amb]
            coherence[(k1, k2)] = comp
    return CellCategory(K, G, H, dict(phi), cell, g_action, kg_action, q, coherence)


def quotient_by_free_action(A: MonoidActionCat) -> tuple:
    """Quotient of a free group action; returns (quotient FinCat, quotient Functor).

    Objects and morphisms are orbits named by their lexicographically least
    member.  Requires the action free on objects and morphisms.
    """
    G = A.monoid
    if not isinstance(G, FinGroup) and not G.is_group():
        raise GcatError("quotient_by_free_action needs a group action")
    C = A.carrier
    for x in C.objects:
        for g in G.elements:
            if g != G.unit and A.ob(g, x) == x:
                raise ActionNotFree(x, g)
    for m in C.morphism_ids:
        for g in G.elements:
            if g != G.unit and A.mor(g, m) == m:
                raise ActionNotFree(m, g)

    def orbit_obj(x):
        return min(A.ob(g, x) for g in G.elements)

    def orbit_mor(m):
        return min(A.mor(g, m) for g in G.elements)

    objs = sorted({orbit_obj(x) for x in C.objects})
    mor_reps = sorted({orbit_mor(m) for m in C.morphism_ids})
    morphisms = [(m, orbit_obj(C.src[m]), orbit_obj(C.dst[m])) for m in mor_reps]
    identity = {x: orbit_mor(C.identity[x]) for x in objs}
    compose = {}
    for g2 in mor_reps:
        for f in mor_reps:
            # translate f so that it becomes composable with g2, if possible
            for g in G.elements:
                tf = A.mor(g, f)
                if C.dst[tf] == C.src[g2]:
                    compose[(g2, f)] = orbit_mor(C.compose[(g2, tf)])
                    break
    D = validate_category(objs, morphisms, identity, compose)
    q = Functor(C, D, {x: orbit_obj(x) for x in C.objects},
                {m: orbit_mor(m) for m in C.morphism_ids}).validate()
    return D, q
