"""Finite categories as explicit tables.

A FinCat stores its objects, morphisms, identity assignment, and the full
composition table.  Everything is validated exhaustively: associativity over
all composable triples, identity laws for every morphism.  On top of that
this module provides functors, natural transformations, products, functor
categories, exhaustive equivalence search, and a presentation-based pushout
oracle (congruence closure on composite words) that is independent of the
explicit Dwyer-pushout construction.

Ids are strings ordered lexicographically; all constructions are
deterministic functions of their inputs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .config import DEFAULT_CAPS, SizeCaps
from .errors import (
    AssociativityViolation,
    DanglingReference,
    GcatError,
    IdentityViolation,
    Inconclusive,
    SizeCapExceeded,
)


# ---------------------------------------------------------------------------
# categories


@dataclass(frozen=True, eq=False)
class FinCat:
    """A finite category given by explicit tables.

    objects: sorted tuple of object ids.
    morphisms: sorted tuple of (mor id, src id, dst id).
    identity: object id -> morphism id.
    compose: (g, f) -> g∘f, defined exactly on composable pairs (f: x->y,
    g: y->z gives g∘f: x->z).
    """

    objects: tuple
    morphisms: tuple
    identity: Mapping
    compose: Mapping
    src: Mapping = field(repr=False, default=None)
    dst: Mapping = field(repr=False, default=None)
    _hom: Mapping = field(repr=False, default=None)

    def __post_init__(self):
        if self.src is None:
            object.__setattr__(self, "src", {m: s for m, s, _ in self.morphisms})
            object.__setattr__(self, "dst", {m: t for m, _, t in self.morphisms})
        if self._hom is None:
            hom = {}
            for m, s, t in self.morphisms:
                hom.setdefault((s, t), []).append(m)
            object.__setattr__(self, "_hom", {k: tuple(v) for k, v in hom.items()})

    # -- basic queries ------------------------------------------------

    @property
    def morphism_ids(self):
        return tuple(m for m, _, _ in self.morphisms)

    def hom(self, x, y):
        return self._hom.get((x, y), ())

    def is_identity(self, m):
        return self.identity.get(self.src[m]) == m and self.src[m] == self.dst[m]

    def comp(self, g, f):
        """g∘f for composable f, g."""
        return self.compose[(g, f)]

    def n_objects(self):
        return len(self.objects)

    def n_morphisms(self):
        return len(self.morphisms)

    def isos(self):
        """Set of invertible morphism ids."""
        out = set()
        for m, s, t in self.morphisms:
            for w in self.hom(t, s):
                if (
                    self.compose[(w, m)] == self.identity[s]
                    and self.compose[(m, w)] == self.identity[t]
                ):
                    out.add(m)
                    break
        return out

    def inverse(self, m):
        s, t = self.src[m], self.dst[m]
        for w in self.hom(t, s):
            if self.compose[(w, m)] == self.identity[s] and self.compose[(m, w)] == self.identity[t]:
                return w
        return None

    def full_subcategory(self, objs):
        objs = sorted(objs)
        oset = set(objs)
        mors = tuple(sorted((m, s, t) for m, s, t in self.morphisms if s in oset and t in oset))
        mids = {m for m, _, _ in mors}
        ident = {x: self.identity[x] for x in objs}
        comp = {
            (g, f): h
            for (g, f), h in self.compose.items()
            if g in mids and f in mids
        }
        return FinCat(tuple(objs), mors, ident, comp)

    def to_doc(self):
        return {
            "objects": list(self.objects),
            "morphisms": [[m, s, t] for m, s, t in self.morphisms],
            "identity": {x: self.identity[x] for x in self.objects},
            "compose": sorted([g, f, h] for (g, f), h in self.compose.items()),
        }


def validate_category(objects, morphisms, identity, compose, caps: SizeCaps = DEFAULT_CAPS):
    """Validate raw tables and return a canonical FinCat.

    Raises DanglingReference / IdentityViolation / AssociativityViolation with
    the offending ids, and SizeCapExceeded past the configured caps.
    """
    objects = tuple(sorted(objects))
    if len(set(objects)) != len(objects):
        raise DanglingReference("duplicate object ids")
    if len(objects) > caps.max_objects:
        raise SizeCapExceeded("objects", len(objects), caps.max_objects)
    morphisms = tuple(sorted(tuple(m) for m in morphisms))
    mids = [m for m, _, _ in morphisms]
    if len(set(mids)) != len(mids):
        raise DanglingReference("duplicate morphism ids")
    if len(morphisms) > caps.max_morphisms:
        raise SizeCapExceeded("morphisms", len(morphisms), caps.max_morphisms)
    oset = set(objects)
    for m, s, t in morphisms:
        if s not in oset or t not in oset:
            raise DanglingReference(f"morphism {m!r} has unknown endpoint {s!r} or {t!r}")
    midset = set(mids)
    src = {m: s for m, s, _ in morphisms}
    dst = {m: t for m, _, t in morphisms}
    identity = dict(identity)
    for x in objects:
        if x not in identity:
            raise DanglingReference(f"object {x!r} has no identity")
        i = identity[x]
        if i not in midset:
            raise DanglingReference(f"identity {i!r} of {x!r} is not a morphism")
        if src[i] != x or dst[i] != x:
            raise IdentityViolation(f"identity {i!r} of {x!r} is not an endomorphism of {x!r}")
    compose = {(g, f): h for (g, f), h in dict(compose).items()}
    for (g, f), h in compose.items():
        if g not in midset or f not in midset or h not in midset:
            raise DanglingReference(f"compose entry ({g!r},{f!r})->{h!r} uses unknown ids")
        if dst[f] != src[g]:
            raise DanglingReference(f"compose defined on non-composable pair ({g!r},{f!r})")
        if src[h] != src[f] or dst[h] != dst[g]:
            raise DanglingReference(f"composite {h!r} of ({g!r},{f!r}) has wrong endpoints")
    for g in mids:
        for f in mids:
            if dst[f] == src[g] and (g, f) not in compose:
                raise DanglingReference(f"compose missing on composable pair ({g!r},{f!r})")
    for m in mids:
        if compose[(m, identity[src[m]])] != m:
            raise IdentityViolation(f"right identity law fails for {m!r}")
        if compose[(identity[dst[m]], m)] != m:
            raise IdentityViolation(f"left identity law fails for {m!r}")
    # associativity over all composable triples
    by_src = {}
    for m in mids:
        by_src.setdefault(src[m], []).append(m)
    for f in mids:
        for g in by_src.get(dst[f], ()):
            gf = compose[(g, f)]
            for h in by_src.get(dst[g], ()):
                if compose[(h, gf)] != compose[(compose[(h, g)], f)]:
                    raise AssociativityViolation(f"(h∘g)∘f ≠ h∘(g∘f) for ({h!r},{g!r},{f!r})")
    return FinCat(objects, morphisms, identity, compose)


def category_from_doc(doc, caps: SizeCaps = DEFAULT_CAPS):
    return validate_category(
        doc["objects"],
        [tuple(m) for m in doc["morphisms"]],
        doc["identity"],
        {(g, f): h for g, f, h in doc["compose"]},
        caps,
    )


# -- small builders -------------------------------------------------------


def terminal_category():
    return validate_category(["*"], [("id*", "*", "*")], {"*": "id*"}, {("id*", "id*"): "id*"})


def empty_category():
    return FinCat((), (), {}, {})


def discrete_category(elements):
    elements = sorted(str(e) for e in elements)
    mors = [(f"id:{x}", x, x) for x in elements]
    comp = {(f"id:{x}", f"id:{x}"): f"id:{x}" for x in elements}
    return validate_category(elements, mors, {x: f"id:{x}" for x in elements}, comp)


# ---------------------------------------------------------------------------
# posets


@dataclass(frozen=True, eq=False)
class Poset:
    """Finite poset; `leq` is the full relation as a frozenset of pairs."""

    elements: tuple
    leq: frozenset

    def __post_init__(self):
        els = set(self.elements)
        for x in self.elements:
            if (x, x) not in self.leq:
                raise GcatError(f"poset not reflexive at {x!r}")
        for x, y in self.leq:
            if x not in els or y not in els:
                raise GcatError("poset relation has unknown element")
            if x != y and (y, x) in self.leq:
                raise GcatError(f"poset not antisymmetric on ({x!r},{y!r})")
        for x, y in self.leq:
            for z in self.elements:
                if (y, z) in self.leq and (x, z) not in self.leq:
                    raise GcatError(f"poset not transitive on ({x!r},{y!r},{z!r})")

    def le(self, x, y):
        return (x, y) in self.leq

    def to_fincat(self):
        mors = []
        ident = {}
        for x, y in sorted(self.leq):
            mid = f"{x}<={y}"
            mors.append((mid, x, y))
            if x == y:
                ident[x] = mid
        comp = {}
        for x, y in self.leq:
            for z in self.elements:
                if (y, z) in self.leq:
                    comp[(f"{y}<={z}", f"{x}<={y}")] = f"{x}<={z}"
        return validate_category(self.elements, mors, ident, comp)


def poset_from_relation(elements, pairs):
    """Reflexive-transitive closure of `pairs` over `elements` (must be acyclic)."""
    elements = tuple(sorted(str(e) for e in elements))
    rel = {(str(a), str(b)) for a, b in pairs}
    rel |= {(x, x) for x in elements}
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), list(rel)):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    return Poset(elements, frozenset(rel))


def chain_poset(n):
    """The linear order 0 < 1 < ... < n, i.e. the category [n]."""
    els = [str(i) for i in range(n + 1)]
    return Poset(tuple(els), frozenset((str(i), str(j)) for i in range(n + 1) for j in range(i, n + 1)))


def arrow_category():
    return chain_poset(1).to_fincat()


def fincat_as_poset(cat: FinCat) -> Poset:
    """Inverse of Poset.to_fincat when the category is a poset; raises otherwise."""
    leq = set()
    for (x, y), ms in cat._hom.items():
        if len(ms) > 1:
            raise GcatError("not a poset: parallel morphisms")
        leq.add((x, y))
    return Poset(cat.objects, frozenset(leq))


# ---------------------------------------------------------------------------
# functors and natural transformations


@dataclass(eq=False)
class Functor:
    source: FinCat
    target: FinCat
    object_map: dict
    morphism_map: dict

    def ob(self, x):
        return self.object_map[x]

    def mor(self, m):
        return self.morphism_map[m]

    def validate(self):
        for x in self.source.objects:
            if x not in self.object_map or self.object_map[x] not in set(self.target.objects):
                raise DanglingReference(f"object map undefined/invalid at {x!r}")
        for m, s, t in self.source.morphisms:
            fm = self.morphism_map.get(m)
            if fm is None or fm not in self.target.src:
                raise DanglingReference(f"morphism map undefined/invalid at {m!r}")
            if self.target.src[fm] != self.object_map[s] or self.target.dst[fm] != self.object_map[t]:
                raise DanglingReference(f"functor breaks endpoints at {m!r}")
        for x in self.source.objects:
            if self.morphism_map[self.source.identity[x]] != self.target.identity[self.object_map[x]]:
                raise IdentityViolation(f"functor breaks identity at {x!r}")
        for (g, f), h in self.source.compose.items():
            if self.target.compose[(self.morphism_map[g], self.morphism_map[f])] != self.morphism_map[h]:
                raise AssociativityViolation(f"functor breaks composition on ({g!r},{f!r})")
        return self

    def same_maps(self, other: "Functor"):
        return self.object_map == other.object_map and self.morphism_map == other.morphism_map

    def signature(self):
        return (
            tuple(sorted(self.object_map.items())),
            tuple(sorted(self.morphism_map.items())),
        )

    def then(self, other: "Functor") -> "Functor":
        """self followed by other (other ∘ self)."""
        return Functor(
            self.source,
            other.target,
            {x: other.object_map[v] for x, v in self.object_map.items()},
            {m: other.morphism_map[v] for m, v in self.morphism_map.items()},
        )

    def is_injective_on_objects(self):
        vals = list(self.object_map.values())
        return len(set(vals)) == len(vals)

    def is_fully_faithful(self):
        for x in self.source.objects:
            for y in self.source.objects:
                image = [self.morphism_map[m] for m in self.source.hom(x, y)]
                targeth = self.target.hom(self.object_map[x], self.object_map[y])
                if len(set(image)) != len(image) or set(image) != set(targeth):
                    return False
        return True


def identity_functor(cat: FinCat) -> Functor:
    return Functor(cat, cat, {x: x for x in cat.objects}, {m: m for m in cat.morphism_ids})


def constant_functor(source: FinCat, target: FinCat, obj) -> Functor:
    return Functor(
        source,
        target,
        {x: obj for x in source.objects},
        {m: target.identity[obj] for m in source.morphism_ids},
    )


def inclusion_functor(sub: FinCat, amb: FinCat) -> Functor:
    return Functor(sub, amb, {x: x for x in sub.objects}, {m: m for m in sub.morphism_ids})


@dataclass(eq=False)
class NatTrans:
    source: Functor
    target: Functor
    components: dict  # object id of the common source -> morphism id in the common target

    def validate(self):
        F, G = self.source, self.target
        cat, tgt = F.source, F.target
        for x in cat.objects:
            c = self.components.get(x)
            if c is None or c not in tgt.src:
                raise DanglingReference(f"component missing/invalid at {x!r}")
            if tgt.src[c] != F.object_map[x] or tgt.dst[c] != G.object_map[x]:
                raise DanglingReference(f"component at {x!r} has wrong endpoints")
        for m, s, t in cat.morphisms:
            lhs = tgt.compose[(self.components[t], F.morphism_map[m])]
            rhs = tgt.compose[(G.morphism_map[m], self.components[s])]
            if lhs != rhs:
                raise GcatError(f"naturality fails at {m!r}")
        return self

    def is_componentwise_iso(self):
        isos = self.source.target.isos()
        return all(c in isos for c in self.components.values())


def identity_nat(F: Functor) -> NatTrans:
    return NatTrans(F, F, {x: F.target.identity[F.object_map[x]] for x in F.source.objects})


# ---------------------------------------------------------------------------
# products


def pair_obj(a, b):
    return f"({a},{b})"


def pair_mor(f, g):
    return f"({f},{g})"


def product_category(S: FinCat, C: FinCat, caps: SizeCaps = DEFAULT_CAPS) -> FinCat:
    """S × C with componentwise composition; |Mor| multiplies."""
    n_mor = S.n_morphisms() * C.n_morphisms()
    if n_mor > caps.max_morphisms:
        raise SizeCapExceeded("product morphisms", n_mor, caps.max_morphisms)
    if S.n_objects() * C.n_objects() > caps.max_objects:
        raise SizeCapExceeded("product objects", S.n_objects() * C.n_objects(), caps.max_objects)
    objects = [pair_obj(a, b) for a in S.objects for b in C.objects]
    morphisms = [
        (pair_mor(f, g), pair_obj(S.src[f], C.src[g]), pair_obj(S.dst[f], C.dst[g]))
        for f in S.morphism_ids
        for g in C.morphism_ids
    ]
    identity = {pair_obj(a, b): pair_mor(S.identity[a], C.identity[b]) for a in S.objects for b in C.objects}
    compose = {}
    for (f2, f1), f in S.compose.items():
        for (g2, g1), g in C.compose.items():
            compose[(pair_mor(f2, g2), pair_mor(f1, g1))] = pair_mor(f, g)
    return validate_category(objects, morphisms, identity, compose, caps)


def product_projections(S: FinCat, C: FinCat, prod: FinCat):
    p1 = Functor(prod, S,
                 {pair_obj(a, b): a for a in S.objects for b in C.objects},
                 {pair_mor(f, g): f for f in S.morphism_ids for g in C.morphism_ids})
    p2 = Functor(prod, C,
                 {pair_obj(a, b): b for a in S.objects for b in C.objects},
                 {pair_mor(f, g): g for f in S.morphism_ids for g in C.morphism_ids})
    return p1, p2


def product_functor(F: Functor, G: Functor, prod_src: FinCat, prod_tgt: FinCat) -> Functor:
    """F × G on already-built product categories."""
    om = {}
    mm = {}
    for a in F.source.objects:
        for b in G.source.objects:
            om[pair_obj(a, b)] = pair_obj(F.object_map[a], G.object_map[b])
    for f in F.source.morphism_ids:
        for g in G.source.morphism_ids:
            mm[pair_mor(f, g)] = pair_mor(F.morphism_map[f], G.morphism_map[g])
    return Functor(prod_src, prod_tgt, om, mm)


# ---------------------------------------------------------------------------
# functor categories


@dataclass(eq=False)
class FunctorCategoryData:
    """Fun(T, C) together with the dictionaries needed to act on it."""

    cat: FinCat
    source: FinCat
    target: FinCat
    functors: list          # index -> Functor; object id is f"F{index:03d}"
    index_of: dict          # Functor.signature() -> index
    trans: dict             # morphism id -> (src index, dst index, components dict)

    def object_id(self, F: Functor):
        return f"F{self.index_of[F.signature()]:03d}"

    def functor_of(self, obj_id):
        return self.functors[int(obj_id[1:])]

    def trans_id(self, src_idx, dst_idx, components):
        key = tuple(sorted(components.items()))
        return self._trans_lookup[(src_idx, dst_idx, key)]

    def components_of(self, mor_id):
        return self.trans[mor_id][2]


def enumerate_functors(T: FinCat, C: FinCat, caps: SizeCaps = DEFAULT_CAPS):
    """All functors T -> C by backtracking, in deterministic order."""
    if T.n_objects() == 0:
        return [Functor(T, C, {}, {})]
    objs = list(T.objects)
    nonid = [m for m in T.morphism_ids if not T.is_identity(m)]
    results = []
    budget = [0]

    def extend_morphisms(om):
        mm = {m: C.identity[om[T.src[m]]] for m in T.morphism_ids if T.is_identity(m)}

        def backtrack_m(k):
            budget[0] += 1
            if budget[0] > caps.max_candidates:
                raise SizeCapExceeded("functor enumeration", budget[0], caps.max_candidates)
            if k == len(nonid):
                results.append(Functor(T, C, dict(om), dict(mm)))
                return
            m = nonid[k]
            for cand in C.hom(om[T.src[m]], om[T.dst[m]]):
                mm[m] = cand
                ok = True
                for other in T.morphism_ids:
                    if other not in mm:
                        continue
                    for g, f in ((m, other), (other, m)):
                        if T.dst[f] == T.src[g]:
                            h = T.compose[(g, f)]
                            if h in mm and C.compose[(mm[g], mm[f])] != mm[h]:
                                ok = False
                                break
                    if not ok:
                        break
                if ok:
                    backtrack_m(k + 1)
                del mm[m]

        backtrack_m(0)

    def backtrack_o(k, om):
        budget[0] += 1
        if budget[0] > caps.max_candidates:
            raise SizeCapExceeded("functor enumeration", budget[0], caps.max_candidates)
        if k == len(objs):
            extend_morphisms(om)
            return
        x = objs[k]
        for c in C.objects:
            om[x] = c
            # cheap prune: assigned endpoints must allow nonempty homs
            ok = True
            for m in T.morphism_ids:
                s, t = T.src[m], T.dst[m]
                if s in om and t in om and not C.hom(om[s], om[t]):
                    ok = False
                    break
            if ok:
                backtrack_o(k + 1, om)
            del om[x]

    backtrack_o(0, {})
    results.sort(key=lambda F: F.signature())
    return results


def enumerate_nat_trans(F: Functor, G: Functor, caps: SizeCaps = DEFAULT_CAPS):
    """All natural transformations F => G, as component dicts."""
    T, C = F.source, F.target
    objs = list(T.objects)
    results = []
    budget = [0]

    def backtrack(k, comp):
        budget[0] += 1
        if budget[0] > caps.max_candidates:
            raise SizeCapExceeded("nat-trans enumeration", budget[0], caps.max_candidates)
        if k == len(objs):
            results.append(dict(comp))
            return
        x = objs[k]
        for c in C.hom(F.object_map[x], G.object_map[x]):
            comp[x] = c
            ok = True
            for m in T.morphism_ids:
                s, t = T.src[m], T.dst[m]
                if s in comp and t in comp:
                    if C.compose[(comp[t], F.morphism_map[m])] != C.compose[(G.morphism_map[m], comp[s])]:
                        ok = False
                        break
            if ok:
                backtrack(k + 1, comp)
            del comp[x]

    backtrack(0, {})
    results.sort(key=lambda d: tuple(sorted(d.items())))
    return results


def functor_category_data(T: FinCat, C: FinCat, caps: SizeCaps = DEFAULT_CAPS) -> FunctorCategoryData:
    functors = enumerate_functors(T, C, caps)
    for F in functors:
        F.validate()
    if len(functors) > caps.max_objects:
        raise SizeCapExceeded("functor-category objects", len(functors), caps.max_objects)
    index_of = {F.signature(): i for i, F in enumerate(functors)}
    objects = [f"F{i:03d}" for i in range(len(functors))]
    morphisms = []
    trans = {}
    lookup = {}
    identity = {}
    all_trans = {}
    n_mor = 0
    for i, F in enumerate(functors):
        for j, G in enumerate(functors):
            comps = enumerate_nat_trans(F, G, caps)
            n_mor += len(comps)
            if n_mor > caps.max_morphisms:
                raise SizeCapExceeded("functor-category morphisms", n_mor, caps.max_morphisms)
            all_trans[(i, j)] = comps
            for k, comp in enumerate(comps):
                mid = f"n{i:03d}>{j:03d}#{k:03d}"
                morphisms.append((mid, f"F{i:03d}", f"F{j:03d}"))
                trans[mid] = (i, j, comp)
                lookup[(i, j, tuple(sorted(comp.items())))] = mid
    for i, F in enumerate(functors):
        comp = {x: C.identity[F.object_map[x]] for x in T.objects}
        identity[f"F{i:03d}"] = lookup[(i, i, tuple(sorted(comp.items())))]
    compose = {}
    by_src_idx = {}
    for (i, j), alphas in all_trans.items():
        by_src_idx.setdefault(j, []).append((i, alphas))
    for (j, k), betas in all_trans.items():
        for i, alphas in by_src_idx.get(j, ()):
            for kb, beta in enumerate(betas):
                bid = f"n{j:03d}>{k:03d}#{kb:03d}"
                for ka, alpha in enumerate(alphas):
                    aid = f"n{i:03d}>{j:03d}#{ka:03d}"
                    comp = {x: C.compose[(beta[x], alpha[x])] for x in T.objects}
                    compose[(bid, aid)] = lookup[(i, k, tuple(sorted(comp.items())))]
    cat = validate_category(objects, morphisms, identity, compose, caps)
    data = FunctorCategoryData(cat, T, C, functors, index_of, trans)
    data._trans_lookup = lookup
    return data


def functor_category(T: FinCat, C: FinCat, caps: SizeCaps = DEFAULT_CAPS) -> FinCat:
    return functor_category_data(T, C, caps).cat


def postcompose_on_fun(data_src: FunctorCategoryData, data_dst: FunctorCategoryData, g: Functor) -> Functor:
    """Fun(T, g): Fun(T,C) -> Fun(T,D) for g: C -> D (same T)."""
    om, mm = {}, {}
    for i, F in enumerate(data_src.functors):
        om[f"F{i:03d}"] = data_dst.object_id(F.then(g))
    for mid, (i, j, comp) in data_src.trans.items():
        gi = data_src.functors[i].then(g)
        gj = data_src.functors[j].then(g)
        gcomp = {x: g.morphism_map[c] for x, c in comp.items()}
        mm[mid] = data_dst.trans_id(data_dst.index_of[gi.signature()], data_dst.index_of[gj.signature()], gcomp)
    return Functor(data_src.cat, data_dst.cat, om, mm)


def precompose_on_fun(data_src: FunctorCategoryData, data_dst: FunctorCategoryData, r: Functor) -> Functor:
    """Fun(r, C): Fun(T,C) -> Fun(S,C) for r: S -> T (same C)."""
    om, mm = {}, {}
    for i, F in enumerate(data_src.functors):
        om[f"F{i:03d}"] = data_dst.object_id(r.then(F))
    for mid, (i, j, comp) in data_src.trans.items():
        ri = r.then(data_src.functors[i])
        rj = r.then(data_src.functors[j])
        rcomp = {x: comp[r.object_map[x]] for x in r.source.objects}
        mm[mid] = data_dst.trans_id(data_dst.index_of[ri.signature()], data_dst.index_of[rj.signature()], rcomp)
    return Functor(data_src.cat, data_dst.cat, om, mm)


# ---------------------------------------------------------------------------
# equivalences


@dataclass(eq=False)
class EquivalenceWitness:
    functor: Functor
    quasi_inverse: Functor
    unit: NatTrans       # id ≅ QF
    counit: NatTrans     # FQ ≅ id

    def validate(self):
        F, Q = self.functor, self.quasi_inverse
        self.unit.validate()
        self.counit.validate()
        if not self.unit.is_componentwise_iso() or not self.counit.is_componentwise_iso():
            raise GcatError("equivalence witness transformations are not isomorphisms")
        if not self.unit.source.same_maps(identity_functor(F.source)):
            raise GcatError("unit source is not the identity functor")
        if not self.unit.target.same_maps(F.then(Q)):
            raise GcatError("unit target is not QF")
        if not self.counit.source.same_maps(Q.then(F)):
            raise GcatError("counit source is not FQ")
        if not self.counit.target.same_maps(identity_functor(F.target)):
            raise GcatError("counit target is not the identity functor")
        return self


def is_ff_eso(F: Functor):
    """Exhaustive fully-faithful + essentially-surjective predicate."""
    if not F.is_fully_faithful():
        return False
    C, D = F.source, F.target
    isos = D.isos()
    image = {F.object_map[x] for x in C.objects}
    for d in D.objects:
        if not any(
            m in isos for c in image for m in D.hom(c, d)
        ):
            return False
    return True


def find_equivalence(F: Functor, caps: SizeCaps = DEFAULT_CAPS) -> Optional[EquivalenceWitness]:
    """Equivalence witness iff F is fully faithful and essentially surjective.

    The search is exhaustive, so None is a proof of non-equivalence.
    """
    C, D = F.source, F.target
    if C.n_objects() > caps.max_objects or D.n_objects() > caps.max_objects:
        raise SizeCapExceeded("equivalence search", max(C.n_objects(), D.n_objects()), caps.max_objects)
    if not is_ff_eso(F):
        return None
    isos = D.isos()
    # lexicographically least choice of (preimage object, iso) per target object
    choice = {}
    for d in D.objects:
        found = None
        for c in sorted(C.objects):
            for m in D.hom(F.object_map[c], d):
                if m in isos:
                    found = (c, m)
                    break
            if found:
                break
        choice[d] = found
    q_ob = {d: choice[d][0] for d in D.objects}
    xi = {d: choice[d][1] for d in D.objects}  # xi_d : F(q(d)) -> d, iso

    def preimage(x, y, dm):
        """Unique m: x->y in C with F(m) = dm (full faithfulness)."""
        for m in C.hom(x, y):
            if F.morphism_map[m] == dm:
                return m
        raise GcatError("full faithfulness lookup failed")

    q_mor = {}
    for g in D.morphism_ids:
        d1, d2 = D.src[g], D.dst[g]
        conj = D.compose[(D.inverse(xi[d2]), D.compose[(g, xi[d1])])]
        q_mor[g] = preimage(q_ob[d1], q_ob[d2], conj)
    Q = Functor(D, C, q_ob, q_mor).validate()
    counit = NatTrans(Q.then(F), identity_functor(D), dict(xi))
    eta = {}
    for c in C.objects:
        eta[c] = preimage(c, q_ob[F.object_map[c]], D.inverse(xi[F.object_map[c]]))
    unit = NatTrans(identity_functor(C), F.then(Q), eta)
    return EquivalenceWitness(F, Q, unit, counit).validate()


# ---------------------------------------------------------------------------
# exhaustive isomorphism search


def is_isomorphism_functor(F: Functor) -> bool:
    """Exact isomorphism of categories: bijective on objects and morphisms."""
    try:
        F.validate()
    except GcatError:
        return False
    if len(set(F.object_map.values())) != F.target.n_objects():
        return False
    if len(F.object_map) != F.source.n_objects():
        return False
    vals = list(F.morphism_map.values())
    return len(set(vals)) == F.target.n_morphisms() and len(vals) == F.source.n_morphisms()


def _object_profile(cat: FinCat, x):
    outs = sorted(len(cat.hom(x, y)) for y in cat.objects)
    ins = sorted(len(cat.hom(y, x)) for y in cat.objects)
    return (len(cat.hom(x, x)), tuple(outs), tuple(ins))


def find_isomorphism(C: FinCat, D: FinCat, caps: SizeCaps = DEFAULT_CAPS) -> Optional[Functor]:
    """Exhaustive category-isomorphism search with profile pruning."""
    if C.n_objects() != D.n_objects() or C.n_morphisms() != D.n_morphisms():
        return None
    profC = {x: _object_profile(C, x) for x in C.objects}
    profD = {y: _object_profile(D, y) for y in D.objects}
    if sorted(profC.values()) != sorted(profD.values()):
        return None
    objs = sorted(C.objects, key=lambda x: (profC[x], x))
    budget = [0]

    def extend_morphisms(ob):
        mm = {}

        def match_mor(pairs, k):
            if k == len(pairs):
                F = Functor(C, D, dict(ob), dict(mm))
                return F if is_isomorphism_functor(F) else None
            x, y = pairs[k]
            source_h = C.hom(x, y)
            target_h = D.hom(ob[x], ob[y])
            if len(source_h) != len(target_h):
                return None
            for perm in itertools.permutations(target_h):
                budget[0] += 1
                if budget[0] > caps.max_candidates:
                    raise SizeCapExceeded("isomorphism search", budget[0], caps.max_candidates)
                for m, im in zip(source_h, perm):
                    mm[m] = im
                ok = True
                for (g, f), h in C.compose.items():
                    if g in mm and f in mm and h in mm:
                        if D.compose[(mm[g], mm[f])] != mm[h]:
                            ok = False
                            break
                if ok:
                    res = match_mor(pairs, k + 1)
                    if res is not None:
                        return res
                for m in source_h:
                    del mm[m]
            return None

        pairs = [(x, y) for x in C.objects for y in C.objects if C.hom(x, y)]
        return match_mor(pairs, 0)

    def backtrack(k, ob, used):
        budget[0] += 1
        if budget[0] > caps.max_candidates:
            raise SizeCapExceeded("isomorphism search", budget[0], caps.max_candidates)
        if k == len(objs):
            return extend_morphisms(ob)
        x = objs[k]
        for y in D.objects:
            if y in used or profD[y] != profC[x]:
                continue
            ob[x] = y
            used.add(y)
            res = backtrack(k + 1, ob, used)
            if res is not None:
                return res
            used.discard(y)
            del ob[x]
        return None

    return backtrack(0, {}, set())


# ---------------------------------------------------------------------------
# presented pushout: the congruence-closure oracle


@dataclass
class PresentedPushout:
    category: FinCat
    leg_from_b: Functor   # d : B -> D
    leg_from_c: Functor   # j : C -> D
    word_of: dict         # morphism id -> canonical generator word


def _uf_find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def presented_pushout(A: FinCat, B: FinCat, C: FinCat, i: Functor, c: Functor,
                      word_cap: int = 16, caps: SizeCaps = DEFAULT_CAPS) -> PresentedPushout:
    """Pushout of B <-i- A -c-> C presented by generators and relations.

    Generators are the non-identity morphisms of B and C with i(a) ~ c(a)
    identified; relations are the two composition tables.  Saturation runs a
    Todd-Coxeter-style closure: morphism classes are states, each generator
    acts by postcomposition, and every relation instance is scanned over every
    state, merging coincidences.  States are named by composite words; a state
    that would need a word longer than word_cap raises Inconclusive with that
    word.  On closure the quotient is assembled and validated as a category.
    """
    if not i.is_injective_on_objects():
        raise GcatError("presented_pushout requires i injective on objects")
    if word_cap < 1:
        raise GcatError("word_cap must be >= 1")

    # object classes ------------------------------------------------------
    onodes = [("B", x) for x in B.objects] + [("C", x) for x in C.objects]
    oparent = {x: x for x in onodes}

    def ounion(a, b):
        ra, rb = _uf_find(oparent, a), _uf_find(oparent, b)
        if ra != rb:
            lo, hi = sorted((ra, rb), key=lambda n: (n[0] != "C", n[1]))
            oparent[hi] = lo

    for a in A.objects:
        ounion(("B", i.object_map[a]), ("C", c.object_map[a]))

    def oclass(node):
        return _uf_find(oparent, node)

    # generator letters ----------------------------------------------------
    def gen_nodes():
        out = []
        for m in B.morphism_ids:
            if not B.is_identity(m):
                out.append(("B", m))
        for m in C.morphism_ids:
            if not C.is_identity(m):
                out.append(("C", m))
        return out

    gparent = {x: x for x in gen_nodes()}
    eps = set()

    def gunion(a, b):
        ra, rb = _uf_find(gparent, a), _uf_find(gparent, b)
        if ra != rb:
            lo, hi = sorted((ra, rb), key=lambda n: (n[0] != "C", n[1]))
            gparent[hi] = lo
            if ra in eps or rb in eps:
                eps.add(lo)

    for a in A.morphism_ids:
        if A.is_identity(a):
            continue
        bm = i.morphism_map[a]
        cm = c.morphism_map[a]
        b_is_id = B.is_identity(bm)
        c_is_id = C.is_identity(cm)
        if b_is_id and c_is_id:
            continue
        if b_is_id:
            eps.add(_uf_find(gparent, ("C", cm)))
        elif c_is_id:
            eps.add(_uf_find(gparent, ("B", bm)))
        else:
            gunion(("B", bm), ("C", cm))

    def gclass(node):
        r = _uf_find(gparent, node)
        return None if r in eps else r

    def gen_endpoints(letter):
        tag, m = letter
        cat = B if tag == "B" else C
        return oclass((tag, cat.src[m])), oclass((tag, cat.dst[m]))

    letters = sorted({gclass(n) for n in gen_nodes()} - {None})
    letter_src = {}
    letter_dst = {}
    for letter in letters:
        s, d = gen_endpoints(letter)
        letter_src[letter] = s
        letter_dst[letter] = d

    # relations: (lhs word, rhs word) scanned at states with matching dst;
    # words are tuples of letters, first applied first; empty = identity
    relations = []
    for cat, tag in ((B, "B"), (C, "C")):
        for (g, f), h in cat.compose.items():
            if cat.is_identity(g) or cat.is_identity(f):
                continue
            gc, fc = gclass((tag, g)), gclass((tag, f))
            hc = None if cat.is_identity(h) else gclass((tag, h))
            lhs = tuple(x for x in (fc, gc) if x is not None)
            rhs = tuple(x for x in (hc,) if x is not None)
            src_cond = oclass((tag, cat.src[f]))
            if lhs != rhs:
                relations.append((lhs, rhs, src_cond))
    relations = sorted(set(relations))

    # Todd-Coxeter states ---------------------------------------------------
    class State:
        __slots__ = ("word", "src", "dst", "parent")

        def __init__(self, word, src, dst):
            self.word = word
            self.src = src
            self.dst = dst
            self.parent = self

    def find(s):
        while s.parent is not s:
            s.parent = s.parent.parent
            s = s.parent
        return s

    def word_key(w):
        return (len(w), w)

    states = []
    act = {}       # (letter, id(rep)) -> state
    pending = []

    obj_classes = sorted({oclass(n) for n in onodes})
    id_state = {}
    for oc in obj_classes:
        s = State((), oc, oc)
        states.append(s)
        id_state[oc] = s

    def live_count():
        return len({id(find(s)) for s in states})

    def new_state(word, src, dst):
        if len(word) > word_cap:
            raise Inconclusive(word)
        s = State(word, src, dst)
        states.append(s)
        if len(states) % 128 == 0 and live_count() > caps.max_morphisms * 4:
            raise SizeCapExceeded("pushout oracle states", live_count(), caps.max_morphisms * 4)
        return s

    def merge(s1, s2):
        r1, r2 = find(s1), find(s2)
        if r1 is r2:
            return
        lo, hi = sorted((r1, r2), key=lambda s: word_key(s.word))
        if lo.src != hi.src or lo.dst != hi.dst:
            raise GcatError("pushout oracle merged states with different endpoints")
        hi.parent = lo
        moved = [(k, v) for k, v in act.items() if k[1] == id(hi)]
        for k, v in moved:
            del act[k]
            k2 = (k[0], id(lo))
            if k2 in act:
                pending.append((act[k2], v))
            else:
                act[k2] = v

    def settle():
        while pending:
            a, b = pending.pop()
            merge(a, b)

    def get_act(letter, state, create=True):
        state = find(state)
        key = (letter, id(state))
        if key in act:
            return find(act[key])
        if not create:
            return None
        s = new_state(state.word + (letter,), state.src, letter_dst[letter])
        act[key] = s
        return s

    def walk(word, state, create=True):
        cur = find(state)
        for letter in word:
            cur = get_act(letter, cur, create)
            if cur is None:
                return None
            cur = find(cur)
        return cur

    # closure, HLT style: scan relations (filling entries) until stable, then
    # define one missing action at a time and re-stabilize
    def scan_relations():
        while True:
            settle()
            changed = False
            for lhs, rhs, src_cond in relations:
                for s in list(states):
                    if find(s) is not s or s.dst != src_cond:
                        continue
                    left = walk(lhs, s)
                    right = walk(rhs, s)
                    settle()
                    if find(left) is not find(right):
                        merge(left, right)
                        settle()
                        changed = True
            if not changed:
                return

    while True:
        scan_relations()
        missing = None
        for s in states:
            if find(s) is not s:
                continue
            for letter in letters:
                if letter_src[letter] == s.dst and (letter, id(s)) not in act:
                    missing = (letter, s)
                    break
            if missing:
                break
        if missing is None:
            break
        get_act(missing[0], missing[1])
        settle()

    # assemble the quotient category ----------------------------------------
    def obj_id(oc):
        tag, x = oc
        return x if tag == "C" else f"B:{x}"

    reps = []
    seen = set()
    for s in states:
        r = find(s)
        if id(r) not in seen:
            seen.add(id(r))
            reps.append(r)
    reps.sort(key=lambda s: word_key(s.word))

    def mor_id(state):
        r = find(state)
        if not r.word:
            return f"id:{obj_id(r.src)}"
        return "w:" + ".".join(f"{t}:{m}" for t, m in r.word)

    objects = [obj_id(oc) for oc in obj_classes]
    morphisms = [(mor_id(r), obj_id(r.src), obj_id(r.dst)) for r in reps]
    identity = {obj_id(oc): f"id:{obj_id(oc)}" for oc in obj_classes}
    compose = {}
    for g in reps:
        for f in reps:
            if find(f).dst != find(g).src:
                continue
            res = walk(find(g).word, find(f), create=False)
            if res is None:
                raise GcatError("pushout oracle closure left an undefined composite")
            compose[(mor_id(g), mor_id(f))] = mor_id(res)
    D = validate_category(objects, morphisms, identity, compose, caps)

    def leg(cat, tag):
        om = {x: obj_id(oclass((tag, x))) for x in cat.objects}
        mm = {}
        for m in cat.morphism_ids:
            gc = None if cat.is_identity(m) else gclass((tag, m))
            if gc is None:
                mm[m] = identity[om[cat.src[m]]]
            else:
                mm[m] = mor_id(get_act(gc, id_state[oclass((tag, cat.src[m]))], create=False))
        return Functor(cat, D, om, mm).validate()

    d_leg = leg(B, "B")
    j_leg = leg(C, "C")
    for a in A.morphism_ids:
        if d_leg.morphism_map[i.morphism_map[a]] != j_leg.morphism_map[c.morphism_map[a]]:
            raise GcatError("pushout cocone does not commute")
    hit = set(d_leg.morphism_map.values()) | set(j_leg.morphism_map.values())
    generated = set(hit)
    changed = True
    while changed:
        changed = False
        for (g, f), h in D.compose.items():
            if g in generated and f in generated and h not in generated:
                generated.add(h)
                changed = True
    if generated != set(D.morphism_ids):
        raise GcatError("pushout oracle produced non-generated morphisms")
    word_of = {mor_id(r): find(r).word for r in reps}
    return PresentedPushout(D, d_leg, j_leg, word_of)
