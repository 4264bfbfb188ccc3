"""Dimension-capped finite simplicial sets in nondegenerate normal form.

A simplex is stored as a normal form (core id, alpha) where the core is a
nondegenerate simplex and alpha is the monotone surjection expressing the
degeneracy (identity alpha = the core itself).  All simplicial operators are
computed by pulling normal forms back along monotone maps, so the simplicial
identities hold by construction and are also checked exhaustively.

Also here: ordered simplicial complexes with barycentric subdivision and the
poset-level hSd², nerves of categories (equivariant when an action is
present), Kan's Ex with its unit, integer homology via Smith normal form,
and capped Kan-fibration verdicts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .config import DEFAULT_CAPS, SizeCaps
from .errors import GcatError, NotAPosetNerve, SizeCapExceeded
from .fincat import (
    FinCat,
    Functor,
    Poset,
)
from .smith import smith_invariants
from . import actions as _actions


# ---------------------------------------------------------------------------
# monotone maps on finite ordinals, as tuples


def delta(i, n):
    """Coface δ_i: [n-1] -> [n] (skips i), as a tuple of length n."""
    return tuple(t if t < i else t + 1 for t in range(n))


def sigma(i, n):
    """Codegeneracy σ_i: [n+1] -> [n] (repeats i), as a tuple of length n+2."""
    return tuple(t if t <= i else t - 1 for t in range(n + 2))


def is_identity_alpha(alpha):
    return alpha == tuple(range(len(alpha)))


def compose_tuples(outer, inner):
    """outer ∘ inner as maps; inner: [k] -> [n], outer: [n] -> [m]."""
    return tuple(outer[v] for v in inner)


def surjections(n, m):
    """All monotone surjections [n] ->> [m], lexicographically ordered."""
    if m > n or m < 0:
        return
    # choose the m positions (out of n steps) where the value increases
    for incr in itertools.combinations(range(1, n + 1), m):
        alpha = []
        v = 0
        s = set(incr)
        for t in range(n + 1):
            if t in s:
                v += 1
            alpha.append(v)
        yield tuple(alpha)


# ---------------------------------------------------------------------------
# finite simplicial sets


@dataclass(eq=False)
class FinSSet:
    """Nondegenerate simplices per dimension with faces in normal form."""

    cap: int
    cells: dict   # dim -> tuple of nondegenerate simplex ids (sorted)
    faces: dict   # (dim, id) -> tuple of normal forms (length dim+1)

    def n_nondeg(self, n):
        return len(self.cells.get(n, ()))

    def dims(self):
        return [n for n in range(self.cap + 1) if self.cells.get(n)]

    def nf_of(self, n, sid):
        return (sid, tuple(range(n + 1)))

    def dim_of_nf(self, nf):
        return len(nf[1]) - 1

    def pull(self, nf, f):
        """f*(simplex): pull a normal form back along a monotone map f.

        f is a tuple [k] -> [dim(nf)], not necessarily surjective.
        """
        core, alpha = nf
        g = compose_tuples(alpha, f)
        mdim = alpha[-1] if alpha else -1
        img = sorted(set(g))
        cur = (core, tuple(range(mdim + 1)))
        img_set = set(img)
        for s in range(mdim, -1, -1):
            if s in img_set:
                continue
            ccore, calpha = cur
            cdim = len(calpha) - 1
            if is_identity_alpha(calpha):
                cur = self.faces[(cdim, ccore)][s]
            else:
                cur = self.pull(cur, delta(s, cdim))
        ccore, calpha = cur
        return (ccore, tuple(calpha[img.index(v)] for v in g))

    def face(self, nf, i):
        return self.pull(nf, delta(i, self.dim_of_nf(nf)))

    def degeneracy(self, nf, i):
        core, alpha = nf
        return (core, compose_tuples(alpha, sigma(i, self.dim_of_nf(nf))))

    def all_simplices(self, n):
        """All n-simplices (including degenerate) as normal forms."""
        out = []
        for m in range(n + 1):
            for cid in self.cells.get(m, ()):
                for alpha in surjections(n, m):
                    out.append((cid, alpha))
        return out

    def total_count(self, n):
        from math import comb
        return sum(comb(n, m) * self.n_nondeg(m) for m in range(n + 1))

    def validate(self, caps: SizeCaps = DEFAULT_CAPS):
        for n in self.dims():
            ids = self.cells[n]
            if list(ids) != sorted(set(ids)):
                raise GcatError(f"simplex ids at dim {n} not sorted/unique")
            if len(ids) > caps.max_simplices:
                raise SizeCapExceeded("simplices", len(ids), caps.max_simplices)
            if n == 0:
                continue
            for sid in ids:
                fs = self.faces.get((n, sid))
                if fs is None or len(fs) != n + 1:
                    raise GcatError(f"faces missing for ({n},{sid})")
                for nf in fs:
                    core, alpha = nf
                    if len(alpha) != n or not all(alpha[i] <= alpha[i + 1] for i in range(len(alpha) - 1)):
                        raise GcatError(f"bad face normal form on ({n},{sid})")
                    cdim = alpha[-1]
                    if set(alpha) != set(range(cdim + 1)):
                        raise GcatError(f"face alpha not surjective on ({n},{sid})")
                    if core not in set(self.cells.get(cdim, ())):
                        raise GcatError(f"face core {core!r} unknown at dim {cdim}")
        # simplicial identities d_i d_j = d_{j-1} d_i for i < j
        for n in self.dims():
            if n < 2:
                continue
            for sid in self.cells[n]:
                nf = self.nf_of(n, sid)
                for j in range(n + 1):
                    for i in range(j):
                        if self.face(self.face(nf, j), i) != self.face(self.face(nf, i), j - 1):
                            raise GcatError(f"simplicial identity fails at ({n},{sid},d{i},d{j})")
        return self

    def to_doc(self):
        return {
            "cap": self.cap,
            "cells": {str(n): list(self.cells[n]) for n in self.dims()},
            "faces": [
                [n, sid, [[c, list(a)] for c, a in self.faces[(n, sid)]]]
                for n in self.dims() if n >= 1 for sid in self.cells[n]
            ],
        }


def sset_from_doc(doc) -> FinSSet:
    cells = {int(n): tuple(v) for n, v in doc["cells"].items()}
    faces = {}
    for n, sid, fs in doc["faces"]:
        faces[(int(n), sid)] = tuple((c, tuple(a)) for c, a in fs)
    return FinSSet(int(doc["cap"]), cells, faces).validate()


def empty_sset(cap=3):
    return FinSSet(cap, {}, {})


def point_sset(cap=3):
    return FinSSet(cap, {0: ("*",)}, {})


# ---------------------------------------------------------------------------
# simplicial maps


@dataclass(eq=False)
class SSetMap:
    source: FinSSet
    target: FinSSet
    values: dict  # (dim, nondeg id) -> normal form in target, same dimension

    def apply(self, nf):
        core, alpha = nf
        tc, ta = self.values[(alpha[-1], core)]
        return (tc, compose_tuples(ta, alpha))

    def validate(self):
        for n in self.source.dims():
            for sid in self.source.cells[n]:
                v = self.values.get((n, sid))
                if v is None:
                    raise GcatError(f"map undefined on ({n},{sid})")
                if self.target.dim_of_nf(v) != n:
                    raise GcatError(f"map changes dimension on ({n},{sid})")
                core, alpha = v
                if core not in set(self.target.cells.get(alpha[-1], ())):
                    raise GcatError(f"map value core unknown on ({n},{sid})")
                if n >= 1:
                    for i in range(n + 1):
                        lhs = self.apply(self.source.faces[(n, sid)][i])
                        rhs = self.target.face(v, i)
                        if lhs != rhs:
                            raise GcatError(f"map breaks face d{i} on ({n},{sid})")
        return self

    def then(self, other: "SSetMap") -> "SSetMap":
        vals = {k: other.apply(v) for k, v in self.values.items()}
        return SSetMap(self.source, other.target, vals)

    def same_values(self, other: "SSetMap"):
        return self.values == other.values

    def is_injective(self):
        for n in self.source.dims():
            vals = [self.values[(n, s)] for s in self.source.cells[n]]
            if len(set(vals)) != len(vals):
                return False
            if any(not is_identity_alpha(a) for _, a in vals):
                return False
        return True

    def is_isomorphism(self):
        if not self.is_injective():
            return False
        for n in set(self.source.dims()) | set(self.target.dims()):
            if self.source.n_nondeg(n) != self.target.n_nondeg(n):
                return False
        return True


def identity_sset_map(X: FinSSet) -> SSetMap:
    return SSetMap(X, X, {(n, s): X.nf_of(n, s) for n in X.dims() for s in X.cells[n]})


def constant_sset_map(X: FinSSet, P: FinSSet) -> SSetMap:
    """Collapse to the least vertex of P (P must have one)."""
    v = P.cells[0][0]
    vals = {}
    for n in X.dims():
        for s in X.cells[n]:
            vals[(n, s)] = (v, (0,) * (n + 1))
    return SSetMap(X, P, vals)


# ---------------------------------------------------------------------------
# ordered complexes, subdivision, hSd²


@dataclass(frozen=True, eq=False)
class OrderedComplex:
    """Vertices totally ordered (sorted tuple); faces a downward-closed family
    of nonempty vertex subsets, stored as sorted tuples."""

    vertices: tuple
    faces: frozenset

    def __post_init__(self):
        vs = set(self.vertices)
        for f in self.faces:
            if not f or list(f) != sorted(set(f)) or not set(f) <= vs:
                raise GcatError(f"bad face {f!r}")
            if len(f) > 1:
                for sub in itertools.combinations(f, len(f) - 1):
                    if tuple(sub) not in self.faces:
                        raise GcatError(f"complex not downward closed at {f!r}")

    def dim(self):
        return max((len(f) - 1 for f in self.faces), default=-1)


def make_complex(faces) -> OrderedComplex:
    """Downward closure of the given generating faces."""
    closed = set()
    for f in faces:
        f = tuple(sorted(set(str(v) for v in f)))
        for k in range(1, len(f) + 1):
            for sub in itertools.combinations(f, k):
                closed.add(tuple(sub))
    vertices = tuple(sorted({v for f in closed for v in f}))
    return OrderedComplex(vertices, frozenset(closed))


def standard_simplex_complex(n):
    """Δⁿ on vertices '0'..'n' (single digits only used for n <= 9)."""
    return make_complex([tuple(str(i) for i in range(n + 1))])


def boundary_complex(n):
    """∂Δⁿ: all proper faces; ∂Δ⁰ is empty."""
    if n == 0:
        return OrderedComplex((), frozenset())
    top = [str(i) for i in range(n + 1)]
    return make_complex(itertools.combinations(top, n))


def horn_complex(n, k):
    """Λⁿ_k: all faces except the top and the k-th facet; requires n >= 1."""
    if not (0 <= k <= n and n >= 1):
        raise GcatError(f"bad horn indices ({n},{k})")
    top = [str(i) for i in range(n + 1)]
    gens = [f for f in itertools.combinations(top, n) if str(k) in f]
    return make_complex(gens)


def complex_to_sset(K: OrderedComplex, cap=3) -> FinSSet:
    """A complex as a simplicial set; nondegenerate m-simplices = m-faces."""
    cells = {}
    faces = {}
    for f in sorted(K.faces, key=lambda f: (len(f), f)):
        n = len(f) - 1
        if n > cap:
            continue
        fid = ",".join(f)
        cells.setdefault(n, []).append(fid)
        if n >= 1:
            faces[(n, fid)] = tuple(
                (",".join(f[:i] + f[i + 1:]), tuple(range(n))) for i in range(n + 1)
            )
    return FinSSet(cap, {n: tuple(sorted(v)) for n, v in cells.items()}, faces).validate()


def complex_inclusion(K: OrderedComplex, L: OrderedComplex, cap=3) -> SSetMap:
    XK, XL = complex_to_sset(K, cap), complex_to_sset(L, cap)
    vals = {}
    for n in XK.dims():
        for s in XK.cells[n]:
            vals[(n, s)] = (s, tuple(range(n + 1)))
    return SSetMap(XK, XL, vals).validate()


def face_poset(K: OrderedComplex) -> Poset:
    """Nonempty faces ordered by inclusion; elements rendered as joined ids."""
    els = sorted(K.faces, key=lambda f: (len(f), f))
    names = {f: ",".join(f) for f in els}
    leq = set()
    for a in els:
        for b in els:
            if set(a) <= set(b):
                leq.add((names[a], names[b]))
    return Poset(tuple(sorted(names.values())), frozenset(leq))


def sd(K: OrderedComplex) -> Poset:
    """Barycentric subdivision as the inclusion poset of nonempty faces."""
    return face_poset(K)


def sd_complex(K: OrderedComplex) -> OrderedComplex:
    """Order complex of the face poset: vertices = faces of K, ordered by
    (dimension, lexicographic); the dimension prefix makes the name order
    agree with that order, so chains are oriented by inclusion."""
    els = sorted(K.faces, key=lambda f: (len(f), f))
    names = [f"{len(f) - 1}|{','.join(f)}" for f in els]
    below = {names[i]: els[i] for i in range(len(els))}
    chains = []

    def grow(chain):
        chains.append(tuple(chain))
        last = below[chain[-1]]
        for nm in names:
            f = below[nm]
            if set(last) < set(f):
                grow(chain + [nm])

    for nm in names:
        grow([nm])
    if not names:
        return OrderedComplex((), frozenset())
    return OrderedComplex(tuple(sorted(names)), frozenset(tuple(sorted(c)) for c in chains))


def chain_poset_of(P: Poset) -> Poset:
    """Poset of nonempty chains of P, ordered by inclusion."""
    chains = []

    def grow(chain):
        chains.append(tuple(chain))
        for e in P.elements:
            if e != chain[-1] and P.le(chain[-1], e):
                grow(chain + [e])

    for e in P.elements:
        grow([e])
    names = {c: "<".join(c) for c in chains}
    leq = set()
    for a in chains:
        for b in chains:
            if set(a) <= set(b):
                leq.add((names[a], names[b]))
    return Poset(tuple(sorted(names.values())), frozenset(leq))


def h_sd2(K: OrderedComplex) -> FinCat:
    """hSd²K: the chain poset of the face poset of K, as a finite category."""
    return chain_poset_of(face_poset(K)).to_fincat()


def h_sd2_map(K: OrderedComplex, L: OrderedComplex) -> Functor:
    """The functor hSd²K -> hSd²L induced by an inclusion K ⊆ L."""
    if not K.faces <= L.faces:
        raise GcatError("K is not a subcomplex of L")
    CK, CL = h_sd2(K), h_sd2(L)
    om = {x: x for x in CK.objects}
    mm = {m: m for m in CK.morphism_ids}
    return Functor(CK, CL, om, mm).validate()


# ---------------------------------------------------------------------------
# nerves


def chain_id(chain):
    return "|".join(chain)


def nerve(C: FinCat, cap=3, caps: SizeCaps = DEFAULT_CAPS) -> FinSSet:
    """N(C): n-simplices are length-n composable chains; nondegenerate ones
    contain no identities."""
    nonid = [m for m in C.morphism_ids if not C.is_identity(m)]
    by_src = {}
    for m in nonid:
        by_src.setdefault(C.src[m], []).append(m)
    cells = {0: tuple(sorted(C.objects))}
    faces = {}
    prev = [(x,) for x in C.objects] if C.objects else []
    level = [(m,) for m in sorted(nonid)]
    n = 1
    while n <= cap and level:
        ids = sorted(chain_id(ch) for ch in level)
        if len(ids) > caps.max_simplices:
            raise SizeCapExceeded("nerve simplices", len(ids), caps.max_simplices)
        cells[n] = tuple(ids)
        for ch in level:
            faces[(n, chain_id(ch))] = tuple(_nerve_face(C, ch, i) for i in range(n + 1))
        nxt = []
        for ch in level:
            for m in by_src.get(C.dst[ch[-1]], ()):
                nxt.append(ch + (m,))
        level = nxt
        n += 1
    X = FinSSet(cap, cells, faces)
    X.validate(caps)
    return X


def _nerve_face(C: FinCat, chain, i):
    n = len(chain)
    if i == 0:
        new = chain[1:]
        base = C.dst[chain[0]]
    elif i == n:
        new = chain[:-1]
        base = C.src[chain[0]]
    else:
        new = chain[:i - 1] + (C.compose[(chain[i], chain[i - 1])],) + chain[i + 1:]
        base = C.src[chain[0]]
    return _normalize_chain(C, new, base)


def _normalize_chain(C: FinCat, chain, base=None):
    core = tuple(m for m in chain if not C.is_identity(m))
    alpha = [0]
    v = 0
    for m in chain:
        if not C.is_identity(m):
            v += 1
        alpha.append(v)
    if core:
        cid = chain_id(core)
    else:
        cid = base if base is not None else C.src[chain[0]]
    return (cid, tuple(alpha))


def nerve_vertex_object(C: FinCat, sid):
    return sid


def nerve_functor(F: Functor, NX: FinSSet, NY: FinSSet, cap=3) -> SSetMap:
    """N(F) on already-built nerves."""
    C, D = F.source, F.target
    vals = {}
    for sid in NX.cells.get(0, ()):
        vals[(0, sid)] = (F.object_map[sid], (0,))
    for n in range(1, cap + 1):
        for sid in NX.cells.get(n, ()):
            chain = tuple(sid.split("|"))
            image = tuple(F.morphism_map[m] for m in chain)
            vals[(n, sid)] = _normalize_chain(D, image)
    return SSetMap(NX, NY, vals)


def h_poset_nerve(X: FinSSet) -> FinCat:
    """h on the nerve of a poset: rebuild the poset; refuse anything else."""
    if not X.cells.get(0):
        return FinCat((), (), {}, {})
    verts = X.cells[0]
    leq = {(v, v) for v in verts}
    for e in X.cells.get(1, ()):
        fs = X.faces[(1, e)]
        x = fs[1][0]
        y = fs[0][0]
        leq.add((x, y))
    try:
        P = Poset(tuple(verts), frozenset(leq))
    except GcatError as exc:
        raise NotAPosetNerve(str(exc)) from exc
    # exactness: the nerve of P must reproduce X on the nose
    NP = nerve(P.to_fincat(), X.cap)
    for n in set(X.dims()) | set(NP.dims()):
        if X.n_nondeg(n) != NP.n_nondeg(n):
            raise NotAPosetNerve(f"simplex count differs from a poset nerve at dim {n}")
    return P.to_fincat()


# ---------------------------------------------------------------------------
# products, pushouts, subobjects


def product_sset(X: FinSSet, Y: FinSSet, cap=None, caps: SizeCaps = DEFAULT_CAPS) -> FinSSet:
    """X × Y; nondegenerate simplices are pairs of normal forms sharing no
    common degeneracy position (Eilenberg-Zilber)."""
    if cap is None:
        cap = min(X.cap, Y.cap)

    def pair_id(nx, ny):
        return f"{nx[0]}[{','.join(map(str, nx[1]))}]*{ny[0]}[{','.join(map(str, ny[1]))}]"

    def joint_normalize(nx, ny):
        ax, ay = nx[1], ny[1]
        n = len(ax) - 1
        keep = [0] + [t for t in range(1, n + 1) if ax[t] != ax[t - 1] or ay[t] != ay[t - 1]]
        beta = []
        v = 0
        for t in range(n + 1):
            if t in keep[1:]:
                v += 1
            beta.append(v)
        sub = tuple(keep)
        cx = (nx[0], compose_tuples(ax, sub))
        cy = (ny[0], compose_tuples(ay, sub))
        return cx, cy, tuple(beta)

    cells = {}
    faces = {}
    pairs_at = {}
    for n in range(cap + 1):
        pairs = []
        for nx in X.all_simplices(n):
            for ny in Y.all_simplices(n):
                cx, cy, beta = joint_normalize(nx, ny)
                if is_identity_alpha(beta):
                    pairs.append((nx, ny))
        if len(pairs) > caps.max_simplices:
            raise SizeCapExceeded("product simplices", len(pairs), caps.max_simplices)
        pairs_at[n] = {pair_id(nx, ny): (nx, ny) for nx, ny in pairs}
        cells[n] = tuple(sorted(pairs_at[n]))
    for n in range(1, cap + 1):
        for pid, (nx, ny) in pairs_at[n].items():
            fs = []
            for i in range(n + 1):
                fx = X.face(nx, i)
                fy = Y.face(ny, i)
                cx, cy, beta = joint_normalize(fx, fy)
                fs.append((pair_id(cx, cy), beta))
            faces[(n, pid)] = tuple(fs)
    Z = FinSSet(cap, {n: v for n, v in cells.items() if v}, faces)
    Z.validate(caps)
    return Z


def product_projections_sset(X: FinSSet, Y: FinSSet, P: FinSSet):
    def parse(pid):
        left, right = pid.split("]*")
        cx, ax = left.rsplit("[", 1)
        cy, ay = right[:-1].rsplit("[", 1)
        return (cx, tuple(int(v) for v in ax.split(","))), (cy, tuple(int(v) for v in ay.split(",")))

    vx, vy = {}, {}
    for n in P.dims():
        for pid in P.cells[n]:
            nx, ny = parse(pid)
            vx[(n, pid)] = nx
            vy[(n, pid)] = ny
    return SSetMap(P, X, vx), SSetMap(P, Y, vy)


def pair_into_product(f: SSetMap, g: SSetMap, P: FinSSet) -> SSetMap:
    """(f, g): W -> X × Y for maps with common source."""
    def pid(nx, ny):
        return f"{nx[0]}[{','.join(map(str, nx[1]))}]*{ny[0]}[{','.join(map(str, ny[1]))}]"

    vals = {}
    W = f.source
    for n in W.dims():
        for s in W.cells[n]:
            nx = f.values[(n, s)]
            ny = g.values[(n, s)]
            ax, ay = nx[1], ny[1]
            keep = [0] + [t for t in range(1, n + 1) if ax[t] != ax[t - 1] or ay[t] != ay[t - 1]]
            beta = []
            v = 0
            for t in range(n + 1):
                if t in keep[1:]:
                    v += 1
                beta.append(v)
            sub = tuple(keep)
            cx = (nx[0], compose_tuples(ax, sub))
            cy = (ny[0], compose_tuples(ay, sub))
            vals[(n, s)] = (pid(cx, cy), tuple(beta))
    return SSetMap(W, P, vals)


def pushout_sset(f: SSetMap, g: SSetMap, caps: SizeCaps = DEFAULT_CAPS):
    """Pushout of B <-f- A -g-> C along a levelwise-injective f.

    Returns (P, from_B, from_C).  Nondegenerate simplices of P are those of C
    plus those of B not hit by f; ids from B are prefixed 'B:'.
    """
    A, B, C = f.source, f.target, g.target
    if not f.is_injective():
        raise GcatError("pushout_sset requires an injective first leg")
    cap = min(B.cap, C.cap)
    image = {}
    for n in A.dims():
        for s in A.cells[n]:
            image[(n, f.values[(n, s)][0])] = (n, s)

    def tag_b(n, sid):
        return (n, f"B:{sid}")

    cells = {}
    rename = {}
    for n in range(cap + 1):
        ids = list(C.cells.get(n, ()))
        for sid in B.cells.get(n, ()):
            if (n, sid) in image:
                am = image[(n, sid)]
                rename[(n, sid)] = g.values[am]
            else:
                ids.append(f"B:{sid}")
                rename[(n, sid)] = (f"B:{sid}", tuple(range(n + 1)))
        if ids:
            cells[n] = tuple(sorted(ids))

    def push_b(nf):
        core, alpha = nf
        ncore = alpha[-1]
        rcore, ralpha = rename[(ncore, core)]
        return (rcore, compose_tuples(ralpha, alpha))

    faces = {}
    for n in range(1, cap + 1):
        for sid in C.cells.get(n, ()):
            faces[(n, sid)] = C.faces[(n, sid)]
        for sid in B.cells.get(n, ()):
            if (n, sid) in image:
                continue
            faces[(n, f"B:{sid}")] = tuple(push_b(nf) for nf in B.faces[(n, sid)])
    P = FinSSet(cap, cells, faces)
    P.validate(caps)
    from_c = SSetMap(C, P, {(n, s): P.nf_of(n, s) for n in C.dims() for s in C.cells[n]}).validate()
    from_b = SSetMap(B, P, {(n, s): rename[(n, s)] for n in B.dims() for s in B.cells[n]}).validate()
    return P, from_b, from_c


def sub_sset(X: FinSSet, keep) -> FinSSet:
    """Simplicial subset on a face-closed set of nondegenerate simplices.

    keep: set of (dim, id).
    """
    cells = {}
    faces = {}
    for n in X.dims():
        ids = [s for s in X.cells[n] if (n, s) in keep]
        if ids:
            cells[n] = tuple(sorted(ids))
        for s in ids:
            if n >= 1:
                faces[(n, s)] = X.faces[(n, s)]
    Y = FinSSet(X.cap, cells, faces)
    for (n, s), fs in faces.items():
        for core, alpha in fs:
            if (alpha[-1], core) not in keep:
                raise GcatError("sub_sset: kept set is not face-closed")
    return Y


# ---------------------------------------------------------------------------
# actions on simplicial sets


@dataclass(eq=False)
class MonoidActionSSet:
    monoid: object
    carrier: FinSSet
    act: dict  # element -> SSetMap (endomap of carrier)

    def validate(self):
        ident = identity_sset_map(self.carrier)
        for m in self.monoid.elements:
            f = self.act.get(m)
            if f is None:
                raise GcatError(f"simplicial action undefined at {m!r}")
            f.validate()
        if not self.act[self.monoid.unit].same_values(ident):
            raise GcatError("unit does not act as the identity")
        for m in self.monoid.elements:
            for n in self.monoid.elements:
                if not self.act[n].then(self.act[m]).same_values(self.act[self.monoid.mul(m, n)]):
                    raise GcatError(f"simplicial act({m!r}·{n!r}) ≠ act({m!r})∘act({n!r})")
        return self


def equivariant_nerve(A: "_actions.MonoidActionCat", cap=3, caps: SizeCaps = DEFAULT_CAPS) -> MonoidActionSSet:
    """N(C) with each monoid element acting by the nerve of its endofunctor."""
    NX = nerve(A.carrier, cap, caps)
    act = {m: nerve_functor(A.act[m], NX, NX, cap).validate() for m in A.monoid.elements}
    return MonoidActionSSet(A.monoid, NX, act).validate()


def fixed_sset(A: MonoidActionSSet, H) -> FinSSet:
    """X^H: the simplicial subset of simplices fixed by every h in H."""
    keep = set()
    for n in A.carrier.dims():
        for s in A.carrier.cells[n]:
            nf = A.carrier.nf_of(n, s)
            if all(A.act[h].apply(nf) == nf for h in H.elements):
                keep.add((n, s))
    return sub_sset(A.carrier, keep)


def fixed_sset_map(f: SSetMap, A: MonoidActionSSet, B: MonoidActionSSet, H) -> SSetMap:
    XH = fixed_sset(A, H)
    YH = fixed_sset(B, H)
    vals = {(n, s): f.values[(n, s)] for n in XH.dims() for s in XH.cells[n]}
    return SSetMap(XH, YH, vals).validate()


# ---------------------------------------------------------------------------
# homology


def boundary_matrix(X: FinSSet, n):
    """Normalized boundary ∂_n as sparse entries over the nondegenerate bases."""
    if n <= 0:
        return 0, X.n_nondeg(0), {}
    rows = {s: i for i, s in enumerate(X.cells.get(n - 1, ()))}
    entries = {}
    for j, sid in enumerate(X.cells.get(n, ())):
        for i, nf in enumerate(X.faces[(n, sid)]):
            core, alpha = nf
            if is_identity_alpha(alpha):
                key = (rows[core], j)
                entries[key] = entries.get(key, 0) + (-1) ** i
    return len(rows), X.n_nondeg(n), {k: v for k, v in entries.items() if v}


def homology(X: FinSSet, cap=None):
    """Integer homology of the normalized chain complex.

    Returns [(betti, sorted torsion invariants > 1)] for degrees 0..cap-1;
    X must be materialized up to `cap` for the top degree to be correct.
    """
    if cap is None:
        cap = X.cap
    ranks = {}
    invs = {}
    for n in range(cap + 1):
        r, c, entries = boundary_matrix(X, n)
        inv = smith_invariants(r, c, entries) if n >= 1 else []
        ranks[n] = len(inv)
        invs[n] = inv
    out = []
    for k in range(cap):
        betti = X.n_nondeg(k) - ranks.get(k, 0) - ranks.get(k + 1, 0)
        torsion = [d for d in invs.get(k + 1, []) if d > 1]
        out.append((betti, tuple(torsion)))
    return out


def pi0(X: FinSSet):
    """Connected components: partition of vertices by 1-simplices."""
    parent = {v: v for v in X.cells.get(0, ())}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in X.cells.get(1, ()):
        fs = X.faces[(1, e)]
        a, b = fs[1][0], fs[0][0]
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    comp = {}
    for v in X.cells.get(0, ()):
        comp.setdefault(find(v), set()).add(v)
    return {min(vs): vs for vs in comp.values()}


def pi0_map(f: SSetMap):
    """Induced map on components; returns (bijective?, mapping)."""
    cs = pi0(f.source)
    ct = pi0(f.target)
    t_rep = {}
    for rep, vs in ct.items():
        for v in vs:
            t_rep[v] = rep
    mapping = {}
    for rep in cs:
        img_vertex = f.values[(0, rep)][0]
        mapping[rep] = t_rep[img_vertex]
    image = set(mapping.values())
    bij = len(cs) == len(ct) == len(image)
    return bij, mapping


# ---------------------------------------------------------------------------
# Kan's Ex functor


class _SdData:
    """Combinatorics of Sd Δⁿ: nondegenerate simplices are strict chains in
    the face poset of Δⁿ."""

    _cache = {}

    def __new__(cls, n):
        if n in cls._cache:
            return cls._cache[n]
        self = super().__new__(cls)
        self.n = n
        faces = []
        for k in range(1, n + 2):
            faces.extend(itertools.combinations(range(n + 1), k))
        faces.sort(key=lambda f: (len(f), f))
        self.faces = faces
        self.chains = {}
        self.chain_index = {}

        def grow(chain):
            d = len(chain) - 1
            self.chains.setdefault(d, []).append(tuple(chain))
            for f in faces:
                if set(chain[-1]) < set(f):
                    grow(chain + [f])

        for f in faces:
            grow([f])
        for d in self.chains:
            self.chains[d].sort()
            for i, c in enumerate(self.chains[d]):
                self.chain_index[c] = (d, i)
        self.max_dim = max(self.chains)
        # search order groups chains by their top face so constraints bind early
        face_pos = {f: i for i, f in enumerate(faces)}
        self.search_order = sorted(
            (c for d in self.chains for c in self.chains[d]),
            key=lambda c: (face_pos[c[-1]], len(c), c),
        )
        cls._cache[n] = self
        return self

    def chain_face(self, chain, j):
        return chain[:j] + chain[j + 1:]

    def ordered_chains(self, up_to):
        out = []
        for d in range(up_to + 1):
            out.extend(self.chains.get(d, []))
        return out


def _strictify(seq):
    """Collapse equal consecutive entries; returns (strict tuple, surjection)."""
    strict = [seq[0]]
    beta = [0]
    for v in seq[1:]:
        if v != strict[-1]:
            strict.append(v)
        beta.append(len(strict) - 1)
    return tuple(strict), tuple(beta)


def _enumerate_sd_maps(n, X: FinSSet, caps: SizeCaps, prescribed=None, first_only=False,
                       counter=None):
    """All simplicial maps Sd Δⁿ -> X as assignments chain -> normal form.

    `prescribed` pins values on some chains; yields dicts.
    """
    sdd = _SdData(n)
    order = sdd.search_order
    # candidates per dimension, indexed by their full face tuple
    pool0 = [(v, (0,)) for v in X.cells.get(0, ())]
    by_faces = {}
    for d in range(1, sdd.max_dim + 1):
        index = {}
        for v in X.all_simplices(d):
            key = tuple(X.face(v, j) for j in range(d + 1))
            index.setdefault(key, []).append(v)
        by_faces[d] = index
    if counter is None:
        counter = [0]
    assignment = {}
    out = []

    def backtrack(idx):
        counter[0] += 1
        if counter[0] > caps.max_candidates:
            raise SizeCapExceeded("Sd-map enumeration", counter[0], caps.max_candidates)
        if idx == len(order):
            out.append(dict(assignment))
            return not first_only
        chain = order[idx]
        d = len(chain) - 1
        if d == 0:
            cands = pool0
        else:
            key = tuple(assignment[sdd.chain_face(chain, j)] for j in range(d + 1))
            cands = by_faces[d].get(key, ())
        if prescribed and chain in prescribed:
            want = prescribed[chain]
            cands = [v for v in cands if v == want]
        for v in cands:
            assignment[chain] = v
            if not backtrack(idx + 1):
                return False
            del assignment[chain]
        return True

    backtrack(0)
    return out


@dataclass(eq=False)
class ExSSet:
    """Materialized Ex(X) with the assignment dictionaries kept around."""

    base: FinSSet
    sset: FinSSet
    level_nf: dict      # n -> {assignment key: normal form}
    level_assign: dict  # n -> {nondeg id: assignment dict}

    def assignment_key(self, n, assignment):
        sdd = _SdData(n)
        return tuple(assignment[c] for c in sdd.ordered_chains(sdd.max_dim))

    def nf_of_assignment(self, n, assignment):
        return self.level_nf[n][self.assignment_key(n, assignment)]


def _sd_sigma_chain_value(X: FinSSet, psi, chain, j, n):
    """Value of psi∘Sd(σ_j) at a strict chain of Sd Δⁿ (psi at level n-1)."""
    image = [tuple(sorted({v if v <= j else v - 1 for v in F})) for F in chain]
    strict, beta = _strictify(image)
    return X.pull(psi[strict], beta)


def ex(X: FinSSet, cap=None, caps: SizeCaps = DEFAULT_CAPS) -> ExSSet:
    """Ex(X): n-simplices are simplicial maps Sd Δⁿ -> X, enumerated exhaustively."""
    if cap is None:
        cap = min(X.cap, 3)
    level_nf = {}
    level_assign = {}
    cells = {}
    faces = {}
    prev_maps = None
    for n in range(cap + 1):
        maps_n = _enumerate_sd_maps(n, X, caps)
        sdd = _SdData(n)
        order = sdd.ordered_chains(sdd.max_dim)

        def key_of(assignment, _order=order):
            return tuple(assignment[c] for c in _order)

        nf_table = {}
        if n > 0:
            # mark degenerate maps: s_j of level-(n-1) maps
            for pk, psi in prev_maps.items():
                pc, pa = level_nf[n - 1][pk]
                for j in range(n):
                    im = {}
                    for chain in order:
                        im[chain] = _sd_sigma_chain_value(X, psi, chain, j, n)
                    nf_table.setdefault(key_of(im), (pc, compose_tuples(pa, sigma(j, n - 1))))
        nondeg = sorted(k for k in map(key_of, maps_n) if k not in nf_table)
        ids = {}
        for i, k in enumerate(nondeg):
            sid = f"x{n}.{i:05d}"
            ids[k] = sid
            nf_table[k] = (sid, tuple(range(n + 1)))
        if len(nondeg) > caps.max_simplices:
            raise SizeCapExceeded("Ex simplices", len(nondeg), caps.max_simplices)
        level_nf[n] = {key_of(m): nf_table[key_of(m)] for m in maps_n}
        level_assign[n] = {}
        for m in maps_n:
            k = key_of(m)
            if k in ids:
                level_assign[n][ids[k]] = m
        cells[n] = tuple(sorted(ids.values()))
        if n > 0:
            sdd_prev = _SdData(n - 1)
            order_prev = sdd_prev.ordered_chains(sdd_prev.max_dim)
            for k, sid in ids.items():
                assignment = level_assign[n][sid]
                fs = []
                for i in range(n + 1):
                    dl = delta(i, n)
                    restricted = {}
                    for chain in order_prev:
                        image = tuple(tuple(sorted(dl[v] for v in F)) for F in chain)
                        restricted[chain] = assignment[image]
                    fs.append(level_nf[n - 1][tuple(restricted[c] for c in order_prev)])
                faces[(n, sid)] = tuple(fs)
        prev_maps = {key_of(m): m for m in maps_n}
    S = FinSSet(cap, {n: v for n, v in cells.items() if v}, faces)
    S.validate(caps)
    return ExSSet(X, S, level_nf, level_assign)


def e_map(X: FinSSet, exd: ExSSet) -> SSetMap:
    """The last-vertex unit e: X -> Ex(X); natural and injective."""
    vals = {}
    for n in X.dims():
        if n > exd.sset.cap:
            break
        sdd = _SdData(n)
        for sid in X.cells[n]:
            nf = X.nf_of(n, sid)
            assignment = {}
            for chain in sdd.ordered_chains(sdd.max_dim):
                lv = tuple(max(F) for F in chain)
                assignment[chain] = X.pull(nf, lv)
            vals[(n, sid)] = exd.nf_of_assignment(n, assignment)
    return SSetMap(X, exd.sset, vals).validate()


def ex_map(f: SSetMap, exd_src: ExSSet, exd_dst: ExSSet) -> SSetMap:
    """Ex(f) by postcomposition of assignments."""
    vals = {}
    for n in exd_src.sset.dims():
        for sid in exd_src.sset.cells[n]:
            assignment = exd_src.level_assign[n][sid]
            image = {c: f.apply(v) for c, v in assignment.items()}
            vals[(n, sid)] = exd_dst.nf_of_assignment(n, image)
    return SSetMap(exd_src.sset, exd_dst.sset, vals)


def ex_action(A: MonoidActionSSet, exd: ExSSet) -> MonoidActionSSet:
    act = {m: ex_map(A.act[m], exd, exd).validate() for m in A.monoid.elements}
    return MonoidActionSSet(A.monoid, exd.sset, act).validate()


# ---------------------------------------------------------------------------
# Kan fibration checks


@dataclass
class KanVerdict:
    passed: bool
    cap: int
    problems_checked: int
    failure: object = None  # (n, k, horn description) for the first failure

    def __bool__(self):
        return self.passed


def _horns(X: FinSSet, n, k, caps: SizeCaps):
    """All horn data: tuples x_j (j != k) of (n-1)-simplices with matching faces."""
    idx = [j for j in range(n + 1) if j != k]
    simplices = X.all_simplices(n - 1)
    out = []
    counter = [0]

    def backtrack(pos, chosen):
        counter[0] += 1
        if counter[0] > caps.max_candidates:
            raise SizeCapExceeded("horn enumeration", counter[0], caps.max_candidates)
        if pos == len(idx):
            out.append(dict(chosen))
            return
        j = idx[pos]
        for v in simplices:
            ok = True
            for i in idx[:pos]:
                if i < j:
                    # d_i x_j = d_{j-1} x_i
                    if n >= 2 and X.face(v, i) != X.face(chosen[i], j - 1):
                        ok = False
                        break
                else:
                    if n >= 2 and X.face(v, j) != X.face(chosen[i], j):
                        ok = False
                        break
            if ok:
                chosen[j] = v
                backtrack(pos + 1, chosen)
                del chosen[j]

    backtrack(0, {})
    return out


def is_kan_fibration(f: SSetMap, cap=3, caps: SizeCaps = DEFAULT_CAPS) -> KanVerdict:
    """Exhaustive horn-lifting check for n <= cap; the verdict carries its cap."""
    X, Y = f.source, f.target
    checked = 0
    for n in range(1, cap + 1):
        x_simplices = X.all_simplices(n)
        y_simplices = Y.all_simplices(n)
        for k in range(n + 1):
            for horn in _horns(X, n, k, caps):
                fimage = {j: f.apply(v) for j, v in horn.items()}
                for y in y_simplices:
                    if any(Y.face(y, j) != fimage[j] for j in horn):
                        continue
                    checked += 1
                    lift = None
                    for z in x_simplices:
                        if f.apply(z) != y:
                            continue
                        if any(X.face(z, j) != horn[j] for j in horn):
                            continue
                        lift = z
                        break
                    if lift is None:
                        return KanVerdict(False, cap, checked, (n, k, sorted(horn.items()), y))
    return KanVerdict(True, cap, checked)


def is_kan_complex(X: FinSSet, cap=3, caps: SizeCaps = DEFAULT_CAPS) -> KanVerdict:
    dims = X.dims()
    if not dims:
        return KanVerdict(True, cap, 0)
    pt = point_sset(max(X.cap, cap))
    return is_kan_fibration(constant_sset_map(X, pt), cap, caps)


def is_kan_complex_lazy_ex(base: FinSSet, cap=2, caps: SizeCaps = DEFAULT_CAPS) -> KanVerdict:
    """Kan check of Ex(base) without materializing it.

    Simplices of Ex(base) are handled as raw Sd-map assignments; fillers are
    found by constrained backtracking.  `base` must be materialized to `cap`.
    """
    checked = 0
    for n in range(1, cap + 1):
        maps_prev = _enumerate_sd_maps(n - 1, base, caps)
        sdd = _SdData(n)
        sdd_prev = _SdData(n - 1)
        chains_prev = sdd_prev.ordered_chains(sdd_prev.max_dim)
        for k in range(n + 1):
            idx = [j for j in range(n + 1) if j != k]
            # horn data: assignments psi_j with matching restrictions
            restr = {}
            for j in range(n + 1):
                dl = delta(j, n)
                restr[j] = {c: tuple(tuple(sorted(dl[v] for v in F)) for F in c) for c in chains_prev}

            def compatible(chosen, j, psi):
                for i in chosen:
                    a, b = (i, j) if i < j else (j, i)
                    # shared face: d_a of the b-th face equals d_{b-1} of the a-th
                    da = delta(a, n - 1)
                    db1 = delta(b - 1, n - 1)
                    prev_chains = _SdData(n - 2).ordered_chains(_SdData(n - 2).max_dim) if n >= 2 else []
                    for c in prev_chains:
                        ca = tuple(tuple(sorted(da[v] for v in F)) for F in c)
                        cb = tuple(tuple(sorted(db1[v] for v in F)) for F in c)
                        left = psi[ca] if j > i else chosen[i][ca]
                        right = chosen[i][cb] if j > i else psi[cb]
                        if left != right:
                            return False
                return True

            horns = []
            def grow(pos, chosen):
                if pos == len(idx):
                    horns.append(dict(chosen))
                    return
                j = idx[pos]
                for psi in maps_prev:
                    if compatible(chosen, j, psi):
                        chosen[j] = psi
                        grow(pos + 1, chosen)
                        del chosen[j]
            grow(0, {})
            for horn in horns:
                checked += 1
                prescribed = {}
                consistent = True
                for j, psi in horn.items():
                    for c in chains_prev:
                        target_chain = restr[j][c]
                        v = psi[c]
                        if prescribed.get(target_chain, v) != v:
                            consistent = False
                            break
                        prescribed[target_chain] = v
                    if not consistent:
                        break
                if not consistent:
                    return KanVerdict(False, cap, checked, (n, k, "inconsistent horn"))
                found = _enumerate_sd_maps(n, base, caps, prescribed=prescribed, first_only=True)
                if not found:
                    return KanVerdict(False, cap, checked, (n, k, "no filler"))
    return KanVerdict(True, cap, checked)


# ---------------------------------------------------------------------------
# discrete simplicial sets and induced cells


def discrete_sset(elements, cap=3) -> FinSSet:
    els = tuple(sorted(str(e) for e in elements))
    return FinSSet(cap, {0: els} if els else {}, {})


def coset_space(G, H):
    """Left cosets gH named by least member, with the left G-action."""
    cosets = {}
    for g in G.elements:
        c = min(G.mul(g, h) for h in H.elements)
        cosets[g] = c
    els = sorted(set(cosets.values()))
    action = {k: {c: cosets[G.mul(k, c)] for c in els} for k in G.elements}
    return els, action


def induced_cell(G, H, K: OrderedComplex, cap=3, caps: SizeCaps = DEFAULT_CAPS) -> MonoidActionSSet:
    """G/H × K with the left translation action on the coset factor."""
    els, action = coset_space(G, H)
    D = discrete_sset(els, cap)
    KX = complex_to_sset(K, cap)
    P = product_sset(D, KX, cap, caps)
    pd, pk = product_projections_sset(D, KX, P)
    act = {}
    for g in G.elements:
        dmap = SSetMap(D, D, {(0, c): (action[g][c], (0,)) for c in els})
        act[g] = pair_into_product(pd.then(dmap), pk, P).validate()
    return MonoidActionSSet(G, P, act).validate()


def lastvertex_map(K: OrderedComplex, cap=3) -> SSetMap:
    """The comparison sd_complex(K) -> K sending a face barycenter to its last vertex."""
    SK = sd_complex(K)
    src = complex_to_sset(SK, cap)
    dst = complex_to_sset(K, cap)
    vorder = {v: i for i, v in enumerate(K.vertices)}
    name_to_face = {f"{len(f) - 1}|{','.join(f)}": f for f in K.faces}
    # reconstruct each chain from the sd face (a set of comparable face names)
    vals = {}
    for f in sorted(SK.faces, key=lambda f: (len(f), f)):
        n = len(f) - 1
        if n > cap:
            continue
        chain = [name_to_face[nm] for nm in f]  # f is sorted by (dim, lex) already
        lv = [max(face, key=lambda v: vorder[v]) for face in chain]
        strict, alpha = _strictify(tuple(lv))
        vals[(n, ",".join(f))] = (",".join(sorted(strict, key=lambda v: vorder[v])), alpha)
    return SSetMap(src, dst, vals).validate()


def induced_cell_sd(G, H, K: OrderedComplex, cap=3, caps: SizeCaps = DEFAULT_CAPS):
    """(G/H × sd_complex(K), action) with the equivariant comparison to G/H × K."""
    cell_sd = induced_cell(G, H, sd_complex(K), cap, caps)
    cell = induced_cell(G, H, K, cap, caps)
    lv = lastvertex_map(K, cap)
    els, _ = coset_space(G, H)
    D = discrete_sset(els, cap)
    pd, pk = product_projections_sset(D, lv.source, cell_sd.carrier)
    comparison = pair_into_product(pd, pk.then(lv), cell.carrier).validate()
    return cell_sd, cell, comparison
