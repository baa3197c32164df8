"""Presheaves of finite sets, their morphisms, and the adjoint quadruple.

A presheaf on C assigns a tuple of elements to every object and, to every
arrow f: A → B, a restriction dict from ``at[B]`` to ``at[A]``. Morphisms
are dicts of component dicts. Everything is enumerated exhaustively, so the
adjunctions Π ⊣ Disc ⊣ Γ ⊣ CoDisc are checked by comparing hom-sets
element by element rather than by algebra.
"""

from dataclasses import dataclass
from itertools import combinations, product
from typing import Callable, NamedTuple

from ._order import UnionFind
from .errors import Budget, FormatError, PreconditionError, Report
from .fincat import FinCategory, all_sieves, extremal_objects, opens_category, pullback_arrows


class Presheaf:
    """Contravariant functor from a FinCategory to finite sets."""

    def __init__(self, base: FinCategory, at, act, check=True):
        self.base = base
        self.at = {}
        for c in base.objects:
            if c not in at:
                raise FormatError(f"no set given for object {base.obj_name(c)}")
            elems = tuple(at[c])
            if len(set(elems)) != len(elems):
                raise FormatError(f"repeated element over {base.obj_name(c)}")
            self.at[c] = elems
        self.act = {}
        for m in base.morphisms:
            if m in act:
                self.act[m] = dict(act[m])
            elif base.is_identity(m):
                self.act[m] = {x: x for x in self.at[base.src[m]]}
            else:
                raise FormatError(f"no restriction given for morphism {base.mor_name(m)}")
        if check:
            report = validate_presheaf(self)
            if not report:
                raise PreconditionError(f"not a presheaf: {report.failure} at {report.witness}")

    def restrict(self, f, x):
        return self.act[f][x]

    def elements(self):
        return [(c, x) for c in self.base.objects for x in self.at[c]]

    @property
    def size(self):
        return sum(len(v) for v in self.at.values())

    def sizes(self):
        return tuple(len(self.at[c]) for c in self.base.objects)

    def __repr__(self):
        parts = ", ".join(f"{self.base.obj_name(c)}:{len(self.at[c])}" for c in self.base.objects)
        return f"Presheaf({parts})"


def validate_presheaf(P):
    C = P.base
    for m in C.morphisms:
        s, t = C.src[m], C.tgt[m]
        table = P.act[m]
        if set(table) != set(P.at[t]):
            return Report.failed("presheaf", "restriction not total", (C.mor_name(m),))
        source = set(P.at[s])
        for x, y in table.items():
            if y not in source:
                return Report.failed("presheaf", "restriction leaves its set", (C.mor_name(m), x))
    for a in C.objects:
        ident = C.identity[a]
        if any(P.act[ident][x] != x for x in P.at[a]):
            return Report.failed("presheaf", "identity", (C.mor_name(ident),))
    for f in C.morphisms:
        for g in C.out(C.tgt[f]):
            gf = C.compose(g, f)
            for x in P.at[C.tgt[g]]:
                if P.act[gf][x] != P.act[f][P.act[g][x]]:
                    return Report.failed("presheaf", "contravariance",
                                         (C.mor_name(g), C.mor_name(f), x))
    return Report.passed("presheaf", size=P.size)


def _same_base(P, Q):
    if P.base is not Q.base and (P.base.objects != Q.base.objects
                                 or P.base.morphisms != Q.base.morphisms):
        raise PreconditionError("presheaves live over different categories")


class PresheafMorphism:
    def __init__(self, source: Presheaf, target: Presheaf, components):
        _same_base(source, target)
        self.source = source
        self.target = target
        self.components = {c: dict(components[c]) for c in source.base.objects}

    def key(self):
        P = self.source
        return tuple(tuple(self.components[c][x] for x in P.at[c]) for c in P.base.objects)

    def __eq__(self, other):
        return isinstance(other, PresheafMorphism) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __call__(self, c, x):
        return self.components[c][x]

    def __repr__(self):
        return f"PresheafMorphism({self.key()!r})"

    def check(self):
        P, Q = self.source, self.target
        C = P.base
        for c in C.objects:
            comp = self.components[c]
            if set(comp) != set(P.at[c]) or any(y not in Q.at[c] for y in comp.values()):
                return Report.failed("presheaf morphism", "component typing", (C.obj_name(c),))
        for f in C.morphisms:
            a, b = C.src[f], C.tgt[f]
            for x in P.at[b]:
                if self.components[a][P.act[f][x]] != Q.act[f][self.components[b][x]]:
                    return Report.failed("presheaf morphism", "naturality", (C.mor_name(f), x))
        return Report.passed("presheaf morphism")

    def then(self, other):
        """Composite ``other ∘ self``."""
        C = self.source.base
        comps = {c: {x: other.components[c][y] for x, y in self.components[c].items()}
                 for c in C.objects}
        return PresheafMorphism(self.source, other.target, comps)

    def is_iso(self):
        P, Q = self.source, self.target
        return all(len(set(self.components[c].values())) == len(Q.at[c]) == len(P.at[c])
                   for c in P.base.objects)


def identity_morphism(P):
    return PresheafMorphism(P, P, {c: {x: x for x in P.at[c]} for c in P.base.objects})


def homs(P, Q, budget=None, iso=False, limit=None):
    """Every morphism P → Q (only isomorphisms when ``iso``), canonically ordered.

    Values are chosen element by element; each choice at (c, x) fixes the
    value at every restriction (d, P(f)(x)) through naturality. With ``iso``
    partial assignments that repeat a value are cut off early. ``limit``
    stops after that many results, in search order rather than canonical order.
    """
    _same_base(P, Q)
    C = P.base
    steps = Budget("presheaf hom enumeration", budget)
    if iso and P.sizes() != Q.sizes():
        return []
    into = {c: [f for f in C.into(c) if not C.is_identity(f)] for c in C.objects}
    order = sorted(C.objects, key=lambda c: (-len(C.into(c)), C.obj_index(c)))
    slots = [(c, x) for c in order for x in P.at[c]]
    value = {}
    used = set()
    results = []

    def assign(c, x, y, trail):
        stack = [(c, x, y)]
        while stack:
            c, x, y = stack.pop()
            steps.tick()
            key = (c, x)
            if key in value:
                if value[key] != y:
                    return False
                continue
            if iso:
                if (c, y) in used:
                    return False
                used.add((c, y))
            value[key] = y
            trail.append(key)
            for f in into[c]:
                stack.append((C.src[f], P.act[f][x], Q.act[f][y]))
        return True

    def extend(i):
        if limit is not None and len(results) >= limit:
            return
        while i < len(slots) and slots[i] in value:
            i += 1
        if i == len(slots):
            comps = {c: {x: value[(c, x)] for x in P.at[c]} for c in C.objects}
            if iso and not all(len(set(comps[c].values())) == len(P.at[c]) for c in C.objects):
                return
            results.append(PresheafMorphism(P, Q, comps))
            return
        c, x = slots[i]
        for y in Q.at[c]:
            trail = []
            if assign(c, x, y, trail):
                extend(i + 1)
            for key in trail:
                if iso:
                    used.discard((key[0], value[key]))
                del value[key]

    extend(0)
    if limit is not None:
        return results
    results.sort(key=lambda m: _index_key(m))
    return results


def _index_key(m):
    Q = m.target
    pos = {c: {y: i for i, y in enumerate(Q.at[c])} for c in Q.base.objects}
    return tuple(pos[c][m.components[c][x]] for c in m.source.base.objects for x in m.source.at[c])


def find_isomorphism(P, Q, budget=None):
    found = homs(P, Q, budget=budget, iso=True, limit=1)
    return found[0] if found else None


# -- finite sets as a category


class SetMap:
    """A function between finite sets (tuples), compared by its value table."""

    def __init__(self, source, target, mapping):
        self.source = tuple(source)
        self.target = tuple(target)
        self.mapping = dict(mapping)

    def key(self):
        return tuple(self.mapping[x] for x in self.source)

    def __eq__(self, other):
        return isinstance(other, SetMap) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __call__(self, x):
        return self.mapping[x]

    def __repr__(self):
        return f"SetMap({self.mapping!r})"

    def then(self, other):
        return SetMap(self.source, other.target, {x: other.mapping[y] for x, y in self.mapping.items()})

    def check(self):
        ok = set(self.mapping) == set(self.source) and all(y in self.target for y in self.mapping.values())
        return Report.passed("function") if ok else Report.failed("function", "typing")


def set_homs(X, Y, budget=None):
    X, Y = tuple(X), tuple(Y)
    steps = Budget("function enumeration", budget)
    out = []
    for values in product(Y, repeat=len(X)):
        steps.tick()
        out.append(SetMap(X, Y, zip(X, values)))
    return out


# -- the four functors


def terminal_object(base):
    terminals = extremal_objects(base)[1]
    if not terminals:
        raise PreconditionError("base category has no terminal object")
    return terminals[0]


def gamma(P):
    """Global sections: the set over the terminal object.

    When several terminal objects exist the first is used; the others carry
    isomorphic sets.
    """
    return P.at[terminal_object(P.base)]


def gamma_map(alpha):
    one = terminal_object(alpha.source.base)
    return SetMap(alpha.source.at[one], alpha.target.at[one], alpha.components[one])


def disc(base, X):
    """Constant presheaf at X with identity restrictions."""
    X = tuple(X)
    return Presheaf(base, {c: X for c in base.objects},
                    {m: {x: x for x in X} for m in base.morphisms}, check=False)


def disc_map(base, h: SetMap):
    return PresheafMorphism(disc(base, h.source), disc(base, h.target),
                            {c: h.mapping for c in base.objects})


class Components(NamedTuple):
    classes: tuple     # tuple of tuples of (object, element)
    index: dict        # (object, element) -> class number

    @property
    def set(self):
        return tuple(range(len(self.classes)))


def pi_components(P):
    """Connected components of the category of elements of P."""
    C = P.base
    elems = P.elements()
    uf = UnionFind(elems)
    for f in C.morphisms:
        a, b = C.src[f], C.tgt[f]
        for x in P.at[b]:
            uf.union((b, x), (a, P.act[f][x]))
    classes = tuple(tuple(block) for block in uf.classes(elems))
    index = {e: i for i, block in enumerate(classes) for e in block}
    return Components(classes, index)


def pi_map(alpha):
    src, tgt = pi_components(alpha.source), pi_components(alpha.target)
    mapping = {}
    for i, block in enumerate(src.classes):
        c, x = block[0]
        mapping[i] = tgt.index[(c, alpha.components[c][x])]
    return SetMap(src.set, tgt.set, mapping)


def global_points(base, U):
    """Arrows from the terminal object into U."""
    return base.hom(terminal_object(base), U)


def codisc(base, X):
    """Right adjoint of Γ: sections over U are functions hom(1, U) → X.

    A section is the tuple of its values listed in the order of hom(1, U);
    restriction along f: V → U precomposes with f.
    """
    X = tuple(X)
    one = terminal_object(base)
    points = {c: base.hom(one, c) for c in base.objects}
    at = {c: tuple(product(X, repeat=len(points[c]))) for c in base.objects}
    act = {}
    for f in base.morphisms:
        v, u = base.src[f], base.tgt[f]
        pos = {p: i for i, p in enumerate(points[u])}
        picks = [pos[base.compose(f, q)] for q in points[v]]
        act[f] = {s: tuple(s[i] for i in picks) for s in at[u]}
    return Presheaf(base, at, act, check=False)


def codisc_map(base, h: SetMap):
    R, S = codisc(base, h.source), codisc(base, h.target)
    comps = {c: {s: tuple(h.mapping[x] for x in s) for s in R.at[c]} for c in base.objects}
    return PresheafMorphism(R, S, comps)


def powerset_codisc(base, X):
    """Power set of X over every object, with identity restrictions."""
    X = tuple(X)
    subsets = tuple(frozenset(s) for k in range(len(X) + 1) for s in combinations(X, k))
    return Presheaf(base, {c: subsets for c in base.objects},
                    {m: {s: s for s in subsets} for m in base.morphisms}, check=False)


def flat_transpose(A, f, X):
    """The morphism A → powerset_codisc(X) sending s over U to the set of f(w)
    over global sections w whose restriction to U is s.

    Returns the morphism together with its naturality report.
    """
    base = A.base
    one = terminal_object(base)
    f = f if isinstance(f, SetMap) else SetMap(A.at[one], X, f)
    target = powerset_codisc(base, X)
    comps = {}
    for U in base.objects:
        to_one = base.hom(U, one)[0]
        comps[U] = {s: frozenset(f(w) for w in A.at[one] if A.act[to_one][w] == s)
                    for s in A.at[U]}
    alpha = PresheafMorphism(A, target, comps)
    return alpha, alpha.check()


# -- subobject classifier


def subobject_classifier(base, budget=None):
    """Ω: sieves on each object, restricted by pullback."""
    at = {c: tuple(all_sieves(base, c, budget)) for c in base.objects}
    act = {f: {S: pullback_arrows(base, f, S) for S in at[base.tgt[f]]} for f in base.morphisms}
    return Presheaf(base, at, act, check=False)


def is_subpresheaf(P, A):
    C = P.base
    for c in C.objects:
        if not set(A.get(c, ())) <= set(P.at[c]):
            return False
    for f in C.morphisms:
        for x in A.get(C.tgt[f], ()):
            if P.act[f][x] not in A.get(C.src[f], ()):
                return False
    return True


def subpresheaves(P, budget=None):
    """All restriction-stable families of subsets, as dicts object -> frozenset."""
    C = P.base
    steps = Budget("subpresheaf enumeration", budget)
    objs = list(C.objects)
    found = []
    chosen = {}

    def extend(i):
        if i == len(objs):
            found.append(dict(chosen))
            return
        c = objs[i]
        elems = P.at[c]
        for k in range(len(elems) + 1):
            for sub in combinations(elems, k):
                steps.tick()
                sub = frozenset(sub)
                chosen[c] = sub
                if _stable_so_far(P, chosen, c):
                    extend(i + 1)
                del chosen[c]

    extend(0)
    return found


def _stable_so_far(P, chosen, c):
    C = P.base
    for f in C.into(c):
        d = C.src[f]
        if d in chosen and any(P.act[f][x] not in chosen[d] for x in chosen[c]):
            return False
    for f in C.out(c):
        t = C.tgt[f]
        if t in chosen and any(P.act[f][x] not in chosen[c] for x in chosen[t]):
            return False
    return True


def characteristic_map(P, A, omega=None):
    """The morphism P → Ω classifying the subpresheaf A."""
    C = P.base
    omega = omega or subobject_classifier(C)
    comps = {c: {x: frozenset(f for f in C.into(c) if P.act[f][x] in A[C.src[f]])
                 for x in P.at[c]} for c in C.objects}
    return PresheafMorphism(P, omega, comps)


def classified_subpresheaf(chi):
    """Pullback of the maximal sieve along chi: P → Ω."""
    C = chi.source.base
    return {c: frozenset(x for x in chi.source.at[c]
                         if C.identity[c] in chi.components[c][x]) for c in C.objects}


# -- example presheaves


def empty_presheaf(base):
    return disc(base, ())


def terminal_presheaf(base):
    return disc(base, ("*",))


def representable(base, c):
    """y(c): arrows into c, restricted by precomposition."""
    at = {d: tuple(base.hom(d, c)) for d in base.objects}
    act = {f: {g: base.compose(g, f) for g in at[base.tgt[f]]} for f in base.morphisms}
    return Presheaf(base, at, act, check=False)


def coproduct(P, Q):
    _same_base(P, Q)
    C = P.base
    at = {c: tuple((0, x) for x in P.at[c]) + tuple((1, y) for y in Q.at[c]) for c in C.objects}
    act = {}
    for f in C.morphisms:
        table = {(0, x): (0, P.act[f][x]) for x in P.at[C.tgt[f]]}
        table.update({(1, y): (1, Q.act[f][y]) for y in Q.at[C.tgt[f]]})
        act[f] = table
    return Presheaf(C, at, act, check=False)


def _functions(space, mask, values):
    pts = space.labels(mask)
    return tuple(tuple(zip(pts, vals)) for vals in product(values, repeat=len(pts)))


def functions_presheaf(space, values=(0, 1)):
    """All functions U → values on the opens of a finite space, restricted pointwise.

    A section is the tuple of its (point, value) pairs.
    """
    C = opens_category(space)
    at = {U: _functions(space, U.mask, values) for U in C.objects}
    act = {f: {s: _restrict(s, C.src[f]) for s in at[C.tgt[f]]} for f in C.morphisms}
    return Presheaf(C, at, act, check=False)


def constant_functions(space, values=(0, 1)):
    """Constant functions on each open; the empty open carries the empty function."""
    C = opens_category(space)
    at = {}
    for U in C.objects:
        pts = space.labels(U.mask)
        at[U] = tuple(tuple((p, v) for p in pts) for v in values) if pts else ((),)
    act = {f: {s: _restrict(s, C.src[f]) for s in at[C.tgt[f]]} for f in C.morphisms}
    return Presheaf(C, at, act, check=False)


def _restrict(section, V):
    keep = V.points
    return tuple((p, v) for p, v in section if p in keep)


# -- adjunctions by exhaustive comparison of hom-sets


class SetCategory:
    name = "Set"

    def homs(self, X, Y, budget=None):
        return set_homs(X, Y, budget)


class PresheafCategory:
    def __init__(self, base):
        self.base = base
        self.name = "PSh"

    def homs(self, P, Q, budget=None):
        return homs(P, Q, budget)


@dataclass
class AdjunctionData:
    """L: dom → cod left adjoint to R: cod → dom, with the transposition
    hom(L A, B) → hom(A, R B) given explicitly.
    """

    name: str
    dom: object
    cod: object
    left: Callable
    left_map: Callable
    right: Callable
    right_map: Callable
    transpose: Callable


def pi_disc(base):
    def transpose(P, X, h):
        comps = pi_components(P)
        return PresheafMorphism(P, disc(base, X), {c: {x: h(comps.index[(c, x)]) for x in P.at[c]}
                                                  for c in base.objects})
    return AdjunctionData("Pi -| Disc", PresheafCategory(base), SetCategory(),
                          lambda P: pi_components(P).set, pi_map,
                          lambda X: disc(base, X), lambda h: disc_map(base, h), transpose)


def disc_gamma(base):
    one = terminal_object(base)

    def transpose(X, P, alpha):
        return SetMap(X, P.at[one], alpha.components[one])
    return AdjunctionData("Disc -| Gamma", SetCategory(), PresheafCategory(base),
                          lambda X: disc(base, X), lambda h: disc_map(base, h),
                          gamma, gamma_map, transpose)


def gamma_codisc(base):
    one = terminal_object(base)

    def transpose(P, X, h):
        comps = {}
        for U in base.objects:
            pts = base.hom(one, U)
            comps[U] = {s: tuple(h(P.act[p][s]) for p in pts) for s in P.at[U]}
        return PresheafMorphism(P, codisc(base, X), comps)
    return AdjunctionData("Gamma -| CoDisc", PresheafCategory(base), SetCategory(),
                          gamma, gamma_map, lambda X: codisc(base, X),
                          lambda h: codisc_map(base, h), transpose)


def gamma_powerset_codisc(base):
    """Γ against the power-set CoDisc, transposing with flat_transpose."""
    def transpose(P, X, h):
        return flat_transpose(P, h, X)[0]

    def right_map(h):
        src, tgt = powerset_codisc(base, h.source), powerset_codisc(base, h.target)
        comps = {c: {s: frozenset(h(x) for x in s) for s in src.at[c]} for c in base.objects}
        return PresheafMorphism(src, tgt, comps)
    return AdjunctionData("Gamma -| P(-)", PresheafCategory(base), SetCategory(),
                          gamma, gamma_map, lambda X: powerset_codisc(base, X), right_map, transpose)


def quadruple(base):
    return [pi_disc(base), disc_gamma(base), gamma_codisc(base)]


def verify_adjunction(adj: AdjunctionData, dom_corpus, cod_corpus, budget=None):
    """Exhaustively check hom(L A, B) ≅ hom(A, R B) over two corpora.

    For each pair (A, B) the transposition must land in hom(A, R B), be
    injective, and the two hom-sets must have equal size. Naturality is
    checked against every morphism between corpus objects on both sides.
    Returns the first failure.
    """
    steps = Budget(f"adjunction check {adj.name}", budget)
    dom_corpus, cod_corpus = list(dom_corpus), list(cod_corpus)
    L = [adj.left(A) for A in dom_corpus]
    R = [adj.right(B) for B in cod_corpus]

    def hom_dom(i, j):
        out = adj.dom.homs(dom_corpus[i], dom_corpus[j], steps.bound)
        steps.tick(len(out))
        return out

    def hom_cod(i, j):
        out = adj.cod.homs(cod_corpus[i], cod_corpus[j], steps.bound)
        steps.tick(len(out))
        return out

    dom_arrows = {(i, j): hom_dom(i, j) for i in range(len(dom_corpus)) for j in range(len(dom_corpus))}
    cod_arrows = {(i, j): hom_cod(i, j) for i in range(len(cod_corpus)) for j in range(len(cod_corpus))}
    pairs = nat = 0
    for i, A in enumerate(dom_corpus):
        for j, B in enumerate(cod_corpus):
            pairs += 1
            left = adj.cod.homs(L[i], B, steps.bound)
            right = adj.dom.homs(A, R[j], steps.bound)
            steps.tick(len(left) + len(right))
            right_keys = {m.key() for m in right}
            images = {}
            for h in left:
                t = adj.transpose(A, B, h)
                k = t.key()
                if k not in right_keys:
                    return Report.failed("adjunction", "transpose is not a morphism A -> R B",
                                         (adj.name, i, j, h.key()), pairs=pairs)
                if k in images:
                    return Report.failed("adjunction", "transpose not injective",
                                         (adj.name, i, j, images[k], h.key()), pairs=pairs)
                images[k] = h.key()
            if len(left) != len(right):
                return Report.failed("adjunction", "hom-set sizes differ",
                                     (adj.name, i, j, len(left), len(right)), pairs=pairs)
            for h in left:
                th = adj.transpose(A, B, h)
                for i2 in range(len(dom_corpus)):
                    for a in dom_arrows[(i2, i)]:
                        steps.tick()
                        nat += 1
                        lhs = adj.transpose(dom_corpus[i2], B, adj.left_map(a).then(h))
                        if lhs.key() != a.then(th).key():
                            return Report.failed("adjunction", "naturality in the left argument",
                                                 (adj.name, i2, i, j, h.key()), pairs=pairs)
                for j2 in range(len(cod_corpus)):
                    for b in cod_arrows[(j, j2)]:
                        steps.tick()
                        nat += 1
                        lhs = adj.transpose(A, cod_corpus[j2], h.then(b))
                        if lhs.key() != th.then(adj.right_map(b)).key():
                            return Report.failed("adjunction", "naturality in the right argument",
                                                 (adj.name, i, j, j2, h.key()), pairs=pairs)
    return Report.passed("adjunction", name=adj.name, pairs=pairs, naturality_checks=nat)


def set_corpus(max_size=2):
    return [tuple(range(k)) for k in range(max_size + 1)]


def presheaf_corpus(base, max_total=6, budget=None):
    """A fixed family of presheaves on ``base`` with at most ``max_total`` elements.

    Empty and terminal presheaves, Disc of small sets, representables, pairwise
    coproducts of those, CoDisc of small sets and Ω when small enough.
    """
    candidates = [empty_presheaf(base), terminal_presheaf(base), disc(base, (0, 1))]
    reps = [representable(base, c) for c in base.objects]
    candidates += reps
    small = [P for P in [terminal_presheaf(base)] + reps if P.size <= max_total]
    for i, P in enumerate(small):
        for Q in small[i:]:
            candidates.append(coproduct(P, Q))
    if extremal_objects(base)[1]:
        candidates += [codisc(base, (0, 1))]
    candidates.append(subobject_classifier(base, budget))
    out = []
    seen = []
    for P in candidates:
        if P.size > max_total:
            continue
        if any(Q.sizes() == P.sizes() and find_isomorphism(Q, P, budget) for Q in seen):
            continue
        seen.append(P)
        out.append(P)
    return out
