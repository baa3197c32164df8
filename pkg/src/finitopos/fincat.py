"""Finite categories given by explicit composition tables.

Composition is written ``compose(g, f)`` for g∘f (first f, then g). Thin
categories built from preorders use the pair ``(a, b)`` as the id of the
unique morphism a→b.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import NamedTuple

from ._order import UnionFind, reflexive_transitive_closure
from .errors import Budget, FormatError, PreconditionError, Report
from .finspace import FiniteSpace, OpenSet


def _normalize(objects, morphisms, compose, identities):
    objects = tuple(objects)
    if len(set(objects)) != len(objects):
        raise FormatError("duplicate object identifiers")
    objset = set(objects)
    if identities is None:
        identities = {a: f"id_{a}" for a in objects}
    else:
        identities = dict(identities)
        missing = [a for a in objects if a not in identities]
        if missing:
            raise FormatError(f"no identity given for objects {missing}")
    mors = {}
    for a in objects:
        mors[identities[a]] = (a, a)
    for m, (s, t) in morphisms.items():
        if s not in objset or t not in objset:
            raise FormatError(f"morphism {m!r} refers to unknown object")
        if m in mors and mors[m] != (s, t):
            raise FormatError(f"morphism {m!r} declared twice with different types")
        mors[m] = (s, t)
    table = {}
    for (g, f), h in compose.items():
        for x in (g, f, h):
            if x not in mors:
                raise FormatError(f"composition table mentions unknown morphism {x!r}")
        table[(g, f)] = h
    for m, (s, t) in mors.items():
        table.setdefault((identities[t], m), m)
        table.setdefault((m, identities[s]), m)
    return objects, mors, table, identities


def _laws(objects, mors, table, identities):
    """Return (law, witness) for the first violation, or None."""
    order = list(mors)
    for (g, f), h in table.items():
        sf, tf = mors[f]
        sg, tg = mors[g]
        if tf != sg:
            return "composite of non-composable pair", (g, f, h)
        if mors[h] != (sf, tg):
            return "composite has wrong type", (g, f, h)
    for f in order:
        for g in order:
            if mors[f][1] == mors[g][0] and (g, f) not in table:
                return "missing composite", (g, f)
    for f in order:
        s, t = mors[f]
        if table[(identities[t], f)] != f:
            return "left identity", (identities[t], f)
        if table[(f, identities[s])] != f:
            return "right identity", (f, identities[s])
    out = {a: [] for a in objects}
    for m in order:
        out[mors[m][0]].append(m)
    for f in order:
        for g in out[mors[f][1]]:
            gf = table[(g, f)]
            for h in out[mors[g][1]]:
                if table[(h, gf)] != table[(table[(h, g)], f)]:
                    return "associativity", (h, g, f)
    return None


def validate_category(raw):
    """Check a category description (JSON-shaped dict) for the category laws.

    Raises FormatError on dangling references; otherwise returns a Report.
    """
    objects, morphisms, compose, identities = _parse_raw(raw)
    objects, mors, table, identities = _normalize(objects, morphisms, compose, identities)
    bad = _laws(objects, mors, table, identities)
    if bad is None:
        return Report.passed("category", objects=len(objects), morphisms=len(mors))
    return Report.failed("category", bad[0], bad[1])


def _parse_raw(raw):
    try:
        objects = list(raw["objects"])
        morphisms = {m["id"]: (m["src"], m["tgt"]) for m in raw.get("morphisms", [])}
        compose = {}
        for entry in raw.get("compose", []):
            g, f, h = entry
            compose[(g, f)] = h
        identities = raw.get("identities")
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed category description: {exc}") from None
    return objects, morphisms, compose, identities


class FinCategory:
    """Objects, typed morphisms, and a total composition table."""

    def __init__(self, objects, morphisms, compose=None, identities=None,
                 obj_names=None, mor_names=None, check=True):
        objects, mors, table, identities = _normalize(objects, morphisms, compose or {}, identities)
        if check:
            bad = _laws(objects, mors, table, identities)
            if bad is not None:
                raise PreconditionError(f"not a category: {bad[0]} at {bad[1]}")
        self.objects = objects
        self.morphisms = tuple(mors)
        self.src = {m: st[0] for m, st in mors.items()}
        self.tgt = {m: st[1] for m, st in mors.items()}
        self.identity = identities
        self._table = table
        self._obj_index = {a: i for i, a in enumerate(objects)}
        self._mor_index = {m: i for i, m in enumerate(self.morphisms)}
        self._hom = {}
        self._into = {a: [] for a in objects}
        self._out = {a: [] for a in objects}
        for m in self.morphisms:
            s, t = self.src[m], self.tgt[m]
            self._hom.setdefault((s, t), []).append(m)
            self._into[t].append(m)
            self._out[s].append(m)
        self._obj_names = obj_names or {}
        self._mor_names = mor_names or {}

    @classmethod
    def from_dict(cls, raw):
        objects, morphisms, compose, identities = _parse_raw(raw)
        return cls(objects, morphisms, compose, identities)

    def to_dict(self):
        on, mn = self.obj_name, self.mor_name
        ids = set(self.identity.values())
        return {
            "objects": [on(a) for a in self.objects],
            "identities": {on(a): mn(self.identity[a]) for a in self.objects},
            "morphisms": [{"id": mn(m), "src": on(self.src[m]), "tgt": on(self.tgt[m])}
                          for m in self.morphisms if m not in ids],
            "compose": [[mn(g), mn(f), mn(h)] for (g, f), h in self._table.items()
                        if g not in ids and f not in ids],
        }

    def __repr__(self):
        return f"FinCategory({len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    def obj_name(self, a):
        return self._obj_names.get(a, str(a))

    def mor_name(self, m):
        return self._mor_names.get(m, str(m))

    def obj_index(self, a):
        return self._obj_index[a]

    def mor_index(self, m):
        return self._mor_index[m]

    def hom(self, a, b):
        return self._hom.get((a, b), [])

    def into(self, c):
        return self._into[c]

    def out(self, c):
        return self._out[c]

    def compose(self, g, f):
        try:
            return self._table[(g, f)]
        except KeyError:
            raise PreconditionError(f"{g!r} and {f!r} are not composable") from None

    def is_identity(self, m):
        return self.identity[self.src[m]] == m

    def is_thin(self):
        return all(len(ms) <= 1 for ms in self._hom.values())

    def is_groupoid(self):
        return all(self.inverse(m) is not None for m in self.morphisms)

    def inverse(self, m):
        s, t = self.src[m], self.tgt[m]
        for n in self.hom(t, s):
            if self._table[(n, m)] == self.identity[s] and self._table[(m, n)] == self.identity[t]:
                return n
        return None

    def is_iso(self, m):
        return self.inverse(m) is not None


# -- standard examples


def thin_category(elements, leq, name=str):
    """Thin category of a preorder; ``leq`` is closed reflexively and transitively."""
    elements = list(elements)
    rel = reflexive_transitive_closure(elements, leq)
    ordered = sorted(rel, key=lambda p: (elements.index(p[0]), elements.index(p[1])))
    morphisms = {(a, b): (a, b) for a, b in ordered}
    compose = {}
    for a, b in ordered:
        for b2, c in ordered:
            if b == b2:
                compose[((b, c), (a, b))] = (a, c)
    obj_names = {a: name(a) for a in elements}
    mor_names = {(a, b): f"{name(a)}->{name(b)}" for a, b in ordered}
    return FinCategory(elements, morphisms, compose,
                       identities={a: (a, a) for a in elements},
                       obj_names=obj_names, mor_names=mor_names, check=False)


def terminal_category():
    return FinCategory(["*"], {})


def discrete_category(objects):
    return FinCategory(objects, {})


def arrow_category():
    """0 → 1 with a single non-identity arrow ``a``."""
    return FinCategory(["0", "1"], {"a": ("0", "1")})


def cyclic_group_category(n, obj="*"):
    """One-object groupoid of Z/n; morphism ``gk`` is the element k, ``g0`` the identity."""
    morphisms = {f"g{k}": (obj, obj) for k in range(1, n)}
    compose = {(f"g{j}", f"g{k}"): f"g{(j + k) % n}" for j in range(n) for k in range(n)}
    return FinCategory([obj], morphisms, compose, identities={obj: "g0"})


def chaotic_category(objects):
    """Exactly one morphism between any two objects (the codiscrete groupoid)."""
    objects = list(objects)
    return thin_category(objects, [(a, b) for a in objects for b in objects])


def chain_category(n):
    return thin_category(list(range(n)), [(i, i + 1) for i in range(n - 1)])


@lru_cache(maxsize=64)
def opens_category(space: FiniteSpace):
    """Inclusion order on the opens: objects are OpenSets, one arrow U→V iff U ⊆ V."""
    opens = space.open_sets()
    leq = [(u, v) for u in opens for v in opens if u <= v]
    return thin_category(opens, leq, name=repr)


# -- extremal objects


def extremal_objects(C):
    """Objects with exactly one arrow to (initial) or from (terminal) every object."""
    initials = [a for a in C.objects if all(len(C.hom(a, b)) == 1 for b in C.objects)]
    terminals = [a for a in C.objects if all(len(C.hom(b, a)) == 1 for b in C.objects)]
    return initials, terminals


def factorizations(C, h, via):
    """Pairs (g, f) with f: src h → via, g: via → tgt h and g∘f = h."""
    s, t = C.src[h], C.tgt[h]
    return [(g, f) for f in C.hom(s, via) for g in C.hom(via, t) if C.compose(g, f) == h]


def isomorphic_objects(C, a, b):
    return any(C.is_iso(m) for m in C.hom(a, b))


# -- functors and natural transformations


@dataclass(frozen=True, eq=False)
class Functor:
    source: FinCategory
    target: FinCategory
    ob: dict
    ar: dict

    def key(self):
        return (tuple(self.ob[a] for a in self.source.objects),
                tuple(self.ar[m] for m in self.source.morphisms))

    def __eq__(self, other):
        return isinstance(other, Functor) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def check(self):
        C, D = self.source, self.target
        for a in C.objects:
            if self.ar[C.identity[a]] != D.identity[self.ob[a]]:
                return Report.failed("functor", "identity", (a,))
        for m in C.morphisms:
            fm = self.ar[m]
            if D.src[fm] != self.ob[C.src[m]] or D.tgt[fm] != self.ob[C.tgt[m]]:
                return Report.failed("functor", "typing", (m,))
        for f in C.morphisms:
            for g in C.out(C.tgt[f]):
                if self.ar[C.compose(g, f)] != D.compose(self.ar[g], self.ar[f]):
                    return Report.failed("functor", "composition", (g, f))
        return Report.passed("functor")


def identity_functor(C):
    return Functor(C, C, {a: a for a in C.objects}, {m: m for m in C.morphisms})


@dataclass(frozen=True, eq=False)
class NatTrans:
    source: Functor
    target: Functor
    components: dict

    def key(self):
        return tuple(self.components[a] for a in self.source.source.objects)

    def __eq__(self, other):
        return isinstance(other, NatTrans) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def check(self):
        F, G = self.source, self.target
        C, D = F.source, F.target
        for a in C.objects:
            c = self.components[a]
            if D.src[c] != F.ob[a] or D.tgt[c] != G.ob[a]:
                return Report.failed("natural transformation", "typing", (a,))
        for m in C.morphisms:
            a, b = C.src[m], C.tgt[m]
            lhs = D.compose(self.components[b], F.ar[m])
            rhs = D.compose(G.ar[m], self.components[a])
            if lhs != rhs:
                return Report.failed("natural transformation", "naturality", (m,))
        return Report.passed("natural transformation")


def enumerate_functors(C, D, budget=None):
    """All functors C → D in lexicographic order of (object map, arrow map)."""
    steps = Budget("functor enumeration", budget)
    results = []
    arrows = [m for m in C.morphisms if not C.is_identity(m)]
    for images in product(D.objects, repeat=len(C.objects)):
        steps.tick()
        ob = dict(zip(C.objects, images))
        ar = {C.identity[a]: D.identity[ob[a]] for a in C.objects}
        _extend_functor(C, D, ob, ar, arrows, 0, results, steps)
    return results


def _extend_functor(C, D, ob, ar, arrows, i, results, steps):
    if i == len(arrows):
        results.append(Functor(C, D, dict(ob), dict(ar)))
        return
    m = arrows[i]
    for cand in D.hom(ob[C.src[m]], ob[C.tgt[m]]):
        steps.tick()
        ar[m] = cand
        if _composition_consistent(C, D, ar, m):
            _extend_functor(C, D, ob, ar, arrows, i + 1, results, steps)
        del ar[m]


def _composition_consistent(C, D, ar, m):
    # every composite whose three arrows are already mapped, one of them m
    for h in ar:
        for g in C.out(C.tgt[h]):
            if g not in ar:
                continue
            gh = C.compose(g, h)
            if gh in ar and m in (g, h, gh) and ar[gh] != D.compose(ar[g], ar[h]):
                return False
    return True


def enumerate_nats(F, G, budget=None):
    """All natural transformations F ⇒ G in lexicographic component order."""
    if F.source is not G.source or F.target is not G.target:
        raise PreconditionError("functors must share source and target")
    C, D = F.source, F.target
    steps = Budget("natural transformation enumeration", budget)
    choices = [D.hom(F.ob[a], G.ob[a]) for a in C.objects]
    results = []
    comp = {}

    def extend(i):
        if i == len(C.objects):
            results.append(NatTrans(F, G, dict(comp)))
            return
        a = C.objects[i]
        for c in choices[i]:
            steps.tick()
            comp[a] = c
            if all(_natural_at(C, D, F, G, comp, m) for m in C.morphisms
                   if C.src[m] in comp and C.tgt[m] in comp
                   and a in (C.src[m], C.tgt[m])):
                extend(i + 1)
            del comp[a]

    extend(0)
    return results


def _natural_at(C, D, F, G, comp, m):
    a, b = C.src[m], C.tgt[m]
    return D.compose(comp[b], F.ar[m]) == D.compose(G.ar[m], comp[a])


# -- c-limits of directed diagrams of opens


@dataclass(frozen=True, eq=False)
class Diagram:
    """A directed preorder of indices with an open set attached to each index.

    ``variance="decreasing"`` means i ≤ j implies F(j) ⊆ F(i), as for a
    shrinking family of neighbourhoods; ``"increasing"`` is the reverse.
    """

    index: tuple
    le: frozenset
    assign: dict
    variance: str = "decreasing"

    def check(self):
        if not self.index:
            return Report.failed("diagram", "empty index")
        rel = reflexive_transitive_closure(self.index, self.le)
        for i in self.index:
            for j in self.index:
                if not any((i, k) in rel and (j, k) in rel for k in self.index):
                    return Report.failed("diagram", "not directed", (i, j))
        for i, j in sorted(rel, key=lambda p: (self.index.index(p[0]), self.index.index(p[1]))):
            lo, hi = self.assign[i], self.assign[j]
            ok = hi <= lo if self.variance == "decreasing" else lo <= hi
            if not ok:
                return Report.failed("diagram", "variance", (i, j))
        return Report.passed("diagram")


def chain_diagram(opens, variance="decreasing"):
    """Diagram indexed by 0 ≤ 1 ≤ ... carrying the given opens in order."""
    idx = tuple(range(len(opens)))
    return Diagram(idx, frozenset((i, i + 1) for i in idx[:-1]), dict(zip(idx, opens)), variance)


class CLimit(NamedTuple):
    literal: OpenSet | None
    punctured: OpenSet | None


def c_limit(D: Diagram):
    """Both readings of the maximal open meeting every member of D.

    ``literal`` is the union of all opens V with V ∩ F(i) ≠ ∅ for every i; it
    is None when some F(i) is empty, since then no open qualifies.
    ``punctured`` is the largest open that misses ⋂ F(i) yet meets every
    F(i), or None when there is none.
    """
    if not D.index:
        raise PreconditionError("c-limit of an empty diagram")
    members = [D.assign[i] for i in D.index]
    space = members[0].space
    for u in members[1:]:
        if u.space is not space and u.space != space:
            raise PreconditionError("diagram assigns opens from different spaces")
    report = D.check()
    if not report:
        raise PreconditionError(f"invalid diagram: {report.failure} {report.witness}")
    masks = [u.mask for u in members]

    def meets_all(v):
        return all(v & m for m in masks)

    literal = 0
    found = False
    for v in space.opens:
        if meets_all(v):
            literal |= v
            found = True
    core = space.full
    for m in masks:
        core &= m
    candidate = space.neg(core)
    punctured = OpenSet(space, candidate) if meets_all(candidate) else None
    return CLimit(OpenSet(space, literal) if found else None, punctured)


# -- localization of thin categories


class Localization(NamedTuple):
    category: FinCategory
    projection: Functor


def localize_thin(C, sigma):
    """Invert the arrows in ``sigma`` in a thin category.

    Each reversed arrow is added to the preorder, the result is closed under
    transitivity, and every class of mutually reachable objects becomes one
    object, named by the tuple of its members.
    """
    if not C.is_thin():
        raise PreconditionError("localize_thin needs a thin category")
    sigma = list(sigma)
    for m in sigma:
        if m not in C.src:
            raise FormatError(f"unknown morphism {m!r}")
    rel = {(C.src[m], C.tgt[m]) for m in C.morphisms}
    rel |= {(C.tgt[m], C.src[m]) for m in sigma}
    rel = reflexive_transitive_closure(C.objects, rel)
    uf = UnionFind(C.objects)
    for a, b in rel:
        if (b, a) in rel:
            uf.union(a, b)
    blocks = [tuple(b) for b in uf.classes(C.objects)]
    cls = {a: blk for blk in blocks for a in blk}
    qrel = {(cls[a], cls[b]) for a, b in rel}
    name = lambda blk: "{" + ",".join(C.obj_name(a) for a in blk) + "}"
    Q = thin_category(blocks, qrel, name=name)
    ob = {a: cls[a] for a in C.objects}
    ar = {m: (cls[C.src[m]], cls[C.tgt[m]]) for m in C.morphisms}
    return Localization(Q, Functor(C, Q, ob, ar))


# -- sieves as plain arrow sets


def sieve_closure(C, c, arrows):
    """Smallest precomposition-closed set of arrows into c containing ``arrows``."""
    out = set()
    for f in arrows:
        if C.tgt[f] != c:
            raise PreconditionError(f"{C.mor_name(f)} does not target {C.obj_name(c)}")
        for g in C.into(C.src[f]):
            out.add(C.compose(f, g))
    return frozenset(out)


def is_sieve(C, c, arrows):
    return all(C.tgt[f] == c for f in arrows) and sieve_closure(C, c, arrows) == frozenset(arrows)


def pullback_arrows(C, f, arrows):
    """{g into src f : f∘g in arrows}."""
    return frozenset(g for g in C.into(C.src[f]) if C.compose(f, g) in arrows)


def all_sieves(C, c, budget=None):
    """Every sieve on c, ordered by size and then by arrow positions."""
    return _all_sieves(C, c, budget)


def _all_sieves(C, c, budget):
    arrows = sorted(C.into(c), key=C.mor_index)
    steps = Budget(f"sieves on {C.obj_name(c)}", budget)
    # an arrow f may be present only if every f∘g is; decide arrows in an
    # order where the factors f∘g come first
    below = {f: {C.compose(f, g) for g in C.into(C.src[f])} - {f} for f in arrows}
    order = []
    placed = set()
    while len(order) < len(arrows):
        for f in arrows:
            if f not in placed and below[f] <= placed | {f}:
                order.append(f)
                placed.add(f)
                break
        else:
            # arrows that factor through each other (isomorphisms): take the rest as they come
            for f in arrows:
                if f not in placed:
                    order.append(f)
                    placed.add(f)
    found = []

    def extend(i, chosen):
        steps.tick()
        if i == len(order):
            if is_sieve(C, c, chosen):
                found.append(frozenset(chosen))
            return
        f = order[i]
        extend(i + 1, chosen)
        if below[f] <= chosen | set(order[i:]):
            chosen.add(f)
            extend(i + 1, chosen)
            chosen.discard(f)

    extend(0, set())
    found = sorted(set(found), key=lambda s: (len(s), sorted(C.mor_index(f) for f in s)))
    return found
