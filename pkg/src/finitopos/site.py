"""Sieves, Grothendieck topologies, the sheaf condition and sheafification.

A topology is stored extensionally: for every object the tuple of its
covering sieves. All checks run over every sieve of the finite base.
"""

from dataclasses import dataclass

from ._order import UnionFind
from .errors import FormatError, PreconditionError, Report
from .fincat import (FinCategory, all_sieves, extremal_objects, is_sieve, opens_category,
                     pullback_arrows, sieve_closure)
from .finspace import d3, discrete, sierpinski
from .presheaf import (Presheaf, PresheafMorphism, constant_functions, functions_presheaf,
                       is_subpresheaf, presheaf_corpus)


@dataclass(frozen=True)
class Sieve:
    on: object
    arrows: frozenset

    def __contains__(self, f):
        return f in self.arrows

    def __len__(self):
        return len(self.arrows)


def _ordered(C, arrows):
    return tuple(sorted(arrows, key=C.mor_index))


def generate_sieve(C, c, generators):
    """Least sieve on c containing ``generators``."""
    return Sieve(c, sieve_closure(C, c, generators))


def maximal_sieve(C, c):
    return Sieve(c, frozenset(C.into(c)))


def pullback_sieve(C, f, S):
    """{g : f∘g ∈ S}, a sieve on the source of f."""
    if C.tgt[f] != S.on:
        raise PreconditionError(f"{C.mor_name(f)} does not target {C.obj_name(S.on)}")
    return Sieve(C.src[f], pullback_arrows(C, f, S.arrows))


def sieves_on(C, c, budget=None):
    return [Sieve(c, s) for s in all_sieves(C, c, budget)]


def sieve_names(C, S):
    return [C.mor_name(f) for f in _ordered(C, S.arrows)]


class GTopology:
    """Covering sieves per object of a base category."""

    def __init__(self, base: FinCategory, covers):
        self.base = base
        self.covers = {}
        for c in base.objects:
            found = {S.arrows if isinstance(S, Sieve) else frozenset(S) for S in covers.get(c, ())}
            key = lambda s: (len(s), sorted(base.mor_index(f) for f in s))
            self.covers[c] = tuple(Sieve(c, s) for s in sorted(found, key=key))
        self._sets = {c: {S.arrows for S in self.covers[c]} for c in base.objects}

    def covering(self, S):
        return S.arrows in self._sets[S.on]

    def __repr__(self):
        counts = ", ".join(f"{self.base.obj_name(c)}:{len(v)}" for c, v in self.covers.items())
        return f"GTopology({counts})"


MEREOLOGY = {
    "maximality": "the collection of all parts of a whole has that whole as its fusion",
    "stability": "cutting a fusion down to one part gives a fusion of that part",
    "transitivity": "parts that fuse into each member of a fusion also fuse into the whole",
}


def validate_topology(J: GTopology):
    """Check the three Grothendieck axioms; report the first failure.

    ``details["mereology"]`` restates each axiom as a statement about
    fusions (covering sieves read as fusions of parts) with its verdict.
    """
    C = J.base
    for c in C.objects:
        for S in J.covers[c]:
            if not is_sieve(C, c, S.arrows):
                return Report.failed("topology", "cover is not a sieve",
                                     (C.obj_name(c), sieve_names(C, S)))
    results = {}
    results["maximality"] = _first(
        (C.obj_name(c),) for c in C.objects if not J.covering(maximal_sieve(C, c)))
    results["stability"] = _first(
        (C.obj_name(c), sieve_names(C, S), C.mor_name(f))
        for c in C.objects for S in J.covers[c] for f in C.into(c)
        if not J.covering(pullback_sieve(C, f, S)))
    results["transitivity"] = _first(_transitivity_failures(J))
    mereology = [{"axiom": name, "reading": MEREOLOGY[name], "holds": results[name] is None}
                 for name in ("maximality", "stability", "transitivity")]
    for name in ("maximality", "stability", "transitivity"):
        if results[name] is not None:
            return Report.failed("topology", name, results[name], mereology=mereology)
    return Report.passed("topology", covers=sum(len(v) for v in J.covers.values()),
                         mereology=mereology)


def _first(gen):
    return next(iter(gen), None)


def _transitivity_failures(J):
    C = J.base
    for c in C.objects:
        for R in sieves_on(C, c):
            if J.covering(R):
                continue
            for S in J.covers[c]:
                if all(J.covering(pullback_sieve(C, f, R)) for f in S.arrows):
                    yield (C.obj_name(c), sieve_names(C, S), sieve_names(C, R))
                    break


# -- standard topologies


def trivial_topology(C):
    """Only maximal sieves cover."""
    return GTopology(C, {c: [maximal_sieve(C, c)] for c in C.objects})


def open_cover_topology(space):
    """On the opens of a space: a sieve covers U when its members' union is U."""
    C = opens_category(space)
    covers = {}
    for U in C.objects:
        covers[U] = [S for S in sieves_on(C, U) if _union(C, S) == U.mask]
    return GTopology(C, covers)


def _union(C, S):
    acc = 0
    for f in S.arrows:
        acc |= C.src[f].mask
    return acc


def dense_topology(C, proper=False):
    """Double-negation topology of a thin category.

    S covers c when every arrow d → c has some e → d whose composite lies
    in S. With ``proper`` both d and e range over non-initial objects only,
    which on a site of opens means nonempty regions.
    """
    if not C.is_thin():
        raise PreconditionError("dense_topology needs a thin base category")
    initial = set(extremal_objects(C)[0]) if proper else set()
    covers = {}
    for c in C.objects:
        covers[c] = []
        for S in sieves_on(C, c):
            if all(any(C.compose(f, g) in S.arrows
                       for g in C.into(C.src[f]) if C.src[g] not in initial)
                   for f in C.into(c) if C.src[f] not in initial):
                covers[c].append(S)
    return GTopology(C, covers)


def topology_from_families(C, families):
    """Covers generated from lists of arrows per object (sieve closure only)."""
    covers = {}
    for c, fams in families.items():
        if c not in C.objects:
            raise FormatError(f"unknown object {c!r}")
        covers[c] = [generate_sieve(C, c, fam) for fam in fams]
    return GTopology(C, covers)


def generated_topology(C, families):
    """Smallest Grothendieck topology whose covers include the generated sieves."""
    J = {c: {frozenset(C.into(c))} for c in C.objects}
    for c, fams in families.items():
        for fam in fams:
            J[c].add(sieve_closure(C, c, fam))
    candidates = {c: all_sieves(C, c) for c in C.objects}
    changed = True
    while changed:
        changed = False
        for c in C.objects:
            for S in list(J[c]):
                for f in C.into(c):
                    pb = pullback_arrows(C, f, S)
                    if pb not in J[C.src[f]]:
                        J[C.src[f]].add(pb)
                        changed = True
        for c in C.objects:
            for R in candidates[c]:
                if R in J[c]:
                    continue
                if any(all(pullback_arrows(C, f, R) in J[C.src[f]] for f in S) for S in J[c]):
                    J[c].add(R)
                    changed = True
    return GTopology(C, J)


# -- matching families and the sheaf condition


def matching_families(P: Presheaf, S: Sieve):
    """Compatible choices of sections along the arrows of S.

    Each family is the tuple of its values listed in the base's arrow order.
    """
    C = P.base
    arrows = _ordered(C, S.arrows)
    slots = sorted(arrows, key=lambda f: (-len(C.into(C.src[f])), C.mor_index(f)))
    links = {f: [(g, C.compose(f, g)) for g in C.into(C.src[f]) if not C.is_identity(g)]
             for f in arrows}
    pick = {}
    found = []

    def assign(f, x, trail):
        stack = [(f, x)]
        while stack:
            f, x = stack.pop()
            if f in pick:
                if pick[f] != x:
                    return False
                continue
            pick[f] = x
            trail.append(f)
            for g, fg in links[f]:
                stack.append((fg, P.act[g][x]))
        return True

    def extend(i):
        while i < len(slots) and slots[i] in pick:
            i += 1
        if i == len(slots):
            found.append(tuple(pick[f] for f in arrows))
            return
        f = slots[i]
        for x in P.at[C.src[f]]:
            trail = []
            if assign(f, x, trail):
                extend(i + 1)
            for g in trail:
                del pick[g]

    extend(0)
    pos = {c: {x: i for i, x in enumerate(P.at[c])} for c in C.objects}
    found.sort(key=lambda fam: tuple(pos[C.src[f]][x] for f, x in zip(arrows, fam)))
    return found


def restriction_family(P, S, x):
    """The family induced on S by a section x over S.on."""
    return tuple(P.act[f][x] for f in _ordered(P.base, S.arrows))


def is_sheaf(P: Presheaf, J: GTopology):
    """Every matching family on every cover must have exactly one amalgamation."""
    C = P.base
    if C is not J.base:
        raise PreconditionError("presheaf and topology live over different categories")
    checked = 0
    failures = []
    for c in C.objects:
        for S in J.covers[c]:
            fams = matching_families(P, S)
            counts = {}
            for x in P.at[c]:
                k = restriction_family(P, S, x)
                counts[k] = counts.get(k, 0) + 1
            checked += 1
            bad = next((fam for fam in fams if counts.get(fam, 0) != 1), None)
            if bad is not None:
                failures.append({
                    "object": C.obj_name(c), "sieve": sieve_names(C, S), "family": bad,
                    "count": counts.get(bad, 0), "families": len(fams),
                    "amalgamating": sum(1 for f in fams if counts.get(f, 0) >= 1)})
    if failures:
        first = failures[0]
        reason = "amalgamation not unique" if first["count"] > 1 else "no amalgamation"
        return Report.failed("sheaf", reason,
                             (first["object"], first["sieve"], first["family"], first["count"]),
                             families=first["families"], amalgamating=first["amalgamating"],
                             failing_covers=failures)
    return Report.passed("sheaf", covers=checked)


# -- plus construction


class _Plus:
    def __init__(self, P, J):
        C = P.base
        if C is not J.base:
            raise PreconditionError("presheaf and topology live over different categories")
        self.P, self.J, self.C = P, J, C
        pos = {c: {x: i for i, x in enumerate(P.at[c])} for c in C.objects}
        self.rep = {}
        at = {}
        for c in C.objects:
            covers = J.covers[c]
            if not covers:
                at[c] = ()
                continue
            items = []
            for S in covers:
                arrows = _ordered(C, S.arrows)
                for fam in matching_families(P, S):
                    items.append((arrows, fam))
            uf = UnionFind(items)
            for arrows, fam in items:
                value = dict(zip(arrows, fam))
                for R in covers:
                    if R.arrows < set(arrows):
                        sub = _ordered(C, R.arrows)
                        uf.union((arrows, fam), (sub, tuple(value[f] for f in sub)))

            def key(item):
                arrows, fam = item
                return (len(arrows), tuple(C.mor_index(f) for f in arrows),
                        tuple(pos[C.src[f]][x] for f, x in zip(arrows, fam)))

            reps = []
            for block in uf.classes(items):
                r = min(block, key=key)
                reps.append(r)
                for item in block:
                    self.rep[(c, item)] = r
            reps.sort(key=key)
            at[c] = tuple(reps)
        act = {}
        for h in C.morphisms:
            d, c = C.src[h], C.tgt[h]
            table = {}
            for arrows, fam in at[c]:
                value = dict(zip(arrows, fam))
                pulled = _ordered(C, pullback_arrows(C, h, frozenset(arrows)))
                item = (pulled, tuple(value[C.compose(h, g)] for g in pulled))
                if (d, item) not in self.rep:
                    raise PreconditionError("topology is not stable under pullback")
                table[(arrows, fam)] = self.rep[(d, item)]
            act[h] = table
        self.result = Presheaf(C, at, act, check=False)

    def unit(self):
        P, C = self.P, self.C
        comps = {}
        for c in C.objects:
            top = _ordered(C, C.into(c))
            comps[c] = {x: self.rep[(c, (top, tuple(P.act[f][x] for f in top)))] for x in P.at[c]}
        return PresheafMorphism(P, self.result, comps)


def plus(P: Presheaf, J: GTopology):
    """Matching families over covers, identified when they agree on a smaller cover."""
    return _Plus(P, J).result


def plus_unit(P, J):
    """The canonical morphism P → P⁺ (requires the maximal sieves to cover)."""
    return _Plus(P, J).unit()


def sheafify(P, J):
    return plus(plus(P, J), J)


def sheafify_unit(P, J):
    """The canonical morphism P → P⁺⁺ together with its codomain."""
    first = _Plus(P, J)
    second = _Plus(first.result, J)
    return first.unit().then(second.unit())


# -- universal closure on subpresheaves


def closure_subpresheaf(P, A, J):
    """x is in the closure when the sieve of arrows pulling x back into A covers."""
    C = P.base
    A = {c: frozenset(A.get(c, ())) for c in C.objects}
    if not is_subpresheaf(P, A):
        raise PreconditionError("A is not a subpresheaf of P")
    out = {}
    for c in C.objects:
        keep = []
        for x in P.at[c]:
            arrows = frozenset(f for f in C.into(c) if P.act[f][x] in A[C.src[f]])
            if J.covering(Sieve(c, arrows)):
                keep.append(x)
        out[c] = frozenset(keep)
    return out


# -- bundled (presheaf, topology) pairs


def fixture_spaces():
    return {"sierpinski": sierpinski(), "d3": d3(), "discrete2": discrete(["x", "y"])}


def sheaf_corpus(max_total=6):
    """(label, presheaf, topology) over the opens of the three fixture spaces.

    Topologies: trivial, open-cover and dense (nonempty regions). Presheaves:
    the small presheaf corpus plus constant and all {0,1}-valued functions.
    """
    out = []
    for name, X in fixture_spaces().items():
        C = opens_category(X)
        tops = [("trivial", trivial_topology(C)), ("open-cover", open_cover_topology(X)),
                ("dense", dense_topology(C, proper=True))]
        pshs = [(f"corpus[{i}]", P) for i, P in enumerate(presheaf_corpus(C, max_total=max_total))]
        pshs += [("constant{0,1}", constant_functions(X)), ("functions{0,1}", functions_presheaf(X))]
        for tname, J in tops:
            for pname, P in pshs:
                out.append((f"{name}/{tname}/{pname}", P, J))
    return out
