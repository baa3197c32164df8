"""Truncated nerves of finite categories and connectivity of finite groupoids.

A 0-simplex of the nerve is an object; a k-simplex for k >= 1 is a tuple
``(f1, ..., fk)`` of composable morphisms, ``tgt(fi) == src(fi+1)``.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

from ._order import UnionFind
from .errors import PreconditionError, Report


@dataclass
class TruncatedSSet:
    """Simplices per dimension with face and degeneracy tables.

    ``faces[k][i]`` maps k-simplices to (k-1)-simplices (1 <= k <= dim);
    ``degeneracies[k][i]`` maps k-simplices to (k+1)-simplices (k < dim).
    """
    dim: int
    simplices: list
    faces: dict = field(default_factory=dict)
    degeneracies: dict = field(default_factory=dict)
    names: dict = field(default_factory=dict)

    def counts(self):
        return [len(s) for s in self.simplices]

    def d(self, k, i, x):
        return self.faces[k][i][x]

    def s(self, k, i, x):
        return self.degeneracies[k][i][x]

    def name(self, x):
        return self.names.get(x, str(x))

    def nondegenerate(self, k):
        if k == 0:
            return list(self.simplices[0])
        images = set()
        for table in self.degeneracies[k - 1].values():
            images |= set(table.values())
        return [x for x in self.simplices[k] if x not in images]


def _vertices(C, x, k):
    if k == 0:
        return (x,)
    return (C.src[x[0]],) + tuple(C.tgt[f] for f in x)


def _face(C, x, k, i):
    if k == 1:
        return C.tgt[x[0]] if i == 0 else C.src[x[0]]
    if i == 0:
        return x[1:]
    if i == k:
        return x[:-1]
    return x[:i - 1] + (C.compose(x[i], x[i - 1]),) + x[i + 1:]


def _degeneracy(C, x, k, i):
    if k == 0:
        return (C.identity[x],)
    c = _vertices(C, x, k)[i]
    return x[:i] + (C.identity[c],) + x[i:]


def nerve(C, n=4):
    """Nerve of C truncated at dimension n."""
    if n < 0:
        raise PreconditionError("truncation level must be non-negative")
    levels = [list(C.objects)]
    if n >= 1:
        levels.append([(m,) for m in C.morphisms])
    for _ in range(2, n + 1):
        levels.append([x + (g,) for x in levels[-1] for g in C.out(C.tgt[x[-1]])])
    faces = {k: {i: {x: _face(C, x, k, i) for x in levels[k]} for i in range(k + 1)}
             for k in range(1, n + 1)}
    degeneracies = {k: {i: {x: _degeneracy(C, x, k, i) for x in levels[k]} for i in range(k + 1)}
                    for k in range(n)}
    names = {a: C.obj_name(a) for a in C.objects}
    for k in range(1, n + 1):
        for x in levels[k]:
            names[x] = "(" + ",".join(C.mor_name(f) for f in x) + ")"
    return TruncatedSSet(n, levels, faces, degeneracies, names)


def check_simplicial_identities(S):
    """Check all five identity families wherever both sides fall within the truncation."""
    n = S.dim
    checked = 0

    def fail(law, x, k, i, j):
        return Report.failed("simplicial", law, (k, i, j, S.name(x)), checked=checked)

    for k in range(2, n + 1):
        for x in S.simplices[k]:
            for j in range(k + 1):
                for i in range(j):
                    checked += 1
                    if S.d(k - 1, i, S.d(k, j, x)) != S.d(k - 1, j - 1, S.d(k, i, x)):
                        return fail("d_i d_j = d_(j-1) d_i", x, k, i, j)
    for k in range(1, n):
        for x in S.simplices[k]:
            for j in range(k + 1):
                y = S.s(k, j, x)
                for i in range(k + 2):
                    checked += 1
                    lhs = S.d(k + 1, i, y)
                    if i < j:
                        ok, law = lhs == S.s(k - 1, j - 1, S.d(k, i, x)), "d_i s_j = s_(j-1) d_i"
                    elif i in (j, j + 1):
                        ok, law = lhs == x, "d_j s_j = d_(j+1) s_j = id"
                    else:
                        ok, law = lhs == S.s(k - 1, j, S.d(k, i - 1, x)), "d_i s_j = s_j d_(i-1)"
                    if not ok:
                        return fail(law, x, k, i, j)
    # d_0 s_0 = d_1 s_0 = id on vertices
    if n >= 1:
        for x in S.simplices[0]:
            y = S.s(0, 0, x)
            checked += 1
            if S.d(1, 0, y) != x or S.d(1, 1, y) != x:
                return fail("d_j s_j = d_(j+1) s_j = id", x, 0, 0, 0)
    for k in range(n - 1):
        for x in S.simplices[k]:
            for j in range(k + 1):
                for i in range(j + 1):
                    checked += 1
                    if S.s(k + 1, i, S.s(k, j, x)) != S.s(k + 1, j + 1, S.s(k, i, x)):
                        return fail("s_i s_j = s_(j+1) s_i", x, k, i, j)
    return Report.passed("simplicial", checked=checked)


def nerve_map(F, n=4):
    """Simplicial map N(F) between the truncated nerves, as per-dimension dicts."""
    C = F.source
    N = nerve(C, n)
    out = [{a: F.ob[a] for a in N.simplices[0]}]
    for k in range(1, n + 1):
        out.append({x: tuple(F.ar[f] for f in x) for x in N.simplices[k]})
    return out


def check_simplicial_map(S, T, maps):
    """Report whether per-dimension maps S -> T commute with faces and degeneracies."""
    targets = [set(level) for level in T.simplices]
    for k in range(S.dim + 1):
        for x in S.simplices[k]:
            if maps[k][x] not in targets[k]:
                return Report.failed("simplicial map", "not a simplex", (k, S.name(x)))
            for i in range(k + 1):
                if k > 0 and maps[k - 1][S.d(k, i, x)] != T.d(k, i, maps[k][x]):
                    return Report.failed("simplicial map", "face", (k, i, S.name(x)))
                if k < S.dim and maps[k + 1][S.s(k, i, x)] != T.s(k, i, maps[k][x]):
                    return Report.failed("simplicial map", "degeneracy", (k, i, S.name(x)))
    return Report.passed("simplicial map")


def standard_simplex(m, n=None, edge_names=None):
    """Δ[m] truncated at n, built directly from non-decreasing vertex sequences.

    d_i deletes the i-th vertex and s_i repeats it. ``edge_names`` maps
    vertex pairs (a, b) with a < b to labels used when naming simplices.
    """
    n = m if n is None else n
    levels = [[(v,) for v in range(m + 1)]]
    for _ in range(n):
        levels.append([x + (v,) for x in levels[-1] for v in range(x[-1], m + 1)])
    faces = {k: {i: {x: x[:i] + x[i + 1:] for x in levels[k]} for i in range(k + 1)}
             for k in range(1, n + 1)}
    degeneracies = {k: {i: {x: x[:i + 1] + x[i:] for x in levels[k]} for i in range(k + 1)}
                    for k in range(n)}
    names = {}
    edge_names = edge_names or {}
    for k in range(n + 1):
        for x in levels[k]:
            if k == 0:
                names[x] = str(x[0])
            else:
                parts = [edge_names.get((a, b), f"id{a}" if a == b else f"{a}{b}") for a, b in zip(x, x[1:])]
                names[x] = "(" + ",".join(parts) + ")"
    return TruncatedSSet(n, levels, faces, degeneracies, names)


def three_arrow_simplex():
    """Δ[3] with edges f: 0→1, g: 1→2, h: 2→3 and their composites named."""
    labels = {(0, 1): "f", (1, 2): "g", (2, 3): "h",
              (0, 2): "g∘f", (1, 3): "h∘g", (0, 3): "h∘(g∘f)"}
    return standard_simplex(3, 3, labels), labels


def triangle_edges(S, x, labels):
    """Edges of a 2-simplex listed as (first arrow, second arrow, composite)."""
    a, b, c = x
    return (labels[(a, b)], labels[(b, c)], labels[(a, c)])


def corrupt_face(S, k, i, x, y):
    """Copy of S with d_i of the k-simplex x redirected to y."""
    faces = {kk: {ii: dict(t) for ii, t in v.items()} for kk, v in S.faces.items()}
    faces[k][i][x] = y
    return TruncatedSSet(S.dim, S.simplices, faces, S.degeneracies, S.names)


def nerve_to_dict(S):
    """JSON form: simplices by dimension plus index-based face and degeneracy tables."""
    index = [{x: j for j, x in enumerate(level)} for level in S.simplices]
    out = {"dim": S.dim, "counts": S.counts(), "simplices": {}, "faces": {}, "degeneracies": {}}
    for k, level in enumerate(S.simplices):
        out["simplices"][str(k)] = [S.name(x) for x in level]
        if k >= 1:
            out["faces"][str(k)] = [[index[k - 1][S.d(k, i, x)] for i in range(k + 1)] for x in level]
        if k < S.dim:
            out["degeneracies"][str(k)] = [[index[k + 1][S.s(k, i, x)] for i in range(k + 1)] for x in level]
    return out


# -- groupoids


class Pi1(NamedTuple):
    base: object
    elements: tuple  # hom(base, base), identity first
    table: tuple     # table[i][j] = index of elements[i] ∘ elements[j]

    @property
    def order(self):
        return len(self.elements)


class Connectivity(NamedTuple):
    pi0: int
    components: list
    pi1: list
    kind: str


def check_groupoid(C):
    for m in C.morphisms:
        if C.inverse(m) is None:
            return Report.failed("groupoid", "non-invertible morphism", (C.mor_name(m),))
    return Report.passed("groupoid")


def connectivity_report(G):
    """π0, π1 at the first object of each component, and the place in the
    discrete / connected / contractible hierarchy."""
    rep = check_groupoid(G)
    if not rep:
        raise PreconditionError(f"not a groupoid: {rep.failure} {rep.witness[0]}")
    uf = UnionFind(G.objects)
    for m in G.morphisms:
        uf.union(G.src[m], G.tgt[m])
    components = [tuple(b) for b in uf.classes(G.objects)]
    pi1 = []
    for block in components:
        a = block[0]
        ident = G.identity[a]
        elems = (ident,) + tuple(m for m in G.hom(a, a) if m != ident)
        pos = {m: i for i, m in enumerate(elems)}
        table = tuple(tuple(pos[G.compose(g, f)] for f in elems) for g in elems)
        pi1.append(Pi1(a, elems, table))
    pi0 = len(components)
    if all(G.is_identity(m) for m in G.morphisms):
        kind = "discrete"
    elif pi0 == 1 and all(len(G.hom(a, b)) == 1 for a in G.objects for b in G.objects):
        kind = "contractible"
    elif pi0 == 1:
        kind = "connected"
    else:
        kind = "mixed"
    return Connectivity(pi0, components, pi1, kind)
