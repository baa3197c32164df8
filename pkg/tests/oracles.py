"""Independent reference computations used to freeze expected values.

None of these reuse the package's evaluation code paths: each recomputes
its answer by a different route (sequent search, pointwise Kripke
semantics, graph search, raw enumeration).
"""

from functools import lru_cache
from itertools import product

import networkx as nx

from finitopos.forcing import And, Atom, Bot, Imp, Or, Top


# -- intuitionistic provability by contraction-free sequent search (G4ip)


def provable(goal):
    return _prove(frozenset(), goal)


@lru_cache(maxsize=None)
def _prove(ctx, goal):
    if Bot() in ctx or goal in ctx or isinstance(goal, Top):
        return True
    if isinstance(goal, And):
        return _prove(ctx, goal.left) and _prove(ctx, goal.right)
    if isinstance(goal, Imp):
        return _prove(ctx | {goal.left}, goal.right)
    for h in ctx:
        rest = ctx - {h}
        if isinstance(h, Top):
            return _prove(rest, goal)
        if isinstance(h, And):
            return _prove(rest | {h.left, h.right}, goal)
        if isinstance(h, Or):
            return _prove(rest | {h.left}, goal) and _prove(rest | {h.right}, goal)
        if isinstance(h, Imp):
            a, b = h.left, h.right
            if isinstance(a, Atom) and a in ctx:
                return _prove(rest | {b}, goal)
            if isinstance(a, Top):
                return _prove(rest | {b}, goal)
            if isinstance(a, Bot):
                return _prove(rest, goal)
            if isinstance(a, And):
                return _prove(rest | {Imp(a.left, Imp(a.right, b))}, goal)
            if isinstance(a, Or):
                return _prove(rest | {Imp(a.left, b), Imp(a.right, b)}, goal)
    # non-invertible steps
    if isinstance(goal, Or) and (_prove(ctx, goal.left) or _prove(ctx, goal.right)):
        return True
    for h in ctx:
        if isinstance(h, Imp) and isinstance(h.left, Imp):
            c, d, b = h.left.left, h.left.right, h.right
            rest = ctx - {h}
            if _prove(rest | {Imp(d, b)}, Imp(c, d)) and _prove(rest | {b}, goal):
                return True
    return False


def classically_valid(p, names):
    """Row-by-row truth table with plain Python booleans."""
    def ev(q, row):
        if isinstance(q, Atom):
            return row[q.name]
        if isinstance(q, Top):
            return True
        if isinstance(q, Bot):
            return False
        a, b = ev(q.left, row), ev(q.right, row)
        if isinstance(q, And):
            return a and b
        if isinstance(q, Or):
            return a or b
        return (not a) or b
    return all(ev(p, dict(zip(names, bits))) for bits in product((False, True), repeat=len(names)))


# -- pointwise Kripke semantics on the specialization preorder


def kripke_points(space, valuation, p):
    """Points where p holds, where x sees every point of its minimal open."""
    pts = space.points
    idx = {q: i for i, q in enumerate(pts)}
    sees = {x: [y for y in pts if space.min_open(idx[x]) >> idx[y] & 1] for x in pts}

    def holds(x, q):
        if isinstance(q, Atom):
            return x in valuation[q.name].points
        if isinstance(q, Top):
            return True
        if isinstance(q, Bot):
            return False
        if isinstance(q, And):
            return holds(x, q.left) and holds(x, q.right)
        if isinstance(q, Or):
            return holds(x, q.left) or holds(x, q.right)
        return all(holds(y, q.right) for y in sees[x] if holds(y, q.left))

    return frozenset(x for x in pts if holds(x, p))


# -- components and counts by graph search


def element_graph_components(P):
    """Connected components of the category of elements of a presheaf."""
    C = P.base
    G = nx.Graph()
    G.add_nodes_from((c, x) for c in C.objects for x in P.at[c])
    for f in C.morphisms:
        for y, x in P.act[f].items():
            G.add_edge((C.tgt[f], y), (C.src[f], x))
    return nx.number_connected_components(G)


def space_components(space):
    G = nx.Graph()
    G.add_nodes_from(space.points)
    for j, y in enumerate(space.points):
        for x in space.labels(space.min_open(j)):
            G.add_edge(x, y)
    return sorted(sorted(map(str, c)) for c in nx.connected_components(G))


def composable_tuples(C, k):
    """Count k-tuples of morphisms with matching ends, by raw product."""
    if k == 0:
        return len(C.objects)
    return sum(1 for t in product(C.morphisms, repeat=k)
               if all(C.tgt[t[i]] == C.src[t[i + 1]] for i in range(k - 1)))


def count_topologies_up_to_homeomorphism(n):
    """Distinct finite topologies on n points up to relabelling, by brute force
    over all families of subsets (feasible for n <= 3)."""
    from itertools import combinations, permutations
    full = (1 << n) - 1
    middle = list(range(1, full))
    seen = set()
    for r in range(len(middle) + 1):
        for fam in combinations(middle, r):
            opens = set(fam) | {0, full}
            if all(a | b in opens and a & b in opens for a in opens for b in opens):
                key = min(tuple(sorted(sum(1 << perm[i] for i in range(n) if m >> i & 1) for m in opens))
                          for perm in permutations(range(n)))
                seen.add(key)
    return len(seen)
