"""Small helpers for relations on finite sets, shared by the space and category code."""


class UnionFind:
    def __init__(self, items=()):
        self.parent = {}
        for x in items:
            self.add(x)

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra

    def classes(self, order):
        """Blocks as lists, ordered by first occurrence in `order`."""
        blocks = {}
        for x in order:
            blocks.setdefault(self.find(x), []).append(x)
        return list(blocks.values())


def reflexive_transitive_closure(elements, pairs):
    elements = list(elements)
    up = {x: {x} for x in elements}
    for a, b in pairs:
        up[a].add(b)
    # Warshall over the element order
    for k in elements:
        for x in elements:
            if k in up[x]:
                up[x] |= up[k]
    return {(a, b) for a in elements for b in up[a]}


def preorder_violation(elements, pairs):
    """First witness that `pairs` is not reflexive-transitive, or None."""
    rel = set(pairs)
    for x in elements:
        if (x, x) not in rel:
            return ("reflexivity", (x, x))
    succ = {x: [] for x in elements}
    for a, b in sorted(rel, key=lambda p: (_pos(elements, p[0]), _pos(elements, p[1]))):
        succ[a].append(b)
    for a in elements:
        for b in succ[a]:
            for c in succ[b]:
                if (a, c) not in rel:
                    return ("transitivity", (a, b, c))
    return None


def _pos(elements, x):
    return elements.index(x)


def equivalence_classes(elements, pairs):
    """Classes of the equivalence a~b iff (a,b) and (b,a) are both in a preorder."""
    rel = set(pairs)
    uf = UnionFind(elements)
    for a, b in rel:
        if (b, a) in rel:
            uf.union(a, b)
    return uf.classes(elements)
