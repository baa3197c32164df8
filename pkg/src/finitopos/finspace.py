"""Finite topological spaces and the Heyting algebra of their open sets.

Subsets are bitmasks over the ordered point tuple: bit ``i`` stands for
``points[i]``. Open families are kept sorted by mask value, which fixes the
iteration order of every report.

>>> X = d3()
>>> X.labels(heyting_notnot(X.open({"l", "r"})).mask)
('l', 'm', 'r')
"""

from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

from ._order import UnionFind, preorder_violation
from .errors import FormatError, PreconditionError, Report


def _check_points(points):
    points = tuple(points)
    seen = set()
    for p in points:
        if p in seen:
            raise FormatError(f"duplicate point identifier {p!r}")
        seen.add(p)
    return points


def _masks(points, family):
    index = {p: i for i, p in enumerate(points)}
    out = []
    for subset in family:
        m = 0
        for p in subset:
            if p not in index:
                raise FormatError(f"unknown point {p!r}")
            m |= 1 << index[p]
        out.append(m)
    return out


def _labels(points, mask):
    return tuple(p for i, p in enumerate(points) if mask >> i & 1)


def _first_violation(n, masks):
    full = (1 << n) - 1
    family = set(masks)
    if 0 not in family:
        return "empty set missing", ()
    ordered = sorted(family)
    for a, b in combinations(ordered, 2):
        if a | b not in family:
            return "union not open", (a, b, a | b)
    for a, b in combinations(ordered, 2):
        if a & b not in family:
            return "intersection not open", (a, b, a & b)
    if full not in family:
        return "total set missing", ()
    return None


def validate_space(points, opens):
    """Check the finite topology axioms; report the first violated one.

    Duplicate or unknown point identifiers raise FormatError.
    """
    points = _check_points(points)
    masks = _masks(points, opens)
    bad = _first_violation(len(points), masks)
    if bad is None:
        return Report.passed("space", points=len(points), opens=len(set(masks)))
    law, masks_witness = bad
    witness = tuple(_labels(points, m) for m in masks_witness)
    return Report.failed("space", law, witness)


class FiniteSpace:
    """A finite set of points with an explicit family of open subsets."""

    __slots__ = ("points", "opens", "full", "_index", "_open_set", "_interior", "_hash")

    def __init__(self, points, opens):
        points = _check_points(points)
        self._setup(points, _masks(points, opens))

    @classmethod
    def from_masks(cls, points, masks):
        space = cls.__new__(cls)
        space._setup(_check_points(points), list(masks))
        return space

    def _setup(self, points, masks):
        n = len(points)
        bad = _first_violation(n, masks)
        if bad is not None:
            law, w = bad
            raise PreconditionError(f"not a topology: {law} {[_labels(points, m) for m in w]}")
        self.points = points
        self.opens = tuple(sorted(set(masks)))
        self.full = (1 << n) - 1
        self._index = {p: i for i, p in enumerate(points)}
        self._open_set = frozenset(self.opens)
        self._interior = None
        self._hash = hash((self.points, self.opens))

    def __eq__(self, other):
        if not isinstance(other, FiniteSpace):
            return NotImplemented
        return self.points == other.points and self.opens == other.opens

    def __hash__(self):
        return self._hash

    def __repr__(self):
        shown = ", ".join(self.format(m) for m in self.opens)
        return f"FiniteSpace({list(self.points)!r}, [{shown}])"

    def __len__(self):
        return len(self.points)

    # -- subset encoding

    def mask(self, subset):
        m = 0
        for p in subset:
            try:
                m |= 1 << self._index[p]
            except KeyError:
                raise FormatError(f"unknown point {p!r}") from None
        return m

    def labels(self, mask):
        return _labels(self.points, mask)

    def subset(self, mask):
        return frozenset(self.labels(mask))

    def format(self, mask):
        return "{" + ",".join(str(p) for p in self.labels(mask)) + "}"

    def is_open(self, mask):
        return mask in self._open_set

    def open(self, subset):
        return OpenSet(self, self.mask(subset))

    @property
    def total(self):
        return OpenSet(self, self.full)

    @property
    def empty(self):
        return OpenSet(self, 0)

    def open_sets(self):
        return [OpenSet(self, m) for m in self.opens]

    # -- interior / closure on masks

    def interior_table(self):
        """List indexed by mask giving the interior mask; built once per space."""
        if self._interior is None:
            table = [0] * (self.full + 1)
            for m in range(self.full + 1):
                acc = 0
                for u in self.opens:
                    if u & ~m == 0:
                        acc |= u
                table[m] = acc
            self._interior = table
        return self._interior

    def interior(self, mask):
        if len(self.points) <= 16:
            return self.interior_table()[mask]
        acc = 0
        for u in self.opens:
            if u & ~mask == 0:
                acc |= u
        return acc

    def closure(self, mask):
        return self.full & ~self.interior(self.full & ~mask)

    def neg(self, mask):
        return self.interior(self.full & ~mask)

    def implies(self, a, b):
        return self.interior((self.full & ~a) | b)

    def min_open(self, i):
        """Mask of the smallest open containing the point with index i."""
        acc = self.full
        for u in self.opens:
            if u >> i & 1:
                acc &= u
        return acc


@dataclass(frozen=True)
class OpenSet:
    space: FiniteSpace
    mask: int

    def __post_init__(self):
        if not self.space.is_open(self.mask):
            raise PreconditionError(f"{self.space.format(self.mask)} is not open")

    @property
    def points(self):
        return self.space.subset(self.mask)

    def __contains__(self, p):
        return p in self.points

    def __le__(self, other):
        _same_space(self, other)
        return self.mask & ~other.mask == 0

    def __lt__(self, other):
        return self <= other and self.mask != other.mask

    def __and__(self, other):
        _same_space(self, other)
        return OpenSet(self.space, self.mask & other.mask)

    def __or__(self, other):
        _same_space(self, other)
        return OpenSet(self.space, self.mask | other.mask)

    def __bool__(self):
        return self.mask != 0

    def __repr__(self):
        return self.space.format(self.mask)


def _same_space(*opens):
    first = opens[0].space
    for u in opens[1:]:
        if u.space is not first and u.space != first:
            raise PreconditionError("open sets belong to different spaces")
    return first


# -- constructors


def from_preorder(points, le):
    """Space whose opens are the down-closed sets of the preorder ``le``.

    ``(x, y)`` in ``le`` reads "every open containing y contains x", so the
    minimal neighbourhood of y is the down-set of y. Reflexive pairs may be
    omitted; transitivity is checked, not repaired.
    """
    points = _check_points(points)
    index = {p: i for i, p in enumerate(points)}
    rel = set()
    for pair in le:
        a, b = pair
        if a not in index or b not in index:
            raise FormatError(f"unknown point in pair {pair!r}")
        rel.add((a, b))
    rel |= {(p, p) for p in points}
    bad = preorder_violation(list(points), rel)
    if bad is not None:
        raise PreconditionError(f"not a preorder: {bad[0]} fails at {bad[1]}")
    below = [0] * len(points)
    for a, b in rel:
        below[index[b]] |= 1 << index[a]
    masks = [m for m in range(1 << len(points)) if _down_closed(m, below)]
    return FiniteSpace.from_masks(points, masks)


def _down_closed(mask, below):
    i = 0
    m = mask
    while m:
        if m & 1 and below[i] & ~mask:
            return False
        m >>= 1
        i += 1
    return True


def specialization_preorder(space):
    """Pairs (x, y) with x in the minimal neighbourhood of y."""
    out = set()
    for j, y in enumerate(space.points):
        for x in space.labels(space.min_open(j)):
            out.add((x, y))
    return out


class Generated(NamedTuple):
    space: FiniteSpace
    added: tuple  # opens not expressible as unions of basis members
    covers: bool
    intersection_compatible: bool


def generate_from_basis(points, basis):
    """Topology generated by a family of subsets.

    Unions of basis members (with the empty union) form the candidate opens.
    When the family fails to cover the points or is not closed enough under
    intersection, the result is closed under finite intersections and the
    total set, and the extra opens are listed in ``added``.
    """
    points = _check_points(points)
    full = (1 << len(points)) - 1
    members = sorted(set(_masks(points, basis)))
    unions = {0}
    for b in members:
        unions |= {u | b for u in unions}
    covers = full in unions
    compatible = all(a & b in unions for a, b in combinations(members, 2))
    family = set(unions) | {full}
    changed = True
    while changed:
        changed = False
        for a, b in combinations(sorted(family), 2):
            for c in (a | b, a & b):
                if c not in family:
                    family.add(c)
                    changed = True
    space = FiniteSpace.from_masks(points, family)
    added = tuple(space.labels(m) for m in space.opens if m not in unions)
    return Generated(space, added, covers, compatible)


def discrete(points):
    points = _check_points(points)
    return FiniteSpace.from_masks(points, range(1 << len(points)))


def indiscrete(points):
    points = _check_points(points)
    return FiniteSpace.from_masks(points, [0, (1 << len(points)) - 1])


def sierpinski():
    """Two points, ``"1"`` open and ``"0"`` closed."""
    return FiniteSpace(["0", "1"], [[], ["1"], ["0", "1"]])


def d3():
    """Digital interval l - m - r: the two ends are open, the middle is closed."""
    return FiniteSpace(["l", "m", "r"], [[], ["l"], ["r"], ["l", "r"], ["l", "m", "r"]])


def disjoint_union(a, b, tags=("a", "b")):
    """Coproduct of two spaces; points become ``(tag, point)`` pairs."""
    points = [(tags[0], p) for p in a.points] + [(tags[1], p) for p in b.points]
    shift = len(a.points)
    masks = [u | (v << shift) for u in a.opens for v in b.opens]
    return FiniteSpace.from_masks(points, masks)


def subspace(space, subset):
    mask = space.mask(subset) if not isinstance(subset, int) else subset
    pts = space.labels(mask)
    traces = {space.mask(space.subset(u & mask)) for u in space.opens}
    local = {p: i for i, p in enumerate(pts)}
    masks = []
    for t in traces:
        masks.append(sum(1 << local[p] for p in space.labels(t)))
    return FiniteSpace.from_masks(pts, masks)


# -- operations


class Boundary(NamedTuple):
    interior: frozenset
    closure: frozenset
    boundary: frozenset


def boundary_operators(space, subset):
    m = space.mask(subset)
    inner = space.interior(m)
    outer = space.closure(m)
    return Boundary(space.subset(inner), space.subset(outer), space.subset(outer & ~inner))


def heyting_implies(u, v):
    space = _same_space(u, v)
    return OpenSet(space, space.implies(u.mask, v.mask))


def heyting_not(u):
    return OpenSet(u.space, u.space.neg(u.mask))


def heyting_notnot(u):
    return heyting_not(heyting_not(u))


def regular_opens(space):
    return [OpenSet(space, m) for m in space.opens if space.neg(space.neg(m)) == m]


def regular_join(u, v):
    """Join in the Boolean algebra of regular opens: double negation of the union."""
    return heyting_notnot(u | v)


def clopens(space):
    return [m for m in space.opens if space.is_open(space.full & ~m)]


def connected_components(space):
    """Blocks of points that no clopen set separates, in mask order."""
    cl = clopens(space)
    blocks = []
    seen = 0
    for i in range(len(space.points)):
        if seen >> i & 1:
            continue
        block = space.full
        for c in cl:
            block &= c if c >> i & 1 else ~c
        seen |= block
        blocks.append(block)
    return [space.subset(b) for b in sorted(blocks)]


def path_components(space):
    """Components of the specialization graph; agrees with connected_components."""
    uf = UnionFind(space.points)
    for x, y in specialization_preorder(space):
        uf.union(x, y)
    return [frozenset(b) for b in uf.classes(space.points)]


def min_neighborhood(space, p):
    """Intersection of all opens containing p: the canonical germ representative."""
    if p not in space._index:
        raise PreconditionError(f"{p!r} is not a point of the space")
    return OpenSet(space, space.min_open(space._index[p]))


def neighborhood_filter(space, p):
    """All opens containing p, smallest first."""
    i = space._index.get(p)
    if i is None:
        raise PreconditionError(f"{p!r} is not a point of the space")
    return [OpenSet(space, u) for u in space.opens if u >> i & 1]
