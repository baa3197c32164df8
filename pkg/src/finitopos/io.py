"""JSON loaders and dumpers for spaces, categories, presheaves and topologies.

A presheaf or topology file names its base either inline or as a path
relative to the file. A base that looks like a space (``points`` plus
``opens`` or ``le``) stands for the category of its opens; anything with
``objects`` is read as a category file.
"""

import json
import os
from importlib import resources

from .errors import FormatError, PreconditionError
from .fincat import FinCategory, opens_category
from .finspace import FiniteSpace, OpenSet, from_preorder
from .presheaf import Presheaf
from .site import topology_from_families


def fixture_path(name):
    """Path of a bundled data file, by stem or file name."""
    stem = name[:-5] if name.endswith(".json") else name
    return str(resources.files("finitopos").joinpath(f"data/{stem}.json"))


def read_json(path):
    """Parse a file; a bare fixture name such as ``d3.json`` falls back to the bundled copy."""
    if not os.path.exists(path) and os.sep not in path:
        bundled = fixture_path(path)
        if os.path.exists(bundled):
            path = bundled
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise FormatError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from None


def is_space_like(raw):
    return isinstance(raw, dict) and "points" in raw and ("opens" in raw or "le" in raw)


def space_from_dict(raw):
    if not is_space_like(raw):
        raise FormatError("a space needs 'points' and either 'opens' or 'le'")
    points = raw["points"]
    if not isinstance(points, list):
        raise FormatError("'points' must be a list")
    if "opens" in raw:
        return FiniteSpace(points, raw["opens"])
    try:
        pairs = [tuple(p) for p in raw["le"]]
    except TypeError:
        raise FormatError("'le' must be a list of pairs") from None
    if any(len(p) != 2 for p in pairs):
        raise FormatError("'le' must be a list of pairs")
    return from_preorder(points, pairs)


def space_to_dict(space):
    return {"points": list(space.points), "opens": [list(space.labels(m)) for m in space.opens]}


def load_space(path):
    return space_from_dict(read_json(path))


def category_from_dict(raw):
    if is_space_like(raw):
        return opens_category(space_from_dict(raw))
    if not isinstance(raw, dict) or "objects" not in raw:
        raise FormatError("a category needs 'objects'")
    return FinCategory.from_dict(raw)


def load_category(path):
    return category_from_dict(read_json(path))


def _resolve_base(raw, origin):
    base = raw.get("base") if isinstance(raw, dict) else None
    if base is None:
        raise FormatError("missing 'base'")
    if isinstance(base, str):
        if origin and not os.path.isabs(base):
            candidate = os.path.join(os.path.dirname(origin), base)
            base = candidate if os.path.exists(candidate) else base
        return category_from_dict(read_json(base))
    return category_from_dict(base)


# -- names


class Names:
    """Lookup of objects and morphisms of a category by their printed names.

    Objects of an opens category may also be written as bare point lists,
    ``"l,r"`` or ``"{r,l}"``.
    """

    def __init__(self, C):
        self.C = C
        self.objects = {C.obj_name(a): a for a in C.objects}
        self.morphisms = {C.mor_name(m): m for m in C.morphisms}
        self.opens = {}
        for a in C.objects:
            if isinstance(a, OpenSet):
                self.opens[frozenset(map(str, a.points))] = a

    def obj(self, name):
        if name in self.objects:
            return self.objects[name]
        if self.opens:
            key = frozenset(p.strip() for p in name.strip().strip("{}").split(",") if p.strip())
            if key in self.opens:
                return self.opens[key]
        raise FormatError(f"unknown object {name!r}")

    def mor(self, name):
        if name in self.morphisms:
            return self.morphisms[name]
        if "->" in name and self.opens:
            a, b = name.split("->", 1)
            hom = self.C.hom(self.obj(a), self.obj(b))
            if hom:
                return hom[0]
        raise FormatError(f"unknown morphism {name!r}")


def element_label(x):
    if isinstance(x, frozenset):
        return "{" + ",".join(sorted(element_label(y) for y in x)) + "}"
    if isinstance(x, tuple):
        return "(" + ",".join(element_label(y) for y in x) + ")"
    if isinstance(x, OpenSet):
        return repr(x)
    return str(x)


def presheaf_from_dict(raw, origin=None, base=None):
    C = base if base is not None else _resolve_base(raw, origin)
    names = Names(C)
    try:
        at_raw = raw["at"]
        act_raw = raw.get("act", {})
        at = {names.obj(k): [str(x) for x in v] for k, v in at_raw.items()}
        act = {}
        for k, table in act_raw.items():
            act[names.mor(k)] = {str(x): str(y) for x, y in table.items()}
    except (KeyError, AttributeError, TypeError) as exc:
        raise FormatError(f"malformed presheaf description: {exc}") from None
    return Presheaf(C, at, act)


def presheaf_to_dict(P, base=None):
    C = P.base
    lab = element_label
    out = {"base": base if base is not None else _base_dict(C), "at": {}, "act": {}}
    for c in C.objects:
        out["at"][C.obj_name(c)] = [lab(x) for x in P.at[c]]
    for m in C.morphisms:
        if not C.is_identity(m):
            out["act"][C.mor_name(m)] = {lab(x): lab(y) for x, y in P.act[m].items()}
    return out


def _base_dict(C):
    obj = C.objects[0] if C.objects else None
    if isinstance(obj, OpenSet):
        return space_to_dict(obj.space)
    return C.to_dict()


def load_presheaf(path, base=None):
    return presheaf_from_dict(read_json(path), origin=path, base=base)


def topology_from_dict(raw, origin=None, base=None):
    C = base if base is not None else _resolve_base(raw, origin)
    names = Names(C)
    try:
        families = {}
        for k, fams in raw["covers"].items():
            families[names.obj(k)] = [[names.mor(f) for f in fam] for fam in fams]
    except (KeyError, AttributeError, TypeError) as exc:
        raise FormatError(f"malformed topology description: {exc}") from None
    try:
        return topology_from_families(C, families)
    except PreconditionError as exc:
        raise FormatError(str(exc)) from None


def topology_to_dict(J, base=None):
    C = J.base
    covers = {}
    for c in C.objects:
        covers[C.obj_name(c)] = [sorted((C.mor_name(f) for f in S.arrows), key=str)
                                 for S in J.covers[c]]
    return {"base": base if base is not None else _base_dict(C), "covers": covers}


def load_topology(path, base=None):
    return topology_from_dict(read_json(path), origin=path, base=base)
