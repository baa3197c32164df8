"""Command-line front end.

Every handler returns an exit code and a plain dict; the dict is printed
either as JSON or as indented ``key: value`` text with the same structure.

Exit codes: 0 success or property holds, 1 checked property fails, 2 usage
or format error, 3 enumeration budget exceeded.
"""

import argparse
import json
import sys

import numpy as np

from . import fincat, finspace, forcing, io, presheaf, simplicial, site
from .errors import BudgetExceeded, FormatError, PreconditionError, Report, default_budget
from .finspace import OpenSet

OK, FAILED, USAGE, BUDGET = 0, 1, 2, 3


# -- output


def plain(x):
    """Convert to JSON-compatible values with deterministic ordering."""
    if isinstance(x, Report):
        return plain(x.as_dict())
    if isinstance(x, dict):
        return {str(plain_key(k)): plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted((plain(v) for v in x), key=lambda v: json.dumps(v, ensure_ascii=False))
    if isinstance(x, OpenSet):
        return repr(x)
    if isinstance(x, forcing.Formula):
        return forcing.show(x)
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    return str(x)


def plain_key(k):
    return io.element_label(k) if not isinstance(k, str) else k


def render_text(data, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(data, dict):
        for k, v in data.items():
            if _scalar(v):
                lines.append(f"{pad}{k}: {_fmt(v)}")
            elif isinstance(v, list) and all(_scalar(e) for e in v):
                lines.append(f"{pad}{k}: " + ", ".join(_fmt(e) for e in v))
            else:
                lines.append(f"{pad}{k}:")
                lines.extend(render_text(v, indent + 1))
    elif isinstance(data, list):
        for e in data:
            if _scalar(e):
                lines.append(f"{pad}- {_fmt(e)}")
            elif isinstance(e, list) and all(_scalar(x) for x in e):
                lines.append(f"{pad}- " + ", ".join(_fmt(x) for x in e))
            else:
                lines.append(f"{pad}-")
                lines.extend(render_text(e, indent + 1))
    else:
        lines.append(pad + _fmt(data))
    return lines


def _scalar(v):
    return v is None or isinstance(v, (bool, int, float, str)) or v == []


def _fmt(v):
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if v == []:
        return "[]"
    return str(v)


def emit(data, fmt, out):
    data = plain(data)
    if fmt == "json":
        out.write(json.dumps(data, indent=2, ensure_ascii=False) + "\n")
    else:
        out.write("\n".join(render_text(data)) + "\n")


def report_result(rep, **extra):
    code = OK if rep else FAILED
    return code, {**extra, **rep.as_dict()}


# -- argument helpers


def point_list(text):
    text = text.strip().strip("{}")
    return [p.strip() for p in text.split(",") if p.strip()]


def open_arg(space, text):
    return OpenSet(space, _open_mask(space, text))


def _open_mask(space, text):
    m = space.mask(point_list(text))
    if not space.is_open(m):
        raise PreconditionError(f"{space.format(m)} is not open")
    return m


def valuation_args(space, items):
    val = {}
    for item in items or ():
        if "=" not in item:
            raise FormatError(f"valuation entries look like atom=points, got {item!r}")
        name, pts = item.split("=", 1)
        val[name.strip()] = open_arg(space, pts)
    return val


def set_arg(text):
    return tuple(point_list(text))


def mapping_arg(text):
    out = {}
    for item in point_list(text):
        if "=" not in item:
            raise FormatError(f"mapping entries look like element=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def subpresheaf_arg(names, text):
    """``"U:a b;V:c"`` to {object: set of elements}."""
    out = {}
    for part in text.split(";"):
        if not part.strip():
            continue
        if ":" not in part:
            raise FormatError(f"subpresheaf entries look like object:elements, got {part!r}")
        obj, elems = part.rsplit(":", 1)
        out[names.obj(obj.strip())] = {e for e in elems.replace(",", " ").split() if e}
    return out


def budget_of(args):
    return args.budget if args.budget is not None else default_budget()


def opens_listing(space):
    return [space.format(m) for m in space.opens]


# -- space


def space_validate(args):
    raw = io.read_json(args.file)
    if not io.is_space_like(raw):
        raise FormatError("a space needs 'points' and either 'opens' or 'le'")
    if "opens" in raw:
        return report_result(finspace.validate_space(raw["points"], raw["opens"]))
    try:
        X = io.space_from_dict(raw)
    except PreconditionError as exc:
        return FAILED, {"check": "preorder", "ok": False, "failure": str(exc)}
    return OK, {"check": "preorder", "ok": True, "opens": opens_listing(X)}


def space_generate(args):
    raw = io.read_json(args.file)
    try:
        points, basis = raw["points"], raw["basis"]
    except (KeyError, TypeError):
        raise FormatError("a basis file needs 'points' and 'basis'") from None
    g = finspace.generate_from_basis(points, basis)
    return OK, {"opens": opens_listing(g.space), "covers": g.covers,
                "intersection_compatible": g.intersection_compatible,
                "added": ["{" + ",".join(map(str, a)) + "}" for a in g.added]}


def space_heyting(args):
    X = io.load_space(args.file)
    if args.implies:
        u, v = open_arg(X, args.implies[0]), open_arg(X, args.implies[1])
        return OK, {"operation": "implies", "input": [u, v], "result": finspace.heyting_implies(u, v)}
    if args.boundary is not None:
        b = finspace.boundary_operators(X, point_list(args.boundary))
        fmt = lambda s: X.format(X.mask(s))
        return OK, {"operation": "boundary", "input": fmt(point_list(args.boundary)),
                    "interior": fmt(b.interior), "closure": fmt(b.closure), "boundary": fmt(b.boundary)}
    if args.germ is not None:
        return OK, {"operation": "germ", "point": args.germ,
                    "minimal_neighborhood": finspace.min_neighborhood(X, args.germ),
                    "neighborhoods": finspace.neighborhood_filter(X, args.germ)}
    if args.not_ is not None:
        u = open_arg(X, args.not_)
        return OK, {"operation": "not", "input": u, "result": finspace.heyting_not(u)}
    if args.notnot is not None:
        u = open_arg(X, args.notnot)
        return OK, {"operation": "notnot", "input": u, "result": finspace.heyting_notnot(u),
                    "regular": finspace.heyting_notnot(u) == u}
    raise FormatError("choose one of --not, --notnot, --implies, --boundary, --germ")


def space_regular(args):
    X = io.load_space(args.file)
    regs = finspace.regular_opens(X)
    return OK, {"regular_opens": regs, "count": len(regs)}


def space_components(args):
    X = io.load_space(args.file)
    comps = finspace.connected_components(X)
    return OK, {"components": [X.format(X.mask(c)) for c in comps], "count": len(comps),
                "clopens": [X.format(m) for m in finspace.clopens(X)]}


# -- cat


def cat_validate(args):
    raw = io.read_json(args.file)
    if io.is_space_like(raw):
        C = io.category_from_dict(raw)
        return OK, {"check": "category", "ok": True, "objects": len(C.objects),
                    "morphisms": len(C.morphisms)}
    return report_result(fincat.validate_category(raw))


def cat_opens(args):
    C = fincat.opens_category(io.load_space(args.file))
    return OK, C.to_dict()


def cat_extremal(args):
    C = io.load_category(args.file)
    ini, ter = fincat.extremal_objects(C)
    return OK, {"initial": [C.obj_name(a) for a in ini], "terminal": [C.obj_name(a) for a in ter]}


def cat_climit(args):
    X = io.load_space(args.file)
    members = [open_arg(X, t) for t in args.chain.split(";")]
    D = fincat.chain_diagram(members, args.variance)
    lim = fincat.c_limit(D)
    return OK, {"diagram": members, "literal": lim.literal, "punctured": lim.punctured}


def cat_localize(args):
    C = io.load_category(args.file)
    names = io.Names(C)
    sigma = [names.mor(m.strip()) for m in args.invert.split(";") if m.strip()]
    loc = fincat.localize_thin(C, sigma)
    Q = loc.category
    return OK, {"objects": [Q.obj_name(a) for a in Q.objects],
                "morphisms": [Q.mor_name(m) for m in Q.morphisms if not Q.is_identity(m)],
                "projection": {C.obj_name(a): Q.obj_name(loc.projection.ob[a]) for a in C.objects}}


def cat_functors(args):
    C, D = io.load_category(args.source), io.load_category(args.target)
    budget = budget_of(args)
    fs = fincat.enumerate_functors(C, D, budget)
    out = {"count": len(fs), "functors": [
        {"objects": {C.obj_name(a): D.obj_name(F.ob[a]) for a in C.objects},
         "arrows": {C.mor_name(m): D.mor_name(F.ar[m]) for m in C.morphisms if not C.is_identity(m)}}
        for F in fs]}
    if args.nats:
        out["natural_transformations"] = [[len(fincat.enumerate_nats(F, G, budget)) for G in fs] for F in fs]
    return OK, out


# -- psh


def _load_base(path):
    return io.load_category(path)


def psh_validate(args):
    return report_result(presheaf.validate_presheaf(io.load_presheaf(args.file)))


def psh_gamma(args):
    P = io.load_presheaf(args.file)
    G = presheaf.gamma(P)
    return OK, {"terminal": P.base.obj_name(presheaf.terminal_object(P.base)),
                "sections": [io.element_label(x) for x in G], "count": len(G)}


def _presheaf_summary(P):
    C = P.base
    return {"sizes": {C.obj_name(c): len(P.at[c]) for c in C.objects},
            "presheaf": io.presheaf_to_dict(P)}


def psh_disc(args):
    return OK, _presheaf_summary(presheaf.disc(_load_base(args.base), set_arg(args.set)))


def psh_codisc(args):
    base = _load_base(args.base)
    X = set_arg(args.set)
    P = presheaf.powerset_codisc(base, X) if args.powerset else presheaf.codisc(base, X)
    return OK, _presheaf_summary(P)


def psh_pi(args):
    P = io.load_presheaf(args.file)
    comps = presheaf.pi_components(P)
    C = P.base
    return OK, {"count": len(comps.classes),
                "components": [[f"{C.obj_name(c)}:{io.element_label(x)}" for c, x in block]
                               for block in comps.classes]}


def psh_omega(args):
    base = _load_base(args.base)
    omega = presheaf.subobject_classifier(base, budget_of(args))
    out = {"sizes": {base.obj_name(c): len(omega.at[c]) for c in base.objects},
           "sieves": {base.obj_name(c): [site.sieve_names(base, site.Sieve(c, S)) for S in omega.at[c]]
                      for c in base.objects}}
    if args.pi:
        out["components"] = len(presheaf.pi_components(omega).classes)
    return OK, out


def psh_adjoint_check(args):
    base = _load_base(args.base)
    budget = budget_of(args)
    sets = presheaf.set_corpus(args.max_set)
    pshs = presheaf.presheaf_corpus(base, args.max_total, budget)
    adjs = presheaf.quadruple(base)
    if args.powerset:
        adjs.append(presheaf.gamma_powerset_codisc(base))
    results = []
    code = OK
    for adj in adjs:
        dom, cod = (sets, pshs) if adj.dom.name == "Set" else (pshs, sets)
        rep = presheaf.verify_adjunction(adj, dom, cod, budget)
        if not rep:
            code = FAILED
        results.append({"adjunction": adj.name, **rep.as_dict()})
    return code, {"sets": len(sets), "presheaves": len(pshs), "adjunctions": results}


def psh_flat(args):
    A = io.load_presheaf(args.file)
    X = set_arg(args.set)
    f = mapping_arg(args.map)
    alpha, rep = presheaf.flat_transpose(A, f, X)
    C = A.base
    comps = {C.obj_name(c): {io.element_label(s): io.element_label(v) for s, v in alpha.components[c].items()}
             for c in C.objects}
    code, out = report_result(rep)
    return code, {"components": comps, **out}


# -- site


def _topology_for(args, P=None):
    base = P.base if P is not None else None
    return io.load_topology(args.topology, base=base)


def site_validate(args):
    J = io.load_topology(args.file)
    return report_result(site.validate_topology(J))


def site_dense(args):
    C = _load_base(args.base)
    J = site.dense_topology(C, proper=not args.all)
    rep = site.validate_topology(J)
    code, out = report_result(rep)
    return code, {"topology": io.topology_to_dict(J)["covers"], **out}


def site_sieve(args):
    C = _load_base(args.base)
    names = io.Names(C)
    c = names.obj(args.on)
    gens = [names.mor(m) for m in args.gen.split(";") if m.strip()] if args.gen else []
    S = site.generate_sieve(C, c, gens)
    out = {"on": C.obj_name(c), "sieve": site.sieve_names(C, S)}
    if args.pullback:
        f = names.mor(args.pullback)
        T = site.pullback_sieve(C, f, S)
        out["pullback"] = {"along": C.mor_name(f), "on": C.obj_name(T.on), "sieve": site.sieve_names(C, T)}
    return OK, out


def site_sheaf_check(args):
    P = io.load_presheaf(args.presheaf)
    J = _topology_for(args, P)
    return report_result(site.is_sheaf(P, J))


def site_sheafify(args):
    P = io.load_presheaf(args.presheaf)
    J = _topology_for(args, P)
    S = site.plus(P, J) if args.once else site.sheafify(P, J)
    C = P.base
    out = {"sizes": {C.obj_name(c): len(S.at[c]) for c in C.objects},
           "sheaf": site.is_sheaf(S, J).ok}
    if args.dump:
        out["presheaf"] = io.presheaf_to_dict(S)
    return OK, out


def site_closure(args):
    P = io.load_presheaf(args.presheaf)
    J = _topology_for(args, P)
    C = P.base
    A = subpresheaf_arg(io.Names(C), args.sub)
    closed = site.closure_subpresheaf(P, A, J)
    return OK, {"closure": {C.obj_name(c): sorted(io.element_label(x) for x in closed[c]) for c in C.objects},
                "closed": all(closed[c] == frozenset(A.get(c, ())) for c in C.objects)}


# -- logic


def logic_parse(args):
    p = forcing.parse_formula(args.formula)
    return OK, {"formula": forcing.show(p), "unicode": forcing.show(p, unicode=True),
                "tree": repr(p), "atoms": forcing.atoms(p), "depth": forcing.depth(p)}


def logic_eval(args):
    X = io.load_space(args.space)
    p = forcing.parse_formula(args.formula)
    v = valuation_args(X, args.val)
    u = forcing.eval_open(X, v, p)
    total = u.mask == X.full
    return OK, {"formula": p, "value": u, "total": total}


def logic_forces(args):
    X = io.load_space(args.space)
    p = forcing.parse_formula(args.formula)
    v = valuation_args(X, args.val)
    U = open_arg(X, args.at)
    holds = forcing.forces(X, v, U, p)
    out = {"formula": p, "region": U, "forces": holds,
           "by_clauses": forcing.forces_by_clauses(X, v, U, p)}
    if forcing.is_negation(p) and forcing.is_negation(p.left):
        out["notnot_unfolded"] = forcing.forces_notnot_unfolded(X, v, U, p.left.left)
    return (OK if holds else FAILED), out


def logic_translate(args):
    p = forcing.parse_formula(args.formula)
    k = forcing.kolmogorov(p)
    return OK, {"formula": p, "kolmogorov": k, "glivenko": forcing.Not(forcing.Not(p))}


def logic_classical(args):
    p = forcing.parse_formula(args.formula)
    valid = forcing.classical_validity(p)
    out = {"formula": p, "classically_valid": valid}
    if not valid:
        out["falsifying_row"] = {k: int(b) for k, b in forcing.falsifying_row(p).items()}
    return (OK if valid else FAILED), out


def _countermodel_dict(cm):
    X = cm.space
    return {"points": len(X), "opens": opens_listing(X), "shape": known_shape(X),
            "valuation": {k: v for k, v in cm.valuation.items()}, "value": cm.value}


def known_shape(X):
    """Name of a bundled fixture homeomorphic to X, if any."""
    n = len(X)
    sizes = {"sierpinski": (2, 3), "d3": (3, 5)}
    for name, (pts, opens) in sizes.items():
        if n == pts and len(X.opens) == opens:
            ref = getattr(finspace, name)()
            if forcing.canonical_code(_matrix(ref)) == forcing.canonical_code(_matrix(X)):
                return name
    if len(X.opens) == 1 << n:
        return f"discrete{n}"
    if len(X.opens) == 2 or n == 0:
        return f"indiscrete{n}"
    return None


def _matrix(X):
    n = len(X)
    M = np.zeros((n, n), dtype=bool)
    for j in range(n):
        for i in range(n):
            M[i, j] = bool(X.min_open(j) >> i & 1)
    return M


def logic_countermodel(args):
    p = forcing.parse_formula(args.formula)
    cm = forcing.countermodel_search(p, args.max_points)
    if cm is None:
        return OK, {"formula": p, "max_points": args.max_points, "countermodel": None}
    return FAILED, {"formula": p, "max_points": args.max_points, "countermodel": _countermodel_dict(cm)}


def logic_corpus(args):
    entries = forcing.load_formula_corpus(args.file)
    rows = []
    code = OK
    for e in entries:
        classical = forcing.classical_validity(e.formula)
        found = forcing.countermodel_search(e.formula, args.max_points)
        nn = forcing.countermodel_search(forcing.Not(forcing.Not(e.formula)), args.max_points)
        kol = forcing.countermodel_search(forcing.kolmogorov(e.formula), args.max_points)
        glivenko = classical == (nn is None) == (kol is None)
        if not glivenko:
            code = FAILED
        rows.append({"name": e.name, "formula": e.formula, "classical": classical,
                     "countermodel_points": len(found.space) if found else None, "glivenko": glivenko})
    return code, {"max_points": args.max_points, "formulas": rows}


# -- simp


def _nerve_of(args):
    return simplicial.nerve(io.load_category(args.file), args.dim)


def simp_nerve(args):
    N = _nerve_of(args)
    if args.count:
        return OK, {"dim": N.dim, "counts": N.counts(),
                    "nondegenerate": [len(N.nondegenerate(k)) for k in range(N.dim + 1)]}
    return OK, simplicial.nerve_to_dict(N)


def simp_identities(args):
    if args.file is None:
        S, _ = simplicial.three_arrow_simplex()
    else:
        S = _nerve_of(args)
    return report_result(simplicial.check_simplicial_identities(S), counts=S.counts())


def simp_connectivity(args):
    G = io.load_category(args.file)
    r = simplicial.connectivity_report(G)
    return OK, {"pi0": r.pi0, "class": r.kind,
                "components": [[G.obj_name(a) for a in block] for block in r.components],
                "pi1": [{"base": G.obj_name(p.base), "order": p.order,
                         "elements": [G.mor_name(m) for m in p.elements], "table": p.table}
                        for p in r.pi1]}


# -- parser


def build_parser():
    parser = argparse.ArgumentParser(prog="finitopos", description="Finite topology and topos workbench.")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--budget", type=int, default=None, help="enumeration budget (default $WORKBENCH_BUDGET)")
    groups = parser.add_subparsers(dest="group", required=True, metavar="GROUP")

    def sub(group, name, func, help_text):
        p = group.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
        p.add_argument("--budget", type=int, default=argparse.SUPPRESS)
        return p

    g = groups.add_parser("space", help="finite spaces").add_subparsers(dest="cmd", required=True, metavar="CMD")
    sub(g, "validate", space_validate, "check the topology (or preorder) axioms").add_argument("file")
    sub(g, "generate", space_generate, "topology generated by a basis").add_argument("file")
    p = sub(g, "heyting", space_heyting, "Heyting operations, boundary, germs")
    p.add_argument("file")
    p.add_argument("--not", dest="not_", metavar="U")
    p.add_argument("--notnot", metavar="U")
    p.add_argument("--implies", nargs=2, metavar=("U", "V"))
    p.add_argument("--boundary", metavar="SUBSET")
    p.add_argument("--germ", metavar="POINT")
    sub(g, "regular", space_regular, "regular open sets").add_argument("file")
    sub(g, "components", space_components, "connected components").add_argument("file")

    g = groups.add_parser("cat", help="finite categories").add_subparsers(dest="cmd", required=True, metavar="CMD")
    sub(g, "validate", cat_validate, "check the category laws").add_argument("file")
    sub(g, "opens", cat_opens, "category of opens of a space").add_argument("file")
    sub(g, "extremal", cat_extremal, "initial and terminal objects").add_argument("file")
    p = sub(g, "climit", cat_climit, "c-limit of a chain of opens")
    p.add_argument("file")
    p.add_argument("--chain", required=True, help="opens separated by ';', e.g. 'l,m,r;l,r'")
    p.add_argument("--variance", choices=("decreasing", "increasing"), default="decreasing")
    p = sub(g, "localize", cat_localize, "invert arrows of a thin category")
    p.add_argument("file")
    p.add_argument("--invert", default="", help="morphism names separated by ';'")
    p = sub(g, "functors", cat_functors, "enumerate functors and natural transformations")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--nats", action="store_true")

    g = groups.add_parser("psh", help="presheaves").add_subparsers(dest="cmd", required=True, metavar="CMD")
    sub(g, "validate", psh_validate, "check functoriality").add_argument("file")
    sub(g, "gamma", psh_gamma, "global sections").add_argument("file")
    p = sub(g, "disc", psh_disc, "constant presheaf")
    p.add_argument("base")
    p.add_argument("--set", required=True)
    p = sub(g, "codisc", psh_codisc, "codiscrete presheaf")
    p.add_argument("base")
    p.add_argument("--set", required=True)
    p.add_argument("--powerset", action="store_true", help="power-set variant with identity restrictions")
    sub(g, "pi", psh_pi, "connected components").add_argument("file")
    p = sub(g, "omega", psh_omega, "subobject classifier")
    p.add_argument("base")
    p.add_argument("--pi", action="store_true", help="also count components of Omega")
    p = sub(g, "adjoint-check", psh_adjoint_check, "verify the adjoint quadruple")
    p.add_argument("base")
    p.add_argument("--max-set", type=int, default=2)
    p.add_argument("--max-total", type=int, default=6)
    p.add_argument("--powerset", action="store_true", help="also test Gamma against the power-set variant")
    p = sub(g, "flat", psh_flat, "transpose of a map out of global sections")
    p.add_argument("file")
    p.add_argument("--set", required=True)
    p.add_argument("--map", required=True, help="section=value pairs, comma-separated")

    g = groups.add_parser("site", help="sieves, topologies, sheaves").add_subparsers(dest="cmd", required=True, metavar="CMD")
    sub(g, "validate", site_validate, "check the topology axioms").add_argument("file")
    p = sub(g, "dense", site_dense, "double-negation topology")
    p.add_argument("base")
    p.add_argument("--all", action="store_true", help="let the initial object count as a region")
    p = sub(g, "sieve", site_sieve, "generated and pulled-back sieves")
    p.add_argument("base")
    p.add_argument("--on", required=True)
    p.add_argument("--gen", default="", help="generating morphisms separated by ';'")
    p.add_argument("--pullback", metavar="MORPHISM")
    for name, func, help_text in (("sheaf-check", site_sheaf_check, "sheaf condition"),
                                  ("sheafify", site_sheafify, "plus construction twice"),
                                  ("closure", site_closure, "closure of a subpresheaf")):
        p = sub(g, name, func, help_text)
        p.add_argument("presheaf")
        p.add_argument("topology")
        if name == "sheafify":
            p.add_argument("--once", action="store_true", help="apply the plus construction once")
            p.add_argument("--dump", action="store_true", help="include the resulting presheaf")
        if name == "closure":
            p.add_argument("--sub", required=True, help="'object:elements;...'")

    g = groups.add_parser("logic", help="formulas and forcing").add_subparsers(dest="cmd", required=True, metavar="CMD")
    sub(g, "parse", logic_parse, "parse and print canonically").add_argument("formula")
    for name, func in (("eval", logic_eval), ("forces", logic_forces)):
        p = sub(g, name, func, "open where a formula holds" if name == "eval" else "forcing at a region")
        p.add_argument("space")
        p.add_argument("formula")
        p.add_argument("--val", action="append", metavar="ATOM=POINTS")
        if name == "forces":
            p.add_argument("--at", required=True, metavar="REGION")
    sub(g, "translate", logic_translate, "Kolmogorov translation").add_argument("formula")
    sub(g, "classical", logic_classical, "truth-table validity").add_argument("formula")
    p = sub(g, "countermodel", logic_countermodel, "smallest finite countermodel")
    p.add_argument("formula")
    p.add_argument("--max-points", type=int, default=5)
    p = sub(g, "corpus", logic_corpus, "Glivenko check over a formula corpus")
    p.add_argument("file", nargs="?")
    p.add_argument("--max-points", type=int, default=5)

    g = groups.add_parser("simp", help="nerves and groupoids").add_subparsers(dest="cmd", required=True, metavar="CMD")
    p = sub(g, "nerve", simp_nerve, "truncated nerve")
    p.add_argument("file")
    p.add_argument("--dim", type=int, default=4)
    p.add_argument("--count", action="store_true")
    p = sub(g, "identities", simp_identities, "simplicial identities (default: the three-arrow 3-simplex)")
    p.add_argument("file", nargs="?")
    p.add_argument("--dim", type=int, default=4)
    sub(g, "connectivity", simp_connectivity, "pi0, pi1 and connectivity class").add_argument("file")
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE
    try:
        code, data = args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BUDGET
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except PreconditionError as exc:
        emit({"ok": False, "failure": str(exc)}, args.format, out)
        return FAILED
    emit(data, args.format, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
