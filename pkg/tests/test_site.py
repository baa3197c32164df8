import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finitopos.errors import PreconditionError
from finitopos.fincat import opens_category
from finitopos.finspace import d3, discrete, sierpinski, subspace
from finitopos.io import load_presheaf, load_topology
from finitopos.presheaf import (
    constant_functions, empty_presheaf, find_isomorphism, functions_presheaf, is_subpresheaf,
    subpresheaves,
)
from finitopos.site import (
    GTopology, closure_subpresheaf, dense_topology, generate_sieve, generated_topology, is_sheaf,
    matching_families, maximal_sieve, open_cover_topology, plus, pullback_sieve, sheaf_corpus,
    sheafify, sheafify_unit, sieve_names, sieves_on, trivial_topology, validate_topology,
)

from oracles import space_components
from strategies import spaces

SPACES = {"S": sierpinski(), "D3": d3(), "D2": discrete(["x", "y"])}


def arrow(C, a, b):
    return (C.objects[a], C.objects[b])


# -- sieves


def test_generated_sieve_on_d3_top():
    C = opens_category(d3())
    top = C.objects[-1]
    S = generate_sieve(C, top, [arrow(C, 1, 4)])
    assert sieve_names(C, S) == ["{}->{l,m,r}", "{l}->{l,m,r}"]


def test_pullback_sieve_on_d3():
    C = opens_category(d3())
    top = C.objects[-1]
    S = generate_sieve(C, top, [arrow(C, 1, 4)])
    pb = pullback_sieve(C, arrow(C, 2, 4), S)
    assert sieve_names(C, pb) == ["{}->{r}"]
    assert pullback_sieve(C, arrow(C, 1, 4), S) == maximal_sieve(C, C.objects[1])


def test_pullback_needs_matching_target():
    C = opens_category(d3())
    S = maximal_sieve(C, C.objects[-1])
    with pytest.raises(PreconditionError):
        pullback_sieve(C, arrow(C, 0, 1), S)


def test_sieve_counts_on_d3_top():
    # sieves on the top open are the down-sets of the five-element poset of opens
    C = opens_category(d3())
    assert len(sieves_on(C, C.objects[-1])) == 7


@settings(max_examples=30, deadline=None)
@given(spaces(max_points=3), st.data())
def test_pullback_along_member_is_maximal(X, data):
    C = opens_category(X)
    c = data.draw(st.sampled_from(C.objects))
    S = data.draw(st.sampled_from(sieves_on(C, c)))
    for f in S.arrows:
        assert pullback_sieve(C, f, S) == maximal_sieve(C, C.src[f])


# -- topologies


@pytest.mark.parametrize("name", SPACES)
def test_standard_topologies_valid(name):
    X = SPACES[name]
    C = opens_category(X)
    for J in (trivial_topology(C), open_cover_topology(X), dense_topology(C),
              dense_topology(C, proper=True)):
        rep = validate_topology(J)
        assert rep.ok, rep
        assert [m["holds"] for m in rep.details["mereology"]] == [True] * 3


def test_missing_pullback_breaks_stability():
    C = opens_category(d3())
    top = C.objects[-1]
    covers = {c: [maximal_sieve(C, c)] for c in C.objects}
    covers[top].append(generate_sieve(C, top, [arrow(C, 1, 4), arrow(C, 2, 4)]))
    rep = validate_topology(GTopology(C, covers))
    assert not rep.ok and rep.failure == "stability"
    assert rep.witness[2] == "{l,r}->{l,m,r}"


def test_missing_maximal_sieve():
    C = opens_category(sierpinski())
    rep = validate_topology(GTopology(C, {}))
    assert not rep.ok and rep.failure == "maximality"


def test_missing_composite_cover_breaks_transitivity():
    # covers of {x,y} by {x},{y} and of each singleton by the empty sieve,
    # yet the empty sieve on {x,y} is not declared
    X = discrete(["x", "y"])
    C = opens_category(X)
    e, x, y, xy = C.objects
    covers = {c: [maximal_sieve(C, c)] for c in C.objects}
    covers[e].append(generate_sieve(C, e, []))
    covers[x].append(generate_sieve(C, x, [(e, x)]))
    covers[y].append(generate_sieve(C, y, [(e, y)]))
    covers[xy].append(generate_sieve(C, xy, [(x, xy), (y, xy)]))
    for c in (x, y, xy):
        covers[c].append(generate_sieve(C, c, [(e, c)]))
    rep = validate_topology(GTopology(C, covers))
    assert not rep.ok and rep.failure == "transitivity"


def test_dense_topology_on_d3():
    X = d3()
    C = opens_category(X)
    J = dense_topology(C, proper=True)
    top = C.objects[-1]
    assert validate_topology(J).ok
    assert J.covering(generate_sieve(C, top, [arrow(C, 1, 4), arrow(C, 2, 4)]))
    assert not J.covering(generate_sieve(C, top, [arrow(C, 1, 4)]))


def test_dense_needs_thin_base():
    from finitopos.fincat import cyclic_group_category
    with pytest.raises(PreconditionError):
        dense_topology(cyclic_group_category(2))


@pytest.mark.parametrize("name", SPACES)
def test_generated_open_cover_topology(name):
    X = SPACES[name]
    C = opens_category(X)
    fams = {}
    for U in C.objects:
        # covers by two sub-opens generate everything on these small spaces,
        # except the empty cover of the empty open
        fams[U] = [[(V, U), (W, U)] for V in C.objects for W in C.objects
                   if V <= U and W <= U and (V | W) == U]
    fams[C.objects[0]].append([])
    J = generated_topology(C, fams)
    K = open_cover_topology(X)
    assert all(set(J.covers[c]) == set(K.covers[c]) for c in C.objects)


def test_open_cover_bundled_file_matches():
    J = load_topology("opencover2.json")
    K = open_cover_topology(discrete(["x", "y"]))
    assert validate_topology(J).ok
    assert all(set(J.covers[c]) == set(K.covers[c]) for c in J.base.objects)


# -- sheaves


def test_constant_presheaf_not_a_sheaf():
    P = load_presheaf("constant2.json")
    J = load_topology("opencover2.json", base=P.base)
    rep = is_sheaf(P, J)
    assert not rep.ok and rep.failure == "no amalgamation"
    assert rep.witness[0] == "{x,y}"
    assert rep.details["families"] == 4 and rep.details["amalgamating"] == 2
    assert len(rep.details["failing_covers"]) == 1


def test_functions_presheaf_is_sheaf_on_d3():
    X = d3()
    assert is_sheaf(functions_presheaf(X), open_cover_topology(X)).ok


@pytest.mark.parametrize("name", SPACES)
def test_everything_is_a_sheaf_for_the_trivial_topology(name):
    C = opens_category(SPACES[name])
    assert is_sheaf(constant_functions(SPACES[name]), trivial_topology(C)).ok


def test_matching_families_on_maximal_sieve_are_sections():
    X = d3()
    P = functions_presheaf(X)
    C = P.base
    for c in C.objects:
        assert len(matching_families(P, maximal_sieve(C, c))) == len(P.at[c])


# -- sheafification


def test_sheafify_constant2():
    P = load_presheaf("constant2.json")
    J = load_topology("opencover2.json", base=P.base)
    Q = sheafify(P, J)
    assert len(Q.at[P.base.objects[-1]]) == 4
    assert is_sheaf(Q, J).ok


def test_sheafify_empty_presheaf():
    X = d3()
    C = opens_category(X)
    Q = sheafify(empty_presheaf(C), open_cover_topology(X))
    assert Q.sizes() == (1, 0, 0, 0, 0)


def locally_constant_count(X, U, values=2):
    return values ** len(space_components(subspace(X, U.points)))


@settings(max_examples=25, deadline=None)
@given(spaces(max_points=3))
def test_sheafified_constants_are_locally_constant(X):
    C = opens_category(X)
    Q = sheafify(constant_functions(X), open_cover_topology(X))
    assert [len(Q.at[U]) for U in C.objects] == [locally_constant_count(X, U) for U in C.objects]


def test_sheafify_unit_is_iso_on_sheaves():
    X = d3()
    P = functions_presheaf(X)
    J = open_cover_topology(X)
    assert sheafify_unit(P, J).is_iso()


def test_plus_once_separates_then_sheafifies():
    P = load_presheaf("constant2.json")
    J = load_topology("opencover2.json", base=P.base)
    # constant functions are already separated, so one pass suffices
    once = plus(P, J)
    assert is_sheaf(once, J).ok and once.sizes() == sheafify(P, J).sizes() == (1, 2, 2, 4)


def test_sheaf_corpus_sheafifies():
    for label, P, J in sheaf_corpus():
        Q = sheafify(P, J)
        assert is_sheaf(Q, J).ok, label
        assert find_isomorphism(sheafify(Q, J), Q) is not None, label


# -- closure


@pytest.mark.parametrize("name", SPACES)
def test_closure_is_a_closure_operator(name):
    X = SPACES[name]
    C = opens_category(X)
    P = functions_presheaf(X)
    subs = subpresheaves(P)
    for J in (open_cover_topology(X), dense_topology(C, proper=True)):
        close = {}
        for A in subs:
            cl = closure_subpresheaf(P, A, J)
            assert is_subpresheaf(P, cl)
            assert all(A[c] <= cl[c] for c in C.objects)
            assert closure_subpresheaf(P, cl, J) == cl
            close[_key(A, C)] = cl
        for A in subs:
            for B in subs:
                if all(A[c] <= B[c] for c in C.objects):
                    ca, cb = close[_key(A, C)], close[_key(B, C)]
                    assert all(ca[c] <= cb[c] for c in C.objects)


def _key(A, C):
    return tuple(frozenset(A.get(c, ())) for c in C.objects)


def test_closure_rejects_non_subpresheaf():
    X = sierpinski()
    P = functions_presheaf(X)
    top = P.base.objects[-1]
    with pytest.raises(PreconditionError):
        closure_subpresheaf(P, {top: {P.at[top][0]}}, open_cover_topology(X))
