import dataclasses

import pytest
from hypothesis import given, settings

from finitopos.errors import FormatError, PreconditionError
from finitopos.fincat import arrow_category, discrete_category, opens_category, terminal_category
from finitopos.finspace import d3, discrete, sierpinski
from finitopos.presheaf import (
    Presheaf, SetMap, characteristic_map, classified_subpresheaf, codisc, constant_functions,
    coproduct, disc, disc_gamma, empty_presheaf, find_isomorphism, flat_transpose,
    functions_presheaf, gamma, gamma_codisc, gamma_powerset_codisc, homs, powerset_codisc,
    pi_components, pi_disc, presheaf_corpus, representable, set_corpus, subobject_classifier,
    subpresheaves, terminal_presheaf, validate_presheaf, verify_adjunction,
)

from oracles import element_graph_components
from strategies import spaces


def corpora(adj, base):
    sets, pshs = set_corpus(2), presheaf_corpus(base, 6)
    return (sets, pshs) if adj.dom.name == "Set" else (pshs, sets)


# -- validation


def test_constant_presheaf_valid():
    assert validate_presheaf(disc(opens_category(d3()), "ab")).ok


def test_functions_presheaf_valid():
    assert validate_presheaf(functions_presheaf(sierpinski())).ok


def test_broken_contravariance_reported():
    C = opens_category(sierpinski())
    empty, one, top = C.objects
    act = {(empty, one): {"a": "a", "b": "b"}, (one, top): {"a": "a", "b": "b"},
           (empty, top): {"a": "b", "b": "a"}}
    P = Presheaf(C, {u: ("a", "b") for u in C.objects}, act, check=False)
    rep = validate_presheaf(P)
    assert not rep.ok and rep.failure == "contravariance"


def test_missing_restriction_is_format_error():
    C = arrow_category()
    with pytest.raises(FormatError):
        Presheaf(C, {"0": ("x",), "1": ("y",)}, {})


# -- Γ and Disc


def test_gamma_of_functions_on_d3():
    P = functions_presheaf(d3())
    assert len(gamma(P)) == 8


def test_gamma_of_disc():
    base = opens_category(d3())
    assert gamma(disc(base, (0, 1, 2))) == (0, 1, 2)


def test_gamma_needs_terminal():
    with pytest.raises(PreconditionError):
        gamma(disc(discrete_category(["a", "b"]), (0,)))


def test_disc_of_empty_is_initial():
    base = opens_category(sierpinski())
    E = disc(base, ())
    assert E.size == 0 and len(homs(E, functions_presheaf(sierpinski()))) == 1


def test_disc_singleton_is_terminal():
    base = opens_category(d3())
    T = disc(base, ("*",))
    for P in presheaf_corpus(base, 6):
        assert len(homs(P, T)) == 1


# -- Π


def test_pi_of_disc_over_connected_base():
    base = opens_category(d3())
    assert len(pi_components(disc(base, "abc")).classes) == 3


def test_pi_of_omega_on_discrete2():
    X = discrete(["x", "y"])
    omega = subobject_classifier(opens_category(X))
    assert len(pi_components(omega).classes) == 2


def test_pi_of_empty():
    assert pi_components(empty_presheaf(opens_category(d3()))).classes == ()


@settings(max_examples=25, deadline=None)
@given(spaces(max_points=3))
def test_pi_matches_graph_oracle(X):
    base = opens_category(X)
    for P in [subobject_classifier(base), functions_presheaf(X), constant_functions(X)]:
        assert len(pi_components(P).classes) == element_graph_components(P)


@settings(max_examples=25, deadline=None)
@given(spaces(max_points=3))
def test_pi_omega_is_two(X):
    # every sieve restricts to one of the two sieves on the empty open
    base = opens_category(X)
    assert len(pi_components(subobject_classifier(base)).classes) == 2


# -- CoDisc


def test_codisc_on_d3():
    base = opens_category(d3())
    R = codisc(base, (0, 1))
    assert [len(R.at[u]) for u in base.objects] == [1, 1, 1, 1, 2]
    assert validate_presheaf(R).ok


def test_codisc_of_singleton_is_terminal():
    base = opens_category(d3())
    assert codisc(base, ("*",)).sizes() == (1,) * 5


def test_codisc_on_terminal_base():
    assert codisc(terminal_category(), (0, 1, 2)).sizes() == (3,)


# -- f♭ and the power-set variant


def test_flat_transpose_of_disc():
    base = opens_category(d3())
    A = disc(base, ("p", "q"))
    alpha, rep = flat_transpose(A, {"p": 0, "q": 1}, (0, 1))
    assert rep.ok
    # a global section w restricts to s exactly when w == s
    assert all(alpha.components[u] == {"p": frozenset({0}), "q": frozenset({1})} for u in base.objects)


def test_flat_transpose_from_empty():
    base = opens_category(d3())
    alpha, rep = flat_transpose(empty_presheaf(base), {}, (0, 1))
    assert rep.ok and all(not c for c in alpha.components.values())


def test_flat_transpose_from_terminal():
    base = opens_category(sierpinski())
    T = terminal_presheaf(base)
    (star,) = gamma(T)
    alpha, rep = flat_transpose(T, {star: 1}, (0, 1))
    assert rep.ok
    assert all(alpha.components[u][star] == frozenset({1}) for u in base.objects)


def test_power_set_codisc_is_not_right_adjoint():
    base = opens_category(d3())
    adj = gamma_powerset_codisc(base)
    rep = verify_adjunction(adj, *corpora(adj, base))
    assert not rep.ok and rep.failure == "hom-set sizes differ"


def test_power_set_codisc_shape():
    P = powerset_codisc(opens_category(sierpinski()), (0, 1))
    assert P.sizes() == (4, 4, 4)


# -- subobject classifier


def test_omega_terminal_base():
    assert subobject_classifier(terminal_category()).sizes() == (2,)


def test_omega_arrow_category():
    omega = subobject_classifier(arrow_category())
    assert (len(omega.at["0"]), len(omega.at["1"])) == (2, 3)


def test_omega_sierpinski_top():
    base = opens_category(sierpinski())
    omega = subobject_classifier(base)
    assert len(omega.at[base.objects[-1]]) == 4


@pytest.mark.parametrize("space", [sierpinski(), d3(), discrete(["x", "y"])], ids=["S", "D3", "D2"])
def test_subobject_correspondence(space):
    base = opens_category(space)
    omega = subobject_classifier(base)
    for P in presheaf_corpus(base, 6):
        subs = subpresheaves(P)
        chis = homs(P, omega)
        assert len(subs) == len(chis)
        for A in subs:
            assert classified_subpresheaf(characteristic_map(P, A, omega)) == A


# -- morphisms


def test_isomorphism_search():
    base = opens_category(d3())
    P = coproduct(representable(base, base.objects[1]), representable(base, base.objects[2]))
    Q = coproduct(representable(base, base.objects[2]), representable(base, base.objects[1]))
    assert find_isomorphism(P, Q) is not None
    assert find_isomorphism(P, disc(base, "ab")) is None


def test_iso_enumeration_counts_automorphisms():
    X = d3()
    P = functions_presheaf(X)
    # automorphisms permute the value set pointwise on each open component
    assert len(homs(P, P, iso=True)) == len([m for m in homs(P, P) if m.is_iso()])


# -- adjunctions


@pytest.mark.parametrize("space", [sierpinski(), d3(), discrete(["x", "y"])], ids=["S", "D3", "D2"])
@pytest.mark.parametrize("make", [pi_disc, disc_gamma, gamma_codisc], ids=["pi-disc", "disc-gamma", "gamma-codisc"])
def test_adjunctions_hold(space, make):
    base = opens_category(space)
    adj = make(base)
    rep = verify_adjunction(adj, *corpora(adj, base))
    assert rep.ok, rep
    assert rep.details["pairs"] > 0 and rep.details["naturality_checks"] > 0


def test_corrupted_disc_is_caught():
    base = opens_category(sierpinski())
    arrow = next(m for m in base.morphisms if not base.is_identity(m))

    def bad_disc(X):
        X = tuple(X)
        act = {m: {x: x for x in X} for m in base.morphisms}
        if len(X) > 1:
            act[arrow] = {x: X[0] for x in X}
        return Presheaf(base, {c: X for c in base.objects}, act, check=False)

    adj = dataclasses.replace(pi_disc(base), right=bad_disc)
    rep = verify_adjunction(adj, *corpora(adj, base))
    assert not rep.ok and rep.witness[0] == "Pi -| Disc"


def test_gamma_disc_round_trip():
    base = opens_category(d3())
    for X in set_corpus(3):
        assert gamma(disc(base, X)) == X
        assert len(pi_components(disc(base, X)).classes) == len(X)


def test_set_maps():
    f = SetMap((0, 1), ("a",), {0: "a", 1: "a"})
    assert f.check().ok and f(1) == "a"
