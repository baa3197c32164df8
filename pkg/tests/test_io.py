import json

import pytest

from finitopos.errors import FormatError, PreconditionError
from finitopos.fincat import opens_category
from finitopos.finspace import d3, sierpinski
from finitopos.io import (
    Names, category_from_dict, element_label, fixture_path, load_category, load_presheaf,
    load_space, load_topology, presheaf_from_dict, presheaf_to_dict, read_json, space_from_dict,
    space_to_dict, topology_from_dict, topology_to_dict,
)
from finitopos.presheaf import find_isomorphism, functions_presheaf, subobject_classifier
from finitopos.site import open_cover_topology


def test_bundled_fixtures_load():
    assert load_space("d3.json") == d3()
    assert load_space("sierpinski") == sierpinski()
    assert len(load_category("z2.json").morphisms) == 2
    assert fixture_path("d3").endswith("d3.json")


def test_space_from_preorder_form():
    X = space_from_dict({"points": ["l", "m", "r"], "le": [["l", "m"], ["r", "m"]]})
    assert X == d3()


@pytest.mark.parametrize("raw", [{"points": ["a"]}, {"points": "ab", "opens": []},
                                 {"points": ["a"], "le": [["a"]]}, [1, 2]])
def test_malformed_space(raw):
    with pytest.raises(FormatError):
        space_from_dict(raw)


def test_space_round_trip():
    X = d3()
    assert space_from_dict(json.loads(json.dumps(space_to_dict(X)))) == X


def test_missing_file_and_bad_json(tmp_path):
    with pytest.raises(FormatError):
        read_json(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    with pytest.raises(FormatError):
        read_json(str(bad))


def test_space_like_base_is_its_opens_category():
    C = category_from_dict({"points": ["0", "1"], "opens": [[], ["1"], ["0", "1"]]})
    assert len(C.objects) == 3 and len(C.morphisms) == 6


def test_names_accept_point_lists():
    C = opens_category(d3())
    names = Names(C)
    assert names.obj("r,l") == names.obj("{l,r}") == d3().open({"l", "r"})
    assert names.mor("l -> l,r") == names.mor("{l}->{l,r}")
    with pytest.raises(FormatError):
        names.obj("m")


def test_element_labels():
    assert element_label(frozenset({"b", "a"})) == "{a,b}"
    assert element_label(("x", 1)) == "(x,1)"


def test_presheaf_round_trip_relative_base(tmp_path):
    P = functions_presheaf(d3())
    (tmp_path / "space.json").write_text(json.dumps(space_to_dict(d3())))
    (tmp_path / "p.json").write_text(json.dumps(presheaf_to_dict(P, base="space.json")))
    Q = load_presheaf(str(tmp_path / "p.json"))
    assert Q.sizes() == P.sizes()
    assert find_isomorphism(presheaf_from_dict(presheaf_to_dict(P)), Q) is not None


def test_omega_round_trip():
    C = opens_category(sierpinski())
    omega = subobject_classifier(C)
    Q = presheaf_from_dict(presheaf_to_dict(omega))
    assert Q.sizes() == omega.sizes()


def test_presheaf_errors():
    base = {"points": ["0", "1"], "opens": [[], ["1"], ["0", "1"]]}
    with pytest.raises(FormatError):
        presheaf_from_dict({"at": {}})
    with pytest.raises(FormatError):
        presheaf_from_dict({"base": base, "at": {"{2}": ["a"]}})
    with pytest.raises((FormatError, PreconditionError)):
        presheaf_from_dict({"base": base, "at": {"{}": ["a"], "{1}": ["a"], "{0,1}": ["b"]},
                            "act": {"{}->{1}": {"a": "zzz"}}})


def test_topology_round_trip():
    X = d3()
    J = open_cover_topology(X)
    K = topology_from_dict(json.loads(json.dumps(topology_to_dict(J))))
    assert [len(K.covers[c]) for c in K.base.objects] == [len(J.covers[c]) for c in J.base.objects]


def test_topology_file_shares_presheaf_base():
    P = load_presheaf("constant2.json")
    J = load_topology("opencover2.json", base=P.base)
    assert J.base is P.base


def test_topology_errors():
    base = {"points": ["0", "1"], "opens": [[], ["1"], ["0", "1"]]}
    with pytest.raises(FormatError):
        topology_from_dict({"base": base})
    with pytest.raises(FormatError):
        topology_from_dict({"base": base, "covers": {"{1}": [["nope"]]}})
