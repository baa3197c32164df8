import io
import json
import subprocess
import sys

import pytest

from finitopos.cli import main
from finitopos.io import space_to_dict
from finitopos.finspace import sierpinski


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run("--format", "json", *argv)
    return code, json.loads(text)


# -- documented examples


def test_countermodel_for_lem():
    code, text = run("logic", "countermodel", "a | ~a", "--max-points", "3")
    assert code == 1
    assert "shape: sierpinski" in text and "points: 2" in text


def test_notnot_on_d3():
    code, text = run("space", "heyting", "d3.json", "--notnot", "l,r")
    assert code == 0 and "result: {l,m,r}" in text


def test_nerve_counts():
    code, text = run("simp", "nerve", "z2.json", "--dim", "3", "--count")
    assert code == 0 and "counts: 1, 2, 4, 8" in text


def test_unknown_group_is_usage_error(capsys):
    code, _ = run("bogus")
    assert code == 2 and "usage" in capsys.readouterr().err


# -- exit codes


def test_parse_error_exit(capsys):
    code, out = run("logic", "parse", "a ->")
    assert code == 2 and out == ""
    assert "position 4" in capsys.readouterr().err


def test_missing_file_exit(capsys):
    code, _ = run("space", "validate", "/nonexistent/space.json")
    assert code == 2 and "no such file" in capsys.readouterr().err


def test_budget_exit():
    assert run("--budget", "10", "psh", "omega", "d3.json")[0] == 3
    assert run("psh", "omega", "d3.json", "--budget", "10")[0] == 3


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("WORKBENCH_BUDGET", "10")
    assert run("psh", "omega", "d3.json")[0] == 3


def test_precondition_failure_is_reported():
    code, data = run_json("logic", "forces", "d3.json", "a", "--val", "a=m", "--at", "l")
    assert code == 1 and data["ok"] is False and "not open" in data["failure"]


def test_invalid_space_exit(tmp_path):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps({"points": ["0", "1"], "opens": [[], ["0"], ["1"]]}))
    code, data = run_json("space", "validate", str(f))
    assert code == 1 and data["failure"] == "union not open"
    assert data["witness"] == [["0"], ["1"], ["0", "1"]]


# -- subcommand coverage


@pytest.mark.parametrize("argv, code", [
    (["space", "validate", "d3.json"], 0),
    (["space", "regular", "d3.json"], 0),
    (["space", "components", "discrete2.json"], 0),
    (["space", "heyting", "d3.json", "--not", "l"], 0),
    (["space", "heyting", "d3.json", "--implies", "l", "r"], 0),
    (["space", "heyting", "d3.json", "--boundary", "m"], 0),
    (["space", "heyting", "d3.json", "--germ", "m"], 0),
    (["cat", "validate", "z2.json"], 0),
    (["cat", "opens", "sierpinski.json"], 0),
    (["cat", "extremal", "z2.json"], 0),
    (["cat", "climit", "d3.json", "--chain", "l,m,r;l,r;l"], 0),
    (["cat", "localize", "sierpinski.json", "--invert", "{1}->{0,1}"], 0),
    (["cat", "functors", "z2.json", "z2.json", "--nats"], 0),
    (["psh", "validate", "constant2.json"], 0),
    (["psh", "gamma", "constant2.json"], 0),
    (["psh", "disc", "d3.json", "--set", "a,b"], 0),
    (["psh", "codisc", "d3.json", "--set", "a,b"], 0),
    (["psh", "pi", "constant2.json"], 0),
    (["psh", "omega", "discrete2.json", "--pi"], 0),
    (["psh", "adjoint-check", "sierpinski.json"], 0),
    (["psh", "adjoint-check", "sierpinski.json", "--powerset"], 1),
    (["site", "validate", "opencover2.json"], 0),
    (["site", "dense", "d3.json"], 0),
    (["site", "sieve", "d3.json", "--on", "l,m,r", "--gen", "{l}->{l,m,r}", "--pullback", "{r}->{l,m,r}"], 0),
    (["site", "sheaf-check", "constant2.json", "opencover2.json"], 1),
    (["site", "sheafify", "constant2.json", "opencover2.json"], 0),
    (["site", "closure", "constant2.json", "opencover2.json", "--sub", "{}:*"], 0),
    (["logic", "parse", "a -> b -> c"], 0),
    (["logic", "eval", "d3.json", "~~a -> a", "--val", "a=l,r"], 0),
    (["logic", "forces", "d3.json", "~~a", "--val", "a=l,r", "--at", "l,m,r"], 0),
    (["logic", "translate", "a | ~a"], 0),
    (["logic", "classical", "a -> b"], 1),
    (["logic", "countermodel", "a -> a", "--max-points", "2"], 0),
    (["simp", "identities"], 0),
    (["simp", "identities", "z2.json", "--dim", "3"], 0),
    (["simp", "connectivity", "z2.json"], 0),
])
def test_subcommands(argv, code):
    got, text = run(*argv)
    assert got == code, text
    assert text.strip()


def test_connectivity_needs_groupoid():
    code, data = run_json("simp", "connectivity", "sierpinski.json")
    assert code == 1 and data["ok"] is False


def test_sheafify_reports_four_global_sections():
    code, data = run_json("site", "sheafify", "constant2.json", "opencover2.json")
    assert code == 0 and data["sizes"]["{x,y}"] == 4 and data["sheaf"] is True


def test_sheaf_check_counts():
    code, data = run_json("site", "sheaf-check", "constant2.json", "opencover2.json")
    assert code == 1
    assert data["details"]["families"] == 4 and data["details"]["amalgamating"] == 2


def test_pi_of_omega():
    code, data = run_json("psh", "omega", "discrete2.json", "--pi")
    assert code == 0 and data["components"] == 2


def test_translate_output():
    code, data = run_json("logic", "translate", "a | ~a")
    assert code == 0 and "~~(~~a | ~~(~~a -> ~~false))" in json.dumps(data)


def test_user_space_file(tmp_path):
    f = tmp_path / "s.json"
    f.write_text(json.dumps(space_to_dict(sierpinski())))
    code, text = run("space", "regular", str(f))
    assert code == 0 and "{0,1}" in text


# -- determinism and format mirroring


@pytest.mark.parametrize("argv", [
    ["psh", "omega", "d3.json"],
    ["logic", "countermodel", "~a | ~~a", "--max-points", "3"],
    ["simp", "nerve", "z2.json", "--dim", "2"],
    ["site", "dense", "d3.json"],
])
def test_byte_identical_output(argv):
    assert run(*argv) == run(*argv)
    assert run("--format", "json", *argv) == run("--format", "json", *argv)


def _leaves(x):
    if isinstance(x, dict):
        for k, v in x.items():
            yield str(k)
            yield from _leaves(v)
    elif isinstance(x, list):
        for v in x:
            yield from _leaves(v)
    elif isinstance(x, bool):
        yield "true" if x else "false"
    elif x is not None:
        yield str(x)


@pytest.mark.parametrize("argv", [
    ["space", "heyting", "d3.json", "--notnot", "l,r"],
    ["simp", "connectivity", "z2.json"],
    ["site", "sheafify", "constant2.json", "opencover2.json"],
])
def test_json_mirrors_text(argv):
    code_t, text = run(*argv)
    code_j, data = run_json(*argv)
    assert code_t == code_j
    for leaf in _leaves(data):
        assert leaf in text


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "finitopos", "space", "heyting", "d3.json",
                           "--notnot", "l,r"], capture_output=True, text=True)
    assert proc.returncode == 0 and "{l,m,r}" in proc.stdout
