"""Scenario parsing, report determinism and golden reports.

Regenerate the golden files with ``POLYCENTRAL_UPDATE_GOLDEN=1 pytest tests/test_cli.py``.
"""

import json
import os
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from polycentral.cli import main
from polycentral.errors import ParseError
from polycentral.report import build, run
from polycentral.scenario import builtin_names, load_builtin, parse_scenario

GOLDEN = Path(__file__).parent / "golden"
SCHEMA = json.loads((resources.files("polycentral") / "schema" / "report.schema.json").read_text())

HEIS_TEXT = """\
[scenario]
name = explicit
prime = 2
cutoff = 12

[group]
generators = a b z
orders = inf inf inf
conj a b = b z^-1
conjinv a b = b z

[schedule]
weights = a:1 b:1 z:3
layers = 1 2

[checks]
associativity = 20
"""


def test_builtin_sec9_example2_selects_line_embedding():
    sc = load_builtin("sec9_example2")
    assert (sc.prime, sc.cutoff, sc.group.builtin) == (2, 20, "sec9_example2")
    ga = build(sc)
    t = ga.algebra.var(0)
    one = ga.algebra.one()
    assert ga.images == (one + t, one + t + t ** 2)


def test_missing_prime():
    with pytest.raises(ParseError, match="prime"):
        parse_scenario("[scenario]\ncutoff = 3\n")


def test_explicit_heisenberg():
    sc = parse_scenario(HEIS_TEXT)
    assert sc.group.generators == ["a", "b", "z"]
    ga = build(sc)
    assert ga.pres.n == 3
    assert ga.pres.conj == {(0, 1): (0, 1, -1)}
    assert run(sc).passed


@pytest.mark.parametrize("text,line,match", [
    ("[scenario]\nprime = 2\ncutoff = 5\n[grp]\n", 4, "unknown section"),
    ("prime = 2\n", 1, "outside"),
    ("[scenario]\nprime = 4\ncutoff = 5\n", 2, "prime number"),
    ("[scenario]\nprime = 2\ncutoff = x\n", 3, "integer"),
    ("[scenario]\nprime = 2\ncutoff = 5\n[group]\nbuiltin = Q8\n", 5, "unknown builtin"),
    ("[scenario]\nprime = 2\ncutoff = 5\n[group]\ngenerators = a b\nconj a c = b\n", 6, "unknown generator"),
    ("[scenario]\nprime = 2\ncutoff = 5\n[group]\ngenerators = a b\nconj a b = b^x\n", 6, "bad letter"),
    ("[scenario]\nprime = 2\ncutoff = 5\n[group]\nbuiltin = Z\n[checks]\nfoo = 1\n", 7, "unknown check"),
    ("[scenario]\nprime = 2\ncutoff = 5\n[group]\nbuiltin = Z\n[schedule]\nnamed = fancy\n", 7,
     "unknown schedule"),
    ("[scenario]\nprime = 2\nprime = 3\n", 3, "duplicate"),
    ("[scenario]\nprime = 2\ncutoff = 5\n[group]\ngenerators = a b\norders = inf\n", 6, "one order"),
])
def test_parse_errors_carry_line_numbers(text, line, match):
    with pytest.raises(ParseError, match=match) as info:
        parse_scenario(text)
    assert info.value.line == line


def test_build_time_errors_carry_line_numbers():
    text = HEIS_TEXT.replace("weights = a:1 b:1 z:3", "weights = a:1 b:1 q:3")
    with pytest.raises(ParseError) as info:
        build(parse_scenario(text))
    assert info.value.line == 13
    text = HEIS_TEXT.replace("conj a b = b z^-1", "conj a b = z^-1 b")
    with pytest.raises(ParseError, match="normal form"):
        build(parse_scenario(text))


def test_determinism_and_seed_sensitivity():
    sc = load_builtin("heisenberg")
    a, b = run(sc).to_json(), run(load_builtin("heisenberg")).to_json()
    assert a == b
    sc.seed = 5
    assert run(sc).to_text() != a


@pytest.mark.parametrize("name", builtin_names())
@pytest.mark.parametrize("fmt", ["text", "json"])
def test_golden_reports(name, fmt, tmp_path):
    out = tmp_path / f"{name}.{fmt}"
    code = main(["--builtin", name, "--format", fmt, "--out", str(out)])
    got = out.read_text()
    golden = GOLDEN / f"{name}.{'txt' if fmt == 'text' else 'json'}"
    if os.environ.get("POLYCENTRAL_UPDATE_GOLDEN"):
        golden.write_text(got)
    assert got == golden.read_text()
    if fmt == "json":
        data = json.loads(got)
        jsonschema.validate(data, SCHEMA)
        assert code == (0 if data["passed"] else 1)


def test_exit_status_and_overrides(tmp_path, capsys):
    assert main(["--builtin", "c4"]) == 0
    capsys.readouterr()
    assert main(["--builtin", "c4", "--prime", "3"]) == 1  # the expected degrees are for p = 2
    out = capsys.readouterr().out
    assert "prime: 3" in out and "FAIL classify" in out
    assert main(["--builtin", "c4", "--prime", "4"]) == 2
    assert main(["--builtin", "nope"]) == 2
    bad = tmp_path / "bad.ini"
    bad.write_text("[scenario]\ncutoff = 3\n")
    assert main(["--scenario", str(bad)]) == 2
    assert "missing required field 'prime'" in capsys.readouterr().err
    assert main(["--scenario", str(tmp_path / "missing.ini")]) == 2


def test_cutoff_and_seed_overrides(capsys):
    assert main(["--builtin", "z2_unit", "--cutoff", "4", "--seed", "3", "--format", "json"]) == 1
    data = json.loads(capsys.readouterr().out)
    assert (data["cutoff"], data["seed"]) == (4, 3)
    assert data["dims"] == {"1": 2, "2": 2, "4": 2}


def test_list_builtins(capsys):
    assert main(["--list-builtins"]) == 0
    assert "sec9_example2" in capsys.readouterr().out.split()


def test_component_law_only_for_example2():
    text = HEIS_TEXT + "component_law = 3\n"
    with pytest.raises(ParseError, match="sec9_example2"):
        run(parse_scenario(text))


def test_example1_weight_table():
    rep = run(load_builtin("sec9_example1"))
    assert rep.tables["weights"][1:] == [["g", "1"], ["g2", "3"], ["g4", "7"], ["g8", "15"]]
    assert rep.classification["exponent_p_up_to_D"] and rep.classification["abelian_up_to_D"]
