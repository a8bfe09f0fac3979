import json
import shutil
import subprocess
from importlib import resources

import jsonschema
import pytest

from knotforge.cli import EXIT_IMPOSSIBLE, EXIT_INPUT, EXIT_LIMIT, EXIT_OK, main

SCHEMA = json.loads(resources.files("knotforge").joinpath("schema.json").read_text())


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    assert code == EXIT_OK
    data = json.loads(out)
    jsonschema.validate(data, SCHEMA)
    return data


@pytest.mark.parametrize("args", [
    ("realize", "--nabla", "1-2z^2+2z^4"),
    ("realize", "--nabla", "2z-z^3", "--components", "2"),
    ("realize", "--nabla", "z^2-z^4", "--components", "3"),
    ("realize", "--delta", "t - 1 + t^-1"),
])
def test_realize_eval_round_trip(capsys, tmp_path, args):
    r = run_json(capsys, *args)
    f = tmp_path / "out.json"
    f.write_text(json.dumps(r))
    e = run_json(capsys, "eval", "--pd", str(f))
    assert e["nabla"] == r["result"]["nabla"]
    assert e["determinant_check"] in ("agree", "skipped")


def test_eval_pd_text(capsys, tmp_path):
    f = tmp_path / "trefoil.pd"
    f.write_text("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]\n")
    code, out, _ = run(capsys, "eval", "--pd", str(f))
    assert code == EXIT_OK and "1 + z^2" in out and "agree" in out


def test_eval_conway(capsys):
    e = run_json(capsys, "eval", "--conway", "(-3,5,7)")
    assert e["nabla"] == "1"
    e = run_json(capsys, "eval", "--conway", "22")
    assert e["nabla"] == "1 - z^2"
    e = run_json(capsys, "eval", "--conway", "0")
    assert e["nabla"] == "0" and e["components"] == 2


def test_parse_and_normalize(capsys):
    d = run_json(capsys, "parse", "(213,-4,22,40)")
    assert d["canonical"] == "(213,-4,22,40)"
    d = run_json(capsys, "normalize", "M(-1/3;0)")
    assert d["canonical"] == "M(2/3;-1)"
    code, _, _ = run(capsys, "parse", "12", "--strict")
    assert code == EXIT_INPUT


def test_surgery_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "surgery", "triples", "--k", "1", "--n", "2")
    assert code == EXIT_OK and out.split() == ["8", "5", "-3"]
    d = run_json(capsys, "surgery", "large", "--q-max", "9")
    assert [7, 5, -3] in d["triples"]
    f = tmp_path / "k.pd"
    f.write_text("X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]\n")
    code, _, _ = run(capsys, "surgery", "apply", "--pd", str(f))
    assert code == EXIT_INPUT


def test_bound(capsys):
    d = run_json(capsys, "bound", "--conway", "22")
    assert d["t_strong"] >= 1


def test_family_lines(capsys):
    code, out, _ = run(capsys, "family", "--nabla", "1+z^2-z^4", "--count", "2")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert len(lines) == 2
    for line in lines:
        jsonschema.validate(json.loads(line), SCHEMA)
    code, out, _ = run(capsys, "family", "--nabla", "1+z^2", "--count", "0")
    rec = json.loads(out)
    assert rec["members"] == 0
    jsonschema.validate(rec, SCHEMA)


@pytest.mark.parametrize("argv,code", [
    (("realize", "--nabla", "z^2", "--components", "3"), EXIT_IMPOSSIBLE),
    (("realize", "--nabla", "1+z"), EXIT_INPUT),
    (("realize", "--nabla", "1+"), EXIT_INPUT),
    (("realize", "--delta", "t + 1"), EXIT_INPUT),
    (("eval", "--pd", "/nonexistent/file"), EXIT_INPUT),
    (("eval", "--conway", "(2,"), EXIT_INPUT),
    (("eval", "--pd", "/dev/null"), EXIT_INPUT),
    (("--limit", "2", "eval", "--conway", "(-3,5,7)"), EXIT_LIMIT),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 2


@pytest.mark.skipif(shutil.which("knotforge") is None, reason="console script not installed")
def test_console_script():
    p = subprocess.run(["knotforge", "realize", "--nabla", "1+z^2", "--json"], capture_output=True, text=True)
    assert p.returncode == 0
    assert json.loads(p.stdout)["result"]["nabla"] == "1 + z^2"
