import io
import json
import pathlib
import subprocess
import sys

import pytest

from defcat import cli
from defcat import serialize as se

FIX = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def run(*argv):
    out = io.StringIO()
    report, status = cli.run([str(a) for a in argv], out)
    assert json.loads(out.getvalue())["exit_status"] == status
    return report, status


def fx(name):
    return FIX / name


@pytest.mark.parametrize("name", sorted(p.name for p in FIX.glob("*.json")))
def test_every_fixture_validates(name):
    report, status = run("validate", fx(name))
    assert status == 0, report["results"]


@pytest.mark.parametrize("argv,status,key,value", [
    (("hh", "--degree", "2", "dualnumbers.json"), 0, "dim", 1),
    (("hh", "--degree", "2", "--full", "dualnumbers.json"), 0, "dim", 1),
    (("hh", "--degree", "1", "a2.json"), 0, "dim", 0),
    (("classify", "a2.json"), 0, "rigid", True),
    (("classify", "dualnumbers.json"), 0, "hh2", 1),
    (("tor", "--left", "k", "--right", "M", "modules.json"), 0, "dim", 1),
    (("ext", "--left", "k", "--right", "k", "--degree", "2", "modules.json"), 0, "dim", 1),
    (("flat", "--name", "M", "modules.json"), 1, "flat", False),
    (("flat", "--name", "R", "modules.json"), 2, None, None),
    (("equiv", "--left", "c", "--right", "zero", "cochains.json"), 1, "equivalent", False),
    (("equiv", "--left", "c", "--right", "c", "cochains.json"), 0, "equivalent", True),
    (("space", "sierpinski.json"), 0, "rigid", True),
    (("space", "point_dualnumbers.json"), 0, "hh2", 1),
    (("lift", "--deformation", "d", "--iso", "f", "g0", "lift.json"), 0, "exact", True),
    (("lift", "--deformation", "d", "--idempotent", "e", "r0", "s0", "lift.json"), 0, "exact", True),
    (("lift", "--deformation", "d", "--biproduct", "s1", "s2", "p1", "p2", "lift.json"), 0, "exact", True),
    (("lift", "--deformation", "d", "--iso", "f", "f", "lift.json"), 2, None, None),
])
def test_commands_on_fixtures(argv, status, key, value):
    *head, file = argv
    report, got = run(*head, fx(file))
    assert got == status, report["results"]
    if key is not None:
        assert report["results"][key] == value


@pytest.mark.parametrize("argv", [
    ("basechange", "--name", "P", "--surjection", "theta", "basechange.json"),
    ("gr", "--name", "P", "--surjection", "theta", "basechange.json"),
    ("deform", "--name", "c", "cochains.json"),
    ("strictify", "deformation.json"),
    ("strictify", "nonstrict.json"),
    ("lift", "--deformation", "d", "--injectives", "lift.json"),
    ("validate", "quantum_torus.json"),
])
def test_commands_succeed(argv):
    *head, file = argv
    report, status = run(*head, fx(file))
    assert status == 0, report["results"]


def test_reports_are_deterministic_and_record_inputs():
    a, b = io.StringIO(), io.StringIO()
    cli.run(["--seed", "3", "classify", str(fx("dualnumbers.json"))], a)
    cli.run(["classify", "--seed", "3", str(fx("dualnumbers.json"))], b)
    assert a.getvalue() == b.getvalue()
    report = json.loads(a.getvalue())
    assert report["seed"] == 3
    assert report["inputs_digest"] == se.digest(fx("dualnumbers.json").read_bytes())


def test_text_flag_before_or_after_command():
    for argv in (["--text", "hh", str(fx("a2.json"))], ["hh", "--text", str(fx("a2.json"))]):
        out = io.StringIO()
        _, status = cli.run(argv, out)
        assert status == 0 and out.getvalue().startswith("hh: exit 0")


def test_input_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{", encoding="utf-8")
    assert run("validate", bad)[1] == 2
    assert run("validate", tmp_path / "absent.json")[1] == 2
    v2 = tmp_path / "v2.json"
    doc = json.loads(fx("ring.json").read_text())
    doc["schema_version"] = "9"
    v2.write_text(json.dumps(doc), encoding="utf-8")
    report, status = run("validate", v2)
    assert status == 2 and report["results"]["kind"] == "UnsupportedVersion"
    assert run("tor", "--left", "k", "--right", "nothing", fx("modules.json"))[1] == 2
    assert run("hh", "--degree", "9", fx("a2.json"))[1] == 2


def test_unknown_command_exits_with_two():
    with pytest.raises(SystemExit) as info:
        cli.run(["frobnicate"], io.StringIO())
    assert info.value.code == 2


def test_console_entry_point_runs_as_module():
    proc = subprocess.run([sys.executable, "-m", "defcat.cli", "--text", "classify", str(fx("a2.json"))],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "rigid" in proc.stdout
