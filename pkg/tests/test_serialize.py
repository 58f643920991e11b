import copy
import importlib.util
import json
import pathlib

import numpy as np
import pytest
from hypothesis import given, strategies as st

from defcat import examples as ex
from defcat import funmod as fm
from defcat import serialize as se
from defcat.linalg import Field
from defcat.lincat import extend_scalars
from defcat.ring import FpModule, dual_numbers

ROOT = pathlib.Path(__file__).resolve().parent.parent
FIXTURES = sorted((ROOT / "fixtures").glob("*.json"))
F5, Q = Field(5), Field(0)


def canonical(obj) -> str:
    return se.dumps(se.document(obj))


@pytest.mark.parametrize("path", FIXTURES, ids=lambda p: p.name)
def test_fixtures_decode_and_reencode_stably(path):
    text = path.read_text(encoding="utf-8")
    ws = se.loads(text)
    objs = ws.all()
    if "type" in json.loads(text):
        assert canonical(objs["main"]) == text
    for obj in objs.values():
        once = canonical(obj)
        assert canonical(se.loads(once).get("main")) == once


def test_fixture_generator_reproduces_the_committed_files(tmp_path, monkeypatch):
    spec = importlib.util.spec_from_file_location("make_fixtures", ROOT / "tools" / "make_fixtures.py")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    monkeypatch.setattr(mod, "OUT", tmp_path)
    mod.main()
    for path in FIXTURES:
        assert (tmp_path / path.name).read_text(encoding="utf-8") == path.read_text(encoding="utf-8"), path.name


@given(field=st.sampled_from([F5, Q]), seed=st.integers(0, 2**32 - 1))
def test_random_objects_round_trip(field, seed):
    rng = np.random.default_rng(seed)
    cat = extend_scalars(ex.a2_category(field), dual_numbers(field))
    F = fm.random_functor_module(cat, rng)
    M = FpModule(dual_numbers(field), field.random(rng, (2, 2, 2)))
    for obj in (cat, F, M):
        text = canonical(obj)
        assert canonical(se.round_trip(obj)) == text
    back = se.round_trip(F)
    assert back.dims() == F.dims()


def test_rationals_are_encoded_as_pairs():
    R = dual_numbers(Q)
    M = FpModule(R, Q.array([[[Q.scalar(1) / 3, Q.scalar(-2) / 7]]]))
    enc = se.encode(M)
    assert enc["presentation"][0][0] == [[1, 3], [-2, 7]]
    assert np.array_equal(se.round_trip(M).presentation, M.presentation)


def ring_doc():
    return json.loads((ROOT / "fixtures" / "ring.json").read_text())


def test_version_is_required_and_checked():
    doc = ring_doc()
    del doc["schema_version"]
    with pytest.raises(se.SchemaError, match="schema_version"):
        se.loads(json.dumps(doc))
    doc["schema_version"] = "2"
    with pytest.raises(se.UnsupportedVersion):
        se.loads(json.dumps(doc))


def test_malformed_json_is_a_schema_error():
    with pytest.raises(se.SchemaError, match="malformed JSON"):
        se.loads("{not json")


def test_shape_errors_carry_a_pointer():
    doc = ring_doc()
    doc["constants"] = doc["constants"][:1]
    with pytest.raises(se.SchemaError) as info:
        se.loads(json.dumps(doc)).get("main")
    assert info.value.path == "/constants"


def test_zero_denominator_is_rejected():
    doc = json.loads(canonical(dual_numbers(Q)))
    doc["constants"][0][0][0] = [1, 0]
    with pytest.raises(se.SchemaError):
        se.loads(json.dumps(doc)).get("main")


def test_dangling_and_circular_references():
    ws = json.loads((ROOT / "fixtures" / "modules.json").read_text())
    dangling = copy.deepcopy(ws)
    dangling["objects"]["M"]["ring"] = "missing"
    with pytest.raises(se.SchemaError, match="dangling"):
        se.loads(json.dumps(dangling)).get("M")
    cat = se.encode(ex.a2_category(F5))
    circ = {"schema_version": "1", "objects": {"A": {**cat, "ring": "B"}, "B": {**cat, "ring": "A"}}}
    with pytest.raises(se.SchemaError, match="circular"):
        se.loads(json.dumps(circ)).get("A")
    loop = {"schema_version": "1", "objects": {"A": {**cat, "ring": "A"}}}
    with pytest.raises(se.SchemaError, match="circular"):
        se.loads(json.dumps(loop)).get("A")


def test_unknown_type_is_reported():
    with pytest.raises(se.SchemaError, match="unknown type"):
        se.loads(json.dumps({"schema_version": "1", "type": "sheaf"})).get("main")
