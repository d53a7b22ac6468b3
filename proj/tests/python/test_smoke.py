import json
import os
from pathlib import Path

import pytest

import coarselab
from coarselab import LineSet

INSTANCES = Path(os.environ.get("COARSELAB_INSTANCES", Path(__file__).resolve().parents[2] / "instances"))


def test_version():
    assert coarselab.VERSION.startswith("coarselab ")
    assert coarselab.DOCUMENT_VERSION == 1


def test_check_abc_document():
    r = coarselab.run("check", INSTANCES / "abc.json")
    assert r.exit_code == 0
    assert r.report["lsr_axioms"]["passed"] is True
    assert r.report["properties"]["ls_regular"] is False
    assert r.text.splitlines()[0] == coarselab.VERSION


def test_missing_singleton_fails_axiom_one():
    doc = json.loads((INSTANCES / "abc.json").read_text())
    doc["lsr"]["members"] = [f for f in doc["lsr"]["members"] if f != [["c"]]]
    r = coarselab.run("check", doc)
    assert r.exit_code == 1
    assert r.report["lsr_axioms"]["verdicts"][0]["status"] == "FAIL"


def test_schema_errors_are_exit_codes():
    assert coarselab.run("check", {"coarselab": 99}).exit_code == 2
    assert coarselab.run("nope", {}).exit_code == 2
    with pytest.raises(coarselab.CoarselabError):
        coarselab.run("check", "{not json")


def test_asdim_topo_line():
    r = coarselab.run("asdim", INSTANCES / "nat-line-topo.json")
    assert r.exit_code == 0
    assert r.lines[-1].startswith("asdim = 1 certified")


def test_linesets_and_hausdorff():
    e, o = LineSet.evens(), LineSet.odds()
    assert 4 in e and 5 not in e
    assert e.window(6) == [0, 2, 4, 6]
    assert coarselab.hausdorff_distance(e, o) == 1
    assert coarselab.hausdorff_distance(LineSet.finite([0]), e) is None
    p = LineSet.periodic(progressions=[(1, 3)], removals=[7])
    assert 7 not in p and 10 in p
    assert LineSet.from_json(p.to_json()).window(40) == p.window(40)
    assert not LineSet.geometric(1, 2, 1).is_finite()


def test_bunch_obstruction_roundtrip():
    cert, why = coarselab.bunch_obstruction([LineSet.evens(), LineSet.odds()], window=20_000, max_scale=8)
    assert cert is not None and why == ""
    assert len(cert["scales"]) == 9
    assert coarselab.validate_obstruction(cert)["outcome"] == "yes"
    none, why = coarselab.bunch_obstruction([LineSet.evens(), LineSet.evens()])
    assert none is None and "closures meet" in why


def test_lsr_documents_recheck():
    docs = coarselab.lsr_documents(2)
    assert len(docs) > 1
    for d in docs:
        assert coarselab.run("check", d).report["lsr_axioms"]["passed"] is True
    with pytest.raises(coarselab.CoarselabError):
        coarselab.lsr_documents(4)


def test_mine_json_render():
    r = coarselab.run("mine", None, target="non-ls-regular", as_json=True)
    assert r.exit_code == 0
    out = json.loads(r.text)
    assert out["exit_code"] == 0 and out["found"] is True
