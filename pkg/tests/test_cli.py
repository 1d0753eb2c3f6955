import json
from importlib.resources import files

import jsonschema
import pytest

from fermat_k3 import checks
from fermat_k3.cli import main, to_json, to_markdown

SCHEMA = json.loads(files("fermat_k3").joinpath("data/report.schema.json").read_text())


def test_registry():
    ids = [cid for cid, _ in checks.list_checks()]
    assert len(ids) >= 25 and len(set(ids)) == len(ids)
    assert all(citation for _, citation in checks.list_checks())
    for required in ("prop-2.6-order-structure", "lemma-6.7-snf", "prop-5.1-order-6", "lemma-6.11-h-squared"):
        assert required in ids


def test_single_check_json(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["verify", "--check", "lemma-6.7-snf", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    jsonschema.validate(report, SCHEMA)
    assert report[0]["status"] == "pass" and "(1, 1, 4, 8, 8)" in report[0]["detail"]
    assert report[0]["elapsed_ms"] is None


def test_timings_flag(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "--check", "prop-5.1-order-9", "--timings", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    jsonschema.validate(report, SCHEMA)
    assert isinstance(report[0]["elapsed_ms"], float)


def test_unknown_id_is_usage_error(capsys):
    assert main(["verify", "--check", "foo"]) == 2
    assert "foo" in capsys.readouterr().err
    assert main(["verify"]) == 2
    assert main(["bogus"]) == 2


def test_list(capsys):
    assert main(["list"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == len(checks.REGISTRY)


def test_failing_and_erroring_checks(monkeypatch):
    def bad(ctx):
        return False, "forced failure"

    def boom(ctx):
        raise RuntimeError("forced error")

    extra = [checks.Check("test-fail", "none", "Tests", bad), checks.Check("test-error", "none", "Tests", boom)]
    monkeypatch.setattr(checks, "REGISTRY", checks.REGISTRY + extra)
    results = checks.run_checks(["test-fail", "test-error"])
    assert [r.status for r in results] == ["fail", "error"]
    assert all(r.detail for r in results)
    jsonschema.validate(json.loads(to_json(results)), SCHEMA)
    assert main(["verify", "--check", "test-fail"]) == 1
    assert main(["verify", "--check", "test-error"]) == 1


def test_markdown_groups_by_section():
    results = checks.run_checks(["prop-5.1-order-9", "lemma-6.7-snf", "sec-2-octads"])
    text = to_markdown(results)
    headers = [ln for ln in text.splitlines() if ln.startswith("## ")]
    assert len(headers) == 3 and headers[0].startswith("## Section 2")


def test_cache_directory(tmp_path):
    first = checks.run_checks(["sec-2-m24-order"], cache_dir=str(tmp_path))
    assert sorted(p.name for p in tmp_path.iterdir()) == ["golay.txt", "m24_bsgs.json"]
    second = checks.run_checks(["sec-2-m24-order"], cache_dir=str(tmp_path))
    assert first == second and first[0].status == "pass"


def test_schema_rejects_bad_reports():
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate([{"id": "x", "status": "maybe", "citation": "c", "elapsed_ms": None, "detail": ""}], SCHEMA)
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate([{"id": "x", "status": "fail", "citation": "c", "elapsed_ms": None, "detail": ""}], SCHEMA)
