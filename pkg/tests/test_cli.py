import json

import pytest

from unital_forge.cli import main, report_diff

SMALL = ["--samples", "20", "--blocks", "3", "--block-samples", "5", "--translations", "2"]


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# -- build-finite -----------------------------------------------------------------


@pytest.mark.parametrize("q,v,b", [(3, 28, 63), (2, 9, 12)])
def test_build_finite(q, v, b, tmp_path, capsys):
    path = tmp_path / f"u{q}.json"
    code, out, _ = run(["build-finite", "--q", str(q), "--out", str(path)], capsys)
    assert code == 0
    assert out.strip() == f"q={q} v={v} b={b} k={q + 1}"
    data = json.loads(path.read_text())
    assert len(data["points"]) == v and len(data["blocks"]) == b
    assert data["blocks"] == sorted(data["blocks"])


def test_build_finite_bad_q(tmp_path, capsys):
    code, _, err = run(["build-finite", "--q", "6", "--out", str(tmp_path / "x.json")], capsys)
    assert code == 2 and "error" in err
    assert not (tmp_path / "x.json").exists()


def test_build_finite_io_failure(tmp_path, capsys):
    target = tmp_path / "missing" / "dir" / "u.json"
    code, _, err = run(["build-finite", "--q", "2", "--out", str(target)], capsys)
    assert code == 1 and "error" in err


def test_missing_arguments_is_usage_error(capsys):
    assert main(["build-finite", "--q", "2"]) == 2
    assert main([]) == 2
    capsys.readouterr()


# -- verify -------------------------------------------------------------------------


def test_verify_kestenband(capsys):
    code, out, _ = run(["verify", "kestenband"], capsys)
    assert code == 0
    rep = json.loads(out)
    status = {c["name"]: c["status"] for c in rep["checks"]}
    assert status["absolute_points"] == "pass"
    assert rep["checks"][0]["witness"]["certified"] == 6
    assert status["witt_index_one"] == "skipped"
    assert rep["status"] == "pass"


def test_verify_onan_q3(capsys):
    code, out, _ = run(["verify", "onan", "--q", "3"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["checks"][0]["witness"]["configurations"] == 0
    assert rep["config"]["q"] == 3


def test_verify_eta_zero_failures(capsys):
    code, out, _ = run(["verify", "eta", "--samples", "60", "--seed", "42"], capsys)
    assert code == 0
    rep = json.loads(out)
    eq = next(c for c in rep["checks"] if c["name"] == "equivariance")
    assert eq["status"] == "pass" and eq["witness"]["failures"] == []


def test_verify_failing_suite_exits_one(capsys):
    # the translation-generated group of the order-2 unital is not two-transitive
    code, out, _ = run(["verify", "two-transitivity", "--q", "2", "--no-timing"], capsys)
    assert code == 1
    rep = json.loads(out)
    status = {c["name"]: c["status"] for c in rep["checks"]}
    assert status["pair_orbit"] == "fail" and status["unitary_two_transitive"] == "pass"


def test_verify_unknown_suite(capsys):
    code, _, err = run(["verify", "nonsense"], capsys)
    assert code == 2 and "unknown suite" in err


def test_verify_bad_q_for_finite_suite(capsys):
    code, _, _ = run(["verify", "design", "--q", "6"], capsys)
    assert code == 2


def test_verify_bad_config(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"sede": 1}))
    code, _, err = run(["verify", "heisenberg", "--config", str(cfg)], capsys)
    assert code == 2 and "unknown config keys" in err
    cfg.write_text("{not json")
    code, _, _ = run(["verify", "heisenberg", "--config", str(cfg)], capsys)
    assert code == 2


def test_config_file_and_flags_win(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 7, "samples": 5, "height": 4}))
    code, out, _ = run(["verify", "heisenberg", "--config", str(cfg), "--seed", "9", "--no-timing"], capsys)
    assert code == 0
    conf = json.loads(out)["config"]
    assert (conf["seed"], conf["samples"], conf["height"]) == (9, 5, 4)


def test_determinism_byte_identical(capsys):
    argv = ["verify", "transport", "--seed", "3", "--no-timing"] + SMALL
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    assert first == second
    assert "timing" not in json.loads(first)


def test_timing_present_by_default(capsys):
    _, out, _ = run(["verify", "kestenband"], capsys)
    assert "elapsed_s" in json.loads(out)["timing"]


def test_text_format_and_out_file(tmp_path, capsys):
    path = tmp_path / "r.txt"
    code, out, _ = run(["verify", "design", "--q", "2", "--format", "text", "--out", str(path)], capsys)
    assert code == 0 and out == ""
    text = path.read_text()
    assert text.startswith("[PASS] design")
    assert "pass    design_parameters" in text


def test_verify_all_small(capsys, monkeypatch):
    monkeypatch.setenv("UNITAL_FORGE_THREADS", "2")
    code, out, _ = run(["verify", "all", "--q", "3", "--no-timing"] + SMALL, capsys)
    reports = json.loads(out)
    names = [r["suite"] for r in reports]
    assert names == ["heisenberg", "eta", "transport", "translations", "design", "onan", "kestenband", "two-transitivity"]
    assert code == 0 and all(r["status"] == "pass" for r in reports)


# -- report-diff ----------------------------------------------------------------------


def _report(tmp_path, name, argv, capsys):
    path = tmp_path / name
    main(argv + ["--out", str(path)])
    capsys.readouterr()
    return path


def test_report_diff_identical(tmp_path, capsys):
    argv = ["verify", "heisenberg", "--samples", "10"]
    a = _report(tmp_path, "a.json", argv, capsys)
    b = _report(tmp_path, "b.json", argv, capsys)
    code, out, _ = run(["report-diff", str(a), str(b)], capsys)
    assert code == 0 and out == ""


def test_report_diff_different_seeds_all_pass(tmp_path, capsys):
    a = _report(tmp_path, "a.json", ["verify", "eta", "--samples", "10", "--seed", "1"], capsys)
    b = _report(tmp_path, "b.json", ["verify", "eta", "--samples", "10", "--seed", "2"], capsys)
    assert json.loads(a.read_text())["config"] != json.loads(b.read_text())["config"]
    code, out, _ = run(["report-diff", str(a), str(b)], capsys)
    assert code == 0 and out == ""


def test_report_diff_mutated_fail(tmp_path, capsys):
    a = _report(tmp_path, "a.json", ["verify", "kestenband"], capsys)
    data = json.loads(a.read_text())
    data["checks"][0]["status"] = "fail"
    data["status"] = "fail"
    b = tmp_path / "b.json"
    b.write_text(json.dumps(data))
    code, out, _ = run(["report-diff", str(a), str(b)], capsys)
    assert code == 1
    assert "kestenband/absolute_points: pass -> fail" in out
    assert "kestenband/*: pass -> fail" in out


def test_report_diff_parse_error(tmp_path, capsys):
    a = _report(tmp_path, "a.json", ["verify", "kestenband"], capsys)
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    code, _, err = run(["report-diff", str(a), str(bad)], capsys)
    assert code == 2 and "error" in err
    code, _, _ = run(["report-diff", str(a), str(tmp_path / "absent.json")], capsys)
    assert code == 2


def test_report_diff_function_missing_checks():
    a = {"suite": "x", "status": "pass", "checks": [{"name": "c", "status": "pass"}]}
    b = {"suite": "x", "status": "pass", "checks": []}
    assert report_diff(a, b) == ["x/c: pass -> missing"]
