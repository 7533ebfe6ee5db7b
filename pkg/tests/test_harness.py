import json
import os
import subprocess
import sys

import pytest

from h2ia.harness import cli, suites
from h2ia.harness.report import SuiteReport, case_sort_key, dumps_report, header_record, read_report
from h2ia.ia_alphabet import Conj
from h2ia.relations import R_FAMILIES


def run_cli(*argv, capsys=None):
    code = cli.main(list(argv))
    out = capsys.readouterr() if capsys else None
    return code, out


def test_case_sort_is_natural():
    ids = ["R10", "R2", "R1", "conj:b", "conj:a"]
    assert sorted(ids, key=case_sort_key) == ["R1", "R2", "R10", "conj:a", "conj:b"]


def test_report_is_sorted_and_deterministic():
    rep = SuiteReport("demo")
    rep.add("b", True)
    rep.add("a", False, witness={"basis_letter": 2})
    rep.add("c", None)
    assert not rep.ok
    assert rep.summary() == "demo: 1 passed, 1 failed, 1 skipped"
    text = dumps_report(header_record(7, 4, ["demo"], "python"), [rep])
    lines = [json.loads(x) for x in text.splitlines()]
    assert lines[0]["type"] == "header" and lines[0]["seed"] == 7 and lines[0]["pool"] == 4
    assert [x["case"] for x in lines[1:]] == ["a", "b", "c"]
    assert text == dumps_report(header_record(7, 4, ["demo"], "python"), [rep])


def test_read_report_requires_header(tmp_path):
    path = tmp_path / "r.jsonl"
    path.write_text('{"type": "case"}\n')
    with pytest.raises(ValueError):
        read_report(path)


def test_small_relator_run():
    rep = suites.suite_relators(rank=4, jobs=1)
    assert rep.ok
    assert {c.case for c in rep.cases} == set(R_FAMILIES)


def test_rank_two_has_no_relations():
    rep = suites.suite_relators(rank=2, jobs=1)
    assert rep.ok
    assert all(c.counts["instances"] == 0 for c in rep.cases)


def test_corrupted_relator_gives_basis_letter(monkeypatch):
    real = suites.expand_params

    def corrupted(name, params):
        w = real(name, params)
        return w[1:] if name == "R4" else w

    monkeypatch.setattr(suites, "expand_params", corrupted)
    rep = suites.suite_relators(rank=3, jobs=1, families=("R4",))
    [case] = rep.cases
    assert case.status == "fail"
    assert case.witness["basis_letter"] in (1, 2, 3)


def test_parallel_matches_serial():
    a = suites.suite_h_relators(rank=4, jobs=1, families=("H1", "H8"))
    b = suites.suite_h_relators(rank=4, jobs=2, families=("H1", "H8"))
    assert [c.to_json() for c in a.sorted_cases()] == [c.to_json() for c in b.sorted_cases()]


def test_jobs_environment(monkeypatch):
    monkeypatch.setenv("H2IA_JOBS", "3")
    assert suites.default_jobs() == 3
    monkeypatch.setenv("H2IA_JOBS", "zero")
    with pytest.raises(ValueError):
        suites.default_jobs()


def test_word_extension_cases_are_seeded():
    assert suites.word_extension_cases(4, 1, 50) == (0, None)


def test_cli_verify_writes_report(tmp_path, capsys):
    path = tmp_path / "out.jsonl"
    code, out = run_cli("verify", "--suite", "tau", "--report", str(path), "--seed", "5", capsys=capsys)
    assert code == 0
    assert "tau: 6 passed, 0 failed" in out.out
    header, cases = read_report(path)
    assert header["seed"] == 5 and header["suites"] == ["tau"]
    assert [c["case"] for c in cases] == sorted((c["case"] for c in cases), key=case_sort_key)


def test_cli_verify_failure_exit_code(tmp_path, capsys):
    (tmp_path / "bad.json").write_text(json.dumps({"start": [{"k": "C", "a": 1, "b": 2}]}))
    code, out = run_cli("verify", "--suite", "certs", "--cert-dir", str(tmp_path), capsys=capsys)
    assert code == 1
    assert "FAIL file:bad.json" in out.out


def test_cli_bad_jobs_is_usage_error(monkeypatch, capsys):
    monkeypatch.setenv("H2IA_JOBS", "-2")
    code, _ = run_cli("verify", "--suite", "kernel", capsys=capsys)
    assert code == 2


def test_cli_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["verify", "--suite", "nope"])
    assert info.value.code == 2
    code, out = run_cli("eval", "--word", "/nonexistent.json", capsys=capsys)
    assert code == 2 and "error" in out.err


def test_cli_eval(tmp_path, capsys):
    path = tmp_path / "w.json"
    path.write_text(json.dumps([Conj(1, 2).to_json()]))
    code, out = run_cli("eval", "--word", str(path), capsys=capsys)
    assert code == 0
    assert out.out.splitlines()[0].startswith("x1 -> ")
    path.write_text(json.dumps({"word": [{"k": "M", "a": -1, "b": 2}], "rank": 2}))
    assert run_cli("eval", "--word", str(path), capsys=capsys)[0] == 2
    code, out = run_cli("eval", "--word", str(path), "--aut", capsys=capsys)
    assert code == 0


def test_cli_tau(tmp_path, capsys):
    path = tmp_path / "w.json"
    path.write_text(json.dumps({"word": [{"k": "Mc", "a": 1, "b": 2, "c": 3}], "rank": 3}))
    code, out = run_cli("tau", "--word", str(path), capsys=capsys)
    assert code == 0
    assert out.out.strip() == "row 1: +1 e2^e3"


def test_cli_reduce_and_trace(tmp_path, capsys):
    from h2ia.rewrite import worked_certificate

    cert = tmp_path / "c.json"
    cert.write_text(json.dumps(worked_certificate().to_json()))
    trace = tmp_path / "trace.txt"
    code, out = run_cli("reduce", "--cert", str(cert), "--trace", str(trace), capsys=capsys)
    assert code == 0
    assert "final: identity" in out.out
    assert len(trace.read_text().splitlines()) == 5
    cert.write_text("[]")
    assert run_cli("reduce", "--cert", str(cert), capsys=capsys)[0] == 2


def test_cli_kernel(capsys):
    code, out = run_cli("kernel", "--print-matrix", capsys=capsys)
    assert code == 0
    assert "kernel rank 9" in out.out


def test_module_entry_point():
    env = dict(os.environ, H2IA_JOBS="1")
    proc = subprocess.run([sys.executable, "-m", "h2ia", "verify", "--suite", "kernel"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0, proc.stderr
    assert "kernel: 5 passed" in proc.stdout
