"""CLI argument validation, exit codes, deterministic output, and --verify."""

import json

import pytest

from isodensity.cli import (
    EXIT_FAIL,
    EXIT_INCONCLUSIVE,
    EXIT_IO,
    EXIT_OK,
    main,
)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.mark.parametrize(
    "argv,message",
    [
        (["certify", "--p", "4", "--ell", "3"], "p must be prime"),
        (["certify", "--p", "3", "--ell", "1"], "ell must be at least 2"),
        (["certify", "--p", "3", "--ell", "3"], "ell must differ from p"),
        (["certify", "--p", "3", "--ell", "4"], "ell must be prime"),
        (["certify", "--p", "3", "--ell", "2", "--precision", "1"],
         "precision must be at least 2"),
        (["graph", "--p", "11", "--ell", "5"], "graph supports ell in {2, 3} only"),
    ],
)
def test_usage_errors(capsys, argv, message):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_FAIL
    assert message in err


def test_no_command(capsys):
    code, _, err = run(capsys)
    assert code == EXIT_FAIL
    assert "no command" in err


def test_certify_success_and_determinism(capsys):
    code1, out1, _ = run(capsys, "certify", "--p", "3", "--ell", "2")
    code2, out2, _ = run(capsys, "certify", "--p", "3", "--ell", "2")
    assert code1 == code2 == EXIT_OK
    assert out1 == out2  # byte-identical
    cert = json.loads(out1)
    assert cert["verdicts"]["full_density"] is True


def test_certify_hypothesis_failed_exits_zero(capsys):
    code, out, _ = run(capsys, "certify", "--p", "3", "--ell", "7")
    assert code == EXIT_OK
    cert = json.loads(out)
    assert cert["verdicts"]["full_density"].startswith("hypothesis_failed")


def test_graph_report(capsys):
    code, out, _ = run(capsys, "graph", "--p", "11", "--ell", "2")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["report_type"] == "graph"
    assert doc["supersingular_count"] == doc["mass_formula_count"] == 2
    assert doc["connected"] and doc["parity_mix"]


def test_hopf_report(capsys):
    code, out, _ = run(capsys, "hopf", "--p", "3")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["report_type"] == "hopf"
    assert doc["coproduct"]["t1"] is True
    assert doc["cocycles"]["all_pass"] is True


def test_text_format(capsys):
    code, out, _ = run(capsys, "graph", "--p", "11", "--ell", "2", "--format", "text")
    assert code == EXIT_OK
    assert "connected: True" in out
    assert "{" not in out.splitlines()[0]


def test_verify_certificate_roundtrip(tmp_path, capsys):
    target = tmp_path / "cert.json"
    code, _, _ = run(
        capsys, "certify", "--p", "5", "--ell", "2", "--output", str(target)
    )
    assert code == EXIT_OK
    code, out, _ = run(capsys, "--verify", str(target))
    assert code == EXIT_OK
    assert "certificate verified" in out


def test_verify_rejects_tampered_certificate(tmp_path, capsys):
    target = tmp_path / "cert.json"
    run(capsys, "certify", "--p", "3", "--ell", "2", "--output", str(target))
    doc = json.loads(target.read_text())
    doc["witnesses"][0]["norm"] = "17"
    target.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "--verify", str(target))
    assert code == EXIT_FAIL
    assert "INVALID" in out


def test_verify_graph_report_roundtrip(tmp_path, capsys):
    target = tmp_path / "graph.json"
    run(capsys, "graph", "--p", "13", "--ell", "3", "--output", str(target))
    code, out, _ = run(capsys, "--verify", str(target))
    assert code == EXIT_OK
    assert "report verified" in out


def test_verify_detects_report_mismatch(tmp_path, capsys):
    target = tmp_path / "graph.json"
    run(capsys, "graph", "--p", "13", "--ell", "3", "--output", str(target))
    doc = json.loads(target.read_text())
    doc["diameter"] = 99
    target.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "--verify", str(target))
    assert code == EXIT_FAIL
    assert "MISMATCH" in out


def test_verify_missing_file(tmp_path, capsys):
    code, _, err = run(capsys, "--verify", str(tmp_path / "absent.json"))
    assert code == EXIT_IO
    assert "i/o error" in err


def test_verify_invalid_json(tmp_path, capsys):
    target = tmp_path / "bad.json"
    target.write_text("{not json")
    code, _, err = run(capsys, "--verify", str(target))
    assert code == EXIT_IO


def test_verify_unrecognized_document(tmp_path, capsys):
    target = tmp_path / "odd.json"
    target.write_text(json.dumps({"hello": 1}))
    code, _, err = run(capsys, "--verify", str(target))
    assert code == EXIT_FAIL
    assert "unrecognized" in err


def test_output_to_unwritable_path(tmp_path, capsys):
    code, _, err = run(
        capsys,
        "graph",
        "--p",
        "11",
        "--ell",
        "2",
        "--output",
        str(tmp_path / "no" / "such" / "dir" / "out.json"),
    )
    assert code == EXIT_IO
