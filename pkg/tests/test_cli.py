import json

import pytest

from duolog.cli import main
from duolog.corpus import load_corpus
from duolog.proof import check_proof, dump_proof, load_proof
from duolog.semantics import load_model
from duolog.syntax import parse_formula


@pytest.fixture()
def model_file(tmp_path):
    path = tmp_path / "model.json"
    path.write_text(
        json.dumps(
            {
                "worlds": ["g", "w"],
                "order": [["g", "w"]],
                "base": "g",
                "valuation": {"g": [], "w": ["p"]},
                "bot_true_at": [],
                "classical_atoms": [],
            }
        )
    )
    return str(path)


def test_parse_ok(capsys):
    assert main(["parse", "p -> (q => r)"]) == 0
    assert capsys.readouterr().out.strip() == "p -> (q => r)"


def test_parse_errors_exit_two(capsys):
    assert main(["parse", "p -> q => r"]) == 2
    assert "error:" in capsys.readouterr().err
    assert main(["parse", "--fragment", "sup", "bot"]) == 2


def test_eval_exit_codes(capsys, model_file):
    assert main(["eval", "p => q", "--model", model_file, "--world", "g"]) == 0
    assert main(["eval", "p -> q", "--model", model_file, "--world", "g"]) == 1


def test_valid_finds_distribution_countermodel(capsys):
    code = main(
        [
            "--json",
            "valid",
            "--variant", "sminus-bot",
            "--unrooted",
            "--max-worlds", "2",
            "(p => r) -> ((q => r) -> ((p | q) => r))",
        ]
    )
    assert code == 1
    payload = json.loads(capsys.readouterr().out)
    assert payload["valid_up_to_bound"] is False
    assert sorted(payload["countermodel"]["worlds"]) == ["w0", "w1"]
    assert payload["countermodel"]["order"] == []


def test_valid_with_classical_atoms(capsys):
    code = main(
        [
            "valid",
            "--variant", "cipc-b",
            "--max-worlds", "2",
            "--atoms", "p,c",
            "--classical-atoms", "c",
            "(c => p) -> (c -> p)",
        ]
    )
    assert code == 0


def test_valid_rooted_passes(capsys):
    code = main(
        [
            "valid",
            "--variant", "s",
            "--max-worlds", "2",
            "--atoms", "p,q,r",
            "(p => r) -> ((q => r) -> ((p | q) => r))",
        ]
    )
    assert code == 0


def test_consequence_countermodel(capsys):
    code = main(
        ["consequence", "--variant", "s", "--max-worlds", "2", "--premise", "p => q", "p -> q"]
    )
    assert code == 1
    assert "countermodel" in capsys.readouterr().out


def test_matrix3_refutation(capsys):
    assert main(["matrix3", "(p => q) -> (p -> q)"]) == 1
    out = capsys.readouterr().out
    assert "'p': 'i'" in out and "'q': '0'" in out
    assert main(["matrix3", "p -> p"]) == 0


def test_check_proof_on_shipped_corpus(capsys, tmp_path):
    corpus = load_corpus()
    path = tmp_path / "kmix.json"
    path.write_text(dump_proof(corpus["Kmix"]))
    assert main(["check-proof", "--system", "s", str(path)]) == 0
    assert "accepted" in capsys.readouterr().out

    broken = json.loads(dump_proof(corpus["Kmix"]))
    broken["steps"][0]["formula"] = "q -> q"
    path.write_text(json.dumps(broken))
    assert main(["check-proof", str(path)]) == 1
    assert "rejected at step 0" in capsys.readouterr().out


def test_deduce_round_trip(capsys, tmp_path):
    proof = {
        "system": "s",
        "hypotheses": ["p", "p => q"],
        "steps": [
            {"formula": "p", "by": {"hyp": 0}},
            {"formula": "p => q", "by": {"hyp": 1}},
            {"formula": "q", "by": {"rule": "MP", "from": [0, 1]}},
        ],
    }
    path = tmp_path / "proof.json"
    path.write_text(json.dumps(proof))
    assert main(["deduce", "--hypothesis", "p", str(path)]) == 0
    out = capsys.readouterr().out
    transformed = load_proof(out)
    assert check_proof(transformed).accepted
    assert transformed.conclusion == parse_formula("p => q")


def test_translate(capsys):
    assert main(["translate", "--to", "box", "p => q"]) == 0
    assert capsys.readouterr().out.strip() == "[]p -> q"
    assert main(["translate", "--to", "sup", "[]p"]) == 0
    assert capsys.readouterr().out.strip() == "(p => bot) => bot"
    assert main(["translate", "--to", "box", "[]p"]) == 2


def test_transform_model(capsys, tmp_path):
    path = tmp_path / "m.json"
    path.write_text(
        json.dumps({"worlds": ["a", "b"], "order": [], "valuation": {"a": ["p"], "b": []}})
    )
    assert main(["transform-model", "--model", str(path), "--op", "add-base"]) == 0
    out = load_model(capsys.readouterr().out)
    assert out.base == "g" and len(out.worlds) == 3

    assert main(["transform-model", "--model", str(path), "--op", "truncate", "--world", "a"]) == 0
    cone = load_model(capsys.readouterr().out)
    assert cone.worlds == ("a",)


def test_corpus_listing(capsys):
    assert main(["corpus"]) == 0
    out = capsys.readouterr().out
    assert "Kmix" in out and "BoxFix" in out


def test_stdin_model(capsys, monkeypatch, model_file):
    import io

    with open(model_file) as fh:
        text = fh.read()
    monkeypatch.setattr("sys.stdin", io.StringIO(text))
    assert main(["eval", "p", "--model", "-", "--world", "w"]) == 0


def test_missing_file_is_usage_error(capsys):
    assert main(["check-proof", "/nonexistent/proof.json"]) == 2
    assert main(["eval", "p", "--model", "/nonexistent.json", "--world", "g"]) == 2


def test_claims_report(capsys):
    assert main(["--json", "paper-verify"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert {row["claim"] for row in rows} >= {
        "persistence",
        "soundness-s",
        "or-indispensable",
        "x3-divergence",
        "s-t-incomparability",
    }
    assert all(row["status"] in ("pass", "unresolved") for row in rows)


def test_module_entry_point():
    import subprocess
    import sys

    run = subprocess.run(
        [sys.executable, "-m", "duolog.cli", "parse", "p => (q -> r)"],
        capture_output=True,
        text=True,
    )
    assert run.returncode == 0
    assert run.stdout.strip() == "p => (q -> r)"
