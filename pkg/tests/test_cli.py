import json

import pytest

from privperturb import cli


def test_design_writes_report(tmp_path, capsys):
    rc = cli.main(["design", "--out", str(tmp_path)])
    assert rc == 0
    doc = json.loads((tmp_path / "design.json").read_text())
    assert doc["fixture"] == "nonconvex_trio"
    assert all(r["m_tilde"] == [0.0] for r in doc["plain"])
    assert all(abs(r["m_tilde"][0]) > 0 for r in doc["floored"])
    assert doc["matches_reference"] is False
    capsys.readouterr()


def test_privacy_report(tmp_path, capsys):
    rc = cli.main(["privacy", "--out", str(tmp_path)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "overall eps" in out
    doc = json.loads((tmp_path / "privacy.json").read_text())
    assert len(doc["per_agent_eps"]) == 3
    assert doc["overall_eps"] == max(doc["per_agent_eps"])


def test_sweep_csv(tmp_path, capsys):
    rc = cli.main(
        ["sweep", "--samples", "2", "--algorithms", "dgd", "--out", str(tmp_path)]
    )
    assert rc == 0
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert lines[0] == "sample,eps,ub,err_dgd,mtilde_1,mtilde_2,mtilde_3"
    assert len(lines) == 3
    capsys.readouterr()


def test_verify_ok(capsys):
    rc = cli.main(["verify"])
    assert rc == 0
    assert "ok" in capsys.readouterr().out


def test_usage_error_exit_code(tmp_path, capsys):
    rc = cli.main(["sweep", "--config", str(tmp_path / "nope.json")])
    assert rc == 2
    assert "usage error" in capsys.readouterr().err


def test_bad_subcommand_exit_code(capsys):
    rc = cli.main(["frobnicate"])
    assert rc == 2
    capsys.readouterr()


def test_reproduce_example(tmp_path, capsys):
    rc = cli.main(
        [
            "reproduce-example",
            "--samples",
            "2",
            "--algorithms",
            "dgd",
            "--out",
            str(tmp_path),
        ]
    )
    assert rc == 0
    assert (tmp_path / "design.json").exists()
    assert (tmp_path / "privacy.json").exists()
    assert (tmp_path / "sweep.csv").exists()
    capsys.readouterr()
