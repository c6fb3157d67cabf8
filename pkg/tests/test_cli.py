"""CLI dispatch, report determinism and witness verification tests."""

import json
import math
import subprocess
import sys

import pytest
import yaml

from levikit import report as rep
from levikit.cli import main, run_command
from levikit.errors import ConfigError

BALL_CFG = {
    "domain": {"variant": "ball", "dimension": 2,
               "center": [[0.0, 0.0], [0.0, 0.0]], "radius": 1.0},
    "samples": 60,
    "seed": 0,
}

HARTOGS_E = math.e
HARTOGS_CFG = {
    "domain": {"variant": "reinhardt_union", "dimension": 2,
               "members": [{"radii": [HARTOGS_E, HARTOGS_E ** 2]},
                           {"radii": [HARTOGS_E ** 2, HARTOGS_E]}]},
}


def test_classify_ball_reports_strict():
    report, code = run_command("classify", dict(BALL_CFG))
    assert code == 0
    assert report["summary"] == "strictly pseudoconvex at 60/60 points"
    assert not report["has_witnesses"]


def test_reinhardt_hartogs_exits_with_witness():
    report, code = run_command("reinhardt", dict(HARTOGS_CFG))
    assert code == 2
    keys = {r["key"] for r in report["records"]}
    assert "witness" in keys
    assert rep.verify_report(report).passed


def test_malformed_expression_is_a_config_error():
    cfg = {"domain": {"variant": "sublevel", "dimension": 1,
                      "expression": "ln(abs(z1)", "level": 0.0},
           "samples": 5}
    with pytest.raises(ConfigError, match="position"):
        run_command("classify", cfg)


def test_unknown_config_key_is_rejected_with_path():
    cfg = dict(BALL_CFG)
    cfg["samplez"] = 3
    with pytest.raises(ConfigError, match="samplez"):
        run_command("classify", cfg)


def test_verify_detects_corrupted_witness():
    report, _ = run_command("reinhardt", dict(HARTOGS_CFG))
    tampered = json.loads(rep.report_bytes(report))
    for record in tampered["records"]:
        if record["key"] == "witness":
            record["midpoint"] = [-5.0, -5.0]
    result = rep.verify_report(tampered)
    assert not result.passed
    assert result.failures[0][0] == "witness"


def test_verify_rejects_unsupported_schema_version(tmp_path):
    report, _ = run_command("reinhardt", dict(HARTOGS_CFG))
    report["schema_version"] = 99
    path = tmp_path / "bad_schema.json"
    rep.write_report(report, path)
    with pytest.raises(Exception, match="schema version"):
        rep.load_report(path)


def test_verify_catches_tampering_in_every_witness_kind():
    # classify: eigenvalue flipped negative
    report, _ = run_command("classify", dict(BALL_CFG))
    bad = json.loads(rep.report_bytes(report))
    target = next(r for r in bad["records"] if r["key"].startswith("point"))
    target["eigenvalues"] = [-1.0]
    target["min_eigenvalue"] = -1.0
    result = rep.verify_report(bad)
    assert not result.passed and result.failures[0][0] == target["key"]

    # log-distance probe: witness radius inflated past the deficit
    probe, _ = run_command("log-distance-probe", dict(HARTOGS_CFG, trials=1000,
                                                      seed=0))
    bad = json.loads(rep.report_bytes(probe))
    for record in bad["records"]:
        if record["key"].startswith("violation"):
            record["point"] = [[0.1, 0.0], [0.1, 0.0]]  # deep interior point
    result = rep.verify_report(bad)
    assert not result.passed

    # disc probe: witness moved inside the domain
    disc_cfg = {"domain": {"variant": "sublevel", "dimension": 2,
                           "expression": "1 - abs2(z1) - abs2(z2)", "level": 0.0},
                "disc_family": {"variant": "hartogs", "r": 1.0, "dimension": 2,
                                "j_min": 2, "j_max": 8}}
    disc_report, _ = run_command("disc-probe", disc_cfg)
    bad = json.loads(rep.report_bytes(disc_report))
    for record in bad["records"]:
        if record["key"] == "violation":
            record["witness"] = [[5.0, 0.0], [0.0, 0.0]]
    result = rep.verify_report(bad)
    assert not result.passed and result.failures[0][0] == "violation"

    # hull: certificate offset corrupted
    hull_cfg = {"kind": "affine", "is_complex": False,
                "points": [[0, 0], [1, 0], [1, 1], [0, 1]],
                "queries": [[5.0, 0.0]], "functionals": 200}
    hull_report, _ = run_command("hull", hull_cfg)
    bad = json.loads(rep.report_bytes(hull_report))
    for record in bad["records"]:
        if record.get("verdict") == "Outside":
            record["certificate"]["direction"] = [0.0, 1.0]
    result = rep.verify_report(bad)
    assert not result.passed


def test_verify_passes_vacuously_without_witnesses():
    mono = {"domain": {"variant": "reinhardt_union", "dimension": 2,
                       "members": [{"radii": [1.0, 1.0]}]},
            "trials": 500}
    report, code = run_command("reinhardt", mono)
    assert code == 0
    result = rep.verify_report(report)
    assert result.passed and result.checked == 0


def test_reports_are_byte_identical_across_runs():
    a, _ = run_command("classify", dict(BALL_CFG))
    b, _ = run_command("classify", dict(BALL_CFG))
    assert rep.canonical_bytes(a) == rep.canonical_bytes(b)


def test_reports_agree_across_worker_counts():
    cfg1 = dict(BALL_CFG, workers=1)
    cfg8 = dict(BALL_CFG, workers=8)
    a, _ = run_command("classify", cfg1)
    b, _ = run_command("classify", cfg8)
    assert a["records"] == b["records"]


def test_log_distance_probe_command_and_verify():
    cfg = dict(HARTOGS_CFG, trials=1000, seed=0)
    report, code = run_command("log-distance-probe", cfg)
    assert code == 2
    assert any(r["key"].startswith("violation") for r in report["records"])
    assert rep.verify_report(report).passed


def test_psh_test_command_spectral_and_circle():
    cfg = {"domain": BALL_CFG["domain"], "expression": "-(abs2(z1) + abs2(z2))",
           "mode": "spectral", "samples": 30}
    report, code = run_command("psh-test", cfg)
    assert code == 2
    assert rep.verify_report(report).passed
    cfg["mode"] = "circle"
    report2, code2 = run_command("psh-test", cfg)
    assert code2 == 2
    assert rep.verify_report(report2).passed


def test_disc_probe_command():
    cfg = {"domain": {"variant": "sublevel", "dimension": 2,
                      "expression": "1 - abs2(z1) - abs2(z2)", "level": 0.0},
           "disc_family": {"variant": "hartogs", "r": 1.0, "dimension": 2,
                           "j_min": 2, "j_max": 12}}
    report, code = run_command("disc-probe", cfg)
    assert code == 2
    assert rep.verify_report(report).passed
    cfg2 = {"domain": {"variant": "ball", "dimension": 2,
                       "center": [[0.0, 0.0], [0.0, 0.0]], "radius": 2.0},
            "disc_family": {"variant": "hartogs", "r": 1.0, "dimension": 2,
                            "j_min": 2, "j_max": 12}}
    report2, code2 = run_command("disc-probe", cfg2)
    assert code2 == 0 and not report2["has_witnesses"]


def test_hull_command_and_verify():
    cfg = {"kind": "affine", "is_complex": False,
           "points": [[0, 0], [1, 0], [1, 1], [0, 1]],
           "queries": [[0.5, 0.5], [2.0, 0.0]],
           "functionals": 300}
    report, code = run_command("hull", cfg)
    assert code == 2     # one Outside certificate
    verdicts = {r["key"]: r.get("verdict") for r in report["records"]}
    assert verdicts["query-0000"] == "Inside"
    assert verdicts["query-0001"] == "Outside"
    assert rep.verify_report(report).passed


def test_hull_command_reads_points_file(tmp_path):
    path = tmp_path / "k.txt"
    path.write_text("0.0,0.0\n1.0,0.0\n1.0,1.0\n0.0,1.0\n", encoding="utf-8")
    cfg = {"kind": "affine", "is_complex": False, "dimension": 2,
           "points_file": str(path), "queries": [[0.5, 0.5]],
           "functionals": 100}
    report, code = run_command("hull", cfg)
    assert code == 0
    assert report["records"][1]["verdict"] == "Inside"
    # the echoed config embeds the loaded points, so verify is self-contained
    assert len(report["config"]["points"]) == 4


def test_exhaustion_command():
    cfg = {"domain": BALL_CFG["domain"], "sequences": 4}
    report, code = run_command("exhaustion", cfg)
    assert code == 0
    assert rep.verify_report(report).passed


def test_selftest_command():
    report, code = run_command("derivative-selftest", {"samples": 3})
    assert code == 0
    assert rep.verify_report(report).passed


def test_cli_main_end_to_end(tmp_path, capsys):
    cfg_path = tmp_path / "ball.yaml"
    cfg_path.write_text(yaml.safe_dump(BALL_CFG), encoding="utf-8")
    out_path = tmp_path / "report.json"
    code = main(["classify", "--config", str(cfg_path), "--samples", "20",
                 "--out", str(out_path)])
    assert code == 0
    assert "strictly pseudoconvex at 20/20 points" in capsys.readouterr().out
    loaded = rep.load_report(out_path)
    assert loaded["config"]["samples"] == 20
    assert main(["verify", str(out_path)]) == 0


def test_cli_error_paths(tmp_path, capsys):
    assert main(["classify", "--config", str(tmp_path / "missing.yaml")]) == 1
    bad = tmp_path / "bad.yaml"
    bad.write_text(yaml.safe_dump({
        "domain": {"variant": "sublevel", "dimension": 1,
                   "expression": "ln(abs(z1)", "level": 0.0}}),
        encoding="utf-8")
    assert main(["classify", "--config", str(bad)]) == 1
    err = capsys.readouterr().err
    assert "position" in err


def test_shipped_configs_run():
    from pathlib import Path
    commands = {"ball_classify": "classify",
                "hartogs_reinhardt": "reinhardt",
                "hartogs_log_distance": "log-distance-probe",
                "polydisc_exhaustion": "exhaustion"}
    config_dir = Path(__file__).resolve().parent.parent / "configs"
    paths = sorted(config_dir.glob("*.yaml"))
    assert len(paths) == len(commands)
    for path in paths:
        cfg = yaml.safe_load(path.read_text(encoding="utf-8"))
        report, code = run_command(commands[path.stem], cfg)
        assert code in (0, 2)
        assert rep.verify_report(report).passed


def test_classify_polydisc_report_verifies_through_face_functions():
    cfg = {"domain": {"variant": "polydisc", "dimension": 2,
                      "center": [[0.0, 0.0], [0.0, 0.0]], "radii": [1.0, 2.0]},
           "samples": 40, "seed": 0}
    report, code = run_command("classify", cfg)
    assert code == 0
    result = rep.verify_report(report)
    assert result.passed and result.checked == 40
    face_indices = {r.get("face_index") for r in report["records"]
                    if r["key"].startswith("point")}
    assert face_indices == {0, 1}


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "levikit.cli", "derivative-selftest",
         "--samples", "2"],
        capture_output=True, text=True, check=True)
    assert "derivative self-test passed" in proc.stdout
