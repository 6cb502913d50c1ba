from __future__ import annotations

import json

from fracperc.cli import main as cli


def test_generate_writes_level_counts(tmp_path):
    code = cli.main(["generate", "--p", "1.0", "--depth", "3", "--out", str(tmp_path)])

    assert code == cli.EXIT_PASS
    assert (tmp_path / "level_counts.csv").read_text(encoding="utf-8") == "n,count\n0,1\n1,4\n2,16\n3,64\n"
    payload = json.loads((tmp_path / "realization.json").read_text(encoding="utf-8"))
    assert payload["params"]["p"] == 1.0


def test_generate_rejects_invalid_probability():
    assert cli.main(["generate", "--p", "0"]) == cli.EXIT_CONFIG


def test_dims_exit_codes_follow_verdicts():
    assert cli.main(["dims", "--p", "1.0", "--depth", "4", "--trials", "20"]) == cli.EXIT_PASS
    assert cli.main(["dims", "--p", "1.0", "--depth", "4", "--trials", "2"]) == cli.EXIT_FAIL


def test_config_errors_exit_with_two():
    assert cli.main(["dims", "--p", "1.5"]) == cli.EXIT_CONFIG
    assert cli.main(["slices", "--p", "0.45", "--theta", "0.9"]) == cli.EXIT_CONFIG


def test_budget_abort_exits_with_three(monkeypatch, tmp_path):
    monkeypatch.setenv("FRACPERC_BUDGET__MAX_PAIRS", "10")

    code = cli.main(["distance", "--p", "1.0", "--depth", "3", "--trials", "1", "--out", str(tmp_path)])

    assert code == cli.EXIT_BUDGET
    payload = json.loads((tmp_path / "distance-certificate.json").read_text(encoding="utf-8"))
    assert payload["partial"] is True


def test_check_replays_stored_record(tmp_path):
    assert cli.main(["dims", "--p", "0.8", "--depth", "4", "--trials", "3", "--out", str(tmp_path)]) == cli.EXIT_FAIL

    record = tmp_path / "dimension-sweep.json"
    assert cli.main(["check", "--record", str(record)]) == cli.EXIT_PASS

    csv_path = tmp_path / "dimension-sweep.csv"
    lines = csv_path.read_text(encoding="utf-8").splitlines(keepends=True)
    fields = lines[1].split(",")
    fields[3] = str(int(fields[3]) + 1)
    lines[1] = ",".join(fields)
    csv_path.write_text("".join(lines), encoding="utf-8")
    assert cli.main(["check", "--record", str(record)]) == cli.EXIT_FAIL


def test_check_missing_record():
    assert cli.main(["check", "--record", "does-not-exist.json"]) == cli.EXIT_CONFIG


def test_check_validates_config_files(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"recipe": "slice-growth", "p": 0.9}), encoding="utf-8")
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"recipe": "dimension-sweep", "p": 0.7, "depth": 5, "trials": 3}), encoding="utf-8")

    assert cli.main(["check", "--config", str(bad)]) == cli.EXIT_CONFIG
    assert cli.main(["check", "--config", str(good)]) == cli.EXIT_PASS


def test_flags_map_onto_config_fields():
    args = cli.build_parser().parse_args(
        ["sums", "--probs", "0.8", "0.9", "--coeffs", "1", "2", "--seed", "7", "--contrast-p", "0.6"]
    )

    config = cli.config_from_args(args)

    assert config.recipe == "sum-certificate"
    assert config.probs == [0.8, 0.9]
    assert config.coeffs == [1.0, 2.0]
    assert config.master_seed == 7
    assert config.contrast_p == 0.6
