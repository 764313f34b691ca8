import csv
import json

import pytest

from facultymetrics.cli import main

import fixture_small


@pytest.fixture(scope="module")
def fixture_dir(tmp_path_factory):
    directory = tmp_path_factory.mktemp("cli_fixture")
    fixture_small.write_fixture(directory)
    return directory


def base_args(directory, *extra):
    return [
        "--roster", str(directory / "roster.csv"),
        "--pubs", str(directory / "publications.csv"),
        "--authors", str(directory / "authorships.csv"),
        "--config", str(directory / "config.json"),
        *extra,
    ]


def read_rows(path):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return list(csv.reader(fh))


def test_validate_clean_dataset(fixture_dir, capsys):
    code = main(["validate", *base_args(fixture_dir)])
    out = capsys.readouterr().out
    assert code == 0
    assert "0 error(s)" in out


def test_validate_reports_errors_with_exit_1(fixture_dir, tmp_path, capsys):
    bad = tmp_path / "roster.csv"
    rows = read_rows(fixture_dir / "roster.csv")
    rows.append(rows[-1])  # duplicate (researcher, year)
    with open(bad, "w", encoding="utf-8", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)
    code = main([
        "validate",
        "--roster", str(bad),
        "--pubs", str(fixture_dir / "publications.csv"),
        "--authors", str(fixture_dir / "authorships.csv"),
        "--config", str(fixture_dir / "config.json"),
    ])
    out = capsys.readouterr().out
    assert code == 1
    assert "duplicate" in out


def test_validate_missing_file_exit_2(fixture_dir, capsys):
    code = main([
        "validate",
        "--roster", str(fixture_dir / "nope.csv"),
        "--pubs", str(fixture_dir / "publications.csv"),
        "--authors", str(fixture_dir / "authorships.csv"),
        "--config", str(fixture_dir / "config.json"),
    ])
    assert code == 2


def test_missing_period_is_usage_error(fixture_dir, capsys):
    code = main([
        "validate",
        "--roster", str(fixture_dir / "roster.csv"),
        "--pubs", str(fixture_dir / "publications.csv"),
        "--authors", str(fixture_dir / "authorships.csv"),
    ])
    assert code == 2


def test_run_writes_all_reports(fixture_dir, tmp_path, capsys):
    out_dir = tmp_path / "out"
    code = main(["run", *base_args(fixture_dir), "--out", str(out_dir)])
    assert code == 0
    names = {p.name for p in out_dir.iterdir()}
    assert names == {
        "mobility_summary.csv", "recruitment.csv", "turnover.csv",
        "mobility.csv", "correlations.csv", "productivity.csv", "manifest.json",
    }
    rec = read_rows(out_dir / "recruitment.csv")
    assert rec[0] == [
        "university",
        "r11", "r11_rank_pct", "r12", "r12_rank_pct",
        "r21", "r21_rank_pct", "r22", "r22_rank_pct",
    ]
    bodies = rec[1:]
    assert bodies[-1][0] == "TOTAL"
    ranked = bodies[:-1]
    # Sorted descending by r11.
    values = [float(r[1]) for r in ranked]
    assert values == sorted(values, reverse=True)
    manifest = json.loads((out_dir / "manifest.json").read_text())
    assert manifest["counts"]["researchers"] == 22  # 25 minus the ART03 trio
    assert manifest["counts"]["eligible_universities"] == 2


def test_run_outputs_byte_deterministic(fixture_dir, tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["run", *base_args(fixture_dir), "--out", str(out_a)]) == 0
    assert main(["run", *base_args(fixture_dir), "--out", str(out_b)]) == 0
    for name in (
        "mobility_summary.csv", "recruitment.csv", "turnover.csv",
        "mobility.csv", "correlations.csv", "productivity.csv",
    ):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes(), name
    a = json.loads((out_a / "manifest.json").read_text())
    b = json.loads((out_b / "manifest.json").read_text())
    a.pop("timestamp"), b.pop("timestamp")
    assert a == b


def test_run_salary_rescaling_leaves_indicators_unchanged(fixture_dir, tmp_path):
    """Doubling every salary weight must not move any indicator; the
    manifest digest must still change."""
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["run", *base_args(fixture_dir), "--out", str(out_a)]) == 0

    doubled = tmp_path / "salaries.csv"
    rows = read_rows(fixture_dir / "salaries.csv")
    for row in rows[1:]:
        row[1] = str(2 * float(row[1]))
    with open(doubled, "w", encoding="utf-8", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(rows)
    assert main([
        "run", *base_args(fixture_dir), "--salaries", str(doubled), "--out", str(out_b),
    ]) == 0

    for name in ("recruitment.csv", "turnover.csv", "mobility.csv"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes(), name
    a = json.loads((out_a / "manifest.json").read_text())
    b = json.loads((out_b / "manifest.json").read_text())
    assert a["config_digest"] != b["config_digest"]


def test_run_period_flag_overrides_config(fixture_dir, tmp_path, capsys):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main([
        "run", *base_args(fixture_dir), "--period", "2008", "2012", "--out", str(out_a),
    ]) == 0
    assert main(["run", *base_args(fixture_dir), "--out", str(out_b)]) == 0
    assert (out_a / "recruitment.csv").read_bytes() == (out_b / "recruitment.csv").read_bytes()
    # Narrowing the window turns the 2011-2012 roster rows into invariant
    # violations: the run must refuse with a data error.
    code = main([
        "run", *base_args(fixture_dir), "--period", "2008", "2010",
        "--out", str(tmp_path / "c"),
    ])
    capsys.readouterr()
    assert code == 1


def test_no_positional_credit_flag_changes_output(fixture_dir, tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["run", *base_args(fixture_dir), "--out", str(out_a)]) == 0
    assert main([
        "run", *base_args(fixture_dir), "--no-positional-credit", "--out", str(out_b),
    ]) == 0
    assert (out_a / "recruitment.csv").read_bytes() != (out_b / "recruitment.csv").read_bytes()


def test_fss_output(fixture_dir, tmp_path):
    out = tmp_path / "fss.csv"
    assert main(["fss", *base_args(fixture_dir), "--out", str(out)]) == 0
    rows = read_rows(out)
    assert rows[0] == [
        "researcher_id", "sds_code", "rank", "t",
        "fss", "fss_salary_norm", "percentile", "fss_ratio",
    ]
    by_id = {r[0]: r for r in rows[1:]}
    assert len(by_id) == 22
    # Zero-output researcher: fss 0, worst percentile in their pool.
    assert float(by_id["c4"][4]) == 0.0
    assert by_id["a6"][3] == "5"  # five service years


def test_fss_identical_researchers_get_identical_percentiles(tmp_path):
    from conftest import write_inputs

    roster = [
        ["r1", 2008, "UA", "S1", "D1", "assistant"],
        ["r2", 2008, "UA", "S1", "D1", "assistant"],
        ["r3", 2008, "UA", "S1", "D1", "assistant"],
    ]
    pubs = [["p1", 2008, 4, "C1"], ["p2", 2008, 4, "C1"], ["p3", 2008, 2, "C1"]]
    auths = [["p1", 1, "UA", "r1"], ["p2", 1, "UA", "r2"], ["p3", 1, "UA", "r3"]]
    paths = write_inputs(tmp_path, roster, pubs, auths)
    out = tmp_path / "fss.csv"
    code = main([
        "fss",
        "--roster", str(paths[0]), "--pubs", str(paths[1]), "--authors", str(paths[2]),
        "--period", "2008", "2012",
        "--out", str(out),
    ])
    assert code == 0
    rows = read_rows(out)
    by_id = {r[0]: r for r in rows[1:]}
    assert by_id["r1"][6] == by_id["r2"][6]  # tied values, tied percentile


def test_synth_subcommand_roundtrip(tmp_path):
    spec = {
        "seed": 5, "n_universities": 3, "n_sds": 4, "n_researchers": 150,
        "period_start": 2008, "period_end": 2012,
        "hire_rate": 0.05, "transfer_rate": 0.04, "exit_rate": 0.03,
    }
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(spec))
    data_dir = tmp_path / "data"
    assert main(["synth", "--spec", str(spec_path), "--out", str(data_dir)]) == 0
    assert main([
        "validate",
        "--roster", str(data_dir / "roster.csv"),
        "--pubs", str(data_dir / "publications.csv"),
        "--authors", str(data_dir / "authorships.csv"),
        "--config", str(data_dir / "config.json"),
    ]) == 0
    out_dir = tmp_path / "reports"
    assert main([
        "run",
        "--roster", str(data_dir / "roster.csv"),
        "--pubs", str(data_dir / "publications.csv"),
        "--authors", str(data_dir / "authorships.csv"),
        "--config", str(data_dir / "config.json"),
        "--salaries", str(data_dir / "salaries.csv"),
        "--out", str(out_dir),
    ]) == 0
    assert (out_dir / "manifest.json").exists()


def test_thread_cap_env(fixture_dir, tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("FACULTYMETRICS_THREADS", "1")
    out_dir = tmp_path / "out"
    assert main(["run", *base_args(fixture_dir), "--out", str(out_dir)]) == 0
    monkeypatch.setenv("FACULTYMETRICS_THREADS", "bogus")
    assert main(["validate", *base_args(fixture_dir)]) == 0
    assert "FACULTYMETRICS_THREADS" in capsys.readouterr().err


def test_run_with_no_eligible_universities_writes_empty_reports(tmp_path, capsys):
    from conftest import write_inputs

    roster = [[f"r{i}", y, "UA", "S1", "D1", "assistant"]
              for i in range(5) for y in range(2008, 2013)]
    pubs = [["p1", 2008, 3, "C1"]]
    auths = [["p1", 1, "UA", "r0"]]
    paths = write_inputs(tmp_path / "data", roster, pubs, auths)
    out_dir = tmp_path / "out"
    code = main([
        "run",
        "--roster", str(paths[0]), "--pubs", str(paths[1]), "--authors", str(paths[2]),
        "--period", "2008", "2012",
        "--out", str(out_dir),
    ])
    out = capsys.readouterr().out
    assert code == 0
    assert "no university meets the eligibility thresholds" in out
    rec = read_rows(out_dir / "recruitment.csv")
    assert len(rec) == 1  # header only


def test_fss_zero_output_unique_minimum_gets_percentile_zero(fixture_dir, tmp_path):
    out = tmp_path / "fss.csv"
    assert main(["fss", *base_args(fixture_dir), "--out", str(out)]) == 0
    by_id = {r[0]: r for r in read_rows(out)[1:]}
    # c4 has no publications and is the unique minimum of its pool.
    assert float(by_id["c4"][4]) == 0.0
    assert by_id["c4"][6] == "0"
