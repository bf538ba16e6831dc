"""CSV ingestion, report assembly, plotting, and CLI exit codes."""

import json
import xml.etree.ElementTree as ET

import pytest

from pocbounds.cli import (
    ConfigError,
    CsvFormatError,
    Report,
    RunConfig,
    emit_plot_data,
    load_csv,
    main,
    run_analysis,
)

MAPPING = {"y": "y", "s": "s", "d": "d", "stratum": None}


def write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadCsv:
    def test_three_row_file(self, tmp_path):
        path = write(tmp_path, "y,s,d\n1,1,1\n,0,1\n0,1,0\n")
        data = load_csv(path, MAPPING)
        assert data.n == 3
        assert data.records[1].y is None
        assert (data.records[2].y, data.records[2].s, data.records[2].d) == (0, 1, 0)

    def test_non_binary_token(self, tmp_path):
        path = write(tmp_path, "y,s,d\n2,1,0\n")
        with pytest.raises(CsvFormatError, match=r"non-binary value '2' in column 'y' at row 2"):
            load_csv(path, MAPPING)

    def test_missing_outcome_with_selection(self, tmp_path):
        path = write(tmp_path, "y,s,d\n1,1,1\n,1,0\n")
        with pytest.raises(CsvFormatError, match="row 3"):
            load_csv(path, MAPPING)

    def test_outcome_present_without_selection(self, tmp_path):
        path = write(tmp_path, "y,s,d\n1,0,1\n")
        with pytest.raises(CsvFormatError, match="censored"):
            load_csv(path, MAPPING)

    def test_stratum_grouping(self, tmp_path):
        path = write(
            tmp_path,
            "y,s,d,g\n1,1,1,a\n0,1,0,a\n,0,1,b\n1,1,0,b\n0,1,1,a\n,0,0,b\n",
        )
        data = load_csv(path, {**MAPPING, "stratum": "g"})
        assert data.stratum_index == {"a": (0, 1, 4), "b": (2, 3, 5)}

    def test_missing_column(self, tmp_path):
        path = write(tmp_path, "y,s\n1,1\n")
        with pytest.raises(CsvFormatError, match="'d' not found"):
            load_csv(path, MAPPING)

    def test_header_required(self, tmp_path):
        path = write(tmp_path, "")
        with pytest.raises(CsvFormatError, match="header"):
            load_csv(path, MAPPING)

    def test_duplicate_mapping_rejected_directly(self, tmp_path):
        path = write(tmp_path, "y,s,d\n1,1,1\n")
        with pytest.raises(ConfigError, match="duplicate column mapping"):
            load_csv(path, {"y": "y", "s": "y", "d": "d", "stratum": None})


class TestRunConfig:
    def test_duplicate_mapping_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="duplicate column mapping"):
            RunConfig(input_path="x.csv", y_col="y", s_col="y", d_col="d")

    def test_level_and_reps_validated(self):
        with pytest.raises(ConfigError, match="level"):
            RunConfig(input_path="x", y_col="y", s_col="s", d_col="d", level=1.5)
        with pytest.raises(ConfigError, match="reps"):
            RunConfig(input_path="x", y_col="y", s_col="s", d_col="d", reps=1)

    def test_stratified_defaults_follow_stratum_column(self):
        cfg = RunConfig(input_path="x", y_col="y", s_col="s", d_col="d")
        assert cfg.use_strata is False
        cfg = RunConfig(input_path="x", y_col="y", s_col="s", d_col="d", stratum_col="g")
        assert cfg.use_strata is True
        with pytest.raises(ConfigError, match="without a stratum column"):
            RunConfig(input_path="x", y_col="y", s_col="s", d_col="d", stratified=True)


@pytest.fixture(scope="module")
def fixture_cfg(fixture_csv):
    return RunConfig(
        input_path=str(fixture_csv),
        y_col="y",
        s_col="s",
        d_col="d",
        stratum_col="course",
        reps=60,
        level=0.90,
        seed=11,
    )


@pytest.fixture(scope="module")
def fixture_report(fixture_cfg):
    return run_analysis(fixture_cfg)


class TestRunAnalysis:
    def test_report_round_trips_through_json(self, fixture_report):
        text = fixture_report.to_json()
        assert Report.from_json(text) == fixture_report

    def test_byte_identical_reruns(self, fixture_cfg, fixture_report):
        again = run_analysis(fixture_cfg)
        assert again.to_json() == fixture_report.to_json()

    def test_point_bounds_near_published_values(self, fixture_report):
        entry = fixture_report.unconditional
        assert abs(entry["A1_3"]["lb"] - 0.014) < 0.03
        assert abs(entry["A1_3"]["ub"] - 0.609) < 0.03
        assert abs(entry["A1_5"]["lb"] - 0.106) < 0.03
        assert abs(entry["A1_5"]["ub"] - 0.163) < 0.03

    def test_percentile_intervals_span_their_point_bounds(self, fixture_report):
        for a in ("A1_3", "A1_4", "A1_5"):
            entry = fixture_report.unconditional[a]
            assert entry["ci_lb"][0] <= entry["lb"] <= entry["ci_lb"][1]
            assert entry["ci_ub"][0] <= entry["ub"] <= entry["ci_ub"][1]

    def test_provenance_complete(self, fixture_report):
        provenance = fixture_report.provenance
        for key in ("tool_version", "input_sha256", "n_records", "seed", "reps", "level"):
            assert key in provenance
        assert provenance["n_records"] == 1769
        assert len(provenance["input_sha256"]) == 64

    def test_digest_tracks_input_bytes(self, tmp_path, fixture_csv):
        original = fixture_csv.read_bytes()
        copy_path = tmp_path / "copy.csv"
        copy_path.write_bytes(original)
        changed_path = tmp_path / "changed.csv"
        changed_path.write_bytes(original.replace(b"c1", b"c9", 1))
        base = dict(y_col="y", s_col="s", d_col="d", stratum_col="course", reps=10, seed=0)
        digest_orig = run_analysis(RunConfig(input_path=str(fixture_csv), **base)).provenance
        digest_same = run_analysis(RunConfig(input_path=str(copy_path), **base)).provenance
        digest_diff = run_analysis(RunConfig(input_path=str(changed_path), **base)).provenance
        assert digest_same["input_sha256"] == digest_orig["input_sha256"]
        assert digest_same["input_sha256"] != digest_diff["input_sha256"]

    def test_stratified_table_shape(self, fixture_report):
        block = fixture_report.stratified
        assert block["n_strata"] == 8
        rows = block["sets"]["A1_5"]["per_stratum"]
        assert len(rows) == 8
        for row in rows:
            assert set(row) >= {"stratum", "n", "weight", "lb", "ub", "ci_lb", "ci_ub"}
        assert sum(row["n"] for row in rows) == 1769

    def test_single_stratum_matches_unstratified(self, tmp_path):
        rows = ["y,s,d,g"]
        rows += ["1,1,1,only", "0,1,1,only", ",0,1,only", "0,1,0,only", "1,1,0,only", ",0,0,only"] * 20
        path = write(tmp_path, "\n".join(rows) + "\n")
        base = dict(y_col="y", s_col="s", d_col="d", stratum_col="g", reps=20, seed=1)
        with_strata = run_analysis(RunConfig(input_path=str(path), stratified=True, **base))
        without = run_analysis(RunConfig(input_path=str(path), stratified=False, **base))
        for a in ("A1_3", "A1_4", "A1_5"):
            assert with_strata.unconditional[a]["lb"] == without.unconditional[a]["lb"]
            agg = with_strata.stratified["sets"][a]["aggregate"]
            assert agg["lb"] == without.unconditional[a]["lb"]
            assert agg["ub"] == without.unconditional[a]["ub"]

    def test_selection_violation_warns_but_reports(self, tmp_path):
        # Control arm selects more often than treated: trim ratio above 1.
        rows = ["y,s,d"]
        rows += ["1,1,1", ",0,1", "0,1,0", "1,1,0"] * 30 + ["0,1,0"] * 30
        path = write(tmp_path, "\n".join(rows) + "\n")
        report = run_analysis(
            RunConfig(input_path=str(path), y_col="y", s_col="s", d_col="d", reps=20, seed=3)
        )
        assert any("restriction violated" in w for w in report.warnings)
        assert report.unconditional["A1_3"]["restriction_violated"]

    def test_numeric_fields_finite(self, fixture_report):
        json.dumps(fixture_report.to_dict(), allow_nan=False)

    def test_dropped_stratum_listed_in_report(self, tmp_path):
        rows = ["y,s,d,g"]
        rows += ["1,1,1,ok", "0,1,1,ok", ",0,1,ok", "0,1,0,ok", "1,1,0,ok", ",0,0,ok"] * 25
        rows += ["1,1,1,broken", "0,1,1,broken"]  # no control units
        path = write(tmp_path, "\n".join(rows) + "\n")
        report = run_analysis(
            RunConfig(input_path=str(path), y_col="y", s_col="s", d_col="d",
                      stratum_col="g", reps=20, seed=6)
        )
        dropped = {name: reason for name, reason in report.stratified["dropped"]}
        assert "broken" in dropped
        assert "no control units" in dropped["broken"]
        rows_a13 = report.stratified["sets"]["A1_3"]["per_stratum"]
        assert [row["stratum"] for row in rows_a13] == ["ok"]
        assert rows_a13[0]["weight"] == 1.0


class TestEmitPlotData:
    def test_svg_and_sidecar_echo_report(self, fixture_report, tmp_path):
        svg_path, sidecar_path = emit_plot_data(fixture_report, tmp_path / "bounds.svg")
        bars = json.loads(sidecar_path.read_text())["bars"]
        by_key = {(b["assumption_set"], b["group"]): b for b in bars}
        for a in ("A1_3", "A1_4", "A1_5"):
            assert by_key[(a, "unconditional")]["lb"] == fixture_report.unconditional[a]["lb"]
            assert by_key[(a, "unconditional")]["ub"] == fixture_report.unconditional[a]["ub"]
        root = ET.fromstring(svg_path.read_text())
        rects = [el for el in root.iter() if el.tag.endswith("rect") and "data-lb" in el.attrib]
        assert len(rects) == 6  # three sets, two groups
        for rect in rects:
            key = (rect.attrib["data-assumption-set"], rect.attrib["data-group"])
            assert float(rect.attrib["data-lb"]) == by_key[key]["lb"]
            assert float(rect.attrib["data-ub"]) == by_key[key]["ub"]

    def test_legend_order_is_canonical(self, fixture_report, tmp_path):
        _, sidecar_path = emit_plot_data(fixture_report, tmp_path / "o.svg")
        bars = json.loads(sidecar_path.read_text())["bars"]
        unconditional = [b["assumption_set"] for b in bars if b["group"] == "unconditional"]
        assert unconditional == ["A1_3", "A1_4", "A1_5"]

    def test_without_strata_only_one_group(self, fixture_csv, tmp_path):
        cfg = RunConfig(
            input_path=str(fixture_csv), y_col="y", s_col="s", d_col="d",
            reps=15, seed=2,
        )
        report = run_analysis(cfg)
        _, sidecar_path = emit_plot_data(report, tmp_path / "u.svg")
        bars = json.loads(sidecar_path.read_text())["bars"]
        assert {b["group"] for b in bars} == {"unconditional"}


class TestMainExitCodes:
    def test_success(self, fixture_csv, tmp_path, capsys):
        code = main([
            "--input", str(fixture_csv), "--y-col", "y", "--s-col", "s", "--d-col", "d",
            "--reps", "10", "--seed", "0", "--format", "text",
            "--output", str(tmp_path / "r.txt"),
        ])
        assert code == 0
        assert "A1_5" in (tmp_path / "r.txt").read_text()

    def test_parse_error_is_2(self, tmp_path, capsys):
        path = write(tmp_path, "y,s,d\n2,1,0\n")
        code = main(["--input", str(path), "--y-col", "y", "--s-col", "s", "--d-col", "d"])
        assert code == 2
        assert "non-binary" in capsys.readouterr().err

    def test_config_error_is_2(self, fixture_csv, capsys):
        code = main([
            "--input", str(fixture_csv), "--y-col", "y", "--s-col", "y", "--d-col", "d",
        ])
        assert code == 2

    def test_unknown_assumption_set_is_2(self, fixture_csv, capsys):
        code = main([
            "--input", str(fixture_csv), "--y-col", "y", "--s-col", "s", "--d-col", "d",
            "--assumptions", "A1_9",
        ])
        assert code == 2

    def test_fatal_runtime_error_is_1(self, tmp_path, capsys):
        # Structurally valid file whose estimation must fail: no control arm.
        path = write(tmp_path, "y,s,d\n1,1,1\n0,1,1\n,0,1\n")
        code = main(["--input", str(path), "--y-col", "y", "--s-col", "s", "--d-col", "d"])
        assert code == 1
        assert "no control units" in capsys.readouterr().err

    def test_json_stdout_round_trips(self, fixture_csv, capsys):
        code = main([
            "--input", str(fixture_csv), "--y-col", "y", "--s-col", "s", "--d-col", "d",
            "--reps", "8", "--seed", "4",
        ])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["schema_version"] == "1"
