import csv
import io
import json
import math

import pytest

from rumorlab.analytics import diffusion_ft
from rumorlab.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_report_csv(text):
    rows = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(rows))))


class TestTheory:
    def test_diffusion_value(self, capsys):
        code, out, _ = run_cli(capsys, "theory", "--formula", "diffusion_ft",
                               "--d", "4", "--theta", "1")
        assert code == 0
        row = parse_report_csv(out)[0]
        assert float(row["value"]) == pytest.approx(0.5493, abs=1e-4)

    def test_ml_upper_value(self, capsys):
        code, out, _ = run_cli(capsys, "theory", "--formula", "trickle_ml_ub",
                               "--d", "4", "--theta", "1")
        assert float(parse_report_csv(out)[0]["value"]) == pytest.approx(0.6)

    def test_rc_constant_value(self, capsys):
        code, out, _ = run_cli(capsys, "theory", "--formula", "rc_constant", "--d", "3")
        assert float(parse_report_csv(out)[0]["value"]) == pytest.approx(0.25)

    def test_grid_over_d(self, capsys):
        code, out, _ = run_cli(capsys, "theory", "--formula", "diffusion_ft",
                               "--d", "3,4,6", "--theta", "1")
        rows = parse_report_csv(out)
        assert [r["d"] for r in rows] == ["3", "4", "6"]

    def test_table2_layout(self, capsys):
        code, out, _ = run_cli(capsys, "theory", "--table2", "--d", "4", "--theta", "1")
        rows = parse_report_csv(out)
        assert len(rows) == 4
        assert {(r["estimator"], r["protocol"]) for r in rows} == {
            ("first-timestamp", "trickle"),
            ("first-timestamp", "diffusion"),
            ("maximum-likelihood", "trickle"),
            ("maximum-likelihood", "diffusion"),
        }

    def test_config_header_present(self, capsys):
        _, out, _ = run_cli(capsys, "theory", "--formula", "spy_ft_lb", "--p", "0.3")
        header = out.splitlines()[0]
        assert header.startswith("# config ")
        cfg = json.loads(header[len("# config "):])
        assert cfg["formula"] == "spy_ft_lb"

    def test_missing_formula_is_runtime_error(self, capsys):
        code, _, err = run_cli(capsys, "theory")
        assert code == 1
        assert "formula" in err


class TestUsageErrors:
    def test_missing_required_flag_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["simulate"])  # --protocol required
        assert exc.value.code == 2

    def test_unknown_estimator_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["simulate", "--protocol", "trickle", "--estimator", "psychic"])
        assert exc.value.code == 2

    def test_runtime_error_exits_1(self, capsys):
        code, _, err = run_cli(capsys, "ingest", "--input", "/nonexistent/file")
        assert code == 1
        assert err


class TestSimulate:
    def test_report_roundtrip_and_determinism(self, tmp_path, capsys):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        argv = ["simulate", "--protocol", "diffusion", "--estimator", "first-timestamp",
                "--d", "4", "--theta", "1", "--trials", "400", "--seed", "7"]
        assert main(argv + ["--out", str(out1)]) == 0
        assert main(argv + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        row = parse_report_csv(out1.read_text())[0]
        assert row["protocol"] == "diffusion"
        assert int(row["trials"]) == 400
        p_hat = float(row["p_hat"])
        assert float(row["ci_low"]) <= p_hat <= float(row["ci_high"])
        assert int(row["hits"]) == round(p_hat * 400)

    def test_thm3_setting_matches_formula(self, tmp_path):
        out = tmp_path / "thm3.csv"
        assert main(["simulate", "--protocol", "diffusion", "--d", "4", "--theta", "1",
                     "--root-degree", "2", "--trials", "3000", "--seed", "7",
                     "--out", str(out)]) == 0
        row = parse_report_csv(out.read_text())[0]
        assert abs(float(row["p_hat"]) - diffusion_ft(4, 1).value) < 0.04

    def test_json_format_mirrors_csv_fields(self, capsys):
        code, out, _ = run_cli(capsys, "simulate", "--protocol", "trickle",
                               "--d", "3", "--theta", "1", "--trials", "50",
                               "--seed", "1", "--format", "json")
        data = json.loads(out)
        assert data["rows"][0]["protocol"] == "trickle"
        assert "p_hat" in data["rows"][0]

    def test_dump_trace(self, tmp_path):
        dump = tmp_path / "trace.csv"
        assert main(["simulate", "--protocol", "trickle", "--d", "3", "--theta", "1",
                     "--t", "5", "--trials", "10", "--seed", "3",
                     "--dump-trace", str(dump), "--out", str(tmp_path / "r.csv")]) == 0
        lines = dump.read_text().splitlines()
        assert lines[0] == "node,X,first_report_time,parent"
        assert len(lines) > 1


class TestSweepAndCompare:
    def test_loaded_snapshot_per_theta_report(self, tmp_path):
        edges = tmp_path / "snap.edges"
        edges.write_text("\n".join(f"{i} {(i + 1) % 20}" for i in range(20)) + "\n")
        out = tmp_path / "snap.csv"
        assert main(["sweep", "--protocol", "trickle", "--graph", "file",
                     "--graph-file", str(edges), "--theta", "1",
                     "--axis", "theta", "--values", "1,2", "--trials", "100",
                     "--seed", "4", "--out", str(out)]) == 0
        rows = parse_report_csv(out.read_text())
        assert len(rows) == 2
        assert all(0 <= float(r["p_hat"]) <= 1 for r in rows)

    def test_sweep_rows(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert main(["sweep", "--protocol", "diffusion", "--d", "4", "--theta", "1",
                     "--axis", "theta", "--values", "1,2,4", "--trials", "300",
                     "--seed", "5", "--out", str(out)]) == 0
        rows = parse_report_csv(out.read_text())
        assert [r["axis_value"] for r in rows] == ["1.0", "2.0", "4.0"]
        for row in rows:
            assert float(row["theory"]) == pytest.approx(
                diffusion_ft(4, float(row["axis_value"])).value
            )

    def test_compare_long_format(self, tmp_path):
        out = tmp_path / "cmp.csv"
        assert main(["compare", "--protocol", "trickle", "--d", "4", "--theta", "1",
                     "--axis", "theta", "--values", "1,2", "--trials", "400",
                     "--seed", "6", "--out", str(out)]) == 0
        rows = parse_report_csv(out.read_text())
        assert len(rows) == 4
        protocols = {r["protocol"] for r in rows}
        assert protocols == {"trickle", "diffusion"}
        for row in rows:
            if row["protocol"] == "trickle":
                assert float(row["strict_win_rate"]) <= float(row["p_hat"])
            else:
                assert float(row["theory"]) == pytest.approx(
                    diffusion_ft(4, float(row["axis_value"])).value
                )


class TestIngest:
    def test_mapping_emitted(self, tmp_path, capsys):
        edges = tmp_path / "g.edges"
        edges.write_text("# snapshot\n5 9\n9 70\n")
        code, out, _ = run_cli(capsys, "ingest", "--input", str(edges))
        assert code == 0
        assert "# nodes=3 edges=2" in out
        body = [l for l in out.splitlines() if l and not l.startswith("#")]
        assert body[0] == "dense_id,original_id"
        assert body[1:] == ["0,5", "1,9", "2,70"]
