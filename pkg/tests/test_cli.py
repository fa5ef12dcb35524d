import json

import numpy as np
import pytest

from mrdd import (
    AppendixDSpec,
    gen_appendix_d,
    gen_counterexample_e,
    gen_typed,
    oracle_appendix_d,
    write_typed_csv,
)
from mrdd.cli import ingest, main
from mrdd.errors import EmptyInput, MissingColumn, ParseError


@pytest.fixture()
def typed_file(tmp_path):
    ts = gen_typed({0: 0.7, 2: 0.3}, n=4_000, seed=3)
    path = tmp_path / "sample.csv"
    write_typed_csv(ts, str(path))
    return str(path), ts


def run_cli(*argv):
    return main(list(argv))


class TestIngest:
    def test_basic(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("x,y\n0.5,1.0\n-0.25,0.0\n")
        data = ingest(str(path), cutoff=0.0)
        assert data.n == 2
        assert data.xs[1] == -0.25

    def test_missing_column(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("x,z\n0.5,1.0\n")
        with pytest.raises(MissingColumn):
            ingest(str(path), cutoff=0.0)

    def test_parse_error_carries_line(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("x,y\n0.5,1.0\noops,2.0\n")
        with pytest.raises(ParseError) as excinfo:
            ingest(str(path), cutoff=0.0)
        assert excinfo.value.line == 3

    def test_empty_file(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("x,y\n")
        with pytest.raises(EmptyInput):
            ingest(str(path), cutoff=0.0)

    def test_round_trip_preserves_columns(self, typed_file):
        path, ts = typed_file
        data = ingest(path, cutoff=0.0, col_d="d")
        assert np.array_equal(data.xs, ts.data.xs)
        assert np.array_equal(data.ys, ts.data.ys)
        assert np.array_equal(data.d, ts.data.d)

    def test_covariate_ingestion(self, typed_file):
        path, ts = typed_file
        data = ingest(path, cutoff=0.0, covariates=("x_star",))
        assert np.array_equal(data.covariates["x_star"], ts.x_star)


class TestAnalyze:
    def test_end_to_end_report(self, typed_file, tmp_path):
        path, _ = typed_file
        out = tmp_path / "report.json"
        code = run_cli(
            "analyze", path, "--cutoff", "0", "--y-min", "0", "--y-max", "1",
            "--boot", "64", "--seed", "7", "--out", str(out),
        )
        assert code == 0
        report = json.loads(out.read_text())
        assert report["schema_version"] == 1
        assert report["verdict"] in {"UseBounds", "PointIdentified", "DesignSuspect"}
        block = report["blocks"][0]
        for key in (
            "order", "discontinuity_t", "discontinuity_p", "r", "bandwidths",
            "point_estimate", "point_se", "identified_set", "ci_fixed_r", "ci_random_r",
        ):
            assert key in block, key
        lo, hi = block["identified_set"]
        assert block["ci_fixed_r"][0] <= lo and hi <= block["ci_fixed_r"][1]
        assert block["ci_random_r"][0] <= lo and hi <= block["ci_random_r"][1]

    def test_byte_identical_runs(self, typed_file, tmp_path):
        path, _ = typed_file
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            code = run_cli(
                "analyze", path, "--cutoff", "0", "--y-min", "0", "--y-max", "1",
                "--boot", "64", "--seed", "1", "--out", str(out),
            )
            assert code == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_worker_invariance(self, typed_file, tmp_path):
        path, _ = typed_file
        outs = []
        for name, workers in (("w1.json", "1"), ("w4.json", "4")):
            out = tmp_path / name
            run_cli(
                "analyze", path, "--cutoff", "0", "--y-min", "0", "--y-max", "1",
                "--boot", "64", "--seed", "1", "--workers", workers, "--out", str(out),
            )
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_sharp_and_fuzzy_blocks(self, typed_file, tmp_path):
        path, _ = typed_file
        out = tmp_path / "r.json"
        code = run_cli(
            "analyze", path, "--cutoff", "0", "--y-min", "0", "--y-max", "1",
            "--boot", "64", "--seed", "2", "--sharp", "--fuzzy", "--col-d", "d",
            "--out", str(out),
        )
        assert code == 0
        block = json.loads(out.read_text())["blocks"][0]
        assert block["sharp_set"] is not None
        # sharp refines the reported identified set
        assert block["sharp_set"][0] >= block["identified_set"][0] - 1e-9
        assert block["sharp_set"][1] <= block["identified_set"][1] + 1e-9
        assert block["fuzzy_status"] in {"Informative", "Degenerate", "Refuted"}

    def test_bad_alpha_exits_2(self, typed_file):
        path, _ = typed_file
        assert run_cli("analyze", path, "--cutoff", "0", "--y-min", "0", "--y-max", "1",
                       "--alpha", "1.5") == 2

    def test_missing_cutoff_exits_2(self, typed_file):
        path, _ = typed_file
        assert run_cli("analyze", path, "--y-min", "0", "--y-max", "1") == 2

    def test_missing_file_exits_3(self):
        assert run_cli("analyze", "/nonexistent.csv", "--cutoff", "0",
                       "--y-min", "0", "--y-max", "1") == 3

    def test_internal_error_exits_4(self, typed_file, monkeypatch):
        path, _ = typed_file
        from mrdd import cli as cli_mod
        from mrdd.errors import InternalError

        def boom(cfg, data):
            raise InternalError("invariant violated")

        monkeypatch.setattr(cli_mod, "build_report", boom)
        assert run_cli("analyze", path, "--cutoff", "0", "--y-min", "0", "--y-max", "1") == 4

    def test_duplicate_fraction_reported(self, typed_file, tmp_path):
        path, _ = typed_file
        out = tmp_path / "r.json"
        run_cli("analyze", path, "--cutoff", "0", "--y-min", "0", "--y-max", "1",
                "--boot", "64", "--seed", "3", "--out", str(out))
        report = json.loads(out.read_text())
        assert 0.0 <= report["duplicate_x_fraction"] < 0.01

    def test_config_file_and_flag_precedence(self, typed_file, tmp_path):
        path, _ = typed_file
        cfgfile = tmp_path / "run.cfg"
        cfgfile.write_text("cutoff = 0\ny_min = 0\ny_max = 1\nboot = 64\nseed = 5\norder = 0\n")
        out1 = tmp_path / "one.json"
        code = run_cli("analyze", path, "--config", str(cfgfile), "--out", str(out1))
        assert code == 0
        assert json.loads(out1.read_text())["blocks"][0]["order"] == 0
        out2 = tmp_path / "two.json"
        code = run_cli("analyze", path, "--config", str(cfgfile), "--order", "1", "--out", str(out2))
        assert code == 0
        assert json.loads(out2.read_text())["blocks"][0]["order"] == 1

    def test_json_config(self, typed_file, tmp_path):
        path, _ = typed_file
        cfgfile = tmp_path / "run.json"
        cfgfile.write_text(json.dumps({"cutoff": 0, "y_min": 0, "y_max": 1, "boot": 64}))
        out = tmp_path / "r.json"
        assert run_cli("analyze", path, "--config", str(cfgfile), "--out", str(out)) == 0

    def test_unknown_config_key_exits_2(self, typed_file, tmp_path):
        path, _ = typed_file
        cfgfile = tmp_path / "run.cfg"
        cfgfile.write_text("cutof = 0\n")
        assert run_cli("analyze", path, "--config", str(cfgfile)) == 2

    @pytest.mark.slow
    def test_end_to_end_against_oracle(self, tmp_path):
        # strongly manipulated sample: the protocol must reject the density
        # and the reported set must sit near the population bounds
        ts = gen_appendix_d(AppendixDSpec(p=0.3, lam=0.3, n=200_000, seed=4))
        sample = tmp_path / "d33.csv"
        write_typed_csv(ts, str(sample))
        out = tmp_path / "report.json"
        code = run_cli(
            "analyze", str(sample), "--cutoff", "0", "--y-min", "0", "--y-max", "1",
            "--type", "type2", "--order", "1", "--boot", "200", "--seed", "0",
            "--out", str(out),
        )
        assert code == 0
        report = json.loads(out.read_text())
        assert report["verdict"] == "UseBounds"
        row = oracle_appendix_d(0.3, 0.3)
        lo, hi = report["blocks"][0]["identified_set"]
        assert lo == pytest.approx(row.crude_lower, abs=0.03)
        assert hi == pytest.approx(row.crude_upper, abs=0.03)


class TestSimulate:
    def test_deterministic_output(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            code = run_cli(
                "simulate", "appendix-d", "--p", "0.1", "--lambda", "0.05",
                "--n", "1000", "--seed", "7", "--out", str(out),
            )
            assert code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_counterexample_monotone(self, tmp_path):
        out = tmp_path / "e.csv"
        code = run_cli("simulate", "counterexample-e", "--n", "1000", "--seed", "3",
                       "--out", str(out))
        assert code == 0
        from mrdd import read_typed_csv

        ts = read_typed_csv(str(out))
        assert ts.data.n == 1000
        assert np.all(ts.data.xs >= ts.x_star)

    def test_typed_shares(self, tmp_path, capsys):
        out = tmp_path / "t.csv"
        code = run_cli("simulate", "typed", "--share", "0=0.5", "--share", "2=0.5",
                       "--n", "2000", "--seed", "1", "--out", str(out))
        assert code == 0
        printed = capsys.readouterr().out
        assert "type shares" in printed and "manipulation fraction" in printed

    def test_unknown_dgp_exits_2(self, tmp_path):
        assert run_cli("simulate", "nope", "--out", str(tmp_path / "x.csv")) == 2


class TestOracle:
    def test_row2_values(self, capsys):
        assert run_cli("oracle", "--p", "0.1", "--lambda", "0.3") == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["crude"][0] == pytest.approx(0.032, abs=0.002)
        assert payload["crude"][1] == pytest.approx(0.190, abs=0.002)
        assert payload["r"] == pytest.approx(0.867, abs=0.002)

    def test_no_manipulation_degenerates_to_point(self, capsys):
        assert run_cli("oracle", "--p", "0", "--lambda", "0.2") == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["r"] == pytest.approx(1.0, abs=1e-9)
        for key in ("crude", "sharp"):
            assert payload[key][0] == pytest.approx(0.150, abs=0.001)
            assert payload[key][1] == pytest.approx(0.150, abs=0.001)


class TestPlotdata:
    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_cutoff_is_bin_edge(self, typed_file, tmp_path):
        path, _ = typed_file
        out = tmp_path / "bins.csv"
        code = run_cli("plotdata", path, "--cutoff", "0", "--bin-width", "0.25",
                       "--out", str(out))
        assert code == 0
        lines = out.read_text().strip().splitlines()
        header, rows = lines[0], lines[1:]
        assert header == "bin_left,bin_right,count,side,fitted_density"
        edges = sorted({float(r.split(",")[0]) for r in rows} | {float(r.split(",")[1]) for r in rows})
        assert any(abs(e) < 1e-12 for e in edges)
        sides = {r.split(",")[3] for r in rows}
        assert sides <= {"left", "right"}

    def test_counts_match_total(self, typed_file, tmp_path):
        path, ts = typed_file
        out = tmp_path / "bins.csv"
        run_cli("plotdata", path, "--cutoff", "0", "--bin-width", "0.5", "--out", str(out))
        rows = out.read_text().strip().splitlines()[1:]
        total = sum(int(r.split(",")[2]) for r in rows)
        assert total == ts.data.n

    def test_empty_input_exits_3(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("x,y\n")
        assert run_cli("plotdata", str(empty), "--cutoff", "0",
                       "--out", str(tmp_path / "o.csv")) == 3

    @pytest.mark.slow
    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_smooth_density_bins_near_cutoff(self, tmp_path):
        ts = gen_counterexample_e(1_000_000, seed=2)
        sample = tmp_path / "e.csv"
        write_typed_csv(ts, str(sample))
        out = tmp_path / "bins.csv"
        code = run_cli("plotdata", str(sample), "--cutoff", "0", "--bin-width", "0.01",
                       "--out", str(out))
        assert code == 0
        rows = [r.split(",") for r in out.read_text().strip().splitlines()[1:]]
        below = next(r for r in rows if abs(float(r[1])) < 1e-12)
        above = next(r for r in rows if abs(float(r[0])) < 1e-12)
        n_below, n_above = int(below[2]), int(above[2])
        se = np.sqrt(n_below + n_above)
        assert abs(n_above - n_below) < 3 * se
