"""End-to-end command-line behaviour."""

import pytest

from sawenum.cli import main
from sawenum.modseries import SeriesTable, read_series, write_series


def run(*argv):
    return main(list(argv))


class TestEnumerateOracleVerify:
    def test_enumerate_matches_oracle(self, tmp_path, capsys):
        a = tmp_path / "a.series"
        b = tmp_path / "b.series"
        assert run("enumerate", "--wmax", "3", "-o", str(a)) == 0
        assert run("oracle", "--nmax", "7", "-o", str(b)) == 0
        assert run("verify", str(a), str(b)) == 0
        assert "OK" in capsys.readouterr().out

    def test_verify_reports_first_mismatch(self, tmp_path, capsys):
        a = tmp_path / "a.series"
        b = tmp_path / "b.series"
        write_series(SeriesTable([1, 4, 12]), a)
        write_series(SeriesTable([1, 4, 13, 36]), b)
        assert run("verify", str(a), str(b)) == 1
        assert "n=2" in capsys.readouterr().out

    def test_verify_compares_over_the_overlap_only(self, tmp_path):
        a = tmp_path / "a.series"
        b = tmp_path / "b.series"
        write_series(SeriesTable([1, 4]), a)
        write_series(SeriesTable([1, 4, 12, 36]), b)
        assert run("verify", str(a), str(b)) == 0

    def test_exact_output_is_default_with_residues_opt_in(self, tmp_path):
        exact = tmp_path / "e.series"
        resid = tmp_path / "r.series"
        run("enumerate", "--wmax", "2", "-o", str(exact))
        run("enumerate", "--wmax", "2", "--residues", "-o", str(resid))
        assert read_series(exact).is_exact
        assert not read_series(resid).is_exact

    def test_no_prune_is_identical(self, tmp_path):
        a = tmp_path / "a.series"
        b = tmp_path / "b.series"
        run("enumerate", "--wmax", "2", "-o", str(a))
        assert run("enumerate", "--wmax", "2", "--no-prune", "-o", str(b)) == 0
        assert read_series(a).values == read_series(b).values

    def test_workers_give_byte_identical_files(self, tmp_path):
        a = tmp_path / "a.series"
        b = tmp_path / "b.series"
        run("enumerate", "--wmax", "3", "--workers", "1", "-o", str(a))
        run("enumerate", "--wmax", "3", "--workers", "2", "-o", str(b))
        assert a.read_bytes() == b.read_bytes()

    def test_oracle_metrics_writes_companion_files(self, tmp_path):
        out = tmp_path / "o.series"
        assert run("oracle", "--nmax", "5", "--metrics", "-o", str(out)) == 0
        for suffix in (".r2e", ".r2g", ".r2m"):
            t = read_series(str(out) + suffix)
            assert len(t) == 6 and t.is_exact


class TestBoxAndCrt:
    def test_box_engine_equals_box_oracle(self, tmp_path):
        a = tmp_path / "a.series"
        b = tmp_path / "b.series"
        assert run("box", "--width", "2", "--length", "3", "-o", str(a)) == 0
        assert run("box", "--width", "2", "--length", "3", "--oracle",
                   "-o", str(b)) == 0
        assert run("verify", str(a), str(b)) == 0

    def test_crt_reconstructs_residue_file(self, tmp_path):
        resid = tmp_path / "r.series"
        exact = tmp_path / "x.series"
        plain = tmp_path / "p.series"
        run("enumerate", "--wmax", "2", "--residues", "-o", str(resid))
        run("enumerate", "--wmax", "2", "-o", str(plain))
        assert run("crt", str(resid), "-o", str(exact)) == 0
        assert read_series(exact).values == read_series(plain).values


class TestAnalyzeFitRatios:
    def test_analyze_writes_csv(self, tmp_path, capsys):
        series = tmp_path / "s.series"
        csv = tmp_path / "da.csv"
        # exact (n+1) 3^n series: singular at 1/3 with exponent 2
        vals = [(n + 1) * 3**n for n in range(30)]
        write_series(SeriesTable(vals), series)
        assert run("analyze", "--series", str(series), "--order", "2",
                   "--inhomog", "0", "-o", str(csv)) == 0
        lines = csv.read_text().splitlines()
        assert any(line.startswith("inhomog_degree,") for line in lines)
        assert "0.3333333333333333" in capsys.readouterr().out

    def test_fit_writes_trajectory(self, tmp_path, capsys):
        series = tmp_path / "s.series"
        mu = 1 / 0.379052277752
        vals = [0] + [int(1.25 * mu**n * n ** (11 / 32)) for n in range(1, 30)]
        write_series(SeriesTable(vals), series)
        csv = tmp_path / "fit.csv"
        assert run("fit", "--series", str(series), "--model", "count",
                   "--k", "2", "--m", "1", "-o", str(csv)) == 0
        assert "inv_n,a0_estimate" in csv.read_text()

    def test_ratios_prints_f(self, capsys):
        assert run("ratios", "--A", "1.17704242", "--C", "0.771182",
                   "--D", "0.1081975", "--E", "0.339043") == 0
        out = capsys.readouterr().out
        f = float(out.strip().splitlines()[-1].split("=")[1])
        assert abs(f) < 1.5e-5


class TestErrorHandling:
    def test_unknown_flag_exits_nonzero(self):
        with pytest.raises(SystemExit) as exc:
            run("enumerate", "--bogus", "1", "-o", "x")
        assert exc.value.code != 0

    def test_unreadable_file(self, tmp_path, capsys):
        assert run("verify", str(tmp_path / "nope"), str(tmp_path / "nada")) == 2
        assert "error" in capsys.readouterr().err

    def test_malformed_series(self, tmp_path, capsys):
        bad = tmp_path / "bad.series"
        bad.write_text("0\tnot-a-number\n")
        assert run("crt", str(bad), "-o", str(tmp_path / "o")) == 2
        assert "error" in capsys.readouterr().err

    def test_zero_c_rejected(self, capsys):
        assert run("ratios", "--A", "1", "--C", "0", "--D", "1", "--E", "1") == 2
