"""
htk コマンドの統合テスト

問題ファイルから各サブコマンドを実行し、終了コードと出力を確かめる。
"""

import json

import pytest

from pyhtk.cli.htk import ExitCode, main, render_text
from pyhtk.parser.report import Report


def run(capsys, *argv):
    """main を実行して (終了コード, 標準出力, 標準エラー) を返す"""
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_spec(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


class TestAnalyze:
    """analyze サブコマンド"""

    def test_tp1(self, capsys, spec_dir):
        code, out, _ = run(capsys, "analyze", "--spec", str(spec_dir / "tp1.toml"), "--json")
        assert code == ExitCode.OK
        data = json.loads(out)
        results = data["results"]
        assert data["command"] == "analyze"
        assert len(results["circuits"]) == 1
        assert results["smoothness"]["verdict"] == "smooth"
        assert results["fixed_point_count"] == 2
        assert results["brute_force_count"] == 2
        assert results["gale_dual"] == {"d": 1, "vectors": [[1], [1]]}
        assert all(p["stabilizer_dimension"] == 1 for p in results["fixed_points"])

    def test_type_a2(self, capsys, spec_dir):
        code, out, _ = run(capsys, "analyze", "--spec", str(spec_dir / "a2.toml"), "--json")
        results = json.loads(out)["results"]
        assert code == ExitCode.OK
        assert len(results["circuits"]) == 3
        assert results["fixed_point_count"] == 3

    def test_orbifold(self, capsys, spec_dir):
        code, out, _ = run(capsys, "analyze", "--spec", str(spec_dir / "orbifold.toml"), "--json")
        results = json.loads(out)["results"]
        assert code == ExitCode.OK
        assert results["unimodular"] is False
        assert results["smoothness"]["verdict"] == "orbifold"
        assert results["fixed_point_count"] == 6

    def test_text_output(self, capsys, spec_dir):
        code, out, _ = run(capsys, "analyze", "--spec", str(spec_dir / "tp1.toml"))
        assert code == ExitCode.OK
        assert out.startswith("━━━ htk analyze ━━━")
        assert "smooth" in out
        assert "\x1b[" not in out

    def test_coloop_has_no_gale_dual(self, capsys, tmp_path):
        spec = write_spec(tmp_path, "coloop.toml", "[configuration]\nvectors = [[1, 0], [0, 1], [1, 0]]\n")
        code, out, _ = run(capsys, "analyze", "--spec", spec, "--json")
        results = json.loads(out)["results"]
        assert code == ExitCode.OK
        assert results["gale_dual"] is None
        assert results["fixed_point_count"] == 2


class TestRings:
    def test_tables(self, capsys, spec_dir):
        code, out, _ = run(capsys, "rings", "--spec", str(spec_dir / "tp1.toml"), "--json")
        assert code == ExitCode.OK
        results = json.loads(out)["results"]
        assert set(results) >= {"additive", "multiplicative", "elliptic"}
        products = [e["product"] for e in results["elliptic"]["table"]]
        assert "(th1*th2)*r^(0,0)" in products

    def test_oracle_mismatch_exit_code(self, capsys, spec_dir, monkeypatch):
        import pyhtk.runtime.branch_rings as branch_rings

        monkeypatch.setattr(branch_rings, "delta", lambda a, b: 0)
        code, _, err = run(capsys, "rings", "--spec", str(spec_dir / "tp1.toml"))
        assert code == ExitCode.ORACLE_MISMATCH
        assert "ORACLE_MISMATCH" in err


class TestHikita:
    """hikita サブコマンド"""

    def test_tp1_passes(self, capsys, spec_dir):
        code, out, _ = run(capsys, "hikita", "--spec", str(spec_dir / "tp1.toml"), "--json")
        assert code == ExitCode.OK
        results = json.loads(out)["results"]
        assert results["status"] == "PASS"
        assert sorted(results["verdicts"].values()) == [True, True, True]

    def test_output_is_deterministic(self, capsys, spec_dir, tmp_path):
        out_file = tmp_path / "tp1.json"
        spec = str(spec_dir / "tp1.toml")
        _, first, _ = run(capsys, "hikita", "--spec", spec, "--json", "--out", str(out_file))
        _, second, _ = run(capsys, "hikita", "--spec", spec, "--json")
        assert first == second
        assert out_file.read_text(encoding="utf-8") == first
        assert Report.from_json(first).command == "hikita"

    def test_family_sweep(self, capsys, spec_dir):
        code, out, _ = run(capsys, "hikita", "--spec", str(spec_dir / "family_sweep.toml"), "--json")
        results = json.loads(out)["results"]
        assert code == ExitCode.OK
        assert results["count"] == 64
        assert results["failed"] == []

    def test_non_unimodular_fails(self, capsys, tmp_path):
        spec = write_spec(
            tmp_path, "orbifold_v.toml", '[configuration]\nvectors = [[1, 0], [0, 1], [1, 2]]\nrole = "v"\n'
        )
        code, out, _ = run(capsys, "hikita", "--spec", spec)
        assert code == ExitCode.HIKITA_FAIL
        assert "FAIL" in out

    def test_non_generic_alpha(self, capsys, tmp_path):
        spec = write_spec(
            tmp_path, "flat.toml", 'alpha = ["1", "1"]\n[configuration]\nvectors = [[1], [1]]\nrole = "v"\n'
        )
        code, _, _ = run(capsys, "hikita", "--spec", spec)
        assert code == ExitCode.NON_GENERIC_ALPHA

    def test_alpha_length_checked(self, capsys, tmp_path):
        spec = write_spec(
            tmp_path, "short.toml", 'alpha = ["1"]\n[configuration]\nvectors = [[1], [1]]\nrole = "v"\n'
        )
        code, _, _ = run(capsys, "hikita", "--spec", spec)
        assert code == ExitCode.PARSE


class TestVerify:
    def test_tp1_passes(self, capsys, spec_dir):
        code, out, _ = run(
            capsys, "verify", "--spec", str(spec_dir / "tp1.toml"), "--samples", "20", "--json"
        )
        results = json.loads(out)["results"]
        assert results["failed"] == []
        assert code == ExitCode.OK
        names = {c["name"] for c in results["checks"]}
        assert {"e-moment", "e-moment-convergence", "fiber-scan", "moment-level-set"} <= names
        assert {"a-moment-real", "a-moment-preimage"} <= names
        assert "gamma-equivariance(1, 0)" in names

    def test_coarse_step_fails(self, capsys, spec_dir):
        code, out, _ = run(
            capsys, "verify", "--spec", str(spec_dir / "tp1.toml"), "--samples", "20", "--step", "0.1", "--json"
        )
        results = json.loads(out)["results"]
        assert code == ExitCode.CHECK_FAILED
        assert "e-moment" in results["failed"]


class TestPlot:
    def test_writes_svg(self, capsys, spec_dir, tmp_path):
        code, out, _ = run(capsys, "plot", "--spec", str(spec_dir / "tp1.toml"), "--out", str(tmp_path))
        assert code == ExitCode.OK
        for name in ("tp1_real.svg", "tp1_elliptic.svg"):
            assert (tmp_path / name).read_text(encoding="utf-8").lstrip().startswith("<?xml")

    def test_two_dimensional(self, capsys, spec_dir, tmp_path):
        code, _, _ = run(capsys, "plot", "--spec", str(spec_dir / "orbifold.toml"), "--out", str(tmp_path))
        assert code == ExitCode.OK
        assert (tmp_path / "orbifold_elliptic.svg").exists()

    def test_three_dimensional_is_unsupported(self, capsys, tmp_path):
        spec = write_spec(
            tmp_path, "tp3.toml", "[configuration]\nvectors = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]]\n"
        )
        code, _, _ = run(capsys, "plot", "--spec", spec, "--out", str(tmp_path))
        assert code == ExitCode.UNSUPPORTED_DIMENSION


class TestErrors:
    """終了コード"""

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "analyze", "--spec", str(tmp_path / "none.toml"))
        assert code == ExitCode.PARSE
        assert "PARSE" in err

    def test_degenerate(self, capsys, tmp_path):
        spec = write_spec(tmp_path, "bad.toml", "[configuration]\nvectors = [[2]]\n")
        code, _, _ = run(capsys, "analyze", "--spec", spec)
        assert code == ExitCode.DEGENERATE

    def test_not_spanning(self, capsys, tmp_path):
        spec = write_spec(tmp_path, "index2.toml", "[configuration]\nvectors = [[1, 0], [1, 2]]\n")
        code, _, _ = run(capsys, "analyze", "--spec", spec)
        assert code == ExitCode.DEGENERATE

    def test_unknown_command(self, capsys):
        with pytest.raises(SystemExit):
            main(["explode", "--spec", "x.toml"])

    def test_render_hikita_text(self):
        report = Report(
            "hikita",
            {
                "config": {"d": 1, "vectors": [[1], [1]]},
                "unimodular": True,
                "status": "PASS",
                "verdicts": {"circuit=coinvariant": True},
            },
        )
        text = render_text(report, color=True)
        assert "\x1b[32mPASS" in text
