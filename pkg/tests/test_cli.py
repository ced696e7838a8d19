import json
import subprocess
import sys

import pytest

from qheine.cli import curve_to_csv, curve_to_svg, load_grid_config, main
from qheine.geomtest import boundary_curve, identity_map


def run_cli(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def run_json(capsys, *argv):
    rc, out, err = run_cli(capsys, *argv)
    return rc, json.loads(out), err


class TestEval:
    def test_phi_at_zero(self, capsys):
        rc, payload, _ = run_json(capsys, "eval", "--phi", "-a", "0.9", "-b", "0.7",
                                  "-c", "0.6", "-q", "0.8", "-z", "0")
        assert rc == 0
        assert payload["schema_version"] == 1
        assert payload["value"] == [1.0, 0.0]
        assert payload["terms_used"] == 1

    def test_gauss(self, capsys):
        rc, payload, _ = run_json(capsys, "eval", "--gauss", "-a", "1", "-b", "1",
                                  "-c", "2", "-q", "0.5", "-z", "0.5")
        assert rc == 0
        assert payload["value"][0] == pytest.approx(1.3862943611198906, rel=1e-11)

    def test_ratio_complex_z(self, capsys):
        rc, payload, _ = run_json(capsys, "eval", "--ratio", "shift_a", "-a", "0.99",
                                  "-b", "0.998", "-c", "0.98", "-q", "0.9",
                                  "-z", "0.3+0.4j")
        assert rc == 0
        assert payload["est_error"] is None

    def test_domain_error_exit_2(self, capsys):
        rc, out, err = run_cli(capsys, "eval", "--phi", "-a", "0.9", "-b", "0.7",
                               "-c", "0.6", "-q", "0.8", "-z", "1.5")
        assert rc == 2
        assert "DomainError" in err

    def test_bad_z_exit_2(self, capsys):
        rc, _, err = run_cli(capsys, "eval", "--phi", "-a", "0.9", "-b", "0.7",
                             "-c", "0.6", "-q", "0.8", "-z", "zzz")
        assert rc == 2


class TestIdentities:
    def test_pass(self, capsys):
        rc, payload, _ = run_json(capsys, "identities", "-a", "0.9", "-b", "0.7",
                                  "-c", "0.6", "-q", "0.8", "-z", "0.3")
        assert rc == 0
        assert payload["pass"] is True
        assert set(payload["residuals"]) == {"L2.1a", "L2.1b-first",
                                             "L2.1b-second", "Dq-relation"}

    def test_fail_with_absurd_tolerance(self, capsys):
        rc, payload, _ = run_json(capsys, "identities", "-a", "0.9", "-b", "0.7",
                                  "-c", "0.6", "-q", "0.8", "-z", "0.3",
                                  "--tol", "1e-30")
        assert rc == 1
        assert payload["pass"] is False


class TestGFractionAndMoments:
    def test_gfraction_fields(self, capsys):
        rc, payload, _ = run_json(capsys, "gfraction", "--variant", "shift_bc",
                                  "-a", "0.9", "-b", "0.7", "-c", "0.6",
                                  "-q", "0.8", "-N", "8")
        assert rc == 0
        assert payload["g"][1] == pytest.approx(0.75)
        assert len(payload["partial_numerators"]) == 7
        assert payload["argument_scale"] == 1.0

    def test_moments_pass(self, capsys):
        rc, payload, _ = run_json(capsys, "moments", "--variant", "shift_a",
                                  "-a", "0.99", "-b", "0.998", "-c", "0.98",
                                  "-q", "0.9", "-N", "12")
        assert rc == 0
        assert payload["totally_monotone"] is True
        assert payload["moments"][0] == 1.0
        assert payload["first_violation"] is None


class TestCheck:
    def test_hypothesis_failure_names(self, capsys):
        rc, payload, _ = run_json(capsys, "check", "--what", "hypothesis",
                                  "--variant", "shift_bc", "-a", "0.6", "-b", "0.7",
                                  "-c", "0.6", "-q", "0.8")
        assert rc == 1
        assert payload["violations"] == ["a-c>0"]

    def test_kq_route(self, capsys):
        rc, payload, _ = run_json(capsys, "check", "--what", "kq", "-a", "0.5",
                                  "-b", "0.5", "-c", "0.2", "-q", "0.5")
        assert rc == 0
        assert payload["route"] == "t1"

    def test_bn(self, capsys):
        rc, payload, _ = run_json(capsys, "check", "--what", "bn", "-a", "0.5",
                                  "-b", "0.5", "-c", "0.2", "-q", "0.5", "-N", "50")
        assert rc == 0
        assert payload["verdict"] == "decreasing_01"


class TestKq:
    def test_report(self, capsys):
        rc, payload, _ = run_json(capsys, "kq", "-a", "0.5", "-b", "0.5",
                                  "-c", "0.2", "-q", "0.5", "--radii", "16",
                                  "--angles", "16")
        assert rc == 0
        assert payload["max_ratio"] <= 1.0 + 1e-10
        assert len(payload["worst_z"]) == 2

    def test_failing_exit_code(self, capsys):
        rc, payload, _ = run_json(capsys, "kq", "-a", "0.1", "-b", "0.1",
                                  "-c", "0.9", "-q", "0.5", "--radii", "16",
                                  "--angles", "16")
        assert rc == 1
        assert payload["pass"] is False


class TestBoundaryAndFigures:
    def test_csv_format_and_determinism(self, capsys, tmp_path):
        out1, out2 = tmp_path / "c1.csv", tmp_path / "c2.csv"
        for out in (out1, out2):
            rc, _, _ = run_json(capsys, "boundary", "--map", "shift_a",
                                "-a", "0.99", "-b", "0.998", "-c", "0.98",
                                "-q", "0.9", "-r", "0.9", "-M", "512",
                                "--format", "csv", "--out", str(out))
            assert rc == 0
        b1, b2 = out1.read_bytes(), out2.read_bytes()
        assert b1 == b2
        lines = b1.decode().split("\n")
        assert lines[0] == "theta,re_w,im_w"
        assert len(lines) == 514  # header + 512 rows + trailing newline
        assert "\r" not in b1.decode()

    def test_csv_round_trips_17_digits(self):
        curve = boundary_curve(identity_map(), 0.5, 256)
        text = curve_to_csv(curve)
        row = text.split("\n")[5].split(",")
        k = 4
        assert float(row[1]) == curve.samples[k].real
        assert float(row[2]) == curve.samples[k].imag

    def test_svg_structure(self):
        curve = boundary_curve(identity_map(), 0.5, 256)
        svg = curve_to_svg(curve)
        assert svg.count("<polyline") == 1
        assert 'width="800" height="800"' in svg
        assert svg.count("<line") == 2
        # closed polyline: first point repeated at the end
        pts = svg.split('points="')[1].split('"')[0].split()
        assert pts[0] == pts[-1]

    def test_figure_5_unit_deviation_shrinks(self, capsys, tmp_path):
        rc, p50, _ = run_json(capsys, "figure", "5", "--format", "csv",
                              "--samples", "1024",
                              "--out", str(tmp_path / "f5_50.csv"))
        assert rc == 0
        rc, p500, _ = run_json(capsys, "figure", "5", "--c", "500",
                               "--format", "csv", "--samples", "1024",
                               "--out", str(tmp_path / "f5_500.csv"))
        assert rc == 0
        assert p500["max_unit_deviation"] < p50["max_unit_deviation"]

    def test_figure_2_svg(self, capsys, tmp_path):
        out = tmp_path / "fig2.svg"
        rc, payload, _ = run_json(capsys, "figure", "2", "--samples", "512",
                                  "--out", str(out))
        assert rc == 0
        assert payload["params"] == {"map": "shift_bc", "a": 0.9, "b": 0.7,
                                     "c": 0.6, "q": 0.8}
        svg = out.read_text()
        assert svg.count("<polyline") == 1


SCAN_CFG = """\
# comment line
a.min=0.3
a.max=0.9
a.steps=3
b.min=0.3
b.max=0.9
b.steps=3
c.min=0.1
c.max=0.7
c.steps=2
q.min=0.2
q.max=0.8
q.steps=2
tests.kq=false
curve.samples=512
"""


class TestScan:
    def test_config_parsing(self, tmp_path):
        cfg = tmp_path / "grid.cfg"
        cfg.write_text(SCAN_CFG)
        grid = load_grid_config(str(cfg))
        assert grid.a.steps == 3 and grid.c.steps == 2
        assert grid.run_kq is False and grid.run_bn is True
        assert grid.curve_samples == 512

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text(SCAN_CFG + "bogus.key=1\n")
        rc = main(["scan", "--config", str(cfg), "--out", str(tmp_path / "o.csv")])
        assert rc == 2

    def test_scan_csv_deterministic(self, capsys, tmp_path):
        cfg = tmp_path / "grid.cfg"
        cfg.write_text(SCAN_CFG)
        out1, out2 = tmp_path / "s1.csv", tmp_path / "s2.csv"
        rc, payload, _ = run_json(capsys, "scan", "--config", str(cfg),
                                  "--out", str(out1), "--threads", "1")
        assert rc == 0
        assert payload["points"] == 36
        rc, _, _ = run_json(capsys, "scan", "--config", str(cfg),
                            "--out", str(out2), "--threads", "1")
        assert rc == 0
        assert out1.read_bytes() == out2.read_bytes()


class TestEntryPoint:
    def test_module_invocation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "qheine.cli", "eval", "--phi", "-a", "0.9",
             "-b", "0.7", "-c", "0.6", "-q", "0.8", "-z", "0"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["value"] == [1.0, 0.0]

    def test_missing_subcommand_exits_2(self):
        proc = subprocess.run([sys.executable, "-m", "qheine.cli"],
                              capture_output=True, text=True)
        assert proc.returncode == 2
