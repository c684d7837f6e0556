import csv
import io
import json
import math
from pathlib import Path

import pytest

from kerrblowup.cli import cmd_analytic, cmd_sweep, cmd_verify_bound, dumps, main, run_simulation
from kerrblowup.config import load_config, parse_config
from kerrblowup.errors import ConfigError, InapplicableBoundError

CONFIGS = Path(__file__).resolve().parents[1] / "demos" / "configs"

SECANT_TOML = """
[physical]
k = 1.0
theta = 0.0
L = 2.0
eps_l = [1.0, 0.0]
sigma = [-1.0, 0.0]

[ic]
c0 = [2.0, 0.0]
c1 = [2.0, 0.0]

[output]
timing = false
"""


def write(tmp_path, text, name="run.toml"):
    path = tmp_path / name
    path.write_text(text)
    return path


def nondim(r, s, z_max=2.0, c0=(2.0, 0.0), c1=(2.0, 0.0)):
    return {
        "nondimensional": {"z_max": z_max, "r": list(r), "s": list(s)},
        "ic": {"c0": list(c0), "c1": list(c1)},
        "output": {"timing": False},
    }


class TestConfig:
    def test_both_blocks_rejected(self):
        raw = nondim((1, 0), (-1, 0))
        raw["physical"] = {"k": 1, "L": 1, "eps_l": 1, "sigma": -1}
        with pytest.raises(ConfigError, match="mutually exclusive"):
            parse_config(raw)

    def test_field_diagnostics(self):
        with pytest.raises(ConfigError, match=r"physical\.k"):
            parse_config({"physical": {"k": "fast", "L": 1, "eps_l": 1, "sigma": -1}})
        with pytest.raises(ConfigError, match=r"ic\.c1"):
            parse_config({"ic": {"c0": [1, 0]}})

    def test_parse_error_has_line(self, tmp_path):
        path = write(tmp_path, "[physical]\nk = = 1\n")
        with pytest.raises(ConfigError, match="line 2"):
            load_config(path)

    def test_unknown_axis(self):
        raw = nondim((1, 0), (-1, 0))
        raw["sweep"] = {"axes": [{"name": "omega", "start": 0, "stop": 1, "count": 2}]}
        with pytest.raises(ConfigError, match="not a sweepable"):
            parse_config(raw)

    def test_axis_needs_constant_profile(self):
        raw = nondim((1, 0), (-1, 0))
        raw["nondimensional"]["s"] = {"kind": "polynomial", "coefficients": [[-1, 0], [0, 1]]}
        raw["sweep"] = {"axes": [{"name": "s.im", "start": 0, "stop": 1, "count": 2}]}
        with pytest.raises(ConfigError, match="constant"):
            parse_config(raw)

    def test_too_many_axes(self):
        raw = nondim((1, 0), (-1, 0))
        ax = {"name": "s.im", "start": 0, "stop": 1, "count": 2}
        raw["sweep"] = {"axes": [ax, ax, ax]}
        with pytest.raises(ConfigError, match="two axes"):
            parse_config(raw)

    @pytest.mark.parametrize("name", sorted(p.name for p in CONFIGS.glob("*.toml")))
    def test_demo_configs_parse(self, name):
        load_config(CONFIGS / name)


class TestSimulate:
    def test_secant_report(self, tmp_path):
        out, traj = tmp_path / "r.json", tmp_path / "t.csv"
        code = main(["simulate", "--config", str(write(tmp_path, SECANT_TOML)), "--out", str(out),
                     "--trajectory", str(traj), "--quiet"])
        assert code == 0
        rep = json.loads(out.read_text())
        assert rep["blew_up"] is True
        assert rep["z_star_estimate"] == pytest.approx(0.7854, abs=1e-4)
        assert rep["bound_closed_form"] == pytest.approx(1.2743, abs=1e-3)
        assert rep["hypotheses"]["passed"] is True
        assert "wall_time_s" not in rep
        with open(traj) as fh:
            header = next(csv.reader(fh))
        assert header == ["z", "Re_phi", "Im_phi", "Re_dphi", "Im_dphi", "u", "du", "ddu"]

    def test_linear_slab(self, tmp_path):
        text = SECANT_TOML.replace("sigma = [-1.0, 0.0]", "sigma = [0.0, 0.0]")
        out = tmp_path / "r.json"
        assert main(["simulate", "--config", str(write(tmp_path, text)), "--out", str(out), "--quiet"]) == 0
        rep = json.loads(out.read_text())
        assert rep["blew_up"] is False and rep["reason"] == "domain-end"
        assert rep["bounds"] is None and rep["bound_gamma"] is None
        assert rep["hypotheses"]["b_negative"] is False

    def test_malformed_exit_code(self, tmp_path):
        text = SECANT_TOML + "\n[nondimensional]\nz_max = 1.0\nr = 1.0\ns = -1.0\n"
        assert main(["simulate", "--config", str(write(tmp_path, text)), "--quiet"]) != 0

    def test_missing_file(self, tmp_path):
        assert main(["simulate", "--config", str(tmp_path / "nope.toml"), "--quiet"]) == 2

    def test_tol_override(self, tmp_path):
        out = tmp_path / "r.json"
        main(["simulate", "--config", str(write(tmp_path, SECANT_TOML)), "--out", str(out), "--tol", "1e-11", "--quiet"])
        rep = json.loads(out.read_text())
        assert rep["resolved_integrator"]["rel_tol"] == 1e-11
        assert rep["config"]["integrator"]["rel_tol"] == 1e-11

    def test_round_trip(self):
        cfg = parse_config(nondim((1, 0.1), (-1, 0.2), z_max=10.0))
        first, _ = run_simulation(cfg)
        again, _ = run_simulation(parse_config(json.loads(dumps(first))["config"]))
        for key in ("z_star_estimate", "z_reached", "bound_gamma", "bound_closed_form"):
            assert again[key] == pytest.approx(first[key], rel=1e-12)

    def test_byte_identical(self, tmp_path):
        path = write(tmp_path, SECANT_TOML)
        outs = []
        for i in range(2):
            out = tmp_path / f"r{i}.json"
            main(["simulate", "--config", str(path), "--out", str(out), "--quiet"])
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]


def sweep_raw(axes, **kw):
    raw = nondim((1, 0), (-1, 0), **kw)
    raw["sweep"] = {"axes": axes}
    return raw


class TestSweep:
    def test_imaginary_kerr(self):
        rows = cmd_sweep(parse_config(sweep_raw([{"name": "s.im", "start": 0, "stop": 1, "count": 11}])))
        assert len(rows) == 11
        assert all(r["blew_up"] for r in rows)
        assert all(r["z_star_estimate"] <= r["gamma"] for r in rows)
        assert [r["s.im"] for r in rows] == pytest.approx([i / 10 for i in range(11)])

    def test_real_kerr_gates_bounds(self):
        # large data keeps |c0|^2 > 2a/|b| on every negative grid value
        raw = sweep_raw([{"name": "s.re", "start": -1, "stop": 1, "count": 21}], c0=(20, 0), c1=(20, 0))
        rows = cmd_sweep(parse_config(raw))
        assert len(rows) == 21
        for r in rows:
            if r["s.re"] < -1e-9:
                assert r["gamma"] is not None and r["closed_form_bound"] is not None
            else:
                assert r["gamma"] is None and r["closed_form_bound"] is None

    def test_two_axes_row_major(self):
        axes = [{"name": "s.im", "start": 0, "stop": 0.5, "count": 3},
                {"name": "c0.abs", "start": 2, "stop": 3, "count": 3}]
        rows = cmd_sweep(parse_config(sweep_raw(axes)))
        assert len(rows) == 9
        assert [(r["s.im"], r["c0.abs"]) for r in rows] == pytest.approx(
            [(a, b) for a in (0, 0.25, 0.5) for b in (2, 2.5, 3)]
        )

    def test_physical_axes(self):
        raw = {
            "physical": {"k": 1.0, "theta": 0.0, "L": 2.0, "eps_l": [1.0, 0.0], "sigma": [-1.0, 0.0]},
            "ic": {"c0": [2, 0], "c1": [2, 0]},
            "sweep": {"axes": [{"name": "k", "start": 1, "stop": 2, "count": 2},
                               {"name": "phase_diff", "start": 0, "stop": 0.5, "count": 2}]},
        }
        rows = cmd_sweep(parse_config(raw))
        assert len(rows) == 4 and all(r["blew_up"] for r in rows)
        # larger k stretches the slab in nondimensional units, the pole stays at pi/4
        assert rows[2]["z_star_estimate"] == pytest.approx(math.pi / 4, abs=1e-4)

    def test_workers_do_not_change_output(self, tmp_path):
        path = CONFIGS / "sweep_im_s.toml"
        outs = []
        for workers in ("1", "3"):
            out = tmp_path / f"s{workers}.csv"
            assert main(["sweep", "--config", str(path), "--out", str(out), "--workers", workers, "--quiet"]) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
        rows = list(csv.DictReader(io.StringIO(outs[0].decode())))
        assert len(rows) == 11 and {r["blew_up"] for r in rows} == {"true"}


class TestVerifyBound:
    def test_secant(self):
        rep = cmd_verify_bound(parse_config(nondim((1, 0), (-1, 0))))
        assert rep["ordering_passed"]
        assert math.pi / 4 - 1e-4 <= rep["z_star_estimate"] <= rep["gamma_quadrature"] <= 1.2744

    def test_degenerate(self):
        rep = cmd_verify_bound(load_config(CONFIGS / "verify_degenerate.toml"))
        assert rep["ordering_passed"]
        assert rep["gamma_quadrature"] == pytest.approx(rep["gamma_closed_q"], rel=1e-3)

    def test_tiny_b(self):
        base = cmd_verify_bound(parse_config(nondim((0, 0), (-1, 0))))
        raw = nondim((0, 0), (-1e-6, 0), z_max=400.0)
        rep = cmd_verify_bound(parse_config(raw))
        assert rep["ordering_passed"]
        assert rep["closed_form_bound"] == pytest.approx(base["closed_form_bound"] * 100, rel=1e-12)
        assert rep["gamma_closed_q"] == pytest.approx(base["gamma_closed_q"] * 100, rel=1e-12)

    def test_tiny_b_with_positive_a_is_inapplicable(self, tmp_path):
        with pytest.raises(InapplicableBoundError):
            cmd_verify_bound(parse_config(nondim((1, 0), (-1e-6, 0))))
        text = SECANT_TOML.replace("sigma = [-1.0, 0.0]", "sigma = [-1e-6, 0.0]")
        assert main(["verify-bound", "--config", str(write(tmp_path, text)), "--quiet"]) == 3

    def test_glassey_block(self):
        rep = cmd_verify_bound(parse_config({"glassey": {"alpha": 2, "beta": 4, "a": 1, "b": -1}}))
        assert rep["z_star_estimate"] is None and rep["ordering_passed"]


class TestAnalytic:
    def test_summary(self, tmp_path, capsys):
        out = tmp_path / "a.csv"
        assert main(["analytic", "--config", str(CONFIGS / "analytic.toml"), "--out", str(out)]) == 0
        text = capsys.readouterr().out
        assert "z_star = 0.7853981634" in text
        assert "A = 1.414213562" in text
        assert "L_star_over_z_star = 1.6226" in text
        summary, table = cmd_analytic(load_config(CONFIGS / "analytic.toml"))
        assert summary["L_star_over_z_star"] == pytest.approx(1.622, abs=1e-3)
        rows = list(csv.DictReader(io.StringIO(table)))
        assert len(rows) == 201
        assert max(float(r["relative_residual"]) for r in rows) <= 1e-10

    def test_focusing_rejected(self, tmp_path):
        text = "[analytic]\neps_l = 1.0\nsigma = 1.0\n"
        assert main(["analytic", "--config", str(write(tmp_path, text)), "--quiet"]) == 2


def test_check(tmp_path, capsys):
    assert main(["check", "--config", str(CONFIGS / "lossy.toml")]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["hypotheses"]["passed"] and rep["profile"]["b"] == -1.0
