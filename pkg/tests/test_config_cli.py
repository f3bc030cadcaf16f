import math
import os

import pytest

from envinf import ConfigError, load_config, load_problem
from envinf.cli import main, run

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")
INTRO = os.path.join(FIXTURES, "intro.cfg")


def write_cfg(tmp_path, body, name="case.cfg"):
    path = tmp_path / name
    path.write_text(body)
    return str(path)


BASE = """
[variables]
x1 = {lo}, {hi}, {res}

[functions]
phi = {phi}
psi = {psi}
omega = {omega}

[family]
{family}
"""


class TestLoadProblem:
    def test_intro_fixture_loads(self):
        prob = load_problem(INTRO)
        assert prob.variables == ("x1",)
        assert prob.grid.resolution == (2001,)
        assert prob.curve.domain.lo == 0.0 and prob.curve.domain.hi == 1.0

    def test_missing_psi_names_key(self, tmp_path):
        cfg = write_cfg(
            tmp_path,
            """
[variables]
x1 = 0, 1, 11

[functions]
phi = x1

[family]
kind = trig
""",
        )
        with pytest.raises(ConfigError, match="'psi'"):
            load_problem(cfg)

    def test_catalog_precondition_violation(self, tmp_path):
        cfg = write_cfg(
            tmp_path,
            BASE.format(lo=0, hi=1, res=11, phi="x1", psi="x1", omega="0",
                        family="kind = trig\nc = 0\nd = 0\ninterval = -2, 2"),
        )
        with pytest.raises(ConfigError, match="precondition"):
            load_problem(cfg)

    def test_prop11_threshold_at_load(self, tmp_path):
        cfg = write_cfg(
            tmp_path,
            BASE.format(lo=-1, hi=1, res=11, phi="x1", psi="abs(x1)", omega="0",
                        family="kind = prop11\nc = 1"),
        )
        with pytest.raises(ConfigError, match="precondition"):
            load_problem(cfg)

    def test_arithmetic_in_scalars(self, tmp_path):
        cfg = write_cfg(
            tmp_path,
            BASE.format(lo="-pi/2", hi="pi/2", res=11, phi="x1", psi="x1^2+1",
                        omega="0", family="kind = trig\nc = 1 + sqrt(2)"),
        )
        prob = load_problem(cfg)
        assert prob.grid.lo[0] == pytest.approx(-math.pi / 2)

    def test_unbounded_interval(self, tmp_path):
        cfg = write_cfg(
            tmp_path,
            BASE.format(lo=0, hi=1, res=11, phi="x1^2", psi="x1^2+1", omega="0",
                        family="kind = exp\ninterval = 0, inf"),
        )
        prob = load_problem(cfg)
        assert prob.curve.domain.hi == math.inf
        assert not prob.curve.domain.closed_hi

    def test_undeclared_variable_rejected(self, tmp_path):
        cfg = write_cfg(
            tmp_path,
            BASE.format(lo=0, hi=1, res=11, phi="x2", psi="x1", omega="0",
                        family="kind = trig"),
        )
        with pytest.raises(ConfigError, match="unknown identifier 'x2'"):
            load_problem(cfg)

    def test_expression_error_names_key(self, tmp_path):
        cfg = write_cfg(
            tmp_path,
            BASE.format(lo=0, hi=1, res=11, phi="1 +", psi="x1", omega="0",
                        family="kind = trig"),
        )
        with pytest.raises(ConfigError, match="'phi'"):
            load_problem(cfg)

    def test_missing_section(self, tmp_path):
        cfg = write_cfg(tmp_path, "[variables]\nx1 = 0, 1, 11\n")
        with pytest.raises(ConfigError, match=r"\[functions\]"):
            load_problem(cfg)


class TestRun:
    def test_duality_report_text(self):
        cfg = load_config(INTRO)
        code, text = run("duality", cfg)
        assert code == 0
        assert "inf_sup=1.0000" in text
        assert "sup_inf=0.5000" in text
        assert "gap=0.5000" in text
        assert "equality=false" in text

    def test_deterministic_output(self):
        cfg1 = load_config(INTRO)
        cfg2 = load_config(INTRO)
        assert run("duality", cfg1) == run("duality", cfg2)
        assert run("check", cfg1) == run("check", cfg2)

    def test_check_exit_codes(self, tmp_path):
        cfg = load_config(INTRO)
        code, _ = run("check", cfg)
        assert code == 2  # the intro curve fails the monotonicity hypothesis
        good = write_cfg(
            tmp_path,
            BASE.format(lo=-2, hi=2, res=201, phi="x1", psi="x1^2+1", omega="0",
                        family="kind = trig"),
        )
        code, _ = run("check", load_config(good))
        assert code == 0

    def test_envelope_cross_check(self, tmp_path):
        good = write_cfg(
            tmp_path,
            BASE.format(lo=-2, hi=2, res=101, phi="x1", psi="x1^2+1", omega="0",
                        family="kind = trig"),
        )
        code, text = run("envelope", load_config(good))
        assert code == 0
        assert "closed_form=used" in text

    def test_equilibrium_command(self, tmp_path):
        good = write_cfg(
            tmp_path,
            BASE.format(lo=-1, hi=1, res=201, phi="x1^2", psi="x1^2+1", omega="0",
                        family="kind = trig"),
        )
        code, text = run("equilibrium", load_config(good))
        assert code == 0
        assert "certified=true" in text

    def test_catalog_list(self):
        code, text = run("catalog-list", None)
        assert code == 0
        for name in ("trig", "prop11", "exp", "lipschitz"):
            assert f"kind = {name}" in text


class TestMain:
    def test_main_duality(self, capsys):
        assert main(["duality", INTRO]) == 0
        out = capsys.readouterr().out
        assert "gap=0.5000" in out

    def test_main_error_exit(self, capsys):
        assert main(["duality", "/nonexistent/path.cfg"]) == 1
        assert "error:" in capsys.readouterr().err

    def test_main_check_exit_two(self, capsys):
        assert main(["check", INTRO]) == 2

    def test_csv_flags(self, tmp_path, capsys):
        lam_csv = str(tmp_path / "lam.csv")
        assert main(["duality", INTRO, "--csv", lam_csv, "--lambda-grid", "65",
                     "--refine", "1"]) == 0
        header = open(lam_csv).readline().strip()
        assert header == "lambda,inner_inf"

    def test_envelope_csv_columns(self, tmp_path):
        cfg = write_cfg(
            tmp_path,
            BASE.format(lo=-1, hi=1, res=21, phi="x1", psi="x1^2+1", omega="0",
                        family="kind = trig"),
        )
        env_csv = str(tmp_path / "env.csv")
        assert main(["envelope", cfg, "--csv", env_csv]) == 0
        header = open(env_csv).readline().strip()
        assert header == "x1,phi_closed,phi_brute"
        rows = open(env_csv).read().strip().splitlines()
        assert len(rows) == 22

    def test_alternative_command(self, tmp_path, capsys):
        cfg = write_cfg(
            tmp_path,
            BASE.format(lo=-1, hi=1, res=101, phi="x1^2", psi="x1^2+1", omega="0",
                        family="kind = trig"),
        )
        assert main(["alternative", cfg]) == 0
        assert "outcome=assertion_a" in capsys.readouterr().out
