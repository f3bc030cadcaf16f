import math

import numpy as np
import pytest

from envinf import (
    GridDomain,
    Interval,
    build_g_profile,
    brute_values,
    closed_form_values,
    envelope_brute,
    envelope_closed_form,
    exp_family,
    h_select,
    make_selector,
    parse,
    trig_family,
)
from envinf.problem import values_at
from tests.conftest import make_problem


@pytest.fixture
def identity_selector(identity_curve):
    return make_selector(build_g_profile(identity_curve), "i3")


@pytest.fixture
def trig_selector(trig_curve):
    return make_selector(build_g_profile(trig_curve), "i4")


class TestHSelect:
    def test_clamp_low_i3(self, identity_selector):
        assert h_select(identity_selector, -0.5) == 0.0

    def test_clamp_high_i3(self, identity_selector):
        assert h_select(identity_selector, 2.0) == 1.0

    def test_pure_inverse_branch(self, trig_selector):
        assert h_select(trig_selector, 1.0) == pytest.approx(-math.pi / 4, abs=1e-10)

    def test_clamp_table_i4(self):
        # decreasing ratio g = -lambda on (0, 1): low values clamp to b, high to a
        from envinf import ParamCurve

        curve = ParamCurve(parse("lambda"), parse("-lambda^2/2"), Interval(0, 1),
                           parse("1"), parse("-lambda"))
        h = make_selector(build_g_profile(curve), "i4")
        assert h_select(h, -2.0) == 1.0
        assert h_select(h, 0.5) == 0.0

    def test_selector_pairing_enforced(self, identity_curve):
        gp = build_g_profile(identity_curve)
        with pytest.raises(ValueError):
            make_selector(gp, "i4")

    def test_total_on_reals(self, trig_selector, identity_selector):
        for mu in (-1e308, -1e3, 0.0, 1e3, 1e308):
            assert math.isfinite(h_select(trig_selector, mu))
            assert math.isfinite(h_select(identity_selector, mu))

    def test_monotone_sweep(self, trig_selector, identity_selector):
        mus = np.linspace(-40, 40, 1001)
        hs = np.array([h_select(trig_selector, float(m)) for m in mus])
        assert np.all(np.diff(hs) <= 1e-12)  # i4: non-increasing
        hs = np.array([h_select(identity_selector, float(m)) for m in mus])
        assert np.all(np.diff(hs) >= -1e-12)  # i3: non-decreasing

    def test_inverts_g_on_interior(self, trig_selector):
        from envinf import g_value

        for lam in np.linspace(-math.pi / 2 + 0.05, math.pi / 2 - 0.05, 101):
            mu = g_value(trig_selector.profile.curve, float(lam))
            assert abs(h_select(trig_selector, mu) - lam) <= 1e-9


class TestClosedForm:
    def test_intro_values_by_brute(self, intro_problem):
        # hypotheses fail for the intro curve, so the closed form does not
        # apply; the brute route reproduces the piecewise formula
        assert envelope_brute(intro_problem, (0.5,)).value == pytest.approx(1.25, abs=1e-12)
        assert envelope_brute(intro_problem, (1.5,)).value == pytest.approx(1.5, abs=1e-12)

    def test_trig_hypotenuse(self, trig_selector):
        prob = make_problem("3", "4", "0", trig_selector.profile.curve, 0, 1, 3)
        out = envelope_closed_form(prob, trig_selector, (0.0,))
        assert out.value == pytest.approx(5.0, abs=1e-9)
        assert out.branch == "generic"

    def test_exp_family_value(self):
        entry = exp_family(Interval(0.0, 2.0))
        prob = make_problem("1", "2", "0", entry.curve, 0, 1, 3)
        h = make_selector(build_g_profile(entry.curve), "i4")
        out = envelope_closed_form(prob, h, (0.0,))
        assert out.value == pytest.approx(2 * math.exp(0.5), rel=1e-9)
        assert out.argmax_lambda == pytest.approx(0.5, abs=1e-9)

    def test_psi_zero_compact_is_exact_endpoint_max(self, trig_selector):
        prob = make_problem("2", "0", "0", trig_selector.profile.curve, 0, 1, 3)
        out = envelope_closed_form(prob, trig_selector, (0.0,))
        phi_v, _, om = values_at(prob, (0.0,))
        a = float(prob.curve.alpha_at(prob.curve.domain.lo))
        b = float(prob.curve.alpha_at(prob.curve.domain.hi))
        assert out.value == max(a * phi_v, b * phi_v) + om  # exact equality
        assert out.value == 2.0
        assert out.branch == "psi_zero"

    def test_whole_interval_tag(self, trig_selector):
        prob = make_problem("0", "0", "5", trig_selector.profile.curve, 0, 1, 3)
        out = envelope_closed_form(prob, trig_selector, (0.0,))
        assert out.value == 5.0
        assert out.tag == "whole_interval"
        brute = envelope_brute(prob, (0.0,))
        assert brute.value == 5.0 and brute.tag == "whole_interval"

    def test_psi_zero_unbounded_diverges(self):
        entry = exp_family(Interval(0.0, math.inf))
        prob = make_problem("1", "0", "0", entry.curve, 0, 1, 3)
        h = make_selector(build_g_profile(entry.curve), "i4")
        out = envelope_closed_form(prob, h, (0.0,))
        assert out.value == math.inf  # sup of e^lam * 1 over [0, inf)
        assert out.branch == "psi_zero"


class TestBrute:
    def test_intro_argmax_at_zero(self, intro_problem):
        out = envelope_brute(intro_problem, (1.5,))
        assert out.value == pytest.approx(1.5, abs=1e-12)
        assert out.argmax_lambda == pytest.approx(0.0, abs=1e-12)

    def test_trig_negative_phi(self, trig_curve):
        prob = make_problem("-3", "4", "0", trig_curve, 0, 1, 3)
        out = envelope_brute(prob, (0.0,))
        assert out.value == pytest.approx(5.0, rel=1e-9)

    def test_min_grid_size(self, intro_problem):
        with pytest.raises(ValueError):
            envelope_brute(intro_problem, (0.5,), lambda_grid_size=32)

    def test_exp_exhaustion_trace(self):
        entry = exp_family(Interval(0.0, math.inf))
        prob = make_problem("3", "1", "0", entry.curve, 0, 1, 3)
        out = envelope_brute(prob, (0.0,))
        assert out.value == pytest.approx(math.exp(3.0), rel=1e-9)
        assert 1 <= len(out.trace) <= 8
        values = [v for _, v in out.trace]
        assert all(b >= a for a, b in zip(values, values[1:]))  # non-decreasing


class TestDualRoute:
    def test_closed_vs_brute_on_catalog_instances(self, trig_problem, exp_problem):
        rng = np.random.default_rng(42)
        for prob, sign in ((trig_problem, "i4"), (exp_problem, "i4")):
            h = make_selector(build_g_profile(prob.curve), sign)
            lo, hi = prob.grid.lo[0], prob.grid.hi[0]
            xs = rng.uniform(lo, hi, size=1000)
            for x in xs:
                cf = envelope_closed_form(prob, h, (float(x),))
                bf = envelope_brute(prob, (float(x),))
                tol = 1e-6 * max(1.0, abs(cf.value))
                assert abs(cf.value - bf.value) <= tol

    def test_vectorized_closed_form_matches_pointwise(self, trig_problem):
        h = make_selector(build_g_profile(trig_problem.curve), "i4")
        grid = GridDomain((-2.0,), (2.0,), (101,), 0)
        vec = closed_form_values(trig_problem, h, grid)
        xs = grid.axes()[0]
        for i in (0, 13, 50, 87, 100):
            point = envelope_closed_form(trig_problem, h, (float(xs[i]),))
            assert vec[i] == pytest.approx(point.value, rel=1e-12, abs=1e-12)

    def test_brute_values_grid_matches_pointwise(self, intro_problem):
        grid = GridDomain((0.0,), (2.0,), (41,), 0)
        vec = brute_values(intro_problem, grid, 257, refine=False)
        xs = grid.axes()[0]
        for i in (0, 10, 20, 30, 40):
            # grid supremum only: compare against the same lambda grid
            lams = np.linspace(0, 1, 257)
            phi_v, psi_v, om = values_at(intro_problem, (float(xs[i]),))
            direct = max(float(l) * phi_v + psi_v * 1 + om * 0 for l in lams)
            # family: alpha=lambda, beta=1 -> lam*phi + psi
            assert vec[i] == pytest.approx(direct, abs=1e-12)

    def test_maximizer_perturbation(self, trig_problem):
        # at the generic branch, moving the argmax never raises the section value
        h = make_selector(build_g_profile(trig_problem.curve), "i4")
        eps = 1e-3 * trig_problem.curve.domain.width
        from envinf.problem import section_at

        for x in np.linspace(-2, 2, 25):
            out = envelope_closed_form(trig_problem, h, (float(x),))
            lam = out.argmax_lambda
            base = section_at(trig_problem, (float(x),), lam)
            dom = trig_problem.curve.domain
            for cand in (lam - eps, lam + eps):
                if dom.lo <= cand <= dom.hi:
                    assert section_at(trig_problem, (float(x),), cand) <= base + 1e-9
