import math

import pytest

from envinf import (
    GridDomain,
    Interval,
    ParamCurve,
    Problem,
    exp_family,
    parse,
    prop11_family,
    trig_family,
)


def make_problem(phi, psi, omega, curve, lo, hi, res, refine=0, window=1.0, dim=1):
    if dim == 1:
        grid = GridDomain((float(lo),), (float(hi),), (int(res),), refine)
        names = ("x1",)
    else:
        grid = GridDomain((float(lo),) * dim, (float(hi),) * dim, (int(res),) * dim, refine)
        names = tuple(f"x{i + 1}" for i in range(dim))
    return Problem(
        variables=names,
        phi=parse(phi, names),
        psi=parse(psi, names),
        omega=parse(omega, names),
        curve=curve,
        grid=grid,
        window=window,
    )


@pytest.fixture
def intro_curve():
    # alpha = lambda, beta = 1: the slope ratio is identically zero
    return ParamCurve(parse("lambda"), parse("1"), Interval(0, 1), parse("1"), parse("0"))


@pytest.fixture
def intro_problem(intro_curve):
    return make_problem("1 - x1^2", "x1", "0", intro_curve, 0, 2, 2001, refine=2)


@pytest.fixture
def identity_curve():
    # g(lambda) = lambda on (0, 1)
    return ParamCurve(parse("lambda"), parse("lambda^2/2"), Interval(0, 1),
                      parse("1"), parse("lambda"))


@pytest.fixture
def trig_curve():
    return trig_family(0.0, 0.0).curve


@pytest.fixture
def trig_problem(trig_curve):
    # convex fields, positive psi: all sampled hypotheses hold
    return make_problem("x1", "x1^2 + 1", "0", trig_curve, -2, 2, 401, refine=2)


@pytest.fixture
def exp_problem():
    entry = exp_family(Interval(0.0, 1.0))
    return make_problem("x1^2", "1", "0", entry.curve, -1, 1, 201, refine=2)


@pytest.fixture
def prop11_problem():
    entry = prop11_family(1.0 + math.sqrt(2.0))
    return make_problem("x1", "abs(x1)", "0", entry.curve, -10, 10, 2001, refine=2)


@pytest.fixture
def gap_problem(trig_curve):
    # psi has wells of height 1 at x = +-2 and a hump of 10 between: the
    # image curve (phi, psi) comes much closer to the origin through its
    # convex hull than along itself, so the two sides differ
    return make_problem("x1", "10 - 9*exp(-(x1^2 - 4)^2)", "0", trig_curve,
                        -3, 3, 301, refine=2)
