import math

import numpy as np
import pytest

from sdplab.errors import DomainError, NumericalFailure
from sdplab.gallery import example1, example2, example3, strongly_infeasible_instance
from sdplab.model import shifted_primal_value
from sdplab.rays import (HALF_PI, RayKind, RaySchedule, _angle_weights, _classify,
                         homogeneity_check, ray_limit, solve_value, theta_sweep, value_at, vtilde)

SHORT = RaySchedule(t0=0.1, ratio=10 ** -0.5, steps=4)


def test_schedule():
    s = RaySchedule()
    ts = s.ts()
    assert len(ts) == 10 and ts[0] == 0.1
    assert ts[-1] == pytest.approx(0.1 * 10 ** -4.5)
    for bad in (dict(t0=0), dict(ratio=1.0), dict(steps=0), dict(t0=1e-6, steps=30)):
        with pytest.raises(DomainError):
            RaySchedule(**bad)


def test_angle_weights_exact_endpoints():
    assert _angle_weights(0.0) == (1.0, 0.0)
    assert _angle_weights(HALF_PI) == (0.0, 1.0)
    a, b = _angle_weights(0.4)
    assert a == math.cos(0.4) and b == math.sin(0.4)
    with pytest.raises(DomainError):
        _angle_weights(2.0)


@pytest.mark.parametrize("eps,eta", [(0.1, 0.1), (0.1, 0.01), (0.01, 0.1), (0.05, 0.003)])
def test_value_at_example1(eps, eta):
    e = example1()
    assert value_at(e.problem, e.dirs, eps, eta, 1e-8) == pytest.approx(e.oracle_v(eps, eta), abs=1e-6)


@pytest.mark.parametrize("eps,eta", [(0.1, 0.1), (0.01, 0.1)])
def test_value_at_example2(eps, eta):
    e = example2()
    assert value_at(e.problem, e.dirs, eps, eta, 1e-8) == pytest.approx(e.oracle_v(eps, eta), abs=1e-6)


def test_value_at_example3():
    e = example3()
    assert value_at(e.problem, e.dirs, 0.3, 0.2, 1e-8) == pytest.approx(e.oracle_v(0.3, 0.2), abs=1e-6)


def test_one_sided_sentinels():
    e2, e3 = example2(), example3()
    assert value_at(e3.problem, e3.dirs, 0.1, 0.0) == math.inf
    assert value_at(e2.problem, e2.dirs, 0.0, 0.1) == -math.inf
    # feasible side: eta = 0 on example 1 is v(eps, 0) = 1 + eps
    assert value_at(example1().problem, None, 0.1, 0.0, 1e-8) == pytest.approx(1.1, abs=1e-6)


def test_bracket_and_domain():
    e = example1()
    r = solve_value(e.problem, e.dirs, 0.1, 0.1, 1e-8)
    assert r.lower <= r.value <= r.upper
    assert r.upper - r.lower <= 1e-7
    with pytest.raises(DomainError):
        value_at(e.problem, e.dirs, 0.0, 0.0)
    with pytest.raises(DomainError):
        value_at(e.problem, e.dirs, -0.1, 0.1)


def test_strongly_infeasible_value_fails_loudly():
    e = strongly_infeasible_instance()
    with pytest.raises(NumericalFailure):
        value_at(e.problem, e.dirs, 0.1, 0.1)


def test_value_monotone_in_eps_and_shift_in_eta():
    e = example1()
    grid = [0.1, 0.03, 0.01]
    eta = 0.05
    vals = [value_at(e.problem, e.dirs, eps, eta, 1e-8) for eps in grid]
    # smaller eps, smaller objective: v nondecreasing in eps
    assert all(b <= a + 1e-6 for a, b in zip(vals, vals[1:]))
    eps = 0.05
    shifted = [shifted_primal_value(value_at(e.problem, e.dirs, eps, h, 1e-8), eps, h, e.problem, e.dirs)
               for h in (0.01, 0.03, 0.1)]
    assert all(b <= a + 1e-6 for a, b in zip(shifted, shifted[1:]))


def _samples(vals):
    return [(10.0 ** -k, v) for k, v in enumerate(vals)]


def test_classify_rules():
    s = RaySchedule()
    assert _classify(_samples([2, 1.5, 1.01, 1.001, 1.0001]), s, 1e-2) == (RayKind.FINITE, 1.0001)
    assert _classify(_samples([1, math.inf, math.inf, math.inf]), s, 1e-2)[0] is RayKind.PLUS_INFINITY
    assert _classify(_samples([-1, -math.inf, -math.inf, -math.inf]), s, 1e-2)[0] is RayKind.MINUS_INFINITY
    assert _classify(_samples([-1e3, -1e7, -1e8, -1e9]), s, 1e-2)[0] is RayKind.MINUS_INFINITY
    assert _classify(_samples([1, 2, 3, 4]), s, 1e-2)[0] is RayKind.INCONCLUSIVE
    # one uncertified sample at the end is skipped, two are not
    assert _classify(_samples([1, 1, 1, math.nan]), s, 1e-2) == (RayKind.FINITE, 1)
    assert _classify(_samples([1, 1, 1, math.nan, math.nan]), s, 1e-2)[0] is RayKind.INCONCLUSIVE


def test_ray_limit_short_schedule():
    e = example1()
    r = ray_limit(e.problem, e.dirs, math.atan(2.0), SHORT)
    assert r.kind is RayKind.FINITE
    assert r.value == pytest.approx(e.oracle_vtilde(2.0), abs=1e-2)
    assert len(r.samples) == SHORT.steps + 1
    assert vtilde(e.problem, e.dirs, 2.0, SHORT).value == r.value


def test_endpoint_rays_are_infinite_on_example3():
    e = example3()
    assert ray_limit(e.problem, e.dirs, 0.0).kind is RayKind.PLUS_INFINITY
    assert ray_limit(e.problem, e.dirs, HALF_PI).kind is RayKind.MINUS_INFINITY


def test_sweep_reports_order_and_monotonicity():
    e = example1()
    grid = [math.atan(1.0), math.atan(4.0)]
    res = theta_sweep(e.problem, e.dirs, grid, SHORT)
    assert res.thetas == grid
    assert res.monotone
    with pytest.raises(DomainError):
        theta_sweep(e.problem, e.dirs, grid[::-1], SHORT)


def test_homogeneity():
    e = example1()
    assert homogeneity_check(e.problem, e.dirs, 1.0, 3.0)
    with pytest.raises(DomainError):
        homogeneity_check(e.problem, e.dirs, 0.0, 3.0, SHORT)
