import math

import numpy as np
import pytest

from sdplab.errors import DomainError
from sdplab.gallery import (EXAMPLES, by_name, ex1_cases, example1, example2, example3,
                            random_strongly_feasible, strongly_infeasible_instance)
from sdplab.model import adjoint_map, apply_map, perturb
from sdplab.symmat import inner, min_eig

GRID = [(0.3, 0.2), (0.05, 0.5), (0.8, 0.1), (0.5, 0.05)]


def conic_value(q):
    """Independent value of the perturbed primal from a general-purpose conic solver."""
    cp = pytest.importorskip("cvxpy")
    X = cp.Variable((q.n, q.n), symmetric=True)
    cons = [X >> 0] + [cp.trace(A @ X) == bi for A, bi in zip(q.A, q.b)]
    prob = cp.Problem(cp.Minimize(cp.trace(q.C @ X)), cons)
    prob.solve(solver="CLARABEL")
    return prob.value


@pytest.mark.parametrize("make", [example1, example2, example3])
@pytest.mark.parametrize("eps,eta", GRID)
def test_closed_form_matches_conic_solver(make, eps, eta):
    e = make()
    q = perturb(e.problem, e.dirs, eps, eta)
    assert conic_value(q) == pytest.approx(e.oracle_v(eps, eta), abs=1e-6)


@pytest.mark.parametrize("make", [example1, example2, example3])
def test_vtilde_is_the_ray_limit_of_the_closed_form(make):
    e = make()
    for beta in [0.25, 0.5, 1.0, 2.0, 4.0]:
        t = 1e-7
        assert e.oracle_v(t, t * beta) == pytest.approx(e.oracle_vtilde(beta), abs=1e-4)


def test_vtilde_endpoints():
    for e in (example1(), example2(), example3()):
        assert e.oracle_vtilde(0.0) == e.v_primal
        assert e.oracle_vtilde(math.inf) == e.v_dual
    assert example1().oracle_vtilde(0.5) == pytest.approx(0.5)


def test_ex1_cases_spot_values():
    # eps = 1, eta = 1: v1 = 4 + 1 - 4 = 1, v2 = 1 + (1/4) 4 = 2 (since 0 <= 2), v3 = 1
    assert ex1_cases(1.0, 1.0) == pytest.approx((1.0, 2.0, 1.0))
    assert example1().oracle_v(0.5, 0.0) == 1.5


def test_oracles_reject_bad_arguments():
    with pytest.raises(DomainError):
        example1().oracle_v(0.0, 0.1)
    with pytest.raises(DomainError):
        example2().oracle_vtilde(-1.0)


def test_vtilde_nonincreasing():
    betas = np.linspace(0.01, 20, 400)
    for e in (example1(), example2(), example3()):
        vals = [e.oracle_vtilde(b) for b in betas]
        assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("seed", range(5))
def test_random_instance_plants_interior_points(seed):
    e = random_strongly_feasible(6, 5, seed)
    p, pl = e.problem, e.planted
    assert np.allclose(apply_map(p, pl["X"]), p.b)
    assert np.allclose(p.C - adjoint_map(p, pl["y"]), pl["S"])
    assert min_eig(pl["X"]) > 0.4 and min_eig(pl["S"]) > 0.4
    assert p.lin_indep()
    lo, hi = pl["value_range"]
    assert hi - lo == pytest.approx(inner(pl["X"], pl["S"]))


def test_random_instance_is_seeded():
    a = random_strongly_feasible(4, 3, 11).problem
    b = random_strongly_feasible(4, 3, 11).problem
    assert np.array_equal(a.C, b.C) and np.array_equal(a.b, b.b)
    with pytest.raises(DomainError):
        random_strongly_feasible(2, 4, 0)


def test_strongly_infeasible_certificate():
    e = strongly_infeasible_instance()
    y = e.certificate
    assert min_eig(-adjoint_map(e.problem, y)) >= 0
    assert float(e.problem.b @ y) == pytest.approx(1.0)


def test_registry():
    assert by_name("1").name == "example1"
    assert by_name("example3").name == "example3"
    assert set(EXAMPLES) >= {"1", "2", "3", "strongly-infeasible"}
    with pytest.raises(KeyError):
        by_name("nope")
