"""Optimal values of the perturbed pair and their limits along rays.

``value_at(eps, eta)`` solves the perturbed pair with the infeasible IPM and
reports the midpoint of the final modified objectives, which bracket the
common optimal value.  ``ray_limit`` samples ``t -> v(t cos(theta), t sin(theta))``
on a geometric schedule and classifies the tail.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, NumericalError, NumericalFailure
from .ipm import (IpmParams, IpmTrace, Status, default_identity_start, run_potra_sheng,
                  run_zhang, standard_start)
from .model import PerturbationPair, SdpProblem, default_dirs, perturb

HALF_PI = 0.5 * math.pi

# one-sided solves run in segments so divergence can be recognised early
SEGMENT = 250
ESCAPE_GROWTH = 1.5


@dataclass(frozen=True)
class RaySchedule:
    t0: float = 1e-1
    ratio: float = 10.0 ** -0.5
    steps: int = 9
    divergence_cap: float = 1e6

    def __post_init__(self):
        if not self.t0 > 0:
            raise DomainError("t0 must be positive")
        if not 0 < self.ratio < 1:
            raise DomainError("ratio must lie in (0, 1)")
        if int(self.steps) != self.steps or self.steps < 1:
            raise DomainError("steps must be a positive integer")
        if not self.divergence_cap > 0:
            raise DomainError("divergence_cap must be positive")
        if self.t0 * self.ratio ** self.steps <= 1e-12:
            raise DomainError("schedule reaches below t = 1e-12")

    def ts(self) -> List[float]:
        return [self.t0 * self.ratio ** k for k in range(self.steps + 1)]


class RayKind(enum.Enum):
    FINITE = "Finite"
    PLUS_INFINITY = "PlusInfinity"
    MINUS_INFINITY = "MinusInfinity"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class RayLimitResult:
    kind: RayKind
    value: Optional[float]
    samples: List[Tuple[float, float]]
    theta: float
    diagnostics: Dict[str, object] = field(default_factory=dict)

    @property
    def is_finite(self) -> bool:
        return self.kind is RayKind.FINITE

    def as_number(self) -> float:
        """Finite value, ``+-inf`` for divergent rays, ``nan`` when inconclusive."""
        if self.kind is RayKind.FINITE:
            return float(self.value)
        if self.kind is RayKind.PLUS_INFINITY:
            return math.inf
        if self.kind is RayKind.MINUS_INFINITY:
            return -math.inf
        return math.nan


@dataclass
class ValueResult:
    value: float
    lower: float
    upper: float
    iterations: int
    trace: Optional[IpmTrace] = None
    note: str = ""


# --------------------------------------------------------------------------
# value of the perturbed pair


def _angle_weights(theta: float) -> Tuple[float, float]:
    if not 0.0 <= theta <= HALF_PI + 1e-15:
        raise DomainError(f"theta must lie in [0, pi/2], got {theta}")
    # the endpoints are exact one-sided perturbations
    if theta == 0.0:
        return 1.0, 0.0
    if abs(theta - HALF_PI) <= 1e-15:
        return 0.0, 1.0
    return math.cos(theta), math.sin(theta)


def _half_decade_values(ts: Sequence[float], vals: Sequence[float]) -> List[float]:
    """Objective values sampled where ``t`` first drops below ``t0 10^{-k/2}``."""
    ts = np.asarray(ts)
    out = []
    level = ts[0]
    for i, t in enumerate(ts):
        if t <= level:
            out.append(vals[i])
            level = t / math.sqrt(10.0)
    return out


def _escaping(ts: Sequence[float], vals: Sequence[float], sign: int) -> bool:
    """Ratio test for power-law divergence of the modified objectives.

    Increments over three consecutive half-decades of ``t`` must all point in
    the ``sign`` direction and grow by ``ESCAPE_GROWTH`` each time; a
    converging sequence has shrinking increments.
    """
    if len(ts) < 3 or ts[-1] <= 0:
        return False
    v = _half_decade_values(ts, vals)
    if len(v) < 4:
        return False
    d = [sign * (v[-3] - v[-4]), sign * (v[-2] - v[-3]), sign * (v[-1] - v[-2])]
    return (d[0] > 0 and d[1] >= ESCAPE_GROWTH * d[0] and d[2] >= ESCAPE_GROWTH * d[1]
            and sign * v[-1] > 0)


def side_infeasible(p: SdpProblem, dirs: Optional[PerturbationPair], side: str,
                    max_iter: int = 5000) -> Optional[bool]:
    """Is the unperturbed primal (``side="primal"``) or dual side infeasible?

    ``v(eps, 0) = +inf`` for every ``eps > 0`` exactly when the primal is
    infeasible, and ``v(0, eta) = -inf`` exactly when the dual is.  The test
    solves the one-sided pair at parameter 1, where the other side is
    comfortably strongly feasible: a feasible side converges, an infeasible
    one makes the modified objectives escape.  ``None`` means neither was
    observed within the budget.
    """
    if side not in ("primal", "dual"):
        raise DomainError("side must be 'primal' or 'dual'")
    dirs = default_dirs(p, dirs)
    eps, eta = (1.0, 0.0) if side == "primal" else (0.0, 1.0)
    sign = 1 if side == "primal" else -1
    q = perturb(p, dirs, eps, eta)
    pt, induced = standard_start(q, default_identity_start(q))
    base = IpmParams(tol_gap=1e-8, tol_resid=1e-10)
    hist_t: List[float] = []
    hist_v: List[float] = []
    used = 0
    while used < max_iter:
        trace = run_zhang(q, pt, induced, replace(base, max_iter=min(SEGMENT, max_iter - used)))
        used += len(trace) - 1
        hist_t.extend(it.t for it in trace.iterates)
        hist_v.extend(0.5 * (m.primal + m.dual) for m in trace.modified)
        if trace.status is Status.CONVERGED:
            return False
        if _escaping(hist_t, hist_v, sign):
            return True
        if trace.message != "iteration limit reached" or len(trace) <= 1:
            return None
        pt = trace.final
    return None


def solve_value(p: SdpProblem, dirs: Optional[PerturbationPair], eps: float, eta: float,
                tol: float = 1e-7, *, zhang_iter: int = 5000, fallback_iter: int = 20000,
                infeasible: Optional[bool] = None) -> ValueResult:
    """Solve the perturbed pair and return the certified bracket.

    The pair is solved by ``run_zhang`` from an identity start; when that does
    not certify the gap within ``zhang_iter`` iterations the predictor-corrector
    run takes over.  For a one-sided perturbation the value is ``+inf``
    (``eta = 0``) or ``-inf`` (``eps = 0``) when the unperturbed side is
    infeasible; ``infeasible`` may carry that verdict from an earlier
    ``side_infeasible`` call.
    """
    if eps < 0 or eta < 0:
        raise DomainError("eps and eta must be nonnegative")
    if eps == 0 and eta == 0:
        raise DomainError("v(0, 0) is not defined; perturb at least one side")
    if not tol > 0:
        raise DomainError("tol must be positive")
    dirs = default_dirs(p, dirs)
    if eps == 0 or eta == 0:
        if infeasible is None:
            infeasible = side_infeasible(p, dirs, "primal" if eta == 0 else "dual")
        if infeasible:
            inf = math.inf if eta == 0 else -math.inf
            return ValueResult(inf, inf, inf, 0, None, note="unperturbed side infeasible")
    q = perturb(p, dirs, eps, eta)
    # t multiplies the residual shifts; near-singular pairs amplify it by ~1/eps^2
    params = IpmParams(tol_gap=tol, tol_resid=min(1e-15, tol))
    pt, induced = standard_start(q, default_identity_start(q))
    used = 0
    trace = None
    for runner, budget in ((run_zhang, zhang_iter), (run_potra_sheng, fallback_iter)):
        trace = runner(q, pt, induced, replace(params, max_iter=budget))
        used += len(trace) - 1
        if trace.status is Status.CONVERGED:
            mo = trace.final_modified
            lo, hi = sorted((mo.dual, mo.primal))
            return ValueResult(0.5 * (lo + hi), lo, hi, used, trace,
                               note="" if runner is run_zhang else "predictor-corrector fallback")
    raise NumericalFailure(
        f"value_at({eps:g}, {eta:g}) not certified: status {trace.status.value}, "
        f"gap {trace.final.gap:.3e}, t {trace.final.t:.3e} after {used} iterations",
        trace=trace)


def value_at(p: SdpProblem, dirs: Optional[PerturbationPair], eps: float, eta: float,
             tol: float = 1e-7, **kw) -> float:
    """Common optimal value ``v(eps, eta)`` of the perturbed pair."""
    return solve_value(p, dirs, eps, eta, tol, **kw).value


# --------------------------------------------------------------------------
# ray limits


def _classify(samples: List[Tuple[float, float]], sched: RaySchedule, tol: float):
    vals = [v for _, v in samples]
    # one uncertified sample among the finest four is tolerated; the three
    # finest certified samples then decide
    if sum(math.isnan(v) for v in vals[-4:]) > 1:
        return RayKind.INCONCLUSIVE, None
    vals = [v for v in vals if not math.isnan(v)]
    if len(vals) < 3:
        return RayKind.INCONCLUSIVE, None
    a, b, c = vals[-3:]
    if a == b == c == math.inf:
        return RayKind.PLUS_INFINITY, None
    if a == b == c == -math.inf:
        return RayKind.MINUS_INFINITY, None
    if not all(math.isfinite(v) for v in (a, b, c)):
        return RayKind.INCONCLUSIVE, None
    cap = sched.divergence_cap
    if min(a, b, c) > cap and a <= b <= c:
        return RayKind.PLUS_INFINITY, None
    if max(a, b, c) < -cap and a >= b >= c:
        return RayKind.MINUS_INFINITY, None
    if max(abs(a - b), abs(b - c), abs(a - c)) < tol:
        return RayKind.FINITE, c
    return RayKind.INCONCLUSIVE, None


def _ray_samples(p, dirs, alpha, beta, sched, value_tol):
    samples, failures = [], []
    infeasible = None
    if alpha == 0 or beta == 0:
        infeasible = side_infeasible(p, dirs, "primal" if beta == 0 else "dual")
    for t in sched.ts():
        try:
            v = value_at(p, dirs, t * alpha, t * beta, value_tol, infeasible=infeasible)
        except (NumericalError, NumericalFailure) as exc:
            failures.append((t, str(exc)))
            v = math.nan
        samples.append((t, v))
    return samples, failures


def ray_limit(p: SdpProblem, dirs: Optional[PerturbationPair], theta: float,
              sched: Optional[RaySchedule] = None, *, tol: float = 1e-2,
              value_tol: float = 1e-5) -> RayLimitResult:
    """Estimate ``lim_{t -> 0} v(t cos(theta), t sin(theta))``."""
    sched = sched or RaySchedule()
    alpha, beta = _angle_weights(theta)
    samples, failures = _ray_samples(p, dirs, alpha, beta, sched, value_tol)
    kind, value = _classify(samples, sched, tol)
    diag: Dict[str, object] = {"tol": tol, "failures": failures}
    if kind is RayKind.FINITE:
        (_, v1), (_, v2) = samples[-2:]
        if not (math.isnan(v1) or math.isnan(v2)):
            # first-order extrapolation in t, reported only
            diag["richardson"] = (v2 - sched.ratio * v1) / (1.0 - sched.ratio)
    return RayLimitResult(kind, value, samples, theta, diag)


def vtilde(p: SdpProblem, dirs: Optional[PerturbationPair], beta: float,
           sched: Optional[RaySchedule] = None, **kw) -> RayLimitResult:
    """Ray limit parametrised by the slope ``beta = tan(theta)``."""
    if beta < 0:
        raise DomainError("beta must be nonnegative")
    theta = HALF_PI if math.isinf(beta) else math.atan(beta)
    return ray_limit(p, dirs, theta, sched, **kw)


@dataclass
class SweepResult:
    results: List[RayLimitResult]
    violations: List[Tuple[int, int, float]]
    sandwich_violations: List[int]
    tol: float

    @property
    def monotone(self) -> bool:
        return not self.violations

    @property
    def thetas(self) -> List[float]:
        return [r.theta for r in self.results]


def _sweep_one(args):
    p, dirs, theta, sched, tol, value_tol = args
    return ray_limit(p, dirs, theta, sched, tol=tol, value_tol=value_tol)


def theta_sweep(p: SdpProblem, dirs: Optional[PerturbationPair], grid: Sequence[float],
                sched: Optional[RaySchedule] = None, *, tol: float = 1e-2,
                value_tol: float = 1e-5, jobs: int = 1) -> SweepResult:
    """Ray limits over an ascending angle grid plus a monotonicity report.

    Adjacent finite limits must satisfy ``v(theta_{i+1}) <= v(theta_i) + 2 tol``.
    When both endpoints are in the grid and finite, every finite limit must
    lie between them (within ``tol``).
    """
    grid = [float(th) for th in grid]
    if any(b < a for a, b in zip(grid, grid[1:])):
        raise DomainError("grid must be sorted ascending")
    for th in grid:
        _angle_weights(th)
    sched = sched or RaySchedule()
    tasks = [(p, dirs, th, sched, tol, value_tol) for th in grid]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_sweep_one, tasks))
    else:
        results = [_sweep_one(t) for t in tasks]
    violations = []
    for i in range(len(results) - 1):
        a, b = results[i].as_number(), results[i + 1].as_number()
        if math.isnan(a) or math.isnan(b):
            continue
        if b > a + 2 * tol:
            violations.append((i, i + 1, b - a))
    sandwich: List[int] = []
    if len(results) >= 2 and grid[0] == 0.0 and abs(grid[-1] - HALF_PI) <= 1e-15:
        top, bottom = results[0], results[-1]
        if top.is_finite and bottom.is_finite:
            for i, r in enumerate(results):
                if r.is_finite and not (bottom.value - tol <= r.value <= top.value + tol):
                    sandwich.append(i)
    return SweepResult(results, violations, sandwich, tol)


def homogeneity_check(p: SdpProblem, dirs: Optional[PerturbationPair], beta: float, k: float,
                      sched: Optional[RaySchedule] = None, *, tol: float = 1e-2,
                      value_tol: float = 1e-5) -> bool:
    """Do the directions ``(1, beta)`` and ``(k, k beta)`` give the same ray limit?"""
    if not beta > 0 or not k > 0:
        raise DomainError("beta and k must be positive")
    sched = sched or RaySchedule()
    out = []
    for scale in (1.0, k):
        samples, _ = _ray_samples(p, dirs, scale, scale * beta, sched, value_tol)
        out.append(_classify(samples, sched, tol))
    (k1, v1), (k2, v2) = out
    if k1 is RayKind.INCONCLUSIVE or k1 is not k2:
        return False
    return k1 is not RayKind.FINITE or abs(v1 - v2) < tol
