"""Worked duality-gap examples with closed-form value oracles, plus calibration instances.

Matrix data is entered in the dual form ``C - sum_i A_i y_i``.  Values follow
the min-convention: ``+inf`` for an infeasible primal, ``-inf`` for an
infeasible dual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, GenerationError
from .model import PerturbationPair, SdpProblem, adjoint_map, apply_map

INF = math.inf


@dataclass(frozen=True)
class GalleryEntry:
    problem: SdpProblem
    dirs: PerturbationPair
    oracle_v: Optional[Callable[[float, float], float]]
    oracle_vtilde: Optional[Callable[[float], float]]
    v_primal: float
    v_dual: float
    certificate: Optional[object] = None
    planted: Optional[dict] = None

    @property
    def name(self) -> str:
        return self.problem.name


def _entry(name, C, A, b, **kw) -> GalleryEntry:
    p = SdpProblem(np.array(C, float), tuple(np.array(Ai, float) for Ai in A), b, name=name)
    return GalleryEntry(problem=p, dirs=PerturbationPair.identity(p.n), **kw)


# ---------------------------------------------------------------- example 1


def ex1_cases(eps: float, eta: float):
    """The three case values ``(v1, v2, v3)`` of the first example."""
    v1 = (1 + eta) * (1 + eps) + eta * eps - eta * (1 + eps) ** 2 / eps
    if eps * (1 - eta) <= 2 * eta:
        v2 = eps * eta + eps / (4 * eta) * (1 + eta) ** 2
    else:
        v2 = (1 + eta) * (1 + eps) - eta * (2 + 1 / eps)
    v3 = eta * eps
    return v1, v2, v3


def _ex1_v(eps: float, eta: float) -> float:
    if eps <= 0:
        raise DomainError("closed form needs eps > 0")
    if eta == 0:
        return 1.0 + eps
    return max(ex1_cases(eps, eta))


def _ex1_vtilde(beta: float) -> float:
    if beta == INF:
        return 0.0
    if beta < 0:
        raise DomainError("beta must be nonnegative")
    return 1.0 - beta if beta <= 0.5 else 1.0 / (4.0 * beta)


def example1() -> GalleryEntry:
    """Finite duality gap of one: v(P) = 1, v(D) = 0."""
    C = [[1, 0, 0], [0, 0, 0], [0, 0, 0]]
    A1 = [[1, 0, 0], [0, 0, 1], [0, 1, 0]]
    A2 = [[0, 0, 0], [0, 1, 0], [0, 0, 0]]
    return _entry("example1", C, [A1, A2], [1.0, 0.0], oracle_v=_ex1_v,
                  oracle_vtilde=_ex1_vtilde, v_primal=1.0, v_dual=0.0)


# ---------------------------------------------------------------- example 2


def _ex2_v(eps: float, eta: float) -> float:
    if eps <= 0:
        raise DomainError("closed form needs eps > 0")
    return (1 + eta) * eps - eta * (1 - eps ** 2) / eps


def _ex2_vtilde(beta: float) -> float:
    if beta == INF:
        return -INF
    if beta < 0:
        raise DomainError("beta must be nonnegative")
    return -beta


def example2() -> GalleryEntry:
    """Weakly feasible primal with v(P) = 0; weakly infeasible dual."""
    C = [[0, 0, 1], [0, 0, 0], [1, 0, 0]]
    A1 = [[0, 0, 0], [0, -1, 0], [0, 0, 0]]
    A2 = [[-1, 0, 0], [0, 0, 0], [0, 0, 0]]
    return _entry("example2", C, [A1, A2], [-1.0, 0.0], oracle_v=_ex2_v,
                  oracle_vtilde=_ex2_vtilde, v_primal=0.0, v_dual=-INF)


# ---------------------------------------------------------------- example 3


def _ex3_v(eps: float, eta: float) -> float:
    # Eliminating y2 leaves a concave quadratic in y1 on y1 >= -1 - eps.
    if eps <= 0 or eta <= 0:
        raise DomainError("closed form needs eps > 0 and eta > 0")
    y1_star = 2.0 * (eps * (1 - eta) / eta - 1.0)
    if y1_star >= -1.0 - eps:
        return eps * (1 - eta) ** 2 / eta - 2.0 * (1 - eta) + eta * eps
    return -(1 - eta) * (1 + eps) - eta / eps * ((1 - eps) / 2) ** 2 + eps * eta


def _ex3_vtilde(beta: float) -> float:
    if beta == INF:
        return -INF
    if beta < 0:
        raise DomainError("beta must be nonnegative")
    if beta <= 2.0:
        return INF if beta == 0 else -2.0 + 1.0 / beta
    return -1.0 - beta / 4.0


def example3() -> GalleryEntry:
    """Primal and dual both weakly infeasible."""
    C = [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
    A1 = [[0, 0, -0.5], [0, -1, 0], [-0.5, 0, 0]]
    A2 = [[-1, 0, 0], [0, 0, 0], [0, 0, 0]]
    return _entry("example3", C, [A1, A2], [1.0, 0.0], oracle_v=_ex3_v,
                  oracle_vtilde=_ex3_vtilde, v_primal=INF, v_dual=-INF)


# ---------------------------------------------------------------- calibration


def _random_spd(rng: np.random.Generator, n: int, lo: float = 0.5, hi: float = 2.0) -> np.ndarray:
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    w = rng.uniform(lo, hi, n)
    M = (Q * w) @ Q.T
    return 0.5 * (M + M.T)


def random_strongly_feasible(n: int, m: int, seed: int) -> GalleryEntry:
    """Random pair with a planted interior primal point and interior dual slack."""
    if n < 1 or m < 1 or m > n * (n + 1) // 2:
        raise DomainError(f"need n >= 1 and 1 <= m <= n(n+1)/2, got n={n}, m={m}")
    rng = np.random.default_rng(seed)
    for _ in range(10):
        raw = rng.standard_normal((m, n, n))
        raw = 0.5 * (raw + np.transpose(raw, (0, 2, 1)))
        flat = raw.reshape(m, -1)
        q, r = np.linalg.qr(flat.T)
        if np.min(np.abs(np.diag(r))) < 1e-8:
            continue
        A = [0.5 * (M + M.T) for M in q.T.reshape(m, n, n)]
        X_star = _random_spd(rng, n)
        S_star = _random_spd(rng, n)
        y_star = rng.standard_normal(m)
        probe = SdpProblem(np.zeros((n, n)), tuple(A), np.zeros(m))
        b = apply_map(probe, X_star)
        C = adjoint_map(probe, y_star) + S_star
        p = SdpProblem(C, tuple(A), b, name=f"random-{n}-{m}-{seed}")
        upper = float(np.sum(C * X_star))
        lower = float(b @ y_star)
        return GalleryEntry(problem=p, dirs=PerturbationPair.identity(n), oracle_v=None,
                            oracle_vtilde=None, v_primal=math.nan, v_dual=math.nan,
                            planted={"X": X_star, "S": S_star, "y": y_star,
                                     "value_range": (lower, upper)})
    raise GenerationError("could not draw linearly independent constraints")


def strongly_infeasible_instance() -> GalleryEntry:
    """``x11 = -1`` with ``X psd``; separated from the cone by ``y = -1``."""
    C = np.eye(2)
    A1 = np.array([[1.0, 0.0], [0.0, 0.0]])
    A2 = np.array([[0.0, 1.0], [1.0, 0.0]])
    return _entry("strongly-infeasible", C, [A1, A2], [-1.0, 0.0], oracle_v=None,
                  oracle_vtilde=None, v_primal=INF, v_dual=INF,
                  certificate=np.array([-1.0, 0.0]))


EXAMPLES = {
    "1": example1,
    "example1": example1,
    "2": example2,
    "example2": example2,
    "3": example3,
    "example3": example3,
    "strongly-infeasible": strongly_infeasible_instance,
}


def by_name(name: str) -> GalleryEntry:
    try:
        return EXAMPLES[name]()
    except KeyError:
        raise KeyError(f"unknown example {name!r}; choose from {sorted(set(EXAMPLES))}") from None
