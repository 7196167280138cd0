"""Certificates for strong feasibility and strong infeasibility of each side.

Each detection solves a small auxiliary SDP with the internal IPM.  The
auxiliaries carry slack blocks so that both of their own sides are strongly
feasible, and norm or trace bounds ``R`` so that they are bounded.  Whatever
the solver returns is cleaned up and then re-validated against the defining
inequalities; only validated certificates are reported.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .errors import DomainError, InconsistencyError, InfeasibleAffineError, NumericalError
from .ipm import IpmParams, Status, default_identity_start, run_zhang, standard_start
from .model import SdpProblem, adjoint_map, apply_map
from .symmat import min_eig, sym

DEFAULT_R = 1e4
DEFAULT_MARGIN = 1e-6
PENALTY = 1e4


class Side(enum.Enum):
    PRIMAL = "Primal"
    DUAL = "Dual"


class Verdict(enum.Enum):
    STRONGLY_FEASIBLE = "StronglyFeasible"
    STRONGLY_INFEASIBLE = "StronglyInfeasible"
    SINGULAR_OR_UNDETERMINED = "SingularOrUndetermined"


class Flag(enum.Enum):
    YES = "Yes"
    NO = "No"
    UNDETERMINED = "Undetermined"


@dataclass
class SideStatus:
    side: Side
    verdict: Verdict
    certificate: Optional[object] = None
    notes: List[str] = field(default_factory=list)


@dataclass
class Classification:
    primal: SideStatus
    dual: SideStatus
    asymptotically_pd_feasible: Flag


@dataclass
class Detection:
    """Outcome of one auxiliary solve."""

    certificate: Optional[object]
    value: float
    certified: bool  # auxiliary converged, so ``value`` is trustworthy
    note: str = ""


# --------------------------------------------------------------------------
# block-diagonal assembly of auxiliary problems


def _block_diag(blocks: Sequence[np.ndarray]) -> np.ndarray:
    return scipy.linalg.block_diag(*[np.atleast_2d(np.asarray(b, float)) for b in blocks])


def _aux_problem(C_blocks, A_blocks, b, name) -> SdpProblem:
    C = _block_diag(C_blocks)
    A = tuple(_block_diag(blocks) for blocks in A_blocks)
    return SdpProblem(C, A, np.asarray(b, float), name=name)


def _arrow(m: int, i: int) -> np.ndarray:
    # (m+1)x(m+1) matrix with ones at (0, i+1) and (i+1, 0)
    E = np.zeros((m + 1, m + 1))
    E[0, i + 1] = E[i + 1, 0] = 1.0
    return E


def _solve_aux(q: SdpProblem, max_iter: int = 500):
    pt, dirs = standard_start(q, default_identity_start(q))
    params = IpmParams(max_iter=max_iter, tol_gap=1e-10, tol_resid=1e-10)
    trace = run_zhang(q, pt, dirs, params)
    return trace


def _blocks_of(M: np.ndarray, sizes: Sequence[int]) -> List[np.ndarray]:
    out, k = [], 0
    for s in sizes:
        out.append(M[k:k + s, k:k + s])
        k += s
    return out


def _lsq(G: np.ndarray, r: np.ndarray) -> np.ndarray:
    # the gram matrix may be singular (dependent or zero A_i)
    return np.linalg.lstsq(G, r, rcond=None)[0]


def _psd_clip(M: np.ndarray) -> np.ndarray:
    w, Q = np.linalg.eigh(sym(M))
    return (Q * np.maximum(w, 0.0)) @ Q.T


# --------------------------------------------------------------------------
# strong infeasibility


def _validate_primal_ray(p: SdpProblem, y: np.ndarray) -> bool:
    return (min_eig(-adjoint_map(p, y)) >= -1e-10
            and float(p.b @ y) >= 1.0 - 1e-8)


def _clean_primal_ray(p: SdpProblem, y: np.ndarray, rounds: int = 50) -> Optional[np.ndarray]:
    """Push ``y`` to ``-A^*(y) psd`` by alternating projections, then scale ``b^T y = 1``."""
    G = p.gram()
    scale = np.linalg.norm(y)
    if scale == 0:
        return None
    y = y.copy()
    y[np.abs(y) < 1e-9 * scale] = 0.0
    for _ in range(rounds):
        M = -adjoint_map(p, y)
        if min_eig(M) >= -1e-14 * max(1.0, np.linalg.norm(M)):
            break
        y = -_lsq(G, apply_map(p, _psd_clip(M)))
    by = float(p.b @ y)
    if by <= 0:
        return None
    y = y / by
    return y if _validate_primal_ray(p, y) else None


def primal_infeasibility_search(p: SdpProblem, R: float = DEFAULT_R) -> Detection:
    """``max b^T y - K u`` s.t. ``u I - A^*(y) psd``, ``||y|| <= R``, ``0 <= u <= R``."""
    n, m = p.n, p.m
    C_blocks = [np.zeros((n, n)), R * np.eye(m + 1), np.zeros((1, 1)), R * np.ones((1, 1))]
    A_blocks = [[p.A[i], _arrow(m, i), np.zeros((1, 1)), np.zeros((1, 1))] for i in range(m)]
    A_blocks.append([-np.eye(n), np.zeros((m + 1, m + 1)), -np.ones((1, 1)), np.ones((1, 1))])
    b = np.concatenate([p.b, [-PENALTY]])
    q = _aux_problem(C_blocks, A_blocks, b, "primal-infeasibility")
    try:
        tr = _solve_aux(q)
    except (NumericalError, InfeasibleAffineError) as exc:
        return Detection(None, np.nan, False, f"auxiliary failed: {exc}")
    y = tr.final.y[:m]
    value = float(p.b @ y)
    certified = tr.status is Status.CONVERGED
    cert = None
    if value >= 1.0 - 1e-6:
        cert = _clean_primal_ray(p, y)
    return Detection(cert, value, certified, tr.status.value)


def _validate_dual_ray(p: SdpProblem, X: np.ndarray) -> bool:
    scale = 1.0 + np.linalg.norm(X)
    return (min_eig(X) >= -1e-10 * scale
            and np.linalg.norm(apply_map(p, X)) <= 1e-8
            and float(np.sum(p.C * X)) <= -1.0 + 1e-8)


def _clean_dual_ray(p: SdpProblem, X: np.ndarray, rounds: int = 50) -> Optional[np.ndarray]:
    """Alternate between ``A(X) = 0`` and the psd cone, then scale ``C . X = -1``."""
    G = p.gram()
    for _ in range(rounds):
        X = X - adjoint_map(p, _lsq(G, apply_map(p, X)))
        if min_eig(X) >= -1e-14 * max(1.0, np.linalg.norm(X)):
            break
        X = _psd_clip(X)
    cx = float(np.sum(p.C * X))
    if cx >= 0:
        return None
    X = sym(X / -cx)
    return X if _validate_dual_ray(p, X) else None


def dual_infeasibility_search(p: SdpProblem, R: float = DEFAULT_R) -> Detection:
    """``min C.X + K sum(w+ + w-)`` s.t. ``A(X) + w+ - w- = 0``, ``tr X + s = R``."""
    n, m = p.n, p.m
    sizes = [n, 1, m, m]
    C_blocks = [p.C, np.zeros((1, 1)), PENALTY * np.eye(m), PENALTY * np.eye(m)]
    A_blocks = []
    for i in range(m):
        e = np.zeros((m, m))
        e[i, i] = 1.0
        A_blocks.append([p.A[i], np.zeros((1, 1)), e, -e])
    A_blocks.append([np.eye(n), np.ones((1, 1)), np.zeros((m, m)), np.zeros((m, m))])
    b = np.concatenate([np.zeros(m), [R]])
    q = _aux_problem(C_blocks, A_blocks, b, "dual-infeasibility")
    try:
        tr = _solve_aux(q)
    except (NumericalError, InfeasibleAffineError) as exc:
        return Detection(None, np.nan, False, f"auxiliary failed: {exc}")
    X = _blocks_of(tr.final.X, sizes)[0]
    value = float(np.sum(p.C * X))
    certified = tr.status is Status.CONVERGED
    cert = None
    if value <= -1.0 + 1e-6:
        cert = _clean_dual_ray(p, X)
    return Detection(cert, value, certified, tr.status.value)


def detect_strong_infeasibility_primal(p: SdpProblem, R: float = DEFAULT_R) -> Optional[np.ndarray]:
    """``y`` with ``-A^*(y) psd`` and ``b^T y = 1``, or ``None``."""
    return primal_infeasibility_search(p, R).certificate


def detect_strong_infeasibility_dual(p: SdpProblem, R: float = DEFAULT_R) -> Optional[np.ndarray]:
    """``X psd`` with ``A(X) = 0`` and ``C . X = -1``, or ``None``."""
    return dual_infeasibility_search(p, R).certificate


# --------------------------------------------------------------------------
# strong feasibility


def _primal_interior(p: SdpProblem, R: float, margin: float) -> Detection:
    # X = Z + (1 - r) I with Z psd; minimizing r maximizes the shift lam = 1 - r
    n, m = p.n, p.m
    trI = np.array([np.trace(Ai) for Ai in p.A])
    sizes = [n, 1, 1]
    C_blocks = [np.zeros((n, n)), np.ones((1, 1)), np.zeros((1, 1))]
    A_blocks = [[p.A[i], -trI[i] * np.ones((1, 1)), np.zeros((1, 1))] for i in range(m)]
    A_blocks.append([np.eye(n), np.ones((1, 1)), np.ones((1, 1))])
    b = np.concatenate([p.b - trI, [R]])
    q = _aux_problem(C_blocks, A_blocks, b, "primal-interior")
    try:
        tr = _solve_aux(q)
    except (NumericalError, InfeasibleAffineError) as exc:
        return Detection(None, np.nan, False, f"auxiliary failed: {exc}")
    Z, r, _ = _blocks_of(tr.final.X, sizes)
    lam = 1.0 - float(r[0, 0])
    cert = None
    if lam >= margin:
        X = Z + lam * np.eye(n)
        X = X - adjoint_map(p, _lsq(p.gram(), apply_map(p, X) - p.b))
        X = sym(X)
        if (np.linalg.norm(apply_map(p, X) - p.b) <= 1e-8 * (1 + np.linalg.norm(p.b))
                and min_eig(X) >= margin):
            cert = X
    return Detection(cert, lam, tr.status is Status.CONVERGED, tr.status.value)


def _dual_interior(p: SdpProblem, R: float, margin: float) -> Detection:
    # max lam s.t. C - A^*(y) - lam I psd, lam <= 1, lam >= -R, ||y|| <= R
    n, m = p.n, p.m
    C_blocks = [p.C, np.ones((1, 1)), R * np.eye(m + 1), R * np.ones((1, 1))]
    A_blocks = [[p.A[i], np.zeros((1, 1)), _arrow(m, i), np.zeros((1, 1))] for i in range(m)]
    A_blocks.append([np.eye(n), np.ones((1, 1)), np.zeros((m + 1, m + 1)), -np.ones((1, 1))])
    b = np.concatenate([np.zeros(m), [1.0]])
    q = _aux_problem(C_blocks, A_blocks, b, "dual-interior")
    try:
        tr = _solve_aux(q)
    except (NumericalError, InfeasibleAffineError) as exc:
        return Detection(None, np.nan, False, f"auxiliary failed: {exc}")
    y = tr.final.y[:m]
    lam = float(tr.final.y[m])
    cert = None
    if lam >= margin:
        S = sym(p.C - adjoint_map(p, y))
        if min_eig(S) >= margin:
            cert = (y, S)
    return Detection(cert, lam, tr.status is Status.CONVERGED, tr.status.value)


def detect_strong_feasibility(p: SdpProblem, side: Side, R: float = DEFAULT_R,
                              cert_margin: float = DEFAULT_MARGIN):
    """Interior point of the given side, or ``None``.

    Primal: ``X`` with ``A(X) = b`` and ``min_eig(X) >= cert_margin``.
    Dual: ``(y, S)`` with ``S = C - A^*(y)`` and ``min_eig(S) >= cert_margin``.
    """
    side = Side(side) if not isinstance(side, Side) else side
    det = _primal_interior(p, R, cert_margin) if side is Side.PRIMAL else _dual_interior(p, R, cert_margin)
    return det.certificate


# --------------------------------------------------------------------------
# classification


def _side_status(side: Side, feas: Detection, infeas: Detection) -> SideStatus:
    notes = [f"interior search: value {feas.value:.6g} ({feas.note})",
             f"separation search: value {infeas.value:.6g} ({infeas.note})"]
    if feas.certificate is not None and infeas.certificate is not None:
        raise InconsistencyError(f"{side.value} side has both an interior point and a separating ray")
    if feas.certificate is not None:
        return SideStatus(side, Verdict.STRONGLY_FEASIBLE, feas.certificate, notes)
    if infeas.certificate is not None:
        return SideStatus(side, Verdict.STRONGLY_INFEASIBLE, infeas.certificate, notes)
    return SideStatus(side, Verdict.SINGULAR_OR_UNDETERMINED, None, notes)


def _absent_certified(det: Detection, primal: bool) -> bool:
    if det.certificate is not None or not det.certified or np.isnan(det.value):
        return False
    # the penalised auxiliary bounds the exact one, so these values rule out a ray of size R
    return det.value < 1.0 - 1e-6 if primal else det.value > -1.0 + 1e-6


def classify(p: SdpProblem, R: float = DEFAULT_R, cert_margin: float = DEFAULT_MARGIN) -> Classification:
    """Sided verdicts plus the asymptotic primal-dual feasibility flag."""
    if not R > 0 or not cert_margin > 0:
        raise DomainError("R and cert_margin must be positive")
    pf = _primal_interior(p, R, cert_margin)
    pi = primal_infeasibility_search(p, R)
    df = _dual_interior(p, R, cert_margin)
    di = dual_infeasibility_search(p, R)
    primal = _side_status(Side.PRIMAL, pf, pi)
    dual = _side_status(Side.DUAL, df, di)
    if Verdict.STRONGLY_INFEASIBLE in (primal.verdict, dual.verdict):
        flag = Flag.NO
    elif primal.verdict is Verdict.STRONGLY_FEASIBLE and dual.verdict is Verdict.STRONGLY_FEASIBLE:
        flag = Flag.YES
    elif _absent_certified(pi, True) and _absent_certified(di, False):
        flag = Flag.YES
    else:
        flag = Flag.UNDETERMINED
    return Classification(primal, dual, flag)


def validate_certificate(p: SdpProblem, status: SideStatus, cert_margin: float = DEFAULT_MARGIN) -> bool:
    """Independent re-check of a reported certificate against its defining inequalities."""
    c = status.certificate
    if status.verdict is Verdict.SINGULAR_OR_UNDETERMINED:
        return c is None
    if status.verdict is Verdict.STRONGLY_INFEASIBLE:
        return _validate_primal_ray(p, c) if status.side is Side.PRIMAL else _validate_dual_ray(p, c)
    if status.side is Side.PRIMAL:
        return (np.linalg.norm(apply_map(p, c) - p.b) <= 1e-8 * (1 + np.linalg.norm(p.b))
                and min_eig(c) >= cert_margin)
    y, S = c
    return (np.linalg.norm(sym(p.C - adjoint_map(p, y)) - S) <= 1e-8 * (1 + np.linalg.norm(p.C))
            and min_eig(S) >= cert_margin)
