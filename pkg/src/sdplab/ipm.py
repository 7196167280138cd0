"""Infeasible primal-dual interior-point methods for the pair (P, D).

Two path followers share one Newton system.  The symmetrization uses the
scaling matrix ``P = X^{-1/2}``:

    H(X dS + dX S) = nu I - H(X S),   H(M) = (P M P^-1 + (P M P^-1)^T) / 2

together with full elimination of the primal and dual residuals.  Writing
``X = W W^T`` (Cholesky) and ``S_hat = W^T S W``, the first equation becomes
the Lyapunov equation ``dX_hat S_hat + S_hat dX_hat = 2 (nu I - S_hat - W^T dS W)``
for ``dX_hat = W^-1 dX W^-T``, which is solved in the eigenbasis of ``S_hat``.
``W^-1`` differs from ``X^{-1/2}`` by an orthogonal factor, which leaves the
symmetrized equation unchanged.
Eliminating ``dS`` and ``dX`` leaves an m-by-m positive definite Schur system
in ``dy``.

With an equal primal/dual stepsize the residuals of every iterate stay
proportional to the initial ones, ``r^k = t^k r^0`` with
``t^{k+1} = (1 - s^k) t^k``; the solvers carry ``t`` as part of the iterate.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np
import scipy.linalg

from .errors import (
    DimensionError,
    DomainError,
    InfeasibleAffineError,
    NotPositiveDefiniteError,
    NumericalError,
    NumericalFailure,
    SingularSystemError,
    StallError,
)
from .model import (
    ModifiedObjectives,
    PerturbationPair,
    SdpProblem,
    adjoint_map,
    apply_map,
    default_dirs,
    modified_objectives,
)
from .symmat import chol_or_none, eigh, inner, is_pd, min_eig, sym

log = logging.getLogger(__name__)

Direction = Tuple[np.ndarray, np.ndarray, np.ndarray]


@dataclass(frozen=True)
class IteratePoint:
    X: np.ndarray
    S: np.ndarray
    y: np.ndarray
    t: float = 1.0

    def __post_init__(self):
        X, S = sym(self.X), sym(self.S)
        if X.shape != S.shape:
            raise DimensionError("X and S must have the same dimension")
        y = np.array(self.y, dtype=float).reshape(-1)
        if self.t < 0:
            raise DomainError("t must be nonnegative")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "t", float(self.t))

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def gap(self) -> float:
        return inner(self.X, self.S)

    @property
    def mu(self) -> float:
        return self.gap / self.n


@dataclass(frozen=True)
class IpmParams:
    sigma: float = 0.3
    gamma: float = 0.4
    eta_gap: float = 0.01
    tau_boundary: float = 0.99
    max_iter: int = 500
    tol_gap: float = 1e-9
    tol_resid: float = 1e-9
    backtrack: float = 0.8
    max_backtracks: int = 30
    correctors: int = 1

    def __post_init__(self):
        for name in ("sigma", "gamma", "eta_gap", "tau_boundary", "backtrack"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise DomainError(f"{name} must lie in (0, 1), got {v}")
        if self.max_iter < 1 or self.max_backtracks < 1:
            raise DomainError("max_iter and max_backtracks must be positive")
        if self.tol_gap <= 0 or self.tol_resid <= 0:
            raise DomainError("tolerances must be positive")
        if self.correctors < 1:
            raise DomainError("correctors must be at least 1")


class Status(enum.Enum):
    CONVERGED = "Converged"
    STALLED = "Stalled"
    ITER_LIMIT = "IterLimit"
    NUMERICAL_FAILURE = "NumericalFailure"


@dataclass
class IpmTrace:
    iterates: List[IteratePoint]
    gaps: List[float]
    modified: List[ModifiedObjectives]
    status: Status
    direction_pair: PerturbationPair
    steps: List[float] = field(default_factory=list)
    kinds: List[str] = field(default_factory=list)
    newton_residuals: List[float] = field(default_factory=list)
    message: str = ""

    @property
    def final(self) -> IteratePoint:
        return self.iterates[-1]

    @property
    def final_modified(self) -> ModifiedObjectives:
        return self.modified[-1]

    def __len__(self) -> int:
        return len(self.iterates)


# --------------------------------------------------------------------------
# residuals and the affine part


def residuals(p: SdpProblem, pt: IteratePoint) -> Tuple[np.ndarray, np.ndarray]:
    """``r_p = A(X) - b`` and ``R_d = C - A^*(y) - S``."""
    if pt.n != p.n or pt.y.size != p.m:
        raise DimensionError("iterate does not match the problem dimensions")
    r_p = apply_map(p, pt.X) - p.b
    R_d = p.C - adjoint_map(p, pt.y) - pt.S
    return r_p, R_d


def find_affine_solution(p: SdpProblem) -> np.ndarray:
    """Minimum Frobenius-norm symmetric solution of ``A(X) = b``."""
    Amat = p.stacked().reshape(p.m, -1)
    x, *_ = np.linalg.lstsq(Amat, p.b, rcond=None)
    X = sym(x.reshape(p.n, p.n))
    err = np.linalg.norm(apply_map(p, X) - p.b)
    if err > 1e-10 * (1.0 + np.linalg.norm(p.b)):
        raise InfeasibleAffineError(f"A(X) = b is inconsistent (residual {err:.3e})")
    return X


# --------------------------------------------------------------------------
# starting points


@dataclass(frozen=True)
class AngleStart:
    """``(X_hat + rho sin(theta) I_p, C + rho cos(theta) I_d, 0)``; ``rho=None`` picks one."""

    theta: float
    rho: Optional[float] = None
    dirs: Optional[PerturbationPair] = None


@dataclass(frozen=True)
class IdentityStart:
    """``(rho0 I, rho1 I, 0)``."""

    rho0: float = 10.0
    rho1: float = 10.0


def _min_shift(M: np.ndarray, D: np.ndarray) -> float:
    """Smallest ``r >= 0`` with ``M + r D`` positive semidefinite (``D`` pd)."""
    L = np.linalg.cholesky(D)
    Li = scipy.linalg.solve_triangular(L, np.eye(len(D)), lower=True)
    return max(0.0, -min_eig(Li @ M @ Li.T))


def standard_start(p: SdpProblem, mode: Union[AngleStart, IdentityStart]):
    """Interior starting point with ``t = 1`` and its induced perturbation pair."""
    X_hat = find_affine_solution(p)
    y0 = np.zeros(p.m)
    if isinstance(mode, IdentityStart):
        if mode.rho0 <= 0 or mode.rho1 <= 0:
            raise DomainError("rho0 and rho1 must be positive")
        I_p = mode.rho0 * np.eye(p.n) - X_hat
        I_d = mode.rho1 * np.eye(p.n) - p.C
        if not is_pd(I_p) or not is_pd(I_d):
            raise NotPositiveDefiniteError(
                f"rho0={mode.rho0}, rho1={mode.rho1} too small for this problem")
        pt = IteratePoint(mode.rho0 * np.eye(p.n), mode.rho1 * np.eye(p.n), y0, 1.0)
        return pt, PerturbationPair(I_p, I_d)
    if isinstance(mode, AngleStart):
        theta = mode.theta
        if not 0.0 < theta < math.pi / 2:
            raise DomainError("theta must lie in (0, pi/2)")
        dirs = default_dirs(p, mode.dirs)
        sn, cs = math.sin(theta), math.cos(theta)
        rho = mode.rho
        if rho is None:
            need = max(_min_shift(X_hat, dirs.I_p) / sn, _min_shift(p.C, dirs.I_d) / cs)
            rho = 2.0 * need + 10.0
        X0 = X_hat + (rho * sn) * dirs.I_p
        S0 = p.C + (rho * cs) * dirs.I_d
        if not is_pd(X0) or not is_pd(S0):
            raise NotPositiveDefiniteError(f"rho={rho} too small for theta={theta}")
        pair = PerturbationPair((rho * sn) * dirs.I_p, (rho * cs) * dirs.I_d)
        return IteratePoint(X0, S0, y0, 1.0), pair
    raise TypeError(f"unknown start mode {mode!r}")


def default_identity_start(p: SdpProblem, floor: float = 10.0) -> IdentityStart:
    """IdentityStart with rho0, rho1 comfortably above the minimum the problem needs."""
    X_hat = find_affine_solution(p)
    lam_x = max(np.linalg.eigvalsh(X_hat)[-1], 0.0)
    lam_c = max(np.linalg.eigvalsh(p.C)[-1], 0.0)
    return IdentityStart(max(floor, 2.0 * lam_x + 1.0), max(floor, 2.0 * lam_c + 1.0))


# --------------------------------------------------------------------------
# Newton system


def _solve_direction(p: SdpProblem, X: np.ndarray, S: np.ndarray, nu: float,
                     r_p: np.ndarray, R_d: np.ndarray) -> Direction:
    """Solve ``A(dX) = -r_p``, ``dS + A^*(dy) = R_d`` and the symmetrized centering equation."""
    n, m = p.n, p.m
    # X = L L^T gives L^{-1} = U^T X^{-1/2} with U orthogonal; H commutes with
    # that rotation, so P = L^{-1} yields the same direction as P = X^{-1/2}
    # while staying usable when X is too ill-conditioned for eigh
    W = _chol(X)
    if W is None:
        raise NotPositiveDefiniteError("X is not positive definite")
    S_hat = sym(W.T @ S @ W)
    lam, Q = eigh(S_hat)
    if lam[0] <= 0:
        raise NotPositiveDefiniteError("S is not positive definite")
    D = lam[:, None] + lam[None, :]
    WQ = W @ Q
    Ak = p.stacked()
    G = np.einsum("ai,kab,bj->kij", WQ, Ak, WQ)  # Q^T W^T A_k W Q
    G = 0.5 * (G + np.transpose(G, (0, 2, 1)))
    K = 2.0 * (nu * np.eye(n) - np.diag(lam) - WQ.T @ R_d @ WQ)
    K = 0.5 * (K + K.T)
    GD = G / D
    M = 2.0 * np.einsum("kij,lij->kl", G, GD)
    M = 0.5 * (M + M.T)
    rhs = -r_p - np.einsum("kij,ij->k", GD, K)
    try:
        cf = scipy.linalg.cho_factor(M, lower=True, check_finite=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise SingularSystemError(f"Schur complement not positive definite: {exc}") from exc

    def back(dy):
        Z = (K + 2.0 * np.einsum("k,kij->ij", dy, G)) / D
        dX = sym(WQ @ Z @ WQ.T)
        return dX

    dy = scipy.linalg.cho_solve(cf, rhs)
    if not np.all(np.isfinite(dy)):
        raise SingularSystemError("Schur solve produced non-finite values")
    # one step of iterative refinement against the primal equation
    dX = back(dy)
    err = apply_map(p, dX) + r_p
    if np.linalg.norm(err) > 0:
        dy = dy - scipy.linalg.cho_solve(cf, err)
        dX = back(dy)
    dS = sym(R_d - adjoint_map(p, dy))
    return dX, dS, dy


def newton_direction(p: SdpProblem, pt: IteratePoint, nu_target: float, *,
                     keep_residuals: bool = False) -> Direction:
    """Newton direction toward the ``nu_target`` center.

    By default both residuals are eliminated by a full step.  With
    ``keep_residuals`` the linear equations become homogeneous, so a step
    leaves the residuals (and hence ``t``) unchanged.
    """
    if not _interior(pt.X) or not _interior(pt.S):
        raise NotPositiveDefiniteError("newton_direction needs X and S positive definite")
    if keep_residuals:
        r_p, R_d = np.zeros(p.m), np.zeros((p.n, p.n))
    else:
        r_p, R_d = residuals(p, pt)
    return _solve_direction(p, pt.X, pt.S, nu_target, r_p, R_d)


def symmetrized_product(X: np.ndarray, M: np.ndarray) -> np.ndarray:
    """``H(M)`` with ``P = X^{-1/2}``."""
    wx, Qx = eigh(sym(X))
    P = (Qx / np.sqrt(wx)) @ Qx.T
    Pinv = (Qx * np.sqrt(wx)) @ Qx.T
    T = P @ M @ Pinv
    return 0.5 * (T + T.T)


def _rotated_h(X: np.ndarray, M: np.ndarray) -> np.ndarray:
    # H with P = L^{-1}; an orthogonal rotation of H with P = X^{-1/2}, so
    # Frobenius norms agree
    L = _chol(X)
    if L is None:
        raise NotPositiveDefiniteError("X is not positive definite")
    T = scipy.linalg.solve_triangular(L, M @ L, lower=True)
    return 0.5 * (T + T.T)


def newton_residual(p: SdpProblem, pt: IteratePoint, direction: Direction, nu_target: float,
                    *, keep_residuals: bool = False) -> float:
    """Largest relative residual of the three defining equations of a direction."""
    dX, dS, dy = direction
    X, S, y = pt.X, pt.S, pt.y
    if keep_residuals:
        r_p0, R_d0 = residuals(p, pt)
        target_b = p.b + r_p0
        target_C = p.C - R_d0
    else:
        target_b, target_C = p.b, p.C
    AX = apply_map(p, X + dX)
    ra = np.linalg.norm(AX - target_b) / (
        1.0 + np.linalg.norm(target_b) + np.linalg.norm(apply_map(p, dX)))
    Ay = adjoint_map(p, y + dy)
    Rb = target_C - Ay - (S + dS)
    rb = np.linalg.norm(Rb) / (
        1.0 + np.linalg.norm(target_C) + np.linalg.norm(Ay) + np.linalg.norm(S) + np.linalg.norm(dS))
    HL = _rotated_h(X, X @ dS + dX @ S)
    H0 = _rotated_h(X, X @ S)
    n = p.n
    Rc = HL + H0 - nu_target * np.eye(n)
    # backward-error scale: forming X dS + dX S in floating point already costs
    # eps * (|X||dS| + |dX||S|), which dominates H(XS) once the gap is tiny
    nX, nS = np.linalg.norm(X), np.linalg.norm(S)
    scale_c = (nu_target * math.sqrt(n) + np.linalg.norm(H0) + np.linalg.norm(HL)
               + nX * nS + nX * np.linalg.norm(dS) + np.linalg.norm(dX) * nS)
    rc = np.linalg.norm(Rc) / scale_c
    return float(max(ra, rb, rc))


# --------------------------------------------------------------------------
# stepsize


def _interior(M: np.ndarray) -> bool:
    # Cholesky success is the interiority test; an eigenvalue floor relative
    # to ||M|| rejects the badly conditioned iterates of singular problems.
    return chol_or_none(sym(M)) is not None


def _max_step(M: np.ndarray, dM: np.ndarray) -> float:
    L = chol_or_none(M)
    if L is None:
        raise NotPositiveDefiniteError("current iterate is not positive definite")
    Li = scipy.linalg.solve_triangular(L, np.eye(len(M)), lower=True)
    lo = min_eig(Li @ dM @ Li.T)
    return math.inf if lo >= 0 else -1.0 / lo


def centrality(X: np.ndarray, S: np.ndarray) -> Tuple[float, float]:
    """``(||X^{1/2} S X^{1/2} - mu I||_F, mu)``."""
    n = X.shape[0]
    wx, Qx = eigh(X)
    W = (Qx * np.sqrt(np.maximum(wx, 0.0))) @ Qx.T
    V = sym(W @ S @ W)
    mu = float(np.trace(V)) / n
    return float(np.linalg.norm(V - mu * np.eye(n))), mu


def _chol(M: np.ndarray) -> Optional[np.ndarray]:
    try:
        L = np.linalg.cholesky(M)
    except np.linalg.LinAlgError:
        return None
    return L if np.isfinite(L).all() else None


def _admissible(X, S, dX, dS, s, radius, gap0, eta_gap) -> bool:
    Xn = X + s * dX
    Sn = S + s * dS
    if eta_gap is not None and np.vdot(Xn, Sn) > (1.0 - eta_gap * s) * gap0:
        return False
    Lx = _chol(Xn)
    if Lx is None or _chol(Sn) is None:
        return False
    # L^T S L has the spectrum of X^{1/2} S X^{1/2}, so the Frobenius
    # distance to mu I is the same and no eigendecomposition is needed
    V = Lx.T @ Sn @ Lx
    mu = np.trace(V) / len(V)
    if mu <= 0:
        return False
    V.flat[::len(V) + 1] -= mu
    return math.sqrt(np.vdot(V, V)) <= radius * mu


def step_length(pt: IteratePoint, direction: Direction, params: IpmParams, *,
                radius: Optional[float] = None, gap_contraction: bool = True) -> float:
    """Largest backtracked stepsize meeting positivity, neighborhood and gap predicates.

    The neighborhood radius defaults to ``max(gamma, delta)`` where ``delta``
    is the relative centrality of the current point, so a start outside the
    gamma-neighborhood is allowed to move without getting worse.
    """
    dX, dS, _ = direction
    X, S = pt.X, pt.S
    scale = max(1.0, np.linalg.norm(X), np.linalg.norm(S))
    if np.linalg.norm(dX) + np.linalg.norm(dS) <= 1e-14 * scale:
        return 1.0
    s_max = min(_max_step(X, dX), _max_step(S, dS))
    s = min(1.0, params.tau_boundary * s_max)
    if radius is None:
        dist, mu = centrality(X, S)
        radius = max(params.gamma, dist / mu if mu > 0 else params.gamma)
    gap0 = inner(X, S)
    eta = params.eta_gap if gap_contraction else None
    for _ in range(params.max_backtracks + 1):
        if s < 1e-12:
            break
        if _admissible(X, S, dX, dS, s, radius, gap0, eta):
            return s
        s *= params.backtrack
    raise StallError(f"no admissible stepsize (last tried s={s:.3e})")


# --------------------------------------------------------------------------
# drivers


def _check_start(p: SdpProblem, start: IteratePoint, dirs: PerturbationPair) -> None:
    if start.n != p.n or start.y.size != p.m:
        raise DimensionError("start does not match the problem")
    if dirs.n != p.n:
        raise DimensionError("direction pair does not match the problem")
    if not _interior(start.X) or not _interior(start.S):
        raise NotPositiveDefiniteError("start must be interior (X, S positive definite)")
    r_p, R_d = residuals(p, start)
    want_p = start.t * apply_map(p, dirs.I_p)
    want_d = -start.t * dirs.I_d
    scale = 1.0 + np.linalg.norm(p.b) + np.linalg.norm(start.X) + np.linalg.norm(dirs.I_p)
    scale_d = 1.0 + np.linalg.norm(p.C) + np.linalg.norm(start.S) + np.linalg.norm(dirs.I_d)
    if (np.linalg.norm(r_p - want_p) > 1e-8 * scale
            or np.linalg.norm(R_d - want_d) > 1e-8 * scale_d):
        raise DomainError("direction pair is not the one induced by the starting point")


class _Recorder:
    def __init__(self, p: SdpProblem, dirs: PerturbationPair):
        self.p, self.dirs = p, dirs
        self.iterates: List[IteratePoint] = []
        self.gaps: List[float] = []
        self.modified: List[ModifiedObjectives] = []
        self.steps: List[float] = []
        self.kinds: List[str] = []
        self.newton: List[float] = []

    def push(self, pt: IteratePoint) -> None:
        self.iterates.append(pt)
        self.gaps.append(pt.gap)
        self.modified.append(modified_objectives(self.p, self.dirs, pt.t, 1.0, 1.0, pt.X, pt.y))

    def trace(self, status: Status, message: str = "") -> IpmTrace:
        return IpmTrace(self.iterates, self.gaps, self.modified, status, self.dirs,
                        self.steps, self.kinds, self.newton, message)


def _done(pt: IteratePoint, params: IpmParams) -> bool:
    return pt.gap <= params.tol_gap and pt.t <= params.tol_resid


def _limit_status(rec: _Recorder, window: int = 50) -> Status:
    ts = [it.t for it in rec.iterates[-window:]]
    if len(ts) >= 2 and ts[0] > 0 and ts[-1] > 0.99 * ts[0]:
        return Status.STALLED
    return Status.ITER_LIMIT


def _advance(pt: IteratePoint, direction: Direction, s: float, t_new: float) -> IteratePoint:
    dX, dS, dy = direction
    return IteratePoint(pt.X + s * dX, pt.S + s * dS, pt.y + s * dy, t_new)


def run_zhang(p: SdpProblem, start: IteratePoint, dirs: PerturbationPair,
              params: Optional[IpmParams] = None) -> IpmTrace:
    """Infeasible path following with the ``P = X^{-1/2}`` symmetrization."""
    params = params or IpmParams()
    _check_start(p, start, dirs)
    rec = _Recorder(p, dirs)
    pt = start
    rec.push(pt)
    for _ in range(params.max_iter):
        if _done(pt, params):
            return rec.trace(Status.CONVERGED)
        nu = params.sigma * pt.mu
        try:
            d = newton_direction(p, pt, nu)
            s = step_length(pt, d, params)
        except StallError as exc:
            return rec.trace(Status.STALLED, str(exc))
        except NumericalError as exc:
            return rec.trace(Status.NUMERICAL_FAILURE, str(exc))
        rec.newton.append(newton_residual(p, pt, d, nu))
        pt = _advance(pt, d, s, (1.0 - s) * pt.t)
        rec.steps.append(s)
        rec.kinds.append("zhang")
        rec.push(pt)
    if _done(pt, params):
        return rec.trace(Status.CONVERGED)
    return rec.trace(_limit_status(rec), "iteration limit reached")


def run_potra_sheng(p: SdpProblem, start: IteratePoint, dirs: PerturbationPair,
                    params: Optional[IpmParams] = None) -> IpmTrace:
    """Predictor-corrector following ``XS ~ t-scaled center`` with residuals ``t r^0``.

    Predictor steps aim at ``nu = 0`` and shrink ``t``; corrector steps keep
    the residuals (``t`` frozen) and re-center at ``nu = t * mu0``, the point
    of the path through the start with the same ``t``.  The gap is not forced
    to decrease monotonically.
    """
    params = params or IpmParams()
    _check_start(p, start, dirs)
    rec = _Recorder(p, dirs)
    pt = start
    rec.push(pt)
    wide = min(0.95, 2.0 * params.gamma)
    # the path XS = t * mu0 I through the start; correctors aim at its frozen-t point
    mu0 = start.mu / start.t if start.t > 0 else start.mu
    it = 0
    while it < params.max_iter:
        if _done(pt, params):
            return rec.trace(Status.CONVERGED)
        try:
            d = newton_direction(p, pt, 0.0)
            dist, mu = centrality(pt.X, pt.S)
            s = step_length(pt, d, params, radius=max(wide, dist / mu), gap_contraction=False)
        except StallError as exc:
            return rec.trace(Status.STALLED, str(exc))
        except NumericalError as exc:
            return rec.trace(Status.NUMERICAL_FAILURE, str(exc))
        rec.newton.append(newton_residual(p, pt, d, 0.0))
        pt = _advance(pt, d, s, (1.0 - s) * pt.t)
        rec.steps.append(s)
        rec.kinds.append("predictor")
        rec.push(pt)
        it += 1
        for _ in range(params.correctors):
            if it >= params.max_iter or _done(pt, params):
                break
            try:
                nu = pt.t * mu0 if pt.t > 0 else pt.mu
                d = newton_direction(p, pt, nu, keep_residuals=True)
                s = step_length(pt, d, params, gap_contraction=False)
            except StallError as exc:
                return rec.trace(Status.STALLED, str(exc))
            except NumericalError as exc:
                return rec.trace(Status.NUMERICAL_FAILURE, str(exc))
            rec.newton.append(newton_residual(p, pt, d, nu, keep_residuals=True))
            pt = _advance(pt, d, s, pt.t)
            rec.steps.append(s)
            rec.kinds.append("corrector")
            rec.push(pt)
            it += 1
    if _done(pt, params):
        return rec.trace(Status.CONVERGED)
    return rec.trace(_limit_status(rec), "iteration limit reached")


def central_point(p_perturbed: SdpProblem, nu: float, warm: Optional[IteratePoint] = None,
                  params: Optional[IpmParams] = None, max_iter: int = 300) -> IteratePoint:
    """Approximate the feasible center ``X^{1/2} S X^{1/2} = nu I`` of a strongly feasible pair."""
    if nu <= 0:
        raise DomainError("nu must be positive")
    p = p_perturbed
    params = params or IpmParams()
    if warm is None:
        mode = default_identity_start(p)
        pt, _ = standard_start(p, mode)
    else:
        pt = warm
    b_scale = 1.0 + np.linalg.norm(p.b)
    c_scale = 1.0 + np.linalg.norm(p.C)
    for _ in range(max_iter):
        r_p, R_d = residuals(p, pt)
        dist = np.linalg.norm(sym(_sqrt_psd(pt.X) @ pt.S @ _sqrt_psd(pt.X)) - nu * np.eye(p.n))
        if (dist <= 1e-8 * nu and np.linalg.norm(r_p) <= 1e-10 * b_scale
                and np.linalg.norm(R_d) <= 1e-10 * c_scale):
            return IteratePoint(pt.X, pt.S, pt.y, 0.0)
        target = max(nu, params.sigma * pt.mu)
        try:
            d = newton_direction(p, pt, target)
            try:
                s = step_length(pt, d, params, gap_contraction=False)
            except StallError:
                s = min(1.0, params.tau_boundary * min(_max_step(pt.X, d[0]), _max_step(pt.S, d[1])))
        except NumericalError as exc:
            raise NumericalFailure(f"central point solve failed: {exc}") from exc
        pt = _advance(pt, d, s, (1.0 - s) * pt.t)
    raise NumericalFailure(f"central point for nu={nu} did not converge in {max_iter} iterations")


def _sqrt_psd(X: np.ndarray) -> np.ndarray:
    w, Q = eigh(sym(X))
    return (Q * np.sqrt(np.maximum(w, 0.0))) @ Q.T
