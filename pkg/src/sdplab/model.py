"""Problem data, the linear map A and its adjoint, and the regularized pair.

The primal is ``min C.X  s.t.  A_i.X = b_i, X psd`` and the dual is
``max b'y  s.t.  C - sum_i A_i y_i = S, S psd``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionError, DomainError
from .symmat import inner, min_eig, sym


@dataclass(frozen=True)
class SdpProblem:
    C: np.ndarray
    A: tuple
    b: np.ndarray
    name: str = ""

    def __post_init__(self):
        C = sym(self.C)
        A = tuple(sym(Ai) for Ai in self.A)
        b = np.array(self.b, dtype=float).reshape(-1)
        if len(A) < 1:
            raise DimensionError("at least one constraint is required")
        if len(A) != b.size:
            raise DimensionError(f"{len(A)} constraint matrices but b has length {b.size}")
        for Ai in A:
            if Ai.shape != C.shape:
                raise DimensionError(f"constraint of shape {Ai.shape} vs objective {C.shape}")
        C.setflags(write=False)
        b.setflags(write=False)
        for Ai in A:
            Ai.setflags(write=False)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return self.C.shape[0]

    @property
    def m(self) -> int:
        return len(self.A)

    @property
    def dim(self) -> int:
        return self.n

    def stacked(self) -> np.ndarray:
        """Constraint matrices as an (m, n, n) array."""
        return np.stack(self.A)

    def gram(self) -> np.ndarray:
        At = self.stacked().reshape(self.m, -1)
        return At @ At.T

    def lin_indep(self, tol: float = 1e-10) -> bool:
        return bool(np.linalg.eigvalsh(self.gram())[0] > tol)


@dataclass(frozen=True)
class PerturbationPair:
    """Positive definite perturbation directions ``(I_p, I_d)``."""

    I_p: np.ndarray
    I_d: np.ndarray

    def __post_init__(self):
        I_p, I_d = sym(self.I_p), sym(self.I_d)
        if I_p.shape != I_d.shape:
            raise DimensionError("I_p and I_d must have the same dimension")
        for name, M in (("I_p", I_p), ("I_d", I_d)):
            if min_eig(M) <= 0.0:
                raise DomainError(f"{name} must be positive definite")
            M.setflags(write=False)
        object.__setattr__(self, "I_p", I_p)
        object.__setattr__(self, "I_d", I_d)

    @classmethod
    def identity(cls, n: int) -> "PerturbationPair":
        return cls(np.eye(n), np.eye(n))

    @property
    def n(self) -> int:
        return self.I_p.shape[0]


@dataclass(frozen=True)
class ModifiedObjectives:
    primal: float
    dual: float
    gap: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "gap", self.primal - self.dual)


def default_dirs(p: SdpProblem, dirs: Optional[PerturbationPair] = None) -> PerturbationPair:
    if dirs is None:
        return PerturbationPair.identity(p.n)
    if dirs.n != p.n:
        raise DimensionError(f"perturbation pair has dim {dirs.n}, problem has {p.n}")
    return dirs


def apply_map(p: SdpProblem, Y) -> np.ndarray:
    """``A(Y) = (A_1.Y, ..., A_m.Y)``."""
    Y = np.asarray(Y, dtype=float)
    if Y.shape != (p.n, p.n):
        raise DimensionError(f"expected {(p.n, p.n)} matrix, got {Y.shape}")
    return np.einsum("kij,ij->k", p.stacked(), Y)


def adjoint_map(p: SdpProblem, y) -> np.ndarray:
    """``sum_i A_i y_i``."""
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.size != p.m:
        raise DimensionError(f"expected vector of length {p.m}, got {y.size}")
    return sym(np.einsum("k,kij->ij", y, p.stacked()))


def perturb(p: SdpProblem, dirs: Optional[PerturbationPair], eps: float, eta: float) -> SdpProblem:
    """The pair P(eps, eta) / D(eps, eta) as a new problem.

    Objective becomes ``C + eps*I_d`` and the right-hand side ``b + eta*A(I_p)``.
    """
    if eps < 0 or eta < 0:
        raise DomainError(f"perturbation amounts must be nonnegative, got eps={eps}, eta={eta}")
    dirs = default_dirs(p, dirs)
    if eps == 0 and eta == 0:
        return p
    C = p.C + eps * dirs.I_d
    b = p.b + eta * apply_map(p, dirs.I_p)
    return SdpProblem(C, p.A, b, name=p.name)


def modified_objectives(p: SdpProblem, dirs: PerturbationPair, t: float, alpha: float,
                        beta: float, X, y) -> ModifiedObjectives:
    """``(C + t*alpha*I_d).X`` and ``sum_i (b_i + t*beta*A_i.I_p) y_i``."""
    if t < 0 or alpha < 0 or beta < 0:
        raise DomainError("t, alpha and beta must be nonnegative")
    dirs = default_dirs(p, dirs)
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).reshape(-1)
    if X.shape != (p.n, p.n) or y.size != p.m:
        raise DimensionError("iterate dimensions do not match the problem")
    primal = inner(p.C + (t * alpha) * dirs.I_d, X)
    dual = float(np.dot(p.b + (t * beta) * apply_map(p, dirs.I_p), y))
    return ModifiedObjectives(primal, dual)


def shifted_primal_value(v: float, eps: float, eta: float, p: SdpProblem,
                         dirs: Optional[PerturbationPair] = None) -> float:
    """``v - eta*C.I_p - eta*eps*I_d.I_p``; nonincreasing in eta when v = v(eps, eta)."""
    dirs = default_dirs(p, dirs)
    if eta == 0:
        return v
    return v - eta * inner(p.C, dirs.I_p) - eta * eps * inner(dirs.I_d, dirs.I_p)
