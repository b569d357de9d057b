"""Discrete-time state-space systems: simulation, controllability, behaviors.

A system x(t+1) = A x(t) + B u(t), y(t) = C x(t) + D u(t) is the
quadruple (A, B, C, D). The L-restricted behavior is the set of all
stacked L-long input-output windows the system can produce from some
initial state; ``behavior_basis`` returns an explicit matrix whose
column span equals it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .defaults import RTOL, SEED
from .errors import ValidationError
from .numkit import as_matrix, as_vector, rank_report
from .signals import Signal

__all__ = [
    "StateSpaceSystem",
    "Trajectory",
    "BehaviorBasis",
    "simulate",
    "controllability_matrix",
    "is_controllable",
    "is_cyclic",
    "observability_matrix",
    "markov_toeplitz",
    "behavior_basis",
]


@dataclass(frozen=True)
class StateSpaceSystem:
    """Quadruple (A, B, C, D) with shapes (n,n), (n,m), (p,n), (p,m)."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        A = as_matrix(self.A, "A")
        B = as_matrix(self.B, "B")
        C = as_matrix(self.C, "C")
        D = as_matrix(self.D, "D")
        n = A.shape[0]
        if A.shape != (n, n):
            raise ValidationError(f"A must be square, got {A.shape}")
        if B.ndim != 2 or B.shape[0] != n:
            raise ValidationError(f"B must be {n}xm, got {B.shape}")
        if C.shape[1] != n:
            raise ValidationError(f"C must be px{n}, got {C.shape}")
        if D.shape != (C.shape[0], B.shape[1]):
            raise ValidationError(f"D must be {C.shape[0]}x{B.shape[1]}, got {D.shape}")
        for name, M in (("A", A), ("B", B), ("C", C), ("D", D)):
            M = M.copy()
            M.setflags(write=False)
            object.__setattr__(self, name, M)

    @classmethod
    def from_state_pair(cls, A, B) -> "StateSpaceSystem":
        """System whose output is the full state: (A, B, I, 0)."""
        A = as_matrix(A, "A")
        B = as_matrix(B, "B")
        if B.shape[0] != A.shape[0] and B.ndim == 2 and B.shape == (1, A.shape[0]):
            B = B.T
        n = A.shape[0]
        return cls(A, B, np.eye(n), np.zeros((n, B.shape[1])))

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    @property
    def p(self) -> int:
        return self.C.shape[0]

    def to_dict(self):
        return {
            "n": self.n, "m": self.m, "p": self.p,
            "A": self.A.tolist(), "B": self.B.tolist(),
            "C": self.C.tolist(), "D": self.D.tolist(),
        }


@dataclass(frozen=True)
class Trajectory:
    """Input u(0..T-1), state x(0..T), output y(0..T-1) of one simulation."""

    u: Signal
    x: Signal
    y: Signal


@dataclass(frozen=True)
class BehaviorBasis:
    """Explicit basis matrix for the L-restricted input-output behavior.

    ``basis`` is [[I_{Lm}, 0], [T_L, O_L]] where O_L stacks C, CA, ...,
    CA^{L-1} and T_L is the block-Toeplitz of Markov parameters D, CB,
    CAB, ...; its column span is the behavior and ``dim`` its dimension
    Lm + rank(O_L).
    """

    L: int
    basis: np.ndarray
    dim: int


def simulate(sys: StateSpaceSystem, x0, u: Signal) -> Trajectory:
    """Run the state recursion from x0 under input u.

    The returned state signal has length T+1 (the post-input state x(T)
    is kept); the output has length T.
    """
    if not isinstance(u, Signal):
        u = Signal(u)
    x0 = as_vector(x0, "x0")
    if u.dim != sys.m:
        raise ValidationError(f"input dim {u.dim} does not match system m={sys.m}")
    if x0.size != sys.n:
        raise ValidationError(f"x0 size {x0.size} does not match system n={sys.n}")
    T = u.length
    x = np.empty((T + 1, sys.n))
    y = np.empty((T, sys.p))
    x[0] = x0
    for t in range(T):
        y[t] = sys.C @ x[t] + sys.D @ u.samples[t]
        x[t + 1] = sys.A @ x[t] + sys.B @ u.samples[t]
    return Trajectory(u=u, x=Signal(x), y=Signal(y))


def controllability_matrix(A, B) -> np.ndarray:
    """Kalman matrix [B, AB, ..., A^(n-1) B]."""
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    if B.ndim == 2 and B.shape[0] != A.shape[0] and B.shape[1] == A.shape[0]:
        B = B.T
    n = A.shape[0]
    blocks = [B]
    for _ in range(n - 1):
        blocks.append(A @ blocks[-1])
    return np.hstack(blocks)


def is_controllable(A, B, rtol=RTOL):
    """Kalman rank test; returns (verdict, RankReport).

    For n > 6 the powers are taken of A divided by its spectral-radius
    estimate so overflow cannot distort the test; blockwise column
    scaling preserves the span, hence the rank.
    """
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    if B.ndim == 2 and B.shape[0] != A.shape[0] and B.shape[1] == A.shape[0]:
        B = B.T
    n = A.shape[0]
    if B.shape[0] != n:
        raise ValidationError(f"B must have {n} rows, got {B.shape}")
    As = A
    if n > 6:
        rho = float(np.abs(np.linalg.eigvals(A)).max()) if n else 0.0
        if rho > 1.0:
            As = A / rho
    rep = rank_report(controllability_matrix(As, B), rtol)
    return rep.rank == n, rep


def is_cyclic(A, rtol=RTOL, rng=None):
    """Whether some vector zeta makes (A, zeta) controllable.

    Returns (verdict, zeta) with zeta None on a negative verdict. The
    last canonical basis vector is tried first (it witnesses every
    companion/Jordan form), then 16 Gaussian draws; cyclicity holds for
    generic zeta whenever it holds at all, and the largest Krylov rank
    seen across attempts estimates the minimal-polynomial degree, so a
    16-fold failure makes the negative verdict safe.
    """
    A = as_matrix(A, "A")
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValidationError("A must be square")
    if rng is None:
        rng = np.random.default_rng(SEED)
    e_n = np.zeros((n, 1))
    e_n[-1, 0] = 1.0
    candidates = [e_n] + [rng.standard_normal((n, 1)) for _ in range(16)]
    for zeta in candidates:
        ok, _ = is_controllable(A, zeta, rtol)
        if ok:
            return True, zeta.reshape(-1)
    return False, None


def observability_matrix(C, A, L) -> np.ndarray:
    """Stack of C, CA, ..., CA^(L-1); shape (L*p, n)."""
    C = as_matrix(C, "C")
    A = as_matrix(A, "A")
    blocks = [C]
    for _ in range(L - 1):
        blocks.append(blocks[-1] @ A)
    return np.vstack(blocks)


def markov_toeplitz(sys: StateSpaceSystem, L) -> np.ndarray:
    """Lower block-triangular Toeplitz of the first L Markov parameters.

    Block (i, j) is D on the diagonal and CA^(i-j-1)B below it; maps a
    stacked input window to the forced part of the output window.
    """
    p, m = sys.p, sys.m
    markov = [sys.D]
    power = None
    for _ in range(L - 1):
        power = sys.B if power is None else sys.A @ power
        markov.append(sys.C @ power)
    T = np.zeros((L * p, L * m))
    for i in range(L):
        for j in range(i + 1):
            T[i * p:(i + 1) * p, j * m:(j + 1) * m] = markov[i - j]
    return T


def behavior_basis(sys: StateSpaceSystem, L, rtol=RTOL) -> BehaviorBasis:
    """Basis whose column span is the L-restricted input-output behavior."""
    if L < 1:
        raise ValidationError("L must be at least 1")
    O = observability_matrix(sys.C, sys.A, L)
    T = markov_toeplitz(sys, L)
    Lm = L * sys.m
    top = np.hstack([np.eye(Lm), np.zeros((Lm, sys.n))])
    bottom = np.hstack([T, O])
    dim = Lm + rank_report(O, rtol).rank
    return BehaviorBasis(L=L, basis=np.vstack([top, bottom]), dim=dim)
