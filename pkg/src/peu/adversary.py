"""Constructive counterexamples for inputs that are not exciting enough.

Given an input that is not persistently exciting of order n+L, this
module builds a controllable pair (A, B) and an initial state whose
input-state data is provably rank-deficient, certified by explicit
annihilator vectors (v, w). The construction runs off a left-kernel
vector eta of the depth-(n+L) input Hankel matrix: A is chosen cyclic
with spectrum avoiding the root set of eta's vector polynomial, a
backward matrix recursion produces B and the initial state, and a
Krylov solve produces the annihilators. The state-level certificate
extends to an output-level one (first output row = w) showing the data
span misses part of the behavior, and specializes to a depth-0 variant
(state Hankel rank deficiency) and to a dense single-input family where
the user picks (A, B).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .defaults import CLUSTER_RADIUS, RTOL, SEED, TOL_CERT
from .errors import (
    ConstructionError,
    EigenvalueConflictError,
    NearSingularError,
    PersistentlyExcitingError,
    ValidationError,
)
from .flemma import LemmaCheck, check_behavior_equality
from .lti import StateSpaceSystem, is_controllable, simulate
from .numkit import (
    RankReport,
    RootSet,
    as_matrix,
    as_vector,
    lambda_set,
    rank_report,
    kernel_basis,
    smallest_right_singular_vector,
)
from .signals import Signal, hankel, is_pe, stack

__all__ = [
    "CounterexampleCertificate",
    "OutputCounterexample",
    "CloudPoint",
    "CloudResult",
    "construct_certificate",
    "construct_certificate_l0",
    "extend_to_output",
    "single_input_family",
    "sample_system_cloud",
]


@dataclass(frozen=True)
class CounterexampleCertificate:
    """Full output of one counterexample construction, with its evidence.

    ``E`` holds the recursion matrices in descending index order
    E_{n+L-1}, ..., E_{-1} (so ``E[-1]`` is B). ``eta``, ``lam`` and
    ``E`` are None on the short-data branch (T < n+L-1), where a stock
    controllable pair suffices because the state Hankel matrix cannot
    have full row rank. (v, w) is stored scaled to unit w; xi keeps the
    raw Krylov solve.
    """

    n: int
    m: int
    L: int
    T: int
    eta: Optional[np.ndarray]      # (n+L, m), rows eta_0..eta_{n+L-1}
    lam: Optional[RootSet]
    A: np.ndarray
    zeta: np.ndarray
    E: Optional[tuple]             # (E_{n+L-1}, ..., E_{-1}), each (n, m)
    B: np.ndarray
    x0: np.ndarray
    xi: np.ndarray
    v: np.ndarray                  # length L*m
    w: np.ndarray                  # length n, unit norm
    residual_annihilation: float
    rank_deficit_confirmed: bool
    short_data_case: bool
    states: np.ndarray             # x(0)..x(T-L) actually certified
    stacked_rank: RankReport
    residuals: dict
    seed: int
    rtol: float
    tol_cert: float
    cluster_radius: float

    def state_pair(self) -> StateSpaceSystem:
        """The certified pair as a state-output system (A, B, I, 0)."""
        return StateSpaceSystem.from_state_pair(self.A, self.B)

    def to_dict(self):
        return {
            "n": self.n, "m": self.m, "L": self.L, "T": self.T,
            "short_data_case": self.short_data_case,
            "eta": None if self.eta is None else self.eta.tolist(),
            "lambda": None if self.lam is None else self.lam.to_dict(),
            "A": self.A.tolist(),
            "zeta": self.zeta.tolist(),
            "E": None if self.E is None else [Ei.tolist() for Ei in self.E],
            "B": self.B.tolist(),
            "x0": self.x0.tolist(),
            "xi": self.xi.tolist(),
            "v": self.v.tolist(),
            "w": self.w.tolist(),
            "residual_annihilation": self.residual_annihilation,
            "rank_deficit_confirmed": self.rank_deficit_confirmed,
            "states": self.states.tolist(),
            "stacked_rank": self.stacked_rank.to_dict(),
            "residuals": dict(self.residuals),
            "seed": self.seed,
            "rtol": self.rtol,
            "tol_cert": self.tol_cert,
            "cluster_radius": self.cluster_radius,
        }


@dataclass(frozen=True)
class OutputCounterexample:
    """Single-output system on which the certified data misses the behavior.

    ``annihilator`` kills every column of the stacked input-output
    Hankel matrix, while the witness window (zero input from an initial
    state aligned with w) produces ``separation_value`` = 1 against it,
    so the data span is a proper subspace of the behavior.
    """

    sys: StateSpaceSystem
    y: Signal
    annihilator: np.ndarray
    witness_u: Signal
    witness_x0: np.ndarray
    witness_y: Signal
    separation_value: float
    residual_annihilation: float
    behavior_check: LemmaCheck


@dataclass(frozen=True)
class CloudPoint:
    """One scalar-state system from the dense counterexample family."""

    a: float
    b: np.ndarray
    x0: float
    verified: bool


@dataclass(frozen=True)
class CloudResult:
    points: tuple
    n_skipped: int

    @property
    def verified_fraction(self) -> float:
        if not self.points:
            return 0.0
        return sum(p.verified for p in self.points) / len(self.points)


def _jordan_block(lam, n):
    J = np.eye(n) * lam
    if n > 1:
        J += np.diag(np.ones(n - 1), 1)
    return J


def _lambda0_candidates():
    """Deterministic eigenvalue scan 0, 1, -1, 2, -2, ..."""
    yield 0.0
    k = 1
    while True:
        yield float(k)
        yield float(-k)
        k += 1


def _krylov(A, zeta, count):
    cols = [zeta]
    for _ in range(count - 1):
        cols.append(A @ cols[-1])
    return np.column_stack(cols)


def _solve_xi(A, zeta, n):
    """xi with xi^T A^i zeta = 0 for i < n-1 and xi^T A^(n-1) zeta = 1."""
    if n == 1:
        return np.array([1.0])
    K = _krylov(A, zeta, n)
    e_n = np.zeros(n)
    e_n[-1] = 1.0
    try:
        return np.linalg.solve(K.T, e_n)
    except np.linalg.LinAlgError as exc:
        raise ConstructionError(f"Krylov matrix of (A, zeta) is singular: {exc}") from exc


def _recursion_and_state(A, zeta, eta, u_data, n, m, L):
    """Backward E recursion, B, x0 and the simulated state x(0)..x(T-L).

    Returns (E_desc, B, x0, states) with E in descending index order.
    """
    T = u_data.shape[0]
    k = n + L
    E = [np.zeros((n, m))]  # E_{k-1}
    for i in range(k - 1, -1, -1):
        E.append(A @ E[-1] + np.outer(zeta, eta[i]))
    # E is now [E_{k-1}, E_{k-2}, ..., E_{-1}]
    B = E[-1]
    x0 = np.zeros(n)
    for i in range(k - 1):
        x0 -= E[k - 1 - i] @ u_data[i]  # E[k-1-i] is E_i
    states = np.empty((T - L + 1, n))
    states[0] = x0
    for t in range(T - L):
        states[t + 1] = A @ states[t] + B @ u_data[t]
    return tuple(E), B, x0, states


def _closed_form_states(A, zeta, eta, E_desc, u_data, n, m, L):
    """Direct evaluation of the constructive trajectory formulas.

    Piecewise: a moving-window combination of the E matrices up to
    t = s := T-L-n+1, then an explicit double sum over Krylov vectors
    for the final n-1 steps. Replays the induction behind the
    construction; simulation must agree to rounding.
    """
    T = u_data.shape[0]
    k = n + L
    s = T - L - n + 1

    def E_at(i):  # E_desc[0] = E_{k-1} ... E_desc[-1] = E_{-1}
        return E_desc[k - 1 - i]

    out = np.empty((T - L + 1, n))
    for t in range(0, s + 1):
        acc = np.zeros(n)
        for i in range(k - 1):
            acc -= E_at(i) @ u_data[t + i]
        out[t] = acc
    A_pows = [np.eye(n)]
    for _ in range(max(n - 2, 0)):
        A_pows.append(A @ A_pows[-1])
    for t in range(1, n):
        acc = np.zeros(n)
        for j in range(t):
            for i in range(j, k - 1):
                acc += A_pows[t - j - 1] @ zeta * float(eta[i - j] @ u_data[i + s])
        for i in range(t, k - 1):
            acc -= E_at(i - t) @ u_data[i + s]
        out[t + s] = acc
    return out


def _stacked_matrix(u: Signal, states, L):
    if L == 0:
        return hankel(Signal(states), 1)
    return np.vstack([hankel(u, L), hankel(Signal(states), 1)])


def _annihilation_residual(v, w, stacked):
    return float(np.abs(np.concatenate([v, w]) @ stacked).max())


def _project_to_kernel(eta_flat, H, rtol):
    """Snap a user-supplied eta onto ker(H^T), keeping its norm.

    Supplied kernel vectors are often quoted at limited precision; the
    construction needs the annihilation to hold exactly, so the nearest
    true kernel vector is used. Losing more than half the norm means
    the vector was never close to the kernel.
    """
    if H.shape[1] == 0:
        return eta_flat
    K = kernel_basis(H.T, rtol)
    if K.shape[1] == 0:
        raise ValidationError("input Hankel matrix has no left kernel; nothing to project onto")
    proj = K @ (K.T @ eta_flat)
    norm_in = float(np.linalg.norm(eta_flat))
    norm_pr = float(np.linalg.norm(proj))
    if norm_pr < 0.5 * norm_in:
        raise ValidationError(
            f"supplied eta is far from the kernel (projection keeps {norm_pr / norm_in:.2%})"
        )
    return proj * (norm_in / norm_pr)


def _certify(u, n, L, rtol, tol_cert, cluster_radius, seed, eta_override, A_override,
             zeta_override):
    """Shared engine behind the L >= 1 and L = 0 constructions."""
    m = u.dim
    T = u.length
    k = n + L

    if k <= T:
        exciting, _ = is_pe(u, k, rtol)
        if exciting:
            raise PersistentlyExcitingError(
                f"input is persistently exciting of order {k}; no counterexample exists"
            )

    if T < k - 1:
        return _certify_short_data(u, n, L, rtol, tol_cert, cluster_radius, seed)

    # eta from the left kernel of the depth-(n+L) Hankel matrix; with
    # T = n+L-1 the matrix has no columns and any unit vector works.
    H = hankel(u, k) if k <= T else np.zeros((k * m, 0))
    if eta_override is not None:
        eta_flat = as_vector(eta_override, "eta")
        if eta_flat.size != k * m:
            raise ValidationError(f"eta must have {k * m} entries, got {eta_flat.size}")
        if float(np.linalg.norm(eta_flat)) == 0.0:
            raise ValidationError("eta must be nonzero")
        eta_flat = _project_to_kernel(eta_flat, H, rtol)
    else:
        eta_flat = smallest_right_singular_vector(H.T if H.shape[1] else np.zeros((0, k * m)))
    eta = eta_flat.reshape(k, m)
    eta_norm = float(np.linalg.norm(eta_flat))
    eta_residual = float(np.abs(eta_flat @ H).max()) if H.shape[1] else 0.0
    if eta_override is None and eta_residual > tol_cert * eta_norm:
        raise ConstructionError(
            f"kernel vector annihilates the input Hankel matrix only to {eta_residual:.3e}"
        )

    lam = lambda_set(eta, rtol, cluster_radius)

    if zeta_override is not None:
        zeta = as_vector(zeta_override, "zeta")
        if zeta.size != n:
            raise ValidationError(f"zeta must have {n} entries, got {zeta.size}")
    else:
        zeta = np.zeros(n)
        zeta[-1] = 1.0

    if A_override is not None:
        A = as_matrix(A_override, "A")
        if A.shape != (n, n):
            raise ValidationError(f"A must be {n}x{n}, got {A.shape}")
        candidates = [("override", A)]
    else:
        exclusion = max(0.1, 2.0 * cluster_radius)
        candidates = []
        for lam0 in _lambda0_candidates():
            if lam.distance(lam0) > exclusion:
                candidates.append((lam0, _jordan_block(lam0, n)))
            if len(candidates) == 32:
                break

    failures = []
    for tag, A in candidates:
        parts = _try_build(u, n, m, L, A, zeta, eta, lam, rtol, tol_cert, cluster_radius)
        if isinstance(parts, str):
            failures.append(f"A[{tag}]: {parts}")
            continue
        E_desc, B, x0, states, xi, v, w, checks = parts
        return CounterexampleCertificate(
            n=n, m=m, L=L, T=T,
            eta=eta, lam=lam, A=A, zeta=zeta, E=E_desc, B=B, x0=x0, xi=xi, v=v, w=w,
            residual_annihilation=checks["annihilation"],
            rank_deficit_confirmed=True,
            short_data_case=False,
            states=states,
            stacked_rank=checks["stacked_rank"],
            residuals={
                "annihilation": checks["annihilation"],
                "eta_annihilation": eta_residual,
                "recursion": checks["recursion"],
                "closed_form": checks["closed_form"],
                "xi_orthogonality": checks["xi_orthogonality"],
            },
            seed=seed, rtol=rtol, tol_cert=tol_cert, cluster_radius=cluster_radius,
        )
    raise ConstructionError(
        "numerical construction failed for all eigenvalue candidates: " + "; ".join(failures)
    )


def _try_build(u, n, m, L, A, zeta, eta, lam, rtol, tol_cert, cluster_radius):
    """One construction attempt; returns parts or a failure reason string."""
    T = u.length
    eigs = np.linalg.eigvals(A)
    if len(lam) and min(lam.distance(z) for z in eigs) <= cluster_radius:
        return "spectrum intersects the forbidden root set"

    ctrl_zeta, _ = is_controllable(A, zeta.reshape(-1, 1), rtol)
    if not ctrl_zeta:
        return "(A, zeta) is not controllable"

    E_desc, B, x0, states = _recursion_and_state(A, zeta, eta, u.samples, n, m, L)

    recursion_residual = 0.0
    for idx in range(len(E_desc) - 1):  # E_desc[idx] = E_i with i = n+L-1-idx
        i = n + L - 1 - idx
        lhs = A @ E_desc[idx] + np.outer(zeta, eta[i])
        recursion_residual = max(
            recursion_residual,
            float(np.abs(lhs - E_desc[idx + 1]).max() / (1.0 + np.abs(lhs).max())),
        )
    if recursion_residual > 1e-12:
        return f"recursion identity residual {recursion_residual:.3e}"

    cf = _closed_form_states(A, zeta, eta, E_desc, u.samples, n, m, L)
    scale_x = 1.0 + float(np.abs(states).max())
    closed_form_residual = float(np.abs(states - cf).max()) / scale_x
    if closed_form_residual > 1e-8:
        return f"closed-form trajectory residual {closed_form_residual:.3e}"

    try:
        xi = _solve_xi(A, zeta, n)
    except ConstructionError as exc:
        return str(exc)
    xi_orth = 0.0
    power = zeta.copy()
    for _ in range(n - 1):
        xi_orth = max(xi_orth, abs(float(xi @ power)))
        power = A @ power
    if xi_orth > 1e-6 * (1.0 + float(np.abs(xi).max())):
        return f"xi orthogonality residual {xi_orth:.3e}"

    # v stacks E_0..E_{L-1} applied to xi; (v, w) scaled to unit w.
    def E_at(i):
        return E_desc[n + L - 1 - i]

    v_raw = np.concatenate([E_at(i).T @ xi for i in range(L)]) if L else np.zeros(0)
    norm_xi = float(np.linalg.norm(xi))
    w = xi / norm_xi
    v = v_raw / norm_xi

    stacked = _stacked_matrix(u, states, L)
    residual = _annihilation_residual(v, w, stacked)
    budget = tol_cert * (1.0 + float(np.abs(states).max())) * (T - L + 1)
    if residual > budget:
        return f"annihilation residual {residual:.3e} exceeds {budget:.3e}"

    ctrl, _ = is_controllable(A, B, rtol)
    if not ctrl:
        return "(A, B) is not controllable"

    # anchor the tolerance to the experiment scale: a state block that is
    # rounding noise relative to u (possible when L = 0) counts as zero
    floor = rtol * max(stacked.shape) * (1.0 + float(np.abs(u.samples).max()))
    srep = rank_report(stacked, rtol, atol=floor)
    if srep.rank >= n + L * m:
        return f"stacked matrix rank {srep.rank} is not deficient"

    checks = {
        "annihilation": residual,
        "recursion": recursion_residual,
        "closed_form": closed_form_residual,
        "xi_orthogonality": xi_orth,
        "stacked_rank": srep,
    }
    return E_desc, B, x0, states, xi, v, w, checks


def _certify_short_data(u, n, L, rtol, tol_cert, cluster_radius, seed):
    """T < n+L-1: too few columns for the state Hankel matrix to have rank n.

    A stock controllable pair suffices: nilpotent Jordan A, B carrying
    the last basis vector in its first column (already controllable on
    its own) and seeded Gaussian fill for the remaining columns.
    """
    m, T = u.dim, u.length
    rng = np.random.default_rng(seed)
    A = _jordan_block(0.0, n)
    zeta = np.zeros(n)
    zeta[-1] = 1.0
    for _ in range(16):
        B = rng.standard_normal((n, m))
        B[:, 0] = zeta
        ok, _ = is_controllable(A, B, rtol)
        if ok:
            break
    else:
        raise ConstructionError("failed to draw a controllable stock pair")
    x0 = np.zeros(n)
    states = simulate(StateSpaceSystem.from_state_pair(A, B), x0, u).x.samples[: T - L + 1]

    K = kernel_basis(hankel(Signal(states), 1).T, rtol)
    if K.shape[1] == 0:
        raise ConstructionError("state Hankel matrix unexpectedly has full row rank")
    w = K[:, 0]
    v = np.zeros(L * m)
    stacked = _stacked_matrix(u, states, L)
    residual = _annihilation_residual(v, w, stacked)
    srep = rank_report(stacked, rtol)
    return CounterexampleCertificate(
        n=n, m=m, L=L, T=T,
        eta=None, lam=None, A=A, zeta=zeta, E=None, B=B, x0=x0, xi=w, v=v, w=w,
        residual_annihilation=residual,
        rank_deficit_confirmed=srep.rank < n + L * m,
        short_data_case=True,
        states=states,
        stacked_rank=srep,
        residuals={"annihilation": residual},
        seed=seed, rtol=rtol, tol_cert=tol_cert, cluster_radius=cluster_radius,
    )


def construct_certificate(u: Signal, n, L, rtol=RTOL, tol_cert=TOL_CERT,
                          cluster_radius=CLUSTER_RADIUS, seed=SEED,
                          eta=None, A=None, zeta=None) -> CounterexampleCertificate:
    """Build and verify a counterexample for a non-exciting input.

    Requires that u is not persistently exciting of order n+L. By
    default A is a Jordan block whose eigenvalue is scanned away from
    the forbidden root set and zeta is the last basis vector; ``eta``,
    ``A`` and ``zeta`` accept explicit overrides (a supplied eta is
    snapped onto the actual kernel). Every certificate is verified
    before return: annihilation residual within the scaled budget,
    (A, B) controllable, spectrum disjoint from the root set, stacked
    matrix rank-deficient.

    Raises:
        PersistentlyExcitingError: the input is exciting of order n+L.
        ConstructionError: no eigenvalue candidate produced a verifiable
            certificate (diagnostics included).
    """
    if not isinstance(u, Signal):
        u = Signal(u)
    if n < 1:
        raise ValidationError("n must be positive")
    if L < 1 or L > u.length:
        raise ValidationError(f"L={L} out of range [1, {u.length}]")
    return _certify(u, n, L, rtol, tol_cert, cluster_radius, seed, eta, A, zeta)


def construct_certificate_l0(u: Signal, n, rtol=RTOL, tol_cert=TOL_CERT,
                             cluster_radius=CLUSTER_RADIUS, seed=SEED,
                             eta=None, A=None, zeta=None) -> CounterexampleCertificate:
    """Depth-0 variant: make the bare state Hankel matrix rank-deficient.

    ``u`` holds T+1 samples u(0)..u(T); the excitation condition is on
    the first T samples at order n, and the certificate's w annihilates
    the whole state row H_1(x(0)..x(T)). The final input sample does
    not influence those states and is ignored by the construction.
    """
    if not isinstance(u, Signal):
        u = Signal(u)
    if n < 1:
        raise ValidationError("n must be positive")
    if u.length < 2:
        raise ValidationError("need at least two samples (u(0)..u(T) with T >= 1)")
    prefix = u.window(0, u.length - 1)
    return _certify(prefix, n, 0, rtol, tol_cert, cluster_radius, seed, eta, A, zeta)


def extend_to_output(cert: CounterexampleCertificate, u: Signal, rtol=RTOL,
                     tol_cert=TOL_CERT, p=1) -> OutputCounterexample:
    """Lift a state-level certificate to an output-level counterexample.

    Builds the system (A, B, C, 0) whose first output row is w (rows
    2..p zero-padded), simulates the certified experiment, and exhibits
    a behavior element outside the data span: zero input from the
    initial state w/||w||^2 separates with value 1. The negative
    behavior-equality verdict is re-checked through the independent
    three-rank test.
    """
    if cert.L < 1:
        raise ValidationError("output-level extension needs L >= 1")
    if p < 1:
        raise ValidationError("p must be positive")
    if not isinstance(u, Signal):
        u = Signal(u)
    if u.dim != cert.m or u.length != cert.T:
        raise ValidationError("input signal does not match the certificate")

    n, m, L = cert.n, cert.m, cert.L
    C = np.zeros((p, n))
    C[0] = cert.w
    sys = StateSpaceSystem(cert.A, cert.B, C, np.zeros((p, m)))
    y = simulate(sys, cert.x0, u).y

    annihilator = np.zeros(L * m + L * p)
    annihilator[: L * m] = cert.v
    annihilator[L * m] = 1.0
    Huy = np.vstack([hankel(u, L), hankel(y, L)])
    residual = float(np.abs(annihilator @ Huy).max())
    budget = tol_cert * (1.0 + float(np.abs(cert.states).max())) * (cert.T - L + 1)
    if residual > budget:
        raise ConstructionError(
            f"output annihilation residual {residual:.3e} exceeds {budget:.3e}"
        )

    witness_x0 = cert.w / float(cert.w @ cert.w)
    witness_u = Signal(np.zeros((L, m)))
    witness_y = simulate(sys, witness_x0, witness_u).y
    separation = float(annihilator @ np.concatenate([stack(witness_u), stack(witness_y)]))
    if abs(separation) < 1.0 - tol_cert:
        raise ConstructionError(f"separation value {separation:.6f} is not 1")

    behavior_check = check_behavior_equality(sys, u, y, L, rtol)
    if behavior_check.behavior_equal:
        raise ConstructionError("behavior equality unexpectedly holds on certified data")

    return OutputCounterexample(
        sys=sys, y=y, annihilator=annihilator,
        witness_u=witness_u, witness_x0=witness_x0, witness_y=witness_y,
        separation_value=separation,
        residual_annihilation=residual,
        behavior_check=behavior_check,
    )


def single_input_family(u: Signal, n, L, A, B, rtol=RTOL, tol_cert=TOL_CERT,
                        cluster_radius=CLUSTER_RADIUS) -> CounterexampleCertificate:
    """Counterexample with a user-chosen pair (A, B), single-input case.

    For m = 1 almost any pair works: it suffices that spec(A) avoids
    the kernel vector's root set, because then S = sum_i eta_i A^i is
    invertible and zeta = S^(-1) B reproduces B through the recursion.

    Raises:
        EigenvalueConflictError: spec(A) touches the root set.
        NearSingularError: S is too ill-conditioned to invert.
    """
    if not isinstance(u, Signal):
        u = Signal(u)
    if u.dim != 1:
        raise ValidationError("single-input family requires m = 1")
    if n < 1:
        raise ValidationError("n must be positive")
    if L < 1 or L > u.length:
        raise ValidationError(f"L={L} out of range [1, {u.length}]")
    A = as_matrix(A, "A")
    if A.shape != (n, n):
        raise ValidationError(f"A must be {n}x{n}, got {A.shape}")
    b = as_vector(B, "B")
    if b.size != n:
        raise ValidationError(f"B must have {n} entries, got {b.size}")
    if float(np.linalg.norm(b)) == 0.0:
        raise ValidationError("B must be nonzero")

    T, m, k = u.length, 1, n + L
    if T < k - 1:
        raise ValidationError(f"need T >= n+L-1 = {k - 1} samples, got {T}")
    if k <= T:
        exciting, _ = is_pe(u, k, rtol)
        if exciting:
            raise PersistentlyExcitingError(
                f"input is persistently exciting of order {k}; no counterexample exists"
            )

    H = hankel(u, k) if k <= T else np.zeros((k, 0))
    eta_flat = smallest_right_singular_vector(H.T if H.shape[1] else np.zeros((0, k)))
    eta = eta_flat.reshape(k, 1)
    lam = lambda_set(eta, rtol, cluster_radius)

    eigs = np.linalg.eigvals(A)
    if len(lam) and min(lam.distance(z) for z in eigs) <= cluster_radius:
        raise EigenvalueConflictError(
            "spec(A) intersects the root set of the kernel vector; pick a different A"
        )

    S = np.zeros((n, n))
    power = np.eye(n)
    for i in range(k):
        S += float(eta[i, 0]) * power
        power = power @ A
    if np.linalg.cond(S) > 1e10:
        raise NearSingularError("sum_i eta_i A^i is near-singular; certificate would be unreliable")
    zeta = np.linalg.solve(S, b)

    parts = _try_build(u, n, m, L, A, zeta, eta, lam, rtol, tol_cert, cluster_radius)
    if isinstance(parts, str):
        raise ConstructionError(f"single-input construction failed: {parts}")
    E_desc, B_rec, x0, states, xi, v, w, checks = parts
    if float(np.abs(B_rec - b.reshape(n, 1)).max()) > 1e-8 * (1.0 + float(np.abs(b).max())):
        raise ConstructionError("recursion did not reproduce the supplied B")
    eta_residual = float(np.abs(eta_flat @ H).max()) if H.shape[1] else 0.0
    return CounterexampleCertificate(
        n=n, m=m, L=L, T=T,
        eta=eta, lam=lam, A=A, zeta=zeta, E=E_desc, B=B_rec, x0=x0, xi=xi, v=v, w=w,
        residual_annihilation=checks["annihilation"],
        rank_deficit_confirmed=True,
        short_data_case=False,
        states=states,
        stacked_rank=checks["stacked_rank"],
        residuals={
            "annihilation": checks["annihilation"],
            "eta_annihilation": eta_residual,
            "recursion": checks["recursion"],
            "closed_form": checks["closed_form"],
            "xi_orthogonality": checks["xi_orthogonality"],
        },
        seed=SEED, rtol=rtol, tol_cert=tol_cert, cluster_radius=cluster_radius,
    )


def sample_system_cloud(u: Signal, L, pairs, rtol=RTOL, tol_cert=TOL_CERT,
                        cluster_radius=CLUSTER_RADIUS) -> CloudResult:
    """Dense family of scalar-state systems generating rank-deficient data.

    For n = 1 the annihilator condition is vacuous, so every admissible
    (a, zeta) sample gives a counterexample system: b = zeta * sum_i
    a^i eta_i and the matching initial state. Samples with zeta = 0 or
    with ``a`` inside the root set are skipped and counted. Each
    emitted point is re-verified by an independent rank check on its
    simulated data.
    """
    if not isinstance(u, Signal):
        u = Signal(u)
    n = 1
    m, T, k = u.dim, u.length, 1 + L
    if L < 1 or L > u.length:
        raise ValidationError(f"L={L} out of range [1, {u.length}]")
    if T < k - 1:
        raise ValidationError(f"need T >= L = {k - 1} samples, got {T}")
    if k <= T:
        exciting, _ = is_pe(u, k, rtol)
        if exciting:
            raise PersistentlyExcitingError(
                f"input is persistently exciting of order {k}; the family is empty"
            )

    H = hankel(u, k) if k <= T else np.zeros((k * m, 0))
    eta_flat = smallest_right_singular_vector(H.T if H.shape[1] else np.zeros((0, k * m)))
    eta = eta_flat.reshape(k, m)
    lam = lambda_set(eta, rtol, cluster_radius)

    Hu = hankel(u, L)
    points = []
    n_skipped = 0
    for a, zeta_s in np.asarray(pairs, dtype=float).reshape(-1, 2):
        if zeta_s == 0.0 or lam.distance(a) <= cluster_radius:
            n_skipped += 1
            continue
        # scalar-state recursion: E_i are (m,) rows, E_L = 0
        rows = [np.zeros(m)]
        for i in range(k - 1, -1, -1):
            rows.append(a * rows[-1] + zeta_s * eta[i])
        b = rows[-1]  # E_{-1}
        x0 = 0.0
        for i in range(k - 1):
            x0 -= float(rows[k - 1 - i] @ u.samples[i])  # rows[k-1-i] = E_i
        x = np.empty(T - L + 1)
        x[0] = x0
        for t in range(T - L):
            x[t + 1] = a * x[t] + float(b @ u.samples[t])
        stacked = np.vstack([Hu, x[None, :]])
        rep = rank_report(stacked, rtol)
        points.append(CloudPoint(a=float(a), b=b.copy(), x0=float(x0),
                                 verified=rep.rank < n + L * m))
    return CloudResult(points=tuple(points), n_skipped=n_skipped)
