"""Dense matrix kernel: rank reports, null spaces, polynomial roots.

Matrices are plain 2-D float64 numpy arrays, validated on entry (finite
entries only). Every rank decision in the package flows through
``rank_report`` so that each claim carries its singular values and the
tolerance that produced it. Complex arithmetic stays inside this module:
callers receive real matrices and ``RootSet`` values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .defaults import CLUSTER_RADIUS, RTOL
from .errors import ValidationError, ZeroPolynomialError

__all__ = [
    "RankReport",
    "RootSet",
    "as_matrix",
    "as_vector",
    "rank_report",
    "kernel_basis",
    "polynomial_roots",
    "lambda_set",
]


def as_matrix(M, name="matrix"):
    """Coerce to a 2-D float array, rejecting NaN/Inf entries."""
    A = np.asarray(M, dtype=float)
    if A.ndim == 1:
        A = A.reshape(1, -1)
    if A.ndim != 2:
        raise ValidationError(f"{name} must be 2-D, got ndim={A.ndim}")
    if A.size and not np.all(np.isfinite(A)):
        raise ValidationError(f"{name} contains non-finite entries")
    return A


def as_vector(v, name="vector"):
    """Coerce to a 1-D float array, rejecting NaN/Inf entries."""
    a = np.asarray(v, dtype=float).reshape(-1)
    if a.size and not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} contains non-finite entries")
    return a


@dataclass(frozen=True)
class RankReport:
    """Rank decision together with the evidence that produced it.

    ``rank`` counts singular values strictly above ``tolerance_used``,
    where ``tolerance_used = rtol * max(rows, cols) * sigma_max`` (and
    plain ``rtol`` for an all-zero matrix).
    """

    rank: int
    singular_values: tuple
    tolerance_used: float
    full_row_rank: bool
    full_col_rank: bool
    shape: tuple

    def to_dict(self):
        return {
            "rank": self.rank,
            "singular_values": list(self.singular_values),
            "tolerance_used": self.tolerance_used,
            "full_row_rank": self.full_row_rank,
            "full_col_rank": self.full_col_rank,
            "shape": list(self.shape),
        }


@dataclass(frozen=True)
class RootSet:
    """Finite set of complex roots, merged at ``cluster_radius``.

    Stored roots are pairwise farther apart than ``cluster_radius``;
    multiple roots collapse onto one representative.
    """

    roots: tuple
    cluster_radius: float

    def __len__(self):
        return len(self.roots)

    def distance(self, z) -> float:
        """Distance from ``z`` to the nearest stored root (inf when empty)."""
        if not self.roots:
            return np.inf
        return min(abs(complex(z) - r) for r in self.roots)

    def contains(self, z) -> bool:
        return self.distance(z) <= self.cluster_radius

    def to_dict(self):
        return {
            "roots": [[r.real, r.imag] for r in self.roots],
            "cluster_radius": self.cluster_radius,
        }


def rank_report(M, rtol=RTOL, atol=0.0) -> RankReport:
    """Singular-value rank decision for a dense matrix.

    Args:
        M: matrix (anything ``as_matrix`` accepts, including 0-row/0-col).
        rtol: relative tolerance; must be positive.
        atol: optional absolute floor on the tolerance, for callers whose
            matrix can be pure rounding noise relative to an external
            data scale (for example a state row driven by a much larger
            input); 0 keeps the purely relative policy.

    Returns:
        RankReport with non-increasing singular values.
    """
    A = as_matrix(M)
    if rtol <= 0:
        raise ValidationError("rtol must be positive")
    if atol < 0:
        raise ValidationError("atol must be non-negative")
    rows, cols = A.shape
    if rows == 0 or cols == 0:
        s = np.zeros(0)
    else:
        s = np.linalg.svd(A, compute_uv=False)
    smax = float(s[0]) if s.size else 0.0
    tol = max(rtol * max(rows, cols) * smax if smax > 0 else rtol, atol)
    rank = int(np.sum(s > tol))
    return RankReport(
        rank=rank,
        singular_values=tuple(float(x) for x in s),
        tolerance_used=float(tol),
        full_row_rank=rank == rows,
        full_col_rank=rank == cols,
        shape=(rows, cols),
    )


def kernel_basis(M, rtol=RTOL):
    """Orthonormal basis for the right kernel of ``M``.

    Returns a (cols, cols - rank) matrix whose columns K satisfy
    ``M @ K ~ 0`` at the rank tolerance and ``K.T @ K = I``.
    """
    A = as_matrix(M)
    if rtol <= 0:
        raise ValidationError("rtol must be positive")
    rows, cols = A.shape
    if rows == 0 or cols == 0:
        return np.eye(cols)
    _, s, vh = np.linalg.svd(A, full_matrices=True)
    smax = float(s[0]) if s.size else 0.0
    tol = rtol * max(rows, cols) * smax if smax > 0 else rtol
    rank = int(np.sum(s > tol))
    return vh[rank:].T.copy()


def smallest_right_singular_vector(M):
    """Right singular vector for the smallest singular value of ``M``.

    The best-annihilating unit vector: minimizes ||M v|| over ||v|| = 1.
    For a 0-row matrix every vector annihilates; the last canonical
    basis vector is returned for determinism.
    """
    A = as_matrix(M)
    rows, cols = A.shape
    if cols == 0:
        raise ValidationError("matrix has no columns")
    if rows == 0:
        v = np.zeros(cols)
        v[-1] = 1.0
        return v
    _, _, vh = np.linalg.svd(A, full_matrices=True)
    return vh[-1].copy()


def _cluster(points, radius):
    """Greedy merge: keep a point only when farther than ``radius`` from all kept ones."""
    reps = []
    for z in sorted(points, key=lambda z: (z.real, z.imag)):
        if all(abs(z - r) > radius for r in reps):
            reps.append(z)
    return tuple(reps)


def polynomial_roots(coeffs, rtol=RTOL, cluster_radius=CLUSTER_RADIUS) -> RootSet:
    """Roots of ``sum_i coeffs[i] * z**i`` via companion-matrix eigenvalues.

    Trailing coefficients below ``rtol * max|c_i|`` are trimmed before the
    companion matrix is formed; a polynomial that trims to a nonzero
    constant has an empty root set. Numerically coincident roots are
    merged at ``cluster_radius``.

    Raises:
        ZeroPolynomialError: all coefficients are numerically zero.
    """
    c = as_vector(coeffs, "coefficients")
    if cluster_radius <= 0:
        raise ValidationError("cluster_radius must be positive")
    if c.size == 0:
        raise ZeroPolynomialError("no coefficients given")
    cmax = float(np.abs(c).max())
    if cmax == 0.0:
        raise ZeroPolynomialError("identically-zero polynomial")
    thr = rtol * cmax
    degree = c.size - 1
    while degree > 0 and abs(c[degree]) <= thr:
        degree -= 1
    if degree == 0:
        if abs(c[0]) <= thr:
            raise ZeroPolynomialError("identically-zero polynomial")
        return RootSet(roots=(), cluster_radius=cluster_radius)
    roots = np.polynomial.polynomial.polyroots(c[: degree + 1])
    return RootSet(roots=_cluster([complex(z) for z in roots], cluster_radius),
                   cluster_radius=cluster_radius)


def lambda_set(eta, rtol=RTOL, cluster_radius=CLUSTER_RADIUS) -> RootSet:
    """Common roots of the vector polynomial ``sum_i z**i * eta_i``.

    ``eta`` is a sequence of m-vectors (rows of a (k, m) array; a 1-D
    array is treated as m = 1). The returned set is the intersection,
    within ``cluster_radius``, of the root sets of the m scalar
    coordinate polynomials; coordinate polynomials that are identically
    zero (relative to the largest entry of eta) impose no constraint.

    Raises:
        ValidationError: eta is numerically zero.
    """
    E = np.asarray(eta, dtype=float)
    if E.ndim == 1:
        E = E.reshape(-1, 1)
    if E.ndim != 2:
        raise ValidationError("eta must be a sequence of coefficient vectors")
    if E.size == 0 or not np.all(np.isfinite(E)):
        raise ValidationError("eta must be non-empty and finite")
    scale = float(np.abs(E).max())
    if scale == 0.0:
        raise ValidationError("eta must be nonzero")
    zero_thr = rtol * scale

    constraint_sets = []
    for j in range(E.shape[1]):
        col = E[:, j]
        if np.abs(col).max() <= zero_thr:
            continue  # no constraint from an identically-zero coordinate
        constraint_sets.append(polynomial_roots(col, rtol, cluster_radius))
    if not constraint_sets:
        raise ValidationError("eta must be nonzero")

    common = list(constraint_sets[0].roots)
    for rs in constraint_sets[1:]:
        common = [z for z in common if rs.distance(z) <= cluster_radius]
    return RootSet(roots=_cluster(common, cluster_radius), cluster_radius=cluster_radius)
