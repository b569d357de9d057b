"""Finite vector-valued signals, block-Hankel matrices, excitation orders.

A signal is a time-major array of samples v(0)..v(T-1). The depth-k
block-Hankel matrix stacks the k-long sliding windows of the signal as
columns; a signal is persistently exciting of order k when that matrix
has full row rank.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .defaults import RTOL
from .errors import ValidationError
from .numkit import rank_report

__all__ = ["Signal", "PEReport", "stack", "hankel", "pe_order", "is_pe"]


@dataclass(frozen=True)
class Signal:
    """Immutable finite signal: ``samples[t]`` is the dim-vector v(t)."""

    samples: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.samples, dtype=float)
        if a.ndim == 1:
            a = a.reshape(-1, 1)
        if a.ndim != 2:
            raise ValidationError("signal samples must be (length, dim)")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise ValidationError("signal must have positive length and dimension")
        if not np.all(np.isfinite(a)):
            raise ValidationError("signal contains non-finite entries")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "samples", a)

    @property
    def dim(self) -> int:
        return self.samples.shape[1]

    @property
    def length(self) -> int:
        return self.samples.shape[0]

    def window(self, start, stop) -> "Signal":
        """Sub-signal of samples v(start)..v(stop-1)."""
        if not (0 <= start < stop <= self.length):
            raise ValidationError(f"window [{start},{stop}) out of range for length {self.length}")
        return Signal(self.samples[start:stop])


@dataclass(frozen=True)
class PEReport:
    """Per-order excitation ranks for k = 1..floor((T+1)/(dim+1)).

    Beyond that cap the Hankel matrix has more rows than columns, so all
    higher orders are deficient without a factorization. ``max_order``
    is the last order before the first row-rank failure (0 when order 1
    already fails).
    """

    max_order: int
    per_order: tuple  # ((k, RankReport), ...)

    def to_dict(self):
        return {
            "max_order": self.max_order,
            "per_order": [
                {"order": k, **report.to_dict()} for k, report in self.per_order
            ],
        }


def stack(v: Signal) -> np.ndarray:
    """Time-major stacking of all samples into one long vector."""
    return v.samples.reshape(-1).copy()


def hankel(v: Signal, k: int) -> np.ndarray:
    """Block-Hankel matrix of depth k: block (i, j) is v(i + j).

    Shape (k*dim, T-k+1); columns are the overlapping k-long windows.
    """
    if not isinstance(v, Signal):
        v = Signal(v)
    T, d = v.length, v.dim
    if not (1 <= k <= T):
        raise ValidationError(f"Hankel depth k={k} out of range [1, {T}]")
    cols = T - k + 1
    H = np.empty((k * d, cols))
    for i in range(k):
        H[i * d:(i + 1) * d, :] = v.samples[i:i + cols].T
    return H


def pe_order(v: Signal, rtol=RTOL) -> PEReport:
    """Largest persistency-of-excitation order of the signal, with evidence.

    Scans k = 1..floor((T+1)/(dim+1)); orders beyond the cap cannot have
    full row rank by column count. A failure at some order caps
    ``max_order`` there even if a later factorization were to disagree
    (an order-k exciting signal is exciting at every lower order).
    """
    if not isinstance(v, Signal):
        v = Signal(v)
    k_cap = (v.length + 1) // (v.dim + 1)
    reports = []
    max_order = 0
    failed = False
    for k in range(1, k_cap + 1):
        rep = rank_report(hankel(v, k), rtol)
        reports.append((k, rep))
        if not failed and rep.full_row_rank:
            max_order = k
        else:
            failed = True
    return PEReport(max_order=max_order, per_order=tuple(reports))


def is_pe(v: Signal, k: int, rtol=RTOL):
    """Whether the signal is persistently exciting of order k.

    Returns (verdict, RankReport) for the depth-k Hankel matrix.
    """
    if not isinstance(v, Signal):
        v = Signal(v)
    rep = rank_report(hankel(v, k), rtol)
    return rep.full_row_rank, rep
