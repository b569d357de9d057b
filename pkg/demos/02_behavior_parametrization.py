"""Trajectory parametrization from one sufficiently exciting experiment.

For a controllable system, input-output data recorded under an input
that is persistently exciting of order n+L spans the entire set of
L-long input-output windows the system can ever produce. The script
verifies both conclusions numerically: the input-state rank condition
and the equality of the data span with the behavior.
"""

import numpy as np

from peu import (
    Signal,
    StateSpaceSystem,
    behavior_basis,
    check_behavior_equality,
    check_rank_condition,
    is_pe,
    simulate,
)

rng = np.random.default_rng(7)
n, m, p, L = 3, 2, 2, 2

A = rng.standard_normal((n, n))
A *= 0.9 / np.abs(np.linalg.eigvals(A)).max()
sys = StateSpaceSystem(A, rng.standard_normal((n, m)),
                       rng.standard_normal((p, n)), rng.standard_normal((p, m)))

T = (n + L) * (m + 1) - 1  # shortest length that can support order n+L
u = Signal(rng.standard_normal((T, m)))
print(f"T = {T}, exciting of order n+L = {n + L}? {is_pe(u, n + L)[0]}")

traj = simulate(sys, rng.standard_normal(n), u)

rep = check_rank_condition(u, Signal(traj.x.samples[: T - L + 1]), L, n)
print(f"input-state rank: {rep.rank} (full row rank needs {n + L * m})")

check = check_behavior_equality(sys, u, traj.y, L)
print(f"data span dimension:  {check.data_span_dim}")
print(f"behavior dimension:   {check.behavior_dim} "
      f"(= L*m + rank of observability block)")
print(f"behavior equality:    {check.behavior_equal}")

bb = behavior_basis(sys, L)
print(f"behavior basis matrix: {bb.basis.shape[0]}x{bb.basis.shape[1]}, "
      f"span dimension {bb.dim}")

# dropping two samples loses the excitation guarantee; equality may still
# hold for THIS system (excitation is a statement about all controllable
# systems at once, see demo 03 for the converse)
short = Signal(u.samples[: T - 2])
traj_s = simulate(sys, np.zeros(n), short)
check_s = check_behavior_equality(sys, short, traj_s.y, L)
print(f"with T = {short.length}: exciting? {is_pe(short, n + L)[0]}, "
      f"behavior equality for this one system: {check_s.behavior_equal} "
      f"({check_s.data_span_dim} of {check_s.behavior_dim} dimensions seen)")
