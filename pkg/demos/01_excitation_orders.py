"""Block-Hankel matrices and persistency-of-excitation orders.

A finite signal is persistently exciting of order k when the depth-k
block-Hankel matrix built from its sliding windows has full row rank.
This walk-through measures the two packaged reference inputs and a
Gaussian signal at the minimal length that supports a given order.
"""

import numpy as np

from peu import Signal, hankel, is_pe, pe_order
from peu.cli import _fixture_path, read_signal_csv

u = read_signal_csv(_fixture_path("ex2_input.csv"))
print(f"reference input: {u.length} samples, {u.dim} channels")

H2 = hankel(u, 2)
print(f"depth-2 Hankel matrix is {H2.shape[0]}x{H2.shape[1]}; "
      f"column 0 is the first window: {np.round(H2[:, 0], 2)}")

report = pe_order(u)
for k, rep in report.per_order:
    print(f"  order {k}: rank {rep.rank}/{rep.shape[0]} "
          f"(smallest sigma {rep.singular_values[-1]:.3f})")
print(f"maximum excitation order: {report.max_order}")

ok, rep = is_pe(u, 4)
print(f"exciting of order 4? {ok} (rank {rep.rank} of {rep.shape[0]} rows)")

# a Gaussian signal of length k*(m+1)-1 hits order k with probability one
rng = np.random.default_rng(0)
for k in (2, 3, 4):
    T = k * 3 - 1  # m = 2
    g = Signal(rng.standard_normal((T, 2)))
    print(f"Gaussian, T={T}: max order {pe_order(g).max_order} (expected {k})")
