import csv
import json
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable

FIXTURES = Path(__file__).parent.parent / "src" / "peu" / "fixtures"


def _read_table(name):
    with open(FIXTURES / name, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    return np.asarray([[float(c) for c in r[1:]] for r in rows[1:]])


@pytest.fixture(scope="session")
def ex2_input():
    """8-sample two-channel reference input (first example set)."""
    return _read_table("ex2_input.csv")


@pytest.fixture(scope="session")
def ex2_states():
    """Published state trajectory for the reference construction."""
    return _read_table("ex2_states.csv")


@pytest.fixture(scope="session")
def ex2_values():
    with open(FIXTURES / "ex2_values.json") as fh:
        vals = json.load(fh)
    return {k: (np.asarray(v, dtype=float) if isinstance(v, list) else v)
            for k, v in vals.items()}


@pytest.fixture(scope="session")
def ex3_input():
    """7-sample two-channel reference input (second example set)."""
    return _read_table("ex3_input.csv")


@pytest.fixture(scope="session")
def ex3_reddot():
    with open(FIXTURES / "ex3_reddot.json") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def ex1_system():
    with open(FIXTURES / "ex1_system.json") as fh:
        obj = json.load(fh)
    import peu

    return peu.StateSpaceSystem(np.asarray(obj["A"], float), np.asarray(obj["B"], float),
                                np.asarray(obj["C"], float), np.asarray(obj["D"], float))


def random_controllable_system(rng, n, m, p, cond_cap=1e8, rtol=1e-9):
    """Draw (A, B, C, D) with (A, B) controllable and a tame Kalman matrix.

    A is scaled to spectral radius <= 0.95 so long trajectories stay at
    the input's magnitude; raw Gaussian dynamics blow states up by
    rho^T and would swamp any single-tolerance rank decision.
    """
    import peu
    from peu.lti import controllability_matrix

    for _ in range(64):
        A = rng.standard_normal((n, n))
        rho = float(np.abs(np.linalg.eigvals(A)).max())
        if rho > 0.95:
            A *= 0.95 / rho
        B = rng.standard_normal((n, m))
        ok, _ = peu.is_controllable(A, B, rtol)
        if not ok:
            continue
        K = controllability_matrix(A, B)
        if np.linalg.cond(K) <= cond_cap:
            C = rng.standard_normal((p, n))
            D = rng.standard_normal((p, m))
            return peu.StateSpaceSystem(A, B, C, D)
    raise RuntimeError("failed to draw a well-conditioned controllable system")


def non_exciting_input(rng, n, m, L, T):
    """Input of length T annihilated by a random kernel vector.

    Draws eta with a healthy trailing block, seeds the first n+L-1
    samples, then extends by solving the annihilation recursion for the
    trailing sample of each window; the depth-(n+L) Hankel matrix then
    has a left null vector by construction, so the signal cannot be
    persistently exciting of order n+L.
    """
    k = n + L
    assert T >= k - 1
    while True:
        eta = rng.standard_normal((k, m))
        tail = eta[-1]
        if np.linalg.norm(tail) > 0.3:
            break
    u = np.zeros((T, m))
    u[: k - 1] = rng.standard_normal((k - 1, m))
    tail_unit = tail / (tail @ tail)
    for t in range(T - k + 1):
        c = -sum(eta[i] @ u[t + i] for i in range(k - 1))
        free = rng.standard_normal(m)
        free -= (tail @ free) / (tail @ tail) * tail
        u[t + k - 1] = c * tail_unit + free
    import peu

    return peu.Signal(u), eta
