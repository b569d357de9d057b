import numpy as np
import pytest

from peu import (
    NotATrajectoryError,
    Signal,
    StateSpaceSystem,
    ValidationError,
    check_behavior_equality,
    check_rank_condition,
    check_state_rank,
    construct_certificate,
    construct_certificate_l0,
    is_pe,
    simulate,
    universality_verdict,
)

from conftest import non_exciting_input, random_controllable_system


class TestCheckRankCondition:
    def test_exciting_input_full_rank(self):
        rng = np.random.default_rng(79)
        sys = random_controllable_system(rng, 2, 1, 1)
        u = Signal(rng.standard_normal(8))
        assert is_pe(u, 4)[0]
        traj = simulate(sys, rng.standard_normal(2), u)
        rep = check_rank_condition(u, Signal(traj.x.samples[:7]), 2, 2)
        assert rep.full_row_rank and rep.rank == 4  # n + L*m

    def test_reference_construction_rank_deficient(self, ex2_input, ex2_values):
        cert = construct_certificate(
            Signal(ex2_input), 3, 1,
            eta=ex2_values["eta"], A=ex2_values["A"], zeta=ex2_values["zeta"],
        )
        rep = check_rank_condition(Signal(ex2_input), Signal(cert.states), 1, 3)
        assert rep.rank == 4 < 5

    def test_scalar_family_member_rank_deficient(self, ex3_input, ex3_reddot):
        from peu import sample_system_cloud

        u = Signal(ex3_input)
        a, L = ex3_reddot["a"], ex3_reddot["L"]
        cloud = sample_system_cloud(u, L, [[a, 1.0]])
        pt = cloud.points[0]
        d = pt.b
        zeta_star = float(np.asarray(ex3_reddot["b"]) @ d / (d @ d))
        x = [zeta_star * pt.x0]
        for t in range(u.length - L):
            x.append(a * x[-1] + float(zeta_star * d @ u.samples[t]))
        rep = check_rank_condition(u, Signal(np.asarray(x)), L, 1)
        assert rep.rank == 4 < 5
        # the published triple carries 4 decimals; at that resolution the
        # same deficiency is visible
        xp = [ex3_reddot["x0"]]
        for t in range(u.length - L):
            xp.append(a * xp[-1] + float(np.asarray(ex3_reddot["b"]) @ u.samples[t]))
        rep_p = check_rank_condition(u, Signal(np.asarray(xp)), L, 1, rtol=1e-4)
        assert rep_p.rank == 4

    def test_length_validation(self):
        with pytest.raises(ValidationError):
            check_rank_condition(Signal(np.ones(5)), Signal(np.ones((3, 1))), 2, 1)


class TestCheckBehaviorEquality:
    def test_two_state_example(self, ex1_system):
        rng = np.random.default_rng(83)
        u = Signal(np.array([1.0, 0.0, 0.0]))
        for _ in range(5):
            traj = simulate(ex1_system, rng.standard_normal(2), u)
            check = check_behavior_equality(ex1_system, u, traj.y, 1)
            assert check.behavior_equal
            assert check.data_span_dim == check.behavior_dim == 2

    def test_exciting_input_spans_behavior(self):
        rng = np.random.default_rng(89)
        for _ in range(10):
            n, m, p = (int(x) for x in rng.integers(1, 4, size=3))
            L = int(rng.integers(1, 4))
            sys = random_controllable_system(rng, n, m, p)
            T = (n + L) * (m + 1) - 1
            u = Signal(rng.standard_normal((T, m)))
            if not is_pe(u, n + L)[0]:
                continue
            traj = simulate(sys, rng.standard_normal(n), u)
            check = check_behavior_equality(sys, u, traj.y, L)
            assert check.behavior_equal
            assert check.rank_condition.rank == n + L * m

    def test_resting_system_sees_nothing(self):
        sys = random_controllable_system(np.random.default_rng(97), 2, 1, 1)
        u = Signal(np.zeros(6))
        traj = simulate(sys, np.zeros(2), u)
        check = check_behavior_equality(sys, u, traj.y, 2)
        assert not check.behavior_equal
        assert check.data_span_dim == 0 < check.behavior_dim

    def test_rejects_non_trajectory(self):
        rng = np.random.default_rng(101)
        sys = random_controllable_system(rng, 2, 1, 1)
        u = Signal(rng.standard_normal(6))
        garbage = Signal(rng.standard_normal(6) + 5.0)
        with pytest.raises(NotATrajectoryError):
            check_behavior_equality(sys, u, garbage, 2)

    def test_full_window_degenerate(self):
        # L = T: single-column Hankel matrices, everything stays defined
        rng = np.random.default_rng(127)
        sys = random_controllable_system(rng, 2, 1, 1)
        u = Signal(rng.standard_normal(4))
        traj = simulate(sys, rng.standard_normal(2), u)
        check = check_behavior_equality(sys, u, traj.y, 4)
        assert check.data_span_dim == 1
        assert not check.behavior_equal

    def test_unobservable_pair_still_validates(self):
        # C = 0 gives y = D u for every state; any zero output is a trajectory
        sys = StateSpaceSystem(np.eye(2) * 0.5, np.ones((2, 1)),
                               np.zeros((1, 2)), np.zeros((1, 1)))
        u = Signal(np.random.default_rng(3).standard_normal(6))
        check = check_behavior_equality(sys, u, Signal(np.zeros(6)), 2)
        assert check.behavior_dim == 2  # rank(O_L) = 0
        assert check.behavior_equal == (check.data_span_dim == 2)


class TestCheckStateRank:
    def test_exciting_input_full_state_rank(self):
        rng = np.random.default_rng(103)
        for _ in range(10):
            n, m = int(rng.integers(1, 4)), int(rng.integers(1, 3))
            sys = random_controllable_system(rng, n, m, 1)
            T = n * (m + 1) - 1 + 1
            u = Signal(rng.standard_normal((T, m)))
            if not is_pe(u.window(0, T - 1) if T > 1 else u, n)[0]:
                continue
            traj = simulate(sys, rng.standard_normal(n), u.window(0, T - 1))
            rep = check_state_rank(u.window(0, T - 1), traj.x, n)
            assert rep.full_row_rank

    def test_zero_states(self):
        rep = check_state_rank(Signal(np.ones(4)), Signal(np.zeros((5, 2))), 2)
        assert rep.rank == 0

    def test_depth_zero_certificate_states(self):
        rng = np.random.default_rng(107)
        u, _ = non_exciting_input(rng, 2, 1, 0, 6)
        full = Signal(np.vstack([u.samples, rng.standard_normal((1, 1))]))
        cert = construct_certificate_l0(full, 2)
        rep = check_state_rank(u, Signal(cert.states), 2)
        assert rep.rank < 2


class TestUniversalityVerdict:
    def test_impulse_not_universal(self):
        verdict = universality_verdict(Signal(np.array([1.0, 0.0, 0.0])), 2, 1)
        assert not verdict.universal
        assert verdict.pe_order_needed == 3
        cert = verdict.counterexample
        assert cert is not None and cert.rank_deficit_confirmed
        assert cert.residual_annihilation <= 1e-7 * (1 + np.abs(cert.states).max()) * 3

    def test_exciting_input_universal(self):
        rng = np.random.default_rng(109)
        u = Signal(rng.standard_normal((11, 2)))
        verdict = universality_verdict(u, 2, 2)
        assert verdict.universal and verdict.counterexample is None

    def test_zero_input_not_universal(self):
        verdict = universality_verdict(Signal(np.zeros((8, 1))), 2, 2)
        assert not verdict.universal
        assert verdict.counterexample.rank_deficit_confirmed

    def test_scale_invariance(self):
        rng = np.random.default_rng(113)
        for _ in range(5):
            u = rng.standard_normal((9, 1))
            n, L = 2, 2
            for c in (1.0, -3.7, 1e-4, 250.0):
                v1 = universality_verdict(Signal(u), n, L)
                v2 = universality_verdict(Signal(c * u), n, L)
                assert v1.universal == v2.universal

    def test_argument_validation(self):
        with pytest.raises(ValidationError):
            universality_verdict(Signal(np.ones(3)), 0, 1)
        with pytest.raises(ValidationError):
            universality_verdict(Signal(np.ones(3)), 1, 4)
