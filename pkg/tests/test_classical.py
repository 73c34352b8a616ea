import math

import numpy as np
import pytest

import bornosc as bo

EPS1 = bo.OscParams(1.0)


def energy_at(E_scaled):
    """EnergyValue with eps=1 so eps^2 E = E (convenient test scale)."""
    return bo.EnergyValue(E_scaled)


def start_at_qmax(E):
    return bo.ScaledPhasePoint(bo.level_qmax(E, EPS1), 0.0)


class TestEomRhs:
    def test_fixed_point(self):
        assert bo.eom_rhs(bo.ScaledPhasePoint(0.0, 0.0)) == (0.0, 0.0)

    def test_harmonic_limit(self):
        dq, dp = bo.eom_rhs(bo.ScaledPhasePoint(1e-6, 2e-6))
        assert dq == pytest.approx(2e-6, rel=1e-11)
        assert dp == pytest.approx(-1e-6, rel=1e-11)

    def test_forced_stationary_is_fixed_point(self):
        # eps F = 0.6 -> (0.75, 0) is stationary
        s = bo.forced_stationary_point(0.6, EPS1)
        dq, dp = bo.eom_rhs(s, EPS1, force=0.6)
        assert dq == 0.0
        assert abs(dp) < 1e-15

    def test_force_requires_params(self):
        with pytest.raises(ValueError):
            bo.eom_rhs(bo.ScaledPhasePoint(1.0, 0.0), force=1.0)


class TestIntegrate:
    def test_constant_at_origin(self):
        traj = bo.integrate(bo.ScaledPhasePoint(0.0, 0.0), EPS1, 5.0, tol=1e-10)
        assert np.all(traj.q == 0.0) and np.all(traj.p == 0.0)
        assert traj.times[-1] == 5.0

    def test_small_oscillation_closes_after_2pi(self):
        s0 = bo.ScaledPhasePoint(1e-3, 0.0)
        traj = bo.integrate(s0, EPS1, 2.0 * math.pi, tol=1e-10)
        assert abs(traj.final.qt - s0.qt) < 1e-6
        assert abs(traj.final.pt - s0.pt) < 1e-6

    def test_t_eval_sampling(self):
        te = np.linspace(0.0, 3.0, 7)
        traj = bo.integrate(bo.ScaledPhasePoint(0.5, 0.0), EPS1, 3.0, t_eval=te)
        assert np.array_equal(traj.times, te)

    def test_large_amplitude_matches_sech_arc(self):
        # qt(t) = qt_M / cosh(t) within 1% on |t| <= T/8 for qt_M = 100
        q_m = 100.0
        T = bo.period_asymptotic(q_m).period
        te = np.linspace(0.01, T / 8.0, 40)
        traj = bo.integrate(bo.ScaledPhasePoint(q_m, 0.0), EPS1, T / 8.0, t_eval=te)
        for t, qt, pt in zip(traj.times, traj.q, traj.p):
            seg = bo.matched_segment(q_m, t)
            assert qt == pytest.approx(seg.qt, rel=1e-2)
            assert pt == pytest.approx(seg.pt, rel=1e-2)

    def test_energy_conservation_grid(self):
        # acceptance-grade contract: drift < 1e-9 over 10 periods at tol 1e-10
        for s in (1e-4, 1.0, 1e2, 1e4):
            E = energy_at(s)
            T = bo.period_elliptic(E, EPS1).period
            traj = bo.integrate(start_at_qmax(E), EPS1, 10.0 * T, tol=1e-10)
            assert traj.max_energy_drift < 1e-9, f"drift {traj.max_energy_drift} at E={s}"
            assert traj.max_energy_drift <= traj.tol

    def test_orbit_closure_at_elliptic_period(self):
        for s in (0.1, 1.0, 10.0, 100.0):
            E = energy_at(s)
            T = bo.period_elliptic(E, EPS1).period
            s0 = start_at_qmax(E)
            traj = bo.integrate(s0, EPS1, T, tol=1e-10)
            dist = max(abs(traj.final.qt - s0.qt), abs(traj.final.pt - s0.pt))
            assert dist < 1e-6, f"closure distance {dist} at E={s}"

    def test_swap_symmetry(self):
        # if (qt(t), pt(t)) solves the flow then so does (pt(-t), qt(-t));
        # realized with forward runs via the time-reversal (qt, pt) -> (qt, -pt)
        a, b = 0.9, -0.4
        te = np.linspace(0.0, 4.0, 41)
        swapped = bo.integrate(bo.ScaledPhasePoint(b, a), EPS1, 4.0, t_eval=te)
        reversed_ = bo.integrate(bo.ScaledPhasePoint(a, -b), EPS1, 4.0, t_eval=te)
        assert np.allclose(swapped.q, -reversed_.p, atol=1e-9)
        assert np.allclose(swapped.p, reversed_.q, atol=1e-9)

    def test_forced_subcritical_stays_at_stationary_point(self):
        f = 0.6
        s = bo.forced_stationary_point(f, EPS1)
        traj = bo.integrate(s, EPS1, 10.0, tol=1e-10, force=f)
        assert np.max(np.abs(traj.q - s.qt)) < 1e-8
        assert np.max(np.abs(traj.p - s.pt)) < 1e-8

    def test_tolerance_validation(self):
        with pytest.raises(ValueError):
            bo.integrate(bo.ScaledPhasePoint(1.0, 0.0), EPS1, 1.0, tol=1e-2)
        with pytest.raises(ValueError):
            bo.integrate(bo.ScaledPhasePoint(1.0, 0.0), EPS1, -1.0)


class TestIntegrateLogcosh:
    def test_constant_at_origin(self):
        traj = bo.integrate_logcosh(bo.LogCoshPoint(0.0, 0.0), 3.0)
        assert np.all(traj.q == 0.0) and np.all(traj.p == 0.0)

    def test_conserves_logcosh_energy(self):
        s0 = bo.LogCoshPoint(2.0, 0.0)
        T = bo.period_elliptic(
            bo.EnergyValue(math.expm1(bo.logcosh_hamiltonian(s0).value)), EPS1).period
        traj = bo.integrate_logcosh(s0, 10.0 * T, tol=1e-10)
        assert traj.max_energy_drift < 1e-10

    def test_canonical_transformation_consistency(self):
        # the mapped log-cosh flow equals the Born flow from the mapped point
        tol = 1e-10
        s0 = bo.ScaledPhasePoint(1.7, -0.6)
        te = np.linspace(0.0, 8.0, 33)
        born = bo.integrate(s0, EPS1, 8.0, tol=tol, t_eval=te)
        lc = bo.integrate_logcosh(bo.to_logcosh(s0), 8.0, tol=tol, t_eval=te)
        q_mapped = np.sinh(lc.q)
        p_mapped = np.sinh(lc.p)
        assert np.max(np.abs(q_mapped - born.q)) < 10.0 * tol * 10.0
        assert np.max(np.abs(p_mapped - born.p)) < 10.0 * tol * 10.0


class TestPeriods:
    def test_small_energy_limit_2pi(self):
        T = bo.period_elliptic(energy_at(1e-8), EPS1)
        assert T.period == pytest.approx(2.0 * math.pi, rel=1e-6)

    def test_elliptic_known_value_qm1(self):
        # qt_M = 1 -> m = 1/2 -> T = 4 K(1/2); frozen from quadrature oracle
        E = bo.born_hamiltonian(bo.ScaledPhasePoint(1.0, 0.0), EPS1)
        assert bo.period_elliptic(E, EPS1).period == pytest.approx(
            7.41629870920548767, rel=1e-13)

    def test_numeric_matches_elliptic_known_value(self):
        E = bo.born_hamiltonian(bo.ScaledPhasePoint(1.0, 0.0), EPS1)
        assert bo.period_numeric(E, EPS1, tol=1e-10).period == pytest.approx(
            7.41629870920548767, rel=1e-10)

    def test_asymptotic_known_value(self):
        # frozen: 4 asinh(200)
        assert bo.period_asymptotic(100.0).period == pytest.approx(
            23.9658831881975562, rel=1e-14)

    def test_numeric_vs_elliptic_across_decades(self):
        for s in (1e-3, 1e-1, 1.0, 10.0, 1e3):
            Tn = bo.period_numeric(energy_at(s), EPS1, tol=1e-10).period
            Te = bo.period_elliptic(energy_at(s), EPS1).period
            assert abs(Tn - Te) / Te < 1e-8

    def test_numeric_within_tolerance_contract(self):
        # relative agreement with the elliptic route <= 10 * tol
        tol = 1e-8
        Tn = bo.period_numeric(energy_at(2.0), EPS1, tol=tol).period
        Te = bo.period_elliptic(energy_at(2.0), EPS1).period
        assert abs(Tn - Te) / Te <= 10.0 * tol

    def test_elliptic_to_asymptotic_convergence(self):
        # relative gap vanishes like 1/log(qt_M); spec bound 2/log(qt_M)
        for q_m in (1e2, 1e3, 1e5):
            E = bo.born_hamiltonian(bo.ScaledPhasePoint(q_m, 0.0), EPS1)
            Te = bo.period_elliptic(E, EPS1).period
            Ta = bo.period_asymptotic(q_m).period
            assert abs(Te - Ta) / Te < 2.0 / math.log(q_m)

    def test_asymptotic_monotone(self):
        qs = np.geomspace(0.1, 1e4, 40)
        periods = [bo.period_asymptotic(q).period for q in qs]
        assert all(b > a for a, b in zip(periods, periods[1:]))

    def test_numeric_large_amplitude_near_asymptote(self):
        # qt_M = 100: T within 0.2% of 4 asinh(200)
        E = bo.born_hamiltonian(bo.ScaledPhasePoint(100.0, 0.0), EPS1)
        Tn = bo.period_numeric(E, EPS1, tol=1e-10).period
        assert Tn == pytest.approx(23.9658831881975562, rel=2e-3)

    def test_rejects_zero_energy(self):
        with pytest.raises(bo.DomainError):
            bo.period_elliptic(bo.EnergyValue(0.0), EPS1)
        with pytest.raises(bo.DomainError):
            bo.period_numeric(bo.EnergyValue(0.0), EPS1)


class TestMatchedSegment:
    def test_at_time_zero(self):
        s = bo.matched_segment(50.0, 0.0)
        assert (s.qt, s.pt) == (50.0, 0.0)

    def test_satisfies_reduced_equations(self):
        # closed form satisfies dqt/dt = qt*pt/sqrt(1+pt^2), dpt/dt = -sqrt(1+pt^2)
        q_m = 200.0
        for t in np.linspace(-2.0, 2.0, 21):
            s = bo.matched_segment(q_m, t)
            dq_closed = -q_m * math.sinh(t) / math.cosh(t) ** 2
            dp_closed = -math.cosh(t)
            assert abs(dq_closed - s.qt * s.pt / math.sqrt(1.0 + s.pt**2)) <= 1e-12 * q_m
            assert abs(dp_closed - (-math.sqrt(1.0 + s.pt**2))) <= 1e-12 * abs(dp_closed)

    def test_matching_condition_at_eighth_period(self):
        # qt_M/cosh(T/8) = sinh(T/8) with T = 4 asinh(2 qt_M) is an identity
        for q_m in (10.0, 1e3, 1e6):
            t8 = bo.period_asymptotic(q_m).period / 8.0
            resid = q_m / math.cosh(t8) - math.sinh(t8)
            assert abs(resid) / math.sinh(t8) < 1e-10


class TestTrajectoryType:
    def test_invariants(self):
        with pytest.raises(ValueError):
            bo.Trajectory(times=np.array([0.0, 0.0]), q=np.zeros(2), p=np.zeros(2),
                          energy0=bo.EnergyValue(1.0), max_energy_drift=0.0, tol=1e-8)
        with pytest.raises(ValueError):
            bo.Trajectory(times=np.array([0.0]), q=np.zeros(1), p=np.zeros(1),
                          energy0=bo.EnergyValue(1.0), max_energy_drift=0.0, tol=1e-8)

    def test_period_result_floor(self):
        with pytest.raises(ValueError):
            bo.PeriodResult(period=1.0, method="elliptic")
        # asymptotic is exempt from the 2*pi floor
        assert bo.PeriodResult(period=1.0, method="asymptotic").period == 1.0
