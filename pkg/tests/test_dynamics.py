import numpy as np
import pytest

import kovtop as kt
from kovtop.dynamics import IntegratorConfig, rhs_array, time_grid


class TestRhs:
    def test_equilibrium(self, equilibrium):
        np.testing.assert_array_equal(kt.euler_poisson_rhs(equilibrium).as_array(), np.zeros(9))

    def test_free_spin_about_e3(self):
        s = kt.PhaseState([0, 0, 1], [0, 0, 0], [0, 0, 0])
        np.testing.assert_array_equal(kt.euler_poisson_rhs(s).as_array(), np.zeros(9))

    def test_equilibrium_family_with_swapped_fields(self):
        s = kt.PhaseState([0, 0, 0], [0, 1, 0], [1, 0, 0])
        np.testing.assert_array_equal(kt.euler_poisson_rhs(s).as_array(), np.zeros(9))

    def test_component_formulas(self, rng):
        y = rng.standard_normal(9)
        w1, w2, w3, a1, a2, a3, b1, b2, b3 = y
        d = rhs_array(y)
        assert 2 * d[0] == pytest.approx(w2 * w3 + b3, rel=1e-15)
        assert 2 * d[1] == pytest.approx(-w1 * w3 - a3, rel=1e-15)
        assert d[2] == pytest.approx(a2 - b1, rel=1e-15)
        np.testing.assert_allclose(d[3:6], np.cross(y[3:6], y[0:3]), atol=1e-15)
        np.testing.assert_allclose(d[6:9], np.cross(y[6:9], y[0:3]), atol=1e-15)


class TestTimeDerivativeIdentities:
    def test_random_states(self, rng):
        for _ in range(20):
            s = kt.PhaseState.from_array(rng.standard_normal(9))
            r1, r2 = kt.time_derivative_identities(s)
            assert abs(r1) < 1e-12
            assert abs(r2) < 1e-12

    def test_equilibrium(self, equilibrium):
        assert kt.time_derivative_identities(equilibrium) == (0.0, 0.0)

    def test_pure_spin(self):
        s = kt.PhaseState([0, 0, 1.7], [0, 0, 0], [0, 0, 0])
        assert kt.time_derivative_identities(s) == (0.0, 0.0)


class TestTimeGrid:
    def test_includes_endpoint(self):
        g = time_grid(1.0, 0.25)
        np.testing.assert_allclose(g, [0, 0.25, 0.5, 0.75, 1.0])

    def test_non_divisible(self):
        g = time_grid(1.0, 0.3)
        assert g[0] == 0.0 and g[-1] == 1.0
        assert np.all(np.diff(g) > 0)


class TestIntegrate:
    def test_equilibrium_constant(self, equilibrium, params):
        traj = kt.integrate(equilibrium, IntegratorConfig(t_end=10.0, sample_dt=0.5), params)
        for y in traj.ys:
            np.testing.assert_allclose(y, equilibrium.as_array(), atol=1e-12)
        assert all(traj.drift[k] < 1e-12 for k in ("H", "K", "G", "F", "M"))

    def test_perturbed_equilibrium_drift(self, equilibrium, params):
        s0 = kt.PhaseState([0.1, 0, 0], equilibrium.alpha, equilibrium.beta)
        traj = kt.integrate(s0, IntegratorConfig(t_end=50.0, sample_dt=0.5), params)
        for k in ("H", "K", "G"):
            assert traj.drift[k] < 1e-8, (k, traj.drift)
        for k in ("F", "M"):
            assert traj.drift[k] < 1e-6, (k, traj.drift)

    def test_casimirs_conserved(self, params, rng):
        s0 = kt.random_admissible_state(params, rng)
        traj = kt.integrate(s0, IntegratorConfig(t_end=20.0, sample_dt=0.25), params)
        assert traj.drift["casimir_ortho"] < 1e-9
        assert traj.drift["casimir_alpha"] < 1e-9
        assert traj.drift["casimir_beta"] < 1e-9

    def test_orthogonality_tight_at_reduced_tolerance(self, params, rng):
        s0 = kt.random_admissible_state(params, rng)
        cfg = IntegratorConfig(t_end=20.0, sample_dt=0.25, rel_tol=1e-12, abs_tol=1e-14)
        traj = kt.integrate(s0, cfg, params)
        assert traj.drift["casimir_ortho"] < 1e-10
        assert np.max(np.abs(traj.casimir)) < 1e-10

    def test_L_drift_where_defined(self, params, rng):
        done = 0
        while done < 3:
            s0 = kt.random_admissible_state(params, rng, omega_scale=0.3)
            traj = kt.integrate(s0, IntegratorConfig(t_end=20.0, sample_dt=0.25), params)
            if not np.isfinite(traj.drift["L"]):
                continue
            done += 1
            assert traj.drift["L"] < 1e-6

    def test_time_reversal(self, params, rng):
        # reversing omega conjugates the flow with time reversal
        s0 = kt.random_admissible_state(params, rng)
        cfg = IntegratorConfig(t_end=10.0, sample_dt=10.0)
        fwd = kt.integrate(s0, cfg, params)
        end = fwd.state(len(fwd) - 1)
        flipped = kt.PhaseState(-end.omega, end.alpha, end.beta)
        back = kt.integrate(flipped, cfg, params)
        ret = back.state(len(back) - 1)
        restored = kt.PhaseState(-ret.omega, ret.alpha, ret.beta)
        np.testing.assert_allclose(restored.as_array(), s0.as_array(), atol=1e-7)

    def test_rejects_inadmissible_start(self, params):
        bad = kt.PhaseState([0, 0, 0], [2.5, 0, 0], [0, 1, 0])
        with pytest.raises(ValueError, match="Casimir"):
            kt.integrate(bad, IntegratorConfig(t_end=1.0, sample_dt=0.1), params)

    def test_broken_field_aborts_with_diagnostic(self, params, rng, monkeypatch):
        # a wrong right-hand side destroys the integrals; the audit must
        # refuse to return the run instead of reporting garbage drift
        from kovtop import dynamics

        true_rhs = dynamics.rhs_array

        def wrong_rhs(y):
            d = true_rhs(y)
            d[0] *= 1.02  # 2% error in one torque component
            return d

        monkeypatch.setattr(dynamics, "rhs_array", wrong_rhs)
        s0 = kt.random_admissible_state(params, rng)
        with pytest.raises(dynamics.IntegrationError, match="drift"):
            kt.integrate(s0, IntegratorConfig(t_end=20.0, sample_dt=0.5), params)

    def test_trajectory_fields(self, equilibrium, params):
        traj = kt.integrate(equilibrium, IntegratorConfig(t_end=1.0, sample_dt=0.5), params)
        assert traj.times[0] == 0.0 and traj.times[-1] == 1.0
        assert np.all(np.diff(traj.times) > 0)
        np.testing.assert_array_equal(traj.states[0].as_array(), equilibrium.as_array())
        assert set(traj.integrals) == {"H", "K", "G", "F", "M", "L"}


class TestIntegratorConfig:
    @pytest.mark.parametrize(
        "kw",
        [
            dict(t_end=-1.0, sample_dt=0.1),
            dict(t_end=1.0, sample_dt=0.0),
            dict(t_end=1.0, sample_dt=0.1, rel_tol=0.0),
            dict(t_end=1.0, sample_dt=0.1, abs_tol=-1e-3),
        ],
    )
    def test_validation(self, kw):
        with pytest.raises(ValueError):
            IntegratorConfig(**kw)
