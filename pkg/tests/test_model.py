"""Boundary signals, characteristic speeds, Cole-Hopf transform, reference
profiles and perturbations."""

import math

import numpy as np
import pytest

import chemotax as ct
from chemotax.model import BoundarySignal

N200 = ct.make_grid(0.7, 200)


class TestSignals:
    def test_exp_decay_fully_decayed(self):
        s = BoundarySignal.exp_decay(0.7, 1.0, 200000.0)
        assert round(ct.eval_signal(s, 0.168), 3) == 0.700

    def test_rational_decay_reported_value(self):
        s = BoundarySignal.rational_decay(0.3, 4.0, 1000.0)
        assert round(ct.eval_signal(s, 0.168), 3) == 0.306

    def test_constant(self):
        s = BoundarySignal.constant(0.5)
        assert ct.eval_signal(s, 17.3) == 0.5

    def test_sinusoid(self):
        s = BoundarySignal.sinusoid(0.3, 0.1, 20.0 * math.pi)
        assert ct.eval_signal(s, 0.025) == pytest.approx(0.4)

    def test_negative_time_rejected(self):
        with pytest.raises(ct.DomainError):
            ct.eval_signal(BoundarySignal.constant(1.0), -0.1)

    def test_rational_pole_rejected(self):
        with pytest.raises(ct.DomainError):
            BoundarySignal.rational_decay(0.3, -1.0, 10.0)
        with pytest.raises(ct.DomainError):
            BoundarySignal.rational_decay(0.3, 1.0, -5.0)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ct.DomainError):
            BoundarySignal("polynomial", 1.0)

    @pytest.mark.parametrize(
        "sig",
        [
            BoundarySignal.exp_decay(0.7, 1.0, 200.0),
            BoundarySignal.exp_decay(0.3, -1.0, 50.0),
            BoundarySignal.rational_decay(0.5, 1.0, 100.0),
        ],
    )
    def test_decaying_signals_monotone_toward_level(self, sig):
        ts = np.linspace(0.0, 2.0, 100)
        gaps = [abs(ct.eval_signal(sig, t) - sig.c) for t in ts]
        assert all(g1 >= g2 for g1, g2 in zip(gaps, gaps[1:]))

    def test_lower_bound_monotone_kinds(self):
        s = BoundarySignal.exp_decay(0.3, -1.0, 200000.0)
        lo = s.lower_bound(1.25e-5, 50.0)
        assert lo == pytest.approx(0.3 - math.exp(-2.5))
        assert s.lower_bound(0.0, 50.0) == pytest.approx(-0.7)

    def test_lower_bound_sinusoid(self):
        assert BoundarySignal.sinusoid(0.5, 0.2, 3.0).lower_bound(0.0, 10.0) == pytest.approx(0.3)


class TestCharacteristicSpeeds:
    def test_zero_velocity_reduces_to_sqrt_u(self):
        p = ct.ModelParams(epsilon=0.0)
        assert ct.characteristic_speeds(1.0, 0.0, p) == (-1.0, 1.0)

    def test_hand_evaluated_point(self):
        p = ct.ModelParams(epsilon=1.0)
        lam = ct.characteristic_speeds(0.0, 1.0, p)
        assert lam == pytest.approx((-1.0, 2.0))

    def test_matches_flux_jacobian_eigenvalues(self):
        # oracle: generic eigendecomposition of the 2x2 advective Jacobian
        # in balance-law form, [[-v, -u], [-sign, 2*(eps/chi)*v]]
        p = ct.ModelParams(epsilon=0.7)
        u, v = 0.3, 0.2
        oracle = np.sort(np.linalg.eigvals(np.array([[-v, -u], [-1.0, 2.0 * 0.7 * v]])))
        lam = ct.characteristic_speeds(u, v, p)
        assert lam == pytest.approx(tuple(oracle), rel=1e-12)

    def test_strict_hyperbolicity_random_states(self):
        rng = np.random.default_rng(7)
        for _ in range(300):
            u = rng.uniform(1e-3, 10.0)
            v = rng.uniform(-5.0, 5.0)
            eps = rng.uniform(0.0, 3.0)
            p = ct.ModelParams(epsilon=eps)
            lam_minus, lam_plus = ct.characteristic_speeds(u, v, p)
            assert lam_minus < lam_plus
            oracle = np.sort(
                np.linalg.eigvals(np.array([[-v, -u], [-1.0, 2.0 * eps * v]]))
            )
            assert np.allclose((lam_minus, lam_plus), oracle, rtol=1e-9, atol=1e-12)

    def test_mixed_type_regime_raises(self):
        p = ct.ModelParams(epsilon=0.0, sign_chimu=-1)
        with pytest.raises(ct.HyperbolicityLossError):
            ct.characteristic_speeds(1.0, 0.1, p)


class TestColeHopf:
    def test_exponential_field_has_constant_log_slope(self):
        c = ct.ChemicalField(c=np.exp(2.0 * N200.nodes))
        v = ct.cole_hopf_forward(c, N200)
        assert np.max(np.abs(v - 2.0)) < 1e-4

    def test_constant_field_maps_to_zero(self):
        v = ct.cole_hopf_forward(ct.ChemicalField(c=np.ones(N200.n_nodes)), N200)
        assert np.all(v == 0.0)

    def test_linear_field_matches_analytic_log_slope(self):
        c = ct.ChemicalField(c=1.0 + N200.nodes)
        v = ct.cole_hopf_forward(c, N200)
        # linear data make the quotients exact; K = 1 is generous
        assert np.max(np.abs(v[1:-1] - 1.0 / (1.0 + N200.nodes[1:-1]))) < 1.0 * N200.dx**2

    def test_nonpositive_concentration_rejected(self):
        with pytest.raises(ct.DomainError):
            ct.ChemicalField(c=np.linspace(-0.1, 1.0, N200.n_nodes))

    def test_inverse_of_zero_slope_is_constant(self):
        chem = ct.cole_hopf_inverse(np.zeros(N200.n_nodes), 1.0, N200)
        assert np.all(chem.c == 1.0)

    def test_inverse_of_constant_slope_is_exponential(self):
        chem = ct.cole_hopf_inverse(np.full(N200.n_nodes, 2.0), 1.0, N200)
        assert np.allclose(chem.c, np.exp(2.0 * N200.nodes), rtol=1e-12)

    def test_inverse_rejects_bad_gauge(self):
        with pytest.raises(ct.DomainError):
            ct.cole_hopf_inverse(np.zeros(N200.n_nodes), 0.0, N200)

    @staticmethod
    def _round_trip_error(n):
        g = ct.make_grid(0.7, n)
        v = 0.2 * np.sin(2.0 * math.pi * g.nodes) ** 2
        chem = ct.cole_hopf_inverse(v, 1.0, g)
        return float(np.max(np.abs(ct.cole_hopf_forward(chem, g) - v))), g.dx

    def test_round_trip_second_order(self):
        err200, dx200 = self._round_trip_error(200)
        err400, _ = self._round_trip_error(400)
        assert err200 < 10.0 * dx200**2
        assert err200 / err400 >= 3.5


class TestProfilesAndPerturbations:
    def test_matched_boundaries_give_constant_profile(self):
        sig = BoundarySignal.exp_decay(0.7, 1.0, 200000.0)
        b = ct.BoundarySpec(alpha1=sig, alpha2=sig, beta1=sig, beta2=sig)
        A, B = ct.reference_profiles(b, 1.0, N200)
        value = ct.eval_signal(sig, 1.0)
        assert np.all(A == value) and np.all(B == value)

    def test_unmatched_boundaries_interpolate_linearly(self):
        b = ct.BoundarySpec(
            alpha1=BoundarySignal.constant(0.7),
            alpha2=BoundarySignal.constant(0.4),
            beta1=BoundarySignal.constant(0.5),
            beta2=BoundarySignal.constant(0.3),
        )
        A, B = ct.reference_profiles(b, 0.0, N200)
        assert A[0] == pytest.approx(0.7) and A[-1] == pytest.approx(0.4)
        assert A[100] == pytest.approx(0.55)
        assert np.allclose(B, -0.2 * N200.nodes + 0.5)

    def test_perturbation_vanishes_on_reference(self):
        sig_a = BoundarySignal.constant(0.7)
        sig_b = BoundarySignal.constant(0.3)
        b = ct.BoundarySpec(alpha1=sig_a, alpha2=sig_a, beta1=sig_b, beta2=sig_b)
        s = ct.State(u=np.full(N200.n_nodes, 0.7), v=np.full(N200.n_nodes, 0.3), t=0.0)
        u_t, v_t = ct.perturbation(s, b, ct.MODE_EPS_POSITIVE)
        assert np.all(u_t == 0.0) and np.all(v_t == 0.0)

    def test_perturbation_against_conserved_mean(self):
        sig_a = BoundarySignal.constant(0.7)
        b = ct.BoundarySpec(alpha1=sig_a, alpha2=sig_a, beta1=sig_a, beta2=sig_a)
        s = ct.State(u=np.full(N200.n_nodes, 0.7), v=np.full(N200.n_nodes, 0.1), t=0.0)
        _, v_t = ct.perturbation(s, b, ct.MODE_EPS_ZERO, v_bar=0.1)
        assert np.all(v_t == 0.0)
        with pytest.raises(ct.DomainError):
            ct.perturbation(s, b, ct.MODE_EPS_ZERO)


class TestStateAndParams:
    def test_state_rejects_nonpositive_density(self):
        with pytest.raises(ct.DomainError):
            ct.State(u=np.zeros(5), v=np.zeros(5), t=0.0)

    def test_state_rejects_mismatched_lengths(self):
        with pytest.raises(ct.DomainError):
            ct.State(u=np.ones(5), v=np.zeros(6), t=0.0)

    def test_state_rejects_nonfinite(self):
        u = np.ones(5)
        v = np.zeros(5)
        v[2] = np.inf
        with pytest.raises(ct.DomainError):
            ct.State(u=u, v=v, t=0.0)

    def test_state_arrays_are_frozen(self):
        s = ct.State(u=np.ones(5), v=np.zeros(5), t=0.0)
        with pytest.raises(ValueError):
            s.u[0] = 2.0

    def test_params_validation(self):
        with pytest.raises(ct.DomainError):
            ct.ModelParams(epsilon=-0.1)
        with pytest.raises(ct.DomainError):
            ct.ModelParams(epsilon=0.1, sign_chimu=0)
        with pytest.raises(ct.DomainError):
            ct.ModelParams(epsilon=0.1, chi=0.0)

    def test_rescaling_factors(self):
        assert ct.rescaling_factors(1.0, 1.0, 1.0) == (1.0, 1.0, 1.0)
        t_s, x_s, v_s = ct.rescaling_factors(-2.0, -3.0, 2.0)
        assert t_s == pytest.approx(3.0)
        assert x_s == pytest.approx(math.sqrt(6.0) / 2.0)
        assert v_s == pytest.approx(-math.sqrt(2.0 / 3.0))
        with pytest.raises(ct.DomainError):
            ct.rescaling_factors(0.0, 1.0, 1.0)
