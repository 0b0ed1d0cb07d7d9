import math

import numpy as np
import pytest

from conftest import (
    REFERENCE_COUPLING,
    REFERENCE_EMISSION,
    REFERENCE_GAMMA_TILDE0,
    REFERENCE_NOISE,
    REFERENCE_TRANSFER,
)
from epr_memory.gaussian_core import eof_symmetric
from epr_memory.mapping_model import (
    EnsembleParams,
    SpinEPRState,
    beta_sq_microscopic,
    check_regime,
    decay_per_pumping,
    derive_rates,
    map_inseparability,
    map_squeezing,
    map_variances_spectral,
    mapping_fidelity,
    spin_spectrum,
)


class TestEnsembleParams:
    def test_reference_point(self, reference_params):
        assert reference_params.cooperativity == pytest.approx(100.0, rel=1e-12)
        assert reference_params.pumping_rate == pytest.approx(15.0, rel=1e-12)
        assert reference_params.kappa == 2.0
        assert reference_params.gamma0 == 1e-3
        assert reference_params.scheme == "EIT"

    def test_from_rates_raman(self):
        params = EnsembleParams.from_rates(50.0, 0.02, scheme="Raman", delta_raman=200.0)
        assert params.cooperativity == pytest.approx(50.0, rel=1e-12)
        assert params.pumping_rate == pytest.approx(0.02, rel=1e-12)

    def test_with_rates_keeps_other_parameters(self, reference_params):
        changed = reference_params.with_rates(pumping_rate=3.0)
        assert changed.cooperativity == pytest.approx(100.0, rel=1e-12)
        assert changed.pumping_rate == pytest.approx(3.0, rel=1e-12)
        assert changed.n_atoms == reference_params.n_atoms

    @pytest.mark.parametrize("field, value", [
        ("gamma", 0.0),
        ("gamma0", -1e-3),
        ("kappa", math.inf),
        ("g", -0.1),
        ("n_atoms", 0.5),
        ("transmission", 0.0),
        ("transmission", 1.5),
        ("scheme", "Rydberg"),
    ])
    def test_invalid_parameters(self, field, value):
        kwargs = dict(gamma=1.0, gamma0=1e-3, kappa=2.0, g=1e-3, n_atoms=1e6, transmission=0.1, omega=3.0)
        kwargs[field] = value
        with pytest.raises(ValueError):
            EnsembleParams(**kwargs)

    def test_raman_needs_detuning(self):
        with pytest.raises(ValueError, match="delta_raman"):
            EnsembleParams(1.0, 1e-3, 2.0, 1e-3, 1e6, 0.1, 3.0, scheme="Raman")

    def test_negative_targets_rejected(self):
        with pytest.raises(ValueError):
            EnsembleParams.from_rates(-1.0, 15.0)


class TestDeriveRates:
    def test_reference_rates(self, reference_rates):
        assert reference_rates.gamma_tilde0 == pytest.approx(REFERENCE_GAMMA_TILDE0, rel=1e-12)
        assert reference_rates.transfer_rate == pytest.approx(REFERENCE_TRANSFER, rel=1e-12)
        assert reference_rates.emission_rate == pytest.approx(REFERENCE_EMISSION, rel=1e-12)
        assert reference_rates.gamma_tilde0 == pytest.approx(0.0756269, abs=1e-7)
        assert reference_rates.bandwidth_ratio == pytest.approx(REFERENCE_GAMMA_TILDE0 / 1e-3, rel=1e-12)
        assert reference_rates.regime_warnings == ()

    def test_coefficient_identities(self, reference_rates):
        r = reference_rates
        assert r.beta_sq == pytest.approx(r.n_atoms * r.transfer_rate / 4.0, rel=1e-12)
        assert r.diffusion == pytest.approx(0.5 * r.n_atoms * (r.gamma0 + 0.5 * r.emission_rate), rel=1e-12)
        assert r.gamma_tilde0 == pytest.approx(r.gamma0 + 0.5 * (r.transfer_rate + r.emission_rate), rel=1e-12)

    def test_microscopic_coupling_agrees(self, reference_params, reference_rates):
        assert beta_sq_microscopic(reference_params) == pytest.approx(reference_rates.beta_sq, rel=1e-10)

    def test_microscopic_coupling_is_eit_only(self):
        params = EnsembleParams.from_rates(10.0, 0.01, scheme="Raman", delta_raman=100.0)
        with pytest.raises(ValueError, match="EIT"):
            beta_sq_microscopic(params)

    def test_decay_per_pumping(self):
        assert decay_per_pumping(100.0) == pytest.approx(1.0 / 201.0, rel=1e-12)
        assert decay_per_pumping(100.0, "Raman", "cavity_enhanced") == pytest.approx(201.0, rel=1e-12)
        assert decay_per_pumping(100.0, "Raman", "substitution") == pytest.approx(1.0 / 201.0, rel=1e-12)

    def test_raman_strategies(self):
        params = EnsembleParams.from_rates(100.0, 1e-4, scheme="Raman", delta_raman=1e3)
        enhanced = derive_rates(params, raman_strategy="cavity_enhanced")
        substituted = derive_rates(params, raman_strategy="substitution")
        assert enhanced.raman_strategy == "cavity_enhanced"
        assert enhanced.gamma_tilde0 == pytest.approx(1e-3 + 201.0 * 1e-4, rel=1e-12)
        assert substituted.gamma_tilde0 == pytest.approx(1e-3 + 1e-4 / 201.0, rel=1e-12)

    def test_default_raman_strategy(self):
        params = EnsembleParams.from_rates(100.0, 1e-4, scheme="Raman", delta_raman=1e3)
        assert derive_rates(params).raman_strategy == "cavity_enhanced"

    def test_unknown_raman_strategy(self):
        params = EnsembleParams.from_rates(100.0, 1e-4, scheme="Raman", delta_raman=1e3)
        with pytest.raises(ValueError, match="strategy"):
            derive_rates(params, raman_strategy="guess")

    def test_regime_violation_is_flagged_not_raised(self, reference_params):
        rates = derive_rates(reference_params.with_rates(pumping_rate=1e-6))
        assert rates.regime_warnings
        assert any("gamma0" in w for w in rates.regime_warnings)

    def test_check_regime_upper_bound(self, reference_params):
        rates = derive_rates(reference_params.with_rates(pumping_rate=150.0))
        warnings = check_regime(rates)
        assert len(warnings) == 1
        assert "min(kappa, gamma)" in warnings[0]

    def test_strictness_controls_warnings(self, reference_rates):
        assert check_regime(reference_rates, strictness=10.0) == ()
        assert check_regime(reference_rates, strictness=100.0)


class TestMapInseparability:
    def test_reference_values(self, reference_rates):
        breakdown = map_inseparability(reference_rates, 1.0)
        assert breakdown.coupling == pytest.approx(REFERENCE_COUPLING, rel=1e-12)
        assert breakdown.noise == pytest.approx(REFERENCE_NOISE, rel=1e-12)
        assert breakdown.i_at == pytest.approx(1.018132, abs=1e-6)
        assert breakdown.coupling == pytest.approx(0.9819, abs=1e-4)
        assert breakdown.noise == pytest.approx(0.0363, abs=1e-4)

    def test_affine_in_field_inseparability(self, reference_rates):
        grid = np.linspace(0.2, 2.0, 10)
        values = np.array([map_inseparability(reference_rates, i).i_at for i in grid])
        expected = REFERENCE_COUPLING * grid + REFERENCE_NOISE
        np.testing.assert_allclose(values, expected, rtol=0, atol=1e-10)

    def test_separable_input_gives_separable_atoms_everywhere(self):
        rng = np.random.default_rng(7)
        for k in range(1000):
            cooperativity = float(10.0 ** rng.uniform(-2, 4))
            pumping = float(10.0 ** rng.uniform(-4, 2))
            gamma0 = float(10.0 ** rng.uniform(-5, -2))
            if k % 2:
                params = EnsembleParams.from_rates(cooperativity, pumping, gamma0=gamma0,
                                                   scheme="Raman", delta_raman=500.0)
                strategy = "substitution" if k % 4 == 1 else "cavity_enhanced"
            else:
                params = EnsembleParams.from_rates(cooperativity, pumping, gamma0=gamma0)
                strategy = None
            rates = derive_rates(params, raman_strategy=strategy)
            assert abs(map_inseparability(rates, 2.0).i_at - 2.0) <= 1e-12

    def test_no_atom_field_coupling_leaves_spins_coherent(self, reference_params):
        rates = derive_rates(reference_params.with_rates(cooperativity=0.0))
        assert map_inseparability(rates, 0.3).i_at == pytest.approx(2.0, rel=1e-12)

    @pytest.mark.parametrize("i_f", [0.0, -0.5])
    def test_non_positive_input_rejected(self, reference_rates, i_f):
        with pytest.raises(ValueError, match="positive"):
            map_inseparability(reference_rates, i_f)

    def test_single_ensemble_squeezing(self, reference_rates):
        assert map_squeezing(reference_rates, 1.0) == pytest.approx(1.0, rel=1e-12)
        assert 2.0 * map_squeezing(reference_rates, 0.4) == pytest.approx(
            map_inseparability(reference_rates, 0.8).i_at, rel=1e-12
        )
        with pytest.raises(ValueError):
            map_squeezing(reference_rates, -1.0)


class TestSpectralModel:
    @pytest.mark.parametrize("i_f", [0.2, 0.7, 1.0, 1.6, 2.0])
    def test_flat_spectrum_matches_closed_form(self, reference_rates, i_f):
        state = map_variances_spectral(reference_rates, i_f, i_f)
        assert state.inseparability == pytest.approx(map_inseparability(reference_rates, i_f).i_at, rel=1e-10)
        assert state.v_minus == pytest.approx(state.v_plus, rel=1e-15)
        assert state.mean_jz == pytest.approx(reference_rates.n_atoms / 2.0)

    def test_callable_flat_spectrum_matches_closed_form(self, reference_rates):
        state = map_variances_spectral(reference_rates, lambda w: 0.9, lambda w: 0.9)
        assert state.inseparability == pytest.approx(map_inseparability(reference_rates, 0.9).i_at, rel=1e-10)

    def test_lorentzian_weighted_average(self, reference_rates):
        # S(w) = 2 - a * g^2/(g^2 + w^2); its Lorentzian-weighted mean is 2 - a/2
        gt = reference_rates.gamma_tilde0
        a = 1.2

        def density(w):
            return 2.0 - a * gt ** 2 / (gt ** 2 + w ** 2)

        state = map_variances_spectral(reference_rates, density, 2.0)
        flat = map_variances_spectral(reference_rates, 2.0 - a / 2.0, 2.0)
        assert state.v_minus == pytest.approx(flat.v_minus, rel=1e-10)

    def test_negative_density_rejected(self, reference_rates):
        with pytest.raises(ValueError, match="negative|>= 0"):
            map_variances_spectral(reference_rates, -0.1, 1.0)
        with pytest.raises(ValueError, match="negative"):
            map_variances_spectral(reference_rates, lambda w: -1.0, 1.0)

    def test_spin_spectrum_is_lorentzian(self, reference_rates):
        r = reference_rates
        values = spin_spectrum(r, 1.0, np.array([0.0, r.gamma_tilde0]))
        peak = (r.beta_sq + 2.0 * r.diffusion) / r.gamma_tilde0 ** 2
        np.testing.assert_allclose(values, [peak, peak / 2.0], rtol=1e-12)


class TestMappingFidelity:
    def test_reference_fidelity(self, reference_rates):
        eta = mapping_fidelity(reference_rates, 1.0)
        assert eta == pytest.approx(0.9624, abs=1e-3)
        assert eta == pytest.approx(
            eof_symmetric(map_inseparability(reference_rates, 1.0).i_at) / eof_symmetric(1.0), rel=1e-12
        )

    @pytest.mark.parametrize("i_f", [0.0, 2.0, 2.5])
    def test_undefined_without_entangled_input(self, reference_rates, i_f):
        with pytest.raises(ValueError):
            mapping_fidelity(reference_rates, i_f)


class TestSpinEPRState:
    def test_coherent(self):
        state = SpinEPRState.coherent(1e6)
        assert state.inseparability == 2.0
        assert state.mean_jz == 5e5

    def test_rejects_non_positive_variances(self):
        with pytest.raises(ValueError):
            SpinEPRState(0.0, 1.0, 1.0)
