import math

import numpy as np
import pytest

from epr_memory.errors import InfeasibleWindowError
from epr_memory.mapping_model import (
    EnsembleParams,
    derive_rates,
    golden_section_maximize,
    mapping_fidelity,
    optimize_pumping,
    pumping_window,
)


class TestGoldenSection:
    def test_finds_parabola_peak(self):
        x, y = golden_section_maximize(lambda v: -(v - 0.3) ** 2, 0.0, 1.0, 1e-8)
        assert x == pytest.approx(0.3, abs=1e-6)
        assert y == pytest.approx(0.0, abs=1e-12)

    def test_reversed_interval(self):
        x, _ = golden_section_maximize(lambda v: -abs(v + 2.0), 1.0, -5.0, 1e-9)
        assert x == pytest.approx(-2.0, abs=1e-6)

    def test_interval_below_tolerance(self):
        x, y = golden_section_maximize(lambda v: v, 1.0, 1.0 + 1e-12, 1e-6)
        assert x == pytest.approx(1.0)
        assert y == pytest.approx(1.0)


class TestPumpingWindow:
    def test_window_keeps_decay_inside_bounds(self, reference_params):
        low, high = pumping_window(100.0, reference_params)
        low_rates = derive_rates(reference_params.with_rates(100.0, low))
        high_rates = derive_rates(reference_params.with_rates(100.0, high))
        assert low_rates.gamma_tilde0 == pytest.approx(1e-2, rel=1e-10)
        assert high_rates.gamma_tilde0 == pytest.approx(0.1, rel=1e-10)

    def test_strictness_sets_the_window(self, reference_params):
        low, high = pumping_window(100.0, reference_params, strictness=3.0)
        assert derive_rates(reference_params.with_rates(100.0, low)).gamma_tilde0 == pytest.approx(3e-3, rel=1e-10)
        assert derive_rates(reference_params.with_rates(100.0, high)).gamma_tilde0 == pytest.approx(1.0 / 3.0, rel=1e-10)

    def test_empty_window(self):
        template = EnsembleParams.from_rates(100.0, 15.0, gamma0=0.2)
        with pytest.raises(InfeasibleWindowError):
            pumping_window(100.0, template)


class TestOptimizePumping:
    def test_reference_cooperativity(self, reference_params):
        optimum = optimize_pumping(100.0, 1.0, reference_params)
        assert optimum.unimodal
        assert optimum.eta >= 0.95
        assert optimum.eta == pytest.approx(0.969, abs=2e-3)
        low, high = optimum.bounds
        assert low <= optimum.pumping_rate <= high

    def test_high_cooperativity(self, reference_params):
        # capped by gamma0/gamma_tilde0 at the upper edge of the regime window
        optimum = optimize_pumping(1000.0, 1.0, reference_params)
        assert optimum.eta == pytest.approx(0.978, abs=2e-3)
        assert optimum.at_bound

    def test_wider_window_raises_the_optimum(self, reference_params):
        assert optimize_pumping(100.0, 1.0, reference_params, strictness=3.0).eta == pytest.approx(0.983, abs=2e-3)
        assert optimize_pumping(1000.0, 1.0, reference_params, strictness=3.0).eta >= 0.99

    def test_optimum_beats_reference_pumping(self, reference_rates, reference_params):
        optimum = optimize_pumping(100.0, 1.0, reference_params)
        assert optimum.eta >= mapping_fidelity(reference_rates, 1.0)

    def test_weak_cooperativity_gives_poor_transfer(self, reference_params):
        assert optimize_pumping(0.1, 1.0, reference_params).eta < 0.1

    def test_non_decreasing_in_cooperativity(self, reference_params):
        etas = [optimize_pumping(c, 1.0, reference_params).eta for c in np.geomspace(0.1, 1000.0, 12)]
        assert all(b >= a - 1e-6 for a, b in zip(etas, etas[1:]))

    def test_reduced_optimum_sits_at_upper_window_edge(self, reference_params):
        # the reduced fidelity grows with gamma_tilde0 at fixed C
        optimum = optimize_pumping(100.0, 1.0, reference_params)
        assert optimum.at_bound
        assert optimum.pumping_rate == pytest.approx(optimum.bounds[1], rel=1e-3)
        for factor in (0.5, 0.9):
            params = reference_params.with_rates(100.0, optimum.pumping_rate * factor)
            assert mapping_fidelity(derive_rates(params), 1.0) <= optimum.eta + 1e-12

    def test_full_model(self, reference_params):
        optimum = optimize_pumping(100.0, 1.0, reference_params, model="full")
        assert optimum.eta == pytest.approx(0.9386, abs=3e-3)
        assert not optimum.at_bound
        low, high = optimum.bounds
        assert low < optimum.pumping_rate < high

    def test_explicit_bounds(self, reference_params):
        optimum = optimize_pumping(100.0, 1.0, reference_params, bounds=(1.0, 2.0))
        assert optimum.bounds == (1.0, 2.0)
        assert 1.0 <= optimum.pumping_rate <= 2.0

    def test_invalid_bounds(self, reference_params):
        with pytest.raises(InfeasibleWindowError):
            optimize_pumping(100.0, 1.0, reference_params, bounds=(2.0, 1.0))

    def test_infeasible_window_raises(self):
        template = EnsembleParams.from_rates(100.0, 15.0, gamma0=0.5)
        with pytest.raises(InfeasibleWindowError):
            optimize_pumping(100.0, 1.0, template)

    def test_unknown_model(self, reference_params):
        with pytest.raises(ValueError, match="model"):
            optimize_pumping(100.0, 1.0, reference_params, model="exact")

    def test_negative_cooperativity(self, reference_params):
        with pytest.raises(ValueError):
            optimize_pumping(-1.0, 1.0, reference_params)

    def test_raman_scheme(self):
        template = EnsembleParams.from_rates(100.0, 1e-4, scheme="Raman", delta_raman=1e3)
        optimum = optimize_pumping(100.0, 1.0, template, raman_strategy="cavity_enhanced")
        assert math.isfinite(optimum.eta)
        assert 0.0 < optimum.eta <= 1.0
