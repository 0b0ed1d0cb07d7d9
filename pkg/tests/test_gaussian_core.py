import math

import numpy as np
import pytest

from epr_memory.gaussian_core import (
    QuadratureState,
    SymplecticTransform,
    apply_transform,
    beamsplitter,
    compose,
    direct_sum,
    duan_inseparability,
    eof_symmetric,
    epr_squeezing_for,
    epr_variances,
    half_wave_plate,
    identity,
    inverse,
    load_covariance_csv,
    make_epr,
    make_vacuum,
    phase_rotation,
    quarter_wave_plate,
    readout_basis_rotation,
    save_covariance_csv,
    single_mode_squeezing,
)


class TestQuadratureState:
    def test_vacuum_is_identity(self):
        state = make_vacuum(3)
        assert state.n_modes == 3
        np.testing.assert_array_equal(state.cov, np.eye(6))
        np.testing.assert_allclose(state.symplectic_eigenvalues(), [1.0, 1.0, 1.0])

    def test_rejects_wrong_shape(self):
        with pytest.raises(ValueError, match="must be 4x4"):
            QuadratureState(2, np.eye(3))

    def test_rejects_asymmetric(self):
        cov = np.eye(2)
        cov[0, 1] = 0.1
        with pytest.raises(ValueError, match="not symmetric"):
            QuadratureState(1, cov)

    def test_rejects_sub_vacuum_state(self):
        with pytest.raises(ValueError, match="Heisenberg"):
            QuadratureState(1, 0.5 * np.eye(2))

    def test_squeezed_minimum_uncertainty_is_accepted(self):
        state = QuadratureState(1, np.diag([0.1, 10.0]))
        assert state.variance(0, "X") == pytest.approx(0.1)
        assert state.variance(0, "y") == pytest.approx(10.0)

    def test_covariance_is_read_only(self):
        state = make_vacuum(1)
        with pytest.raises(ValueError):
            state.cov[0, 0] = 2.0

    def test_variance_bad_quadrature(self):
        with pytest.raises(ValueError, match="'X' or 'Y'"):
            make_vacuum(1).variance(0, "Z")

    def test_reduced_marginal(self, epr_state):
        single = epr_state.reduced([1])
        assert single.n_modes == 1
        np.testing.assert_allclose(single.cov, math.cosh(1.0) * np.eye(2))

    def test_mode_index_out_of_range(self, epr_state):
        with pytest.raises(IndexError):
            epr_state.variance(2)

    def test_direct_sum_orders_modes(self, epr_state):
        state = direct_sum(make_vacuum(1), epr_state)
        assert state.n_modes == 3
        np.testing.assert_allclose(state.cov[2:, 2:], epr_state.cov)


class TestEprStates:
    @pytest.mark.parametrize("r", np.linspace(0.0, 5.0, 50))
    def test_duan_matches_closed_form(self, r):
        state = make_epr(r)
        assert abs(duan_inseparability(state) - 2.0 * math.exp(-2.0 * r)) <= 1e-12 * math.cosh(2.0 * r)

    @pytest.mark.parametrize("r", np.linspace(0.0, 6.0, 61))
    def test_strong_squeezing_is_accepted(self, r):
        state = make_epr(r)
        nu = state.symplectic_eigenvalues()
        assert np.max(np.abs(nu - 1.0)) <= 1e-9 * math.cosh(2.0 * r) ** 2

    def test_scaled_down_strong_epr_is_rejected(self):
        with pytest.raises(ValueError, match="Heisenberg"):
            QuadratureState(2, 0.99 * make_epr(5.0).cov)

    def test_epr_variances_are_equal(self, epr_state):
        var_minus, var_plus = epr_variances(epr_state)
        assert var_minus == pytest.approx(2.0 * math.exp(-1.0), rel=1e-12)
        assert var_plus == pytest.approx(var_minus, rel=1e-12)

    def test_vacuum_is_separable_bound(self):
        assert duan_inseparability(make_vacuum(2)) == pytest.approx(2.0)

    def test_negative_squeezing_rejected(self):
        with pytest.raises(ValueError, match=">= 0"):
            make_epr(-0.1)

    def test_squeezing_for_inverts_make_epr(self):
        r = epr_squeezing_for(0.8)
        assert duan_inseparability(make_epr(r)) == pytest.approx(0.8, rel=1e-12)

    def test_same_mode_rejected(self, epr_state):
        with pytest.raises(ValueError, match="distinct"):
            epr_variances(epr_state, 1, 1)

    def test_mode_out_of_range(self, epr_state):
        with pytest.raises(IndexError):
            epr_variances(epr_state, 0, 3)


class TestEntanglementOfFormation:
    @pytest.mark.parametrize("r", [0.05, 0.3, 0.7, 1.2, 2.0])
    def test_two_mode_squeezed_vacuum(self, r):
        c2, s2 = math.cosh(r) ** 2, math.sinh(r) ** 2
        expected = c2 * math.log2(c2) - s2 * math.log2(s2)
        assert eof_symmetric(2.0 * math.exp(-2.0 * r)) == pytest.approx(expected, abs=1e-10)

    def test_reference_value(self):
        assert eof_symmetric(1.0) == pytest.approx(0.566166, abs=1e-6)

    @pytest.mark.parametrize("inseparability", [2.0, 2.0 - 1e-13, 2.5, 10.0])
    def test_zero_without_entanglement(self, inseparability):
        assert eof_symmetric(inseparability) == 0.0

    def test_decreasing_in_inseparability(self):
        values = [eof_symmetric(i) for i in np.linspace(0.05, 1.99, 40)]
        assert all(b < a for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("inseparability", [0.0, -1.0])
    def test_non_positive_rejected(self, inseparability):
        with pytest.raises(ValueError):
            eof_symmetric(inseparability)


class TestSymplecticTransforms:
    def test_rejects_non_symplectic(self):
        with pytest.raises(ValueError, match="not symplectic"):
            SymplecticTransform(np.diag([2.0, 2.0]))

    def test_rejects_odd_size(self):
        with pytest.raises(ValueError, match="even size"):
            SymplecticTransform(np.eye(3))

    @pytest.mark.parametrize("factory", [
        lambda: beamsplitter(2, 0, 1, 0.3),
        lambda: phase_rotation(2, 1, 1.1),
        lambda: single_mode_squeezing(2, 0, 0.7),
        lambda: quarter_wave_plate(2, 0),
        lambda: half_wave_plate(2, 0, 1),
        readout_basis_rotation,
    ])
    def test_preserves_symplectic_spectrum(self, factory):
        state = apply_transform(make_epr(0.4), single_mode_squeezing(2, 1, 0.2))
        before = state.symplectic_eigenvalues()
        after = apply_transform(state, factory()).symplectic_eigenvalues()
        np.testing.assert_allclose(after, before, atol=1e-9)

    def test_compose_applies_first_argument_first(self):
        squeeze = single_mode_squeezing(1, 0, 0.5)
        rotate = quarter_wave_plate(1, 0)
        state = apply_transform(make_vacuum(1), compose(squeeze, rotate))
        # squeezed X is rotated into Y
        assert state.variance(0, "Y") == pytest.approx(math.exp(-1.0))
        assert state.variance(0, "X") == pytest.approx(math.exp(1.0))

    def test_inverse_undoes_transform(self):
        t = compose(beamsplitter(2, 0, 1, 0.4), single_mode_squeezing(2, 1, 0.3), phase_rotation(2, 0, 2.0))
        product = compose(t, inverse(t)).matrix
        np.testing.assert_allclose(product, identity(2).matrix, atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="acts on 1 mode"):
            apply_transform(make_epr(0.2), quarter_wave_plate(1, 0))

    def test_balanced_beamsplitter_on_epr_gives_single_mode_squeezing(self):
        out = apply_transform(make_epr(0.5), beamsplitter(2, 0, 1))
        assert out.variance(0, "X") == pytest.approx(math.exp(-1.0), rel=1e-12)
        assert out.variance(1, "X") == pytest.approx(math.exp(1.0), rel=1e-12)


class TestReadoutBasisRotation:
    @pytest.mark.parametrize("r", [0.2, 0.5, 1.0])
    def test_both_modes_squeezed_on_x(self, r):
        out = apply_transform(make_epr(r), readout_basis_rotation())
        target = math.exp(-2.0 * r)
        assert out.variance(0, "X") == pytest.approx(target, abs=1e-12)
        assert out.variance(1, "X") == pytest.approx(target, abs=1e-12)
        assert out.variance(0, "Y") == pytest.approx(1.0 / target, rel=1e-12)

    def test_output_modes_are_uncorrelated(self, epr_state):
        out = apply_transform(epr_state, readout_basis_rotation())
        np.testing.assert_allclose(out.cov[:2, 2:], np.zeros((2, 2)), atol=1e-12)


class TestCovarianceCsv:
    def test_round_trip(self, tmp_path, epr_state):
        path = tmp_path / "epr.csv"
        save_covariance_csv(epr_state, path)
        assert path.read_text(encoding="utf-8").splitlines()[0] == "n_modes=2"
        loaded = load_covariance_csv(path)
        np.testing.assert_array_equal(loaded.cov, epr_state.cov)

    def test_missing_header(self, tmp_path):
        path = tmp_path / "bare.csv"
        path.write_text("1,0\n0,1\n", encoding="utf-8")
        with pytest.raises(ValueError, match="n_modes"):
            load_covariance_csv(path)
