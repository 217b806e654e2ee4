import numpy as np
import pytest

from bohrkit.errors import ContractError, DomainError
from bohrkit.harmonic import (
    construct_pair,
    harmonic_bohr_sum,
    lemma_c_check,
    unit_from_turns,
)
from bohrkit.radius import Equation, closed_form_radius
from bohrkit.series import (
    CoefficientSeries,
    bprime_extremal,
    expand_extremal,
    sample_bprime_coeffs,
    schur_sample,
)
from bohrkit.weights import power_weights, scaled_power


def extremal_pair_sum(a, k, p, r):
    """Oracle for the constructed extremal pair: a^p + (1+k)(1-a) r/(1-a r)."""
    return a**p + (1 + k) * (1 - a) * r / (1 - a * r)


class TestConstructPair:
    def test_k_zero_gives_vanishing_coanalytic_part(self):
        pair = construct_pair(schur_sample(order=8, seed=1), 0.0, 1.0)
        assert np.all(pair.g.coeffs == 0.0)

    def test_k_one_copies_coefficients(self):
        h = expand_extremal(bprime_extremal(0.4), 8)
        pair = construct_pair(h, 1.0, 1.0)
        np.testing.assert_array_equal(pair.g.coeffs[1:], h.coeffs[1:])
        assert pair.g.coeffs[0] == 0.0

    def test_termwise_scaling(self):
        h = CoefficientSeries(np.array([0.3, 0.7], dtype=complex))
        pair = construct_pair(h, 0.5, 1j)
        assert pair.g.coeffs[1] == pytest.approx(0.35j, abs=1e-15)

    def test_unimodular_required(self):
        h = expand_extremal(bprime_extremal(0.4), 4)
        with pytest.raises(DomainError):
            construct_pair(h, 0.5, 1.1)

    def test_k_range(self):
        h = expand_extremal(bprime_extremal(0.4), 4)
        for bad in (-0.1, 1.5):
            with pytest.raises(DomainError):
                construct_pair(h, bad, 1.0)

    def test_unit_from_turns(self):
        lam = unit_from_turns(0.25)
        assert lam == pytest.approx(1j, abs=1e-15)
        assert abs(abs(unit_from_turns(0.1234)) - 1.0) <= 1e-15


class TestLemmaC:
    def test_equality_for_constructed_pairs(self):
        w = power_weights()
        h = schur_sample(order=64, seed=12)
        a2 = np.abs(h.coeffs[1:]) ** 2
        for k in (0.0, 0.25, 0.5, 0.75, 1.0):
            pair = construct_pair(h, k, unit_from_turns(0.37))
            for r in (0.1, 0.5, 0.9):
                check = lemma_c_check(pair, w, r)
                # independent oracle: direct loop over k^2 |a_n|^2 r^n
                oracle = k * k * sum(
                    m * r ** (n + 1) for n, m in enumerate(a2)
                )
                assert check.rhs == pytest.approx(oracle, abs=1e-12)
                assert abs(check.lhs - check.rhs) <= 1e-10
                assert check.holds

    def test_k_zero_trivial(self):
        pair = construct_pair(schur_sample(order=16, seed=5), 0.0, 1.0)
        check = lemma_c_check(pair, power_weights(), 0.5)
        assert check.lhs == 0.0
        assert check.holds

    def test_schur_pair_holds_with_margin_zero(self):
        pair = construct_pair(schur_sample(order=64, seed=9), 0.5, 1.0)
        check = lemma_c_check(pair, power_weights(), 0.5)
        assert check.holds
        assert check.lhs == pytest.approx(check.rhs, abs=1e-12)

    def test_requires_decreasing_weights(self):
        w = scaled_power([1.0, 1.0, 80.0])
        assert not w.decreasing
        pair = construct_pair(schur_sample(order=8, seed=2), 0.5, 1.0)
        with pytest.raises(ContractError):
            lemma_c_check(pair, w, 0.3)

    def test_certified_tails_present_for_schur_input(self):
        pair = construct_pair(schur_sample(order=32, seed=4), 0.5, 1.0)
        check = lemma_c_check(pair, power_weights(), 0.5)
        assert check.lhs_error is not None and check.rhs_error is not None


class TestHarmonicBohrSum:
    def test_k_zero_matches_scalar_sum(self):
        pair = construct_pair(expand_extremal(bprime_extremal(0.5), 64), 0.0, 1.0)
        res = harmonic_bohr_sum(pair, power_weights(), 1.0, 1.0 / 3.0)
        assert res.value == pytest.approx(0.7, abs=1e-12)

    def test_k_one_doubles_tail_contribution(self):
        pair = construct_pair(expand_extremal(bprime_extremal(0.5), 64), 1.0, 1.0)
        res = harmonic_bohr_sum(pair, power_weights(), 1.0, 1.0 / 3.0)
        assert res.value == pytest.approx(0.9, abs=1e-12)
        assert res.value == pytest.approx(extremal_pair_sum(0.5, 1.0, 1.0, 1 / 3), abs=1e-12)

    def test_constant_h_gives_one(self):
        h = CoefficientSeries(np.array([1.0, 0.0], dtype=complex))
        pair = construct_pair(h, 0.7, 1.0)
        res = harmonic_bohr_sum(pair, power_weights(), 1.0, 0.5)
        assert res.value == pytest.approx(1.0, abs=1e-15)

    def test_requires_unit_phi0(self):
        pair = construct_pair(expand_extremal(bprime_extremal(0.5), 8), 0.5, 1.0)
        with pytest.raises(DomainError):
            harmonic_bohr_sum(pair, scaled_power([2.0, 1.0]), 1.0, 0.3)

    def test_p_range(self):
        pair = construct_pair(expand_extremal(bprime_extremal(0.5), 8), 0.5, 1.0)
        with pytest.raises(DomainError):
            harmonic_bohr_sum(pair, power_weights(), 1.5, 0.3)

    def test_without_constant_term(self):
        pair = construct_pair(expand_extremal(bprime_extremal(0.5), 64), 1.0, 1.0)
        res = harmonic_bohr_sum(pair, power_weights(), 1.0, 1 / 3, constant_term=False)
        assert res.value == pytest.approx(0.4, abs=1e-12)


class TestConclusionBelowRadius:
    def test_sampled_pairs_stay_below_one(self):
        w = power_weights()
        for k in (0.25, 0.75):
            R = closed_form_radius(Equation.THM2, p=1.0, k=k)
            for i in range(100):
                h = sample_bprime_coeffs(64, seed=900 + i)
                pair = construct_pair(h, k, unit_from_turns(0.59))
                for r in np.linspace(0.0, R, 8):
                    res = harmonic_bohr_sum(pair, w, 1.0, float(r))
                    assert res.value <= 1.0 + 1e-9


class TestSharpnessAboveRadius:
    def test_extremal_exceeds_one_above_radius(self):
        w = power_weights()
        a = 0.999
        for k in (0.5, 1.0):
            R = closed_form_radius(Equation.THM2, p=1.0, k=k)
            r = R + 0.01
            oracle = extremal_pair_sum(a, k, 1.0, r)
            assert oracle > 1.0
            pair = construct_pair(expand_extremal(bprime_extremal(a), 64), k, 1.0)
            res = harmonic_bohr_sum(pair, w, 1.0, r)
            assert res.value == pytest.approx(oracle, abs=1e-10)
            assert res.value > 1.0 + 1e-6
