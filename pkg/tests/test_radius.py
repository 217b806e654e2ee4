import math

import numpy as np
import pytest

from bohrkit.errors import ContractError, DomainError, NoRootInRange
from bohrkit.radius import (
    Equation,
    RadiusProblem,
    closed_form_or_none,
    closed_form_radius,
    solve_radius,
)
from bohrkit.weights import power_weights, scaled_power, tabulated

R3 = 3.0 - math.sqrt(8.0)


def _solve(eq, p=None, k=None, w=None):
    return solve_radius(RadiusProblem(eq, w or power_weights(), p=p, k=k))


class TestKnownRadii:
    def test_thm1_reduced_class_radius_is_half(self):
        res = _solve(Equation.THM1, p=1.0)
        assert res.R == pytest.approx(0.5, abs=1e-10)
        assert res.bracket[1] - res.bracket[0] <= 1e-12
        assert abs(res.residual) <= 1e-10

    def test_thm3_radius(self):
        res = _solve(Equation.THM3)
        assert res.R == pytest.approx(R3, abs=1e-10)
        assert abs(res.residual) <= 1e-10

    def test_thma_classical_radius_is_third(self):
        res = _solve(Equation.THMA, p=1.0)
        assert res.R == pytest.approx(1.0 / 3.0, abs=1e-10)

    def test_thm4_radius_is_third(self):
        assert _solve(Equation.THM4).R == pytest.approx(1.0 / 3.0, abs=1e-10)

    def test_thm5_example_radii(self):
        for k, expect in ((0.0, 1 / 3), (0.5, 1 / 4), (1.0, 1 / 5)):
            assert _solve(Equation.THM5, k=k).R == pytest.approx(expect, abs=1e-10)


class TestClosedForms:
    def test_thm1_formula(self):
        assert closed_form_radius(Equation.THM1, p=0.5) == pytest.approx(1 / 3)
        assert closed_form_radius(Equation.THM1, p=1.0) == pytest.approx(0.5)

    def test_thm2_formula_in_both_parametrizations(self):
        # k = (K-1)/(K+1); at p = 1, K = 2 the radius is 3/7
        k = (2.0 - 1.0) / (2.0 + 1.0)
        r = closed_form_radius(Equation.THM2, p=1.0, k=k)
        assert r == pytest.approx(3.0 / 7.0, abs=1e-15)
        p, K = 1.0, 2.0
        assert r == pytest.approx(p * (K + 1) / ((p + 2) * K + p), abs=1e-15)

    def test_thm5_examples(self):
        assert closed_form_radius(Equation.THM5, k=0.0) == pytest.approx(1 / 3)
        assert closed_form_radius(Equation.THM5, k=1.0) == pytest.approx(1 / 5)

    def test_thma_formula(self):
        assert closed_form_radius(Equation.THMA, p=2.0) == pytest.approx(0.5)
        assert closed_form_radius(Equation.THMA, p=1.0) == pytest.approx(1 / 3)

    def test_parameter_validation(self):
        with pytest.raises(DomainError):
            closed_form_radius(Equation.THM1, p=1.5)
        with pytest.raises(DomainError):
            closed_form_radius(Equation.THMA, p=2.5)
        with pytest.raises(DomainError):
            closed_form_radius(Equation.THM2, p=1.0, k=1.2)


class TestSolverAgainstClosedForm:
    def test_cross_check_grid(self):
        w = power_weights()
        for p in np.arange(0.1, 1.05, 0.1):
            p = float(p)
            for eq in (Equation.THMA, Equation.THM1):
                res = solve_radius(RadiusProblem(eq, w, p=p))
                assert res.R == pytest.approx(closed_form_radius(eq, p=p), abs=1e-10)
            for k in (0.0, 0.25, 0.5, 0.75, 1.0):
                res = solve_radius(RadiusProblem(Equation.THM2, w, p=p, k=k))
                assert res.R == pytest.approx(
                    closed_form_radius(Equation.THM2, p=p, k=k), abs=1e-10
                )
        for eq in (Equation.THM3, Equation.THM4):
            res = solve_radius(RadiusProblem(eq, w))
            assert res.R == pytest.approx(closed_form_radius(eq), abs=1e-10)
        for k in (0.0, 0.25, 0.5, 0.75, 1.0):
            res = solve_radius(RadiusProblem(Equation.THM5, w, k=k))
            assert res.R == pytest.approx(closed_form_radius(Equation.THM5, k=k), abs=1e-10)

    def test_monotone_in_p(self):
        radii = [_solve(Equation.THM1, p=float(p)).R for p in np.arange(0.1, 1.05, 0.1)]
        assert all(a < b for a, b in zip(radii, radii[1:]))

    def test_monotone_in_k(self):
        for eq in (Equation.THM2, Equation.THM5):
            radii = [
                _solve(eq, p=1.0 if eq is Equation.THM2 else None, k=k).R
                for k in (0.0, 0.25, 0.5, 0.75, 1.0)
            ]
            assert all(a > b for a, b in zip(radii, radii[1:]))


class TestMinimality:
    def test_same_sign_left_of_root(self):
        cases = [
            RadiusProblem(Equation.THM1, power_weights(), p=1.0),
            RadiusProblem(Equation.THM3, power_weights()),
            RadiusProblem(Equation.THM5, power_weights(), k=0.5),
        ]
        for prob in cases:
            res = solve_radius(prob)
            assert math.copysign(1, prob.gap(res.R / 2)) == math.copysign(
                1, prob.gap(1e-6)
            )
            assert res.certificate["single_signed_before_bracket"]
            assert res.certificate["scan_step"] == 1e-3


class TestValidation:
    def test_p_ranges(self):
        w = power_weights()
        with pytest.raises(DomainError):
            RadiusProblem(Equation.THM1, w, p=1.5)
        with pytest.raises(DomainError):
            RadiusProblem(Equation.THMA, w, p=2.5)
        with pytest.raises(DomainError):
            RadiusProblem(Equation.THM1, w)  # p required
        with pytest.raises(DomainError):
            RadiusProblem(Equation.THM3, w, p=1.0)  # p not taken

    def test_k_ranges(self):
        w = power_weights()
        with pytest.raises(DomainError):
            RadiusProblem(Equation.THM2, w, p=1.0, k=1.2)
        with pytest.raises(DomainError):
            RadiusProblem(Equation.THM5, w)  # k required
        with pytest.raises(DomainError):
            RadiusProblem(Equation.THM4, w, k=0.5)  # k not taken

    def test_thm2_requires_unit_phi0(self):
        w = scaled_power([2.0, 1.0, 1.0])
        with pytest.raises(ContractError):
            RadiusProblem(Equation.THM2, w, p=1.0, k=0.5)

    def test_thm3_requires_index_weighted_majorant(self):
        grid = np.linspace(0.0, 0.9, 50)
        table = np.vstack([grid**n for n in range(8)])
        w = tabulated(grid, table, beyond_phi_tail=lambda n, r: 0.0 * n)
        with pytest.raises(ContractError):
            RadiusProblem(Equation.THM3, w)

    def test_no_root_in_range(self):
        w = scaled_power([1.0, 1e-9])
        with pytest.raises(NoRootInRange):
            solve_radius(RadiusProblem(Equation.THM1, w, p=1.0))


class TestOtherWeights:
    def test_tabulated_power_weights_recover_radius(self):
        # a dense tabulation of r^n should land close to the closed form
        grid = np.linspace(0.0, 0.9, 2001)
        table = np.vstack([grid**n for n in range(80)])
        w = tabulated(grid, table)
        res = solve_radius(RadiusProblem(Equation.THM1, w, p=1.0))
        assert res.R == pytest.approx(0.5, abs=1e-4)

    def test_scaled_power_changes_radius(self):
        # halving every n >= 1 weight doubles the effective budget: the
        # equation 1 = (1/p) * 0.5 * r/(1-r) at p = 1 gives R = 2/3
        w = scaled_power([1.0] + [0.5] * 200)
        res = solve_radius(RadiusProblem(Equation.THM1, w, p=1.0))
        assert res.R == pytest.approx(2.0 / 3.0, abs=1e-6)

    def test_closed_form_or_none(self):
        assert closed_form_or_none(
            RadiusProblem(Equation.THM1, power_weights(), p=1.0)
        ) == pytest.approx(0.5)
        assert (
            closed_form_or_none(
                RadiusProblem(Equation.THM1, scaled_power([1.0, 1.0]), p=1.0)
            )
            is None
        )
