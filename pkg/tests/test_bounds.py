import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from majlab.bounds import (
    PropositionQuery,
    feasibility_check,
    min_alpha,
    objective,
    sup_over_gamma,
)

# Frozen from 40-digit evaluations of exp(-g^2/2) * Phi((g-2a)/sqrt(1-d))^d.
OBJECTIVE_ORACLE = [
    ((2.0, 0.85, 0.499), 0.11033791302910576),
    ((1.0, 0.50, 0.250), 0.51002945749382403),
    ((0.0, 0.85, 0.499), 0.090757855919592708),
]


class TestObjective:
    @pytest.mark.parametrize("args,expected", OBJECTIVE_ORACLE)
    def test_oracle_values(self, args, expected):
        assert objective(*args) == pytest.approx(expected, abs=1e-13)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            objective(-0.1, 0.85, 0.499)
        with pytest.raises(ValueError):
            objective(2.1, 0.85, 0.499)
        with pytest.raises(ValueError):
            objective(1.0, -0.1, 0.499)
        with pytest.raises(ValueError):
            objective(1.0, 0.85, 1.0)

    def test_decreasing_in_alpha(self):
        for gamma in (0.0, 0.7, 1.5, 2.0):
            vals = [objective(gamma, a, 0.4) for a in np.linspace(0.0, 3.0, 13)]
            assert all(b < a for a, b in zip(vals, vals[1:]))


class TestSupOverGamma:
    def test_matches_independent_optimizer(self):
        for alpha, delta in [(0.85, 0.499), (0.5, 0.25), (1.2, 0.7)]:
            res = sup_over_gamma(alpha, delta)
            opt = minimize_scalar(
                lambda g: -objective(g, alpha, delta),
                bounds=(0.0, 2.0),
                method="bounded",
                options={"xatol": 1e-12},
            )
            # the objective can be multimodal; the scalar optimizer may
            # land in a local max, so it can only lower-bound the sup
            assert res.sup_value >= -opt.fun - 1e-12
            grid = max(
                objective(g, alpha, delta) for g in np.linspace(0.0, 2.0, 4001)
            )
            assert res.sup_value == pytest.approx(max(grid, -opt.fun), abs=1e-8)

    def test_dominates_coarse_grid(self):
        res = sup_over_gamma(0.85, 0.499)
        for g in np.linspace(0.0, 2.0, 999):
            assert res.sup_value >= objective(float(g), 0.85, 0.499) - 1e-12

    def test_argmax_attains_sup(self):
        res = sup_over_gamma(0.85, 0.499)
        assert 0.0 <= res.gamma_argmax <= 2.0
        assert objective(res.gamma_argmax, 0.85, 0.499) == pytest.approx(
            res.sup_value, abs=1e-9
        )

    def test_nonincreasing_in_alpha(self):
        sups = [sup_over_gamma(a, 0.499).sup_value for a in np.linspace(0, 2, 9)]
        assert all(b <= a + 1e-12 for a, b in zip(sups, sups[1:]))


class TestFeasibility:
    def test_reference_point_feasible(self):
        q = PropositionQuery(eps=1e-10, delta=0.499, alpha=0.85)
        assert feasibility_check(q)
        assert sup_over_gamma(0.85, 0.499).sup_value <= 0.25 - 1e-10

    def test_alpha_zero_infeasible(self):
        # at gamma = 0 the objective is Phi(-2*alpha/sqrt(1-delta))^delta,
        # which is Phi(0)^delta > 1/4 when alpha = 0
        q = PropositionQuery(eps=1e-10, delta=0.499, alpha=0.0)
        assert not feasibility_check(q)

    def test_query_validation(self):
        with pytest.raises(ValueError):
            PropositionQuery(eps=0.3, delta=0.5)
        with pytest.raises(ValueError):
            PropositionQuery(eps=0.1, delta=0.05)
        with pytest.raises(ValueError):
            PropositionQuery(eps=0.1, delta=0.5, alpha=-1.0)
        with pytest.raises(ValueError):
            feasibility_check(PropositionQuery(eps=0.1, delta=0.5))


class TestMinAlpha:
    def test_bisection_contract(self):
        a = min_alpha(0.499, 1e-10)
        assert sup_over_gamma(a, 0.499).sup_value <= 0.25 - 1e-10
        assert sup_over_gamma(a - 1e-5, 0.499).sup_value > 0.25 - 1e-10
        assert a <= 0.85

    def test_smaller_delta_needs_larger_alpha(self):
        # the Phi factor is raised to the power delta, so shrinking delta
        # pulls the objective toward exp(-gamma^2/2) and the condition
        # gets harder to satisfy
        assert min_alpha(0.3, 1e-10) >= min_alpha(0.499, 1e-10) - 1e-6

    def test_validates_inputs(self):
        with pytest.raises(ValueError):
            min_alpha(0.5, 0.3)
