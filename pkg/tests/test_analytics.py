import math

import numpy as np
import pytest

from majlab.analytics import (
    Color,
    ModelParams,
    clt_standardize,
    fixation_advantage_bound,
    lead_threshold,
    mean_lower_bound,
    mu,
    mu_v,
    predictions,
    tail_bound,
    variance_prediction,
)

# Frozen from 40-digit evaluations of the exact binomial sums.
MU_ORACLE = {
    (10, 10, 0.5): 0.34585987628452131,
    (8, 12, 0.3): 0.29350586701063840,
    (1000, 1000, 0.5): 0.25899906315259264,
}
MU_V_ORACLE = {
    (8, 12, 0.3, Color.RED): -0.37943938452814752,
    (8, 12, 0.3, Color.BLUE): 0.51647612175380796,
}


class TestMu:
    @pytest.mark.parametrize("key", sorted(MU_ORACLE))
    def test_oracle_values(self, key):
        r0, b0, p = key
        assert mu(ModelParams(r0, b0, p)) == pytest.approx(
            MU_ORACLE[key], abs=1e-12
        )

    def test_color_swap_symmetry(self):
        assert mu(ModelParams(8, 12, 0.3)) == pytest.approx(
            mu(ModelParams(12, 8, 0.3)), abs=1e-14
        )

    def test_range(self):
        for r0, b0, p in [(5, 5, 0.5), (3, 30, 0.1), (40, 2, 0.9)]:
            assert 0.0 < mu(ModelParams(r0, b0, p)) <= 1.0


class TestMuV:
    def test_balanced_is_zero(self):
        # at p = 1/2, W = Bin(k-1,1/2) - Bin(k,1/2) satisfies
        # P(W >= 0) = P(-1 - W >= 0) = 1 - P(W >= 0), so mu_v = 0 exactly
        prm = ModelParams(10, 10, 0.5)
        assert mu_v(prm, Color.RED) == pytest.approx(0.0, abs=1e-12)
        assert mu_v(prm, Color.BLUE) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("key", sorted(MU_V_ORACLE, key=str))
    def test_oracle_values(self, key):
        r0, b0, p, color = key
        assert mu_v(ModelParams(r0, b0, p), color) == pytest.approx(
            MU_V_ORACLE[key], abs=1e-12
        )

    def test_minority_disagrees_more(self):
        prm = ModelParams(20, 40, 0.5)
        assert mu_v(prm, Color.RED) < 0 < mu_v(prm, Color.BLUE)

    def test_requires_nonempty_class(self):
        with pytest.raises(ValueError):
            mu_v(ModelParams(0, 5, 0.5), Color.RED)

    def test_balanced_identity_with_mu(self):
        # for r0 = b0 the variance density satisfies 1 - mu_v^2 = 4*mu
        # up to a O(1/sigma) correction
        for r0 in (50, 200, 1000):
            for p in (0.1, 0.5, 0.9):
                prm = ModelParams(r0, r0, p)
                gap = abs((1.0 - mu_v(prm, Color.RED) ** 2) - 4.0 * mu(prm))
                assert gap <= 10.0 / prm.sigma


class TestModelParams:
    def test_derived_quantities(self):
        prm = ModelParams(550, 450, 0.5)
        assert prm.n == 1000
        assert prm.delta == 100
        assert prm.sigma == pytest.approx(math.sqrt(250.0))

    def test_validation(self):
        with pytest.raises(ValueError):
            ModelParams(1, 0, 0.5)
        with pytest.raises(ValueError):
            ModelParams(5, 5, 0.0)
        with pytest.raises(ValueError):
            ModelParams(-1, 5, 0.5)


class TestPredictionsAndBounds:
    def test_variance_prediction(self):
        prm = ModelParams(1000, 1000, 0.5)
        pred = variance_prediction(prm)
        assert pred.value == pytest.approx(2000 * MU_ORACLE[(1000, 1000, 0.5)],
                                           rel=1e-9)
        assert pred.error_scale == pytest.approx(2000 / prm.sigma)

    def test_mean_lower_bound_oracle(self):
        # n*Phi(Delta*p/sigma) - 0.475*n/sigma at (550, 450, 0.5),
        # frozen from a 40-digit evaluation
        assert mean_lower_bound(ModelParams(550, 450, 0.5)) == pytest.approx(
            969.17566109939912, abs=1e-9
        )

    def test_mean_lower_bound_needs_lead(self):
        with pytest.raises(ValueError):
            mean_lower_bound(ModelParams(450, 550, 0.5))

    def test_tail_bound(self):
        prm = ModelParams(550, 450, 0.5)
        threshold, prob = tail_bound(prm, 2.0)
        sigma = prm.sigma
        expected = 1000 * 0.5 * math.erfc(-100 * 0.5 / sigma / math.sqrt(2)) - (
            1000 * 2.0 / sigma
        )
        assert threshold == pytest.approx(expected, abs=1e-9)
        assert prob == pytest.approx(1.0 - 4.0 * 0.25 / 4.0)
        assert 0.0 <= prob <= 1.0

    def test_tail_bound_rejects_small_t(self):
        with pytest.raises(ValueError):
            tail_bound(ModelParams(10, 10, 0.5), 0.5)

    def test_lead_threshold(self):
        prm = ModelParams(5500, 4500, 0.5)
        lt = lead_threshold(prm)
        scale = 1000 * math.sqrt(10000 * 0.5 / 0.5)
        assert lt.value == pytest.approx(5000 + min(3000.0, 0.11 * scale))
        assert lt.conservative_value == pytest.approx(
            5000 + min(3000.0, 0.02 * scale)
        )
        assert lt.conservative_value <= lt.value
        assert lt.hypotheses_met  # Delta*p = 500 >= 5 and sigma = 50 >= 25

    def test_lead_threshold_hypotheses_flag(self):
        assert not lead_threshold(ModelParams(12, 8, 0.5)).hypotheses_met

    def test_predictions_bundle(self):
        pred = predictions(ModelParams(450, 550, 0.5))
        assert math.isnan(pred.mean_lb)  # bound needs r0 >= b0
        assert pred.var_pred == pytest.approx(1000 * pred.mu)
        d = pred.to_dict()
        assert set(d) == {
            "mu", "mu_r", "mu_b", "sigma", "delta", "var_pred", "mean_lb"
        }


class TestFixationAdvantageBound:
    def test_frozen_values(self):
        # 2*Phi(2*(delta/sqrt(2*pi) - 0.85)) - 1 at 40-digit precision
        assert fixation_advantage_bound(3) == pytest.approx(
            0.51210058055329168, abs=1e-12
        )
        assert fixation_advantage_bound(1) == pytest.approx(
            -0.63300445180443210, abs=1e-12
        )
        assert fixation_advantage_bound(5) == pytest.approx(
            0.97794520157064886, abs=1e-12
        )

    def test_monotone_in_delta(self):
        values = [fixation_advantage_bound(d) for d in range(0, 10)]
        assert all(b > a for a, b in zip(values, values[1:]))
        assert all(-1.0 <= v <= 1.0 for v in values)

    def test_negative_delta_rejected(self):
        with pytest.raises(ValueError):
            fixation_advantage_bound(-1)


class TestCltStandardize:
    def test_centering_and_scale(self):
        prm = ModelParams(1000, 1000, 0.5)
        samples = np.array([990.0, 1000.0, 1010.0])
        z = clt_standardize(samples, prm, 1000.0)
        sd = math.sqrt(2000 * mu(prm))
        np.testing.assert_allclose(z, (samples - 1000.0) / sd, atol=1e-12)
        assert z.mean() == pytest.approx(0.0, abs=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            clt_standardize([], ModelParams(10, 10, 0.5), 0.0)
