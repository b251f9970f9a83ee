"""Closed-form predictions for one step of majority dynamics on G_{n,p}:
the variance density mu, the per-vertex agreement means mu_v, mean and
tail bounds for |R_1|, the lead threshold, and the fixation-advantage
bound for an initial lead Delta.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .numerics import diff_distribution, std_normal_cdf

#: Standard coefficient for the lead threshold.
LEAD_COEFF_STATEMENT = 0.11
#: Smaller coefficient from a more conservative derivation of the same
#: threshold; both are exposed so callers can pick.
LEAD_COEFF_CONSERVATIVE = 0.02

#: Berry-Esseen constant (0.4748 rounded up) entering the mean lower bound.
BERRY_ESSEEN_COEFF = 0.475

#: Offset in the fixation-advantage bound 2*Phi(2*(delta/sqrt(2*pi) - 0.85)) - 1.
FIXATION_ALPHA = 0.85


class Color(enum.Enum):
    RED = "red"
    BLUE = "blue"


@dataclass(frozen=True)
class ModelParams:
    """Initial coloring sizes and edge probability: (|R_0|, |B_0|, p)."""

    r0: int
    b0: int
    p: float

    def __post_init__(self):
        if self.r0 < 0 or self.b0 < 0 or self.r0 + self.b0 < 2:
            raise ValueError(f"need r0, b0 >= 0 with r0 + b0 >= 2, got {self}")
        if not (0.0 < self.p < 1.0):
            raise ValueError(f"p must be in (0,1), got {self.p}")

    @property
    def n(self) -> int:
        return self.r0 + self.b0

    @property
    def delta(self) -> int:
        return abs(self.r0 - self.b0)

    @property
    def sigma(self) -> float:
        return math.sqrt(self.n * self.p * (1.0 - self.p))


def mu(params: ModelParams) -> float:
    """P(W >= 0) * P(W <= 0) with W = Bin(r0,p) - Bin(b0,p), exactly."""
    d = diff_distribution(params.r0, params.b0, params.p)
    return d.prob_ge(0) * d.prob_le(0)


def mu_v(params: ModelParams, color: Color) -> float:
    """Mean agreement sign of a vertex of the given initial color.

    2*P(Bin(own class size - 1, p) >= Bin(other class size, p)) - 1: the
    vertex itself is excluded from its neighborhood count.
    """
    if color is Color.RED:
        if params.r0 < 1:
            raise ValueError("mu_v for red requires r0 >= 1")
        own, other = params.r0, params.b0
    else:
        if params.b0 < 1:
            raise ValueError("mu_v for blue requires b0 >= 1")
        own, other = params.b0, params.r0
    d = diff_distribution(own - 1, other, params.p)
    return 2.0 * d.prob_ge(0) - 1.0


class VariancePrediction(NamedTuple):
    value: float  # n * mu
    error_scale: float  # Delta + n / sigma, the stated error magnitude


def variance_prediction(params: ModelParams) -> VariancePrediction:
    """Predicted Var(|R_1|) = n*mu, with its error scale as a diagnostic."""
    value = params.n * mu(params)
    return VariancePrediction(value, params.delta + params.n / params.sigma)


def mean_lower_bound(params: ModelParams) -> float:
    """Lower bound on E|R_1|: n*Phi(Delta*p/sigma) - 0.475*n/sigma.

    Requires r0 >= b0 so that Delta = r0 - b0 >= 0.
    """
    if params.r0 < params.b0:
        raise ValueError("mean_lower_bound requires r0 >= b0")
    sigma = params.sigma
    return params.n * std_normal_cdf(params.delta * params.p / sigma) - (
        BERRY_ESSEEN_COEFF * params.n / sigma
    )


def tail_bound(params: ModelParams, t: float, c: float = 4.0) -> tuple[float, float]:
    """(threshold, probability lower bound) for the Chebyshev-style tail claim.

    threshold = n*Phi(Delta*p/sigma) - n*t/sigma and the probability bound
    1 - c*p*(1-p)/t^2 clamped to [0,1].  The universal constant is unknown;
    the caller supplies c (default 4, calibrated empirically).
    """
    if t < 1.0:
        raise ValueError(f"t must be >= 1, got {t}")
    if c <= 0.0:
        raise ValueError(f"c must be positive, got {c}")
    sigma = params.sigma
    threshold = params.n * std_normal_cdf(params.delta * params.p / sigma) - (
        params.n * t / sigma
    )
    prob_lb = 1.0 - c * params.p * (1.0 - params.p) / (t * t)
    return threshold, min(1.0, max(0.0, prob_lb))


@dataclass(frozen=True)
class LeadThreshold:
    """Both variants of the |R_1| lead threshold, plus the hypothesis flag.

    `value` uses the stated coefficient 0.11; `conservative_value` the
    derivation's 0.02.  `hypotheses_met` records Delta*p >= 5 and sigma >= 25.
    """

    value: float
    conservative_value: float
    hypotheses_met: bool


def lead_threshold(params: ModelParams) -> LeadThreshold:
    n, sigma = params.n, params.sigma
    scale = params.delta * math.sqrt(n * params.p / (1.0 - params.p))
    return LeadThreshold(
        value=n / 2.0 + min(0.3 * n, LEAD_COEFF_STATEMENT * scale),
        conservative_value=n / 2.0 + min(0.3 * n, LEAD_COEFF_CONSERVATIVE * scale),
        hypotheses_met=(params.delta * params.p >= 5.0 and sigma >= 25.0),
    )


def fixation_advantage_bound(delta: int) -> float:
    """2*Phi(2*(delta/sqrt(2*pi) - 0.85)) - 1.

    Lower bound on P(all red) - P(all blue) at p = 1/2 for an initial red
    lead of delta, up to an o(1) term which is omitted here.
    """
    if delta < 0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    return 2.0 * std_normal_cdf(2.0 * (delta / math.sqrt(2.0 * math.pi) - FIXATION_ALPHA)) - 1.0


def clt_standardize(
    samples: Sequence[float], params: ModelParams, empirical_mean: float
) -> np.ndarray:
    """z-scores (sample - empirical_mean) / sqrt(n*mu).

    Centers at the empirical mean because E|R_1| has no closed form; the
    scale sqrt(n*mu) is the predicted standard deviation.
    """
    arr = np.asarray(samples, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("empty sample vector")
    var_pred = params.n * mu(params)
    if var_pred <= 0.0:
        raise ValueError("predicted variance is not positive")
    return (arr - empirical_mean) / math.sqrt(var_pred)


@dataclass(frozen=True)
class Predictions:
    """Bundle of the closed-form quantities for one parameter triple."""

    mu: float
    mu_r: float
    mu_b: float
    sigma: float
    delta: int
    var_pred: float
    mean_lb: float  # NaN when r0 < b0 (bound needs a nonnegative lead)

    def to_dict(self) -> dict:
        return {
            "mu": self.mu,
            "mu_r": self.mu_r,
            "mu_b": self.mu_b,
            "sigma": self.sigma,
            "delta": self.delta,
            "var_pred": self.var_pred,
            "mean_lb": self.mean_lb,
        }


def predictions(params: ModelParams) -> Predictions:
    m = mu(params)
    return Predictions(
        mu=m,
        mu_r=mu_v(params, Color.RED) if params.r0 >= 1 else math.nan,
        mu_b=mu_v(params, Color.BLUE) if params.b0 >= 1 else math.nan,
        sigma=params.sigma,
        delta=params.delta,
        var_pred=params.n * m,
        mean_lb=mean_lower_bound(params) if params.r0 >= params.b0 else math.nan,
    )
