"""Numerical treatment of the sup-condition controlling how large a lead
must be before almost no vertex sees an opposing majority:

    sup_{0 <= gamma <= 2} exp(-gamma^2/2) * Phi((gamma - 2*alpha)/sqrt(1-delta))^delta

Feasibility means the sup is at most 1/4 - eps.  The solver evaluates the
objective, takes the sup by dense grid plus ternary refinement, and
inverts the condition for the minimal feasible alpha by bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr  # vectorized Phi

from .numerics import std_normal_cdf

GRID_POINTS = 20_001  # resolution 1e-4 on [0, 2]
GAMMA_TOL = 1e-8
ALPHA_TOL = 1e-6
ALPHA_MAX = 10.0


@dataclass(frozen=True)
class PropositionQuery:
    eps: float
    delta: float
    alpha: float | None = None

    def __post_init__(self):
        if not (0.0 < self.eps < 0.25):
            raise ValueError(f"eps must be in (0, 1/4), got {self.eps}")
        if not (self.eps < self.delta < 1.0 - self.eps):
            raise ValueError(
                f"delta must be in (eps, 1-eps) = ({self.eps}, {1 - self.eps}), "
                f"got {self.delta}"
            )
        if self.alpha is not None and self.alpha < 0.0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")


@dataclass(frozen=True)
class SupResult:
    sup_value: float
    gamma_argmax: float
    grid_resolution: float
    refined: bool


def objective(gamma: float, alpha: float, delta: float) -> float:
    """exp(-gamma^2/2) * Phi((gamma - 2*alpha)/sqrt(1-delta))^delta."""
    if not (0.0 < delta < 1.0):
        raise ValueError(f"delta must be in (0,1), got {delta}")
    if not (0.0 <= gamma <= 2.0):
        raise ValueError(f"gamma must be in [0,2], got {gamma}")
    if alpha < 0.0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    phi = std_normal_cdf((gamma - 2.0 * alpha) / math.sqrt(1.0 - delta))
    return math.exp(-gamma * gamma / 2.0) * phi**delta


def _objective_grid(gammas: np.ndarray, alpha: float, delta: float) -> np.ndarray:
    phi = ndtr((gammas - 2.0 * alpha) / math.sqrt(1.0 - delta))
    return np.exp(-(gammas**2) / 2.0) * phi**delta


def sup_over_gamma(alpha: float, delta: float) -> SupResult:
    """Supremum of the objective over gamma in [0, 2].

    Dense grid scan (lowest-gamma tie-break via argmax-first semantics)
    followed by ternary search on the bracketing interval.  The objective
    may be multimodal in gamma, so the grid comes first; refinement only
    polishes the winning bracket.
    """
    gammas = np.linspace(0.0, 2.0, GRID_POINTS)
    values = _objective_grid(gammas, alpha, delta)
    i = int(np.argmax(values))
    h = gammas[1] - gammas[0]
    lo = max(0.0, gammas[i] - h)
    hi = min(2.0, gammas[i] + h)
    # ternary search on the bracket
    while hi - lo > GAMMA_TOL:
        m1 = lo + (hi - lo) / 3.0
        m2 = hi - (hi - lo) / 3.0
        if objective(m1, alpha, delta) < objective(m2, alpha, delta):
            lo = m1
        else:
            hi = m2
    g_star = (lo + hi) / 2.0
    sup_value = max(float(values[i]), objective(g_star, alpha, delta))
    g_best = g_star if objective(g_star, alpha, delta) >= values[i] else float(gammas[i])
    return SupResult(
        sup_value=sup_value,
        gamma_argmax=g_best,
        grid_resolution=float(h),
        refined=True,
    )


def feasibility_check(query: PropositionQuery) -> bool:
    """True iff sup_over_gamma(alpha, delta) <= 1/4 - eps."""
    if query.alpha is None:
        raise ValueError("feasibility_check needs a query with alpha set")
    return sup_over_gamma(query.alpha, query.delta).sup_value <= 0.25 - query.eps


def min_alpha(delta: float, eps: float) -> float:
    """Minimal feasible alpha by bisection on [0, ALPHA_MAX].

    Uses that the sup is nonincreasing in alpha (the Phi factor is
    pointwise decreasing in alpha, hence so is the sup).
    """
    PropositionQuery(eps=eps, delta=delta)  # validate (delta, eps)

    def feasible(a: float) -> bool:
        return sup_over_gamma(a, delta).sup_value <= 0.25 - eps

    if not feasible(ALPHA_MAX):
        raise ValueError(
            f"no feasible alpha up to {ALPHA_MAX} for delta={delta}, eps={eps}"
        )
    if feasible(0.0):
        return 0.0
    lo, hi = 0.0, ALPHA_MAX
    while hi - lo > ALPHA_TOL:
        mid = (lo + hi) / 2.0
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi
