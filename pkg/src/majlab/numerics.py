"""Exact scalar kernels: binomial pmfs, binomial-difference distributions,
the standard normal CDF, and anticoncentration diagnostics.

The difference distribution W = Bin(n, p) - Bin(m, p) is the law of a
vertex's red-minus-blue neighbor count; everything downstream (variance
predictions, Fourier closed forms) is built on its exact pmf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Exact convolution only below this total size; above it callers should
# switch to normal approximations via std_normal_cdf.
CONVOLUTION_CAP = 200_000


class ConvolutionCapError(ValueError):
    """Raised when an exact pmf is requested above CONVOLUTION_CAP.

    Signals that the caller should use a normal approximation instead.
    """


def _check_p(p: float) -> None:
    if not (0.0 < p < 1.0):
        raise ValueError(f"p must be in (0,1), got {p}")


def log_binomial_pmf(n: int, p: float, k: int) -> float:
    """log P(Bin(n,p) = k); -inf outside the support."""
    _check_p(p)
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if k < 0 or k > n:
        return -math.inf
    return (
        math.lgamma(n + 1)
        - math.lgamma(k + 1)
        - math.lgamma(n - k + 1)
        + k * math.log(p)
        + (n - k) * math.log1p(-p)
    )


def binomial_pmf(n: int, p: float) -> np.ndarray:
    """Vector of P(Bin(n,p) = k) for k = 0..n, computed in log space."""
    _check_p(p)
    if n == 0:
        return np.ones(1)
    k = np.arange(n + 1, dtype=np.float64)
    logc = (
        math.lgamma(n + 1)
        - np.vectorize(math.lgamma)(k + 1)
        - np.vectorize(math.lgamma)(n - k + 1)
    )
    return np.exp(logc + k * math.log(p) + (n - k) * math.log1p(-p))


@dataclass(frozen=True)
class DiffDistribution:
    """Exact pmf of W = Bin(n,p) - Bin(m,p) on integer support [-m, n]."""

    n: int
    m: int
    p: float
    pmf: np.ndarray = field(repr=False)

    @property
    def support_min(self) -> int:
        return -self.m

    @property
    def support_max(self) -> int:
        return self.n

    def prob_at(self, t: int) -> float:
        if t < -self.m or t > self.n:
            return 0.0
        return float(self.pmf[t + self.m])

    def prob_le(self, t: int) -> float:
        """P(W <= t); t is clamped to the support."""
        if t < -self.m:
            return 0.0
        if t >= self.n:
            return 1.0
        return float(math.fsum(self.pmf[: t + self.m + 1]))

    def prob_ge(self, t: int) -> float:
        """P(W >= t); summed from the upper tail for accuracy."""
        if t > self.n:
            return 0.0
        if t <= -self.m:
            return 1.0
        return float(math.fsum(self.pmf[t + self.m :]))

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "p": self.p, "pmf": self.pmf.tolist()}


def diff_distribution(n: int, m: int, p: float) -> DiffDistribution:
    """Exact distribution of Bin(n,p) - Bin(m,p) by discrete convolution."""
    _check_p(p)
    if n < 0 or m < 0:
        raise ValueError(f"need n, m >= 0, got n={n}, m={m}")
    if n + m == 0:
        # degenerate case: W is identically 0
        return DiffDistribution(n=0, m=0, p=p, pmf=np.ones(1))
    if n + m > CONVOLUTION_CAP:
        raise ConvolutionCapError(
            f"n + m = {n + m} exceeds the exact-convolution cap "
            f"{CONVOLUTION_CAP}; use a normal approximation (std_normal_cdf)"
        )
    pos = binomial_pmf(n, p)
    neg = binomial_pmf(m, p)[::-1]  # index j holds P(Bin(m,p) = m - j)
    # (pos * neg)[s] = P(W = s - m): the kernel is the smaller of the two
    pmf = np.convolve(pos, neg) if len(pos) >= len(neg) else np.convolve(neg, pos)
    return DiffDistribution(n=n, m=m, p=p, pmf=pmf)


def diff_cdf(dist: DiffDistribution, t: int) -> float:
    """P(W <= t), clamping t outside the support."""
    return dist.prob_le(t)


def std_normal_cdf(t: float) -> float:
    """Phi(t), the standard normal CDF, via the complementary error function."""
    if not math.isfinite(t):
        raise ValueError(f"t must be finite, got {t}")
    return 0.5 * math.erfc(-t / math.sqrt(2.0))


@dataclass(frozen=True)
class AnticoncentrationReport:
    """Empirical constants for the pointwise and adjacent-difference bounds.

    The universal constant in those bounds is unspecified, so we report
    what the exact pmf implies: sup_t P(W=t) scaled by sqrt((m+n)p(1-p))
    and max_t |P(W=t+1)-P(W=t)| scaled by (m+n)p(1-p).
    """

    sup_pmf: float
    max_adjacent_diff: float
    implied_c1: float
    implied_c2: float


def anticoncentration_report(n: int, m: int, p: float) -> AnticoncentrationReport:
    dist = diff_distribution(n, m, p)
    pmf = dist.pmf
    sup_pmf = float(pmf.max())
    if len(pmf) > 1:
        max_adj = float(np.abs(np.diff(pmf)).max())
    else:
        max_adj = 0.0
    scale = (m + n) * p * (1.0 - p)
    return AnticoncentrationReport(
        sup_pmf=sup_pmf,
        max_adjacent_diff=max_adj,
        implied_c1=sup_pmf * math.sqrt(scale),
        implied_c2=max_adj * scale,
    )
