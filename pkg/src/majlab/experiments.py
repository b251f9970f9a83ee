"""Monte Carlo experiment harness.

Every experiment derives per-trial seeds from a master seed by a keyed
64-bit mix, so trials are independent and any run is reproducible
byte-for-byte at any worker count (workers only partition the trial
loop; results are merged by trial index).
"""

from __future__ import annotations

import math
import os
from typing import Optional

import numpy as np
import numba

from . import _hash
from .analytics import ModelParams, clt_standardize, mu
from .graphs import (
    Coloring,
    DenseGraph,
    GraphSpec,
    Outcome,
    majority_step,
    run_dynamics,
)
from .numerics import std_normal_cdf
from .records import ExperimentRecord, SummaryStats

WORKERS_ENV = "MAJLAB_WORKERS"


def resolve_workers(workers: Optional[int] = None) -> int:
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, 0)) or (os.cpu_count() or 1)
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    return workers


def _set_threads(workers: Optional[int]) -> None:
    numba.set_num_threads(min(resolve_workers(workers), numba.config.NUMBA_NUM_THREADS))


def trial_seeds(master_seed: int, trials: int) -> np.ndarray:
    return np.array(
        [_hash.trial_seed(master_seed, i) for i in range(trials)], dtype=np.uint64
    )


def ks_statistic(z_scores) -> float:
    """Two-sided one-sample Kolmogorov-Smirnov distance to the standard
    normal, evaluated at the order statistics."""
    z = np.sort(np.asarray(z_scores, dtype=np.float64))
    if z.size == 0:
        raise ValueError("empty sample")
    t = z.size
    cdf = np.array([std_normal_cdf(float(v)) for v in z])
    i = np.arange(1, t + 1)
    return float(np.maximum(np.abs(i / t - cdf), np.abs((i - 1) / t - cdf)).max())


# ---------------------------------------------------------------------------
# CLT experiment: the distribution of |R_1|


def run_clt_experiment(
    n: int,
    p: float,
    r0: int,
    trials: int,
    master_seed: int,
    workers: Optional[int] = None,
) -> ExperimentRecord:
    """Sample |R_1| over independent graphs and compare its variance and
    standardized shape against the predictions n*mu and Phi."""
    params = ModelParams(r0, n - r0, p)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    _set_threads(workers)
    seeds = trial_seeds(master_seed, trials)
    counts = np.zeros(trials, dtype=np.int64)
    _hash._one_step_red_counts_batch(
        n, r0, np.uint64(_hash.p_threshold(p)), seeds, counts
    )
    mu_val = mu(params)
    var_pred = n * mu_val
    extras = {"mu": mu_val, "var_pred": var_pred}
    ks = None
    if trials >= 2:
        emp_mean = float(counts.mean())
        emp_var = float(counts.var(ddof=1))
        z = clt_standardize(counts, params, emp_mean)
        ks = ks_statistic(z)
        extras.update(
            {
                "empirical_mean": emp_mean,
                "empirical_variance": emp_var,
                "variance_ratio": emp_var / var_pred,
            }
        )
    else:
        extras["variance_undefined"] = True
    summary = SummaryStats.from_samples(counts, ks_statistic=ks)
    config = {"n": n, "p": p, "r0": r0, "b0": n - r0, "trials": trials}
    return ExperimentRecord(
        kind="clt",
        config=config,
        master_seed=master_seed,
        summary=summary,
        extras=extras,
        samples=counts,
    )


# ---------------------------------------------------------------------------
# Fixation coupling: same graph, swing block X colored all red vs all blue


def _outcome_label(outcome: Outcome) -> str:
    if outcome is Outcome.UNANIMOUS_RED:
        return "R"
    if outcome is Outcome.UNANIMOUS_BLUE:
        return "B"
    return "T"


class _CoupledState:
    """Steps one coloring, tracking unanimity / two-cycle like run_dynamics."""

    def __init__(self, coloring: Coloring):
        self.coloring = coloring
        self.red_counts = [coloring.red_count]
        self.outcome: Optional[Outcome] = None
        self.steps = 0
        self._prev_key: Optional[bytes] = None
        self._check_absorbed(0)

    def _check_absorbed(self, step: int) -> None:
        if self.coloring.red_count == self.coloring.n:
            self.outcome, self.steps = Outcome.UNANIMOUS_RED, step
        elif self.coloring.red_count == 0:
            self.outcome, self.steps = Outcome.UNANIMOUS_BLUE, step

    def advance(self, graph: DenseGraph, step: int) -> None:
        # keep stepping even after the outcome is known so the two coupled
        # states stay aligned step-for-step (unanimity is absorbing; a
        # two-cycle just keeps cycling)
        nxt = majority_step(graph, self.coloring)
        self.red_counts.append(nxt.red_count)
        if self.outcome is None:
            if nxt.red_count == nxt.n:
                self.outcome, self.steps = Outcome.UNANIMOUS_RED, step
            elif nxt.red_count == 0:
                self.outcome, self.steps = Outcome.UNANIMOUS_BLUE, step
            elif self._prev_key is not None and nxt.state_key() == self._prev_key:
                self.outcome, self.steps = Outcome.TWO_CYCLE, step
        self._prev_key = self.coloring.state_key()
        self.coloring = nxt


def run_fixation_experiment(
    n: int,
    delta: int,
    p: float,
    trials: int,
    master_seed: int,
    max_steps: int = 64,
    workers: Optional[int] = None,
) -> ExperimentRecord:
    """Coupled fixation runs: V = X + R0 + B0 with |X| = delta and
    |R0| = |B0|; each trial samples one graph and runs the dynamics twice,
    X all red then X all blue, checking the monotone-coupling domination
    at every step."""
    if delta < 0 or (n - delta) % 2 != 0 or n - delta < 0:
        raise ValueError("need n = 2m + delta with m >= 0 and delta >= 0")
    m = (n - delta) // 2
    if trials < 1:
        raise ValueError("trials must be >= 1")
    seeds = trial_seeds(master_seed, trials)
    w_red = []
    w_blue = []
    steps_hist: dict[int, int] = {}
    diff = np.zeros(trials, dtype=np.int64)  # +1 W(R)=R, -1 W(R)=B, 0 tie/cycle
    red_traces = []
    for t in range(trials):
        spec = GraphSpec(n=n, p=p, seed=int(seeds[t]), representation="dense")
        graph = DenseGraph.from_spec(spec)
        red_hi = np.zeros(n, dtype=bool)
        red_hi[: delta + m] = True  # X and R0 red
        red_lo = np.zeros(n, dtype=bool)
        red_lo[delta : delta + m] = True  # only R0 red
        hi = _CoupledState(Coloring.from_bool(red_hi))
        lo = _CoupledState(Coloring.from_bool(red_lo))
        step = 0
        while (hi.outcome is None or lo.outcome is None) and step < max_steps:
            step += 1
            hi.advance(graph, step)
            lo.advance(graph, step)
            dominated = (
                lo.coloring.as_bool() & ~hi.coloring.as_bool()
            )
            if dominated.any():
                raise AssertionError(
                    f"monotone coupling violated at trial {t}, step {step}"
                )
        hi_out = hi.outcome or Outcome.STEP_CAP
        lo_out = lo.outcome or Outcome.STEP_CAP
        wr, wb = _outcome_label(hi_out), _outcome_label(lo_out)
        if wr == "B" and wb == "R":
            raise AssertionError(f"coupling order violated at trial {t}")
        w_red.append(wr)
        w_blue.append(wb)
        diff[t] = 1 if wr == "R" else (-1 if wr == "B" else 0)
        if hi.outcome in (Outcome.UNANIMOUS_RED, Outcome.UNANIMOUS_BLUE):
            steps_hist[hi.steps] = steps_hist.get(hi.steps, 0) + 1
        if t < 20:  # keep a few full traces for the step-count event chain
            red_traces.append({"x_red": hi.red_counts, "x_blue": lo.red_counts})

    t_arr = np.array([1.0 if w == "R" else 0.0 for w in w_red])
    p_red = float(t_arr.mean())
    p_blue = float(np.mean([1.0 if w == "B" else 0.0 for w in w_red]))
    p_both = float(
        np.mean(
            [1.0 if (wb == "B" and wr == "R") else 0.0 for wr, wb in zip(w_red, w_blue)]
        )
    )
    d_mean = float(diff.mean())
    d_sd = float(diff.std(ddof=1)) if trials >= 2 else math.nan
    z_score = d_mean / (d_sd / math.sqrt(trials)) if trials >= 2 and d_sd > 0 else math.nan
    summary = SummaryStats.from_samples(diff)
    return ExperimentRecord(
        kind="fixation",
        config={
            "n": n,
            "delta": delta,
            "m": m,
            "p": p,
            "trials": trials,
            "max_steps": max_steps,
        },
        master_seed=master_seed,
        summary=summary,
        extras={
            "p_red": p_red,
            "p_blue": p_blue,
            "p_both_fixate_own": p_both,
            "advantage": p_red - p_blue,
            "advantage_z": z_score,
            "steps_to_outcome_hist": steps_hist,
            "red_traces": red_traces,
        },
        samples=diff,
    )


# ---------------------------------------------------------------------------
# Opposing-majority count for a fixed lead set R


def run_proposition_experiment(
    n: int,
    p: float,
    alpha: float,
    delta_frac: float,
    trials: int,
    master_seed: int,
    workers: Optional[int] = None,
) -> ExperimentRecord:
    """Count vertices with at least as many edges to V \\ R as to R, for
    |R| = ceil(n/2 + alpha*sqrt(n(1-p)/p)); a trial fails when the count
    exceeds delta_frac * n."""
    r_size = math.ceil(n / 2.0 + alpha * math.sqrt(n * (1.0 - p) / p))
    if r_size > n:
        raise ValueError(f"|R| = {r_size} exceeds n = {n}; alpha too large")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    _set_threads(workers)
    seeds = trial_seeds(master_seed, trials)
    counts = np.zeros(trials, dtype=np.int64)
    _hash._opposing_counts_batch(
        n, r_size, np.uint64(_hash.p_threshold(p)), seeds, counts
    )
    failures = int((counts > delta_frac * n).sum())
    summary = SummaryStats.from_samples(counts)
    return ExperimentRecord(
        kind="proposition",
        config={
            "n": n,
            "p": p,
            "alpha": alpha,
            "delta_frac": delta_frac,
            "r_size": r_size,
            "trials": trials,
        },
        master_seed=master_seed,
        summary=summary,
        extras={
            "failures": failures,
            "failure_frequency": failures / trials,
            "threshold_count": delta_frac * n,
        },
        samples=counts,
    )


# ---------------------------------------------------------------------------
# Swing sets: vertices whose one-step color is decided by the block X


def run_swing_experiment(
    m: int,
    x: int,
    p: float,
    trials: int,
    master_seed: int,
    workers: Optional[int] = None,
) -> ExperimentRecord:
    """|T_R u T_B| over trials vs the prediction |V|*|X|*p/(sigma*sqrt(2pi))
    with sigma = sqrt(2mp(1-p))."""
    if m < 1 or x < 0:
        raise ValueError(f"need m >= 1 and x >= 0, got m={m}, x={x}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    _set_threads(workers)
    seeds = trial_seeds(master_seed, trials)
    counts = np.zeros(trials, dtype=np.int64)
    _hash._swing_counts_batch(x, m, np.uint64(_hash.p_threshold(p)), seeds, counts)
    n_total = x + 2 * m
    sigma = math.sqrt(2.0 * m * p * (1.0 - p))
    prediction = n_total * x * p / (sigma * math.sqrt(2.0 * math.pi))
    error_scale = n_total * (1.0 + x * p) ** 2 / sigma**2
    summary = SummaryStats.from_samples(counts)
    return ExperimentRecord(
        kind="swing",
        config={"m": m, "x": x, "p": p, "trials": trials},
        master_seed=master_seed,
        summary=summary,
        extras={
            "prediction": prediction,
            "error_scale": error_scale,
            "swing_sigma": sigma,
            # precondition 1 + xp << sigma, surfaced as a ratio
            "precondition_ratio": (1.0 + x * p) / sigma,
        },
        samples=counts,
    )


# ---------------------------------------------------------------------------
# Steps to unanimity under a random initial coloring


def run_step_experiment(
    n: int,
    p: float,
    trials: int,
    master_seed: int,
    max_steps: int = 64,
) -> ExperimentRecord:
    """Random |R_0| ~ Bin(n, 1/2) per trial (ties redrawn); report how often
    the initial-majority color is unanimous within four steps."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    seeds = trial_seeds(master_seed, trials)
    steps_taken = np.zeros(trials, dtype=np.int64)
    winner_within_4 = 0
    per_step: dict[int, int] = {}
    unresolved = 0
    for t in range(trials):
        seed = int(seeds[t])
        rng = np.random.Generator(np.random.PCG64(seed))
        r0 = int(rng.binomial(n, 0.5))
        while 2 * r0 == n:  # no initial majority: redraw
            r0 = int(rng.binomial(n, 0.5))
        majority_red = r0 > n - r0
        spec = GraphSpec(n=n, p=p, seed=seed, representation="dense")
        graph = DenseGraph.from_spec(spec)
        traj = run_dynamics(graph, Coloring.canonical(n, r0), max_steps)
        won = (
            traj.outcome is Outcome.UNANIMOUS_RED
            if majority_red
            else traj.outcome is Outcome.UNANIMOUS_BLUE
        )
        if won:
            per_step[traj.steps_to_outcome] = per_step.get(traj.steps_to_outcome, 0) + 1
            steps_taken[t] = traj.steps_to_outcome
            if traj.steps_to_outcome <= 4:
                winner_within_4 += 1
        else:
            unresolved += 1
            steps_taken[t] = -1
    summary = SummaryStats.from_samples(steps_taken)
    return ExperimentRecord(
        kind="steps",
        config={"n": n, "p": p, "trials": trials, "max_steps": max_steps},
        master_seed=master_seed,
        summary=summary,
        extras={
            "winner_within_4_frequency": winner_within_4 / trials,
            "per_step_counts": per_step,
            "not_won_by_initial_majority": unresolved,
        },
        samples=steps_taken,
    )


# ---------------------------------------------------------------------------
# Conjecture scan: does the step-1 leader grow monotonically to unanimity?


def run_conjecture_scan(
    n: int,
    p: float,
    r0: int,
    trials: int,
    master_seed: int,
    max_steps: int = 64,
) -> ExperimentRecord:
    """Check, per trial, that the step-1 leader's count increases every
    subsequent step until unanimity.  Both strict and weak violations are
    recorded (the final step into unanimity may plateau); non-unanimous
    outcomes count as violations."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    seeds = trial_seeds(master_seed, trials)
    strict_violations = 0
    weak_violations = 0
    step1_ties = 0
    example_seeds: list[int] = []
    outcomes = np.zeros(trials, dtype=np.int64)  # 1 monotone, 0 violation
    for t in range(trials):
        seed = int(seeds[t])
        spec = GraphSpec(n=n, p=p, seed=seed, representation="dense")
        graph = DenseGraph.from_spec(spec)
        traj = run_dynamics(graph, Coloring.canonical(n, r0), max_steps)
        counts = traj.red_counts
        if len(counts) < 2:
            # unanimous from the start: trivially monotone
            outcomes[t] = 1
            continue
        if 2 * counts[1] == n:
            step1_ties += 1
            outcomes[t] = 1
            continue
        leader_red = counts[1] > n - counts[1]
        series = [c if leader_red else n - c for c in counts[1:]]
        unanimous = traj.outcome in (Outcome.UNANIMOUS_RED, Outcome.UNANIMOUS_BLUE)
        leader_won = unanimous and (
            (traj.outcome is Outcome.UNANIMOUS_RED) == leader_red
        )
        strict_ok = leader_won and all(
            b > a for a, b in zip(series, series[1:])
        )
        weak_ok = leader_won and all(b >= a for a, b in zip(series, series[1:]))
        if not strict_ok:
            strict_violations += 1
        if not weak_ok:
            weak_violations += 1
            if len(example_seeds) < 10:
                example_seeds.append(seed)
        outcomes[t] = 1 if strict_ok else 0
    summary = SummaryStats.from_samples(outcomes)
    return ExperimentRecord(
        kind="conjecture",
        config={"n": n, "p": p, "r0": r0, "trials": trials, "max_steps": max_steps},
        master_seed=master_seed,
        summary=summary,
        extras={
            "strict_violation_frequency": strict_violations / trials,
            "weak_violation_frequency": weak_violations / trials,
            "step1_ties": step1_ties,
            "violation_example_seeds": example_seeds,
        },
        samples=outcomes,
    )
