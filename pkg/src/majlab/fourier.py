"""Brute-force verification of the edge-space Fourier machinery at tiny n.

Random variables of the one-step process are functions of the C(n,2) edge
indicators.  Under the product measure where each edge is present with
probability p, the functions

    Phi_S(x) = prod_{e in S} (x_e + 1 - 2p) / (2 sqrt(p(1-p)))

form an orthonormal basis.  For each vertex v, Z_v is the centered
agreement indicator (1 - mu_v if v keeps its color after one step,
-1 - mu_v if it flips), and Z = sum_v eps(v) Z_v = 2|R_1| - n - mu_r r0
+ mu_b b0.  Everything here is computed by exhaustive enumeration of all
2^C(n,2) graphs, with each graph's step taken by the same majority_step
the simulator uses.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .analytics import Color, ModelParams, mu, mu_v
from .graphs import Coloring, DenseGraph, majority_step
from .numerics import diff_distribution

# 2^22 weighted terms per expectation at most (n <= 7).
EDGE_UNIVERSE_CAP = 22


@dataclass(frozen=True)
class TinyModel:
    """An (r0, b0, p) triple small enough for exact enumeration."""

    r0: int
    b0: int
    p: float

    def __post_init__(self):
        ModelParams(self.r0, self.b0, self.p)  # validates sizes and p
        if self.num_edges > EDGE_UNIVERSE_CAP:
            raise ValueError(
                f"edge universe C({self.n},2) = {self.num_edges} exceeds the "
                f"enumeration cap {EDGE_UNIVERSE_CAP}"
            )

    @property
    def n(self) -> int:
        return self.r0 + self.b0

    @property
    def num_edges(self) -> int:
        return self.n * (self.n - 1) // 2

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(itertools.combinations(range(self.n), 2))

    def edge_index(self, u: int, v: int) -> int:
        a, b = (u, v) if u < v else (v, u)
        return self.edges.index((a, b))

    def star(self, v: int) -> tuple[tuple[int, int], ...]:
        """Gamma_v: all pairs incident to v."""
        return tuple(tuple(sorted((v, u))) for u in range(self.n) if u != v)

    def params(self) -> ModelParams:
        return ModelParams(self.r0, self.b0, self.p)


def basis_eval(S, x, p: float) -> float:
    """Phi_S at one edge-sign assignment.

    S is an iterable of edge indices, x a sequence of +-1 over the edge
    universe.  The empty S gives Phi_emptyset = 1.
    """
    result = 1.0
    scale = 2.0 * math.sqrt(p * (1.0 - p))
    for e in S:
        result *= (x[e] + 1.0 - 2.0 * p) / scale
    return result


@dataclass(frozen=True)
class EnumeratedModel:
    """All 2^m assignments of one TinyModel, with weights and Z values."""

    model: TinyModel
    weights: np.ndarray = field(repr=False)  # (2^m,)
    signs: np.ndarray = field(repr=False)  # (2^m, m) entries +-1
    z: np.ndarray = field(repr=False)  # (2^m, n): Z_v per assignment
    red_after: np.ndarray = field(repr=False)  # (2^m,): |R_1|
    mu_vertex: np.ndarray = field(repr=False)  # (n,)

    @property
    def phi_edge(self) -> np.ndarray:
        """Per-edge single-factor basis values, shape (2^m, m)."""
        p = self.model.p
        return (self.signs + 1.0 - 2.0 * p) / (2.0 * math.sqrt(p * (1.0 - p)))


@lru_cache(maxsize=8)
def enumerate_model(model: TinyModel) -> EnumeratedModel:
    n, m, p = model.n, model.num_edges, model.p
    edges = model.edges
    params = model.params()
    mu_vertex = np.array(
        [
            mu_v(params, Color.RED if v < model.r0 else Color.BLUE)
            for v in range(n)
        ]
    )
    count = 1 << m
    codes = np.arange(count, dtype=np.uint32)
    bits = ((codes[:, None] >> np.arange(m, dtype=np.uint32)) & 1).astype(np.int8)
    ones = bits.sum(axis=1).astype(np.int64)
    weights = np.exp(ones * math.log(p) + (m - ones) * math.log1p(-p))
    signs = (2 * bits - 1).astype(np.float64)

    start = Coloring.canonical(n, model.r0)
    old_red = start.as_bool()
    z = np.empty((count, n))
    red_after = np.empty(count, dtype=np.int64)
    for code in range(count):
        present = [edges[i] for i in range(m) if bits[code, i]]
        graph = DenseGraph.from_edges(n, present)
        new = majority_step(graph, start)
        new_red = new.as_bool()
        agree = new_red == old_red
        z[code] = np.where(agree, 1.0 - mu_vertex, -1.0 - mu_vertex)
        red_after[code] = new.red_count
    return EnumeratedModel(
        model=model,
        weights=weights,
        signs=signs,
        z=z,
        red_after=red_after,
        mu_vertex=mu_vertex,
    )


def pbiased_expectation(f, model: TinyModel) -> float:
    """E[f] over all 2^m edge-sign assignments, compensated summation.

    f receives one +-1 vector (length m, aligned with model.edges)."""
    enum = enumerate_model(model)
    terms = [
        w * f(enum.signs[i]) for i, w in enumerate(enum.weights)
    ]
    return math.fsum(terms)


def _phi_set_values(enum: EnumeratedModel, S) -> np.ndarray:
    """Phi_S over all assignments; S is an iterable of vertex pairs."""
    phi = enum.phi_edge
    result = np.ones(phi.shape[0])
    for u, v in S:
        result = result * phi[:, enum.model.edge_index(u, v)]
    return result


def _expectation(enum: EnumeratedModel, values: np.ndarray) -> float:
    return math.fsum(enum.weights * values)


def brute_force_coefficient(model: TinyModel, v: int, S) -> float:
    """Fourier coefficient E[Z_v * Phi_S], exactly by enumeration."""
    enum = enumerate_model(model)
    return _expectation(enum, enum.z[:, v] * _phi_set_values(enum, S))


def closed_form_coefficient(r0: int, b0: int, p: float, kind: str) -> float:
    """Single-edge coefficients in closed form via binomial differences.

    kind "rr": hat(Z_r)({r,r'}) for two red vertices
         "bb": hat(Z_b)({b,b'}) for two blue vertices
         "rb": hat(Z_r)({r,b}) = hat(Z_b)({r,b}) for a red-blue pair

    Valid at any class sizes within the convolution cap, not just tiny n.
    """
    scale = 2.0 * math.sqrt(p * (1.0 - p))
    if kind == "rr":
        if r0 < 2:
            raise ValueError("rr coefficient needs r0 >= 2")
        return scale * diff_distribution(r0 - 2, b0, p).prob_at(-1)
    if kind == "bb":
        if b0 < 2:
            raise ValueError("bb coefficient needs b0 >= 2")
        return scale * diff_distribution(b0 - 2, r0, p).prob_at(-1)
    if kind == "rb":
        if r0 < 1 or b0 < 1:
            raise ValueError("rb coefficient needs r0 >= 1 and b0 >= 1")
        return -scale * diff_distribution(r0 - 1, b0 - 1, p).prob_at(0)
    raise ValueError(f"unknown kind {kind!r}; expected 'rr', 'bb', or 'rb'")


@dataclass(frozen=True)
class StarBasisReport:
    """Checks of the star-basis Fourier identities at one TinyModel.

    Equality facts carry worst-case absolute gaps; the O(.) magnitude
    facts are reported as raw magnitudes without any pass/fail claim
    (their constants are unknowable at tiny n).
    """

    sq_moment_gap: float  # max_v |E[Z_v^2] - (1 - mu_v^2)|
    empty_coeff_gap: float  # max_v |hat(Z_v)(emptyset)|
    off_star_gap: float  # max |hat(Z_v)(S)| over checked S not within Gamma_v
    off_star_sets_checked: int
    power_bound_ok: bool  # |hat(Z_v^L)(S)| <= 2^L |hat(Z_v)(S)|, L <= 4, S != {}
    power_bound_worst_excess: float
    pair_sum_reduction_gap: float  # full sum vs the two Gamma-star terms
    single_edge_magnitudes: dict  # kind -> |coef|, for the (iii) scale table
    pair_magnitudes: dict  # |S| = 2 max magnitude, for the (iv) scale table


def _subsets_of(pairs, max_size=None):
    sizes = range(len(pairs) + 1) if max_size is None else range(max_size + 1)
    for k in sizes:
        yield from itertools.combinations(pairs, k)


def verify_star_basis(model: TinyModel, k: int = 2) -> StarBasisReport:
    """Numerically check the assertable facts and tabulate the O(.) ones.

    Off-star vanishing is exhaustive when the edge universe has at most
    6 edges; otherwise every S with |S| <= 2 is checked.
    """
    enum = enumerate_model(model)
    n, m = model.n, model.num_edges
    all_edges = model.edges

    sq_gap = 0.0
    empty_gap = 0.0
    for v in range(n):
        sq = _expectation(enum, enum.z[:, v] ** 2)
        sq_gap = max(sq_gap, abs(sq - (1.0 - enum.mu_vertex[v] ** 2)))
        empty_gap = max(empty_gap, abs(_expectation(enum, enum.z[:, v])))

    off_gap = 0.0
    checked = 0
    exhaustive = m <= 6
    for v in range(n):
        star = set(model.star(v))
        subsets = (
            _subsets_of(all_edges) if exhaustive else _subsets_of(all_edges, 2)
        )
        for S in subsets:
            if S and not set(S) <= star:
                off_gap = max(off_gap, abs(brute_force_coefficient(model, v, S)))
                checked += 1

    power_excess = 0.0
    for v in range(n):
        for S in _subsets_of(model.star(v), 2):
            if not S:
                continue
            base = abs(brute_force_coefficient(model, v, S))
            for L in range(1, 5):
                zl = enum.z[:, v] ** L
                coef = _expectation(enum, zl * _phi_set_values(enum, S))
                power_excess = max(power_excess, abs(coef) - (2.0**L) * base)

    # pair-sum support reduction: the sum over all single edges equals the
    # two incident-star terms, for distinct r in R_0, b in B_0, and v
    pair_gap = 0.0
    if model.r0 >= 1 and model.b0 >= 1 and n >= 3:
        r, b = 0, model.r0  # first red, first blue
        for v in range(n):
            if v in (r, b):
                continue
            full = math.fsum(
                (
                    brute_force_coefficient(model, r, [e])
                    - brute_force_coefficient(model, b, [e])
                )
                * brute_force_coefficient(model, v, [e])
                for e in all_edges
            )
            reduced = brute_force_coefficient(model, r, [tuple(sorted((r, v)))]) * (
                brute_force_coefficient(model, v, [tuple(sorted((r, v)))])
            ) - brute_force_coefficient(model, b, [tuple(sorted((b, v)))]) * (
                brute_force_coefficient(model, v, [tuple(sorted((b, v)))])
            )
            pair_gap = max(pair_gap, abs(full - reduced))

    single_mags = {}
    if model.r0 >= 2:
        single_mags["rr"] = abs(closed_form_coefficient(model.r0, model.b0, model.p, "rr"))
    if model.b0 >= 2:
        single_mags["bb"] = abs(closed_form_coefficient(model.r0, model.b0, model.p, "bb"))
    if model.r0 >= 1 and model.b0 >= 1:
        single_mags["rb"] = abs(closed_form_coefficient(model.r0, model.b0, model.p, "rb"))

    pair_mag = 0.0
    for v in range(n):
        for S in itertools.combinations(model.star(v), 2):
            pair_mag = max(pair_mag, abs(brute_force_coefficient(model, v, S)))

    return StarBasisReport(
        sq_moment_gap=sq_gap,
        empty_coeff_gap=empty_gap,
        off_star_gap=off_gap,
        off_star_sets_checked=checked,
        power_bound_ok=power_excess <= 1e-10,
        power_bound_worst_excess=power_excess,
        pair_sum_reduction_gap=pair_gap,
        single_edge_magnitudes=single_mags,
        pair_magnitudes={"max_two_edge": pair_mag},
    )


def parseval_gap(model: TinyModel, v: int) -> float:
    """|sum_S hat(Z_v)(S)^2 - E[Z_v^2]|, summing over S within Gamma_v.

    Coefficients outside the star vanish, which verify_star_basis
    checks independently, so the star subsets carry the whole sum.
    """
    enum = enumerate_model(model)
    total = math.fsum(
        brute_force_coefficient(model, v, S) ** 2
        for S in _subsets_of(model.star(v))
    )
    return abs(total - _expectation(enum, enum.z[:, v] ** 2))


@dataclass(frozen=True)
class MomentReport:
    k: int
    value: float  # exact E[Z^k]
    main_term: float  # (k-1)!! (4 n mu)^{k/2} for even k, 0 for odd
    error_scale: float  # n^{k/2} (1/sigma + Delta/n)


def moment_bruteforce(model: TinyModel, k: int) -> MomentReport:
    """Exact E[Z^k] with Z = sum_v eps(v) Z_v, next to its predicted
    main term and the stated error magnitude."""
    if not (1 <= k <= 6):
        raise ValueError(f"k must be in 1..6, got {k}")
    enum = enumerate_model(model)
    eps = np.where(np.arange(model.n) < model.r0, 1.0, -1.0)
    z_total = enum.z @ eps
    value = _expectation(enum, z_total**k)
    params = model.params()
    if k % 2 == 0:
        double_fact = 1
        for i in range(k - 1, 0, -2):
            double_fact *= i
        main = double_fact * (4.0 * model.n * mu(params)) ** (k // 2)
    else:
        main = 0.0
    error_scale = model.n ** (k / 2.0) * (1.0 / params.sigma + params.delta / model.n)
    return MomentReport(k=k, value=value, main_term=main, error_scale=error_scale)


def red_count_variance(model: TinyModel) -> float:
    """Var(2|R_1|) straight from the enumerated |R_1| distribution.

    Independent route for cross-checking E[Z^2] (Z differs from 2|R_1|
    by a constant)."""
    enum = enumerate_model(model)
    x = 2.0 * enum.red_after
    mean = _expectation(enum, x)
    return _expectation(enum, (x - mean) ** 2)
