"""Sampling G_{n,p}, colorings, and synchronous majority-dynamics steps.

Two interchangeable representations of the same random graph:

* Dense: bit-packed symmetric adjacency rows, majority step via
  popcount(row AND red-mask).  Bounded by DENSE_CAP.
* Implicit: nothing materialized; every edge query re-derives the
  indicator from a counter-based hash of (seed, u, v).

Both are driven by the same edge oracle, so for a fixed GraphSpec they
describe bit-for-bit the same graph.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

import numpy as np

from . import _hash

# Adjacency memory at the cap: n^2/8 bytes = 128 MB.
DENSE_CAP = 32_768


@dataclass(frozen=True)
class GraphSpec:
    """Parameters identifying one sampled G_{n,p}: (n, p, seed)."""

    n: int
    p: float
    seed: int
    representation: str = "dense"  # "dense" | "implicit"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not (0.0 < self.p < 1.0):
            raise ValueError(f"p must be in (0,1), got {self.p}")
        if self.representation not in ("dense", "implicit"):
            raise ValueError(f"unknown representation {self.representation!r}")

    @property
    def threshold(self) -> int:
        return _hash.p_threshold(self.p)


def edge_present(spec: GraphSpec, u: int, v: int) -> bool:
    """Deterministic edge indicator; symmetric by canonical pair ordering."""
    if u == v:
        raise ValueError("self-loops are not part of G_{n,p}")
    if not (0 <= u < spec.n and 0 <= v < spec.n):
        raise ValueError(f"vertices must lie in [0, {spec.n}), got {u}, {v}")
    return (_hash.edge_hash(spec.seed, u, v) >> 11) < spec.threshold


@dataclass(frozen=True)
class Coloring:
    """Red-membership bit vector (uint8-packed, little bit order)."""

    n: int
    red_bits: np.ndarray = field(repr=False)  # packed uint8, length ceil(n/8)
    red_count: int

    @staticmethod
    def canonical(n: int, r0: int) -> "Coloring":
        """Vertices 0..r0-1 red, the rest blue (the canonical labeling)."""
        if not (0 <= r0 <= n):
            raise ValueError(f"r0 must be in [0, {n}], got {r0}")
        red = np.zeros(n, dtype=bool)
        red[:r0] = True
        return Coloring.from_bool(red)

    @staticmethod
    def from_bool(red: np.ndarray) -> "Coloring":
        red = np.asarray(red, dtype=bool)
        bits = np.packbits(red, bitorder="little")
        return Coloring(n=red.size, red_bits=bits, red_count=int(red.sum()))

    def as_bool(self) -> np.ndarray:
        return np.unpackbits(self.red_bits, count=self.n, bitorder="little").astype(bool)

    def is_red(self, v: int) -> bool:
        return bool(self.red_bits[v >> 3] & (1 << (v & 7)))

    def swapped(self) -> "Coloring":
        return Coloring.from_bool(~self.as_bool())

    def state_key(self) -> bytes:
        return self.red_bits.tobytes()


class DenseGraph:
    """Bit-packed symmetric adjacency with cached degrees."""

    def __init__(self, n: int, rows: np.ndarray):
        self.n = n
        self.rows = rows  # uint8, shape (n, ceil(n/8)), little bit order
        self.degrees = np.bitwise_count(rows).sum(axis=1).astype(np.int64)

    @staticmethod
    def from_spec(spec: GraphSpec) -> "DenseGraph":
        if spec.n > DENSE_CAP:
            raise ValueError(
                f"n = {spec.n} exceeds the dense cap {DENSE_CAP}; "
                "use the implicit representation"
            )
        rows = np.zeros((spec.n, (spec.n + 7) // 8), dtype=np.uint8)
        _hash._fill_dense_rows(
            spec.n, np.uint64(spec.seed), np.uint64(spec.threshold), rows
        )
        return DenseGraph(spec.n, rows)

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> "DenseGraph":
        rows = np.zeros((n, (n + 7) // 8), dtype=np.uint8)
        for u, v in edges:
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"bad edge ({u}, {v}) for n = {n}")
            rows[u, v >> 3] |= np.uint8(1 << (v & 7))
            rows[v, u >> 3] |= np.uint8(1 << (u & 7))
        return DenseGraph(n, rows)

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.rows[u, v >> 3] & (1 << (v & 7)))

    def edges(self) -> Iterator[tuple[int, int]]:
        """All edges as (u, v) with u < v, lexicographic."""
        for u in range(self.n):
            row = np.unpackbits(self.rows[u], count=self.n, bitorder="little")
            for v in np.nonzero(row)[0]:
                if v > u:
                    yield u, int(v)

    def edge_count(self) -> int:
        return int(self.degrees.sum()) // 2


def sample_dense(spec: GraphSpec) -> DenseGraph:
    return DenseGraph.from_spec(spec)


GraphLike = Union[DenseGraph, GraphSpec]


def _signed_diff(graph: GraphLike, coloring: Coloring) -> np.ndarray:
    """Per-vertex d_R - d_B over the old coloring."""
    if isinstance(graph, DenseGraph):
        if coloring.n != graph.n:
            raise ValueError("coloring size does not match graph size")
        d_red = np.bitwise_count(graph.rows & coloring.red_bits).sum(axis=1).astype(
            np.int64
        )
        return 2 * d_red - graph.degrees
    if coloring.n != graph.n:
        raise ValueError("coloring size does not match graph size")
    return _hash._signed_degree_diff(
        graph.n, np.uint64(graph.seed), np.uint64(graph.threshold), coloring.as_bool()
    )


def majority_step(graph: GraphLike, coloring: Coloring) -> Coloring:
    """One synchronous step: each vertex adopts its neighbors' majority
    color, keeping its own on a tie (so isolated vertices never change)."""
    s = _signed_diff(graph, coloring)
    new_red = (s > 0) | ((s == 0) & coloring.as_bool())
    return Coloring.from_bool(new_red)


def red_count_after_one_step(spec: GraphSpec, coloring: Coloring) -> int:
    """|R_1| from the edge oracle in O(n) memory (no adjacency built)."""
    if coloring.n != spec.n:
        raise ValueError("coloring size does not match graph size")
    s = _hash._signed_degree_diff(
        spec.n, np.uint64(spec.seed), np.uint64(spec.threshold), coloring.as_bool()
    )
    red = coloring.as_bool()
    return int(((s > 0) | ((s == 0) & red)).sum())


class Outcome(enum.Enum):
    UNANIMOUS_RED = "unanimous_red"
    UNANIMOUS_BLUE = "unanimous_blue"
    TWO_CYCLE = "two_cycle"
    STEP_CAP = "step_cap"


@dataclass(frozen=True)
class Trajectory:
    """Red counts per step plus how (and when) the run terminated."""

    red_counts: list[int]
    outcome: Outcome
    steps_to_outcome: int


def run_dynamics(graph: GraphLike, coloring: Coloring, max_steps: int) -> Trajectory:
    """Iterate majority steps to unanimity, a two-cycle, or the step cap.

    Cycle detection compares the full packed coloring to the state two
    steps back (counts alone can coincide without state equality);
    majority dynamics on finite graphs has eventual period at most 2.
    """
    if max_steps < 1:
        raise ValueError(f"max_steps must be >= 1, got {max_steps}")
    red_counts = [coloring.red_count]
    if coloring.red_count == coloring.n:
        return Trajectory(red_counts, Outcome.UNANIMOUS_RED, 0)
    if coloring.red_count == 0:
        return Trajectory(red_counts, Outcome.UNANIMOUS_BLUE, 0)
    prev_key = None  # state two steps back (after the first iteration)
    current = coloring
    for step in range(1, max_steps + 1):
        nxt = majority_step(graph, current)
        red_counts.append(nxt.red_count)
        if nxt.red_count == nxt.n:
            return Trajectory(red_counts, Outcome.UNANIMOUS_RED, step)
        if nxt.red_count == 0:
            return Trajectory(red_counts, Outcome.UNANIMOUS_BLUE, step)
        if prev_key is not None and nxt.state_key() == prev_key:
            return Trajectory(red_counts, Outcome.TWO_CYCLE, step)
        prev_key = current.state_key()
        current = nxt
    return Trajectory(red_counts, Outcome.STEP_CAP, max_steps)
