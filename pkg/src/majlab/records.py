"""Experiment records: summary statistics and JSON/CSV persistence.

One JSON record per experiment (config echo, master seed, summary,
experiment-specific extras) plus an optional raw-sample CSV sidecar with
header ``trial,value``.  Both are deterministic given the master seed, so
they work as greppable, diffable golden files.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class SummaryStats:
    count: int
    mean: float
    variance: float  # unbiased; NaN when count < 2
    min: float
    max: float
    ks_statistic: Optional[float] = None
    ci95_radius: Optional[float] = None  # normal-approximation, for the mean

    @staticmethod
    def from_samples(samples, ks_statistic: Optional[float] = None) -> "SummaryStats":
        arr = np.asarray(samples, dtype=np.float64)
        if arr.size == 0:
            raise ValueError("cannot summarize an empty sample")
        if arr.size >= 2:
            var = float(arr.var(ddof=1))
            ci = 1.96 * math.sqrt(var / arr.size)
        else:
            var = math.nan
            ci = None
        return SummaryStats(
            count=int(arr.size),
            mean=float(arr.mean()),
            variance=var,
            min=float(arr.min()),
            max=float(arr.max()),
            ks_statistic=ks_statistic,
            ci95_radius=ci,
        )

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "mean": self.mean,
            "variance": self.variance,
            "min": self.min,
            "max": self.max,
            "ks_statistic": self.ks_statistic,
            "ci95_radius": self.ci95_radius,
        }


@dataclass
class ExperimentRecord:
    kind: str
    config: dict
    master_seed: int
    summary: SummaryStats
    extras: dict = field(default_factory=dict)
    samples: Optional[np.ndarray] = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "config": self.config,
            "master_seed": self.master_seed,
            "summary": self.summary.to_dict(),
            "extras": _jsonable(self.extras),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def write(self, path: str | Path, raw_samples: bool = True) -> None:
        """Write the JSON record; raw samples go to a .csv sidecar."""
        path = Path(path)
        path.write_text(self.to_json() + "\n")
        if raw_samples and self.samples is not None:
            lines = ["trial,value"]
            for i, v in enumerate(self.samples):
                lines.append(f"{i},{_format_value(v)}")
            path.with_suffix(".csv").write_text("\n".join(lines) + "\n")


def _format_value(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return obj
