"""Synthetic Gaussian-mixture generators and the power-study harness.

Seventeen preset families (ids ``a`` through ``q``) cover the spectrum
from a single Gaussian blob through well-separated mixtures in up to 10
dimensions to single clusters contaminated by far outliers.  Presets
live in a versioned JSON file; every numeric field there carries a
provenance tag, ``published`` for values fixed by the benchmark
description and ``calibrated`` for values chosen here to land the power
figures.  ``run_batch`` replays one preset many times and reports the
fraction of runs each test called clusterable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from ._parallel import map_indexed
from .core import RandomSeed, Significance, derive_substream, stream_from
from .dataset_io import DataMatrix
from .pipeline import assess_clusterability

__all__ = [
    "Component",
    "SimulationSpec",
    "SimulationSummary",
    "PRESET_IDS",
    "load_presets",
    "generate",
    "run_batch",
]

PRESET_IDS = tuple("abcdefghijklmnopq")

DEFAULT_BATCH_REPLICATES = 500


@dataclass(frozen=True)
class Component:
    """One Gaussian mixture component with diagonal covariance."""

    mean: tuple[float, ...]
    covariance: tuple[float, ...]  # diagonal entries (variances)
    size: int

    def __post_init__(self) -> None:
        if len(self.mean) != len(self.covariance):
            raise ValueError("mean and covariance diagonal must have equal dimension")
        if any(v < 0 for v in self.covariance):
            raise ValueError("covariance diagonal must be nonnegative (PSD)")
        if self.size < 1:
            raise ValueError(f"component size must be positive, got {self.size}")


@dataclass(frozen=True)
class SimulationSpec:
    """A generator recipe: mixture components plus fixed outlier rows."""

    id: str
    components: tuple[Component, ...]
    outliers: tuple[tuple[float, ...], ...]
    d: int

    def __post_init__(self) -> None:
        if not self.components:
            raise ValueError("spec needs at least one component")
        for comp in self.components:
            if len(comp.mean) != self.d:
                raise ValueError(f"component dimension {len(comp.mean)} != spec dimension {self.d}")
        for out in self.outliers:
            if len(out) != self.d:
                raise ValueError(f"outlier dimension {len(out)} != spec dimension {self.d}")
        if self.total_points < 4:
            raise ValueError("spec must generate at least 4 points")

    @property
    def total_points(self) -> int:
        return sum(c.size for c in self.components) + len(self.outliers)


@dataclass(frozen=True)
class SimulationSummary:
    """Clusterable-classification rates over a batch of generated datasets."""

    id: str
    runs: int
    proportion_dip: float | None
    proportion_silverman: float | None
    seed: RandomSeed
    B: int

    def __post_init__(self) -> None:
        for prop in (self.proportion_dip, self.proportion_silverman):
            if prop is not None and not 0.0 <= prop <= 1.0:
                raise ValueError(f"proportion {prop} outside [0, 1]")


def _tagged_value(node, context: str):
    """Unwrap a {"value": ..., "provenance": ...} node, checking the tag."""
    if not isinstance(node, dict) or "value" not in node or "provenance" not in node:
        raise ValueError(f"preset field {context} must carry value and provenance")
    if node["provenance"] not in ("published", "calibrated"):
        raise ValueError(f"preset field {context} has unknown provenance {node['provenance']!r}")
    return node["value"]


def load_presets(path: str | Path | None = None) -> dict[str, SimulationSpec]:
    """Load the preset file (bundled by default) into SimulationSpecs.

    Outliers are stored as per-axis offsets in units of the anchor
    component's standard deviation and resolved to absolute coordinates
    here.
    """
    if path is None:
        ref = resources.files(__package__) / "presets.json"
        raw = json.loads(ref.read_text(encoding="utf-8"))
    else:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if raw.get("version") != 1:
        raise ValueError(f"unsupported preset file version {raw.get('version')!r}")
    specs: dict[str, SimulationSpec] = {}
    for pid, node in raw["presets"].items():
        if pid not in PRESET_IDS:
            raise ValueError(f"unknown preset id {pid!r}")
        d = int(node["d"])
        components = []
        for i, comp in enumerate(node["components"]):
            mean = tuple(float(v) for v in _tagged_value(comp["mean"], f"{pid}.components[{i}].mean"))
            sd = tuple(float(v) for v in _tagged_value(comp["sd"], f"{pid}.components[{i}].sd"))
            size = int(_tagged_value(comp["size"], f"{pid}.components[{i}].size"))
            components.append(Component(mean=mean, covariance=tuple(s * s for s in sd), size=size))
        outliers = []
        for i, out in enumerate(node.get("outliers", [])):
            anchor = components[int(out.get("component", 0))]
            offsets = _tagged_value(out["offset_sds"], f"{pid}.outliers[{i}].offset_sds")
            sd = np.sqrt(np.array(anchor.covariance))
            point = np.array(anchor.mean) + np.array(offsets, dtype=float) * sd
            outliers.append(tuple(float(v) for v in point))
        specs[pid] = SimulationSpec(
            id=pid, components=tuple(components), outliers=tuple(outliers), d=d
        )
    missing = [pid for pid in PRESET_IDS if pid not in specs]
    if missing:
        raise ValueError(f"preset file is missing ids: {', '.join(missing)}")
    return specs


def generate(spec: SimulationSpec, seed: RandomSeed) -> DataMatrix:
    """Draw one dataset from the spec: component draws, outliers, shuffle."""
    rng = stream_from(seed)
    parts = []
    for comp in spec.components:
        sd = np.sqrt(np.array(comp.covariance))
        parts.append(rng.normal(np.array(comp.mean), sd, size=(comp.size, spec.d)))
    if spec.outliers:
        parts.append(np.array(spec.outliers, dtype=np.float64))
    points = np.vstack(parts)
    rng.shuffle(points, axis=0)
    return DataMatrix(points)


def run_batch(
    spec: SimulationSpec,
    runs: int,
    tests: tuple[str, ...] = ("dip", "silverman"),
    alpha: Significance = Significance(),
    seed: RandomSeed = RandomSeed(0),
    B: int = DEFAULT_BATCH_REPLICATES,
) -> SimulationSummary:
    """Generate and assess ``runs`` datasets; report clusterable fractions.

    Run r derives substream r of the batch seed for both generation and
    testing, so results are independent of execution order and the batch
    parallelizes freely.
    """
    if runs < 1:
        raise ValueError(f"need at least one run, got {runs}")

    def one_run(r: int) -> tuple[bool | None, bool | None]:
        run_seed = derive_substream(seed, r)
        data = generate(spec, run_seed)
        report = assess_clusterability(data, tests=tests, alpha=alpha, seed=run_seed, B=B)
        dip_hit = None if report.verdict_dip is None else report.verdict_dip == "clusterable"
        silv_hit = (
            None if report.verdict_silverman is None else report.verdict_silverman == "clusterable"
        )
        return dip_hit, silv_hit

    results = map_indexed(one_run, runs)
    dip_hits = [r[0] for r in results]
    silv_hits = [r[1] for r in results]
    proportion_dip = None if dip_hits[0] is None else sum(dip_hits) / runs
    proportion_silverman = None if silv_hits[0] is None else sum(silv_hits) / runs
    return SimulationSummary(
        id=spec.id,
        runs=runs,
        proportion_dip=proportion_dip,
        proportion_silverman=proportion_silverman,
        seed=seed,
        B=B,
    )
