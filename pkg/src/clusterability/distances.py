"""Reduction of a data matrix to its 1-D sample of pairwise distances.

The multimodality tests operate on this sample: n points yield
m = n(n-1)/2 distances, kept sorted ascending so downstream consumers
(the dip algorithm in particular) never re-sort.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import pdist

from .dataset_io import DataMatrix

__all__ = ["SampleVector", "HistogramBins", "pairwise_distances", "histogram"]

_METRICS = ("euclidean",)

# ~2e8 distances; above this the quadratic memory bites hard.
DEFAULT_ROW_CAP = 20000


@dataclass(frozen=True)
class SampleVector:
    """A sorted 1-D sample of finite reals.

    Distance samples are nonnegative by construction; the container also
    accepts raw 1-D data (possibly negative) so the tests can be applied
    directly to univariate samples.
    """

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=np.float64).ravel()
        if values.size == 0:
            raise ValueError("sample must contain at least one value")
        if not np.all(np.isfinite(values)):
            raise ValueError("sample values must all be finite")
        if np.any(np.diff(values) < 0):
            raise ValueError("sample values must be sorted ascending")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def m(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class HistogramBins:
    """Equal-width histogram of a sample: k+1 edges, k counts."""

    edges: np.ndarray
    counts: np.ndarray

    def __post_init__(self) -> None:
        edges = np.asarray(self.edges, dtype=np.float64)
        counts = np.asarray(self.counts, dtype=np.int64)
        if edges.ndim != 1 or counts.ndim != 1 or edges.size != counts.size + 1:
            raise ValueError("need k+1 edges for k counts")
        if np.any(np.diff(edges) <= 0):
            raise ValueError("bin edges must be strictly ascending")
        if np.any(counts < 0):
            raise ValueError("bin counts must be nonnegative")
        edges.setflags(write=False)
        counts.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "counts", counts)

    @property
    def midpoints(self) -> np.ndarray:
        return (self.edges[:-1] + self.edges[1:]) / 2.0


def pairwise_distances(
    data: DataMatrix, metric: str = "euclidean", row_cap: int = DEFAULT_ROW_CAP
) -> SampleVector:
    """All n(n-1)/2 pairwise distances of the rows, sorted ascending.

    Output is quadratic in n, so inputs above ``row_cap`` rows are
    refused; raise the cap explicitly if the memory cost is intended.
    """
    if metric not in _METRICS:
        raise ValueError(f"unsupported metric {metric!r}; available: {', '.join(_METRICS)}")
    n = data.n
    if n < 2:
        raise ValueError("need at least 2 rows to form a pairwise distance")
    if n > row_cap:
        raise ValueError(
            f"{n} rows would produce {n * (n - 1) // 2} distances; "
            f"refusing above the cap of {row_cap} rows. "
            f"Pass row_cap={n} (or higher) to override."
        )
    dists = pdist(data.values, metric=metric)
    dists.sort()
    return SampleVector(dists)


def histogram(sample: SampleVector, bin_count: int) -> HistogramBins:
    """Equal-width histogram over [min, max]; the max lands in the last bin.

    A zero-range sample (all values equal) degenerates to a single bin of
    width 1 centered on the value, keeping the operation total.
    """
    if bin_count < 1:
        raise ValueError(f"bin_count must be positive, got {bin_count}")
    x = sample.values
    lo, hi = x[0], x[-1]
    if lo == hi:
        edges = np.array([lo - 0.5, lo + 0.5])
        counts = np.array([sample.m], dtype=np.int64)
        return HistogramBins(edges, counts)
    counts, edges = np.histogram(x, bins=bin_count, range=(lo, hi))
    return HistogramBins(edges, counts.astype(np.int64))
