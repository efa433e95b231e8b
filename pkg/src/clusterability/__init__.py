"""Clusterability assessment via multimodality tests on pairwise distances.

A dataset with real cluster structure has more than one mode in the
distribution of its pairwise distances; a homogeneous one does not.
This package reduces a numeric matrix to that 1-D distance sample and
applies two classical multimodality tests, Hartigan & Hartigan's dip
test and Silverman's critical-bandwidth test, to produce p-values and a
clusterable/unclusterable verdict.
"""

from .core import RandomSeed, Significance, derive_substream
from .dataset_io import (
    BUNDLED_DATASETS,
    DataFormatError,
    DataMatrix,
    IngestOptions,
    bundled_dataset,
    load_matrix,
    write_matrix,
)
from .dip import DipResult, dip_pvalue, dip_reference_oracle, dip_statistic
from .distances import HistogramBins, SampleVector, histogram, pairwise_distances
from .pipeline import ClusterabilityReport, assess_clusterability
from .silverman import (
    KdeGrid,
    SilvermanResult,
    count_modes,
    critical_bandwidth,
    kde,
    silverman_pvalue,
)
from .simulation import (
    PRESET_IDS,
    Component,
    SimulationSpec,
    SimulationSummary,
    generate,
    load_presets,
    run_batch,
)

__version__ = "0.1.0"

__all__ = [
    "RandomSeed",
    "Significance",
    "derive_substream",
    "DataMatrix",
    "IngestOptions",
    "DataFormatError",
    "load_matrix",
    "write_matrix",
    "bundled_dataset",
    "BUNDLED_DATASETS",
    "SampleVector",
    "HistogramBins",
    "pairwise_distances",
    "histogram",
    "DipResult",
    "dip_statistic",
    "dip_pvalue",
    "dip_reference_oracle",
    "KdeGrid",
    "SilvermanResult",
    "kde",
    "count_modes",
    "critical_bandwidth",
    "silverman_pvalue",
    "ClusterabilityReport",
    "assess_clusterability",
    "Component",
    "SimulationSpec",
    "SimulationSummary",
    "PRESET_IDS",
    "load_presets",
    "generate",
    "run_batch",
    "__version__",
]
