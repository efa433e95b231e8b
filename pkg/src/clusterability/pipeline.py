"""End-to-end clusterability assessment.

data matrix -> pairwise distances -> multimodality test(s) -> verdict.

A multimodal distance sample indicates separated groups of points, so
each test's p-value maps to a verdict by the strict rule
p < alpha => clusterable, and unclusterable otherwise.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field

from .core import RandomSeed, Significance, derive_substream
from .dataset_io import DataMatrix
from .dip import DEFAULT_REPLICATES as DIP_REPLICATES
from .dip import DipResult, dip_pvalue, dip_statistic
from .distances import pairwise_distances
from .silverman import DEFAULT_REPLICATES as SILVERMAN_REPLICATES
from .silverman import SilvermanResult, silverman_pvalue

__all__ = ["ClusterabilityReport", "assess_clusterability", "SCHEMA_VERSION"]

SCHEMA_VERSION = 1

KNOWN_TESTS = ("dip", "silverman")

CLUSTERABLE = "clusterable"
UNCLUSTERABLE = "unclusterable"


def _verdict(p_value: float, alpha: Significance) -> str:
    return CLUSTERABLE if p_value < alpha.alpha else UNCLUSTERABLE


@dataclass(frozen=True)
class ClusterabilityReport:
    """Assessment outcome for one dataset.

    ``timing`` holds per-stage wall-clock seconds for diagnostics; it is
    serialized as null so reports stay byte-identical across runs.
    """

    dataset_id: str
    n: int
    d: int
    m: int
    alpha: Significance
    dip: DipResult | None
    silverman: SilvermanResult | None
    verdict_dip: str | None
    verdict_silverman: str | None
    seed: RandomSeed
    timing: dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.m != self.n * (self.n - 1) // 2:
            raise ValueError(f"m={self.m} inconsistent with n={self.n}")
        for result, verdict in ((self.dip, self.verdict_dip), (self.silverman, self.verdict_silverman)):
            if (result is None) != (verdict is None):
                raise ValueError("test result and verdict must be present together")
            if result is not None and verdict != _verdict(result.p_value, self.alpha):
                raise ValueError("verdict inconsistent with p-value and alpha")

    def to_dict(self) -> dict:
        """Report as a JSON-ready dict with fixed field order."""
        dip = None
        if self.dip is not None:
            dip = {
                "dip": self.dip.dip,
                "p_value": self.dip.p_value,
                "m": self.dip.m,
                "replicates": self.dip.replicates,
                "seed": self.dip.seed.value,
                "modal_interval": list(self.dip.modal_interval),
            }
        silverman = None
        if self.silverman is not None:
            silverman = {
                "h_crit": self.silverman.h_crit,
                "p_value": self.silverman.p_value,
                "m": self.silverman.m,
                "replicates": self.silverman.replicates,
                "seed": self.silverman.seed.value,
                "null_modes": self.silverman.null_modes,
            }
        return {
            "schema_version": SCHEMA_VERSION,
            "dataset_id": self.dataset_id,
            "n": self.n,
            "d": self.d,
            "m": self.m,
            "alpha": self.alpha.alpha,
            "dip": dip,
            "silverman": silverman,
            "verdict_dip": self.verdict_dip,
            "verdict_silverman": self.verdict_silverman,
            "seed": self.seed.value,
            "timing": None,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def assess_clusterability(
    data: DataMatrix,
    tests: tuple[str, ...] = KNOWN_TESTS,
    alpha: Significance = Significance(),
    seed: RandomSeed = RandomSeed(0),
    B: int | None = None,
    dataset_id: str = "",
) -> ClusterabilityReport:
    """Run the requested multimodality tests on the pairwise distances.

    The distance sample is computed once and shared; the dip test draws
    from substream 0 of the seed and the Silverman test from substream 1,
    so adding or removing one test never perturbs the other's p-value.
    ``B=None`` uses each test's default replicate count.
    """
    if not tests:
        raise ValueError("at least one test must be requested")
    unknown = [t for t in tests if t not in KNOWN_TESTS]
    if unknown:
        raise ValueError(f"unknown test(s) {unknown}; available: {', '.join(KNOWN_TESTS)}")
    if data.n < 3:
        raise ValueError(f"need at least 3 rows to assess clusterability, got {data.n}")
    if "dip" in tests and data.n < 4:
        raise ValueError(f"the dip bootstrap needs at least 4 rows, got {data.n}")

    timing: dict[str, float] = {}
    t0 = time.perf_counter()
    sample = pairwise_distances(data)
    timing["distances"] = time.perf_counter() - t0
    checksum = hashlib.sha256(sample.values.tobytes()).hexdigest()

    dip_result: DipResult | None = None
    verdict_dip: str | None = None
    if "dip" in tests:
        t0 = time.perf_counter()
        assert hashlib.sha256(sample.values.tobytes()).hexdigest() == checksum
        dip_seed = derive_substream(seed, 0)
        replicates = B if B is not None else DIP_REPLICATES
        dip, modal_interval = dip_statistic(sample)
        p = dip_pvalue(dip, sample.m, replicates, dip_seed)
        dip_result = DipResult(
            dip=dip,
            p_value=p,
            m=sample.m,
            replicates=replicates,
            seed=dip_seed,
            modal_interval=modal_interval,
        )
        verdict_dip = _verdict(p, alpha)
        timing["dip"] = time.perf_counter() - t0

    silverman_result: SilvermanResult | None = None
    verdict_silverman: str | None = None
    if "silverman" in tests:
        t0 = time.perf_counter()
        assert hashlib.sha256(sample.values.tobytes()).hexdigest() == checksum
        silverman_seed = derive_substream(seed, 1)
        replicates = B if B is not None else SILVERMAN_REPLICATES
        silverman_result = silverman_pvalue(sample, replicates, silverman_seed)
        verdict_silverman = _verdict(silverman_result.p_value, alpha)
        timing["silverman"] = time.perf_counter() - t0

    return ClusterabilityReport(
        dataset_id=dataset_id,
        n=data.n,
        d=data.d,
        m=sample.m,
        alpha=alpha,
        dip=dip_result,
        silverman=silverman_result,
        verdict_dip=verdict_dip,
        verdict_silverman=verdict_silverman,
        seed=seed,
        timing=timing,
    )
