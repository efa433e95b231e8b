"""End-to-end assessment: verdicts, report schema, determinism."""

import json

import numpy as np
import pytest

from clusterability import (
    ClusterabilityReport,
    DataMatrix,
    RandomSeed,
    Significance,
    assess_clusterability,
    bundled_dataset,
)
from clusterability.pipeline import SCHEMA_VERSION

# enough replicates to pin verdicts far from alpha, small enough to stay quick
B = 200


def two_blob_matrix(n_per=10, gap=30.0, seed=1):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n_per, 2))
    b = rng.standard_normal((n_per, 2)) + gap
    return DataMatrix(np.vstack([a, b]))


def test_iris_clusterable_both_tests():
    report = assess_clusterability(bundled_dataset("iris"), B=B, dataset_id="iris")
    assert report.verdict_dip == "clusterable"
    assert report.verdict_silverman == "clusterable"


def test_rivers_split_verdict():
    report = assess_clusterability(bundled_dataset("rivers"), B=B)
    assert report.verdict_dip == "unclusterable"
    assert report.verdict_silverman == "clusterable"


def test_usarrests_and_cars_unclusterable():
    for name in ("USArrests", "cars"):
        report = assess_clusterability(bundled_dataset(name), B=B)
        assert report.verdict_dip == "unclusterable"
        assert report.verdict_silverman == "unclusterable"


def test_report_shape_and_schema():
    data = two_blob_matrix()
    report = assess_clusterability(data, B=50, dataset_id="blobs")
    assert report.n == 20 and report.m == 190
    doc = report.to_dict()
    assert list(doc) == [
        "schema_version",
        "dataset_id",
        "n",
        "d",
        "m",
        "alpha",
        "dip",
        "silverman",
        "verdict_dip",
        "verdict_silverman",
        "seed",
        "timing",
    ]
    assert doc["schema_version"] == SCHEMA_VERSION == 1
    assert doc["dataset_id"] == "blobs"
    assert doc["timing"] is None  # real timings live outside the stable schema
    assert set(report.timing) == {"distances", "dip", "silverman"}
    assert json.loads(report.to_json()) == doc


def test_reports_byte_identical():
    data = two_blob_matrix()
    a = assess_clusterability(data, B=50, seed=RandomSeed(7))
    b = assess_clusterability(data, B=50, seed=RandomSeed(7))
    assert a.to_json() == b.to_json()


def test_single_test_matches_joint_run():
    # substream isolation: each test's numbers ignore the other test
    data = two_blob_matrix()
    joint = assess_clusterability(data, B=50)
    dip_only = assess_clusterability(data, tests=("dip",), B=50)
    silv_only = assess_clusterability(data, tests=("silverman",), B=50)
    assert dip_only.dip == joint.dip
    assert dip_only.silverman is None and dip_only.verdict_silverman is None
    assert silv_only.silverman == joint.silverman
    assert silv_only.dip is None


def test_verdict_strict_at_alpha():
    # a two-blob sample at B=19 yields the smallest p, exactly 1/20
    data = two_blob_matrix()
    report = assess_clusterability(data, tests=("dip",), B=19)
    assert report.dip.p_value == 0.05
    at_tie = assess_clusterability(data, tests=("dip",), alpha=Significance(0.05), B=19)
    assert at_tie.verdict_dip == "unclusterable"  # p < alpha is strict
    above = assess_clusterability(data, tests=("dip",), alpha=Significance(0.051), B=19)
    assert above.verdict_dip == "clusterable"


def test_alpha_monotone_verdicts():
    data = two_blob_matrix()
    alphas = [0.01, 0.05, 0.2, 0.5, 0.9]
    verdicts = [
        assess_clusterability(data, alpha=Significance(a), B=50).verdict_dip
        for a in alphas
    ]
    # once clusterable at some alpha, clusterable at every larger alpha
    flips = [v == "clusterable" for v in verdicts]
    assert flips == sorted(flips)


def test_input_validation():
    tiny = DataMatrix(np.eye(3))
    with pytest.raises(ValueError, match="at least 4 rows"):
        assess_clusterability(tiny)
    with pytest.raises(ValueError):
        assess_clusterability(tiny, tests=("silverman",))  # m = 3 < 4
    with pytest.raises(ValueError, match="at least 3 rows"):
        assess_clusterability(DataMatrix(np.eye(2)))
    data = two_blob_matrix(n_per=3)
    with pytest.raises(ValueError, match="unknown test"):
        assess_clusterability(data, tests=("dip", "mystery"))
    with pytest.raises(ValueError):
        assess_clusterability(data, tests=())


def test_report_invariant_enforcement():
    data = two_blob_matrix()
    report = assess_clusterability(data, tests=("dip",), B=50)
    with pytest.raises(ValueError, match="inconsistent"):
        ClusterabilityReport(
            dataset_id="",
            n=report.n,
            d=report.d,
            m=report.m,
            alpha=report.alpha,
            dip=report.dip,
            silverman=None,
            verdict_dip="unclusterable" if report.verdict_dip == "clusterable" else "clusterable",
            verdict_silverman=None,
            seed=report.seed,
        )
    with pytest.raises(ValueError, match="present together"):
        ClusterabilityReport(
            dataset_id="",
            n=report.n,
            d=report.d,
            m=report.m,
            alpha=report.alpha,
            dip=report.dip,
            silverman=None,
            verdict_dip=None,
            verdict_silverman=None,
            seed=report.seed,
        )
    with pytest.raises(ValueError, match="inconsistent with n"):
        ClusterabilityReport(
            dataset_id="",
            n=report.n,
            d=report.d,
            m=report.m + 1,
            alpha=report.alpha,
            dip=None,
            silverman=None,
            verdict_dip=None,
            verdict_silverman=None,
            seed=report.seed,
        )
