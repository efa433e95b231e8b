"""Command-line front end.

Standard output carries only data (JSON reports, summary tables,
histogram rows); every diagnostic goes to standard error.  Exit codes:
0 success, 2 usage error, 3 data error, 4 internal error.  With a fixed
--seed, repeated invocations produce byte-identical standard output
regardless of --threads.
"""

from __future__ import annotations

import functools
import os
import sys

import click

from ._parallel import set_threads
from .core import RandomSeed, Significance
from .dataset_io import BUNDLED_DATASETS, DataFormatError, DataMatrix, bundled_dataset, load_matrix
from .distances import histogram, pairwise_distances
from .pipeline import KNOWN_TESTS, assess_clusterability
from .simulation import PRESET_IDS, load_presets, run_batch

EXIT_DATA_ERROR = 3
EXIT_INTERNAL_ERROR = 4

_DATA_ERRORS = (DataFormatError, FileNotFoundError, IsADirectoryError, PermissionError, ValueError)


def _guard(fn):
    """Map exceptions to the exit-code contract, diagnostics on stderr."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except click.ClickException:
            raise
        except _DATA_ERRORS as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_DATA_ERROR)
        except Exception as exc:  # pragma: no cover - defensive
            click.echo(f"internal error: {exc!r}", err=True)
            sys.exit(EXIT_INTERNAL_ERROR)

    return wrapper


def _resolve_input(name: str) -> tuple[str, DataMatrix]:
    """Bundled dataset name, or else a path to a delimited file."""
    if name in BUNDLED_DATASETS:
        return name, bundled_dataset(name)
    return name, load_matrix(name)


def _parse_tests(spec: str) -> tuple[str, ...]:
    tests = tuple(t.strip() for t in spec.split(",") if t.strip())
    unknown = [t for t in tests if t not in KNOWN_TESTS]
    if unknown or not tests:
        raise click.UsageError(
            f"--tests must name a nonempty subset of {{{','.join(KNOWN_TESTS)}}}, got {spec!r}"
        )
    return tests


@click.group()
def cli() -> None:
    """Assess how clusterable a dataset is.

    The pairwise distances of a clusterable dataset form a multimodal
    1-D sample; the dip and Silverman multimodality tests turn that into
    p-values and clusterable/unclusterable verdicts.
    """


@cli.command("test")
@click.argument("input")
@click.option("--tests", "tests_spec", default=",".join(KNOWN_TESTS), show_default=True,
              help="Comma-separated subset of {dip,silverman}.")
@click.option("--alpha", default=0.05, show_default=True, help="Significance level in (0,1).")
@click.option("--seed", default=0, show_default=True, help="Random seed (never wall-clock).")
@click.option("--replicates", default=None, type=int,
              help="Bootstrap replicates for both tests (default: per-test defaults).")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json",
              show_default=True)
@click.option("--threads", default=None, type=int,
              help="Worker threads (default: all cores). Never affects output bytes.")
@click.option("--exit-on-unclusterable", is_flag=True,
              help="Exit 1 when the dip verdict is unclusterable (for shell pipelines).")
@_guard
def cmd_test(input, tests_spec, alpha, seed, replicates, fmt, threads, exit_on_unclusterable):
    """Run the multimodality tests on INPUT (bundled name or file path)."""
    tests = _parse_tests(tests_spec)
    try:
        significance = Significance(alpha)
        seed_obj = RandomSeed(seed)
    except (ValueError, TypeError) as exc:
        raise click.UsageError(str(exc))
    if replicates is not None and replicates < 1:
        raise click.UsageError(f"--replicates must be positive, got {replicates}")
    set_threads(threads if threads is not None else os.cpu_count())

    dataset_id, data = _resolve_input(input)
    report = assess_clusterability(
        data, tests=tests, alpha=significance, seed=seed_obj, B=replicates, dataset_id=dataset_id
    )
    for stage, seconds in report.timing.items():
        click.echo(f"timing: {stage} {seconds:.3f}s", err=True)
    if fmt == "json":
        click.echo(report.to_json())
    else:
        if report.dip is not None:
            click.echo(f"dip: p={report.dip.p_value:.4f}, {report.verdict_dip}")
        if report.silverman is not None:
            click.echo(f"silverman: p={report.silverman.p_value:.4f}, {report.verdict_silverman}")
    if exit_on_unclusterable and report.verdict_dip == "unclusterable":
        sys.exit(1)


@cli.command("simulate")
@click.option("--preset", default="all", show_default=True,
              help=f"Preset id ({PRESET_IDS[0]}..{PRESET_IDS[-1]}) or 'all'.")
@click.option("--runs", default=100, show_default=True, help="Datasets generated per preset.")
@click.option("--seed", default=0, show_default=True)
@click.option("--replicates", default=500, show_default=True,
              help="Bootstrap replicates per test per run.")
@click.option("--presets", "presets_path", default=None, type=click.Path(),
              help="Override the bundled preset parameter file.")
@click.option("--threads", default=None, type=int,
              help="Worker threads (default: all cores). Never affects output bytes.")
@_guard
def cmd_simulate(preset, runs, seed, replicates, presets_path, threads):
    """Replay generator presets and tabulate clusterable-verdict rates."""
    if preset != "all" and preset not in PRESET_IDS:
        raise click.UsageError(
            f"unknown preset {preset!r}; choose one of {PRESET_IDS[0]}..{PRESET_IDS[-1]} or 'all'"
        )
    if runs < 1:
        raise click.UsageError(f"--runs must be positive, got {runs}")
    if replicates < 1:
        raise click.UsageError(f"--replicates must be positive, got {replicates}")
    try:
        seed_obj = RandomSeed(seed)
    except (ValueError, TypeError) as exc:
        raise click.UsageError(str(exc))
    set_threads(threads if threads is not None else os.cpu_count())

    specs = load_presets(presets_path)
    ids = list(PRESET_IDS) if preset == "all" else [preset]
    click.echo("id\truns\tproportion_dip\tproportion_silverman")
    for pid in ids:
        summary = run_batch(specs[pid], runs=runs, seed=seed_obj, B=replicates)
        click.echo(
            f"{summary.id}\t{summary.runs}"
            f"\t{summary.proportion_dip:.3f}\t{summary.proportion_silverman:.3f}"
        )


@cli.command("hist")
@click.argument("input")
@click.option("--bins", default=30, show_default=True, help="Number of equal-width bins.")
@_guard
def cmd_hist(input, bins):
    """Histogram of INPUT's pairwise distances as midpoint/count rows."""
    if bins < 1:
        raise click.UsageError(f"--bins must be positive, got {bins}")
    _, data = _resolve_input(input)
    h = histogram(pairwise_distances(data), bins)
    for mid, count in zip(h.midpoints, h.counts):
        click.echo(f"{mid:.10g}\t{count}")


@cli.command("datasets")
@_guard
def cmd_datasets():
    """List the bundled datasets with their shapes."""
    for name in BUNDLED_DATASETS:
        data = bundled_dataset(name)
        click.echo(f"{name}\t{data.n}\t{data.d}")


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
