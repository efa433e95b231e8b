"""Small builders shared across test modules."""

import numpy as np

from clusterability import SampleVector


def sv(values):
    """SampleVector from any iterable, sorting for the caller."""
    return SampleVector(np.sort(np.asarray(values, dtype=np.float64)))


def mixture(rng, centers, sds, sizes):
    """1-D Gaussian mixture sample as a SampleVector."""
    parts = [rng.normal(c, s, size=n) for c, s, n in zip(centers, sds, sizes)]
    return sv(np.concatenate(parts))


def fuzz_sample(rng, max_size=40):
    """A random 1-D sample mixing continuous draws, ties and integers."""
    m = int(rng.integers(2, max_size + 1))
    kind = int(rng.integers(0, 4))
    if kind == 0:
        x = rng.random(m)
    elif kind == 1:
        x = rng.standard_normal(m)
    elif kind == 2:
        x = np.round(rng.standard_normal(m), 1)  # forces ties
    else:
        x = rng.integers(0, 6, size=m).astype(np.float64)
    return sv(x)
