"""Hartigan & Hartigan's dip statistic and its bootstrap p-value.

The dip of a sample is the smallest sup-norm distance between its
empirical CDF and any unimodal distribution function (Hartigan &
Hartigan 1985, "The dip test of unimodality", Ann. Statist. 13).
``dip_statistic`` implements the O(m) greatest-convex-minorant /
least-concave-majorant algorithm of AS 217 (Hartigan 1985) on the sorted
sample; ``dip_pvalue`` calibrates it against samples from the uniform
distribution, the asymptotically least favorable unimodal null.

``dip_reference_oracle`` computes the same quantity directly from the
definition for tiny samples by exact minimization over modal positions,
and exists purely to cross-check the fast path.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import linprog

from ._accel import maybe_jit
from ._parallel import map_indexed
from .core import RandomSeed, derive_substream, stream_from
from .distances import SampleVector

__all__ = ["DipResult", "dip_statistic", "dip_pvalue", "dip_reference_oracle"]

DEFAULT_REPLICATES = 2000


@dataclass(frozen=True)
class DipResult:
    """Dip test outcome for one sample."""

    dip: float
    p_value: float
    m: int
    replicates: int
    seed: RandomSeed
    modal_interval: tuple[int, int]

    def __post_init__(self) -> None:
        if not 0.0 <= self.dip <= 0.25:
            raise ValueError(f"dip must lie in [0, 0.25], got {self.dip}")
        if not 0.0 <= self.p_value <= 1.0:
            raise ValueError(f"p_value must lie in [0, 1], got {self.p_value}")
        lo, hi = self.modal_interval
        if not 0 <= lo <= hi < self.m:
            raise ValueError(f"modal interval {self.modal_interval} out of range for m={self.m}")


@maybe_jit
def _dip_core(x):  # pragma: no cover - exercised via dip_statistic
    """AS 217 on sorted x; returns (dip, lo, hi).

    Internally the deviation is tracked in count units (2*m*dip) like the
    Fortran original.  One deliberate difference: AS 217 reports 0 for
    m < 4, but the definitional dip of any sample with two distinct
    values is at least 1/(2m), so the unit deviation is floored at 1.
    """
    n = x.shape[0]
    if x[0] == x[n - 1]:
        return 0.0, 0, n - 1

    # mn[j]: start of the gcm segment ending at j; mj mirrors for the lcm
    mn = np.zeros(n, dtype=np.int64)
    for j in range(1, n):
        mn[j] = j - 1
        while True:
            mnj = mn[j]
            mnmnj = mn[mnj]
            if mnj == 0 or (x[j] - x[mnj]) * (mnj - mnmnj) < (x[mnj] - x[mnmnj]) * (j - mnj):
                break
            mn[j] = mnmnj
    mj = np.zeros(n, dtype=np.int64)
    mj[n - 1] = n - 1
    for k in range(n - 2, -1, -1):
        mj[k] = k + 1
        while True:
            mjk = mj[k]
            mjmjk = mj[mjk]
            if mjk == n - 1 or (x[k] - x[mjk]) * (mjk - mjmjk) < (x[mjk] - x[mjmjk]) * (k - mjk):
                break
            mj[k] = mjmjk

    low = 0
    high = n - 1
    d_units = 0.0
    gcm = np.zeros(n, dtype=np.int64)
    lcm = np.zeros(n, dtype=np.int64)
    while True:
        # collect envelopes of the current [low, high] window
        gcm[0] = high
        i = 0
        while gcm[i] > low:
            gcm[i + 1] = mn[gcm[i]]
            i += 1
        ig = l_gcm = i
        ix = ig - 1
        lcm[0] = low
        i = 0
        while lcm[i] < high:
            lcm[i + 1] = mj[lcm[i]]
            i += 1
        ih = l_lcm = i
        iv = 1

        # largest distance between the envelopes over the window
        d = 0.0
        if l_gcm != 1 or l_lcm != 1:
            while True:
                gcmix = gcm[ix]
                lcmiv = lcm[iv]
                if gcmix > lcmiv:
                    gcmil = gcm[ix + 1]
                    dx = (lcmiv - gcmil + 1) - (x[lcmiv] - x[gcmil]) * (gcmix - gcmil) / (
                        x[gcmix] - x[gcmil]
                    )
                    iv += 1
                    if dx >= d:
                        d = dx
                        ig = ix + 1
                        ih = iv - 1
                else:
                    lcmivl = lcm[iv - 1]
                    dx = (x[gcmix] - x[lcmivl]) * (lcmiv - lcmivl) / (x[lcmiv] - x[lcmivl]) - (
                        gcmix - lcmivl - 1
                    )
                    ix -= 1
                    if dx >= d:
                        d = dx
                        ig = ix + 1
                        ih = iv
                if ix < 0:
                    ix = 0
                if iv > l_lcm:
                    iv = l_lcm
                if gcm[ix] == lcm[iv]:
                    break
        if d < d_units:
            break

        # max deviation of the ecdf from the gcm within [gcm[ig+1], gcm[ig]] ...
        dip_l = 0.0
        for j in range(ig, l_gcm):
            max_t = 1.0
            jb = gcm[j + 1]
            je = gcm[j]
            if je - jb > 1 and x[je] != x[jb]:
                c = (je - jb) / (x[je] - x[jb])
                for jj in range(jb, je + 1):
                    t = (jj - jb + 1) - (x[jj] - x[jb]) * c
                    if max_t < t:
                        max_t = t
            if dip_l < max_t:
                dip_l = max_t
        # ... and from the lcm within [lcm[ih], lcm[ih+1]]
        dip_u = 0.0
        for j in range(ih, l_lcm):
            max_t = 1.0
            jb = lcm[j]
            je = lcm[j + 1]
            if je - jb > 1 and x[je] != x[jb]:
                c = (je - jb) / (x[je] - x[jb])
                for jj in range(jb, je + 1):
                    t = (x[jj] - x[jb]) * c - (jj - jb - 1)
                    if max_t < t:
                        max_t = t
            if dip_u < max_t:
                dip_u = max_t
        dip_new = dip_u if dip_u > dip_l else dip_l
        if d_units < dip_new:
            d_units = dip_new
        if low == gcm[ig] and high == lcm[ih]:
            break
        low = gcm[ig]
        high = lcm[ih]

    if d_units < 1.0:
        d_units = 1.0  # two distinct values force dip >= 1/(2m)
    return d_units / (2.0 * n), low, high


def dip_statistic(sample: SampleVector) -> tuple[float, tuple[int, int]]:
    """The dip D of a sorted sample and the algorithm's modal interval.

    O(m) on the pre-sorted sample.  All-equal samples have dip 0 (a point
    mass is unimodal and matches the ecdf exactly); any sample with two
    distinct values satisfies 1/(2m) <= D <= 0.25.
    """
    if sample.m < 2:
        raise ValueError(f"dip needs at least 2 values, got {sample.m}")
    dip, lo, hi = _dip_core(sample.values)
    return float(dip), (int(lo), int(hi))


@lru_cache(maxsize=32)
def _null_dips(m: int, B: int, seed_value: int) -> np.ndarray:
    """Sorted dips of B uniform(0,1) samples of size m.

    Replicate b draws from substream b of the seed, so the table is
    independent of evaluation order.  Sorted uniforms come from the
    normalized-partial-sums representation (cumulative sums of m+1
    standard exponentials), skipping an O(m log m) sort per replicate.
    """
    seed = RandomSeed(seed_value)

    def replicate(b: int) -> float:
        rng = stream_from(derive_substream(seed, b))
        e = rng.standard_exponential(m + 1)
        c = np.cumsum(e)
        u = c[:m] / c[m]
        return _dip_core(u)[0]

    dips = np.array(map_indexed(replicate, B))
    dips.sort()
    return dips


def dip_pvalue(dip: float, m: int, B: int = DEFAULT_REPLICATES, seed: RandomSeed = RandomSeed(0)) -> float:
    """Monte Carlo p-value of an observed dip under the uniform null.

    p = (1 + #{b : dip_b >= dip}) / (B + 1).  Replicate tables are cached
    per (m, B, seed), so repeated tests at one sample size amortize.
    """
    if m < 4:
        raise ValueError(f"dip p-value needs m >= 4, got {m}")
    if B < 1:
        raise ValueError(f"need at least one replicate, got {B}")
    if not 0.0 <= dip <= 0.25:
        raise ValueError(f"dip must lie in [0, 0.25], got {dip}")
    null = _null_dips(m, B, int(seed.value))
    exceed = B - int(np.searchsorted(null, dip, side="left"))
    return (1 + exceed) / (B + 1)


# ------------------------------------------------------------------ oracle

def _solve_config(K, z, p, q, convex, concave, extra_ub=(), point_mode=None):
    """Smallest band half-width d for one modal configuration (an LP).

    Variables are the candidate CDF heights u_0..u_{K-1} at the distinct
    values, optionally the pre/post-atom heights v, w at a point mode,
    and d itself.  Feasible means: heights stay within d of the ecdf
    band [p_j - d, q_j + d], the chain left of the mode is convex with
    nonnegative first slope, the chain right of it is concave with
    nonnegative last slope.
    """
    nv = K + (2 if point_mode is not None else 0) + 1
    iv_ = K
    iw = K + 1
    idx_d = nv - 1
    A, b = [], []

    def row(coeffs, rhs):
        r = [0.0] * nv
        for i, c in coeffs.items():
            r[idx_d if i == "d" else i] += c
        A.append(r)
        b.append(rhs)

    def height_var(j, side):
        if point_mode is not None and j == point_mode:
            return iv_ if side == "L" else iw
        return j

    for j in range(K):
        if point_mode is not None and j == point_mode:
            continue
        row({j: -1.0, idx_d: -1.0}, -p[j])
        row({j: 1.0, idx_d: -1.0}, q[j])
    if point_mode is not None:
        t = point_mode
        row({iv_: -1.0, idx_d: -1.0}, -q[t])
        row({iv_: 1.0, idx_d: -1.0}, q[t])
        row({iw: -1.0, idx_d: -1.0}, -p[t])
        row({iw: 1.0, idx_d: -1.0}, p[t])
        row({iv_: 1.0, iw: -1.0}, 0.0)

    def chain(idxs, side, shape):
        h = [height_var(j, side) for j in idxs]
        zz = [z[j] for j in idxs]
        for a in range(len(idxs) - 2):
            i0, i1, i2 = h[a], h[a + 1], h[a + 2]
            z0, z1, z2 = zz[a], zz[a + 1], zz[a + 2]
            # cross-multiplied slope comparison, e.g. convex:
            # (u1-u0)(z2-z1) <= (u2-u1)(z1-z0)
            s = 1.0 if shape == "convex" else -1.0
            row({i1: s * ((z2 - z1) + (z1 - z0)), i0: -s * (z2 - z1), i2: -s * (z1 - z0)}, 0.0)
        if len(idxs) >= 2:
            if shape == "convex":
                row({h[0]: 1.0, h[1]: -1.0}, 0.0)  # first slope >= 0
            else:
                row({h[-1]: -1.0, h[-2]: 1.0}, 0.0)  # last slope >= 0

    chain(convex, "L", "convex")
    chain(concave, "R", "concave")
    for coeffs, rhs in extra_ub:
        row(coeffs, rhs)

    bounds = [(0.0, 1.0)] * (nv - 1) + [(0.0, 0.5)]
    c = [0.0] * nv
    c[idx_d] = 1.0
    res = linprog(c, A_ub=np.array(A), b_ub=np.array(b), bounds=bounds, method="highs")
    return res.fun if res.status == 0 else np.inf


def dip_reference_oracle(sample: SampleVector) -> float:
    """Definitional dip for tiny samples (2 <= m <= 12).

    Minimizes the sup-distance band half-width over every modal
    configuration: mode at a distinct value (with an atom allowed there),
    mode inside a gap between adjacent distinct values (junction cases:
    mode adjacent to the left or the right gap endpoint; an interior
    optimum reduces to one of those by linearity), or mode outside the
    data range.  Each configuration is a small linear program.
    """
    m = sample.m
    if not 2 <= m <= 12:
        raise ValueError(f"oracle is limited to 2 <= m <= 12, got {m}")
    x = sample.values
    z, counts = np.unique(x, return_counts=True)
    K = z.shape[0]
    if K == 1:
        return 0.0
    cum = np.cumsum(counts)
    p = cum / m  # ecdf at z_j
    q = (cum - counts) / m  # ecdf just below z_j

    best = np.inf
    # mode left of all points: whole chain concave
    best = min(best, _solve_config(K, z, p, q, [], list(range(K))))
    # mode right of all points: whole chain convex
    best = min(best, _solve_config(K, z, p, q, list(range(K)), []))
    # mode at a sample point
    for t in range(K):
        best = min(
            best,
            _solve_config(K, z, p, q, list(range(t + 1)), list(range(t, K)), point_mode=t),
        )
    # mode inside the gap (z_t, z_{t+1})
    for t in range(K - 1):
        # mode hugs z_t: concavity spans the gap
        extra = [({t: 1.0, t + 1: -1.0}, 0.0)]
        best = min(
            best,
            _solve_config(K, z, p, q, list(range(t + 1)), list(range(t, K)), extra_ub=extra),
        )
        # mode hugs z_{t+1}: convexity spans the gap, and the minimal
        # convex rise from u_t must stay inside the band at z_t
        extra = [({t: 1.0, t + 1: -1.0}, 0.0)]
        if t >= 1:
            r = (z[t + 1] - z[t]) / (z[t] - z[t - 1])
            extra.append(({t: 1.0 + r, t - 1: -r, "d": -1.0}, p[t]))
        best = min(
            best,
            _solve_config(K, z, p, q, list(range(t + 2)), list(range(t + 1, K)), extra_ub=extra),
        )
    return max(float(best), 0.0)
