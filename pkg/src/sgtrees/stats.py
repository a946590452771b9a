"""Summary statistics and distributional checks for sampled trees.

Batch paths work on (count, n) matrices of out-degree words as produced by
the samplers; the encoded rooting is an artifact of the construction, so
every statistic here depends only on the underlying labelled graph (true
vertex degrees, distances).  Single-tree summaries accept an
:class:`~sgtrees.trees.UnrootedPlaneTree`.

The report constructors are pure measurement: they sample, aggregate and
fit, and return dataclasses with the raw arrays alongside the fitted
numbers.  Pass/fail thresholds live with the callers (tests, scripts).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from scipy import stats as _scipy_stats

from ._kernels import batch_diameters, tree_diameter
from .sampling import as_generator, sample_unrooted_approx_codes
from .trees import UnrootedPlaneTree
from .weights import WeightSequence, sampling_offspring

__all__ = [
    "StatsError",
    "SampleReport",
    "measure",
    "ball_code",
    "batch_degree_count",
    "batch_max_two_degrees",
    "diameters_of_codes",
    "DegreeCltReport",
    "degree_clt_report",
    "DiameterTailReport",
    "diameter_tail_report",
    "MaxDegreeReport",
    "max_degree_report",
    "NeighborhoodCensusReport",
    "neighborhood_census_report",
    "empirical_tv",
]


class StatsError(RuntimeError):
    """A statistical check was asked for outside its domain of validity."""


# ---------------------------------------------------------------------------
# Per-tree summaries


def ball_code(u: UnrootedPlaneTree, v: int, radius: int) -> Tuple[int, ...]:
    """Canonical code of the radius-``radius`` ball around vertex v.

    Preorder word of true vertex degrees, children in the plane order,
    truncated below depth ``radius`` (boundary vertices contribute their
    degree but are not expanded), minimized over the cyclic rotations of
    the center's neighbor list.  ``radius=0`` gives ``(deg(v),)``.
    """
    nbrs = u.neighbors

    def word(vertex: int, parent: int, depth_left: int, out: list) -> None:
        row = nbrs[vertex]
        out.append(len(row))
        if depth_left == 0:
            return
        j = row.index(parent)
        for c in row[j + 1 :] + row[:j]:
            word(c, vertex, depth_left - 1, out)

    best: Optional[Tuple[int, ...]] = None
    row = nbrs[v]
    for i in range(len(row)):
        out = [len(row)]
        if radius > 0:
            for c in row[i:] + row[:i]:
                word(c, v, radius - 1, out)
        cand = tuple(out)
        if best is None or cand < best:
            best = cand
    return best


@dataclass(frozen=True)
class SampleReport:
    """Graph summaries of one unrooted sample."""

    n: int
    diameter: int
    height_from_center: int
    degree_hist: Tuple[int, ...]
    max_degree: int
    second_max_degree: int
    ball_code: Tuple[int, ...]


def measure(u: UnrootedPlaneTree, ball_radius: int = 2, center: int = 0) -> SampleReport:
    """Summaries of one tree; the ball code is taken at ``center`` (default 0)."""
    n = u.size
    degrees = [len(row) for row in u.neighbors]
    hist = np.bincount(degrees)
    code = np.array(u.corner_code(0, 0), dtype=np.int64)
    diameter = int(tree_diameter(code)) if n > 1 else 0
    top_two = sorted(degrees, reverse=True)[:2]
    second = top_two[1] if len(top_two) > 1 else 0
    return SampleReport(
        n=n,
        diameter=diameter,
        height_from_center=(diameter + 1) // 2,
        degree_hist=tuple(int(c) for c in hist),
        max_degree=int(top_two[0]),
        second_max_degree=int(second),
        ball_code=ball_code(u, center, ball_radius),
    )


# ---------------------------------------------------------------------------
# Batch helpers on code matrices


def batch_degree_count(codes: np.ndarray, d: int) -> np.ndarray:
    """Per-row count of vertices with graph degree d (root column corrected)."""
    counts = (codes[:, 1:] == d - 1).sum(axis=1)
    return counts + (codes[:, 0] == d)


def batch_max_two_degrees(codes: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """(largest, second largest) vertex degree per row, ties counted."""
    degs = codes + 1
    degs[:, 0] -= 1
    if codes.shape[1] < 2:
        top = degs[:, 0]
        return top, np.zeros_like(top)
    part = np.partition(degs, codes.shape[1] - 2, axis=1)
    return part[:, -1].copy(), part[:, -2].copy()


def diameters_of_codes(codes: np.ndarray) -> np.ndarray:
    return batch_diameters(np.ascontiguousarray(codes, dtype=np.int64))


# ---------------------------------------------------------------------------
# Degree central limit behaviour


@dataclass(frozen=True)
class DegreeCltReport:
    """Standardized degree counts across independent samples.

    ``z[i, j]`` is (N_{d_j} - n pi_{d_j - 1}) / sqrt(n) for sample i; the
    Anderson-Darling statistic (with its 1% critical value) and the
    D'Agostino normality p-value are computed per degree after the implied
    affine standardization, so the unknown limit variance drops out.
    """

    n: int
    samples: int
    d_values: Tuple[int, ...]
    leaf_shares: np.ndarray
    z: np.ndarray
    ad_statistics: Tuple[float, ...]
    ad_critical_1pct: float
    normaltest_p: Tuple[float, ...]


def degree_clt_report(
    w: WeightSequence,
    n: int,
    samples: int,
    rng,
    d_values: Sequence[int] = (1, 2, 3),
) -> DegreeCltReport:
    xi = sampling_offspring(w)
    if xi.criticality != "critical":
        raise StatsError("degree normality needs a critical tilt; got " + xi.criticality)
    targets = [float(xi.pi(d - 1)) for d in d_values]
    gen = as_generator(rng)
    leaf = np.empty(samples)
    z = np.empty((samples, len(d_values)))
    done = 0
    for chunk in sample_unrooted_approx_codes(w, n, samples, gen, chunk=64):
        b = chunk.shape[0]
        for j, d in enumerate(d_values):
            counts = batch_degree_count(chunk, d)
            z[done : done + b, j] = (counts - n * targets[j]) / math.sqrt(n)
            if d == 1:
                leaf[done : done + b] = counts / n
        if 1 not in d_values:
            leaf[done : done + b] = batch_degree_count(chunk, 1) / n
        done += b
    ad_stats = []
    crit_1pct = None
    normp = []
    for j in range(len(d_values)):
        res = _scipy_stats.anderson(z[:, j], dist="norm")
        ad_stats.append(float(res.statistic))
        idx = list(res.significance_level).index(1.0)
        crit_1pct = float(res.critical_values[idx])
        normp.append(float(_scipy_stats.normaltest(z[:, j]).pvalue))
    return DegreeCltReport(
        n=n,
        samples=samples,
        d_values=tuple(d_values),
        leaf_shares=leaf,
        z=z,
        ad_statistics=tuple(ad_stats),
        ad_critical_1pct=crit_1pct,
        normaltest_p=tuple(normp),
    )


# ---------------------------------------------------------------------------
# Diameter scaling and tail


@dataclass(frozen=True)
class DiameterTailReport:
    """Diameter sample with a Gaussian-in-x^2/n exceedance fit.

    Fits log P(D >= x) = intercept - slope * x^2/n by least squares over
    the upper half of the observed range where the tail estimate still has
    at least ``min_tail_hits`` hits; ``envelope_intercept`` is the smallest
    A' making A' - slope * x^2/n an upper envelope on that range.
    """

    n: int
    samples: int
    mean_diameter: float
    mean_over_sqrt_n: float
    slope: float
    intercept: float
    envelope_intercept: float
    r_squared: float
    grid: np.ndarray
    log_tail: np.ndarray


def diameter_tail_report(
    w: WeightSequence,
    n: int,
    samples: int,
    rng,
    min_tail_hits: int = 10,
    chunk: int = 2048,
) -> DiameterTailReport:
    gen = as_generator(rng)
    diams = np.empty(samples, dtype=np.int64)
    done = 0
    for block in sample_unrooted_approx_codes(w, n, samples, gen, chunk=chunk):
        diams[done : done + block.shape[0]] = diameters_of_codes(block)
        done += block.shape[0]
    diams.sort()
    mean_d = float(diams.mean())
    lo, hi = int(diams[0]), int(diams[-1])
    xs = []
    logp = []
    for x in range(max(lo + 1, (lo + hi) // 2), hi + 1):
        hits = samples - int(np.searchsorted(diams, x, side="left"))
        if hits < min_tail_hits:
            break
        xs.append(x)
        logp.append(math.log(hits / samples))
    if len(xs) < 3:
        raise StatsError("diameter tail fit needs at least 3 grid points; increase samples")
    u = np.array(xs, dtype=float) ** 2 / n
    y = np.array(logp)
    fit = _scipy_stats.linregress(u, y)
    slope = -float(fit.slope)
    intercept = float(fit.intercept)
    envelope = float(np.max(y + slope * u))
    return DiameterTailReport(
        n=n,
        samples=samples,
        mean_diameter=mean_d,
        mean_over_sqrt_n=mean_d / math.sqrt(n),
        slope=slope,
        intercept=intercept,
        envelope_intercept=envelope,
        r_squared=float(fit.rvalue) ** 2,
        grid=np.array(xs, dtype=np.int64),
        log_tail=y,
    )


# ---------------------------------------------------------------------------
# Condensation (subcritical maximum degree)


@dataclass(frozen=True)
class MaxDegreeReport:
    """Largest and second largest degrees under a subcritical weight sequence."""

    n: int
    samples: int
    median_max_ratio: float
    target_ratio: float
    median_second_to_max: float
    max_ratios: np.ndarray
    second_to_max: np.ndarray


def max_degree_report(w: WeightSequence, n: int, samples: int, rng) -> MaxDegreeReport:
    xi = sampling_offspring(w)
    if xi.criticality != "subcritical":
        raise StatsError("condensation check needs a subcritical tilt; got " + xi.criticality)
    gen = as_generator(rng)
    ratios = np.empty(samples)
    second = np.empty(samples)
    done = 0
    for block in sample_unrooted_approx_codes(w, n, samples, gen, chunk=256):
        top, nxt = batch_max_two_degrees(block)
        b = block.shape[0]
        ratios[done : done + b] = top / n
        second[done : done + b] = np.where(top > 0, nxt / np.maximum(top, 1), 0.0)
        done += b
    return MaxDegreeReport(
        n=n,
        samples=samples,
        median_max_ratio=float(np.median(ratios)),
        target_ratio=1.0 - float(xi.mu),
        median_second_to_max=float(np.median(second)),
        max_ratios=ratios,
        second_to_max=second,
    )


# ---------------------------------------------------------------------------
# Local neighborhood census


def empirical_tv(a: Counter, b: Counter) -> float:
    """Total variation between two empirical distributions given as counts."""
    ta = sum(a.values())
    tb = sum(b.values())
    if ta == 0 or tb == 0:
        raise StatsError("empirical TV needs nonempty samples")
    keys = set(a) | set(b)
    return 0.5 * sum(abs(a.get(k, 0) / ta - b.get(k, 0) / tb) for k in keys)


@dataclass(frozen=True)
class NeighborhoodCensusReport:
    """Ball-code distributions at a uniform vertex, across sizes."""

    radius: int
    sizes: Tuple[int, ...]
    samples: int
    censuses: Tuple[Dict[Tuple[int, ...], int], ...]
    tv_matrix: np.ndarray


def neighborhood_census_report(
    w: WeightSequence, radius: int, sizes: Sequence[int], samples: int, rng
) -> NeighborhoodCensusReport:
    from .trees import PlantedTree

    gen = as_generator(rng)
    censuses = []
    for n in sizes:
        counter: Counter = Counter()
        for block in sample_unrooted_approx_codes(w, n, samples, gen, chunk=256):
            vertices = gen.integers(0, n, size=block.shape[0])
            for row, v in zip(block, vertices):
                u = UnrootedPlaneTree.from_planted(PlantedTree(tuple(int(c) for c in row)))
                counter[ball_code(u, int(v), radius)] += 1
        censuses.append(counter)
    k = len(sizes)
    tv = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            tv[i, j] = tv[j, i] = empirical_tv(censuses[i], censuses[j])
    return NeighborhoodCensusReport(
        radius=radius,
        sizes=tuple(int(s) for s in sizes),
        samples=samples,
        censuses=tuple(dict(c) for c in censuses),
        tv_matrix=tv,
    )
