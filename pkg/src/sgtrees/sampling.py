"""Random generation of weighted plane trees.

Size-conditioned planted trees are produced as conditioned Galton-Watson
trees: draw n offspring values conditioned on total n-1, then rotate the
vector to the unique Lukasiewicz point (the cycle construction: start right
after the first minimum of the partial sums of ``c_i - 1``).  Four exchanges
produce the conditioned vector, chosen automatically:

* geometric offspring: the conditioned vector is uniform over compositions
  of n-1 into n parts, sampled directly by stars and bars, O(n);
* two-point support {0, k}: uniform placement of the (n-1)/k heavy entries;
* subcritical with regularly varying tails: a big-jump proposal that plants
  the one macroscopic entry explicitly (see ``_big_jump_batch``); the
  residual event "no entry exceeds the threshold" has negligible mass and is
  excluded (documented bound in that function);
* otherwise plain batched rejection on the total, with a retry budget.

Unrooted samplers: ``sample_unrooted_approx`` joins a size-split pair of
conditioned planted trees root to root and forgets the root;
``sample_unrooted_exact`` additionally realizes the symmetry decomposition
exactly, mixing three branches with exact masses (identity part via the
split, vertex-centered rotations, edge-centered reflections).

Determinism: every sampler consumes a ``numpy`` Generator derived from an
:class:`RngStream`; identical (seed, stream_id, call sequence) yields
identical output on every platform numpy supports.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, Optional, Tuple

import numpy as np

from .trees import PlantedTree, UnrootedPlaneTree
from .weights import (
    OffspringDistribution,
    WeightError,
    WeightSequence,
    sampling_offspring,
)

__all__ = [
    "SamplingError",
    "RetryBudgetError",
    "RngStream",
    "as_generator",
    "rotate_to_code",
    "sample_conditioned_gw",
    "sample_conditioned_gw_batch",
    "sample_planted",
    "sample_pair_split",
    "sample_unrooted_approx",
    "sample_unrooted_approx_codes",
    "sample_unrooted_exact",
    "sample_unrooted_exact_counts",
    "smaller_split_component_counts",
    "split_table",
    "boltzmann_planted_law",
    "SPLIT_EXACT_CAP",
]

SPLIT_EXACT_CAP = 512
_BIG_JUMP_MIN_DEFICIT = 30.0
_MAX_BATCH_CELLS = 1 << 24


class SamplingError(RuntimeError):
    """A sampler precondition fails or a size is inadmissible."""


class RetryBudgetError(SamplingError):
    """Rejection exhausted its proposal budget; carries the achieved rate."""

    def __init__(self, message: str, proposals: int, accepted: int):
        super().__init__(message)
        self.proposals = proposals
        self.accepted = accepted
        self.achieved_rate = accepted / proposals if proposals else 0.0


@dataclass(frozen=True)
class RngStream:
    """A named deterministic randomness source (64-bit seed plus stream id)."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        return np.random.default_rng(ss)


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    raise SamplingError(f"expected an RngStream or numpy Generator, got {type(rng).__name__}")


def _categorical(gen: np.random.Generator, cum: np.ndarray, size: int) -> np.ndarray:
    return np.searchsorted(cum, gen.random(size), side="right")


def _cumulative(probs: np.ndarray) -> np.ndarray:
    total = probs.sum()
    if not (total > 0):
        raise SamplingError("invariant violated: probability table has zero mass")
    cum = np.cumsum(probs / total)
    cum[-1] = 1.0
    return cum


# ---------------------------------------------------------------------------
# Cycle rotation


def rotate_to_code(values: np.ndarray) -> np.ndarray:
    """Rotate an offspring vector summing to n-1 to its Lukasiewicz point."""
    vals = np.asarray(values, dtype=np.int64)
    return _rotate_batch(vals[None, :])[0]


def _rotate_batch(vals: np.ndarray) -> np.ndarray:
    walk = np.cumsum(vals - 1, axis=1)
    mins = walk.min(axis=1, keepdims=True)
    first_min = np.argmax(walk == mins, axis=1)
    n = vals.shape[1]
    start = (first_min + 1) % n
    idx = (start[:, None] + np.arange(n)[None, :]) % n
    return np.take_along_axis(vals, idx, axis=1)


# ---------------------------------------------------------------------------
# Conditioned offspring vectors


def _support_pattern(w: WeightSequence):
    if w.family == "geometric" and w.truncate is None:
        return ("geometric",)
    top = w.support_max()
    if top is not None:
        positive = [k for k in range(1, top + 1) if w.base_omega(k) > 0]
        if len(positive) == 1:
            return ("two_point", positive[0])
    return ("general",)


def _feasible(w: WeightSequence, n: int) -> bool:
    """Is there any planted tree of size n, i.e. n-1 a sum of support values?"""
    if n == 1:
        return True
    top = w.support_max()
    if top is None:
        return n >= 1  # full support contains 1
    positive = [k for k in range(1, top + 1) if w.base_omega(k) > 0]
    if not positive:
        return False
    target = n - 1
    reachable = np.zeros(target + 1, dtype=bool)
    reachable[0] = True
    for s in range(1, target + 1):
        for k in positive:
            if k <= s and reachable[s - k]:
                reachable[s] = True
                break
    return bool(reachable[target])


def _compositions_uniform(n: int, count: int, gen: np.random.Generator) -> np.ndarray:
    """Uniform compositions of n-1 into n parts via sorted random dividers."""
    m = n - 1
    slots = 2 * n - 2
    out = np.empty((count, n), dtype=np.int64)
    rows = max(1, min(count, _MAX_BATCH_CELLS // max(slots, 1)))
    done = 0
    while done < count:
        b = min(rows, count - done)
        u = gen.random((b, slots))
        part = np.argpartition(u, m - 1, axis=1)[:, :m]
        part.sort(axis=1)
        ext = np.empty((b, m + 2), dtype=np.int64)
        ext[:, 0] = -1
        ext[:, 1:-1] = part
        ext[:, -1] = slots
        out[done : done + b] = np.diff(ext, axis=1) - 1
        done += b
    return out


def _two_point_batch(n: int, k: int, count: int, gen: np.random.Generator) -> np.ndarray:
    if (n - 1) % k != 0:
        raise SamplingError(f"inadmissible size: n - 1 = {n - 1} is not a multiple of the arity {k}")
    j = (n - 1) // k
    out = np.zeros((count, n), dtype=np.int64)
    rows = max(1, min(count, _MAX_BATCH_CELLS // n))
    done = 0
    while done < count:
        b = min(rows, count - done)
        u = gen.random((b, n))
        idx = np.argpartition(u, j - 1, axis=1)[:, :j]
        block = np.zeros((b, n), dtype=np.int64)
        np.put_along_axis(block, idx, k, axis=1)
        out[done : done + b] = block
        done += b
    return out


def _default_budget(n: int, count: int) -> int:
    return max(1_000_000, 500 * count * (int(math.sqrt(n)) + 1))


def _rejection_batch(
    xi: OffspringDistribution, n: int, count: int, gen: np.random.Generator, budget: int
) -> np.ndarray:
    # Conditioning forces every entry <= n-1, so capping the table there and
    # renormalizing leaves the conditioned law unchanged.
    pi = xi.pi_array(n - 1)
    cum = _cumulative(pi)
    target = n - 1
    rows = max(1, min(max(count, 4096), _MAX_BATCH_CELLS // n))
    collected = []
    have = 0
    proposals = 0
    while have < count:
        if proposals >= budget:
            raise RetryBudgetError(
                f"retry budget exhausted after {proposals} proposals "
                f"({have}/{count} accepted; acceptance rate {have / proposals:.3g})",
                proposals,
                have,
            )
        b = min(rows, budget - proposals)
        draws = _categorical(gen, cum, b * n).reshape(b, n)
        good = draws[draws.sum(axis=1) == target]
        proposals += b
        if good.shape[0]:
            collected.append(good)
            have += good.shape[0]
    return np.concatenate(collected, axis=0)[:count]


def _big_jump_batch(
    xi: OffspringDistribution, n: int, count: int, gen: np.random.Generator, budget: int
) -> np.ndarray:
    """Conditioned offspring vectors for heavy-tailed subcritical laws.

    Proposal: draw n-1 entries iid, plant ``v = (n-1) - sum`` at the last
    coordinate, require ``v >= K0``, accept with probability ``pi_v / pi_K0``
    (the tail is monotone), then thin by one over the number of entries
    >= K0.  Rotation classes are aperiodic, so this reproduces the
    conditioned law restricted to {some entry >= K0}; the excluded residual
    needs ceil((1-mu)(n-1)/K0) >= 4 independent moderate entries and its
    mass is O((n pi_K0)^3), far below Monte Carlo resolution at the sizes
    where this path activates.
    """
    s = n - 1
    pi = xi.pi_array(s)
    pi = pi / pi.sum()
    mu = float(xi.mu)
    K0 = max(2, int(math.ceil(0.3 * (1.0 - mu) * s)))
    if K0 >= s or pi[K0] <= 0 or np.any(np.diff(pi[K0:]) > 1e-18):
        return _rejection_batch(xi, n, count, gen, budget)
    cum = _cumulative(pi)
    piK0 = pi[K0]
    rows = max(1, min(max(count * 8, 1024), _MAX_BATCH_CELLS // n))
    collected = []
    have = 0
    proposals = 0
    while have < count:
        if proposals >= budget:
            raise RetryBudgetError(
                f"retry budget exhausted after {proposals} proposals "
                f"({have}/{count} accepted)",
                proposals,
                have,
            )
        b = min(rows, budget - proposals)
        draws = _categorical(gen, cum, b * (n - 1)).reshape(b, n - 1)
        v = s - draws.sum(axis=1)
        ok = v >= K0
        v_safe = np.where(ok, v, K0)
        u1 = gen.random(b) * piK0 <= pi[v_safe]
        nbig = (draws >= K0).sum(axis=1) + 1
        u2 = gen.random(b) * nbig <= 1.0
        accept = ok & u1 & u2
        proposals += b
        if accept.any():
            good = np.concatenate([draws[accept], v[accept, None]], axis=1)
            collected.append(good)
            have += good.shape[0]
    return np.concatenate(collected, axis=0)[:count]


def sample_conditioned_gw_batch(
    xi: OffspringDistribution,
    n: int,
    count: int,
    rng,
    retry_budget: Optional[int] = None,
) -> np.ndarray:
    """``count`` conditioned Galton-Watson codes of size n, one per row."""
    if n < 1:
        raise SamplingError("invariant violated: tree size must be >= 1")
    gen = as_generator(rng)
    if count == 0:
        return np.zeros((0, n), dtype=np.int64)
    if n == 1:
        return np.zeros((count, 1), dtype=np.int64)
    w = xi.weights
    if (n - 1) % xi.span != 0 or not _feasible(w, n):
        raise SamplingError(
            f"inadmissible size: no planted tree of size {n} exists under {w.describe()}"
        )
    budget = retry_budget if retry_budget is not None else _default_budget(n, count)
    pattern = _support_pattern(w)
    if pattern[0] == "geometric":
        vectors = _compositions_uniform(n, count, gen)
    elif pattern[0] == "two_point":
        vectors = _two_point_batch(n, pattern[1], count, gen)
    elif (
        xi.criticality == "subcritical"
        and w.family == "power"
        and w.truncate is None
        and (1.0 - float(xi.mu)) * (n - 1) >= _BIG_JUMP_MIN_DEFICIT
    ):
        vectors = _big_jump_batch(xi, n, count, gen, budget)
    else:
        vectors = _rejection_batch(xi, n, count, gen, budget)
    return _rotate_batch(vectors)


def sample_conditioned_gw(
    xi: OffspringDistribution, n: int, rng, retry_budget: Optional[int] = None
) -> PlantedTree:
    """One size-conditioned Galton-Watson tree (n = 1 mod span required)."""
    code = sample_conditioned_gw_batch(xi, n, 1, rng, retry_budget)[0]
    return PlantedTree(tuple(int(c) for c in code))


def sample_planted(w: WeightSequence, n: int, rng) -> PlantedTree:
    """One conditioned planted tree of size n under the weights ``w``."""
    return sample_conditioned_gw(sampling_offspring(w), n, rng)


# ---------------------------------------------------------------------------
# Split sampling


@lru_cache(maxsize=64)
def _split_table_cached(w: WeightSequence, n: int) -> Tuple[np.ndarray, np.ndarray]:
    from .series import planted_series, planted_series_float

    if n <= SPLIT_EXACT_CAP:
        t = planted_series(w, 1, n).coeffs
        masses = [t[a] * t[n - a] for a in range(n + 1)]
        total = sum(masses[1:n], Fraction(0))
        if total == 0:
            raise SamplingError(f"inadmissible size: no split pair exists at size {n}")
        probs = np.array([float(m / total) for m in masses])
    else:
        t = planted_series_float(w, n)
        probs = np.zeros(n + 1)
        probs[1:n] = t[1:n] * t[n - 1 : 0 : -1]
        total = probs.sum()
        if not (total > 0):
            raise SamplingError(f"inadmissible size: no split pair exists at size {n}")
        probs /= total
    return probs, _cumulative(probs)


def split_table(w: WeightSequence, n: int) -> np.ndarray:
    """P(first split component has a vertices), index a (exact under the cap)."""
    if n < 2:
        raise SamplingError("invariant violated: splitting needs n >= 2")
    return _split_table_cached(w, n)[0].copy()


def sample_pair_split(w: WeightSequence, n: int, rng) -> Tuple[PlantedTree, PlantedTree]:
    """A size-split pair: sizes with probability ~ t_a t_{n-a}, independent trees."""
    if n < 2:
        raise SamplingError("invariant violated: splitting needs n >= 2")
    gen = as_generator(rng)
    _, cum = _split_table_cached(w, n)
    a = int(_categorical(gen, cum, 1)[0])
    xi = sampling_offspring(w)
    t1 = sample_conditioned_gw(xi, a, gen)
    t2 = sample_conditioned_gw(xi, n - a, gen)
    return t1, t2


def _join_codes(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    b = left.shape[0]
    n = left.shape[1] + right.shape[1]
    out = np.empty((b, n), dtype=np.int64)
    out[:, 0] = right[:, 0] + 1
    out[:, 1 : 1 + left.shape[1]] = left
    out[:, 1 + left.shape[1] :] = right[:, 1:]
    return out


def sample_unrooted_approx(w: WeightSequence, n: int, rng) -> UnrootedPlaneTree:
    """Join a split pair root to root and forget the root."""
    from .trees import join_at_root

    t1, t2 = sample_pair_split(w, n, rng)
    return UnrootedPlaneTree.from_planted(join_at_root(t1, t2))


def sample_unrooted_approx_codes(
    w: WeightSequence, n: int, count: int, rng, chunk: int = 4096
) -> Iterator[np.ndarray]:
    """Batched out-degree words of approximate unrooted samples.

    Yields (b, n) int64 matrices; the encoded graph (not the rooting) is the
    sample, so degree and distance statistics read off the rows directly.
    """
    gen = as_generator(rng)
    _, cum = _split_table_cached(w, n)
    xi = sampling_offspring(w)
    done = 0
    chunk = max(1, min(chunk, max(1, _MAX_BATCH_CELLS // max(n, 1))))
    while done < count:
        b = min(chunk, count - done)
        sizes = _categorical(gen, cum, b)
        out = np.empty((b, n), dtype=np.int64)
        for a in np.unique(sizes):
            sel = np.flatnonzero(sizes == a)
            left = sample_conditioned_gw_batch(xi, int(a), sel.size, gen)
            right = sample_conditioned_gw_batch(xi, n - int(a), sel.size, gen)
            out[sel] = _join_codes(left, right)
        done += b
        yield out


def smaller_split_component_counts(
    w: WeightSequence, n: int, count: int, rng, max_size: int = 12
) -> Tuple[Counter, int]:
    """Empirical law of the smaller split component (ties take the first).

    Returns (Counter over code tuples of components with size <= max_size,
    number of oversize draws).  Only the smaller side is materialized.
    """
    gen = as_generator(rng)
    _, cum = _split_table_cached(w, n)
    xi = sampling_offspring(w)
    sizes = _categorical(gen, cum, count)
    smaller = np.minimum(sizes, n - sizes)
    keep = smaller <= max_size
    oversize = int(count - keep.sum())
    counts: Counter = Counter()
    kept = smaller[keep]
    for m in np.unique(kept):
        cnt = int((kept == m).sum())
        codes = sample_conditioned_gw_batch(xi, int(m), cnt, gen)
        for row in codes:
            counts[tuple(int(c) for c in row)] += 1
    return counts, oversize


def boltzmann_planted_law(w: WeightSequence, max_size: int) -> Dict[Tuple[int, ...], Fraction]:
    """The Boltzmann law at the singular point, restricted to |t| <= max_size.

    Masses ``weight(t) rho^{|t|} / T(rho)`` with ``rho = tau/Phi(tau)`` and
    ``T(rho) = tau``; exact rationals when tau is (total mass below one:
    the remainder sits on larger trees).
    """
    from .enumeration import PLANTED_CAP, _planted_codes
    from .trees import tree_weight
    from .weights import offspring_distribution

    if max_size > PLANTED_CAP:
        raise SamplingError(f"Boltzmann restriction needs max_size <= {PLANTED_CAP}")
    xi = offspring_distribution(w)
    if not xi.exact:
        raise SamplingError("Boltzmann reference law needs an exact tilt point")
    rho = xi.tau / xi.phi_tau
    out: Dict[Tuple[int, ...], Fraction] = {}
    for m in range(1, max_size + 1):
        scale = rho ** m / xi.tau
        for code in _planted_codes(m):
            wt = tree_weight(PlantedTree(code), w)
            if wt != 0:
                out[code] = wt * scale
    return out


# ---------------------------------------------------------------------------
# Exact unrooted sampling


@lru_cache(maxsize=32)
def _exact_tables(w: WeightSequence, n: int):
    from .series import planted_series
    from .weights import _totient

    T = planted_series(w, 1, n).coeffs
    L = sum((T[a] * T[n - a] for a in range(1, n)), Fraction(0)) / (2 * (n - 1))
    grid = []
    powers: Dict[int, list] = {}
    for d in range(2, n):
        if (n - 1) % d != 0:
            continue
        M = (n - 1) // d
        A = planted_series(w, d, M).coeffs
        pw = [None] * (M + 1)
        pw[0] = tuple([Fraction(1)] + [Fraction(0)] * M)
        for r in range(1, M + 1):
            prev = pw[r - 1]
            nxt = [Fraction(0)] * (M + 1)
            for i, ai in enumerate(A):
                if ai == 0:
                    continue
                for jj in range(M + 1 - i):
                    if prev[jj] != 0:
                        nxt[i + jj] += ai * prev[jj]
            pw[r] = tuple(nxt)
        powers[d] = pw
        rot = Fraction(_totient(d), d)
        for j in range(1, M + 1):
            omj = w.omega(j * d - 1)
            if omj == 0 or pw[j][M] == 0:
                continue
            grid.append((d, j, rot * omj / j * pw[j][M]))
    Re = Fraction(0)
    if n % 2 == 0:
        Re = planted_series(w, 2, n // 2).coeffs[n // 2] / 2
    Rv = sum((mass for _, _, mass in grid), Fraction(0))
    Z = L + Rv + Re
    if Z == 0:
        raise SamplingError(f"inadmissible size: no unrooted tree of size {n} under {w.describe()}")
    branch_probs = np.array([float(L / Z), float(Rv / Z), float(Re / Z)])
    branch_cum = _cumulative(branch_probs) if branch_probs.sum() > 0 else None
    grid_cum = None
    if grid:
        masses = np.array([float(m / Rv) for _, _, m in grid])
        grid_cum = _cumulative(masses)
    return {
        "T": T,
        "L": L,
        "Rv": Rv,
        "Re": Re,
        "Z": Z,
        "grid": tuple(grid),
        "powers": powers,
        "branch_cum": branch_cum,
        "grid_cum": grid_cum,
    }


def _component_xi(w: WeightSequence, d: int, cap: int) -> OffspringDistribution:
    return sampling_offspring(w.pow_weights(d, cap=max(1, cap)))


def _ordered_compositions(A, M: int, j: int):
    """All ordered (m_1..m_j), m_i >= 1, sum M, with positive part weights."""
    out = []

    def rec(prefix, rest, parts):
        if parts == 1:
            if rest >= 1 and A[rest] != 0:
                out.append(tuple(prefix) + (rest,))
            return
        for m in range(1, rest - parts + 2):
            if A[m] != 0:
                rec(prefix + [m], rest - m, parts - 1)

    rec([], M, j)
    return out


def _vertex_branch_codes(w, n, d, j, count, gen, tables) -> np.ndarray:
    M = (n - 1) // d
    A = [float(x) for x in tables["powers"][d][1]]
    comps = _ordered_compositions(A, M, j)
    weights = np.array([math.prod(A[m] for m in comp) for comp in comps])
    cum = _cumulative(weights)
    pick = np.asarray(_categorical(gen, cum, count))
    needed = {m for ci in np.unique(pick) for m in comps[ci] if m >= 2}
    xi_d = _component_xi(w, d, max(needed) - 1) if needed else None
    out = np.empty((count, n), dtype=np.int64)
    for ci in np.unique(pick):
        sel = np.flatnonzero(pick == ci)
        comp = comps[ci]
        blocks = [sample_conditioned_gw_batch(xi_d, m, sel.size, gen) for m in comp]
        row = np.empty((sel.size, n), dtype=np.int64)
        row[:, 0] = j * d
        pos = 1
        for _ in range(d):
            for block in blocks:
                row[:, pos : pos + block.shape[1]] = block
                pos += block.shape[1]
        out[sel] = row
    return out


def sample_unrooted_exact(w: WeightSequence, n: int, rng) -> UnrootedPlaneTree:
    """One unrooted plane tree with probability ~ prod_v omega_{deg(v)-1}.

    Mixes three branches with exact masses: the identity part samples a
    split pair and joins it; the vertex part assembles j branches repeated d
    times around a center of degree jd; the edge part mirrors one planted
    tree with squared weights across a middle edge.
    """
    code = _exact_codes_batch(w, n, 1, as_generator(rng))[0]
    return UnrootedPlaneTree.from_planted(PlantedTree(tuple(int(c) for c in code)))


def _exact_codes_batch(w: WeightSequence, n: int, count: int, gen) -> np.ndarray:
    if n < 2:
        raise SamplingError("invariant violated: unrooted sampling needs n >= 2")
    tables = _exact_tables(w, n)
    xi = sampling_offspring(w)
    branches = _categorical(gen, tables["branch_cum"], count)
    out = np.empty((count, n), dtype=np.int64)
    sel_id = np.flatnonzero(branches == 0)
    if sel_id.size:
        _, cum = _split_table_cached(w, n)
        sizes = _categorical(gen, cum, sel_id.size)
        for a in np.unique(sizes):
            rows = np.flatnonzero(sizes == a)
            left = sample_conditioned_gw_batch(xi, int(a), rows.size, gen)
            right = sample_conditioned_gw_batch(xi, n - int(a), rows.size, gen)
            out[sel_id[rows]] = _join_codes(left, right)
    sel_v = np.flatnonzero(branches == 1)
    if sel_v.size:
        grid = tables["grid"]
        picks = _categorical(gen, tables["grid_cum"], sel_v.size)
        for gi in np.unique(picks):
            rows = np.flatnonzero(picks == gi)
            d, j, _ = grid[gi]
            out[sel_v[rows]] = _vertex_branch_codes(w, n, d, j, rows.size, gen, tables)
    sel_e = np.flatnonzero(branches == 2)
    if sel_e.size:
        if n == 2:
            halves = np.zeros((sel_e.size, 1), dtype=np.int64)
        else:
            xi2 = _component_xi(w, 2, n // 2 - 1)
            halves = sample_conditioned_gw_batch(xi2, n // 2, sel_e.size, gen)
        out[sel_e] = _join_codes(halves, halves)
    return out


@lru_cache(maxsize=16)
def _canonical_key_map(n: int) -> Dict[int, int]:
    from .enumeration import _planted_codes

    base_powers = [(n + 1) ** i for i in range(n)]

    def key_of(code) -> int:
        return sum(c * base_powers[i] for i, c in enumerate(code))

    mapping: Dict[int, int] = {}
    canon_cache: Dict[Tuple[int, ...], int] = {}
    for code in _planted_codes(n):
        u = UnrootedPlaneTree.from_planted(PlantedTree(code))
        canon = u.canonical_code
        if canon not in canon_cache:
            canon_cache[canon] = key_of(canon)
        mapping[key_of(code)] = canon_cache[canon]
    return mapping


def code_key(code: Tuple[int, ...], n: int) -> int:
    """Base-(n+1) integer key of an out-degree word (for counting)."""
    key = 0
    for c in reversed(code):
        key = key * (n + 1) + c
    return key


def sample_unrooted_exact_counts(w: WeightSequence, n: int, count: int, rng) -> Dict[int, int]:
    """Empirical counts of ``count`` exact draws, keyed by canonical-code key.

    Batched for chi-square calibration runs; needs n small enough to
    enumerate all planted codes (the canonicalization table).
    """
    from .enumeration import UNROOTED_CAP

    if n > UNROOTED_CAP:
        raise SamplingError(f"batched exact counting needs n <= {UNROOTED_CAP}")
    gen = as_generator(rng)
    mapping = _canonical_key_map(n)
    base_powers = np.array([(n + 1) ** i for i in range(n)], dtype=np.int64)
    totals: Dict[int, int] = {}
    chunk = max(1, min(count, 1 << 18))
    done = 0
    while done < count:
        b = min(chunk, count - done)
        codes = _exact_codes_batch(w, n, b, gen)
        keys = codes @ base_powers
        uniq, cnt = np.unique(keys, return_counts=True)
        for k, c in zip(uniq.tolist(), cnt.tolist()):
            ck = mapping[k]
            totals[ck] = totals.get(ck, 0) + int(c)
        done += b
    return totals
