"""Exhaustive enumeration and exact laws at desk scale.

These routines are deliberately independent of the series module: they walk
all Lukasiewicz words of a given length, so they can certify the coefficient
engines and the samplers atom by atom.  Planted enumeration is capped at
n = 14 (Catalan(13) = 742900 words) and unrooted enumeration at n = 10.

``exact_law_unrooted`` is the target law: each unrooted plane tree U with
probability proportional to ``prod_v omega_{deg(v)-1}``.  The comparison law
``exact_law_approx`` is produced by the root split: a planted tree carrying
the degree weight splits into the fringe subtree at the first child and the
pruned remainder, two independent conditioned planted trees; joining them
back and forgetting the root gives the approximating unrooted law.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Tuple

from .trees import PlantedTree, UnrootedPlaneTree, degree_weight, join_at_root, split_at_root, tree_weight
from .weights import WeightSequence, WeightError

__all__ = [
    "EnumerationError",
    "ExactLaw",
    "enumerate_planted",
    "enumerate_unrooted",
    "exact_law_planted",
    "exact_law_unrooted",
    "exact_law_approx",
    "split_size_law",
    "split_independence_report",
    "tv_distance",
    "PLANTED_CAP",
    "UNROOTED_CAP",
]

PLANTED_CAP = 14
UNROOTED_CAP = 10


class EnumerationError(ValueError):
    """An enumeration request exceeds the exhaustive caps or is empty."""


@dataclass(frozen=True)
class ExactLaw:
    """A finite exact law: tree codes mapped to rational probabilities.

    Keys are out-degree words (canonical codes for unrooted laws); the
    probabilities are positive and sum to one exactly.
    """

    support: Tuple[Tuple[int, ...], ...]
    probs: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.support) != len(set(self.support)):
            raise EnumerationError("invariant violated: duplicate atoms in exact law")
        if any(p <= 0 for p in self.probs):
            raise EnumerationError("invariant violated: exact laws keep only positive atoms")
        if sum(self.probs, Fraction(0)) != 1:
            raise EnumerationError("invariant violated: exact law probabilities must sum to 1")

    def as_dict(self) -> Dict[Tuple[int, ...], Fraction]:
        return dict(zip(self.support, self.probs))


def _law_from_weights(items) -> ExactLaw:
    items = [(key, wt) for key, wt in items if wt != 0]
    if not items:
        raise EnumerationError("invariant violated: total weight is zero (inadmissible size)")
    total = sum(wt for _, wt in items)
    items.sort(key=lambda kv: kv[0])
    return ExactLaw(
        support=tuple(key for key, _ in items),
        probs=tuple(wt / total for _, wt in items),
    )


@lru_cache(maxsize=32)
def _planted_codes(n: int) -> Tuple[Tuple[int, ...], ...]:
    out = []
    code = [0] * n

    def rec(pos: int, remaining: int, open_slots: int):
        if remaining == 0:
            if open_slots == 0:
                out.append(tuple(code))
            return
        if open_slots == 0 or open_slots > remaining:
            return
        # each open slot still needs at least one vertex
        for c in range(0, remaining - open_slots + 1):
            new_open = open_slots - 1 + c
            if new_open == 0 and remaining > 1:
                continue
            code[pos] = c
            rec(pos + 1, remaining - 1, new_open)

    rec(0, n, 1)
    return tuple(out)


def enumerate_planted(n: int):
    """All planted plane trees with n vertices (n <= 14)."""
    if not (1 <= n <= PLANTED_CAP):
        raise EnumerationError(f"invariant violated: planted enumeration needs 1 <= n <= {PLANTED_CAP}")
    return [PlantedTree(code) for code in _planted_codes(n)]


@lru_cache(maxsize=16)
def _unrooted_codes(n: int) -> Tuple[Tuple[int, ...], ...]:
    seen = set()
    for code in _planted_codes(n):
        u = UnrootedPlaneTree.from_planted(PlantedTree(code))
        seen.add(u.canonical_code)
    return tuple(sorted(seen))


def enumerate_unrooted(n: int):
    """All unrooted plane trees with n vertices (2 <= n <= 10)."""
    if not (2 <= n <= UNROOTED_CAP):
        raise EnumerationError(f"invariant violated: unrooted enumeration needs 2 <= n <= {UNROOTED_CAP}")
    return [UnrootedPlaneTree.from_planted(PlantedTree(code)) for code in _unrooted_codes(n)]


def exact_law_planted(w: WeightSequence, n: int) -> ExactLaw:
    """The conditioned planted law at size n, atoms keyed by code."""
    if not (1 <= n <= PLANTED_CAP):
        raise EnumerationError(f"invariant violated: planted laws need 1 <= n <= {PLANTED_CAP}")
    return _law_from_weights(
        (code, tree_weight(PlantedTree(code), w)) for code in _planted_codes(n)
    )


def exact_law_unrooted(w: WeightSequence, n: int) -> ExactLaw:
    """The weighted unrooted law at size n, atoms keyed by canonical code."""
    if not (2 <= n <= UNROOTED_CAP):
        raise EnumerationError(f"invariant violated: unrooted laws need 2 <= n <= {UNROOTED_CAP}")
    items = []
    for code in _unrooted_codes(n):
        u = UnrootedPlaneTree.from_planted(PlantedTree(code))
        items.append((code, tree_weight(u, w)))
    return _law_from_weights(items)


def exact_law_approx(w: WeightSequence, n: int) -> ExactLaw:
    """The split-and-join approximation to the unrooted law at size n.

    Summing ``weight(t1) weight(t2)`` over ordered pairs joined root to root
    realizes the mixture: split sizes with probability proportional to
    ``t_a t_{n-a}``, then two independent conditioned planted trees.
    """
    if not (2 <= n <= UNROOTED_CAP):
        raise EnumerationError(f"invariant violated: approximate laws need 2 <= n <= {UNROOTED_CAP}")
    acc: Dict[Tuple[int, ...], Fraction] = {}
    for a in range(1, n):
        for c1 in _planted_codes(a):
            w1 = tree_weight(PlantedTree(c1), w)
            if w1 == 0:
                continue
            for c2 in _planted_codes(n - a):
                w2 = tree_weight(PlantedTree(c2), w)
                if w2 == 0:
                    continue
                joined = join_at_root(PlantedTree(c1), PlantedTree(c2))
                key = UnrootedPlaneTree.from_planted(joined).canonical_code
                acc[key] = acc.get(key, Fraction(0)) + w1 * w2
    return _law_from_weights(acc.items())


def split_size_law(w: WeightSequence, n: int) -> Dict[int, Fraction]:
    """Exact law of the first-component size under the root split."""
    from .series import planted_series

    t = planted_series(w, 1, n).coeffs
    weights = {a: t[a] * t[n - a] for a in range(1, n) if t[a] != 0 and t[n - a] != 0}
    total = sum(weights.values(), Fraction(0))
    if total == 0:
        raise WeightError(f"invariant violated: no planted pair exists at size {n}")
    return {a: v / total for a, v in weights.items()}


@dataclass(frozen=True)
class SplitIndependenceReport:
    n: int
    sizes_checked: Tuple[int, ...]
    atoms_checked: int
    max_discrepancy: Fraction
    exact: bool


def split_independence_report(w: WeightSequence, n: int) -> SplitIndependenceReport:
    """Certify that splitting a degree-weighted planted tree yields,
    conditionally on the component sizes, two independent conditioned trees.

    Every atom of the joint law is compared exactly against the product law.
    """
    if not (2 <= n <= UNROOTED_CAP + 4):
        raise EnumerationError("invariant violated: split independence check is exhaustive; keep n small")
    joint: Dict[int, Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], Fraction]] = {}
    for code in _planted_codes(n):
        t = PlantedTree(code)
        wt = degree_weight(t, w)
        if wt == 0:
            continue
        t1, t2 = split_at_root(t)
        bucket = joint.setdefault(t1.size, {})
        key = (t1.code, t2.code)
        bucket[key] = bucket.get(key, Fraction(0)) + wt
    if not joint:
        raise EnumerationError(f"invariant violated: total weight is zero at size {n}")
    max_disc = Fraction(0)
    atoms = 0
    for a, bucket in sorted(joint.items()):
        total = sum(bucket.values(), Fraction(0))
        law1 = exact_law_planted(w, a).as_dict()
        law2 = exact_law_planted(w, n - a).as_dict()
        seen = set()
        for (c1, c2), wt in bucket.items():
            seen.add((c1, c2))
            disc = abs(wt / total - law1[c1] * law2[c2])
            atoms += 1
            if disc > max_disc:
                max_disc = disc
        # product atoms missing from the joint law would be a violation too
        for c1, p1 in law1.items():
            for c2, p2 in law2.items():
                if (c1, c2) not in seen:
                    disc = p1 * p2
                    atoms += 1
                    if disc > max_disc:
                        max_disc = disc
    return SplitIndependenceReport(
        n=n,
        sizes_checked=tuple(sorted(joint)),
        atoms_checked=atoms,
        max_discrepancy=max_disc,
        exact=(max_disc == 0),
    )


def tv_distance(p: ExactLaw, q: ExactLaw) -> Fraction:
    """Exact total variation distance between two finite laws."""
    dp = p.as_dict()
    dq = q.as_dict()
    keys = set(dp) | set(dq)
    total = sum((abs(dp.get(k, Fraction(0)) - dq.get(k, Fraction(0))) for k in keys), Fraction(0))
    return total / 2
