"""Command line interface.

``sgtrees`` exposes the library over five subcommands:

* ``series``   exact counting series coefficients as CSV rationals;
* ``count``    one exact coefficient (planted or unrooted) for a size;
* ``sample``   random trees in wire format or NDJSON summaries;
* ``stats``    per-sample summary CSV plus an aggregate JSON line;
* ``verify``   built-in consistency checks against the exhaustive oracles.

Weights come from a JSON spec file (``--weights``); without one the
all-ones sequence is used.  Sampling is deterministic in (seed, stream):
work is cut into fixed blocks of 1024 draws, block b consuming the
dedicated stream ``stream + b``, so output bytes do not depend on
``--threads``.

Exit codes: 0 success, 1 failed verification, 2 usage errors, 3 violated
library invariants (the message names the invariant).
"""

from __future__ import annotations

import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

import click

from .enumeration import (
    EnumerationError,
    enumerate_planted,
    enumerate_unrooted,
    exact_law_approx,
    exact_law_unrooted,
    split_independence_report,
    tv_distance,
)
from .sampling import RngStream, SamplingError
from .series import SeriesError, planted_series, unrooted_series
from .stats import StatsError, measure
from .trees import PlantedTree, TreeError, UnrootedPlaneTree, join_at_root, tree_weight
from .weights import WeightError, WeightSequence, load_weights

_BLOCK = 1024
_LIBRARY_ERRORS = (WeightError, TreeError, SeriesError, EnumerationError, SamplingError, StatsError)


@dataclass
class RunConfig:
    weights: WeightSequence
    output: Optional[str]
    quiet: bool
    threads: int


def _open_output(config: RunConfig):
    if config.output:
        return open(config.output, "w")
    return sys.stdout


def _fail_invariant(exc: Exception) -> None:
    click.echo(f"invariant violation: {exc}", err=True)
    sys.exit(3)


@click.group()
@click.option("--weights", "weights_path", type=click.Path(exists=True, dir_okay=False), default=None, help="JSON weight spec; defaults to the all-ones sequence.")
@click.option("--output", type=click.Path(dir_okay=False), default=None, help="Write the main payload here instead of stdout.")
@click.option("--quiet", is_flag=True, help="Suppress informational stderr lines.")
@click.option("--threads", type=int, default=1, show_default=True, help="Worker processes for sampling; output bytes are identical for any value.")
@click.pass_context
def main(ctx, weights_path, output, quiet, threads):
    """Exact and approximate samplers, counters and checks for weighted plane trees."""
    try:
        w = load_weights(weights_path) if weights_path else WeightSequence.geometric(Fraction(1))
    except _LIBRARY_ERRORS as exc:
        _fail_invariant(exc)
    ctx.obj = RunConfig(weights=w, output=output, quiet=quiet, threads=max(1, threads))


@main.command()
@click.option("--order", type=int, required=True, help="Highest size to tabulate.")
@click.option("--label", type=click.Choice(["T", "Td", "Rv", "Re", "ZU", "L"]), default="T", show_default=True)
@click.option("--dpow", type=int, default=2, show_default=True, help="Degree power for Td (coefficientwise omega^d).")
@click.pass_obj
def series(config: RunConfig, order, label, dpow):
    """Print series coefficients as CSV: n,numerator,denominator."""
    from .series import labelled_series, symmetry_series_edge, symmetry_series_vertex

    try:
        w = config.weights
        if label == "T":
            table = planted_series(w, 1, order)
        elif label == "Td":
            table = planted_series(w, dpow, order)
        elif label == "Rv":
            table = symmetry_series_vertex(w, order)
        elif label == "Re":
            table = symmetry_series_edge(w, order)
        elif label == "L":
            table = labelled_series(w, order)
        else:
            table = unrooted_series(w, order)
        out = _open_output(config)
        try:
            out.write("n,numerator,denominator\n")
            for n, c in enumerate(table.coeffs):
                out.write(f"{n},{c.numerator},{c.denominator}\n")
        finally:
            if out is not sys.stdout:
                out.close()
    except _LIBRARY_ERRORS as exc:
        _fail_invariant(exc)


@main.command()
@click.option("--n", "size", type=int, required=True)
@click.option("--planted", is_flag=True, help="Count planted trees instead of unrooted ones.")
@click.pass_obj
def count(config: RunConfig, size, planted):
    """Print one exact coefficient as numerator/denominator."""
    try:
        if planted:
            value = planted_series(config.weights, 1, size).coeffs[size]
        else:
            value = unrooted_series(config.weights, size).coeffs[size]
        click.echo(f"{value.numerator}/{value.denominator}")
    except _LIBRARY_ERRORS as exc:
        _fail_invariant(exc)


def _sample_block_lines(args) -> List[str]:
    w, n, count, mode, seed, stream, radius = args
    from .sampling import (
        sample_pair_split,
        sample_planted,
        sample_unrooted_approx,
        sample_unrooted_exact,
    )

    gen = RngStream(seed, stream).generator()
    lines = []
    for _ in range(count):
        if mode == "planted":
            lines.append(sample_planted(w, n, gen).to_wire())
        elif mode == "pair":
            t1, t2 = sample_pair_split(w, n, gen)
            lines.append(f"{t1.to_wire()} {t2.to_wire()}")
        elif mode == "exact":
            lines.append(sample_unrooted_exact(w, n, gen).to_wire())
        else:
            lines.append(sample_unrooted_approx(w, n, gen).to_wire())
    return lines


def _sample_block_reports(args) -> List[str]:
    w, n, count, mode, seed, stream, radius = args
    from .sampling import sample_planted, sample_unrooted_approx, sample_unrooted_exact

    gen = RngStream(seed, stream).generator()
    lines = []
    for _ in range(count):
        if mode == "planted":
            u = UnrootedPlaneTree.from_planted(sample_planted(w, n, gen))
        elif mode == "exact":
            u = sample_unrooted_exact(w, n, gen)
        else:
            u = sample_unrooted_approx(w, n, gen)
        r = measure(u, ball_radius=radius)
        lines.append(
            json.dumps(
                {
                    "n": r.n,
                    "diameter": r.diameter,
                    "height_from_center": r.height_from_center,
                    "max_degree": r.max_degree,
                    "second_max_degree": r.second_max_degree,
                    "degree_hist": list(r.degree_hist),
                    "ball_code": list(r.ball_code),
                },
                separators=(",", ":"),
            )
        )
    return lines


def _run_blocks(config: RunConfig, worker, n, total, mode, seed, stream, radius) -> List[str]:
    blocks = []
    left = total
    b = 0
    while left > 0:
        take = min(_BLOCK, left)
        blocks.append((config.weights, n, take, mode, seed, stream + b, radius))
        left -= take
        b += 1
    if config.threads == 1 or len(blocks) == 1:
        results = [worker(args) for args in blocks]
    else:
        with ProcessPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(worker, blocks))
    return [line for block in results for line in block]


@main.command()
@click.option("--n", "size", type=int, required=True)
@click.option("--count", "draws", type=int, default=1, show_default=True)
@click.option("--mode", type=click.Choice(["exact", "approx", "planted", "pair"]), default="exact", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--stream", type=int, default=0, show_default=True)
@click.option("--emit", type=click.Choice(["trees", "stats"]), default="trees", show_default=True)
@click.option("--radius", type=int, default=2, show_default=True, help="Ball radius for --emit stats.")
@click.pass_obj
def sample(config: RunConfig, size, draws, mode, seed, stream, emit, radius):
    """Draw random trees; one wire line (or NDJSON summary) per draw."""
    if emit == "stats" and mode == "pair":
        raise click.UsageError("--emit stats supports tree modes, not pair")
    worker = _sample_block_lines if emit == "trees" else _sample_block_reports
    try:
        lines = _run_blocks(config, worker, size, draws, mode, seed, stream, radius)
        out = _open_output(config)
        try:
            for line in lines:
                out.write(line + "\n")
        finally:
            if out is not sys.stdout:
                out.close()
        if not config.quiet:
            click.echo(f"wrote {len(lines)} samples (mode={mode}, n={size})", err=True)
    except _LIBRARY_ERRORS as exc:
        _fail_invariant(exc)


def _stats_block(args) -> List[tuple]:
    w, n, count, mode, seed, stream, radius = args
    from .sampling import sample_unrooted_approx, sample_unrooted_exact

    gen = RngStream(seed, stream).generator()
    rows = []
    for _ in range(count):
        u = sample_unrooted_exact(w, n, gen) if mode == "exact" else sample_unrooted_approx(w, n, gen)
        r = measure(u, ball_radius=radius)
        rows.append((r.n, r.diameter, r.height_from_center, r.max_degree, r.second_max_degree))
    return rows


@main.command()
@click.option("--n", "size", type=int, required=True)
@click.option("--count", "draws", type=int, default=100, show_default=True)
@click.option("--mode", type=click.Choice(["exact", "approx"]), default="approx", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--stream", type=int, default=0, show_default=True)
@click.option("--radius", type=int, default=2, show_default=True)
@click.pass_obj
def stats(config: RunConfig, size, draws, mode, seed, stream, radius):
    """Sample trees and write per-tree summary CSV plus a JSON aggregate."""
    try:
        rows = _run_blocks(config, _stats_block, size, draws, mode, seed, stream, radius)
        out = _open_output(config)
        try:
            out.write("n,diameter,height_from_center,max_degree,second_max_degree\n")
            for row in rows:
                out.write(",".join(str(x) for x in row) + "\n")
        finally:
            if out is not sys.stdout:
                out.close()
        diam = [row[1] for row in rows]
        summary = {
            "n": size,
            "samples": len(rows),
            "mean_diameter": sum(diam) / len(rows),
            "mean_diameter_over_sqrt_n": sum(diam) / len(rows) / math.sqrt(size),
            "mean_max_degree": sum(row[3] for row in rows) / len(rows),
        }
        target = sys.stdout if config.output else sys.stderr
        if not config.quiet or config.output:
            print(json.dumps(summary, separators=(",", ":")), file=target)
    except _LIBRARY_ERRORS as exc:
        _fail_invariant(exc)


def _check_series_oracle(w: WeightSequence, n_max: int) -> dict:
    table = planted_series(w, 1, n_max)
    rows = []
    ok = True
    for n in range(1, n_max + 1):
        brute = sum((tree_weight(t, w) for t in enumerate_planted(n)), Fraction(0))
        match = brute == table.coeffs[n]
        ok = ok and match
        rows.append({"n": n, "series": str(table.coeffs[n]), "oracle": str(brute), "match": match})
    return {"check": "series-oracle", "passed": ok, "rows": rows}


def _check_unrooted_oracle(w: WeightSequence, n_max: int) -> dict:
    table = unrooted_series(w, n_max)
    rows = []
    ok = True
    for n in range(2, n_max + 1):
        brute = sum((tree_weight(u, w) for u in enumerate_unrooted(n)), Fraction(0))
        match = brute == table.coeffs[n]
        ok = ok and match
        rows.append({"n": n, "series": str(table.coeffs[n]), "oracle": str(brute), "match": match})
    return {"check": "unrooted-oracle", "passed": ok, "rows": rows}


def _check_split_independence(w: WeightSequence, n_max: int) -> dict:
    rows = []
    ok = True
    for n in w.admissible_sizes(n_max):
        rep = split_independence_report(w, n)
        ok = ok and rep.exact
        rows.append({"n": n, "exact": rep.exact, "max_discrepancy": str(rep.max_discrepancy)})
    return {"check": "split-independence", "passed": ok, "rows": rows}


def _check_tv_decay(w: WeightSequence, n_max: int) -> dict:
    rows = []
    values = []
    for n in w.admissible_sizes(n_max):
        tv = tv_distance(exact_law_unrooted(w, n), exact_law_approx(w, n))
        values.append((n, tv))
        rows.append({"n": n, "tv": str(tv), "tv_float": float(tv)})
    positive = [(n, tv) for n, tv in values if tv > 0]
    # decay is asymptotic: judge the tail window, not the small-size ramp-up
    tail = positive[-3:]
    decreasing = len(tail) >= 2 and all(b[1] < a[1] for a, b in zip(tail, tail[1:]))
    passed = bool(values) and (not positive or decreasing)
    return {
        "check": "tv-decay",
        "passed": passed,
        "tail_sizes": [n for n, _ in tail],
        "tail_decreasing": decreasing,
        "rows": rows,
    }


@main.command()
@click.option("--check", "check_name", type=click.Choice(["series-oracle", "unrooted-oracle", "split-independence", "tv-decay"]), required=True)
@click.option("--n-max", type=int, default=None, help="Largest size to verify (defaults per check).")
@click.pass_obj
def verify(config: RunConfig, check_name, n_max):
    """Run a built-in exhaustive consistency check; JSON verdict on stdout."""
    defaults = {"series-oracle": 8, "unrooted-oracle": 8, "split-independence": 7, "tv-decay": 9}
    limit = n_max if n_max is not None else defaults[check_name]
    runner = {
        "series-oracle": _check_series_oracle,
        "unrooted-oracle": _check_unrooted_oracle,
        "split-independence": _check_split_independence,
        "tv-decay": _check_tv_decay,
    }[check_name]
    try:
        result = runner(config.weights, limit)
    except _LIBRARY_ERRORS as exc:
        _fail_invariant(exc)
    out = _open_output(config)
    try:
        out.write(json.dumps(result, indent=2) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    sys.exit(0 if result["passed"] else 1)


if __name__ == "__main__":
    main()
