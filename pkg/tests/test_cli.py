"""Command line surface: wire formats, exit codes, worker determinism."""

import json

import pytest
from click.testing import CliRunner

from sgtrees import WeightSequence, weights_to_json
from sgtrees.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def invoke(runner, args, **kw):
    return runner.invoke(main, args, catch_exceptions=False, **kw)


class TestSeries:
    def test_unrooted_counts_all_ones(self, runner):
        res = invoke(runner, ["--quiet", "series", "--order", "8", "--label", "ZU"])
        assert res.exit_code == 0
        rows = res.stdout.strip().splitlines()
        assert rows[0] == "n,numerator,denominator"
        values = [tuple(map(int, r.split(","))) for r in rows[1:]]
        assert values[2:] == [
            (2, 1, 1),
            (3, 1, 1),
            (4, 2, 1),
            (5, 3, 1),
            (6, 6, 1),
            (7, 14, 1),
            (8, 34, 1),
        ]

    def test_output_file(self, runner, tmp_path):
        target = tmp_path / "t.csv"
        res = invoke(
            runner,
            ["--quiet", "--output", str(target), "series", "--order", "4", "--label", "T"],
        )
        assert res.exit_code == 0
        body = target.read_text().strip().splitlines()
        assert body[-1] == "4,5,1"  # Catalan(3)

    def test_rational_coefficients(self, runner):
        res = invoke(runner, ["--quiet", "series", "--order", "4", "--label", "L"])
        rows = dict()
        for line in res.stdout.strip().splitlines()[1:]:
            n, num, den = map(int, line.split(","))
            rows[n] = (num, den)
        assert rows[2] == (1, 2)
        assert rows[4] == (5, 6)


class TestCount:
    def test_unrooted(self, runner):
        res = invoke(runner, ["--quiet", "count", "--n", "6"])
        assert res.stdout.strip() == "6/1"

    def test_planted(self, runner):
        res = invoke(runner, ["--quiet", "count", "--n", "6", "--planted"])
        assert res.stdout.strip() == "42/1"


class TestSample:
    def test_wire_lines_and_determinism(self, runner):
        args = ["--quiet", "sample", "--n", "6", "--count", "5", "--seed", "9"]
        a = invoke(runner, args)
        b = invoke(runner, args)
        assert a.exit_code == 0
        lines = a.stdout.strip().splitlines()
        assert len(lines) == 5
        assert all(line.startswith("U:") for line in lines)
        assert a.stdout == b.stdout

    def test_seed_changes_output(self, runner):
        a = invoke(runner, ["--quiet", "sample", "--n", "8", "--count", "20", "--seed", "1"])
        b = invoke(runner, ["--quiet", "sample", "--n", "8", "--count", "20", "--seed", "2"])
        assert a.stdout != b.stdout

    def test_pair_mode(self, runner):
        res = invoke(runner, ["--quiet", "sample", "--n", "7", "--mode", "pair", "--count", "3"])
        for line in res.stdout.strip().splitlines():
            left, right = line.split(" ")
            sizes = [len(part.split(",")) for part in (left, right)]
            assert sum(sizes) == 7

    def test_stats_emit_ndjson(self, runner):
        res = invoke(
            runner,
            ["--quiet", "sample", "--n", "9", "--count", "4", "--emit", "stats", "--mode", "approx"],
        )
        recs = [json.loads(line) for line in res.stdout.strip().splitlines()]
        assert len(recs) == 4
        assert all(r["n"] == 9 for r in recs)
        assert all(r["diameter"] >= 1 for r in recs)

    def test_stats_emit_rejects_pair(self, runner):
        res = runner.invoke(main, ["--quiet", "sample", "--n", "6", "--mode", "pair", "--emit", "stats"])
        assert res.exit_code == 2

    def test_inadmissible_size_is_invariant_violation(self, runner, tmp_path):
        wfile = tmp_path / "even.json"
        wfile.write_text(weights_to_json(WeightSequence.explicit([1, 0, 1])))
        res = runner.invoke(
            main, ["--quiet", "--weights", str(wfile), "sample", "--n", "5", "--count", "1"]
        )
        assert res.exit_code == 3
        assert "invariant violation" in res.stderr

    def test_threads_byte_identical(self, runner, tmp_path):
        out1 = tmp_path / "one.txt"
        out2 = tmp_path / "two.txt"
        base = ["--quiet", "sample", "--n", "6", "--count", "2100", "--seed", "5"]
        invoke(runner, ["--threads", "1", "--output", str(out1)] + base[1:])
        invoke(runner, ["--threads", "2", "--output", str(out2)] + base[1:])
        assert out1.read_bytes() == out2.read_bytes()


class TestStatsCommand:
    def test_csv_and_aggregate(self, runner, tmp_path):
        target = tmp_path / "rows.csv"
        res = invoke(
            runner,
            [
                "--output",
                str(target),
                "stats",
                "--n",
                "16",
                "--count",
                "50",
                "--mode",
                "approx",
                "--seed",
                "3",
            ],
        )
        assert res.exit_code == 0
        body = target.read_text().strip().splitlines()
        assert body[0] == "n,diameter,height_from_center,max_degree,second_max_degree"
        assert len(body) == 51
        agg = json.loads(res.stdout.strip())
        assert agg["n"] == 16 and agg["samples"] == 50
        assert agg["mean_diameter"] > 0


class TestVerify:
    def test_series_oracle_passes(self, runner):
        res = runner.invoke(main, ["--quiet", "verify", "--check", "series-oracle", "--n-max", "6"])
        assert res.exit_code == 0
        report = json.loads(res.stdout)
        assert report["passed"] is True
        assert all(row["match"] for row in report["rows"])

    def test_unrooted_oracle_passes(self, runner):
        res = runner.invoke(main, ["--quiet", "verify", "--check", "unrooted-oracle", "--n-max", "6"])
        assert res.exit_code == 0
        assert json.loads(res.stdout)["passed"] is True

    def test_split_independence_passes(self, runner):
        res = runner.invoke(main, ["--quiet", "verify", "--check", "split-independence", "--n-max", "6"])
        assert res.exit_code == 0

    def test_tv_decay_default_window(self, runner):
        res = runner.invoke(main, ["--quiet", "verify", "--check", "tv-decay"])
        assert res.exit_code == 0
        report = json.loads(res.stdout)
        assert report["tail_sizes"] == [7, 8, 9]

    def test_tv_decay_short_range_fails_honestly(self, runner):
        # the approximation error still grows over sizes 4 -> 5
        res = runner.invoke(main, ["--quiet", "verify", "--check", "tv-decay", "--n-max", "5"])
        assert res.exit_code == 1

    def test_weights_file_roundtrip(self, runner, tmp_path):
        wfile = tmp_path / "geo.json"
        wfile.write_text(weights_to_json(WeightSequence.geometric("1/3")))
        res = runner.invoke(
            main,
            ["--quiet", "--weights", str(wfile), "verify", "--check", "series-oracle", "--n-max", "5"],
        )
        assert res.exit_code == 0
