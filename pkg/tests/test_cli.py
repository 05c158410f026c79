"""Command-line interface: pipeline, guard scenarios, exit codes.

Everything runs in-process through main(argv), so exit codes and the
files left on disk are the real contract being checked.
"""

import json

import numpy as np
import pytest

from covtrack import (adjacency_at, format_snapshots, from_json,
                      parse_snapshots, parse_trace)
from covtrack.cli import main

SQUARE = [(1, 2), (2, 3), (3, 4), (1, 4)]


def run(*argv):
    return main([str(a) for a in argv])


def write_snapshots(path, n, edge_sets):
    path.write_text(format_snapshots(n, [set(s) for s in edge_sets]))
    return path


class TestPipeline:
    def test_simulate_to_stats(self, tmp_path):
        tr = tmp_path / "trace.tsv"
        assert run("simulate", "--model", "brownian", "--n", 12, "--T", 6,
                   "--r", 0.18, "--seed", 5, "--out", tr) == 0
        trace = parse_trace(tr.read_text())
        assert (trace.n, trace.T, trace.r) == (12, 6, 0.18)

        sidecar = json.loads((tmp_path / "trace.tsv.config.json").read_text())
        assert sidecar["command"] == "simulate"
        assert sidecar["rng"] == {"generator": "philox4x64", "seed": 5}
        assert sidecar["parameters"]["sigma_scale"] == 0.1

        snap = tmp_path / "snap.tsv"
        assert run("snapshots", "--trace", tr, "--out", snap) == 0
        n, edge_sets = parse_snapshots(snap.read_text())
        assert n == 12 and len(edge_sets) == 6
        adj = adjacency_at(trace, 3)
        want = {(i + 1, j + 1) for i, j in zip(*np.nonzero(np.triu(adj, 1)))}
        assert edge_sets[2] == want

        bc = tmp_path / "barcode.json"
        assert run("analyze", "--snapshots", snap, "--track-cycles",
                   "--max-hop-depth", 3, "--out", bc) == 0
        wb = from_json(json.loads(bc.read_text()))
        assert wb.T == 6
        for bar in wb.bars:
            assert bar.weights is not None and bar.cycles is not None

        plain = tmp_path / "plain.json"
        assert run("analyze", "--snapshots", snap, "--out", plain) == 0
        for bar in from_json(json.loads(plain.read_text())).bars:
            assert bar.weights is None and bar.cycles is None

        csv = tmp_path / "stats.csv"
        assert run("stats", "--barcode", bc, "--out", csv) == 0
        lines = csv.read_text().splitlines()
        assert lines[0].startswith("num_bars,sum_of_bars,lt_1")
        assert len(lines) == 2
        assert int(lines[1].split(",")[0]) == len(wb.bars)

        svg = tmp_path / "bars.svg"
        assert run("render", "--barcode", bc, "--out", svg) == 0
        assert svg.read_text().startswith("<svg ")
        dia = tmp_path / "diagram.svg"
        assert run("render", "--barcode", bc, "--diagram", "--out", dia) == 0
        assert dia.read_text().startswith("<svg ")
        if wb.bars:
            assert dia.read_text() != svg.read_text()

    def test_coverage_csv(self, tmp_path):
        tr = tmp_path / "trace.tsv"
        run("simulate", "--model", "line", "--n", 15, "--T", 5,
            "--r", 0.12, "--seed", 2, "--out", tr)
        out = tmp_path / "cov.csv"
        assert run("coverage", "--trace", tr, "--grid", 128,
                   "--out", out) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "t,proportion_covered,hole_area,interval_coverage"
        assert len(lines) == 6
        interval = [float(l.split(",")[3]) for l in lines[1:]]
        assert interval == sorted(interval)
        for l in lines[1:]:
            t, prop, hole, _ = l.split(",")
            assert 0.0 <= float(prop) <= 1.0
            assert 0.0 <= float(hole) <= 1.0

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run("--version")
        assert exc.value.code == 0
        assert capsys.readouterr().out.strip().endswith("0.1.0")


class TestGuard:
    def test_alive_throughout(self, tmp_path, capsys):
        snap = write_snapshots(tmp_path / "s.tsv", 4, [SQUARE] * 3)
        assert run("guard", "--snapshots", snap,
                   "--initial-cycle", "1,2,3,4") == 0
        report = json.loads(capsys.readouterr().out)
        assert report["break_time"] is None
        assert report["status"] == ["alive"] * 3
        assert set(report["cycles"]) == {"1", "2", "3"}
        assert report["cycles"]["2"] == [[1, 2], [1, 4], [2, 3], [3, 4]]

    def test_breaks_when_diagonal_seals_the_ring(self, tmp_path):
        snap = write_snapshots(tmp_path / "s.tsv", 4,
                               [SQUARE, SQUARE + [(1, 3)]])
        out = tmp_path / "guard.json"
        assert run("guard", "--snapshots", snap,
                   "--initial-cycle", "1,2,3,4", "--out", out) == 0
        report = json.loads(out.read_text())
        assert report["break_time"] == 2
        assert report["status"] == ["alive", "broken"]
        assert set(report["cycles"]) == {"1"}
        assert (tmp_path / "guard.json.config.json").exists()

    def test_initially_sealed_ring(self, tmp_path, capsys):
        snap = write_snapshots(tmp_path / "s.tsv", 3,
                               [[(1, 2), (1, 3), (2, 3)]])
        assert run("guard", "--snapshots", snap,
                   "--initial-cycle", "1,2,3") == 0
        report = json.loads(capsys.readouterr().out)
        assert report["break_time"] == 1
        assert report["status"] == ["broken"]
        assert report["cycles"] == {}

    def test_reroutes_and_reports_the_detour(self, tmp_path, capsys):
        first = SQUARE + [(1, 5), (2, 5)]
        second = [(2, 3), (3, 4), (1, 4), (1, 5), (2, 5)]
        snap = write_snapshots(tmp_path / "s.tsv", 5, [first, second])
        assert run("guard", "--snapshots", snap,
                   "--initial-cycle", "1,2,3,4") == 0
        report = json.loads(capsys.readouterr().out)
        assert report["break_time"] is None
        assert report["cycles"]["2"] == [[1, 4], [1, 5], [2, 3], [2, 5], [3, 4]]

    def test_loop_orientation_does_not_matter(self, tmp_path, capsys):
        snap = write_snapshots(tmp_path / "s.tsv", 4, [SQUARE])
        assert run("guard", "--snapshots", snap,
                   "--initial-cycle", "2,1,4,3") == 0
        report = json.loads(capsys.readouterr().out)
        assert report["status"] == ["alive"]


class TestExitCodes:
    def test_usage_errors(self):
        for argv in ([], ["simulate"], ["frobnicate"],
                     ["simulate", "--model", "warp", "--n", "3", "--T", "2",
                      "--r", "0.1", "--out", "x"]):
            with pytest.raises(SystemExit) as exc:
                run(*argv)
            assert exc.value.code == 2

    def test_malformed_inputs_exit_3(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("definitely not a trace\n")
        assert run("snapshots", "--trace", bad,
                   "--out", tmp_path / "o.tsv") == 3
        assert "covtrack: error:" in capsys.readouterr().err

        assert run("analyze", "--snapshots", bad,
                   "--out", tmp_path / "o.json") == 3
        assert run("stats", "--barcode", bad, "--out", tmp_path / "o.csv") == 3

        notjson = tmp_path / "schema.json"
        notjson.write_text('{"T": 2}\n')
        assert run("render", "--barcode", notjson,
                   "--out", tmp_path / "o.svg") == 3

        assert run("coverage", "--trace", tmp_path / "missing.tsv",
                   "--out", tmp_path / "o.csv") == 3

    def test_preconditions_exit_4(self, tmp_path, capsys):
        assert run("simulate", "--model", "brownian", "--n", 0, "--T", 2,
                   "--r", 0.1, "--out", tmp_path / "t.tsv") == 4
        assert run("simulate", "--model", "brownian", "--n", 3, "--T", 2,
                   "--r", 0, "--out", tmp_path / "t.tsv") == 4

        tr = tmp_path / "trace.tsv"
        run("simulate", "--model", "brownian", "--n", 5, "--T", 2,
            "--r", 0.1, "--out", tr)
        assert run("coverage", "--trace", tr, "--grid", 32,
                   "--out", tmp_path / "c.csv") == 4
        assert run("coverage", "--trace", tr, "--r", -1.0,
                   "--out", tmp_path / "c.csv") == 4

        snap = write_snapshots(tmp_path / "s.tsv", 4, [SQUARE])
        for cyc in ("1,2", "1,2,2", "1,2,x", "1,2,3"):
            assert run("guard", "--snapshots", snap,
                       "--initial-cycle", cyc) == 4
        capsys.readouterr()

    def test_stats_window_too_small_exits_4(self, tmp_path):
        bc = tmp_path / "b.json"
        bc.write_text(json.dumps(
            {"T": 4, "bars": [{"birth": 1, "death": 4}]}))
        assert run("stats", "--barcode", bc, "--T", 3,
                   "--out", tmp_path / "s.csv") == 4


class TestDeterminism:
    COMMON = ["--model", "brownian", "--n", "14", "--T", "5",
              "--r", "0.15", "--seed", "9"]

    def produce(self, d):
        d.mkdir()
        tr, snap = d / "trace.tsv", d / "snap.tsv"
        bc, csv = d / "barcode.json", d / "stats.csv"
        svg, cov = d / "bars.svg", d / "cov.csv"
        assert run("simulate", *self.COMMON, "--out", tr) == 0
        assert run("snapshots", "--trace", tr, "--out", snap) == 0
        assert run("analyze", "--snapshots", snap, "--track-cycles",
                   "--out", bc) == 0
        assert run("stats", "--barcode", bc, "--out", csv) == 0
        assert run("render", "--barcode", bc, "--out", svg) == 0
        assert run("coverage", "--trace", tr, "--grid", 128,
                   "--out", cov) == 0
        return [tr, snap, bc, csv, svg, cov]

    def test_repeated_runs_are_byte_identical(self, tmp_path):
        a = self.produce(tmp_path / "a")
        b = self.produce(tmp_path / "b")
        for fa, fb in zip(a, b):
            assert fa.read_bytes() == fb.read_bytes(), fa.name

    def test_rerun_in_place_reproduces_sidecars(self, tmp_path):
        tr = tmp_path / "trace.tsv"
        run("simulate", *self.COMMON, "--out", tr)
        first = (tmp_path / "trace.tsv.config.json").read_bytes()
        run("simulate", *self.COMMON, "--out", tr)
        assert (tmp_path / "trace.tsv.config.json").read_bytes() == first
