"""Command-line front end.

Every command that writes an output file also drops a ``<out>.config.json``
sidecar echoing the full parameter set (including the RNG identity for
simulations), so any artifact can be reproduced from the sidecar alone.

Exit codes: 0 success, 2 usage error (from argparse), 3 malformed input
data, 4 violated precondition.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from . import __version__
from .barcode import (WeightedBarcode, from_json, render, render_diagram,
                      stats, stats_csv, to_json, weight_bars)
from .complexes import Chain, SimplicialComplex, is_boundary, \
    rips_from_adjacency, union_complex
from .errors import FormatError, PreconditionError
from .formats import atomic_write, format_snapshots, format_trace, \
    parse_snapshots, parse_trace, write_config
from .mobility import GENERATOR_NAME, MobilityParams, Trace, adjacency_at, \
    grid_coverage, interval_coverage, simulate
from .tracking import repair_cycle, track
from .zigzag import PersistenceOutput, build_sequence, zigzag_persistence

__all__ = ["main", "build_parser"]


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}")


def _config(command: str, parameters: Dict[str, object],
            rng_seed: Optional[int] = None) -> Dict[str, object]:
    payload: Dict[str, object] = {
        "command": command,
        "version": __version__,
        "parameters": parameters,
    }
    if rng_seed is not None:
        payload["rng"] = {"generator": GENERATOR_NAME, "seed": rng_seed}
    return payload


def _complexes_from_edge_sets(
        n: int, edge_sets: Sequence[Set[Tuple[int, int]]]) -> List[SimplicialComplex]:
    out = []
    for edges in edge_sets:
        adj = np.zeros((n, n), dtype=np.uint8)
        for u, v in edges:
            adj[u - 1, v - 1] = adj[v - 1, u - 1] = 1
        out.append(rips_from_adjacency(adj))
    return out


# ----------------------------------------------------------------------
# Commands


def cmd_simulate(args: argparse.Namespace) -> int:
    params = MobilityParams(model=args.model, n=args.n, T=args.T, r=args.r,
                            sigma=args.sigma_scale * args.r, seed=args.seed)
    trace = simulate(params)
    atomic_write(args.out, format_trace(trace))
    write_config(args.out, _config("simulate", {
        "model": args.model, "n": args.n, "T": args.T, "r": args.r,
        "sigma_scale": args.sigma_scale, "sigma": params.step_sd,
        "seed": args.seed, "out": args.out,
    }, rng_seed=args.seed))
    return 0


def cmd_snapshots(args: argparse.Namespace) -> int:
    trace = parse_trace(_read(args.trace))
    edge_sets = []
    for t in range(1, trace.T + 1):
        adj = adjacency_at(trace, t)
        rows, cols = np.nonzero(np.triu(adj, 1))
        edge_sets.append({(int(i) + 1, int(j) + 1) for i, j in zip(rows, cols)})
    atomic_write(args.out, format_snapshots(trace.n, edge_sets))
    write_config(args.out, _config("snapshots", {
        "trace": args.trace, "n": trace.n, "T": trace.T, "r": trace.r,
        "out": args.out,
    }))
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    n, edge_sets = parse_snapshots(_read(args.snapshots))
    seq = build_sequence(_complexes_from_edge_sets(n, edge_sets))
    pers = zigzag_persistence(seq)
    if args.track_cycles:
        tracked = track(seq, pers)
        wb = weight_bars(tracked, seq, args.max_hop_depth)
    else:
        wb = WeightedBarcode.from_intervals(pers.T, pers.intervals)
    atomic_write(args.out, json.dumps(to_json(wb), indent=2, sort_keys=True) + "\n")
    write_config(args.out, _config("analyze", {
        "snapshots": args.snapshots, "n": n, "T": len(edge_sets),
        "max_hop_depth": args.max_hop_depth,
        "track_cycles": bool(args.track_cycles), "out": args.out,
    }))
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    try:
        obj = json.loads(_read(args.barcode))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{args.barcode}: invalid JSON: {exc}")
    wb = from_json(obj)
    T = args.T if args.T is not None else wb.T
    pers = PersistenceOutput(T=wb.T,
                             intervals=tuple(b.interval for b in wb.bars),
                             trace=(), bar_intervals={})
    atomic_write(args.out, stats_csv(stats(pers, T)))
    write_config(args.out, _config("stats", {
        "barcode": args.barcode, "T": T, "out": args.out,
    }))
    return 0


def cmd_render(args: argparse.Namespace) -> int:
    try:
        obj = json.loads(_read(args.barcode))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{args.barcode}: invalid JSON: {exc}")
    wb = from_json(obj)
    if args.diagram:
        pers = PersistenceOutput(T=wb.T,
                                 intervals=tuple(b.interval for b in wb.bars),
                                 trace=(), bar_intervals={})
        svg = render_diagram(pers)
    else:
        svg = render(wb)
    atomic_write(args.out, svg)
    write_config(args.out, _config("render", {
        "barcode": args.barcode, "diagram": bool(args.diagram), "out": args.out,
    }))
    return 0


def cmd_coverage(args: argparse.Namespace) -> int:
    trace = parse_trace(_read(args.trace))
    r = args.r if args.r is not None else trace.r
    if r != trace.r:
        trace = Trace(n=trace.n, T=trace.T, r=r, positions=trace.positions)
    interval = interval_coverage(trace, r, args.grid)
    lines = ["t,proportion_covered,hole_area,interval_coverage"]
    for t in range(1, trace.T + 1):
        cov = grid_coverage(trace, t, args.grid)
        lines.append(f"{t},{repr(cov.proportion_covered)},"
                     f"{repr(cov.hole_area)},{repr(float(interval[t - 1]))}")
    atomic_write(args.out, "\n".join(lines) + "\n")
    write_config(args.out, _config("coverage", {
        "trace": args.trace, "r": r, "grid": args.grid, "out": args.out,
    }))
    return 0


def _parse_cycle_arg(text: str) -> List[int]:
    parts = [p.strip() for p in text.split(",")]
    try:
        verts = [int(p) for p in parts]
    except ValueError:
        raise PreconditionError(f"cycle {text!r} must be comma-separated integers")
    if len(verts) < 3:
        raise PreconditionError("a cycle needs at least three vertices")
    if len(set(verts)) != len(verts):
        raise PreconditionError("cycle vertices must be distinct")
    return verts


def cmd_guard(args: argparse.Namespace) -> int:
    n, edge_sets = parse_snapshots(_read(args.snapshots))
    complexes = _complexes_from_edge_sets(n, edge_sets)
    T = len(complexes)
    verts = _parse_cycle_arg(args.initial_cycle)
    edges = set()
    for a, b in zip(verts, verts[1:] + verts[:1]):
        edges.add((min(a, b), max(a, b)))
    first = complexes[0]
    for e in edges:
        if e not in first.edges:
            raise PreconditionError(
                f"cycle edge {e} is missing from the first snapshot")
    cycle: Optional[Chain] = Chain(1, frozenset(edges))
    if is_boundary(cycle, first)[0]:
        cycle = None  # the ring is already sealed at the start

    status = []
    cycles: Dict[str, List[List[int]]] = {}
    break_time: Optional[int] = None
    if cycle is None:
        break_time = 1
    else:
        status.append("alive")
        cycles["1"] = [[u, v] for u, v in sorted(cycle.support)]
        for t in range(1, T):
            u = union_complex(complexes[t - 1], complexes[t])
            cycle = repair_cycle(cycle, complexes[t], u)
            if cycle is None:
                break_time = t + 1
                break
            status.append("alive")
            cycles[str(t + 1)] = [[a, b] for a, b in sorted(cycle.support)]
    while len(status) < T:
        status.append("broken")

    report = {
        "n": n, "T": T,
        "initial_cycle": verts,
        "status": status,
        "break_time": break_time,
        "cycles": cycles,
        "config": _config("guard", {
            "snapshots": args.snapshots, "initial_cycle": args.initial_cycle,
        }),
    }
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        atomic_write(args.out, text)
        write_config(args.out, _config("guard", {
            "snapshots": args.snapshots, "initial_cycle": args.initial_cycle,
            "out": args.out,
        }))
    else:
        sys.stdout.write(text)
    return 0


# ----------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="covtrack",
        description="Coverage-hole tracking for mobile sensor networks.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a mobility model, write a trace")
    p.add_argument("--model", required=True, choices=("brownian", "line"))
    p.add_argument("--n", required=True, type=int, help="number of nodes")
    p.add_argument("--T", required=True, type=int, help="number of snapshots")
    p.add_argument("--r", required=True, type=float, help="sensing radius")
    p.add_argument("--sigma-scale", type=float, default=0.1,
                   help="step scale as a fraction of r (default 0.1)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("snapshots", help="trace -> per-snapshot edge lists")
    p.add_argument("--trace", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_snapshots)

    p = sub.add_parser("analyze", help="snapshots -> barcode JSON")
    p.add_argument("--snapshots", required=True)
    p.add_argument("--max-hop-depth", type=int, default=3)
    p.add_argument("--track-cycles", action="store_true",
                   help="also attach representative cycles and depth weights")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("stats", help="barcode JSON -> summary CSV")
    p.add_argument("--barcode", required=True)
    p.add_argument("--T", type=int, default=None,
                   help="histogram length (default: the barcode's own T)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("render", help="barcode JSON -> SVG")
    p.add_argument("--barcode", required=True)
    p.add_argument("--diagram", action="store_true",
                   help="draw the birth/death diagram instead of bars")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("coverage", help="trace -> geometric coverage CSV")
    p.add_argument("--trace", required=True)
    p.add_argument("--r", type=float, default=None,
                   help="override the trace's sensing radius")
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("guard", help="follow one ring through the snapshots")
    p.add_argument("--snapshots", required=True)
    p.add_argument("--initial-cycle", required=True, metavar="V1,V2,...",
                   help="closed vertex loop present in the first snapshot")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_guard)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"covtrack: error: {exc}", file=sys.stderr)
        return 3
    except PreconditionError as exc:
        print(f"covtrack: error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
