"""On-disk formats: trace TSV, snapshot TSV, atomic writes, config echoes.

Both TSV formats open with a single ``#``-prefixed header carrying the
run dimensions; every data row is tab-separated and 1-based. Parsers
reject anything malformed with the offending line number, and writers
emit floats with ``repr`` so a parse → write round trip is exact.

All writers go through ``atomic_write``: content lands in a temp file in
the target directory and is moved into place with ``os.replace``, so a
crash never leaves a half-written artifact behind.
"""

from __future__ import annotations

import json
import os
import tempfile
from typing import Dict, List, Sequence, Set, Tuple

import numpy as np

from .errors import FormatError
from .mobility import Trace

__all__ = [
    "atomic_write", "write_config",
    "format_trace", "parse_trace",
    "format_snapshots", "parse_snapshots",
]


def atomic_write(path: str, text: str) -> None:
    """Write text to path so that readers never observe a partial file."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_config(out_path: str, payload: Dict[str, object]) -> str:
    """Drop the run's config echo next to its output file."""
    sidecar = out_path + ".config.json"
    atomic_write(sidecar, json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return sidecar


# ----------------------------------------------------------------------
# Trace TSV


def format_trace(trace: Trace) -> str:
    lines = [f"# n={trace.n} T={trace.T} r={repr(float(trace.r))}"]
    for t in range(1, trace.T + 1):
        snap = trace.positions[t - 1]
        for i in range(1, trace.n + 1):
            x, y = snap[i - 1]
            lines.append(f"{t}\t{i}\t{repr(float(x))}\t{repr(float(y))}")
    return "\n".join(lines) + "\n"


def _header_fields(line: str, lineno: int, keys: Sequence[str]) -> List[str]:
    if not line.startswith("# "):
        raise FormatError(f"line {lineno}: expected a '# ' header, got {line!r}")
    tokens = line[2:].split()
    if len(tokens) != len(keys):
        raise FormatError(
            f"line {lineno}: header must carry exactly {' '.join(keys)}")
    values = []
    for token, key in zip(tokens, keys):
        prefix = key + "="
        if not token.startswith(prefix):
            raise FormatError(f"line {lineno}: expected {prefix}..., got {token!r}")
        values.append(token[len(prefix):])
    return values


def _parse_int(text: str, lineno: int, what: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise FormatError(f"line {lineno}: {what} {text!r} is not an integer")


def _parse_float(text: str, lineno: int, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise FormatError(f"line {lineno}: {what} {text!r} is not a number")


def parse_trace(text: str) -> Trace:
    lines = text.splitlines()
    header_no = None
    for lineno, line in enumerate(lines, 1):
        if line.strip():
            header_no = lineno
            break
    if header_no is None:
        raise FormatError("line 1: empty trace file")
    n_s, t_s, r_s = _header_fields(lines[header_no - 1], header_no, ("n", "T", "r"))
    n = _parse_int(n_s, header_no, "n")
    T = _parse_int(t_s, header_no, "T")
    r = _parse_float(r_s, header_no, "r")
    if n < 1 or T < 1 or not (r > 0):
        raise FormatError(f"line {header_no}: need n ≥ 1, T ≥ 1, r > 0")
    positions = np.full((T, n, 2), np.nan, dtype=np.float64)
    for lineno in range(header_no + 1, len(lines) + 1):
        line = lines[lineno - 1]
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise FormatError(
                f"line {lineno}: expected 4 tab-separated fields, got {len(parts)}")
        t = _parse_int(parts[0], lineno, "snapshot index")
        i = _parse_int(parts[1], lineno, "node index")
        x = _parse_float(parts[2], lineno, "x coordinate")
        y = _parse_float(parts[3], lineno, "y coordinate")
        if not 1 <= t <= T:
            raise FormatError(f"line {lineno}: snapshot {t} outside 1..{T}")
        if not 1 <= i <= n:
            raise FormatError(f"line {lineno}: node {i} outside 1..{n}")
        if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0):
            raise FormatError(
                f"line {lineno}: position ({x}, {y}) outside the unit square")
        if not np.isnan(positions[t - 1, i - 1, 0]):
            raise FormatError(f"line {lineno}: duplicate entry for t={t} i={i}")
        positions[t - 1, i - 1] = (x, y)
    if np.isnan(positions).any():
        t_m, i_m = np.argwhere(np.isnan(positions[:, :, 0]))[0]
        raise FormatError(f"missing position for t={t_m + 1} i={i_m + 1}")
    return Trace(n=n, T=T, r=r, positions=positions)


# ----------------------------------------------------------------------
# Snapshot TSV

Edge = Tuple[int, int]


def format_snapshots(n: int, edge_sets: Sequence[Set[Edge]]) -> str:
    lines = [f"# n={n} T={len(edge_sets)}"]
    for t, edges in enumerate(edge_sets, 1):
        for u, v in sorted(edges):
            lines.append(f"{t}\t{u}\t{v}")
    return "\n".join(lines) + "\n"


def parse_snapshots(text: str) -> Tuple[int, List[Set[Edge]]]:
    """Header dimensions plus one edge set per snapshot."""
    lines = text.splitlines()
    header_no = None
    for lineno, line in enumerate(lines, 1):
        if line.strip():
            header_no = lineno
            break
    if header_no is None:
        raise FormatError("line 1: empty snapshot file")
    n_s, t_s = _header_fields(lines[header_no - 1], header_no, ("n", "T"))
    n = _parse_int(n_s, header_no, "n")
    T = _parse_int(t_s, header_no, "T")
    if n < 1 or T < 1:
        raise FormatError(f"line {header_no}: need n ≥ 1 and T ≥ 1")
    edge_sets: List[Set[Edge]] = [set() for _ in range(T)]
    for lineno in range(header_no + 1, len(lines) + 1):
        line = lines[lineno - 1]
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise FormatError(
                f"line {lineno}: expected 3 tab-separated fields, got {len(parts)}")
        t = _parse_int(parts[0], lineno, "snapshot index")
        u = _parse_int(parts[1], lineno, "vertex")
        v = _parse_int(parts[2], lineno, "vertex")
        if not 1 <= t <= T:
            raise FormatError(f"line {lineno}: snapshot {t} outside 1..{T}")
        if not (1 <= u < v <= n):
            raise FormatError(
                f"line {lineno}: edge ({u}, {v}) must satisfy 1 ≤ u < v ≤ {n}")
        if (u, v) in edge_sets[t - 1]:
            raise FormatError(f"line {lineno}: duplicate edge ({u}, {v}) at t={t}")
        edge_sets[t - 1].add((u, v))
    return n, edge_sets
