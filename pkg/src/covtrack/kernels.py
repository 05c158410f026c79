"""Implementation selection for the GF(2) kernels.

The compiled extension is used when it imported cleanly; set COVTRACK_PURE=1
to force the pure-Python lane (also what you get when the extension was not
built). Both lanes expose the same three entry points and agree bit-for-bit;
benchmarks/bench_gf2.py compares them.
"""

from __future__ import annotations

import os
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from . import _gf2pure
from ._gf2pure import PivotTable, rank_gf2

if os.environ.get("COVTRACK_PURE", "0") not in ("0", ""):
    _core = None
else:
    try:
        from . import _gf2core as _core  # type: ignore[attr-defined]
    except ImportError:
        _core = None

COMPILED = _core is not None

__all__ = [
    "COMPILED", "PivotTable", "rank_gf2",
    "build_d2_basis", "flag_d2_basis",
]


class _PackedD2Basis:
    """D2Basis facade over the packed rows returned by the extension."""

    def __init__(self, rank: int, saturated: bool, rows: np.ndarray, pivot_bits: list) -> None:
        self.rank = rank
        self.saturated = saturated
        self._rows = rows
        self._pivot_bits = pivot_bits
        self._table: Optional[PivotTable] = None

    def _as_table(self) -> PivotTable:
        if self._table is None:
            table = PivotTable()
            for row, piv in zip(self._rows, self._pivot_bits):
                table.pivots[piv] = int.from_bytes(row.tobytes(), "little")
            self._table = table
        return self._table

    def reduces_to_zero(self, v: int) -> bool:
        if self.saturated:
            return True
        return self._as_table().reduce(v) == 0


def build_d2_basis(columns: Sequence[Tuple[int, int, int]], n_edges: int,
                   ceiling: Optional[int] = None):
    """Reduced triangle-boundary basis from edge-index triples.

    n_edges bounds the edge-index space (only the compiled lane needs it).
    """
    if _core is None:
        return _gf2pure.build_d2_basis(columns, ceiling)
    cols = np.asarray(list(columns), dtype=np.int32).reshape(-1, 3)
    return _PackedD2Basis(*_core.reduce_triangle_columns(cols, n_edges, ceiling))


def flag_d2_basis(n: int, edges: Sequence[Tuple[int, int]],
                  ceiling: Optional[int] = None,
                  edge_index: Optional[dict] = None):
    """Reduced basis of all flag-triangle boundaries of an edge set.

    Vertices are 1-based, edges (u, v) with u < v. When edge_index maps
    edges to bit positions in a larger ambient space, columns are expressed
    in that space; otherwise bits follow the order of `edges`.
    """
    if edge_index is None:
        n_bits = len(edges)
        indexed = [(u, v, i) for i, (u, v) in enumerate(edges)]
    else:
        n_bits = (max(edge_index.values()) + 1) if edge_index else 0
        indexed = [(u, v, edge_index[(u, v)]) for (u, v) in edges]
    if _core is None:
        if edge_index is None:
            return _gf2pure.flag_d2_basis(n, list(edges), ceiling)
        return _gf2pure.build_d2_basis(
            _reindexed_flag_triangles(n, indexed), ceiling)
    indexed.sort()
    arr = np.asarray(indexed, dtype=np.int32).reshape(-1, 3)
    return _PackedD2Basis(*_core.flag_reduce(n, arr, n_bits, ceiling))


def _reindexed_flag_triangles(n: int, indexed: list) -> Iterable[Tuple[int, int, int]]:
    nbr = [0] * (n + 1)
    eix = {}
    for u, v, i in indexed:
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u
        eix[(u, v)] = i
    for u, v, i in sorted(indexed):
        common = (nbr[u] & nbr[v]) >> (v + 1) << (v + 1)
        while common:
            low = common & -common
            w = low.bit_length() - 1
            common ^= low
            yield i, eix[(u, w)], eix[(v, w)]
