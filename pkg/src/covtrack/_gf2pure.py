"""Pure-Python GF(2) reduction kernels on int bitsets.

Vectors over GF(2) are Python ints: bit i set = coordinate i is 1, and
XOR is vector addition. Arbitrary-precision ints keep the inner XOR in C
while staying dependency-free; the compiled twin in _gf2core.pyx packs the
same vectors into uint64 words.
"""

from __future__ import annotations

from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

__all__ = [
    "PivotTable",
    "D2Basis",
    "build_d2_basis",
    "flag_d2_basis",
    "flag_triangles",
    "rank_gf2",
]


class PivotTable:
    """Column basis in pivot form: each stored vector has a distinct top bit."""

    def __init__(self) -> None:
        self.pivots: dict[int, int] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v: int) -> int:
        piv = self.pivots
        while v:
            p = v.bit_length() - 1
            w = piv.get(p)
            if w is None:
                return v
            v ^= w
        return 0

    def insert(self, v: int) -> Optional[int]:
        """Reduce v and store the remainder. Returns its pivot, None if dependent."""
        v = self.reduce(v)
        if not v:
            return None
        p = v.bit_length() - 1
        self.pivots[p] = v
        return p


class D2Basis:
    """Reduced triangle-boundary columns of one complex (edge-index bitsets).

    rank is the GF(2) rank of the dim-2 boundary map. When built with a
    ceiling equal to the cycle-space dimension, hitting the ceiling means
    every 1-cycle bounds, and reduces_to_zero stays exact either way.
    """

    def __init__(self, table: PivotTable, rank: int, saturated: bool) -> None:
        self._table = table
        self.rank = rank
        self.saturated = saturated  # true when rank hit the requested ceiling

    def reduces_to_zero(self, v: int) -> bool:
        if self.saturated:
            return True
        return self._table.reduce(v) == 0


def build_d2_basis(
    columns: Iterable[Tuple[int, int, int]],
    ceiling: Optional[int] = None,
) -> D2Basis:
    """Reduce triangle columns given as edge-index triples, stopping at ceiling.

    ceiling, when given, must be an upper bound for the final rank (the
    cycle-space dimension of the 1-skeleton); reaching it proves the span
    is the full cycle space and the remaining columns are skipped.
    """
    table = PivotTable()
    if ceiling == 0:
        return D2Basis(table, 0, True)
    for a, b, c in columns:
        table.insert((1 << a) | (1 << b) | (1 << c))
        if ceiling is not None and table.rank >= ceiling:
            return D2Basis(table, table.rank, True)
    return D2Basis(table, table.rank, False)


def flag_triangles(
    n: int, edges: Sequence[Tuple[int, int]]
) -> Iterator[Tuple[int, int, int]]:
    """Edge-index triples of all 3-cliques, lexicographic by (u, v, w).

    Vertices are 1-based; edges must be (u, v) with u < v.
    """
    nbr = [0] * (n + 1)
    eix: dict[Tuple[int, int], int] = {}
    for i, (u, v) in enumerate(edges):
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u
        eix[(u, v)] = i
    for u, v in sorted(edges):
        common = (nbr[u] & nbr[v]) >> (v + 1) << (v + 1)  # shared neighbors above v
        while common:
            low = common & -common
            w = low.bit_length() - 1
            common ^= low
            yield eix[(u, v)], eix[(u, w)], eix[(v, w)]


def flag_d2_basis(
    n: int,
    edges: Sequence[Tuple[int, int]],
    ceiling: Optional[int] = None,
) -> D2Basis:
    """D2Basis of the flag closure of an edge set (triangles enumerated lazily)."""
    return build_d2_basis(flag_triangles(n, edges), ceiling)


def rank_gf2(vectors: Iterable[int]) -> int:
    """Rank of a set of GF(2) vectors given as int bitsets."""
    table = PivotTable()
    for v in vectors:
        table.insert(v)
    return table.rank
