"""Shared builders for test complexes and sequences.

Builders return plain (vertices, edges, triangles) triples or package
complexes; everything is constructed by hand or by elementary loops so
fixtures never depend on the code paths they are used to check.
"""

from __future__ import annotations

import random
from typing import List, Optional, Sequence, Set, Tuple

import numpy as np
import pytest

from covtrack import SimplicialComplex

Edge = Tuple[int, int]
Tri = Tuple[int, int, int]


def make_complex(n: int, edges: Sequence[Edge],
                 triangles: Sequence[Tri] = ()) -> SimplicialComplex:
    return SimplicialComplex(n, range(1, n + 1), edges, triangles)


def cycle_edges(L: int, start: int = 1) -> List[Edge]:
    """Edges of the ring on vertices start..start+L−1."""
    verts = list(range(start, start + L))
    out = []
    for a, b in zip(verts, verts[1:] + verts[:1]):
        out.append((min(a, b), max(a, b)))
    return sorted(out)


def cycle_complex(L: int) -> SimplicialComplex:
    return make_complex(L, cycle_edges(L))


def hollow_square() -> SimplicialComplex:
    return cycle_complex(4)


def filled_triangle() -> SimplicialComplex:
    return make_complex(3, [(1, 2), (1, 3), (2, 3)], [(1, 2, 3)])


def figure_eight() -> SimplicialComplex:
    """Two hollow squares glued along the edge (3, 4)."""
    edges = [(1, 2), (2, 3), (3, 4), (1, 4), (3, 5), (5, 6), (4, 6)]
    return make_complex(6, edges)


def flag_triangles(edges: Sequence[Edge]) -> List[Tri]:
    """All triangles whose three edges are present (triple loop on purpose)."""
    eset = set(edges)
    verts = sorted({v for e in edges for v in e})
    out = []
    for i, u in enumerate(verts):
        for j in range(i + 1, len(verts)):
            v = verts[j]
            if (u, v) not in eset:
                continue
            for w in verts[j + 1:]:
                if (u, w) in eset and (v, w) in eset:
                    out.append((u, v, w))
    return out


def grid_complex(rows: int, cols: int, *, filled: bool = True,
                 omit_vertex: Optional[int] = None) -> SimplicialComplex:
    """Triangulated grid: unit cells split along the down-right diagonal.

    Vertex at (i, j) is i*cols + j + 1 for rows i = 0..rows−1. Omitting a
    vertex removes it and every simplex touching it, which punches a hole
    in an otherwise contractible sheet when the vertex is interior.
    """
    def vid(i: int, j: int) -> int:
        return i * cols + j + 1

    n = rows * cols
    edges: Set[Edge] = set()
    for i in range(rows):
        for j in range(cols):
            if j + 1 < cols:
                edges.add((vid(i, j), vid(i, j + 1)))
            if i + 1 < rows:
                edges.add((vid(i, j), vid(i + 1, j)))
            if i + 1 < rows and j + 1 < cols:
                edges.add((vid(i, j), vid(i + 1, j + 1)))
    tris: List[Tri] = flag_triangles(sorted(edges)) if filled else []
    verts = set(range(1, n + 1))
    if omit_vertex is not None:
        verts.discard(omit_vertex)
        edges = {e for e in edges if omit_vertex not in e}
        tris = [t for t in tris if omit_vertex not in t]
    return SimplicialComplex(n, verts, edges, tris)


def random_flag_complex(rng: random.Random, n: int,
                        p_edge: float) -> SimplicialComplex:
    edges = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)
             if rng.random() < p_edge]
    return make_complex(n, edges, flag_triangles(edges))


def random_geometric_points(rng: random.Random, n: int) -> np.ndarray:
    return np.array([[rng.random(), rng.random()] for _ in range(n)])


def rips_of_points(points: np.ndarray, radius: float) -> SimplicialComplex:
    n = len(points)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            d = points[i] - points[j]
            if float(d @ d) <= radius * radius:
                edges.append((i + 1, j + 1))
    return make_complex(n, edges, flag_triangles(edges))


def as_triple(k: SimplicialComplex) -> Tuple[Set[int], List[Edge], List[Tri]]:
    """Plain data view for the oracle."""
    return set(k.vertices), sorted(k.edges), sorted(k.triangles)


def random_sequence(rng: random.Random, n: int, T: int, p_edge: float,
                    churn: float) -> List[SimplicialComplex]:
    """Flag-complex sequence where each step rerolls a fraction of pairs."""
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    present = {e for e in pairs if rng.random() < p_edge}
    out = []
    for _ in range(T):
        edges = sorted(present)
        out.append(make_complex(n, edges, flag_triangles(edges)))
        for e in pairs:
            if rng.random() < churn:
                if e in present:
                    present.discard(e)
                else:
                    present.add(e)
    return out


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
