"""Simplicial 2-complexes over GF(2): Rips construction, boundary algebra,
Betti numbers, and free-face collapse.

Vertices are integer ids 1..n, stable across time. Simplices are sorted
tuples, so orientation never enters: all homology here is over GF(2),
where a chain is just a set of simplices and addition is symmetric
difference. Only the 2-skeleton is kept — H0 and H1 are all that planar
coverage analysis needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Optional, Sequence, Tuple

import numpy as np

from . import kernels
from .errors import FormatError, PreconditionError

Simplex = Tuple[int, ...]

__all__ = [
    "Chain", "SimplicialComplex",
    "rips_from_adjacency", "union_complex", "boundary", "betti",
    "is_boundary", "simplicial_collapse",
]


@dataclass(frozen=True)
class Chain:
    """GF(2) chain: a set of same-dimension simplices with coefficient 1.

    Addition is symmetric difference (the ^ operator).
    """

    dimension: int
    support: FrozenSet[Simplex]

    def __post_init__(self) -> None:
        for s in self.support:
            if len(s) != self.dimension + 1:
                raise PreconditionError(
                    f"simplex {s} has dimension {len(s) - 1}, chain has {self.dimension}")
            if list(s) != sorted(s):
                raise PreconditionError(f"simplex {s} is not in sorted form")

    @staticmethod
    def of(dimension: int, simplices: Iterable[Sequence[int]]) -> "Chain":
        """Build a chain, normalizing each simplex to a sorted tuple."""
        return Chain(dimension, frozenset(tuple(sorted(s)) for s in simplices))

    def __xor__(self, other: "Chain") -> "Chain":
        if self.dimension != other.dimension:
            raise PreconditionError("cannot add chains of different dimension")
        return Chain(self.dimension, self.support ^ other.support)

    __add__ = __xor__

    def __len__(self) -> int:
        return len(self.support)

    def __iter__(self):
        return iter(sorted(self.support))

    def __bool__(self) -> bool:
        return bool(self.support)


class SimplicialComplex:
    """Immutable 2-skeleton: vertex ids, edges, triangles.

    ``n`` is the size of the ambient id universe 1..n; isolated vertices are
    kept so that node identity is stable between snapshots. Face-closure is
    validated on construction.
    """

    __slots__ = ("n", "vertices", "edges", "triangles", "_cache")

    def __init__(self, n: int, vertices: Iterable[int],
                 edges: Iterable[Tuple[int, int]] = (),
                 triangles: Iterable[Tuple[int, int, int]] = ()) -> None:
        self.n = int(n)
        self.vertices: FrozenSet[int] = frozenset(int(v) for v in vertices)
        self.edges: FrozenSet[Tuple[int, int]] = frozenset(
            tuple(sorted(e)) for e in edges)  # type: ignore[misc]
        self.triangles: FrozenSet[Tuple[int, int, int]] = frozenset(
            tuple(sorted(t)) for t in triangles)  # type: ignore[misc]
        self._cache: Dict = {}
        self._validate()

    def _validate(self) -> None:
        for v in self.vertices:
            if not 1 <= v <= self.n:
                raise PreconditionError(f"vertex id {v} outside 1..{self.n}")
        for u, v in self.edges:
            if u == v:
                raise PreconditionError(f"degenerate edge ({u},{v})")
            if u not in self.vertices or v not in self.vertices:
                raise PreconditionError(f"edge ({u},{v}) has a missing endpoint")
        for u, v, w in self.triangles:
            if len({u, v, w}) != 3:
                raise PreconditionError(f"degenerate triangle ({u},{v},{w})")
            for e in ((u, v), (u, w), (v, w)):
                if e not in self.edges:
                    raise PreconditionError(
                        f"triangle ({u},{v},{w}) is missing face {e}")

    # -- set-like views ------------------------------------------------

    def simplices(self, dimension: int) -> FrozenSet[Simplex]:
        if dimension == 0:
            return frozenset((v,) for v in self.vertices)
        if dimension == 1:
            return self.edges
        if dimension == 2:
            return self.triangles
        return frozenset()

    def __contains__(self, simplex: Sequence[int]) -> bool:
        s = tuple(sorted(simplex))
        if len(s) == 1:
            return s[0] in self.vertices
        if len(s) == 2:
            return s in self.edges
        if len(s) == 3:
            return s in self.triangles
        return False

    def __eq__(self, other) -> bool:
        return (isinstance(other, SimplicialComplex)
                and self.n == other.n
                and self.vertices == other.vertices
                and self.edges == other.edges
                and self.triangles == other.triangles)

    def __hash__(self) -> int:
        return hash((self.n, self.vertices, self.edges, self.triangles))

    def __repr__(self) -> str:
        return (f"SimplicialComplex(n={self.n}, |V|={len(self.vertices)}, "
                f"|E|={len(self.edges)}, |T|={len(self.triangles)})")

    # -- cached index structures ---------------------------------------

    def edge_order(self) -> Tuple[Tuple[int, int], ...]:
        """Edges in the canonical (lexicographic) order used for bit indices."""
        out = self._cache.get("edge_order")
        if out is None:
            out = tuple(sorted(self.edges))
            self._cache["edge_order"] = out
        return out

    def edge_index(self) -> Dict[Tuple[int, int], int]:
        out = self._cache.get("edge_index")
        if out is None:
            out = {e: i for i, e in enumerate(self.edge_order())}
            self._cache["edge_index"] = out
        return out

    def chain_bits(self, c: Chain) -> int:
        """Pack a 1-chain into an int bitset over this complex's edge order."""
        eix = self.edge_index()
        bits = 0
        for e in c.support:
            try:
                bits |= 1 << eix[e]
            except KeyError:
                raise PreconditionError(f"edge {e} not in complex") from None
        return bits

    def bits_chain(self, bits: int) -> Chain:
        order = self.edge_order()
        support = []
        while bits:
            low = bits & -bits
            support.append(order[low.bit_length() - 1])
            bits ^= low
        return Chain(1, frozenset(support))


def rips_from_adjacency(adj) -> SimplicialComplex:
    """Vietoris–Rips 2-skeleton of a symmetric boolean adjacency matrix.

    Node i of the matrix (0-based) becomes vertex id i+1. Edges are the
    adjacent pairs; triangles are exactly the 3-cliques, so the result is
    flag-closed in dimension 2. All n vertices are present even when
    isolated.
    """
    a = np.asarray(adj)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise FormatError(f"adjacency must be square, got shape {a.shape}")
    a = a.astype(bool)
    if a.shape[0] and bool(np.any(a != a.T)):
        raise FormatError("adjacency matrix is not symmetric")
    if bool(np.any(np.diag(a))):
        raise FormatError("adjacency matrix has a nonzero diagonal")
    n = a.shape[0]
    edges = []
    triangles = []
    iu, ju = np.nonzero(np.triu(a, 1))
    for i, j in zip(iu.tolist(), ju.tolist()):
        edges.append((i + 1, j + 1))
        both = np.nonzero(a[i] & a[j])[0]
        for k in both[both > j].tolist():
            triangles.append((i + 1, j + 1, k + 1))
    return SimplicialComplex(n, range(1, n + 1), edges, triangles)


def union_complex(k1: SimplicialComplex, k2: SimplicialComplex) -> SimplicialComplex:
    """Simplex-set union of two complexes over the same id universe.

    Note this is NOT the Rips complex of the union graph: no triangle is
    added unless it was present in one of the inputs, because both inputs
    must include into the result without distorting homology.
    """
    if k1.n != k2.n:
        raise PreconditionError(f"vertex universes differ: {k1.n} vs {k2.n}")
    return SimplicialComplex(k1.n, k1.vertices | k2.vertices,
                             k1.edges | k2.edges, k1.triangles | k2.triangles)


def boundary(c: Chain, k: SimplicialComplex) -> Chain:
    """GF(2) boundary of a chain of dimension 1 or 2 supported in k."""
    if c.dimension not in (1, 2):
        raise PreconditionError("boundary is defined for chains of dimension 1 or 2")
    faces: Dict[Simplex, int] = {}
    for s in c.support:
        if s not in k:
            raise PreconditionError(f"simplex {s} not in complex")
        for skip in range(len(s)):
            f = s[:skip] + s[skip + 1:]
            faces[f] = faces.get(f, 0) ^ 1
    return Chain(c.dimension - 1,
                 frozenset(f for f, odd in faces.items() if odd))


class _UnionFind:
    def __init__(self, items: Iterable[int]) -> None:
        self.parent = {x: x for x in items}
        self.count = len(self.parent)

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        self.count -= 1
        return True


def _component_count(k: SimplicialComplex) -> int:
    uf = _UnionFind(k.vertices)
    for u, v in k.edges:
        uf.union(u, v)
    return uf.count


def betti(k: SimplicialComplex, dim: int) -> int:
    """Betti number of the complex, dim in {0, 1}.

    beta0 counts connected components (isolated vertices included); beta1
    is dim Z1 − rank ∂2, computed by GF(2) column reduction of the triangle
    boundaries. The reduction stops as soon as the rank hits dim Z1, which
    is its ceiling, so dense well-covered complexes exit early.
    """
    if dim not in (0, 1):
        raise PreconditionError("only beta_0 and beta_1 are supported")
    key = ("betti", dim)
    if key in k._cache:
        return k._cache[key]
    comps = k._cache.get("components")
    if comps is None:
        comps = _component_count(k)
        k._cache["components"] = comps
    if dim == 0:
        k._cache[key] = comps
        return comps
    cycle_dim = len(k.edges) - len(k.vertices) + comps
    if cycle_dim == 0:
        k._cache[key] = 0
        return 0
    eix = k.edge_index()
    cols = [(eix[(u, v)], eix[(u, w)], eix[(v, w)])
            for (u, v, w) in sorted(k.triangles)]
    basis = kernels.build_d2_basis(cols, len(k.edges), ceiling=cycle_dim)
    b1 = cycle_dim - basis.rank
    k._cache[key] = b1
    return b1


def _witness_table(k: SimplicialComplex):
    """Reduced triangle-boundary columns with triangle-set witnesses."""
    table = k._cache.get("witness_table")
    if table is None:
        eix = k.edge_index()
        pivots: Dict[int, Tuple[int, FrozenSet[Simplex]]] = {}
        for t in sorted(k.triangles):
            u, v, w = t
            vec = (1 << eix[(u, v)]) | (1 << eix[(u, w)]) | (1 << eix[(v, w)])
            wit = frozenset((t,))
            while vec:
                p = vec.bit_length() - 1
                got = pivots.get(p)
                if got is None:
                    pivots[p] = (vec, wit)
                    break
                vec ^= got[0]
                wit ^= got[1]
        table = pivots
        k._cache["witness_table"] = table
    return table


def is_boundary(c: Chain, k: SimplicialComplex) -> Tuple[bool, Optional[Chain]]:
    """Decide whether a 1-cycle bounds in k; return a triangle witness if so.

    The witness is a 2-chain whose boundary equals c. Raises if c is not a
    cycle (or not supported in k).
    """
    if c.dimension != 1:
        raise PreconditionError("is_boundary takes a 1-chain")
    if boundary(c, k).support:
        raise PreconditionError("chain is not a cycle")
    vec = k.chain_bits(c)
    wit: FrozenSet[Simplex] = frozenset()
    pivots = _witness_table(k)
    while vec:
        p = vec.bit_length() - 1
        got = pivots.get(p)
        if got is None:
            return False, None
        vec ^= got[0]
        wit ^= got[1]
    return True, Chain(2, wit)


def simplicial_collapse(k: SimplicialComplex) -> SimplicialComplex:
    """Remove free faces until none remain.

    An edge contained in exactly one triangle is deleted together with that
    triangle; a vertex contained in exactly one edge is deleted with that
    edge. Both Betti numbers are preserved. Deterministic: candidates are
    processed in lexicographic order, repeatedly, to a fixed point.
    """
    verts = set(k.vertices)
    edges = set(k.edges)
    tris = set(k.triangles)
    tri_of_edge: Dict[Tuple[int, int], set] = {e: set() for e in edges}
    for t in tris:
        u, v, w = t
        for e in ((u, v), (u, w), (v, w)):
            tri_of_edge[e].add(t)
    edge_of_vert: Dict[int, set] = {v: set() for v in verts}
    for e in edges:
        edge_of_vert[e[0]].add(e)
        edge_of_vert[e[1]].add(e)

    changed = True
    while changed:
        changed = False
        for e in sorted(edges):
            owners = tri_of_edge.get(e)
            if owners is not None and len(owners) == 1:
                (t,) = owners
                u, v, w = t
                tris.discard(t)
                for f in ((u, v), (u, w), (v, w)):
                    tri_of_edge[f].discard(t)
                edges.discard(e)
                del tri_of_edge[e]
                edge_of_vert[e[0]].discard(e)
                edge_of_vert[e[1]].discard(e)
                changed = True
        for v in sorted(verts):
            owners = edge_of_vert.get(v)
            if owners is not None and len(owners) == 1:
                (e,) = owners
                if tri_of_edge.get(e):
                    continue  # edge still carries a triangle; not free
                edges.discard(e)
                del tri_of_edge[e]
                edge_of_vert[e[0]].discard(e)
                edge_of_vert[e[1]].discard(e)
                verts.discard(v)
                del edge_of_vert[v]
                changed = True
    return SimplicialComplex(k.n, verts, edges, tris)
