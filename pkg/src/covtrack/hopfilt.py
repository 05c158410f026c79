"""Hop-distance filtration: nested complexes that estimate hole sizes.

Level h connects every vertex pair at graph hop distance ≤ h in the base
complex's 1-skeleton (distances are always measured in the base, not
iterated), closed under flag triangles. A hole's depth — the last level
where it remains open — grows with its hop circumference, so depths act
as coordinate-free size estimates.

Per-level Betti numbers avoid materializing the (large, dense) upper
levels: triangles are enumerated lazily inside the GF(2) kernel and the
column reduction stops at the cycle-space dimension, which is an exact
ceiling for the rank of the triangle-boundary map. A level whose
reduction hits the ceiling has no holes at all, which also answers every
cycle-triviality query at that level without further work.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

from . import kernels
from .complexes import Chain, SimplicialComplex
from .errors import PreconditionError

__all__ = [
    "HopFiltration", "DepthProfile",
    "hop_filtration", "depth_profile", "cycle_depth", "size_metrics",
]

Edge = Tuple[int, int]


def _hop_edges(k: SimplicialComplex, m: int) -> List[Set[Edge]]:
    """Edge sets of levels 1..m: pairs at hop distance ≤ h, cumulative."""
    adj: Dict[int, List[int]] = {v: [] for v in k.vertices}
    for u, v in k.edges:
        adj[u].append(v)
        adj[v].append(u)
    levels: List[Set[Edge]] = [set() for _ in range(m)]
    for src in k.vertices:
        dist = {src: 0}
        q = deque((src,))
        while q:
            x = q.popleft()
            dx = dist[x]
            if dx == m:
                continue
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dx + 1
                    q.append(y)
        for y, d in dist.items():
            if y > src and d >= 1:
                levels[d - 1].add((src, y))
    for h in range(1, m):
        levels[h] |= levels[h - 1]
    return levels


class HopFiltration:
    """Levels K¹ ⊆ … ⊆ Kᵐ of the hop filtration of a base complex.

    Level 1 is the base itself (its own triangles, which for a Rips base
    are already the flag triangles); higher levels take the full flag
    closure of their edge set. Full complexes are materialized only via
    ``levels``; Betti numbers and cycle queries run on reduced bases.
    """

    def __init__(self, base: SimplicialComplex, m: int) -> None:
        if m < 1:
            raise PreconditionError("max depth m must be ≥ 1")
        self.base = base
        self.m = m
        self._edge_sets = _hop_edges(base, m)
        self._edge_sets[0] = set(base.edges)  # level 1 is the base exactly
        self._bases: List[Optional[object]] = [None] * m
        self._orders: List[Optional[Dict[Edge, int]]] = [None] * m
        self._cycle_dims: List[Optional[int]] = [None] * m
        self._levels: List[Optional[SimplicialComplex]] = [None] * m

    # -- lazy reduced bases --------------------------------------------

    def _components(self, edges: Set[Edge]) -> int:
        parent = {v: v for v in self.base.vertices}

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        count = len(parent)
        for u, v in edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                count -= 1
        return count

    def _level_basis(self, h: int):
        """(edge order, cycle dim, reduced triangle basis) of level h (1-based)."""
        i = h - 1
        if self._bases[i] is None:
            edges = self._edge_sets[i]
            order = {e: j for j, e in enumerate(sorted(edges))}
            comps = self._components(edges)
            cycle_dim = len(edges) - len(self.base.vertices) + comps
            if h == 1:
                eix = order
                cols = [(eix[(u, v)], eix[(u, w)], eix[(v, w)])
                        for (u, v, w) in sorted(self.base.triangles)]
                basis = kernels.build_d2_basis(cols, len(edges), ceiling=cycle_dim)
            else:
                basis = kernels.flag_d2_basis(
                    self.base.n, sorted(edges), ceiling=cycle_dim, edge_index=order)
            self._orders[i] = order
            self._cycle_dims[i] = cycle_dim
            self._bases[i] = basis
        return self._orders[i], self._cycle_dims[i], self._bases[i]

    def betti1(self, h: int) -> int:
        """First Betti number of level h."""
        if not 1 <= h <= self.m:
            raise PreconditionError(f"level {h} outside 1..{self.m}")
        _, cycle_dim, basis = self._level_basis(h)
        return cycle_dim - basis.rank

    def bounds_at(self, c: Chain, h: int) -> bool:
        """Whether the cycle bounds in level h."""
        order, _, basis = self._level_basis(h)
        if basis.saturated:
            return True
        bits = 0
        for e in c.support:
            bits |= 1 << order[e]
        return basis.reduces_to_zero(bits)

    # -- materialized levels (tests, interoperability) ------------------

    @property
    def levels(self) -> List[SimplicialComplex]:
        for h in range(1, self.m + 1):
            if self._levels[h - 1] is None:
                self._levels[h - 1] = self._materialize(h)
        return [lvl for lvl in self._levels]  # type: ignore[misc]

    def _materialize(self, h: int) -> SimplicialComplex:
        if h == 1:
            return self.base
        edges = sorted(self._edge_sets[h - 1])
        nbr: Dict[int, Set[int]] = {}
        for u, v in edges:
            nbr.setdefault(u, set()).add(v)
            nbr.setdefault(v, set()).add(u)
        tris = []
        for u, v in edges:
            for w in nbr[u] & nbr[v]:
                if w > v:
                    tris.append((u, v, w))
        return SimplicialComplex(self.base.n, self.base.vertices, edges, tris)


@dataclass(frozen=True)
class DepthProfile:
    """Holes killed per level step, plus censored survivors at the cap.

    kill_counts[h−1] is the drop in hole count from level h to h+1; the
    final entry is structurally zero because nothing beyond the cap is
    computed, and holes still open at level m are reported censored in
    survivors_at_m.
    """
    kill_counts: Tuple[int, ...]
    survivors_at_m: int
    diagnostics: Tuple[str, ...] = ()

    @property
    def m(self) -> int:
        return len(self.kill_counts)


def hop_filtration(k: SimplicialComplex, m: int) -> HopFiltration:
    """Build the hop filtration of a complex up to level m."""
    return HopFiltration(k, m)


def depth_profile(k: SimplicialComplex, m: int, *,
                  filtration: Optional[HopFiltration] = None) -> DepthProfile:
    """Per-level hole-death counts of the hop filtration.

    Hole counts cannot grow with the level; if a pathological input makes
    one do so anyway, the negative difference is clamped to zero and noted
    in the diagnostics rather than raising.
    """
    f = filtration if filtration is not None else hop_filtration(k, m)
    b = [f.betti1(h) for h in range(1, m + 1)]
    kills = []
    notes = []
    for h in range(1, m):
        diff = b[h - 1] - b[h]
        if diff < 0:
            notes.append(f"hole count rose from level {h} to {h + 1} "
                         f"({b[h - 1]} -> {b[h]}); clamped")
            diff = 0
        kills.append(diff)
    kills.append(0)
    return DepthProfile(tuple(kills), b[m - 1], tuple(notes))


def cycle_depth(c: Chain, f: HopFiltration) -> int:
    """Largest level at which the cycle is still not a boundary.

    0 means the cycle already bounds in the base; m means it survives the
    whole filtration (censored).
    """
    if c.dimension != 1:
        raise PreconditionError("cycle_depth takes a 1-chain")
    for e in c.support:
        if e not in f.base.edges:
            raise PreconditionError(f"edge {e} not in the base complex")
    from .complexes import boundary
    if boundary(c, f.base).support:
        raise PreconditionError("chain is not a cycle")
    for h in range(1, f.m + 1):
        if f.bounds_at(c, h):
            return h - 1
    return f.m


def size_metrics(profile: DepthProfile) -> Tuple[int, int]:
    """(sum of depths, sum of squared depths), censored holes at depth m."""
    m = profile.m
    s = m * profile.survivors_at_m
    sq = m * m * profile.survivors_at_m
    for h, count in enumerate(profile.kill_counts, start=1):
        s += h * count
        sq += h * h * count
    return s, sq
