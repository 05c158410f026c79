"""Representative 1-cycles for every barcode interval at every snapshot.

The decomposition engine already keeps one representative per alive class;
this module re-runs it with a recorder attached and turns the raw per-
snapshot representatives into chains that satisfy the tracking contract:

  * each stored chain is a nontrivial cycle in its snapshot complex, and
    the alive set forms an H1 basis there;
  * consecutive chains of one bar are homologous in the union complex
    between their snapshots.

The second point needs care. When a class dies at an edge deletion, every
later alive representative using that edge absorbs the dying one — a
basis change, not a homologous continuation. The fix is retroactive: the
surviving bar's earlier stored cycles are corrected by the dying bar's
stored cycles over the overlap of their lifetimes, which restores the
homologous-continuation property at every seam (the absorbed class's own
records satisfy it, and the sums telescope). Absorptions compose, so each
bar carries an XOR-set of the bars folded into it; materialization sums
the recorded histories over that set. Dying classes that never reached a
snapshot have no records and contribute nothing — their value at the
absorption moment was already a boundary in the surrounding union.

Stored cycles are tightened last: any boundary triangle of the snapshot
complex whose addition strictly shrinks the support is folded in, which
never changes the homology class.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Mapping, Optional, Set, Tuple

from .complexes import Chain, SimplicialComplex, boundary, is_boundary
from .errors import ConsistencyError, PreconditionError
from .zigzag import Engine, Interval, PersistenceOutput, ZigzagSequence

__all__ = ["TrackedBar", "TrackedBarcode", "track", "repair_cycle"]

Edge = Tuple[int, int]


@dataclass(frozen=True)
class TrackedBar:
    """One interval with a representative cycle per alive snapshot."""
    interval: Interval
    cycles: Mapping[int, Chain]


@dataclass
class TrackedBarcode:
    T: int
    bars: List[TrackedBar]

    def __iter__(self):
        return iter(self.bars)

    def __len__(self) -> int:
        return len(self.bars)


class _Recorder:
    """Observes the engine: per-snapshot representatives and absorptions."""

    def __init__(self) -> None:
        self.records: Dict[int, Dict[int, int]] = {}
        self.comp: Dict[int, Set[int]] = {}

    def on_snapshot(self, snap: int, bars) -> None:
        for bar in bars:
            self.records.setdefault(bar.id, {})[snap] = bar.rep

    def on_absorb(self, absorber: int, dying: int) -> None:
        acc = self.comp.setdefault(absorber, set())
        acc.symmetric_difference_update(self.comp.get(dying, ()))
        acc.symmetric_difference_update((dying,))


def _triangles_by_edge(k: SimplicialComplex) -> Dict[Edge, Tuple[Tuple[int, int, int], ...]]:
    out = k._cache.get("tri_by_edge")
    if out is None:
        acc: Dict[Edge, List] = {}
        for t in sorted(k.triangles):
            u, v, w = t
            for e in ((u, v), (u, w), (v, w)):
                acc.setdefault(e, []).append(t)
        out = {e: tuple(ts) for e, ts in acc.items()}
        k._cache["tri_by_edge"] = out
    return out


def _tighten(support: FrozenSet[Edge], k: SimplicialComplex) -> FrozenSet[Edge]:
    """Greedily fold in boundary triangles while that strictly shrinks support."""
    tri_by_edge = _triangles_by_edge(k)
    while True:
        counts: Dict[Tuple[int, int, int], int] = {}
        for e in support:
            for t in tri_by_edge.get(e, ()):
                counts[t] = counts.get(t, 0) + 1
        shrunk = None
        for t in sorted(t for t, c in counts.items() if c >= 2):
            u, v, w = t
            cand = support ^ frozenset(((u, v), (u, w), (v, w)))
            if len(cand) < len(support):
                shrunk = cand
                break
        if shrunk is None:
            return support
        support = shrunk


def track(seq: ZigzagSequence, pers: PersistenceOutput) -> TrackedBarcode:
    """Tracked representative cycles for every interval of the barcode.

    Re-derives the decomposition from the sequence and cross-checks it
    against the given output; a mismatch means the two were produced from
    different inputs and raises a consistency error.
    """
    rec = _Recorder()
    eng = Engine(rec)
    out = eng.run(seq)
    if (out.T != pers.T or out.intervals != pers.intervals
            or out.trace != pers.trace):
        raise ConsistencyError("persistence output does not match this sequence")

    bars: List[TrackedBar] = []
    order = sorted(
        ((iv, bid) for bid, iv in out.bar_intervals.items() if iv is not None),
        key=lambda p: (p[0].birth, p[0].death, p[1]))
    for iv, bid in order:
        own = rec.records.get(bid, {})
        folded = [rec.records.get(y, {}) for y in rec.comp.get(bid, ())]
        cycles: Dict[int, Chain] = {}
        for snap in range(iv.birth, iv.death + 1):
            bits = own[snap]
            for other in folded:
                bits ^= other.get(snap, 0)
            if bits == 0:
                raise ConsistencyError(
                    f"empty representative for interval {iv} at snapshot {snap}")
            support = frozenset(eng.rep_edges(bits))
            support = _tighten(support, seq.snapshots[snap - 1])
            cycles[snap] = Chain(1, support)
        bars.append(TrackedBar(iv, cycles))
    return TrackedBarcode(out.T, bars)


def repair_cycle(c: Chain, k_next: SimplicialComplex,
                 u: SimplicialComplex) -> Optional[Chain]:
    """Carry a cycle from the union complex into the next snapshot.

    Returns a cycle supported in k_next and homologous to c inside u,
    preferring small support; returns None when no such nontrivial cycle
    exists — the signal that the tracked class dies at this arrow.
    """
    if c.dimension != 1:
        raise PreconditionError("repair_cycle takes a 1-chain")
    for e in c.support:
        if e not in u.edges:
            raise PreconditionError(f"cycle edge {e} not in the union complex")
    if boundary(c, u).support:
        raise PreconditionError("chain is not a cycle")

    if is_boundary(c, u)[0]:
        return None  # trivial in the union: the tracked class dies here
    if c.support <= k_next.edges:
        return c  # no repair needed, returned verbatim

    # Solve for a 2-chain of the union whose boundary cancels c exactly on
    # the edges missing from k_next.
    forbidden = sorted(u.edges - k_next.edges)
    fidx = {e: i for i, e in enumerate(forbidden)}
    target = 0
    for e in c.support:
        i = fidx.get(e)
        if i is not None:
            target |= 1 << i
    pivots: Dict[int, Tuple[int, FrozenSet]] = {}
    for t in sorted(u.triangles):
        tu, tv, tw = t
        vec = 0
        for e in ((tu, tv), (tu, tw), (tv, tw)):
            i = fidx.get(e)
            if i is not None:
                vec |= 1 << i
        wit: FrozenSet = frozenset((t,))
        while vec:
            got = pivots.get(vec.bit_length() - 1)
            if got is None:
                pivots[vec.bit_length() - 1] = (vec, wit)
                break
            vec ^= got[0]
            wit ^= got[1]
    used: FrozenSet = frozenset()
    while target:
        got = pivots.get(target.bit_length() - 1)
        if got is None:
            return None  # class cannot be pushed into k_next: bar death
        target ^= got[0]
        used ^= got[1]

    support = set(c.support)
    for t in used:
        tu, tv, tw = t
        for e in ((tu, tv), (tu, tw), (tv, tw)):
            if e in support:
                support.discard(e)
            else:
                support.add(e)
    if not support <= k_next.edges:
        raise ConsistencyError("repair left support outside the target complex")
    # Nontrivial in the union and homologous to the repaired chain, so the
    # result is a nonempty cycle that is nontrivial in k_next as well.
    return Chain(1, _tighten(frozenset(support), k_next))
