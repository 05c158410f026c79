"""Zigzag persistence of first homology over an alternating inclusion
sequence of snapshot complexes and their pairwise unions.

The sequence K_1 → U_1 ← K_2 → U_2 ← … is replayed as an elementary
schedule of single-simplex insertions and deletions. One pass over the
schedule maintains, entirely over GF(2) bitsets:

  * a reduced basis of the current triangle-boundary space, each column
    carrying a triangle-set witness for its cycle;
  * a basis of the current 2-cycle space (witnesses whose boundary
    cancelled), needed to tell a rank-preserving triangle deletion from
    one that opens a hole;
  * an ordered list of alive one-dimensional classes, each with a
    representative cycle, adapted to the order classes entered.

Event rules per step:

  * edge insertion joining two already-connected vertices births a class
    (representative: the new edge plus a shortest path between its
    endpoints); the class is appended to the alive order.
  * triangle insertion whose boundary is already a boundary extends the
    2-cycle basis; otherwise the boundary is expressed over the alive
    representatives and the latest class in the alive order dies.
  * triangle deletion contained in some 2-cycle shrinks that basis (no
    homology event); otherwise it births a class represented by exactly
    the triangle's own boundary, prepended to the alive order (any cycle
    newly non-bounding is homologous to it in the smaller complex).
  * edge deletion kills the earliest alive class whose representative
    uses the edge; every later representative using the edge absorbs the
    dying one. If no representative uses it, the edge was a bridge and
    only connectivity changes.

Intervals are reported in snapshot indices 1..T: births during the
arrows around gap a land at snapshot a+1, deaths at snapshot a, and a
class whose birth index exceeds its death index existed only inside a
union complex and is discarded.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .complexes import SimplicialComplex, union_complex
from .errors import ConsistencyError, PreconditionError

__all__ = [
    "Interval", "TraceStep", "ZigzagSequence", "PersistenceOutput",
    "build_sequence", "elementary_schedule", "zigzag_persistence",
]


@dataclass(frozen=True, order=True)
class Interval:
    """Closed snapshot-index interval [birth, death], 1-based."""
    birth: int
    death: int

    def __post_init__(self) -> None:
        if not 1 <= self.birth <= self.death:
            raise PreconditionError(f"bad interval [{self.birth}, {self.death}]")

    def __contains__(self, i: int) -> bool:
        return self.birth <= i <= self.death


@dataclass(frozen=True)
class TraceStep:
    """One elementary move, with the homology event it triggered (if any).

    position 0 is the construction of the first snapshot from nothing;
    position a in 1..T−1 covers both arrows through union complex a.
    event is None, ("birth", bar_id) or ("death", bar_id).
    """
    op: str
    simplex: Tuple[int, ...]
    position: int
    event: Optional[Tuple[str, int]] = None


@dataclass
class ZigzagSequence:
    snapshots: List[SimplicialComplex]
    unions: List[SimplicialComplex]

    @property
    def length(self) -> int:
        return len(self.snapshots)


@dataclass
class PersistenceOutput:
    """Interval decomposition plus the annotated elementary trace."""
    T: int
    intervals: List[Interval]
    trace: List[TraceStep]
    bar_intervals: Dict[int, Optional[Interval]]  # None: union-only, discarded


def build_sequence(snapshots: Sequence[SimplicialComplex]) -> ZigzagSequence:
    """Assemble the alternating sequence with one union per adjacent pair."""
    snaps = list(snapshots)
    if not snaps:
        raise PreconditionError("need at least one snapshot")
    n = snaps[0].n
    for k in snaps:
        if k.n != n:
            raise PreconditionError("snapshots disagree on vertex universe")
    unions = [union_complex(a, b) for a, b in zip(snaps, snaps[1:])]
    return ZigzagSequence(snaps, unions)


def _sorted_simplices(simplices, reverse_dim: bool = False):
    return sorted(simplices, key=lambda s: (-len(s) if reverse_dim else len(s), s))


def _all_simplices(k: SimplicialComplex):
    for v in k.vertices:
        yield (v,)
    yield from k.edges
    yield from k.triangles


def elementary_schedule(seq: ZigzagSequence) -> List[TraceStep]:
    """Single-simplex steps realizing every arrow of the sequence.

    Insertions (into the union) go in dimension order, deletions (down to
    the next snapshot) in reverse dimension order, lexicographic within a
    dimension, so every intermediate simplex set is a valid complex.
    Replaying from snapshot 1 reproduces each complex in the sequence.
    """
    steps: List[TraceStep] = []
    for a, u in enumerate(seq.unions, start=1):
        k_prev, k_next = seq.snapshots[a - 1], seq.snapshots[a]
        ins = set(_all_simplices(u)) - set(_all_simplices(k_prev))
        dels = set(_all_simplices(u)) - set(_all_simplices(k_next))
        for s in _sorted_simplices(ins):
            steps.append(TraceStep("insert", s, a))
        for s in _sorted_simplices(dels, reverse_dim=True):
            steps.append(TraceStep("delete", s, a))
    return steps


@dataclass
class _Bar:
    id: int
    rep: int            # edge-bit set of the current representative cycle
    birth_phase: int
    kind: str           # "edge" | "triangle"


class _Pair:
    """One reduced boundary column: cycle bits + triangle-set witness."""
    __slots__ = ("cyc", "wit")

    def __init__(self, cyc: int, wit: int) -> None:
        self.cyc = cyc
        self.wit = wit


class Engine:
    """Sequential state machine over the elementary schedule.

    A recorder (see repcycle tracking) may observe snapshots and
    representative absorptions; it never influences decisions.
    """

    def __init__(self, recorder=None) -> None:
        self.recorder = recorder
        self.adj: Dict[int, Set[int]] = {}
        self.edge_bit: Dict[Tuple[int, int], int] = {}
        self.edge_by_bit: List[Tuple[int, int]] = []
        self.tri_bit: Dict[Tuple[int, int, int], int] = {}
        self.bound: Dict[int, int] = {}      # cycle pivot bit -> pair id
        self.pairs: Dict[int, _Pair] = {}
        self.wit_occ: Dict[int, Set[int]] = {}   # triangle bit -> pair ids
        self.z2: Dict[int, int] = {}         # z2 id -> triangle-bit vector
        self.z2_piv: Dict[int, int] = {}     # pivot triangle bit -> z2 id
        self.z2_occ: Dict[int, Set[int]] = {}
        self.bars: List[_Bar] = []
        self.trace: List[TraceStep] = []
        self.birth_phase: Dict[int, int] = {}
        self.death_phase: Dict[int, int] = {}
        self.bar_kind: Dict[int, str] = {}
        self._next_bar = 0
        self._next_pair = 0
        self._next_z2 = 0
        self._ntri = 0

    # -- id helpers ----------------------------------------------------

    def _ebit(self, e: Tuple[int, int]) -> int:
        b = self.edge_bit.get(e)
        if b is None:
            b = len(self.edge_by_bit)
            self.edge_bit[e] = b
            self.edge_by_bit.append(e)
        return b

    def _tbit(self, t: Tuple[int, int, int]) -> int:
        b = self.tri_bit.get(t)
        if b is None:
            b = len(self.tri_bit)
            self.tri_bit[t] = b
        return b

    def rep_edges(self, bits: int) -> Tuple[Tuple[int, int], ...]:
        out = []
        while bits:
            low = bits & -bits
            out.append(self.edge_by_bit[low.bit_length() - 1])
            bits ^= low
        return tuple(sorted(out))

    # -- reductions ----------------------------------------------------

    def _bound_reduce(self, vec: int, wit: int = 0) -> Tuple[int, int]:
        while vec:
            pid = self.bound.get(vec.bit_length() - 1)
            if pid is None:
                return vec, wit
            p = self.pairs[pid]
            vec ^= p.cyc
            wit ^= p.wit
        return 0, wit

    def _occ_toggle(self, occ: Dict[int, Set[int]], bits: int, owner: int) -> None:
        while bits:
            low = bits & -bits
            b = low.bit_length() - 1
            bits ^= low
            members = occ.setdefault(b, set())
            if owner in members:
                members.discard(owner)
            else:
                members.add(owner)

    # -- graph helpers -------------------------------------------------

    def _path_bits(self, u: int, v: int) -> Optional[int]:
        """Edge bits of a shortest u→v path in the current graph, else None."""
        if u not in self.adj or v not in self.adj:
            return None
        parent: Dict[int, int] = {u: u}
        q = deque((u,))
        while q:
            x = q.popleft()
            if x == v:
                break
            for y in sorted(self.adj[x]):
                if y not in parent:
                    parent[y] = x
                    q.append(y)
        if v not in parent:
            return None
        bits = 0
        x = v
        while x != u:
            px = parent[x]
            bits |= 1 << self.edge_bit[tuple(sorted((px, x)))]
            x = px
        return bits

    # -- schedule processing -------------------------------------------

    def run(self, seq: ZigzagSequence) -> PersistenceOutput:
        t_count = seq.length
        for s in _sorted_simplices(_all_simplices(seq.snapshots[0])):
            self._apply("insert", s, 0)
        self._record_snapshot(1)
        for a, u in enumerate(seq.unions, start=1):
            k_prev, k_next = seq.snapshots[a - 1], seq.snapshots[a]
            ins = set(_all_simplices(u)) - set(_all_simplices(k_prev))
            dels = set(_all_simplices(u)) - set(_all_simplices(k_next))
            for s in _sorted_simplices(ins):
                self._apply("insert", s, a)
            for s in _sorted_simplices(dels, reverse_dim=True):
                self._apply("delete", s, a)
            self._record_snapshot(a + 1)
        for bar in self.bars:
            self.death_phase[bar.id] = t_count

        bar_intervals: Dict[int, Optional[Interval]] = {}
        kept: List[Tuple[Interval, int]] = []
        for bid, bp in self.birth_phase.items():
            b, d = bp + 1, self.death_phase[bid]
            if b <= d:
                iv = Interval(b, d)
                bar_intervals[bid] = iv
                kept.append((iv, bid))
            else:
                bar_intervals[bid] = None
        kept.sort(key=lambda p: (p[0].birth, p[0].death, p[1]))
        return PersistenceOutput(
            T=t_count,
            intervals=[iv for iv, _ in kept],
            trace=self.trace,
            bar_intervals=bar_intervals,
        )

    def _record_snapshot(self, i: int) -> None:
        if self.recorder is not None:
            self.recorder.on_snapshot(i, self.bars)

    def _apply(self, op: str, s: Tuple[int, ...], phase: int) -> None:
        if op == "insert":
            event = (self._insert_vertex, self._insert_edge,
                     self._insert_triangle)[len(s) - 1](s, phase)
        else:
            event = (self._delete_vertex, self._delete_edge,
                     self._delete_triangle)[len(s) - 1](s, phase)
        self.trace.append(TraceStep(op, s, phase, event))
        if self._ntri != len(self.pairs) + len(self.z2):
            raise ConsistencyError("triangle bookkeeping out of balance")

    # -- insertions ----------------------------------------------------

    def _insert_vertex(self, s, phase) -> None:
        self.adj.setdefault(s[0], set())
        return None

    def _insert_edge(self, s, phase):
        u, v = s
        eb = self._ebit(s)
        path = self._path_bits(u, v)
        event = None
        if path is not None:
            bar = self._new_bar((1 << eb) | path, phase, "edge")
            self.bars.append(bar)
            event = ("birth", bar.id)
        self.adj.setdefault(u, set()).add(v)
        self.adj.setdefault(v, set()).add(u)
        return event

    def _insert_triangle(self, s, phase):
        u, v, w = s
        tb = self._tbit(s)
        vec = ((1 << self.edge_bit[(u, v)])
               | (1 << self.edge_bit[(u, w)])
               | (1 << self.edge_bit[(v, w)]))
        self._ntri += 1
        vec, wit = self._bound_reduce(vec, 1 << tb)
        if vec == 0:
            self._z2_insert(wit)
            return None
        return self._forward_death(vec, wit, phase)

    def _z2_insert(self, vec: int) -> None:
        while vec:
            zid = self.z2_piv.get(vec.bit_length() - 1)
            if zid is None:
                break
            vec ^= self.z2[zid]
        if vec == 0:
            raise ConsistencyError("2-cycle collapsed to zero on insert")
        zid = self._next_z2
        self._next_z2 += 1
        self.z2[zid] = vec
        self.z2_piv[vec.bit_length() - 1] = zid
        self._occ_toggle(self.z2_occ, vec, zid)

    def _forward_death(self, vec: int, wit: int, phase: int):
        # Express vec over the alive representatives modulo boundaries:
        # eliminate jointly against the boundary basis and a temporary
        # echelon of alive residues (boundary columns contribute nothing
        # to the combination). The alive part of the expression is unique,
        # and the alive class latest in the adapted order dies.
        tmp: Dict[int, Tuple[int, frozenset]] = {}
        order: Dict[int, int] = {pos_bar.id: pos for pos, pos_bar in enumerate(self.bars)}

        def eliminate(bv: int, combo: frozenset) -> Tuple[int, frozenset]:
            while bv:
                top = bv.bit_length() - 1
                pid = self.bound.get(top)
                if pid is not None:
                    bv ^= self.pairs[pid].cyc
                    continue
                got = tmp.get(top)
                if got is None:
                    break
                bv ^= got[0]
                combo ^= got[1]
            return bv, combo

        for bar in self.bars:
            bv, combo = eliminate(bar.rep, frozenset((bar.id,)))
            if bv == 0:
                raise ConsistencyError("alive representatives became dependent")
            tmp[bv.bit_length() - 1] = (bv, combo)
        rem, used = eliminate(vec, frozenset())
        if rem:
            raise ConsistencyError("cycle not expressible over alive classes")
        involved = sorted(used, key=order.__getitem__)
        dying_id = involved[-1]

        # The involved classes now satisfy one relation; the survivor that
        # was born first may trade its representative for the relation sum
        # when that is tighter.
        delta = 0
        by_id = {bar.id: bar for bar in self.bars}
        for bid in involved:
            delta ^= by_id[bid].rep
        survivors = involved[:-1]
        if survivors and delta:
            oldest = min(survivors,
                         key=lambda bid: (self.birth_phase[bid], order[bid]))
            bar = by_id[oldest]
            cand = bar.rep ^ delta
            if (cand.bit_count(), self.rep_edges(cand)) < (bar.rep.bit_count(),
                                                           self.rep_edges(bar.rep)):
                bar.rep = cand

        pid = self._next_pair
        self._next_pair += 1
        self.pairs[pid] = _Pair(vec, wit)
        self.bound[vec.bit_length() - 1] = pid
        self._occ_toggle(self.wit_occ, wit, pid)
        dying = by_id[dying_id]
        self.bars.remove(dying)
        self.death_phase[dying_id] = phase
        return ("death", dying_id)

    def _new_bar(self, rep: int, phase: int, kind: str) -> _Bar:
        bar = _Bar(self._next_bar, rep, phase, kind)
        self._next_bar += 1
        self.birth_phase[bar.id] = phase
        self.bar_kind[bar.id] = kind
        return bar

    # -- deletions -----------------------------------------------------

    def _delete_triangle(self, s, phase):
        tb = self.tri_bit[s]
        self._ntri -= 1
        zids = self.z2_occ.get(tb)
        if zids:
            z0 = min(zids, key=lambda z: self.z2[z].bit_length())
            zvec = self.z2[z0]
            for pid in list(self.wit_occ.get(tb, ())):
                p = self.pairs[pid]
                p.wit ^= zvec
                self._occ_toggle(self.wit_occ, zvec, pid)
            for zid in list(zids):
                if zid == z0:
                    continue
                old_piv = self.z2[zid].bit_length() - 1
                self.z2[zid] ^= zvec
                if self.z2[zid].bit_length() - 1 != old_piv:
                    raise ConsistencyError("2-cycle pivot discipline broken")
                self._occ_toggle(self.z2_occ, zvec, zid)
            del self.z2_piv[zvec.bit_length() - 1]
            self._occ_toggle(self.z2_occ, zvec, z0)
            del self.z2[z0]
            return None

        pids = self.wit_occ.get(tb)
        if not pids:
            raise ConsistencyError("deleted triangle in no witness and no 2-cycle")
        j0 = min(pids, key=lambda j: self.pairs[j].cyc.bit_length())
        p0 = self.pairs[j0]
        for pid in list(pids):
            if pid == j0:
                continue
            p = self.pairs[pid]
            old_piv = p.cyc.bit_length() - 1
            p.cyc ^= p0.cyc
            if p.cyc.bit_length() - 1 != old_piv:
                raise ConsistencyError("boundary pivot discipline broken")
            p.wit ^= p0.wit
            self._occ_toggle(self.wit_occ, p0.wit, pid)
        del self.bound[p0.cyc.bit_length() - 1]
        self._occ_toggle(self.wit_occ, p0.wit, j0)
        del self.pairs[j0]

        u, v, w = s
        rep = ((1 << self.edge_bit[(u, v)])
               | (1 << self.edge_bit[(u, w)])
               | (1 << self.edge_bit[(v, w)]))
        bar = self._new_bar(rep, phase, "triangle")
        self.bars.insert(0, bar)
        return ("birth", bar.id)

    def _delete_edge(self, s, phase):
        eb = self.edge_bit[s]
        mask = 1 << eb
        users = [bar for bar in self.bars if bar.rep & mask]
        event = None
        if users:
            dying = users[0]
            for bar in users[1:]:
                bar.rep ^= dying.rep
                if bar.rep == 0:
                    raise ConsistencyError("representative vanished on absorption")
                if self.recorder is not None:
                    self.recorder.on_absorb(bar.id, dying.id)
            self.bars.remove(dying)
            self.death_phase[dying.id] = phase
            event = ("death", dying.id)
        u, v = s
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        return event

    def _delete_vertex(self, s, phase):
        v = s[0]
        if self.adj.get(v):
            raise ConsistencyError(f"deleting vertex {v} with incident edges")
        self.adj.pop(v, None)
        return None


def zigzag_persistence(seq: ZigzagSequence, recorder=None) -> PersistenceOutput:
    """Decompose the H1 zigzag module of the sequence into intervals.

    Deterministic: a fixed input yields an identical interval multiset and
    elementary trace on every run.
    """
    return Engine(recorder).run(seq)
