"""Barcode summaries, hole-size weights, serialization, and SVG plots.

Two lifetime conventions coexist deliberately: ``sum_of_bars`` adds up
death − birth (an interval confined to one snapshot contributes zero),
while the lifetime histogram counts snapshots touched (death − birth + 1,
so the same interval lands in class 1). Downstream comparisons rely on
each; mixing them up shifts every class by one.

Rendering is hand-rolled SVG with fixed-precision coordinates so that the
same input produces byte-identical output everywhere.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .complexes import Chain
from .errors import FormatError, PreconditionError
from .hopfilt import cycle_depth, hop_filtration
from .tracking import TrackedBarcode
from .zigzag import Interval, PersistenceOutput, ZigzagSequence

__all__ = [
    "BarcodeStats", "WeightedBar", "WeightedBarcode",
    "stats", "stats_csv", "weight_bars",
    "to_json", "from_json", "render", "render_diagram",
]


@dataclass(frozen=True)
class BarcodeStats:
    num_bars: int
    sum_of_bars: int
    lt_counts: Tuple[int, ...]  # lt_counts[l-1] = bars touching exactly l snapshots


def stats(pers: PersistenceOutput, T: int) -> BarcodeStats:
    if T < 1:
        raise PreconditionError("need at least one snapshot")
    counts = [0] * T
    total = 0
    for iv in pers.intervals:
        if iv.death > T:
            raise PreconditionError(
                f"interval {iv} ends beyond the {T}-snapshot window")
        total += iv.death - iv.birth
        counts[iv.death - iv.birth] += 1
    return BarcodeStats(num_bars=len(pers.intervals), sum_of_bars=total,
                        lt_counts=tuple(counts))


def stats_csv(s: BarcodeStats) -> str:
    header = ["num_bars", "sum_of_bars"]
    header += [f"lt_{i}" for i in range(1, len(s.lt_counts) + 1)]
    row = [str(s.num_bars), str(s.sum_of_bars)]
    row += [str(c) for c in s.lt_counts]
    return ",".join(header) + "\n" + ",".join(row) + "\n"


@dataclass(frozen=True)
class WeightedBar:
    """An interval with optional per-snapshot weights and cycles.

    weights[j] and cycles[j] describe snapshot birth + j.
    """
    interval: Interval
    weights: Optional[Tuple[int, ...]] = None
    cycles: Optional[Tuple[Chain, ...]] = None

    def __post_init__(self) -> None:
        span = self.interval.death - self.interval.birth + 1
        for name, seq in (("weights", self.weights), ("cycles", self.cycles)):
            if seq is not None and len(seq) != span:
                raise PreconditionError(
                    f"{name} has {len(seq)} entries for a span of {span}")


@dataclass(frozen=True)
class WeightedBarcode:
    T: int
    bars: Tuple[WeightedBar, ...]

    def __post_init__(self) -> None:
        for bar in self.bars:
            if bar.interval.death > self.T:
                raise PreconditionError(
                    f"bar {bar.interval} ends beyond snapshot {self.T}")

    @staticmethod
    def from_intervals(T: int, intervals: Sequence[Interval]) -> "WeightedBarcode":
        return WeightedBarcode(T, tuple(WeightedBar(iv) for iv in intervals))


def weight_bars(tracked: TrackedBarcode, seq: ZigzagSequence,
                m: int) -> WeightedBarcode:
    """Attach hop-depth weights to every tracked bar at every alive snapshot.

    The weight at snapshot t is the depth of the bar's cycle there in the
    hop filtration of that snapshot, capped at m. Snapshots are processed
    independently; COVTRACK_THREADS caps the worker-thread count (serial
    when unset). The result does not depend on the thread count.
    """
    if tracked.T != seq.length:
        raise PreconditionError(
            f"tracked barcode covers {tracked.T} snapshots, sequence {seq.length}")
    per_snap: Dict[int, List[Tuple[int, Chain]]] = {}
    for idx, bar in enumerate(tracked.bars):
        for t, c in bar.cycles.items():
            per_snap.setdefault(t, []).append((idx, c))

    def depths_at(t: int) -> Dict[int, int]:
        filt = hop_filtration(seq.snapshots[t - 1], m)
        return {idx: cycle_depth(c, filt) for idx, c in per_snap[t]}

    order = sorted(per_snap)
    workers = int(os.environ.get("COVTRACK_THREADS", "1") or "1")
    if workers > 1 and len(order) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = dict(zip(order, pool.map(depths_at, order)))
    else:
        results = {t: depths_at(t) for t in order}

    bars = []
    for idx, bar in enumerate(tracked.bars):
        b, d = bar.interval.birth, bar.interval.death
        weights = tuple(results[t][idx] for t in range(b, d + 1))
        cycles = tuple(bar.cycles[t] for t in range(b, d + 1))
        bars.append(WeightedBar(bar.interval, weights, cycles))
    return WeightedBarcode(tracked.T, tuple(bars))


# ----------------------------------------------------------------------
# JSON round trip


def to_json(wb: WeightedBarcode) -> dict:
    bars = []
    for bar in wb.bars:
        obj: dict = {"birth": bar.interval.birth, "death": bar.interval.death}
        if bar.weights is not None:
            obj["weights"] = list(bar.weights)
        if bar.cycles is not None:
            obj["cycles"] = [[[u, v] for u, v in sorted(c.support)]
                             for c in bar.cycles]
        bars.append(obj)
    return {"T": wb.T, "bars": bars}


def from_json(obj: object) -> WeightedBarcode:
    if not isinstance(obj, dict):
        raise FormatError("barcode document must be a JSON object")
    T = obj.get("T")
    if not isinstance(T, int) or T < 1:
        raise FormatError("barcode document needs a positive integer 'T'")
    raw_bars = obj.get("bars")
    if not isinstance(raw_bars, list):
        raise FormatError("barcode document needs a 'bars' array")
    bars = []
    for k, raw in enumerate(raw_bars):
        where = f"bar {k}"
        if not isinstance(raw, dict):
            raise FormatError(f"{where}: expected an object")
        b, d = raw.get("birth"), raw.get("death")
        if not isinstance(b, int) or not isinstance(d, int):
            raise FormatError(f"{where}: birth and death must be integers")
        try:
            iv = Interval(b, d)
        except PreconditionError as exc:
            raise FormatError(f"{where}: {exc}") from exc
        span = d - b + 1
        weights = None
        if "weights" in raw:
            w = raw["weights"]
            if (not isinstance(w, list) or len(w) != span
                    or not all(isinstance(x, int) for x in w)):
                raise FormatError(f"{where}: weights must be {span} integers")
            weights = tuple(w)
        cycles = None
        if "cycles" in raw:
            cl = raw["cycles"]
            if not isinstance(cl, list) or len(cl) != span:
                raise FormatError(f"{where}: cycles must list {span} snapshots")
            parsed = []
            for t_off, edge_list in enumerate(cl):
                if not isinstance(edge_list, list) or not edge_list:
                    raise FormatError(
                        f"{where}: cycle at offset {t_off} must be a nonempty list")
                edges = set()
                for e in edge_list:
                    if (not isinstance(e, list) or len(e) != 2
                            or not all(isinstance(x, int) for x in e)):
                        raise FormatError(
                            f"{where}: each cycle edge must be a [u, v] pair")
                    u, v = e
                    if not 1 <= u < v:
                        raise FormatError(
                            f"{where}: edge [{u}, {v}] is not ordered 1 ≤ u < v")
                    edges.add((u, v))
                parsed.append(Chain(1, frozenset(edges)))
            cycles = tuple(parsed)
        try:
            bars.append(WeightedBar(iv, weights, cycles))
        except PreconditionError as exc:
            raise FormatError(f"{where}: {exc}") from exc
    try:
        return WeightedBarcode(T, tuple(bars))
    except PreconditionError as exc:
        raise FormatError(str(exc)) from exc


# ----------------------------------------------------------------------
# SVG rendering

_DEFAULT_STYLE: Mapping[str, object] = {
    "width": 720,
    "row_height": 16,
    "pad": 46,
    "base_thickness": 2.0,
    "thickness_per_weight": 1.6,
    "background": "#ffffff",
    "axis_color": "#444444",
}


def _hue(bar_id: int) -> int:
    return (17 + 61 * bar_id) % 360


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def render(wb: WeightedBarcode, style: Optional[Mapping[str, object]] = None) -> str:
    """Barcode picture: one row per bar, thickness tracking the weights.

    Bars are laid out sorted by (birth, death, position in the input),
    but keep their palette color from the input position, so re-sorting
    the input does not recolor bars.
    """
    st = dict(_DEFAULT_STYLE)
    if style:
        st.update(style)
    width = int(st["width"])
    row_h = float(st["row_height"])
    pad = float(st["pad"])
    base = float(st["base_thickness"])
    per_w = float(st["thickness_per_weight"])

    order = sorted(range(len(wb.bars)),
                   key=lambda i: (wb.bars[i].interval.birth,
                                  wb.bars[i].interval.death, i))
    height = 2 * pad + row_h * max(1, len(order))
    span = width - 2 * pad
    cell = span / max(wb.T - 1, 1)

    def x_of(t: float) -> float:
        if wb.T == 1:
            return pad + span / 2
        return pad + (t - 1) * cell

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{_fmt(height)}" viewBox="0 0 {width} {_fmt(height)}">',
        f'<rect width="{width}" height="{_fmt(height)}" fill="{st["background"]}"/>',
    ]
    axis_y = height - pad / 2
    parts.append(
        f'<line x1="{_fmt(pad)}" y1="{_fmt(axis_y)}" x2="{_fmt(width - pad)}" '
        f'y2="{_fmt(axis_y)}" stroke="{st["axis_color"]}" stroke-width="1"/>')
    tick_step = 1 if wb.T <= 30 else 5
    for t in range(1, wb.T + 1):
        if t % tick_step and t != 1 and t != wb.T:
            continue
        x = x_of(t)
        parts.append(
            f'<line x1="{_fmt(x)}" y1="{_fmt(axis_y - 3)}" x2="{_fmt(x)}" '
            f'y2="{_fmt(axis_y + 3)}" stroke="{st["axis_color"]}" stroke-width="1"/>')
        parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(axis_y + 14)}" font-size="10" '
            f'text-anchor="middle" fill="{st["axis_color"]}">{t}</text>')

    half = cell / 2 if wb.T > 1 else span / 4
    for rank, idx in enumerate(order):
        bar = wb.bars[idx]
        y = pad + (rank + 0.5) * row_h
        color = f"hsl({_hue(idx)},65%,42%)"
        b, d = bar.interval.birth, bar.interval.death
        for t in range(b, d + 1):
            w = bar.weights[t - b] if bar.weights is not None else 1
            thick = base + per_w * w
            x = x_of(t)
            parts.append(
                f'<rect x="{_fmt(x - half)}" y="{_fmt(y - thick / 2)}" '
                f'width="{_fmt(2 * half)}" height="{_fmt(thick)}" fill="{color}"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_diagram(pers: PersistenceOutput) -> str:
    """Persistence diagram: birth/death dots above the diagonal."""
    size = 420
    pad = 46.0
    T = pers.T
    lo, hi = 0.0, float(T + 1)
    span = size - 2 * pad

    def to_px(v: float) -> float:
        return pad + (v - lo) / (hi - lo) * span

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="#ffffff"/>',
        f'<line x1="{_fmt(to_px(lo))}" y1="{_fmt(size - to_px(lo))}" '
        f'x2="{_fmt(to_px(hi))}" y2="{_fmt(size - to_px(hi))}" '
        f'stroke="#999999" stroke-width="1"/>',
    ]
    for v in range(0, T + 2):
        x = to_px(v)
        parts.append(
            f'<text x="{_fmt(x)}" y="{_fmt(size - pad + 16)}" font-size="9" '
            f'text-anchor="middle" fill="#444444">{v}</text>')
        parts.append(
            f'<text x="{_fmt(pad - 10)}" y="{_fmt(size - x + 3)}" font-size="9" '
            f'text-anchor="end" fill="#444444">{v}</text>')
    for iv in sorted(pers.intervals, key=lambda iv: (iv.birth, iv.death)):
        parts.append(
            f'<circle cx="{_fmt(to_px(iv.birth))}" cy="{_fmt(size - to_px(iv.death))}" '
            f'r="4" fill="hsl(210,70%,45%)" fill-opacity="0.55"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
