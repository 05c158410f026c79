"""Mobile sensor simulation on the unit square, plus coverage ground truth.

Node motion uses a counter-based Philox generator ("philox4x64" in config
echoes) and an explicit Box–Muller transform, so a seed pins the entire
trajectory byte-for-byte across platforms. Walls reflect elastically: a
proposed coordinate is folded back into [0, 1] by the period-2 triangle
map, and in the straight-line model the velocity component flips sign
whenever its axis folded, which preserves speed exactly.

Coverage ground truth is geometric, not topological: a grid of cell
centers is tested against the union of sensing disks, and uncovered
pockets are separated from the uncovered fringe by 4-connectivity to the
frame boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import ndimage

from .complexes import SimplicialComplex
from .errors import PreconditionError

__all__ = [
    "MobilityParams", "Trace", "CoverageStats",
    "simulate", "adjacency_at", "grid_coverage", "interval_coverage",
    "cech_complex", "GENERATOR_NAME",
]

GENERATOR_NAME = "philox4x64"

_MODELS = ("brownian", "line")


@dataclass(frozen=True)
class MobilityParams:
    model: str
    n: int
    T: int
    r: float
    sigma: Optional[float] = None  # defaults to 0.1 * r
    seed: int = 0

    def __post_init__(self) -> None:
        if self.model not in _MODELS:
            raise PreconditionError(f"unknown model {self.model!r}; "
                                    f"expected one of {_MODELS}")
        if self.n < 1:
            raise PreconditionError("need at least one node")
        if self.T < 1:
            raise PreconditionError("need at least one snapshot")
        if not (self.r > 0):
            raise PreconditionError("sensing radius must be positive")
        if self.sigma is not None and not (self.sigma > 0):
            raise PreconditionError("step scale must be positive")

    @property
    def step_sd(self) -> float:
        return self.sigma if self.sigma is not None else 0.1 * self.r


@dataclass(frozen=True)
class Trace:
    """Node positions per snapshot: positions[t−1, i−1] = (x, y)."""
    n: int
    T: int
    r: float
    positions: np.ndarray  # float64, shape (T, n, 2), all in [0, 1]

    def __post_init__(self) -> None:
        p = self.positions
        if p.shape != (self.T, self.n, 2):
            raise PreconditionError(
                f"positions shape {p.shape} != {(self.T, self.n, 2)}")


def _box_muller(u: np.ndarray) -> np.ndarray:
    """Standard normals from uniform pairs; u has shape (k, 2)."""
    radius = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
    angle = 2.0 * np.pi * u[:, 1]
    return np.stack([radius * np.cos(angle), radius * np.sin(angle)], axis=1)


def _fold(p: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Reflect coordinates into [0, 1]; also report which ones folded."""
    q = np.mod(p, 2.0)
    folded = q > 1.0
    q = np.where(folded, 2.0 - q, q)
    return q, folded


def simulate(params: MobilityParams) -> Trace:
    """Run the mobility model; snapshot 1 is the initial placement."""
    rng = np.random.Generator(np.random.Philox(key=params.seed))
    n, T = params.n, params.T
    sd = params.step_sd
    positions = np.empty((T, n, 2), dtype=np.float64)
    positions[0] = rng.random((n, 2))
    if params.model == "line":
        velocity = sd * _box_muller(rng.random((n, 2)))
        for t in range(1, T):
            moved = positions[t - 1] + velocity
            positions[t], folded = _fold(moved)
            velocity = np.where(folded, -velocity, velocity)
    else:
        for t in range(1, T):
            step = sd * _box_muller(rng.random((n, 2)))
            positions[t], _ = _fold(positions[t - 1] + step)
    return Trace(n=n, T=T, r=params.r, positions=positions)


def adjacency_at(trace: Trace, t: int) -> np.ndarray:
    """Symmetric 0/1 communication matrix at snapshot t (distance ≤ 2r)."""
    if not 1 <= t <= trace.T:
        raise PreconditionError(f"snapshot {t} outside 1..{trace.T}")
    pos = trace.positions[t - 1]
    delta = pos[:, None, :] - pos[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", delta, delta)
    adj = (d2 <= (2.0 * trace.r) ** 2).astype(np.uint8)
    np.fill_diagonal(adj, 0)
    return adj


@dataclass(frozen=True)
class CoverageStats:
    proportion_covered: float
    hole_area: float


def _covered_mask(pos: np.ndarray, r: float, res: int) -> np.ndarray:
    """Boolean res×res mask of grid cells whose center some disk covers."""
    mask = np.zeros((res, res), dtype=bool)
    centers = (np.arange(res) + 0.5) / res
    r2 = r * r
    for x, y in pos:
        i0 = max(0, int(np.floor((x - r) * res - 0.5)))
        i1 = min(res - 1, int(np.ceil((x + r) * res - 0.5)))
        j0 = max(0, int(np.floor((y - r) * res - 0.5)))
        j1 = min(res - 1, int(np.ceil((y + r) * res - 0.5)))
        if i0 > i1 or j0 > j1:
            continue
        dx2 = (centers[i0:i1 + 1] - x) ** 2
        dy2 = (centers[j0:j1 + 1] - y) ** 2
        mask[i0:i1 + 1, j0:j1 + 1] |= dx2[:, None] + dy2[None, :] <= r2
    return mask


def _hole_fraction(uncovered: np.ndarray) -> float:
    """Fraction of the square in uncovered pockets sealed off from the frame."""
    labels, count = ndimage.label(uncovered)  # default structure: 4-connectivity
    if count == 0:
        return 0.0
    border = np.unique(np.concatenate([
        labels[0, :], labels[-1, :], labels[:, 0], labels[:, -1]]))
    keep = np.ones(count + 1, dtype=bool)
    keep[0] = False
    keep[border] = False
    res = uncovered.shape[0]
    return float(np.count_nonzero(keep[labels])) / float(res * res)


def grid_coverage(trace: Trace, t: int, grid_resolution: int = 512) -> CoverageStats:
    """Covered fraction and interior-hole fraction at snapshot t."""
    if grid_resolution < 64:
        raise PreconditionError("grid resolution below 64 is too coarse")
    if not 1 <= t <= trace.T:
        raise PreconditionError(f"snapshot {t} outside 1..{trace.T}")
    mask = _covered_mask(trace.positions[t - 1], trace.r, grid_resolution)
    prop = float(np.count_nonzero(mask)) / float(mask.size)
    return CoverageStats(proportion_covered=prop, hole_area=_hole_fraction(~mask))


def interval_coverage(trace: Trace, r: float,
                      grid_resolution: int = 512) -> np.ndarray:
    """Fraction of cells covered at some snapshot ≤ t, for every t.

    The result is nondecreasing in t by construction.
    """
    if grid_resolution < 64:
        raise PreconditionError("grid resolution below 64 is too coarse")
    if not (r > 0):
        raise PreconditionError("sensing radius must be positive")
    acc = np.zeros((grid_resolution, grid_resolution), dtype=bool)
    out = np.empty(trace.T, dtype=np.float64)
    for t in range(trace.T):
        acc |= _covered_mask(trace.positions[t], r, grid_resolution)
        out[t] = np.count_nonzero(acc) / acc.size
    return out


def cech_complex(positions: Sequence[Sequence[float]], r: float) -> SimplicialComplex:
    """Nerve of sensing disks of radius r, up to dimension 2.

    Edges appear when two disks meet (centers within 2r); a triangle
    appears only when the three disks share a common point, i.e. the
    minimum enclosing circle of the three centers has radius ≤ r. The
    1-skeleton therefore matches the proximity complex while triangles
    may be strictly fewer.
    """
    pos = np.asarray(positions, dtype=np.float64)
    if pos.ndim != 2 or pos.shape[1] != 2:
        raise PreconditionError("positions must be an (n, 2) array")
    if not (r > 0):
        raise PreconditionError("sensing radius must be positive")
    n = pos.shape[0]
    delta = pos[:, None, :] - pos[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", delta, delta)
    lim = (2.0 * r) ** 2
    edges = [(i + 1, j + 1) for i in range(n) for j in range(i + 1, n)
             if d2[i, j] <= lim]
    nbr = [set() for _ in range(n)]
    for u, v in edges:
        nbr[u - 1].add(v - 1)
        nbr[v - 1].add(u - 1)
    r2 = r * r
    triangles = []
    for u, v in edges:
        i, j = u - 1, v - 1
        for w in nbr[i] & nbr[j]:
            if w <= j:
                continue
            if _min_enclosing_radius_sq(pos[i], pos[j], pos[w]) <= r2:
                triangles.append((u, v, w + 1))
    return SimplicialComplex(n, range(1, n + 1), edges, triangles)


def _min_enclosing_radius_sq(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> float:
    """Squared radius of the smallest circle containing three points."""
    ab = float(np.dot(b - a, b - a))
    ac = float(np.dot(c - a, c - a))
    bc = float(np.dot(c - b, c - b))
    longest = max(ab, ac, bc)
    if longest >= ab + ac + bc - longest:
        # Right or obtuse: the longest side is a diameter.
        return longest / 4.0
    # Acute: circumcircle. 16·area² via the cross product.
    cross = float((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
    area16 = 4.0 * cross * cross
    return (ab * ac * bc) / area16
