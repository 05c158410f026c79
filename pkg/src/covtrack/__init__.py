"""covtrack: coverage-hole detection and tracking for mobile sensor networks.

The package follows holes in the communication graph of moving sensors
through time: snapshot complexes are chained through their unions, every
hole becomes a birth–death interval with a representative cycle per
snapshot, and hop-filtration depths grade holes by size. A simulator and
geometric coverage ground truth close the loop for experiments.
"""

from .errors import (CovtrackError, FormatError, PreconditionError,
                     ConsistencyError)
from .complexes import (Chain, SimplicialComplex, rips_from_adjacency,
                        union_complex, boundary, betti, is_boundary,
                        simplicial_collapse)
from .zigzag import (Interval, TraceStep, ZigzagSequence, PersistenceOutput,
                     build_sequence, elementary_schedule, zigzag_persistence)
from .tracking import TrackedBar, TrackedBarcode, track, repair_cycle
from .hopfilt import (HopFiltration, DepthProfile, hop_filtration,
                      depth_profile, cycle_depth, size_metrics)
from .mobility import (MobilityParams, Trace, CoverageStats, simulate,
                       adjacency_at, grid_coverage, interval_coverage,
                       cech_complex)
from .barcode import (BarcodeStats, WeightedBar, WeightedBarcode, stats,
                      stats_csv, weight_bars, to_json, from_json, render,
                      render_diagram)
from .formats import (atomic_write, write_config, format_trace, parse_trace,
                      format_snapshots, parse_snapshots)

__version__ = "0.1.0"

__all__ = [
    "CovtrackError", "FormatError", "PreconditionError", "ConsistencyError",
    "Chain", "SimplicialComplex", "rips_from_adjacency", "union_complex",
    "boundary", "betti", "is_boundary", "simplicial_collapse",
    "Interval", "TraceStep", "ZigzagSequence", "PersistenceOutput",
    "build_sequence", "elementary_schedule", "zigzag_persistence",
    "TrackedBar", "TrackedBarcode", "track", "repair_cycle",
    "HopFiltration", "DepthProfile", "hop_filtration", "depth_profile",
    "cycle_depth", "size_metrics",
    "MobilityParams", "Trace", "CoverageStats", "simulate", "adjacency_at",
    "grid_coverage", "interval_coverage", "cech_complex",
    "BarcodeStats", "WeightedBar", "WeightedBarcode", "stats", "stats_csv",
    "weight_bars", "to_json", "from_json", "render", "render_diagram",
    "atomic_write", "write_config", "format_trace", "parse_trace",
    "format_snapshots", "parse_snapshots",
    "__version__",
]
