"""Geometry of the stacked split-ring pair and its discretized conductor model.

The resonator is two coaxial split rings printed on facing boards, stacked
along z and separated by ``ring_separation_mm``.  All models downstream
(circuit, field map) read the geometry from :class:`ResonatorGeometry`, which
is the single source of truth for the five design dimensions plus material
parameters.  Lengths are millimeters unless a suffix says otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidGeometry

__all__ = [
    "ResonatorGeometry",
    "CurrentSegmentSet",
    "REFERENCE_GEOMETRY",
    "validate_geometry",
    "discretize",
    "bore_diameter_mm",
]

MIN_SEGMENTS_PER_RING = 12


@dataclass(frozen=True)
class ResonatorGeometry:
    """Dimensions and material parameters of the split-ring pair.

    ring_radius_mm:          strip centerline radius R
    strip_width_mm:          radial width w of the printed strip
    split_gap_mm:            arc length of the split in each ring
    feed_gap_mm:             gap between feed line and ring (enters only
                             through the feed capacitance, never the field)
    ring_separation_mm:      axial distance d between the two ring planes
    substrate_permittivity:  relative permittivity of the board
    conductor_thickness_um:  copper thickness
    """

    ring_radius_mm: float
    strip_width_mm: float
    split_gap_mm: float
    feed_gap_mm: float
    ring_separation_mm: float
    substrate_permittivity: float = 10.2
    conductor_thickness_um: float = 35.0

    def replace(self, **kwargs) -> "ResonatorGeometry":
        return replace(self, **kwargs)


#: Default design the calibration constants in :mod:`splitring.circuit` are
#: anchored against (symmetric resonance at the NV spin transition, 2.87 GHz).
REFERENCE_GEOMETRY = ResonatorGeometry(
    ring_radius_mm=2.9,
    strip_width_mm=1.0,
    split_gap_mm=0.4,
    feed_gap_mm=0.1,
    ring_separation_mm=2.2,
    substrate_permittivity=10.2,
    conductor_thickness_um=35.0,
)


def validate_geometry(g: ResonatorGeometry) -> ResonatorGeometry:
    """Check every geometric invariant; return ``g`` unchanged if all hold.

    Raises :class:`InvalidGeometry` naming the violated constraint.
    """
    lengths = {
        "ring_radius_mm": g.ring_radius_mm,
        "strip_width_mm": g.strip_width_mm,
        "split_gap_mm": g.split_gap_mm,
        "feed_gap_mm": g.feed_gap_mm,
        "ring_separation_mm": g.ring_separation_mm,
        "substrate_permittivity": g.substrate_permittivity,
        "conductor_thickness_um": g.conductor_thickness_um,
    }
    for name, value in lengths.items():
        if not math.isfinite(value) or value <= 0.0:
            raise InvalidGeometry(f"{name} must be strictly positive, got {value!r}")
    circumference = 2.0 * math.pi * g.ring_radius_mm
    if g.split_gap_mm >= circumference:
        raise InvalidGeometry(
            f"split_gap exceeds circumference ({g.split_gap_mm} >= {circumference:.4g} mm)"
        )
    if g.feed_gap_mm >= circumference:
        raise InvalidGeometry(
            f"feed_gap exceeds circumference ({g.feed_gap_mm} >= {circumference:.4g} mm)"
        )
    if g.strip_width_mm >= g.ring_radius_mm:
        raise InvalidGeometry(
            f"strip_width must be narrower than ring_radius "
            f"({g.strip_width_mm} >= {g.ring_radius_mm} mm)"
        )
    return g


def bore_diameter_mm(g: ResonatorGeometry) -> float:
    """Clear bore diameter 2(R - w/2) available for a sample."""
    return 2.0 * (g.ring_radius_mm - 0.5 * g.strip_width_mm)


@dataclass(frozen=True)
class CurrentSegmentSet:
    """Straight-segment discretization of the two rings.

    ``starts``/``ends`` are (N, 3) arrays in millimeters; ``weights`` scale
    each segment's current relative to its ring current; ``ring_index`` is 0
    for the ring at z = -d/2 and 1 for the ring at z = +d/2.  Consecutive
    segments of one ring share endpoints, so each ring is a closed or
    gap-interrupted polyline in its plane.
    """

    starts: np.ndarray
    ends: np.ndarray
    weights: np.ndarray
    ring_index: np.ndarray
    segments_per_ring: int

    def __post_init__(self):
        n = self.starts.shape[0]
        if self.ends.shape != (n, 3) or self.starts.shape != (n, 3):
            raise ValueError("starts/ends must be (N, 3) arrays")
        if self.weights.shape != (n,) or self.ring_index.shape != (n,):
            raise ValueError("weights/ring_index must be (N,) arrays")

    def __len__(self) -> int:
        return self.starts.shape[0]

    def total_length_mm(self) -> float:
        return float(np.linalg.norm(self.ends - self.starts, axis=1).sum())

    def for_ring(self, index: int) -> "CurrentSegmentSet":
        mask = self.ring_index == index
        return CurrentSegmentSet(
            starts=self.starts[mask],
            ends=self.ends[mask],
            weights=self.weights[mask],
            ring_index=self.ring_index[mask],
            segments_per_ring=self.segments_per_ring,
        )


def _ring_vertices(
    radius_mm: float,
    z_mm: float,
    n_segments: int,
    gap_halfwidth_rad: float,
    split_azimuth_rad: float,
) -> np.ndarray:
    """Vertices of one ring polyline, (n_segments + 1, 3).

    The chord polygon is drawn at a slightly enlarged vertex radius
    r_v = R * sqrt(step / sin(step)) so the straight-segment loop carries the
    same magnetic moment as the ideal arc; this cancels the O(step^2)
    discretization error of the on-axis field.
    """
    if gap_halfwidth_rad > 0.0:
        theta0 = split_azimuth_rad + gap_halfwidth_rad
        span = 2.0 * math.pi - 2.0 * gap_halfwidth_rad
        theta = theta0 + span * np.arange(n_segments + 1) / n_segments
    else:
        theta = split_azimuth_rad + 2.0 * math.pi * np.arange(n_segments + 1) / n_segments
    step = (2.0 * math.pi - 2.0 * gap_halfwidth_rad) / n_segments
    r_v = radius_mm * math.sqrt(step / math.sin(step)) if step < math.pi else radius_mm
    verts = np.empty((n_segments + 1, 3))
    verts[:, 0] = r_v * np.cos(theta)
    verts[:, 1] = r_v * np.sin(theta)
    verts[:, 2] = z_mm
    if gap_halfwidth_rad == 0.0:
        verts[-1] = verts[0]  # exact closure
    return verts


def discretize(
    g: ResonatorGeometry,
    n_segments: int = 360,
    include_gaps: bool = False,
    split_azimuths_rad: tuple[float, float] = (0.0, math.pi),
) -> CurrentSegmentSet:
    """Discretize both rings into straight current segments.

    Each ring contributes ``n_segments`` segments in its plane z = -/+ d/2.
    With ``include_gaps`` set, each ring omits an arc of angular extent
    split_gap/R centered on its entry of ``split_azimuths_rad``; the default
    places the two splits on opposite azimuths.  Without gaps the rings are
    full circles.
    """
    validate_geometry(g)
    if n_segments < MIN_SEGMENTS_PER_RING:
        raise InvalidGeometry(
            f"n_segments must be >= {MIN_SEGMENTS_PER_RING}, got {n_segments}"
        )
    gap_half = 0.0
    if include_gaps:
        gap_half = 0.5 * g.split_gap_mm / g.ring_radius_mm
    half_d = 0.5 * g.ring_separation_mm
    starts, ends, ring_idx = [], [], []
    for ring, (z, azimuth) in enumerate(
        zip((-half_d, +half_d), split_azimuths_rad)
    ):
        verts = _ring_vertices(g.ring_radius_mm, z, n_segments, gap_half, azimuth)
        starts.append(verts[:-1])
        ends.append(verts[1:])
        ring_idx.append(np.full(n_segments, ring, dtype=int))
    n_total = 2 * n_segments
    return CurrentSegmentSet(
        starts=np.concatenate(starts),
        ends=np.concatenate(ends),
        weights=np.ones(n_total),
        ring_index=np.concatenate(ring_idx),
        segments_per_ring=n_segments,
    )
