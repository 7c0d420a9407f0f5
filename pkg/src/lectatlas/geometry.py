"""Plane projection and Voronoi partitioning of the study region.

The study region is a lon/lat bounding box projected to a working plane by a
scaled equirectangular map: x = (lon - lon_min) * cos(ref_lat), y = lat -
lat_min.  Each site's zone is the set of plane points nearer to it than to
any other site, clipped to the box.  Zones are built by intersecting the box
with one half-plane per competing site; every intermediate polygon is convex,
so a straightforward clip loop is exact and the edge that each bisector
contributes identifies the neighboring site.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

from .geocode import GeoCoord

if TYPE_CHECKING:
    from .corpus import SitePoint

# Default study region: South Asia.
SOUTH_ASIA_BBOX = (60.0, 5.0, 98.0, 38.0)

# Vertices closer than this (in plane units) collapse during clipping.
_VERTEX_EPS = 1e-12


class OutsideRegionError(ValueError):
    pass


@dataclass(frozen=True)
class StudyRegion:
    """Bounding box in degrees with a scaled-equirectangular projection."""

    lon_min: float
    lat_min: float
    lon_max: float
    lat_max: float

    def __post_init__(self) -> None:
        if not (self.lon_min < self.lon_max and self.lat_min < self.lat_max):
            raise ValueError("degenerate bounding box")

    @classmethod
    def default(cls) -> "StudyRegion":
        return cls(*SOUTH_ASIA_BBOX)

    @property
    def ref_lat(self) -> float:
        return (self.lat_min + self.lat_max) / 2.0

    @property
    def lon_scale(self) -> float:
        return math.cos(math.radians(self.ref_lat))

    @property
    def plane_width(self) -> float:
        return (self.lon_max - self.lon_min) * self.lon_scale

    @property
    def plane_height(self) -> float:
        return self.lat_max - self.lat_min

    @property
    def bbox(self) -> tuple[float, float, float, float]:
        return (self.lon_min, self.lat_min, self.lon_max, self.lat_max)

    def contains(self, lon: float, lat: float) -> bool:
        return self.lon_min <= lon <= self.lon_max and self.lat_min <= lat <= self.lat_max

    def to_plane(self, lon: float, lat: float) -> tuple[float, float]:
        return ((lon - self.lon_min) * self.lon_scale, lat - self.lat_min)

    def to_degrees(self, x: float, y: float) -> tuple[float, float]:
        return (x / self.lon_scale + self.lon_min, y + self.lat_min)


@dataclass(frozen=True)
class PlanePoint:
    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError("non-finite plane coordinate")


def project(coord: GeoCoord, region: StudyRegion) -> PlanePoint:
    if not region.contains(coord.lon, coord.lat):
        raise OutsideRegionError(f"coordinate {coord} outside study region {region.bbox}")
    return PlanePoint(*region.to_plane(coord.lon, coord.lat))


def unproject(point: PlanePoint, region: StudyRegion) -> GeoCoord:
    return GeoCoord(*region.to_degrees(point.x, point.y))


@dataclass(frozen=True)
class SiteOwner:
    language_id: str
    location_name: str
    weight: int


class SiteSet:
    """Projected sites with exact-coincident points merged.

    Merging keeps one zone per geographic point while the owner list records
    every language collected there, so several languages can share a zone.
    """

    def __init__(self) -> None:
        self.points: list[PlanePoint] = []
        self.owners: list[list[SiteOwner]] = []
        self._index: dict[tuple[float, float], int] = {}

    def __len__(self) -> int:
        return len(self.points)

    def add(self, point: PlanePoint, owner: SiteOwner) -> int:
        key = (point.x, point.y)
        idx = self._index.get(key)
        if idx is None:
            idx = len(self.points)
            self._index[key] = idx
            self.points.append(point)
            self.owners.append([owner])
        else:
            self.owners[idx].append(owner)
        return idx

    @classmethod
    def from_sites(cls, per_language: Iterable[tuple[str, Sequence["SitePoint"]]], region: StudyRegion) -> "SiteSet":
        """Build from (language_id, sites) pairs; ungeocoded sites are skipped."""
        site_set = cls()
        for language_id, sites in per_language:
            for site in sites:
                if site.coord is None:
                    continue
                point = project(site.coord, region)
                site_set.add(point, SiteOwner(language_id, site.location_name, site.weight))
        return site_set


@dataclass(frozen=True)
class VoronoiCell:
    """Convex zone of one site: counter-clockwise closed ring (first == last)."""

    site_index: int
    polygon: tuple[PlanePoint, ...]
    neighbors: tuple[int, ...]


def _clip_halfplane(
    verts: list[PlanePoint],
    labels: list[int | None],
    nx: float,
    ny: float,
    c: float,
    new_label: int,
) -> tuple[list[PlanePoint], list[int | None]]:
    """Intersect a convex CCW polygon with the half-plane nx*x + ny*y <= c.

    ``labels[i]`` names the site whose bisector produced the edge leaving
    vertex i (None for box edges); the freshly cut edge gets ``new_label``.
    """
    out_v: list[PlanePoint] = []
    out_l: list[int | None] = []
    n = len(verts)
    f = [nx * v.x + ny * v.y - c for v in verts]
    for i in range(n):
        j = (i + 1) % n
        fi, fj = f[i], f[j]
        if fi <= 0.0:
            out_v.append(verts[i])
            out_l.append(labels[i])
            if fj > 0.0:  # leaving the half-plane: cut edge runs along the bisector
                t = fi / (fi - fj)
                out_v.append(PlanePoint(verts[i].x + t * (verts[j].x - verts[i].x),
                                        verts[i].y + t * (verts[j].y - verts[i].y)))
                out_l.append(new_label)
        elif fj <= 0.0:  # re-entering: remainder of the original edge survives
            t = fi / (fi - fj)
            out_v.append(PlanePoint(verts[i].x + t * (verts[j].x - verts[i].x),
                                    verts[i].y + t * (verts[j].y - verts[i].y)))
            out_l.append(labels[i])
    # Drop zero-length edges introduced when the cut passes through a vertex.
    cleaned_v: list[PlanePoint] = []
    cleaned_l: list[int | None] = []
    m = len(out_v)
    for i in range(m):
        j = (i + 1) % m
        if abs(out_v[i].x - out_v[j].x) <= _VERTEX_EPS and abs(out_v[i].y - out_v[j].y) <= _VERTEX_EPS:
            continue
        cleaned_v.append(out_v[i])
        cleaned_l.append(out_l[i])
    return cleaned_v, cleaned_l


def voronoi(sites: SiteSet, region: StudyRegion) -> list[VoronoiCell]:
    """One clipped zone per deduplicated site (Euclidean plane distance).

    Deterministic in the site order; competitors are clipped nearest-first so
    that sites farther than twice the current cell radius can be skipped.
    """
    points = sites.points
    if not points:
        raise ValueError("at least one site is required")
    w, h = region.plane_width, region.plane_height
    box = [PlanePoint(0.0, 0.0), PlanePoint(w, 0.0), PlanePoint(w, h), PlanePoint(0.0, h)]

    cells: list[VoronoiCell] = []
    for k, p in enumerate(points):
        verts = list(box)
        labels: list[int | None] = [None] * 4
        competitors = sorted(
            (
                ((q.x - p.x) ** 2 + (q.y - p.y) ** 2, j)
                for j, q in enumerate(points)
                if j != k
            ),
        )
        max_r2 = max((v.x - p.x) ** 2 + (v.y - p.y) ** 2 for v in verts)
        for d2, j in competitors:
            if d2 > 4.0 * max_r2:
                break  # bisector lies beyond every cell vertex; so do all that follow
            q = points[j]
            d = math.sqrt(d2)
            nx, ny = (q.x - p.x) / d, (q.y - p.y) / d
            c = nx * (p.x + q.x) / 2.0 + ny * (p.y + q.y) / 2.0
            verts, labels = _clip_halfplane(verts, labels, nx, ny, c, j)
            max_r2 = max((v.x - p.x) ** 2 + (v.y - p.y) ** 2 for v in verts)
        ring = tuple(verts) + (verts[0],)
        neighbors = tuple(sorted({lab for lab in labels if lab is not None}))
        cells.append(VoronoiCell(k, ring, neighbors))
    return cells


def cell_area(cell: VoronoiCell) -> float:
    """Shoelace area of the (closed, CCW) ring."""
    total = 0.0
    ring = cell.polygon
    for i in range(len(ring) - 1):
        total += ring[i].x * ring[i + 1].y - ring[i + 1].x * ring[i].y
    return total / 2.0


def cell_contains(cell: VoronoiCell, x: float, y: float, tol: float = 0.0) -> bool:
    """Point-in-convex-polygon test; tol > 0 admits points slightly outside."""
    ring = cell.polygon
    for i in range(len(ring) - 1):
        ax, ay = ring[i].x, ring[i].y
        bx, by = ring[i + 1].x, ring[i + 1].y
        if (bx - ax) * (y - ay) - (by - ay) * (x - ax) < -tol:
            return False
    return True


def locate(cells: Sequence[VoronoiCell], x: float, y: float, tol: float = 0.0) -> VoronoiCell | None:
    """First cell containing the point; shared edges go to the lowest site index."""
    for cell in cells:
        if cell_contains(cell, x, y, tol):
            return cell
    return None


def cells_debug_geojson(cells: Sequence[VoronoiCell], region: StudyRegion) -> str:
    """Dump cells as GeoJSON Polygon features (degrees) for inspection."""
    import json

    features = [
        {
            "type": "Feature",
            "geometry": {
                "type": "Polygon",
                "coordinates": [[list(region.to_degrees(p.x, p.y)) for p in cell.polygon]],
            },
            "properties": {"site_index": cell.site_index, "neighbors": list(cell.neighbors)},
        }
        for cell in cells
    ]
    return json.dumps({"type": "FeatureCollection", "features": features}, sort_keys=True)


def weighted_centroid(sites: Sequence["SitePoint"], region: StudyRegion) -> GeoCoord:
    """Source-count-weighted mean of the projected site coordinates."""
    located = [s for s in sites if s.coord is not None]
    if not located:
        raise ValueError("no located sites; fall back to the language reference point")
    total = sum(s.weight for s in located)
    sx = sum(region.to_plane(s.coord.lon, s.coord.lat)[0] * s.weight for s in located)
    sy = sum(region.to_plane(s.coord.lon, s.coord.lat)[1] * s.weight for s in located)
    return GeoCoord(*region.to_degrees(sx / total, sy / total))
