"""Base-map assembly and rendering: zone colors, circles, overlays, exports.

Zones take the color of their owning language's family; when several
languages share a zone the RGB channels of their family colors are averaged.
Feature overlays recolor zones along a two-endpoint linear scale.  Exports
are deterministic: identical inputs produce byte-identical GeoJSON and SVG.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence
from xml.sax.saxutils import escape

from . import corpus as corpus_mod
from .corpus import Corpus, FeatureSpec, LanguageRecord
from .geocode import GeoCoord
from .geometry import SiteSet, StudyRegion, voronoi, weighted_centroid


@dataclass(frozen=True)
class Rgb:
    r: int
    g: int
    b: int

    def __post_init__(self) -> None:
        for channel in (self.r, self.g, self.b):
            if not isinstance(channel, int) or not 0 <= channel <= 255:
                raise ValueError(f"channel out of range: {channel}")

    @classmethod
    def from_hex(cls, text: str) -> "Rgb":
        text = text.lstrip("#")
        if len(text) != 6:
            raise ValueError(f"expected #rrggbb, got {text!r}")
        return cls(int(text[0:2], 16), int(text[2:4], 16), int(text[4:6], 16))

    @property
    def hex(self) -> str:
        return f"#{self.r:02x}{self.g:02x}{self.b:02x}"


# Overlay scale endpoints and the marker for languages without data.
COLOR_ONE = Rgb.from_hex("#63c2d8")
COLOR_ZERO = Rgb.from_hex("#dd2225")
NO_DATA_COLOR = Rgb.from_hex("#cccccc")

# Twelve-class qualitative palette for family coloring; cycles with a
# lightness offset when a region holds more families than base colors.
QUALITATIVE_PALETTE = tuple(
    Rgb.from_hex(h)
    for h in (
        "#a6cee3", "#1f78b4", "#b2df8a", "#33a02c", "#fb9a99", "#e31a1c",
        "#fdbf6f", "#ff7f00", "#cab2d6", "#6a3d9a", "#ffff99", "#b15928",
    )
)

DEFAULT_CIRCLE_UNIT_RADIUS = 6.0  # px at one source
MIN_CIRCLE_RADIUS = 3.0  # px floor for languages with no sources


class EmptyMapError(ValueError):
    pass


def _half_up(x: float) -> int:
    return math.floor(x + 0.5)


def blend(colors: Sequence[Rgb]) -> Rgb:
    """Channel-wise arithmetic mean, rounded half-up."""
    if not colors:
        raise ValueError("cannot blend an empty color list")
    n = len(colors)
    return Rgb(
        _half_up(sum(c.r for c in colors) / n),
        _half_up(sum(c.g for c in colors) / n),
        _half_up(sum(c.b for c in colors) / n),
    )


def _lighten(color: Rgb, amount: float) -> Rgb:
    return Rgb(
        _half_up(color.r + (255 - color.r) * amount),
        _half_up(color.g + (255 - color.g) * amount),
        _half_up(color.b + (255 - color.b) * amount),
    )


def family_palette(languages: Iterable[LanguageRecord]) -> dict[str, Rgb]:
    """Deterministic family -> color map over the outermost family names."""
    families = sorted({lang.family_path[0] for lang in languages})
    if not families:
        raise ValueError("no families to color")
    palette: dict[str, Rgb] = {}
    for i, family in enumerate(families):
        base = QUALITATIVE_PALETTE[i % len(QUALITATIVE_PALETTE)]
        cycle = i // len(QUALITATIVE_PALETTE)
        palette[family] = _lighten(base, min(0.9, 0.3 * cycle)) if cycle else base
    return palette


@dataclass(frozen=True)
class FeatureOverlay:
    """Per-language feature values mapped to a two-endpoint color scale."""

    feature_id: str
    kind: str  # "binary" | "continuous"
    values: Mapping[str, float]
    color_zero: Rgb = COLOR_ZERO
    color_one: Rgb = COLOR_ONE

    @classmethod
    def from_spec(cls, spec: FeatureSpec) -> "FeatureOverlay":
        scale = spec.scale
        return cls(
            feature_id=spec.feature_id,
            kind=spec.kind,
            values={k: min(1.0, max(0.0, float(v))) for k, v in spec.values.items()},
            color_zero=Rgb.from_hex(scale[0]) if scale else COLOR_ZERO,
            color_one=Rgb.from_hex(scale[1]) if scale else COLOR_ONE,
        )


def overlay_color(overlay: FeatureOverlay, language_id: str) -> Rgb:
    """Linear per-channel interpolation; languages without data render gray."""
    if language_id not in overlay.values:
        return NO_DATA_COLOR
    v = overlay.values[language_id]
    if v == 0.0:
        return overlay.color_zero
    if v == 1.0:
        return overlay.color_one
    c0, c1 = overlay.color_zero, overlay.color_one
    return Rgb(
        _half_up(c0.r + v * (c1.r - c0.r)),
        _half_up(c0.g + v * (c1.g - c0.g)),
        _half_up(c0.b + v * (c1.b - c0.b)),
    )


@dataclass(frozen=True)
class ZoneFeature:
    """One Voronoi zone, ring in lon/lat degrees (closed, CCW)."""

    site_index: int
    ring: tuple[tuple[float, float], ...]
    owners: tuple[str, ...]
    fill: Rgb
    neighbors: tuple[int, ...]
    weight: int


@dataclass(frozen=True)
class LanguageCircle:
    language_id: str
    center: GeoCoord
    radius_px: float
    fill: Rgb
    n_sources: int


@dataclass(frozen=True)
class OverlayLegend:
    feature_id: str
    kind: str
    color_zero: Rgb
    color_one: Rgb


@dataclass(frozen=True)
class MapDocument:
    region: StudyRegion
    cells: tuple[ZoneFeature, ...]
    circles: tuple[LanguageCircle, ...]
    overlay: OverlayLegend | None = None


def circle_radius(n_sources: int, unit_radius: float = DEFAULT_CIRCLE_UNIT_RADIUS) -> float:
    """Area-proportional sizing: radius grows with the square root of sources."""
    return max(MIN_CIRCLE_RADIUS, unit_radius * math.sqrt(n_sources))


def base_map(
    corpus: Corpus,
    region: StudyRegion | None = None,
    unit_radius: float = DEFAULT_CIRCLE_UNIT_RADIUS,
) -> MapDocument:
    """Assemble zones and language circles from the corpus.

    Languages with no geocoded sites fall back to their reference point and
    contribute no zone; with neither, they are left off the map entirely.
    """
    region = region or StudyRegion.default()
    palette = family_palette(corpus.languages.values()) if corpus.languages else {}

    language_ids = sorted(corpus.languages)
    per_language = [(lid, corpus_mod.located_sites(corpus, lid)) for lid in language_ids]
    site_set = SiteSet.from_sites(per_language, region)

    cells: list[ZoneFeature] = []
    if len(site_set):
        for cell in voronoi(site_set, region):
            owners = tuple(sorted({o.language_id for o in site_set.owners[cell.site_index]}))
            fill = blend([palette[corpus.languages[lid].family_path[0]] for lid in owners])
            ring = tuple(region.to_degrees(p.x, p.y) for p in cell.polygon)
            weight = sum(o.weight for o in site_set.owners[cell.site_index])
            cells.append(ZoneFeature(cell.site_index, ring, owners, fill, cell.neighbors, weight))

    circles: list[LanguageCircle] = []
    source_counts = {lid: len(corpus_mod.sources_for_language(corpus, lid)) for lid in language_ids}
    for lid, sites in per_language:
        record = corpus.languages[lid]
        if sites:
            center = weighted_centroid(sites, region)
        elif record.reference_point is not None:
            center = record.reference_point
        else:
            continue
        circles.append(
            LanguageCircle(
                language_id=lid,
                center=center,
                radius_px=circle_radius(source_counts[lid], unit_radius),
                fill=palette[record.family_path[0]],
                n_sources=source_counts[lid],
            )
        )
    if not cells and not circles:
        raise EmptyMapError("no located language and no reference points")
    return MapDocument(region, tuple(cells), tuple(circles))


def apply_overlay(doc: MapDocument, overlay: FeatureOverlay) -> MapDocument:
    """Recolor zones by feature value; multi-owner zones blend owner colors."""
    cells = tuple(
        replace(cell, fill=blend([overlay_color(overlay, lid) for lid in cell.owners]))
        for cell in doc.cells
    )
    legend = OverlayLegend(overlay.feature_id, overlay.kind, overlay.color_zero, overlay.color_one)
    return MapDocument(doc.region, cells, doc.circles, legend)


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def export_geojson(doc: MapDocument) -> str:
    """RFC 7946 FeatureCollection: zones as Polygons, circles as Points."""
    features = []
    for cell in doc.cells:
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "Polygon",
                    "coordinates": [[[lon, lat] for lon, lat in cell.ring]],
                },
                "properties": {
                    "site_index": cell.site_index,
                    "owners": list(cell.owners),
                    "fill": cell.fill.hex,
                    "neighbors": list(cell.neighbors),
                    "weight": cell.weight,
                },
            }
        )
    for circle in doc.circles:
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "Point", "coordinates": [circle.center.lon, circle.center.lat]},
                "properties": {
                    "language_id": circle.language_id,
                    "fill": circle.fill.hex,
                    "radius_px": circle.radius_px,
                    "n_sources": circle.n_sources,
                },
            }
        )
    collection = {
        "type": "FeatureCollection",
        "bbox": list(doc.region.bbox),
        "features": features,
        "overlay": (
            {
                "feature_id": doc.overlay.feature_id,
                "kind": doc.overlay.kind,
                "color_zero": doc.overlay.color_zero.hex,
                "color_one": doc.overlay.color_one.hex,
            }
            if doc.overlay
            else None
        ),
    }
    return _dumps(collection)


def import_geojson(text: str) -> MapDocument:
    """Rebuild a MapDocument from export_geojson output (round-trip inverse)."""
    raw = json.loads(text)
    region = StudyRegion(*raw["bbox"])
    cells = []
    circles = []
    for feature in raw["features"]:
        geom = feature["geometry"]
        props = feature["properties"]
        if geom["type"] == "Polygon":
            cells.append(
                ZoneFeature(
                    site_index=props["site_index"],
                    ring=tuple((lon, lat) for lon, lat in geom["coordinates"][0]),
                    owners=tuple(props["owners"]),
                    fill=Rgb.from_hex(props["fill"]),
                    neighbors=tuple(props["neighbors"]),
                    weight=props["weight"],
                )
            )
        else:
            lon, lat = geom["coordinates"]
            circles.append(
                LanguageCircle(
                    language_id=props["language_id"],
                    center=GeoCoord(lon, lat),
                    radius_px=props["radius_px"],
                    fill=Rgb.from_hex(props["fill"]),
                    n_sources=props["n_sources"],
                )
            )
    overlay = None
    if raw.get("overlay"):
        ov = raw["overlay"]
        overlay = OverlayLegend(
            ov["feature_id"], ov["kind"], Rgb.from_hex(ov["color_zero"]), Rgb.from_hex(ov["color_one"])
        )
    return MapDocument(region, tuple(cells), tuple(circles), overlay)


def export_svg(doc: MapDocument, width_px: int = 1024) -> str:
    """Static SVG rendering: zones under circles, legend when an overlay is on.

    Output is byte-identical across runs for identical input.
    """
    if width_px < 64:
        raise ValueError("width_px must be at least 64")
    region = doc.region
    plane_w, plane_h = region.plane_width, region.plane_height
    height_px = width_px * plane_h / plane_w

    def px(lon: float, lat: float) -> tuple[float, float]:
        x, y = region.to_plane(lon, lat)
        return (x / plane_w * width_px, height_px - y / plane_h * height_px)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width_px}" '
        f'height="{height_px:.2f}" viewBox="0 0 {width_px} {height_px:.2f}">',
        f'<rect x="0" y="0" width="{width_px}" height="{height_px:.2f}" fill="#ffffff"/>',
    ]
    for cell in doc.cells:
        coords = [px(lon, lat) for lon, lat in cell.ring[:-1]]
        path = "M " + " L ".join(f"{x:.2f},{y:.2f}" for x, y in coords) + " Z"
        parts.append(f'<path d="{path}" fill="{cell.fill.hex}" stroke="#ffffff" stroke-width="1"/>')
    for circle in doc.circles:
        cx, cy = px(circle.center.lon, circle.center.lat)
        parts.append(
            f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{circle.radius_px:.2f}" '
            f'fill="{circle.fill.hex}" stroke="#333333" stroke-width="1"/>'
        )
    if doc.overlay is not None:
        zero_label, one_label = ("No", "Yes") if doc.overlay.kind == "binary" else ("0%", "100%")
        x0 = width_px - 150
        parts.append(f'<rect x="{x0}" y="12" width="16" height="16" fill="{doc.overlay.color_one.hex}" stroke="#333333"/>')
        parts.append(f'<text x="{x0 + 22}" y="25" font-size="13" font-family="sans-serif">{escape(one_label)}</text>')
        parts.append(f'<rect x="{x0}" y="36" width="16" height="16" fill="{doc.overlay.color_zero.hex}" stroke="#333333"/>')
        parts.append(f'<text x="{x0 + 22}" y="49" font-size="13" font-family="sans-serif">{escape(zero_label)}</text>')
        parts.append(
            f'<text x="{x0}" y="70" font-size="12" font-family="sans-serif">{escape(doc.overlay.feature_id)}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
