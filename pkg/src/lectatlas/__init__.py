"""Dialect cartography toolkit for annotated bibliographies of language sources."""

from .cartography import (
    FeatureOverlay,
    MapDocument,
    Rgb,
    apply_overlay,
    base_map,
    blend,
    export_geojson,
    export_svg,
    family_palette,
    overlay_color,
)
from .corpus import (
    Corpus,
    CorpusStats,
    CorpusValidationError,
    LanguageRecord,
    SitePoint,
    SourceEntry,
    bibliography,
    load_corpus,
    sites_for_language,
    stats,
)
from .geocode import GeoCoord, GeocodeCache, GeocodeError, resolve, verify
from .geometry import PlanePoint, SiteSet, StudyRegion, VoronoiCell, project, unproject, voronoi, weighted_centroid
from .philology import (
    Alignment,
    CognateSet,
    SoundChangeQuery,
    align_multi,
    align_pair,
    outcome_rate,
    overlay_from_rates,
)

__version__ = "0.1.0"

__all__ = [
    "Alignment",
    "CognateSet",
    "Corpus",
    "CorpusStats",
    "CorpusValidationError",
    "FeatureOverlay",
    "GeoCoord",
    "GeocodeCache",
    "GeocodeError",
    "LanguageRecord",
    "MapDocument",
    "PlanePoint",
    "Rgb",
    "SitePoint",
    "SiteSet",
    "SoundChangeQuery",
    "SourceEntry",
    "StudyRegion",
    "VoronoiCell",
    "align_multi",
    "align_pair",
    "apply_overlay",
    "base_map",
    "bibliography",
    "blend",
    "export_geojson",
    "export_svg",
    "family_palette",
    "load_corpus",
    "outcome_rate",
    "overlay_color",
    "overlay_from_rates",
    "project",
    "resolve",
    "sites_for_language",
    "stats",
    "unproject",
    "verify",
    "voronoi",
    "weighted_centroid",
]
