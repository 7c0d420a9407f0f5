"""Read-mostly HTTP API over an immutable corpus + geometry snapshot.

All geometry is precomputed at load time into a single Snapshot value held
behind one attribute; reload builds a complete replacement before swapping
it in, so concurrent readers always see either the old or the new snapshot,
never a mixture.  A failed reload leaves the old snapshot serving.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from . import cartography, corpus as corpus_mod, geometry
from .cartography import FeatureOverlay, MapDocument, apply_overlay, base_map, export_geojson
from .corpus import Corpus, CorpusValidationError, load_corpus
from .geocode import GeocodeCache
from .geometry import StudyRegion

REFERENCES_FILE = "references.json"
LANGUAGES_FILE = "languages.json"
FEATURES_FILE = "features.json"
GEOCACHE_FILE = "geocache.tsv"

RELOAD_TOKEN_ENV = "ATLAS_RELOAD_TOKEN"
RELOAD_TOKEN_HEADER = "x-reload-token"


@dataclass
class ServiceConfig:
    data_dir: Path
    bbox: tuple[float, float, float, float] | None = None
    reload_token: str | None = None

    def __post_init__(self) -> None:
        self.data_dir = Path(self.data_dir)
        if self.reload_token is None:
            self.reload_token = os.environ.get(RELOAD_TOKEN_ENV)

    @property
    def region(self) -> StudyRegion:
        return StudyRegion(*self.bbox) if self.bbox else StudyRegion.default()


def _dumps(obj) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


@dataclass(frozen=True)
class Snapshot:
    """One immutable bundle of corpus, geometry, and precomputed payloads."""

    corpus: Corpus
    region: StudyRegion
    doc: MapDocument
    base_body: bytes
    languages_body: bytes
    stats_body: bytes


def load_data_dir(config: ServiceConfig) -> Corpus:
    """Load the corpus files (and geocode cache, if present) from disk."""
    data_dir = config.data_dir
    references = (data_dir / REFERENCES_FILE).read_text(encoding="utf-8")
    languages = (data_dir / LANGUAGES_FILE).read_text(encoding="utf-8")
    features_path = data_dir / FEATURES_FILE
    features = features_path.read_text(encoding="utf-8") if features_path.exists() else None
    cache_path = data_dir / GEOCACHE_FILE
    cache = GeocodeCache.load(cache_path) if cache_path.exists() else GeocodeCache()
    return load_corpus(references, languages, features, coords=cache)


def _language_payload(corpus: Corpus, region: StudyRegion) -> list[dict]:
    payload = []
    for lang_id in sorted(corpus.languages):
        record = corpus.languages[lang_id]
        sites = corpus_mod.located_sites(corpus, lang_id)
        if sites:
            center = geometry.weighted_centroid(sites, region)
        else:
            center = record.reference_point
        payload.append(
            {
                "id": record.id,
                "name": record.name,
                "family_path": list(record.family_path),
                "n_sources": len(corpus_mod.sources_for_language(corpus, lang_id)),
                "centroid": [center.lon, center.lat] if center else None,
            }
        )
    return payload


def _stats_payload(corpus: Corpus) -> dict:
    s = corpus_mod.stats(corpus)
    return {
        "n_sources": s.n_sources,
        "n_lects": s.n_lects,
        "n_locations": s.n_locations,
        "topic_counts": dict(sorted(s.topic_counts.items())),
    }


def build_snapshot(config: ServiceConfig) -> Snapshot:
    corpus = load_data_dir(config)
    region = config.region
    try:
        doc = base_map(corpus, region)
    except cartography.EmptyMapError:
        # An empty (or fully unlocated) corpus still serves languages and
        # stats; the map layers are simply empty.
        doc = MapDocument(region, (), ())
    return Snapshot(
        corpus=corpus,
        region=region,
        doc=doc,
        base_body=export_geojson(doc).encode("utf-8"),
        languages_body=_dumps(_language_payload(corpus, region)),
        stats_body=_dumps(_stats_payload(corpus)),
    )


def _highlight_body(snapshot: Snapshot, language_id: str) -> bytes:
    features = []
    for cell in snapshot.doc.cells:
        if language_id not in cell.owners:
            continue
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "Polygon", "coordinates": [[[lon, lat] for lon, lat in cell.ring]]},
                "properties": {
                    "site_index": cell.site_index,
                    "owners": list(cell.owners),
                    "fill": cell.fill.hex,
                },
            }
        )
    for site in corpus_mod.located_sites(snapshot.corpus, language_id):
        features.append(
            {
                "type": "Feature",
                "geometry": {"type": "Point", "coordinates": [site.coord.lon, site.coord.lat]},
                "properties": {
                    "language_id": language_id,
                    "location_name": site.location_name,
                    "weight": site.weight,
                },
            }
        )
    return _dumps({"type": "FeatureCollection", "features": features})


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="lectatlas", docs_url=None, redoc_url=None)
    app.state.config = config
    app.state.snapshot = None
    app.state.load_error = None
    try:
        app.state.snapshot = build_snapshot(config)
    except (CorpusValidationError, OSError, ValueError) as exc:
        app.state.load_error = str(exc)

    def _snapshot(request: Request) -> Snapshot | None:
        return request.app.state.snapshot

    def _json_bytes(body: bytes) -> Response:
        return Response(content=body, media_type="application/json")

    def _unavailable() -> Response:
        return JSONResponse({"detail": "corpus not loaded"}, status_code=503)

    @app.get("/api/languages")
    def languages(request: Request) -> Response:
        snap = _snapshot(request)
        if snap is None:
            return _unavailable()
        return _json_bytes(snap.languages_body)

    @app.get("/api/languages/{language_id}/sources")
    def language_sources(language_id: str, request: Request) -> Response:
        snap = _snapshot(request)
        if snap is None:
            return _unavailable()
        if language_id not in snap.corpus.languages:
            return JSONResponse({"detail": f"unknown language {language_id}"}, status_code=404)
        return _json_bytes(_dumps(corpus_mod.bibliography(snap.corpus, language_id)))

    @app.get("/api/map/base")
    def map_base(request: Request) -> Response:
        snap = _snapshot(request)
        if snap is None:
            return _unavailable()
        return _json_bytes(snap.base_body)

    @app.get("/api/map/highlight/{language_id}")
    def map_highlight(language_id: str, request: Request) -> Response:
        snap = _snapshot(request)
        if snap is None:
            return _unavailable()
        if language_id not in snap.corpus.languages:
            return JSONResponse({"detail": f"unknown language {language_id}"}, status_code=404)
        return _json_bytes(_highlight_body(snap, language_id))

    @app.get("/api/map/overlay/{feature_id}")
    def map_overlay(feature_id: str, request: Request) -> Response:
        snap = _snapshot(request)
        if snap is None:
            return _unavailable()
        spec = snap.corpus.features.get(feature_id)
        if spec is None:
            return JSONResponse({"detail": f"unknown feature {feature_id}"}, status_code=404)
        doc = apply_overlay(snap.doc, FeatureOverlay.from_spec(spec))
        return _json_bytes(export_geojson(doc).encode("utf-8"))

    @app.get("/api/stats/topics")
    def stats_topics(request: Request) -> Response:
        snap = _snapshot(request)
        if snap is None:
            return _unavailable()
        return _json_bytes(snap.stats_body)

    @app.post("/api/reload")
    def reload(request: Request) -> Response:
        token = request.app.state.config.reload_token
        if token and request.headers.get(RELOAD_TOKEN_HEADER) != token:
            return JSONResponse({"detail": "bad reload token"}, status_code=401)
        try:
            snapshot = build_snapshot(request.app.state.config)
        except CorpusValidationError as exc:
            return JSONResponse({"report": exc.report}, status_code=422)
        except (OSError, ValueError) as exc:
            return JSONResponse({"report": [f"ERROR data: {exc}"]}, status_code=422)
        request.app.state.snapshot = snapshot  # single-reference atomic swap
        request.app.state.load_error = None
        return _json_bytes(snapshot.stats_body)

    return app
