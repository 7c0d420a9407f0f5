"""Bibliographic corpus: parsing, validation, indexing, and summary queries.

Three JSON documents feed the corpus: a reference list annotated with
per-language locations and topics, a language table with genetic
classification, and an optional feature table for map overlays.  Loading is
all-or-nothing: any structural error aborts with the full findings list, so a
partially valid corpus can never escape into the rest of the pipeline.
"""

from __future__ import annotations

import datetime
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .geocode import GeoCoord, GeocodeCache, normalize_query

ENTRY_TYPES = frozenset({"article", "book", "thesis", "incollection", "misc"})

# Seed vocabulary for topic labels; anything else is accepted with a warning.
CORE_TOPICS = frozenset(
    {
        "overview",
        "syntax",
        "phonetics/phonology",
        "historical",
        "morphology",
        "sociolinguistics",
        "lexicography",
        "corpora",
        "dialectology",
        "comparative",
    }
)

YEAR_MIN = 1500

VENUE_FIELDS = ("journal", "volume", "number", "pages")


def normalize_topic(label: str) -> str:
    return " ".join(label.split()).casefold()


@dataclass(frozen=True)
class Finding:
    level: str  # "ERROR" | "WARN"
    message: str

    def line(self) -> str:
        return f"{self.level} {self.message}"


class CorpusValidationError(Exception):
    """Carries every finding from a failed load, one line per finding."""

    def __init__(self, findings: list[Finding]):
        self.findings = findings
        super().__init__("\n".join(f.line() for f in findings))

    @property
    def report(self) -> list[str]:
        return [f.line() for f in self.findings]


class UnknownLanguageError(KeyError):
    def __init__(self, language_id: str):
        self.language_id = language_id
        super().__init__(language_id)


@dataclass(frozen=True)
class SourceEntry:
    """One bibliographic record with location and topic annotations."""

    id: str
    entry_type: str
    title: str
    authors: tuple[str, ...]
    year: int
    journal: str | None = None
    volume: str | None = None
    number: str | None = None
    pages: str | None = None
    url: str | None = None
    languages: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    topics: tuple[str, ...] = ()


@dataclass(frozen=True)
class LanguageRecord:
    """A lect with its genetic classification, outermost family first."""

    id: str
    name: str
    family_path: tuple[str, ...]
    reference_point: GeoCoord | None = None


@dataclass(frozen=True)
class SitePoint:
    """A data-collection location for one language.

    ``coord`` is None while the location has not been geocoded; such sites
    still carry weight in bibliographic counts but are skipped by the map.
    """

    location_name: str
    coord: GeoCoord | None
    weight: int


@dataclass(frozen=True)
class FeatureSpec:
    """Raw overlay definition from the feature table."""

    feature_id: str
    kind: str  # "binary" | "continuous"
    values: Mapping[str, float]
    scale: tuple[str, str] | None = None  # (zero hex, one hex)


@dataclass(frozen=True)
class CorpusStats:
    n_sources: int
    n_lects: int
    n_locations: int
    topic_counts: Mapping[str, int]


@dataclass(frozen=True)
class Corpus:
    """Immutable, fully cross-referenced view of the three data files."""

    sources: tuple[SourceEntry, ...]
    languages: Mapping[str, LanguageRecord]
    features: Mapping[str, FeatureSpec]
    warnings: tuple[str, ...] = ()
    sites: Mapping[str, tuple[SitePoint, ...]] = field(default_factory=dict, compare=False)


def _parse_doc(doc: Any, name: str, findings: list[Finding]) -> Any:
    if isinstance(doc, (str, bytes)):
        try:
            return json.loads(doc)
        except json.JSONDecodeError as exc:
            findings.append(Finding("ERROR", f"{name}: invalid JSON: {exc}"))
            return None
    return doc


def _derive_id(authors: tuple[str, ...], year: Any, taken: set[str]) -> str:
    surname = authors[0].split()[-1] if authors and authors[0].split() else "anon"
    stem = re.sub(r"[^a-z0-9]", "", surname.casefold()) or "anon"
    base = f"{stem}{year}" if isinstance(year, int) else stem
    candidate, n = base, 1
    while candidate in taken:
        n += 1
        candidate = f"{base}-{n}"
    return candidate


def _load_languages(raw: Any, findings: list[Finding]) -> dict[str, LanguageRecord]:
    languages: dict[str, LanguageRecord] = {}
    if not isinstance(raw, dict):
        findings.append(Finding("ERROR", "languages: document must be a JSON object"))
        return languages
    for lang_id, spec in raw.items():
        ctx = f"language {lang_id}"
        if not isinstance(spec, dict):
            findings.append(Finding("ERROR", f"{ctx}: record must be an object"))
            continue
        name = spec.get("name")
        if not isinstance(name, str) or not name.strip():
            findings.append(Finding("ERROR", f"{ctx}: field 'name' missing or not a string"))
            continue
        family = spec.get("family")
        if not isinstance(family, list) or not family or not all(isinstance(f, str) for f in family):
            findings.append(
                Finding("ERROR", f"{ctx}: field 'family' must be a non-empty list of strings")
            )
            continue
        coord = None
        if "coord" in spec and spec["coord"] is not None:
            raw_coord = spec["coord"]
            if (
                not isinstance(raw_coord, (list, tuple))
                or len(raw_coord) != 2
                or not all(isinstance(c, (int, float)) for c in raw_coord)
            ):
                findings.append(Finding("ERROR", f"{ctx}: field 'coord' must be [lon, lat]"))
                continue
            try:
                coord = GeoCoord(float(raw_coord[0]), float(raw_coord[1]))
            except ValueError as exc:
                findings.append(Finding("ERROR", f"{ctx}: field 'coord': {exc}"))
                continue
        languages[lang_id] = LanguageRecord(lang_id, name.strip(), tuple(family), coord)
    return languages


def _load_entry(raw: Any, index: int, taken_ids: set[str], findings: list[Finding]) -> SourceEntry | None:
    label = f"reference #{index}"
    if not isinstance(raw, dict):
        findings.append(Finding("ERROR", f"{label}: entry must be an object"))
        return None
    explicit_id = raw.get("id")
    if explicit_id is not None and not isinstance(explicit_id, str):
        findings.append(Finding("ERROR", f"{label}: field 'id' must be a string"))
        return None
    if isinstance(explicit_id, str):
        label = f"reference {explicit_id}"
    ok = True

    entry_type = raw.get("type")
    if entry_type not in ENTRY_TYPES:
        findings.append(
            Finding("ERROR", f"{label}: field 'type' must be one of {sorted(ENTRY_TYPES)}")
        )
        ok = False
    title = raw.get("title")
    if not isinstance(title, str) or not title.strip():
        findings.append(Finding("ERROR", f"{label}: field 'title' missing or not a string"))
        ok = False
    authors_raw = raw.get("author")
    if (
        not isinstance(authors_raw, list)
        or not authors_raw
        or not all(isinstance(a, str) and a.strip() for a in authors_raw)
    ):
        findings.append(
            Finding("ERROR", f"{label}: field 'author' must be a non-empty list of strings")
        )
        ok = False
    year = raw.get("year")
    if not isinstance(year, int) or isinstance(year, bool):
        findings.append(Finding("ERROR", f"{label}: field 'year' missing or not an integer"))
        ok = False
    elif not YEAR_MIN <= year <= datetime.date.today().year:
        # Historical grammars legitimately predate the usual range.
        findings.append(Finding("WARN", f"{label}: field 'year' {year} outside expected range"))

    languages: dict[str, tuple[str, ...]] = {}
    languages_raw = raw.get("languages")
    if not isinstance(languages_raw, dict) or not languages_raw:
        findings.append(
            Finding("ERROR", f"{label}: field 'languages' must be a non-empty object")
        )
        ok = False
    else:
        for lang_id, locs in languages_raw.items():
            if not isinstance(locs, list) or not all(isinstance(x, str) for x in locs):
                findings.append(
                    Finding(
                        "ERROR",
                        f"{label}: field 'languages.{lang_id}' must be a list of location names",
                    )
                )
                ok = False
                continue
            # Duplicate (source, language, location) triples are data-entry
            # artifacts; collapse them to one annotation.
            seen: set[str] = set()
            deduped = []
            for loc in locs:
                key = normalize_query(loc)
                if key and key not in seen:
                    seen.add(key)
                    deduped.append(loc.strip())
            languages[lang_id] = tuple(deduped)

    topics_raw = raw.get("topics")
    topics: tuple[str, ...] = ()
    if not isinstance(topics_raw, list) or not topics_raw or not all(
        isinstance(t, str) and t.strip() for t in topics_raw
    ):
        findings.append(
            Finding("ERROR", f"{label}: field 'topics' must be a non-empty list of strings")
        )
        ok = False
    else:
        topics = tuple(dict.fromkeys(normalize_topic(t) for t in topics_raw))
        for topic in topics:
            if topic not in CORE_TOPICS:
                findings.append(Finding("WARN", f"{label}: unknown topic label '{topic}'"))

    venue: dict[str, str | None] = {}
    for fld in VENUE_FIELDS + ("url",):
        value = raw.get(fld)
        if value is None:
            venue[fld] = None
        elif isinstance(value, (str, int)):
            venue[fld] = str(value)
        else:
            findings.append(Finding("ERROR", f"{label}: field '{fld}' must be a string"))
            ok = False

    if not ok:
        return None
    entry_id = explicit_id if isinstance(explicit_id, str) else _derive_id(tuple(authors_raw), year, taken_ids)
    if entry_id in taken_ids:
        findings.append(Finding("ERROR", f"reference {entry_id}: duplicate id"))
        return None
    taken_ids.add(entry_id)
    return SourceEntry(
        id=entry_id,
        entry_type=entry_type,
        title=title.strip(),
        authors=tuple(a.strip() for a in authors_raw),
        year=year,
        journal=venue["journal"],
        volume=venue["volume"],
        number=venue["number"],
        pages=venue["pages"],
        url=venue["url"],
        languages=languages,
        topics=topics,
    )


def _load_features(raw: Any, languages: Mapping[str, LanguageRecord], findings: list[Finding]) -> dict[str, FeatureSpec]:
    features: dict[str, FeatureSpec] = {}
    if raw is None:
        return features
    if not isinstance(raw, dict):
        findings.append(Finding("ERROR", "features: document must be a JSON object"))
        return features
    hex_re = re.compile(r"^#[0-9a-fA-F]{6}$")
    for feature_id, spec in raw.items():
        ctx = f"feature {feature_id}"
        if not isinstance(spec, dict):
            findings.append(Finding("ERROR", f"{ctx}: record must be an object"))
            continue
        kind = spec.get("kind")
        if kind not in ("binary", "continuous"):
            findings.append(Finding("ERROR", f"{ctx}: field 'kind' must be binary or continuous"))
            continue
        values_raw = spec.get("values")
        if not isinstance(values_raw, dict):
            findings.append(Finding("ERROR", f"{ctx}: field 'values' must be an object"))
            continue
        values: dict[str, float] = {}
        bad = False
        for lang_id, value in values_raw.items():
            if lang_id not in languages:
                findings.append(Finding("ERROR", f"{ctx}: unknown language id '{lang_id}'"))
                bad = True
                continue
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                findings.append(Finding("ERROR", f"{ctx}: value for '{lang_id}' must be numeric"))
                bad = True
                continue
            v = float(value)
            if kind == "binary" and v not in (0.0, 1.0):
                findings.append(
                    Finding("ERROR", f"{ctx}: binary value for '{lang_id}' must be 0 or 1")
                )
                bad = True
                continue
            values[lang_id] = min(1.0, max(0.0, v))  # continuous values clamp to [0, 1]
        scale = None
        if "scale" in spec and spec["scale"] is not None:
            scale_raw = spec["scale"]
            if (
                not isinstance(scale_raw, (list, tuple))
                or len(scale_raw) != 2
                or not all(isinstance(s, str) and hex_re.match(s) for s in scale_raw)
            ):
                findings.append(Finding("ERROR", f"{ctx}: field 'scale' must be two #rrggbb strings"))
                bad = True
            else:
                scale = (scale_raw[0], scale_raw[1])
        if not bad:
            features[feature_id] = FeatureSpec(feature_id, kind, values, scale)
    return features


def _build_sites(
    sources: Iterable[SourceEntry],
    languages: Mapping[str, LanguageRecord],
    coords: Mapping[str, GeoCoord],
    findings: list[Finding],
) -> dict[str, tuple[SitePoint, ...]]:
    # weight = number of sources annotating that location for that language
    weights: dict[str, Counter[str]] = {lang_id: Counter() for lang_id in languages}
    display: dict[tuple[str, str], str] = {}
    for entry in sources:
        for lang_id, locations in entry.languages.items():
            if lang_id not in weights:
                continue  # dangling ids are reported separately
            for loc in locations:
                key = normalize_query(loc)
                weights[lang_id][key] += 1
                display.setdefault((lang_id, key), loc)

    unresolved: dict[str, set[str]] = {}
    sites: dict[str, tuple[SitePoint, ...]] = {}
    for lang_id, counter in weights.items():
        points = []
        for key, weight in counter.items():
            coord = coords.get(key)
            if coord is None:
                unresolved.setdefault(key, set()).add(lang_id)
            points.append(SitePoint(display[(lang_id, key)], coord, weight))
        points.sort(key=lambda p: p.location_name)
        sites[lang_id] = tuple(points)
    for key in sorted(unresolved):
        langs = ", ".join(sorted(unresolved[key]))
        findings.append(Finding("WARN", f"location '{key}' has no coordinates (used by: {langs})"))
    return sites


def load_corpus(
    references_doc: str | list,
    languages_doc: str | dict,
    features_doc: str | dict | None = None,
    *,
    coords: Mapping[str, GeoCoord] | GeocodeCache | None = None,
) -> Corpus:
    """Parse and cross-validate the three data files into an immutable Corpus.

    ``coords`` supplies geocoded positions for location names (typically the
    geocode cache); locations it cannot resolve stay on record but unmapped.
    Raises CorpusValidationError listing every finding if anything is broken.
    """
    findings: list[Finding] = []
    refs_raw = _parse_doc(references_doc, "references", findings)
    langs_raw = _parse_doc(languages_doc, "languages", findings)
    features_raw = _parse_doc(features_doc, "features", findings) if features_doc is not None else None
    if any(f.level == "ERROR" for f in findings):
        raise CorpusValidationError(findings)

    languages = _load_languages(langs_raw, findings)

    sources: list[SourceEntry] = []
    if not isinstance(refs_raw, list):
        findings.append(Finding("ERROR", "references: document must be a JSON array"))
    else:
        taken_ids: set[str] = set()
        for index, raw in enumerate(refs_raw):
            entry = _load_entry(raw, index, taken_ids, findings)
            if entry is not None:
                sources.append(entry)

    # Every language id used by a source must resolve to a language record.
    dangling: dict[str, list[str]] = {}
    for entry in sources:
        for lang_id in entry.languages:
            if lang_id not in languages:
                dangling.setdefault(lang_id, []).append(entry.id)
    for lang_id in sorted(dangling):
        refs = ", ".join(dangling[lang_id])
        findings.append(Finding("ERROR", f"unknown language id '{lang_id}' referenced by: {refs}"))

    features = _load_features(features_raw, languages, findings)

    if any(f.level == "ERROR" for f in findings):
        raise CorpusValidationError(findings)

    if isinstance(coords, GeocodeCache):
        coord_table = coords.coords()
    else:
        coord_table = {normalize_query(k): v for k, v in (coords or {}).items()}
    sites = _build_sites(sources, languages, coord_table, findings)

    warnings = tuple(f.line() for f in findings)
    return Corpus(tuple(sources), languages, features, warnings, sites)


def sites_for_language(corpus: Corpus, language_id: str) -> list[SitePoint]:
    """All annotated locations for a language, weighted by source count."""
    if language_id not in corpus.languages:
        raise UnknownLanguageError(language_id)
    return list(corpus.sites.get(language_id, ()))


def located_sites(corpus: Corpus, language_id: str) -> list[SitePoint]:
    """Only the geocoded sites, the ones the map can draw."""
    return [s for s in sites_for_language(corpus, language_id) if s.coord is not None]


def sources_for_language(corpus: Corpus, language_id: str) -> list[SourceEntry]:
    if language_id not in corpus.languages:
        raise UnknownLanguageError(language_id)
    return [e for e in corpus.sources if language_id in e.languages]


def format_entry(entry: SourceEntry, language_id: str) -> str:
    """Human-readable bibliography line with location and topic annotations."""
    parts = [f"{', '.join(entry.authors)} ({entry.year}). {entry.title}."]
    if entry.journal:
        venue = entry.journal
        if entry.volume:
            venue += f" {entry.volume}"
            if entry.number:
                venue += f"({entry.number})"
        if entry.pages:
            venue += f", {entry.pages}"
        parts.append(venue + ".")
    locations = entry.languages.get(language_id, ())
    if locations:
        parts.append(f"[{', '.join(locations)}]")
    parts.append(f"[{', '.join(entry.topics)}]")
    return " ".join(parts)


def bibliography(corpus: Corpus, language_id: str) -> list[str]:
    """Formatted entries for one language, sorted by year then author."""
    entries = sources_for_language(corpus, language_id)
    entries.sort(key=lambda e: (e.year, e.authors[0], e.title))
    return [format_entry(e, language_id) for e in entries]


def stats(corpus: Corpus) -> CorpusStats:
    """Corpus totals; a multi-topic source increments every one of its topics.

    n_locations counts distinct geocoded points: locations shared across
    languages at the exact same coordinate count once.
    """
    topic_counts: Counter[str] = Counter()
    lects: set[str] = set()
    for entry in corpus.sources:
        topic_counts.update(entry.topics)
        lects.update(entry.languages)
    points = {
        site.coord
        for sites in corpus.sites.values()
        for site in sites
        if site.coord is not None
    }
    return CorpusStats(
        n_sources=len(corpus.sources),
        n_lects=len(lects),
        n_locations=len(points),
        topic_counts=dict(topic_counts),
    )


def serialize_corpus(corpus: Corpus) -> tuple[str, str, str]:
    """Render the corpus back to its three-document JSON form."""
    refs = []
    for e in corpus.sources:
        raw: dict[str, Any] = {
            "id": e.id,
            "type": e.entry_type,
            "title": e.title,
            "author": list(e.authors),
            "year": e.year,
        }
        for fld in VENUE_FIELDS + ("url",):
            value = getattr(e, fld if fld != "journal" else "journal")
            if value is not None:
                raw[fld] = value
        raw["languages"] = {lang: list(locs) for lang, locs in e.languages.items()}
        raw["topics"] = list(e.topics)
        refs.append(raw)
    langs = {
        rec.id: {
            "name": rec.name,
            "family": list(rec.family_path),
            **({"coord": [rec.reference_point.lon, rec.reference_point.lat]} if rec.reference_point else {}),
        }
        for rec in corpus.languages.values()
    }
    feats = {
        spec.feature_id: {
            "kind": spec.kind,
            "values": dict(spec.values),
            **({"scale": list(spec.scale)} if spec.scale else {}),
        }
        for spec in corpus.features.values()
    }
    dump = lambda obj: json.dumps(obj, indent=2, ensure_ascii=False, sort_keys=False)
    return dump(refs), dump(langs), dump(feats)
