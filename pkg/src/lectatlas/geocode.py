"""Place-name resolution through a pluggable provider with a persistent cache.

Coordinates are produced once, reviewed by a human, and then frozen: a
verified cache entry is never overwritten by a provider refresh.  The cache
persists as a sorted TSV so that review diffs stay readable.
"""

from __future__ import annotations

import os
import threading
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping, Protocol

import requests

COORD_DECIMALS = 6  # storage precision in degrees; equality is exact at this scale


def normalize_query(name: str) -> str:
    """Trim, collapse internal whitespace, and case-fold a place name."""
    return " ".join(name.split()).casefold()


@dataclass(frozen=True)
class GeoCoord:
    """WGS84 position in decimal degrees, quantized to 1e-6 degrees."""

    lon: float
    lat: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "lon", round(float(self.lon), COORD_DECIMALS))
        object.__setattr__(self, "lat", round(float(self.lat), COORD_DECIMALS))
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude out of range: {self.lon}")
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude out of range: {self.lat}")


class GeocodeError(Exception):
    """A place name could not be resolved; carries the normalized query."""

    def __init__(self, query: str, reason: str = "no results"):
        self.query = query
        self.reason = reason
        super().__init__(f"unresolved location {query!r}: {reason}")


@dataclass(frozen=True)
class CacheEntry:
    query: str  # normalized
    coord: GeoCoord
    provider: str
    verified: bool = False


class GeocodeProvider(Protocol):
    name: str

    def geocode(self, query: str) -> GeoCoord | None: ...


class StubProvider:
    """Deterministic in-memory provider; counts calls so tests can assert on them."""

    name = "stub"

    def __init__(self, table: Mapping[str, GeoCoord | tuple[float, float]]):
        self.table = {
            normalize_query(k): v if isinstance(v, GeoCoord) else GeoCoord(*v)
            for k, v in table.items()
        }
        self.calls = 0

    def geocode(self, query: str) -> GeoCoord | None:
        self.calls += 1
        return self.table.get(normalize_query(query))


class HttpProvider:
    """Generic HTTP geocoder: GET <url>?q=<query>[&key=<key>] returning JSON.

    Accepts either a flat ``{"lon": .., "lat": ..}`` object or a
    ``{"results": [{"lon": .., "lat": ..}, ...]}`` envelope, which covers the
    common self-hosted geocoding frontends.  Endpoint and key default to the
    GEOCODER_URL / GEOCODER_KEY environment variables.
    """

    name = "http"

    def __init__(self, url: str | None = None, key: str | None = None, timeout: float = 10.0):
        self.url = url or os.environ.get("GEOCODER_URL")
        self.key = key or os.environ.get("GEOCODER_KEY")
        self.timeout = timeout
        if not self.url:
            raise ValueError("no geocoder endpoint configured (set GEOCODER_URL)")

    def geocode(self, query: str) -> GeoCoord | None:
        params = {"q": query}
        if self.key:
            params["key"] = self.key
        resp = requests.get(self.url, params=params, timeout=self.timeout)
        resp.raise_for_status()
        data = resp.json()
        if isinstance(data, dict) and "results" in data:
            results = data["results"]
            if not results:
                return None
            data = results[0]
        if not isinstance(data, dict) or "lon" not in data or "lat" not in data:
            return None
        return GeoCoord(float(data["lon"]), float(data["lat"]))


class RateLimitedProvider:
    """Serializes calls to an inner provider with a minimum spacing."""

    def __init__(self, inner: GeocodeProvider, min_interval: float = 0.0):
        self.inner = inner
        self.name = inner.name
        self.min_interval = min_interval
        self._lock = threading.Lock()
        self._last_call = 0.0

    def geocode(self, query: str) -> GeoCoord | None:
        with self._lock:
            wait = self._last_call + self.min_interval - time.monotonic()
            if wait > 0:
                time.sleep(wait)
            try:
                return self.inner.geocode(query)
            finally:
                self._last_call = time.monotonic()


class GeocodeCache:
    """Normalized-query -> coordinate table with exclusive mutation."""

    def __init__(self, entries: Iterable[CacheEntry] = ()):
        self._entries: dict[str, CacheEntry] = {e.query: e for e in entries}
        self._lock = threading.Lock()

    def __contains__(self, query: str) -> bool:
        return normalize_query(query) in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, query: str) -> CacheEntry | None:
        return self._entries.get(normalize_query(query))

    def entries(self) -> list[CacheEntry]:
        return [self._entries[q] for q in sorted(self._entries)]

    def coords(self) -> dict[str, GeoCoord]:
        """Normalized query -> coordinate view, for corpus site resolution."""
        return {q: e.coord for q, e in self._entries.items()}

    def put(self, entry: CacheEntry) -> None:
        """Insert or refresh an entry; verified entries win over refreshes."""
        query = normalize_query(entry.query)
        entry = replace(entry, query=query)
        with self._lock:
            existing = self._entries.get(query)
            if existing is not None and existing.verified and not entry.verified:
                return
            self._entries[query] = entry

    def mark_verified(self, query: str, coord: GeoCoord) -> CacheEntry:
        query = normalize_query(query)
        with self._lock:
            existing = self._entries.get(query)
            provider = existing.provider if existing is not None else "manual"
            entry = CacheEntry(query, coord, provider, verified=True)
            self._entries[query] = entry
            return entry

    @classmethod
    def load(cls, path: str | Path) -> "GeocodeCache":
        entries = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            query, lon, lat, provider, verified = line.split("\t")
            entries.append(
                CacheEntry(query, GeoCoord(float(lon), float(lat)), provider, verified == "1")
            )
        return cls(entries)

    def save(self, path: str | Path) -> None:
        lines = [
            f"{e.query}\t{e.coord.lon:.6f}\t{e.coord.lat:.6f}\t{e.provider}\t{int(e.verified)}"
            for e in self.entries()
        ]
        Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def resolve(name: str, cache: GeocodeCache, provider: GeocodeProvider) -> GeoCoord:
    """Resolve a place name, consulting the cache before the provider.

    A cache hit never touches the provider.  A miss queries the provider and
    stores the result unverified, pending human review.
    """
    query = normalize_query(name)
    if not query:
        raise GeocodeError(name, "empty query after normalization")
    entry = cache.get(query)
    if entry is not None:
        return entry.coord
    try:
        coord = provider.geocode(query)
    except Exception as exc:
        raise GeocodeError(query, f"provider failure: {exc}") from exc
    if coord is None:
        raise GeocodeError(query)
    cache.put(CacheEntry(query, coord, provider.name, verified=False))
    return coord


def verify(cache: GeocodeCache, query: str, coord: GeoCoord) -> GeocodeCache:
    """Record a human-confirmed coordinate; the override wins permanently."""
    cache.mark_verified(query, coord)
    return cache
