import json
from pathlib import Path

import pytest

from lectatlas.corpus import load_corpus
from lectatlas.geocode import GeoCoord

# The canonical single-source fixture: one article with two annotated
# locations and one topic.
HINDKO_RECORD = {
    "type": "article",
    "title": "Hindko in Kohat and Peshawar",
    "author": ["Christopher Shackle"],
    "journal": "Bulletin of the School...",
    "year": 1980,
    "volume": 43,
    "number": 3,
    "pages": "482--510",
    "url": "https://www.jstor.org/stable/615737",
    "languages": {"Hindko": ["Kohat", "Peshawar"]},
    "topics": ["overview"],
}

HINDKO_LANGUAGES = {
    "Hindko": {"name": "Hindko", "family": ["Indo-European", "Indo-Aryan"], "coord": [71.5, 33.8]}
}

HINDKO_COORDS = {
    "kohat": GeoCoord(71.44, 33.59),
    "peshawar": GeoCoord(71.52, 34.01),
}


@pytest.fixture
def hindko_refs() -> str:
    return json.dumps([HINDKO_RECORD])


@pytest.fixture
def hindko_langs() -> str:
    return json.dumps(HINDKO_LANGUAGES)


@pytest.fixture
def hindko_corpus(hindko_refs, hindko_langs):
    return load_corpus(hindko_refs, hindko_langs, coords=HINDKO_COORDS)


def write_data_dir(
    path: Path,
    references=None,
    languages=None,
    features=None,
    geocache: dict[str, GeoCoord] | None = None,
) -> Path:
    """Materialize corpus fixtures as a service/CLI data directory."""
    path.mkdir(parents=True, exist_ok=True)
    (path / "references.json").write_text(
        json.dumps(references if references is not None else [HINDKO_RECORD]), encoding="utf-8"
    )
    (path / "languages.json").write_text(
        json.dumps(languages if languages is not None else HINDKO_LANGUAGES), encoding="utf-8"
    )
    if features is not None:
        (path / "features.json").write_text(json.dumps(features), encoding="utf-8")
    coords = geocache if geocache is not None else HINDKO_COORDS
    if coords:
        lines = [
            f"{name}\t{coord.lon:.6f}\t{coord.lat:.6f}\tstub\t1" for name, coord in sorted(coords.items())
        ]
        (path / "geocache.tsv").write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return path


@pytest.fixture
def hindko_data_dir(tmp_path) -> Path:
    return write_data_dir(tmp_path / "data")
