"""Command-line entry point for batch validation, rendering, and serving.

Exit codes: 0 success, 1 data error, 2 usage error.  Output paths are never
overwritten unless --force is given.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus as corpus_mod, philology, reports
from .cartography import FeatureOverlay, apply_overlay, base_map, export_geojson, export_svg
from .corpus import Corpus, CorpusValidationError
from .geocode import GeocodeCache, GeocodeError, HttpProvider, RateLimitedProvider, resolve
from .service import GEOCACHE_FILE, ServiceConfig, load_data_dir

EXIT_OK = 0
EXIT_DATA = 1
EXIT_USAGE = 2


def _config(args: argparse.Namespace) -> ServiceConfig:
    bbox = tuple(args.bbox) if getattr(args, "bbox", None) else None
    return ServiceConfig(data_dir=Path(args.data_dir), bbox=bbox)


def _load(args: argparse.Namespace) -> Corpus:
    return load_data_dir(_config(args))


def _check_output(path: Path, force: bool) -> bool:
    if path.exists() and not force:
        print(f"refusing to overwrite {path} (use --force)", file=sys.stderr)
        return False
    return True


def _read_json(path: Path):
    if not path.exists():
        raise FileNotFoundError(path)
    return json.loads(path.read_text(encoding="utf-8"))


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        corpus = _load(args)
    except CorpusValidationError as exc:
        for line in exc.report:
            print(line)
        return EXIT_DATA
    except OSError as exc:
        print(f"cannot read data: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for line in corpus.warnings:
        print(line)
    print(f"OK {len(corpus.sources)} sources, {len(corpus.languages)} languages")
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    try:
        corpus = _load(args)
    except CorpusValidationError as exc:
        print(exc, file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"cannot read data: {exc}", file=sys.stderr)
        return EXIT_USAGE
    table = reports.stats_table(corpus_mod.stats(corpus))
    if args.out:
        out = Path(args.out)
        if not _check_output(out, args.force):
            return EXIT_USAGE
        out.write_text(table, encoding="utf-8")
    else:
        sys.stdout.write(table)
    if args.plot:
        plot = Path(args.plot)
        if not _check_output(plot, args.force):
            return EXIT_USAGE
        reports.render_topic_chart(corpus_mod.stats(corpus), plot)
    return EXIT_OK


def _single_overlay(path: Path, feature_id: str | None) -> FeatureOverlay:
    raw = _read_json(path)
    if not isinstance(raw, dict) or not raw:
        raise ValueError(f"{path}: expected a non-empty feature map")
    if feature_id is None:
        if len(raw) > 1:
            raise ValueError(f"{path}: multiple features; pick one with --feature")
        feature_id = next(iter(raw))
    if feature_id not in raw:
        raise ValueError(f"{path}: no feature {feature_id!r}")
    spec = raw[feature_id]
    return FeatureOverlay.from_spec(
        corpus_mod.FeatureSpec(
            feature_id,
            spec["kind"],
            {k: float(v) for k, v in spec["values"].items()},
            tuple(spec["scale"]) if spec.get("scale") else None,
        )
    )


def _write_map(doc, out: Path, width: int, force: bool) -> int:
    if not _check_output(out, force):
        return EXIT_USAGE
    if out.suffix == ".svg":
        out.write_text(export_svg(doc, width), encoding="utf-8")
    elif out.suffix == ".geojson" or out.suffix == ".json":
        out.write_text(export_geojson(doc), encoding="utf-8")
    else:
        print(f"unsupported output format {out.suffix!r} (use .svg or .geojson)", file=sys.stderr)
        return EXIT_USAGE
    print(f"wrote {out}")
    return EXIT_OK


def cmd_render(args: argparse.Namespace) -> int:
    try:
        corpus = _load(args)
        doc = base_map(corpus, _config(args).region)
        if args.overlay:
            doc = apply_overlay(doc, _single_overlay(Path(args.overlay), args.feature))
    except FileNotFoundError as exc:
        print(f"missing input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CorpusValidationError, ValueError) as exc:
        print(exc, file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"cannot read data: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return _write_map(doc, Path(args.out), args.width, args.force)


def cmd_overlay(args: argparse.Namespace) -> int:
    """Render a feature from the corpus feature table."""
    try:
        corpus = _load(args)
        spec = corpus.features.get(args.feature)
        if spec is None:
            print(f"unknown feature {args.feature!r}; available: {sorted(corpus.features)}", file=sys.stderr)
            return EXIT_DATA
        doc = apply_overlay(base_map(corpus, _config(args).region), FeatureOverlay.from_spec(spec))
    except (CorpusValidationError, ValueError) as exc:
        print(exc, file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"cannot read data: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return _write_map(doc, Path(args.out), args.width, args.force)


def cmd_align(args: argparse.Namespace) -> int:
    try:
        cognates_raw = _read_json(Path(args.cognates))
        query_raw = _read_json(Path(args.query))
    except FileNotFoundError as exc:
        print(f"missing input file: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except json.JSONDecodeError as exc:
        print(f"invalid JSON: {exc}", file=sys.stderr)
        return EXIT_DATA
    try:
        sets = philology.load_cognate_sets(cognates_raw)
        query = philology.SoundChangeQuery.from_spec(query_raw)
        languages = sorted({lang for cs in sets for lang in cs.reflexes})
        overlay = philology.overlay_from_rates(sets, query, languages, outcome=args.outcome)
    except (KeyError, TypeError, ValueError) as exc:
        print(f"bad cognate or query data: {exc}", file=sys.stderr)
        return EXIT_DATA
    out = Path(args.out)
    if not _check_output(out, args.force):
        return EXIT_USAGE
    payload = {
        overlay.feature_id: {
            "kind": overlay.kind,
            "values": dict(sorted(overlay.values.items())),
            "scale": [overlay.color_zero.hex, overlay.color_one.hex],
        }
    }
    out.write_text(json.dumps(payload, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    print(f"wrote {out}")
    return EXIT_OK


def cmd_geocode(args: argparse.Namespace) -> int:
    try:
        corpus = _load(args)
    except CorpusValidationError as exc:
        print(exc, file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"cannot read data: {exc}", file=sys.stderr)
        return EXIT_USAGE
    unresolved: dict[str, set[str]] = {}
    for lang_id in corpus.languages:
        for site in corpus_mod.sites_for_language(corpus, lang_id):
            if site.coord is None:
                unresolved.setdefault(site.location_name, set()).add(lang_id)
    if not unresolved:
        print("all locations resolved")
        return EXIT_OK
    if not args.resolve:
        for name in sorted(unresolved):
            print(f"UNRESOLVED {name}\t{', '.join(sorted(unresolved[name]))}")
        return EXIT_OK
    cache_path = Path(args.data_dir) / GEOCACHE_FILE
    cache = GeocodeCache.load(cache_path) if cache_path.exists() else GeocodeCache()
    try:
        provider = RateLimitedProvider(HttpProvider(), min_interval=args.min_interval)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    failures = 0
    for name in sorted(unresolved):
        try:
            coord = resolve(name, cache, provider)
            print(f"RESOLVED {name}\t{coord.lon:.6f}\t{coord.lat:.6f}")
        except GeocodeError as exc:
            failures += 1
            print(f"FAILED {name}\t{exc.reason}")
    cache.save(cache_path)
    print(f"cache written to {cache_path}")
    return EXIT_DATA if failures else EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    host, _, port = args.bind.rpartition(":")
    config = ServiceConfig(data_dir=Path(args.data_dir), bbox=tuple(args.bbox) if args.bbox else None)
    uvicorn.run(create_app(config), host=host or "127.0.0.1", port=int(port))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lectatlas", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_data_dir(p: argparse.ArgumentParser) -> None:
        p.add_argument("data_dir", help="directory with references.json, languages.json, features.json")
        p.add_argument("--bbox", nargs=4, type=float, metavar=("LON_MIN", "LAT_MIN", "LON_MAX", "LAT_MAX"))

    p = sub.add_parser("validate", help="check the data files and print findings")
    add_data_dir(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("stats", help="corpus totals and topic tallies (TSV, optional chart)")
    add_data_dir(p)
    p.add_argument("--out", help="write the TSV here instead of stdout")
    p.add_argument("--plot", help="also render a topic bar chart to this file")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("render", help="write the base map as SVG or GeoJSON")
    add_data_dir(p)
    p.add_argument("--out", required=True)
    p.add_argument("--overlay", help="feature overlay JSON file to apply")
    p.add_argument("--feature", help="feature id inside --overlay (if it has several)")
    p.add_argument("--width", type=int, default=1024)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("overlay", help="render a feature from the corpus feature table")
    add_data_dir(p)
    p.add_argument("--feature", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--width", type=int, default=1024)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_overlay)

    p = sub.add_parser("align", help="compute sound-change outcome rates into an overlay file")
    p.add_argument("--cognates", required=True, help="cognate sets JSON")
    p.add_argument("--query", required=True, help="sound-change query JSON")
    p.add_argument("--out", required=True)
    p.add_argument("--outcome", help="outcome class to rate (default: first in the query)")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("geocode", help="report (or resolve) locations without coordinates")
    add_data_dir(p)
    p.add_argument("--resolve", action="store_true", help="query the HTTP provider and update the cache")
    p.add_argument("--min-interval", type=float, default=0.2, help="seconds between provider calls")
    p.set_defaults(func=cmd_geocode)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--data", dest="data_dir", required=True)
    p.add_argument("--bind", default="127.0.0.1:8000")
    p.add_argument("--bbox", nargs=4, type=float)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
