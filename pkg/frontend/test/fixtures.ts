import type { HighlightPayload, MapPayload } from "../src/types.js";

/** Payloads shaped exactly like the server's responses for a two-language
 * fixture: Hindko with two located sites, Ghost with one and no overlay
 * data. */

export const BBOX: [number, number, number, number] = [60, 5, 98, 38];

export const BASE_PAYLOAD: MapPayload = {
  type: "FeatureCollection",
  bbox: BBOX,
  overlay: null,
  features: [
    {
      type: "Feature",
      geometry: {
        type: "Polygon",
        coordinates: [
          [
            [60, 5],
            [78, 5],
            [78, 38],
            [60, 38],
            [60, 5],
          ],
        ],
      },
      properties: { site_index: 0, owners: ["Hindko"], fill: "#a6cee3", neighbors: [1], weight: 1 },
    },
    {
      type: "Feature",
      geometry: {
        type: "Polygon",
        coordinates: [
          [
            [78, 5],
            [98, 5],
            [98, 38],
            [78, 38],
            [78, 5],
          ],
        ],
      },
      properties: { site_index: 1, owners: ["Ghost"], fill: "#1f78b4", neighbors: [0], weight: 1 },
    },
    {
      type: "Feature",
      geometry: { type: "Point", coordinates: [71.48, 33.8] },
      properties: { language_id: "Hindko", fill: "#a6cee3", radius_px: 12, n_sources: 4 },
    },
    {
      type: "Feature",
      geometry: { type: "Point", coordinates: [85.0, 20.0] },
      properties: { language_id: "Ghost", fill: "#1f78b4", radius_px: 6, n_sources: 1 },
    },
  ],
};

export const HIGHLIGHT_HINDKO: HighlightPayload = {
  type: "FeatureCollection",
  features: [
    {
      type: "Feature",
      geometry: {
        type: "Polygon",
        coordinates: [
          [
            [60, 5],
            [78, 5],
            [78, 38],
            [60, 38],
            [60, 5],
          ],
        ],
      },
      properties: { site_index: 0, owners: ["Hindko"], fill: "#a6cee3" },
    },
    {
      type: "Feature",
      geometry: { type: "Point", coordinates: [71.44, 33.59] },
      properties: { language_id: "Hindko", location_name: "Kohat", weight: 1 },
    },
    {
      type: "Feature",
      geometry: { type: "Point", coordinates: [71.52, 34.01] },
      properties: { language_id: "Hindko", location_name: "Peshawar", weight: 1 },
    },
  ],
};

export const HIGHLIGHT_GHOST: HighlightPayload = {
  type: "FeatureCollection",
  features: [
    {
      type: "Feature",
      geometry: {
        type: "Polygon",
        coordinates: [
          [
            [78, 5],
            [98, 5],
            [98, 38],
            [78, 38],
            [78, 5],
          ],
        ],
      },
      properties: { site_index: 1, owners: ["Ghost"], fill: "#1f78b4" },
    },
    {
      type: "Feature",
      geometry: { type: "Point", coordinates: [85.0, 20.0] },
      properties: { language_id: "Ghost", location_name: "Bhubaneswar", weight: 1 },
    },
  ],
};

export const OVERLAY_PAYLOAD: MapPayload = {
  ...BASE_PAYLOAD,
  overlay: {
    feature_id: "retroflex",
    kind: "binary",
    color_zero: "#dd2225",
    color_one: "#63c2d8",
  },
  features: BASE_PAYLOAD.features.map((feature) =>
    feature.geometry.type !== "Polygon"
      ? feature
      : {
          ...feature,
          properties: {
            ...feature.properties,
            fill: feature.properties.owners.includes("Hindko") ? "#63c2d8" : "#cccccc",
          },
        },
  ),
};

export const HINDKO_SOURCES = [
  "Christopher Shackle (1980). Hindko in Kohat and Peshawar. Bulletin of the School... 43(3), 482--510. [Kohat, Peshawar] [overview]",
];

export const EMPTY_PAYLOAD: MapPayload = {
  type: "FeatureCollection",
  bbox: BBOX,
  overlay: null,
  features: [],
};

export interface FetchLog {
  calls: string[];
}

/** Install a deterministic fetch over the fixture routes; returns the call
 * log so tests can assert on request counts. */
export function mockFetch(
  routes: Record<string, unknown>,
  pending?: Map<string, Array<(value: unknown) => void>>,
): FetchLog {
  const log: FetchLog = { calls: [] };
  globalThis.fetch = (async (input: RequestInfo | URL) => {
    const url = String(input);
    log.calls.push(url);
    if (pending?.has(url)) {
      const body = await new Promise((resolve) => pending.get(url)?.push(resolve));
      return new Response(JSON.stringify(body), {
        status: 200,
        headers: { "content-type": "application/json" },
      });
    }
    if (!(url in routes)) {
      return new Response(JSON.stringify({ detail: "not found" }), { status: 404 });
    }
    return new Response(JSON.stringify(routes[url]), {
      status: 200,
      headers: { "content-type": "application/json" },
    });
  }) as typeof fetch;
  return log;
}

export function defaultRoutes(): Record<string, unknown> {
  return {
    "/api/map/base": BASE_PAYLOAD,
    "/api/map/highlight/Hindko": HIGHLIGHT_HINDKO,
    "/api/map/highlight/Ghost": HIGHLIGHT_GHOST,
    "/api/map/overlay/retroflex": OVERLAY_PAYLOAD,
    "/api/languages/Hindko/sources": HINDKO_SOURCES,
    "/api/languages/Ghost/sources": [],
  };
}
