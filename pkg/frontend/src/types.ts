/** Wire types for the atlas API. The client treats geometry and colors as
 * opaque server output: it never recomputes zones or fills. */

export interface LanguageSummary {
  id: string;
  name: string;
  family_path: string[];
  n_sources: number;
  centroid: [number, number] | null;
}

export interface ZoneProperties {
  site_index: number;
  owners: string[];
  fill: string;
  neighbors?: number[];
  weight?: number;
}

export interface CircleProperties {
  language_id: string;
  fill: string;
  radius_px: number;
  n_sources: number;
}

export interface HighlightPointProperties {
  language_id: string;
  location_name: string;
  weight: number;
}

export interface PolygonFeature<P> {
  type: "Feature";
  geometry: { type: "Polygon"; coordinates: number[][][] };
  properties: P;
}

export interface PointFeature<P> {
  type: "Feature";
  geometry: { type: "Point"; coordinates: [number, number] };
  properties: P;
}

export type MapFeature =
  | PolygonFeature<ZoneProperties>
  | PointFeature<CircleProperties>;

export function isPolygonFeature<PP, CP>(
  feature: PolygonFeature<PP> | PointFeature<CP>,
): feature is PolygonFeature<PP> {
  return feature.geometry.type === "Polygon";
}

export interface OverlayInfo {
  feature_id: string;
  kind: "binary" | "continuous";
  color_zero: string;
  color_one: string;
}

export interface MapPayload {
  type: "FeatureCollection";
  bbox: [number, number, number, number];
  features: MapFeature[];
  overlay: OverlayInfo | null;
}

export interface HighlightPayload {
  type: "FeatureCollection";
  features: Array<
    PolygonFeature<ZoneProperties & { owners: string[] }> |
    PointFeature<HighlightPointProperties>
  >;
}

export const NO_DATA_FILL = "#cccccc";
