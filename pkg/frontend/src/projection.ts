/** Scaled-equirectangular projection, matching the server's map plane:
 * x = (lon - lonMin) * cos(refLat), y = lat - latMin, with refLat the
 * mid-latitude of the bounding box. Screen coordinates flip y. */

export interface Projector {
  width: number;
  height: number;
  toScreen(lon: number, lat: number): [number, number];
}

export function makeProjector(
  bbox: [number, number, number, number],
  widthPx: number,
): Projector {
  const [lonMin, latMin, lonMax, latMax] = bbox;
  const refLat = (latMin + latMax) / 2;
  const lonScale = Math.cos((refLat * Math.PI) / 180);
  const planeW = (lonMax - lonMin) * lonScale;
  const planeH = latMax - latMin;
  const height = (widthPx * planeH) / planeW;
  return {
    width: widthPx,
    height,
    toScreen(lon: number, lat: number): [number, number] {
      const x = (lon - lonMin) * lonScale;
      const y = lat - latMin;
      return [(x / planeW) * widthPx, height - (y / planeH) * height];
    },
  };
}
