/** View state and its transition rules.
 *
 * Hover and selection are independent: hovering never touches the selected
 * language, and the bibliography panel stays open exactly as long as a
 * language is selected. Zoom is clamped to [1, 64].
 */

export const MIN_ZOOM = 1;
export const MAX_ZOOM = 64;

export interface ViewState {
  centerLon: number;
  centerLat: number;
  zoom: number;
  activeOverlay: string | null;
  hoveredLanguage: string | null;
  selectedLanguage: string | null;
}

export function initialState(centerLon: number, centerLat: number): ViewState {
  return {
    centerLon,
    centerLat,
    zoom: MIN_ZOOM,
    activeOverlay: null,
    hoveredLanguage: null,
    selectedLanguage: null,
  };
}

export function clampZoom(zoom: number): number {
  return Math.min(MAX_ZOOM, Math.max(MIN_ZOOM, zoom));
}

export function withZoom(state: ViewState, zoom: number): ViewState {
  return { ...state, zoom: clampZoom(zoom) };
}

export function withPan(state: ViewState, dLon: number, dLat: number): ViewState {
  return { ...state, centerLon: state.centerLon + dLon, centerLat: state.centerLat + dLat };
}

export function withHover(state: ViewState, languageId: string | null): ViewState {
  return { ...state, hoveredLanguage: languageId };
}

export function withSelection(state: ViewState, languageId: string | null): ViewState {
  return { ...state, selectedLanguage: languageId };
}

export function withOverlay(state: ViewState, featureId: string | null): ViewState {
  return { ...state, activeOverlay: featureId };
}

/** Monotonic token source for in-flight request supersession: a response is
 * applied only if its token is still the latest one issued. */
export class TokenSource {
  private current = 0;

  next(): number {
    this.current += 1;
    return this.current;
  }

  isCurrent(token: number): boolean {
    return token === this.current;
  }
}
