import { AtlasClient } from "./api.js";
import { Legend } from "./legend.js";
import { MapView } from "./map.js";
import { BibliographyPanel } from "./panel.js";
import { makeProjector } from "./projection.js";
import {
  TokenSource,
  ViewState,
  initialState,
  withHover,
  withOverlay,
  withPan,
  withSelection,
  withZoom,
} from "./state.js";
import type { MapPayload } from "./types.js";
import { NO_DATA_FILL } from "./types.js";

export interface AtlasAppOptions {
  apiBase?: string;
  widthPx?: number;
}

/** Wires the map, bibliography panel, and legend to the atlas API.
 *
 * In-flight responses are applied only when their request token is still
 * current, so a fast second hover is never clobbered by a slow first one.
 */
export class AtlasApp {
  readonly client: AtlasClient;
  readonly root: HTMLElement;
  readonly panel: BibliographyPanel;
  readonly legend: Legend;
  map: MapView | null = null;
  state: ViewState = initialState(0, 0);
  private basePayload: MapPayload | null = null;
  private readonly hoverTokens = new TokenSource();
  private readonly selectTokens = new TokenSource();
  private readonly overlayTokens = new TokenSource();
  private readonly widthPx: number;

  constructor(root: HTMLElement, options: AtlasAppOptions = {}) {
    this.root = root;
    this.client = new AtlasClient(options.apiBase ?? "");
    this.widthPx = options.widthPx ?? 960;
    this.panel = new BibliographyPanel(root.ownerDocument);
    this.legend = new Legend(root.ownerDocument);
  }

  async init(): Promise<void> {
    const payload = await this.client.baseMap();
    this.basePayload = payload;
    this.root.replaceChildren();
    if (payload.features.length === 0) {
      const empty = this.root.ownerDocument.createElement("p");
      empty.className = "empty-state";
      empty.textContent = "No mapped languages yet.";
      this.root.append(empty, this.panel.element, this.legend.element);
      return;
    }
    const [lonMin, latMin, lonMax, latMax] = payload.bbox;
    this.state = initialState((lonMin + lonMax) / 2, (latMin + latMax) / 2);
    const projector = makeProjector(payload.bbox, this.widthPx);
    this.map = new MapView(this.root.ownerDocument, projector);
    this.map.renderBase(
      payload,
      (id) => void this.onHover(id),
      (id) => void this.onClick(id),
    );
    this.root.append(this.map.svg, this.panel.element, this.legend.element);
    this.applyTransform();
  }

  /** Hover highlight; a null id clears it. Stale responses are dropped. */
  async onHover(languageId: string | null): Promise<void> {
    this.state = withHover(this.state, languageId);
    const token = this.hoverTokens.next();
    if (!this.map) return;
    if (languageId === null) {
      this.map.clearHighlight();
      return;
    }
    const payload = await this.client.highlight(languageId);
    if (!this.hoverTokens.isCurrent(token) || this.state.hoveredLanguage !== languageId) {
      return; // superseded while in flight
    }
    this.map.showHighlight(payload);
  }

  /** Open (or replace) the bibliography panel for a language. */
  async onClick(languageId: string): Promise<void> {
    this.state = withSelection(this.state, languageId);
    const token = this.selectTokens.next();
    const entries = await this.client.sources(languageId);
    if (!this.selectTokens.isCurrent(token)) return;
    this.panel.show(languageId, entries, () => this.closePanel());
  }

  closePanel(): void {
    this.state = withSelection(this.state, null);
    this.panel.hide();
  }

  /** Recolor zones from an overlay, or restore base colors with null. */
  async selectOverlay(featureId: string | null): Promise<void> {
    this.state = withOverlay(this.state, featureId);
    const token = this.overlayTokens.next();
    if (!this.map || !this.basePayload) return;
    if (featureId === null) {
      this.map.recolorZones(this.basePayload);
      this.legend.hide();
      return;
    }
    const payload = await this.client.overlay(featureId);
    if (!this.overlayTokens.isCurrent(token)) return;
    this.map.recolorZones(payload);
    if (payload.overlay) {
      this.legend.show(payload.overlay, NO_DATA_FILL);
    }
  }

  zoomTo(zoom: number): void {
    this.state = withZoom(this.state, zoom);
    this.applyTransform();
  }

  panBy(dLon: number, dLat: number): void {
    this.state = withPan(this.state, dLon, dLat);
    this.applyTransform();
  }

  private applyTransform(): void {
    if (!this.map || !this.basePayload) return;
    const projector = makeProjector(this.basePayload.bbox, this.widthPx);
    const [cx, cy] = projector.toScreen(this.state.centerLon, this.state.centerLat);
    this.map.setTransform(this.state.zoom, cx, cy);
  }
}
