import type { Projector } from "./projection.js";
import type { HighlightPayload, MapPayload } from "./types.js";
import { NO_DATA_FILL, isPolygonFeature } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

/** SVG map surface. Every polygon and color is taken verbatim from the API
 * payloads; the only client-side geometry is the fixed projection shared
 * with the server and the pan/zoom affine transform. */
export class MapView {
  readonly svg: SVGSVGElement;
  private readonly viewport: SVGGElement;
  private readonly zoneLayer: SVGGElement;
  private readonly circleLayer: SVGGElement;
  private readonly highlightLayer: SVGGElement;

  constructor(doc: Document, private readonly projector: Projector) {
    this.svg = doc.createElementNS(SVG_NS, "svg");
    this.svg.setAttribute("width", String(projector.width));
    this.svg.setAttribute("height", projector.height.toFixed(2));
    this.svg.setAttribute("viewBox", `0 0 ${projector.width} ${projector.height.toFixed(2)}`);
    this.viewport = doc.createElementNS(SVG_NS, "g");
    this.viewport.setAttribute("class", "viewport");
    this.zoneLayer = doc.createElementNS(SVG_NS, "g");
    this.zoneLayer.setAttribute("class", "zones");
    this.circleLayer = doc.createElementNS(SVG_NS, "g");
    this.circleLayer.setAttribute("class", "circles");
    this.highlightLayer = doc.createElementNS(SVG_NS, "g");
    this.highlightLayer.setAttribute("class", "highlight");
    this.viewport.append(this.zoneLayer, this.circleLayer, this.highlightLayer);
    this.svg.append(this.viewport);
  }

  private ring(coordinates: number[][][]): string {
    const outer = coordinates[0] ?? [];
    const points = outer
      .slice(0, -1)
      .map(([lon, lat]) => this.projector.toScreen(lon ?? 0, lat ?? 0))
      .map(([x, y]) => `${x.toFixed(2)},${y.toFixed(2)}`);
    return `M ${points.join(" L ")} Z`;
  }

  /** Draw (or redraw) zones and circles from a base or overlay payload. */
  renderBase(payload: MapPayload, onHover: (id: string | null) => void, onClick: (id: string) => void): void {
    const doc = this.svg.ownerDocument;
    this.zoneLayer.replaceChildren();
    this.circleLayer.replaceChildren();
    for (const feature of payload.features) {
      if (isPolygonFeature(feature)) {
        const path = doc.createElementNS(SVG_NS, "path");
        path.setAttribute("d", this.ring(feature.geometry.coordinates));
        path.setAttribute("fill", feature.properties.fill);
        path.setAttribute("stroke", "#ffffff");
        path.dataset.owners = feature.properties.owners.join(",");
        if (feature.properties.fill === NO_DATA_FILL) {
          path.classList.add("no-data");
          const title = doc.createElementNS(SVG_NS, "title");
          title.textContent = "no data";
          path.append(title);
        }
        this.zoneLayer.append(path);
      } else {
        const props = feature.properties;
        const [lon, lat] = feature.geometry.coordinates;
        const [cx, cy] = this.projector.toScreen(lon, lat);
        const circle = doc.createElementNS(SVG_NS, "circle");
        circle.setAttribute("cx", cx.toFixed(2));
        circle.setAttribute("cy", cy.toFixed(2));
        circle.setAttribute("r", String(props.radius_px));
        circle.setAttribute("fill", props.fill);
        circle.setAttribute("stroke", "#333333");
        circle.dataset.languageId = props.language_id;
        circle.dataset.nSources = String(props.n_sources);
        circle.addEventListener("mouseenter", () => onHover(props.language_id));
        circle.addEventListener("mouseleave", () => onHover(null));
        circle.addEventListener("click", () => onClick(props.language_id));
        this.circleLayer.append(circle);
      }
    }
  }

  /** Swap zone fills from another payload with identical geometry order. */
  recolorZones(payload: MapPayload): void {
    const paths = Array.from(this.zoneLayer.querySelectorAll("path"));
    const polygons = payload.features.filter(isPolygonFeature);
    polygons.forEach((feature, i) => {
      const path = paths[i];
      if (!path) return;
      path.setAttribute("fill", feature.properties.fill);
      path.classList.toggle("no-data", feature.properties.fill === NO_DATA_FILL);
      path.querySelector("title")?.remove();
      if (feature.properties.fill === NO_DATA_FILL) {
        const title = this.svg.ownerDocument.createElementNS(SVG_NS, "title");
        title.textContent = "no data";
        path.append(title);
      }
    });
  }

  /** Show one language's zones and points, dimming everything else. */
  showHighlight(payload: HighlightPayload): void {
    const doc = this.svg.ownerDocument;
    this.highlightLayer.replaceChildren();
    for (const feature of payload.features) {
      if (isPolygonFeature(feature)) {
        const path = doc.createElementNS(SVG_NS, "path");
        path.setAttribute("d", this.ring(feature.geometry.coordinates));
        path.setAttribute("fill", "none");
        path.setAttribute("stroke", "#111111");
        path.setAttribute("stroke-width", "2");
        this.highlightLayer.append(path);
      } else {
        const [lon, lat] = feature.geometry.coordinates;
        const [cx, cy] = this.projector.toScreen(lon, lat);
        const point = doc.createElementNS(SVG_NS, "circle");
        point.setAttribute("cx", cx.toFixed(2));
        point.setAttribute("cy", cy.toFixed(2));
        point.setAttribute("r", String(2 + 2 * Math.sqrt(feature.properties.weight)));
        point.setAttribute("fill", "#111111");
        point.dataset.locationName = feature.properties.location_name;
        this.highlightLayer.append(point);
      }
    }
    this.zoneLayer.classList.add("dimmed");
    this.circleLayer.classList.add("dimmed");
  }

  clearHighlight(): void {
    this.highlightLayer.replaceChildren();
    this.zoneLayer.classList.remove("dimmed");
    this.circleLayer.classList.remove("dimmed");
  }

  get highlightChildren(): Element[] {
    return Array.from(this.highlightLayer.children);
  }

  get zonePaths(): SVGPathElement[] {
    return Array.from(this.zoneLayer.querySelectorAll("path"));
  }

  get circles(): SVGCircleElement[] {
    return Array.from(this.circleLayer.querySelectorAll("circle"));
  }

  /** Apply the pan/zoom affine transform around the projected center. */
  setTransform(zoom: number, centerXPx: number, centerYPx: number): void {
    const tx = this.projector.width / 2 - zoom * centerXPx;
    const ty = this.projector.height / 2 - zoom * centerYPx;
    this.viewport.setAttribute(
      "transform",
      `translate(${tx.toFixed(2)} ${ty.toFixed(2)}) scale(${zoom})`,
    );
  }
}
