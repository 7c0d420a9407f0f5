import type { OverlayInfo } from "./types.js";

/** Two-endpoint overlay legend plus an entry for the no-data gray. */
export class Legend {
  readonly element: HTMLElement;

  constructor(doc: Document) {
    this.element = doc.createElement("div");
    this.element.className = "legend";
    this.element.hidden = true;
  }

  show(overlay: OverlayInfo, noDataFill: string): void {
    const doc = this.element.ownerDocument;
    this.element.replaceChildren();
    const title = doc.createElement("div");
    title.className = "legend-title";
    title.textContent = overlay.feature_id;
    this.element.append(title);

    const [oneLabel, zeroLabel] =
      overlay.kind === "binary" ? ["Yes", "No"] : ["100%", "0%"];
    this.element.append(this.row(doc, overlay.color_one, oneLabel));
    this.element.append(this.row(doc, overlay.color_zero, zeroLabel));
    this.element.append(this.row(doc, noDataFill, "no data"));
    this.element.hidden = false;
  }

  private row(doc: Document, color: string, label: string): HTMLElement {
    const row = doc.createElement("div");
    row.className = "legend-row";
    const swatch = doc.createElement("span");
    swatch.className = "legend-swatch";
    swatch.style.backgroundColor = color;
    swatch.dataset.color = color;
    const text = doc.createElement("span");
    text.textContent = label;
    row.append(swatch, text);
    return row;
  }

  hide(): void {
    this.element.hidden = true;
    this.element.replaceChildren();
  }
}
