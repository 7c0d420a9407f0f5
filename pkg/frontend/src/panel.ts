/** Scrollable bibliography panel with location and topic chips.
 *
 * Entries arrive as formatted strings whose trailing bracket groups carry
 * the location and topic annotations; the chips are peeled off for display
 * while the citation text is shown verbatim.
 */

export interface ParsedEntry {
  citation: string;
  locations: string[];
  topics: string[];
}

export function parseEntry(line: string): ParsedEntry {
  const groups: string[] = [];
  let rest = line.trim();
  const trailing = /\s*\[([^\[\]]*)\]$/;
  while (groups.length < 2) {
    const match = rest.match(trailing);
    if (!match) break;
    groups.unshift(match[1] ?? "");
    rest = rest.slice(0, match.index).trimEnd();
  }
  const split = (group: string | undefined): string[] =>
    (group ?? "").split(",").map((s) => s.trim()).filter((s) => s.length > 0);
  if (groups.length === 2) {
    return { citation: rest, locations: split(groups[0]), topics: split(groups[1]) };
  }
  return { citation: rest, locations: [], topics: split(groups[0]) };
}

export class BibliographyPanel {
  readonly element: HTMLElement;

  constructor(doc: Document) {
    this.element = doc.createElement("aside");
    this.element.className = "bibliography-panel";
    this.element.hidden = true;
  }

  get isOpen(): boolean {
    return !this.element.hidden;
  }

  show(languageId: string, entries: string[], onClose: () => void): void {
    const doc = this.element.ownerDocument;
    this.element.replaceChildren();

    const header = doc.createElement("header");
    const title = doc.createElement("h2");
    title.textContent = languageId;
    const close = doc.createElement("button");
    close.className = "panel-close";
    close.textContent = "×";
    close.addEventListener("click", onClose);
    header.append(title, close);
    this.element.append(header);

    if (entries.length === 0) {
      const empty = doc.createElement("p");
      empty.className = "empty-state";
      empty.textContent = "no sources";
      this.element.append(empty);
    } else {
      const list = doc.createElement("ul");
      list.className = "entries";
      for (const line of entries) {
        const parsed = parseEntry(line);
        const item = doc.createElement("li");
        const citation = doc.createElement("span");
        citation.className = "citation";
        citation.textContent = parsed.citation;
        item.append(citation);
        for (const location of parsed.locations) {
          item.append(this.chip(doc, "location-chip", location));
        }
        for (const topic of parsed.topics) {
          item.append(this.chip(doc, "topic-chip", topic));
        }
        list.append(item);
      }
      this.element.append(list);
    }
    this.element.hidden = false;
  }

  private chip(doc: Document, className: string, text: string): HTMLElement {
    const chip = doc.createElement("span");
    chip.className = `chip ${className}`;
    chip.textContent = text;
    return chip;
  }

  hide(): void {
    this.element.hidden = true;
    this.element.replaceChildren();
  }
}
