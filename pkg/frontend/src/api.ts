import type { HighlightPayload, LanguageSummary, MapPayload } from "./types.js";

/** Thin typed client over the atlas endpoints; the base URL is the only
 * configuration. */
export class AtlasClient {
  constructor(private readonly baseUrl: string = "") {}

  private async get<T>(path: string): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`);
    if (!response.ok) {
      throw new Error(`${path}: HTTP ${response.status}`);
    }
    return (await response.json()) as T;
  }

  languages(): Promise<LanguageSummary[]> {
    return this.get("/api/languages");
  }

  baseMap(): Promise<MapPayload> {
    return this.get("/api/map/base");
  }

  highlight(languageId: string): Promise<HighlightPayload> {
    return this.get(`/api/map/highlight/${encodeURIComponent(languageId)}`);
  }

  overlay(featureId: string): Promise<MapPayload> {
    return this.get(`/api/map/overlay/${encodeURIComponent(featureId)}`);
  }

  sources(languageId: string): Promise<string[]> {
    return this.get(`/api/languages/${encodeURIComponent(languageId)}/sources`);
  }
}
