import { AtlasApp } from "./app.js";

const API_BASE = (window as { ATLAS_API_BASE?: string }).ATLAS_API_BASE ?? "";

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app container");
  const app = new AtlasApp(root, { apiBase: API_BASE });
  await app.init();

  const select = document.getElementById("overlay-select");
  if (select instanceof HTMLSelectElement) {
    select.addEventListener("change", () => {
      void app.selectOverlay(select.value === "" ? null : select.value);
    });
  }

  root.addEventListener("wheel", (event) => {
    event.preventDefault();
    app.zoomTo(app.state.zoom * (event.deltaY < 0 ? 1.25 : 0.8));
  });

  let dragging: { x: number; y: number } | null = null;
  root.addEventListener("mousedown", (event) => {
    dragging = { x: event.clientX, y: event.clientY };
  });
  window.addEventListener("mouseup", () => {
    dragging = null;
  });
  window.addEventListener("mousemove", (event) => {
    if (!dragging) return;
    const degPerPx = 0.05 / app.state.zoom;
    app.panBy((dragging.x - event.clientX) * degPerPx, (event.clientY - dragging.y) * degPerPx);
    dragging = { x: event.clientX, y: event.clientY };
  });
}

void boot();
