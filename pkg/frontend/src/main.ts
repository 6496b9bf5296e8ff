// Browser entry point: wires the state machine to the DOM, polls metrics
// every 2 seconds, and keeps the scatter/chart canvases in sync.

import { ApiClient } from "./api.js";
import {
  drawAccuracyChart,
  drawScatter,
  renderBanner,
  renderPending,
  renderStatus,
  ScatterPoint,
  shouldShowScatter,
} from "./render.js";
import { LabelerSession, UiSessionView } from "./state.js";

const POLL_MS = 2000;

interface SeenPoint {
  features: number[];
  classIndex?: number;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function start(): void {
  const api = new ApiClient("");
  let session: LabelerSession | null = null;
  let submitting = false; // at most one in-flight label submission
  const seen = new Map<number, SeenPoint>();

  const statusEl = el<HTMLElement>("status");
  const bannerEl = el<HTMLElement>("banner");
  const pendingEl = el<HTMLElement>("pending");
  const scatterCanvas = el<HTMLCanvasElement>("scatter");
  const chartCanvas = el<HTMLCanvasElement>("chart");

  function repaint(view: UiSessionView): void {
    statusEl.innerHTML = renderStatus(view);
    bannerEl.innerHTML = renderBanner(view);
    pendingEl.innerHTML = renderPending(view);
    for (const row of view.pending) {
      if (!seen.has(row.id)) seen.set(row.id, { features: row.features });
    }
    const dims = view.pending[0]?.features.length ?? seen.values().next().value?.features.length ?? 0;
    if (shouldShowScatter(dims)) {
      scatterCanvas.style.display = "";
      const queryIds = new Set(view.pending.map((r) => r.id));
      const points: ScatterPoint[] = [...seen.entries()].map(([id, p]) => ({
        x: p.features[0],
        y: p.features[1],
        kind: queryIds.has(id) ? "query" : p.classIndex !== undefined ? "labeled" : "pool",
        classIndex: p.classIndex,
      }));
      const ctx = scatterCanvas.getContext("2d");
      if (ctx) drawScatter(ctx, scatterCanvas.width, scatterCanvas.height, points);
    } else {
      scatterCanvas.style.display = "none";
    }
    const chartCtx = chartCanvas.getContext("2d");
    if (chartCtx) drawAccuracyChart(chartCtx, chartCanvas.width, chartCanvas.height, view.accuracySeries);
  }

  pendingEl.addEventListener("click", async (ev) => {
    const target = ev.target as HTMLElement;
    if (!target.matches("button.label-btn") || !session || submitting) return;
    const rowId = Number(target.dataset.row);
    const classIndex = Number(target.dataset.class);
    submitting = true;
    try {
      const view = await session.label(rowId, classIndex);
      const point = seen.get(rowId);
      if (point && !view.pending.some((r) => r.id === rowId)) point.classIndex = classIndex;
      repaint(view);
    } finally {
      submitting = false;
    }
  });

  bannerEl.addEventListener("click", async (ev) => {
    if ((ev.target as HTMLElement).id === "retry" && session) {
      repaint(await session.refresh());
    }
  });

  el<HTMLButtonElement>("connect").addEventListener("click", async () => {
    const sessionId = el<HTMLInputElement>("session-id").value.trim();
    if (!sessionId) return;
    session = new LabelerSession(api, sessionId);
    repaint(await session.connect());
  });

  setInterval(async () => {
    if (session && !submitting) repaint(await session.refresh());
  }, POLL_MS);

  const fromUrl = new URLSearchParams(location.search).get("session");
  if (fromUrl) {
    el<HTMLInputElement>("session-id").value = fromUrl;
    el<HTMLButtonElement>("connect").click();
  }
}

document.addEventListener("DOMContentLoaded", start);
