// HTML builders for the view. Kept as pure string functions so they are
// testable without a browser; main.ts owns event wiring and canvases.

import { PendingRow } from "./api.js";
import { probaPercents, shouldShowScatter, UiSessionView } from "./state.js";

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderClassButtons(view: UiSessionView, rowId: number): string {
  return view.classNames
    .map(
      (name, i) =>
        `<button class="label-btn" data-row="${rowId}" data-class="${i}">${esc(name)}</button>`,
    )
    .join("");
}

export function renderFeatureTable(row: PendingRow): string {
  const cells = row.features
    .map((v, i) => `<tr><td>f${i}</td><td>${v.toFixed(4)}</td></tr>`)
    .join("");
  return `<table class="features"><tbody>${cells}</tbody></table>`;
}

export function renderProbaBars(row: PendingRow, classNames: string[]): string {
  const pct = probaPercents(row.proba);
  return row.proba
    .map(
      (_, i) =>
        `<div class="proba-row"><span>${esc(classNames[i] ?? `c${i}`)}</span>` +
        `<div class="bar" style="width:${pct[i]}%"></div><span>${pct[i]}%</span></div>`,
    )
    .join("");
}

export function renderPending(view: UiSessionView): string {
  if (view.pending.length === 0) {
    return `<p class="empty">No pending instances. Pool remaining: ${view.poolRemaining}.</p>`;
  }
  return view.pending
    .map(
      (row) =>
        `<div class="card" data-row-card="${row.id}">` +
        `<h3>Instance #${row.id}</h3>` +
        renderFeatureTable(row) +
        `<div class="probas">${renderProbaBars(row, view.classNames)}</div>` +
        `<div class="buttons">${renderClassButtons(view, row.id)}</div>` +
        `</div>`,
    )
    .join("");
}

export function renderStatus(view: UiSessionView): string {
  const parts = [
    `<span class="progress">Labeled ${view.progress.labeled} / ${view.progress.total}</span>`,
    `<span class="pool">Pool ${view.poolRemaining}</span>`,
  ];
  if (view.queuedCount > 0) parts.push(`<span class="queued">${view.queuedCount} queued</span>`);
  return parts.join(" ");
}

export function renderBanner(view: UiSessionView): string {
  if (view.error) {
    return `<div class="banner error">${esc(view.error)} <button id="retry">Retry</button></div>`;
  }
  if (view.toast) {
    return `<div class="banner toast">${esc(view.toast)}</div>`;
  }
  return "";
}

export interface ScatterPoint {
  x: number;
  y: number;
  kind: "pool" | "labeled" | "query";
  classIndex?: number;
}

const CLASS_COLORS = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

export function drawScatter(
  ctx: CanvasRenderingContext2D,
  width: number,
  height: number,
  points: ScatterPoint[],
): void {
  ctx.clearRect(0, 0, width, height);
  if (points.length === 0) return;
  const xs = points.map((p) => p.x);
  const ys = points.map((p) => p.y);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  const sx = (v: number) => 10 + ((v - x0) / (x1 - x0 || 1)) * (width - 20);
  const sy = (v: number) => height - 10 - ((v - y0) / (y1 - y0 || 1)) * (height - 20);
  for (const p of points) {
    ctx.beginPath();
    if (p.kind === "query") {
      ctx.strokeStyle = "#000";
      ctx.lineWidth = 2;
      ctx.arc(sx(p.x), sy(p.y), 7, 0, 2 * Math.PI);
      ctx.stroke();
    } else {
      ctx.fillStyle =
        p.kind === "labeled" ? CLASS_COLORS[(p.classIndex ?? 0) % CLASS_COLORS.length] : "#bbb";
      ctx.arc(sx(p.x), sy(p.y), 4, 0, 2 * Math.PI);
      ctx.fill();
    }
  }
}

export function drawAccuracyChart(
  ctx: CanvasRenderingContext2D,
  width: number,
  height: number,
  series: number[],
): void {
  ctx.clearRect(0, 0, width, height);
  if (series.length === 0) return;
  const sx = (i: number) => 30 + (i / Math.max(series.length - 1, 1)) * (width - 40);
  const sy = (v: number) => height - 15 - v * (height - 30);
  ctx.strokeStyle = "#888";
  ctx.strokeRect(30, 15, width - 40, height - 30);
  ctx.strokeStyle = "#1f77b4";
  ctx.lineWidth = 2;
  ctx.beginPath();
  series.forEach((v, i) => (i === 0 ? ctx.moveTo(sx(i), sy(v)) : ctx.lineTo(sx(i), sy(v))));
  ctx.stroke();
  ctx.fillStyle = "#1f77b4";
  series.forEach((v, i) => {
    ctx.beginPath();
    ctx.arc(sx(i), sy(v), 3, 0, 2 * Math.PI);
    ctx.fill();
  });
}

export { shouldShowScatter };
