// Markup builders. Kept as pure string functions so they are testable
// without a DOM; main.ts assigns the results to innerHTML.

import type { EnvelopePoint, PrefixEntry, RemainingEntry } from "./api.js";
import type { EnvelopeView } from "./envelope.js";

const WIDTH = 640;
const HEIGHT = 300;
const PAD = 36;

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function xScale(k: number, n: number): number {
  return PAD + (k / Math.max(n, 1)) * (WIDTH - 2 * PAD);
}

function yScale(value: number, maxY: number): number {
  return HEIGHT - PAD - (value / maxY) * (HEIGHT - 2 * PAD);
}

function stepPath(values: number[], n: number, maxY: number): string {
  const parts: string[] = [];
  for (let k = 0; k < values.length; k++) {
    const x = xScale(k, n);
    const y = yScale(values[k], maxY);
    if (k === 0) {
      parts.push(`M ${x.toFixed(1)} ${y.toFixed(1)}`);
    } else {
      // horizontal-then-vertical step between consecutive set sizes
      parts.push(`H ${x.toFixed(1)} V ${y.toFixed(1)}`);
    }
  }
  return parts.join(" ");
}

export function envelopeSvg(view: EnvelopeView): string {
  const points = view.points;
  if (points.length === 0) {
    return `<p class="empty">No envelope yet. Select a hypothesis to start the path.</p>`;
  }
  const n = points.length - 1;
  const series = view.plottedSeries();
  const maxY = Math.max(1, ...series);
  const path = stepPath(series, n, maxY);
  const markers = points
    .map((pt, k) => {
      const label = view.annotationFor(k);
      const cls = [
        "pt",
        k === view.selectedK ? "selected" : "",
        label !== null ? "annotated" : "",
      ]
        .filter(Boolean)
        .join(" ");
      const title = label === null ? "" : `<title>${esc(label)}</title>`;
      return `<circle class="${cls}" data-k="${k}" cx="${xScale(k, n).toFixed(1)}" ` +
        `cy="${yScale(series[k], maxY).toFixed(1)}" r="4">${title}</circle>`;
    })
    .join("");
  return `<svg viewBox="0 0 ${WIDTH} ${HEIGHT}" role="img">` +
    `<line class="axis" x1="${PAD}" y1="${HEIGHT - PAD}" x2="${WIDTH - PAD}" y2="${HEIGHT - PAD}"/>` +
    `<line class="axis" x1="${PAD}" y1="${PAD}" x2="${PAD}" y2="${HEIGHT - PAD}"/>` +
    `<path class="envelope" d="${path}"/>` +
    markers +
    `</svg>`;
}

export function envelopeTable(points: EnvelopePoint[]): string {
  const rows = points
    .map(
      (pt) =>
        `<tr data-k="${pt.k}"><td>${pt.k}</td><td>${pt.size}</td>` +
        `<td>${pt.v_hat}</td><td>${pt.v_bar}</td>` +
        `<td>${pt.fdp_bar_raw.toFixed(4)}</td><td>${pt.fdp_bar.toFixed(4)}</td></tr>`,
    )
    .join("");
  return `<table><thead><tr><th>k</th><th>|R|</th><th>est.</th>` +
    `<th>bound</th><th>FDP bound (raw)</th><th>FDP bound</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`;
}

export function remainingList(entries: RemainingEntry[]): string {
  if (entries.length === 0) {
    return `<p class="empty">All hypotheses selected.</p>`;
  }
  const rows = entries
    .map(
      (entry) =>
        `<tr><td>${esc(entry.id)}</td><td>${entry.x === null ? "" : esc(String(entry.x))}</td>` +
        `<td>${entry.g_p.toFixed(4)}</td>` +
        `<td><button class="select" data-id="${esc(entry.id)}">select</button></td></tr>`,
    )
    .join("");
  return `<table><thead><tr><th>id</th><th>side info</th>` +
    `<th>masked p</th><th></th></tr></thead><tbody>${rows}</tbody></table>`;
}

export function prefixList(entries: PrefixEntry[]): string {
  const rows = entries
    .map(
      (entry, i) =>
        `<tr><td>${i + 1}</td><td>${esc(entry.id)}</td><td>${entry.p}</td>` +
        `<td>${entry.included ? "in" : "out"}</td></tr>`,
    )
    .join("");
  return `<table><thead><tr><th>#</th><th>id</th><th>p (unmasked)</th>` +
    `<th>set</th></tr></thead><tbody>${rows}</tbody></table>`;
}

export function errorBanner(message: string | null): string {
  return message === null ? "" : `<div class="error">${esc(message)}</div>`;
}
