// Page wiring: envelope explorer on the left, session cockpit on the
// right. All data flows through ApiClient; this file only moves markup
// into the page and events back out.

import { ApiClient } from "./api.js";
import { parseEnvelopeCsv } from "./csv.js";
import { EnvelopeView } from "./envelope.js";
import {
  envelopeSvg,
  envelopeTable,
  errorBanner,
  prefixList,
  remainingList,
} from "./render.js";
import { SessionCockpit } from "./session.js";

const api = new ApiClient("");

let cockpit: SessionCockpit | null = null;
let view: EnvelopeView | null = null;

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node;
}

function redraw(): void {
  el("error").innerHTML = errorBanner(cockpit?.lastError ?? null);
  if (view !== null) {
    el("chart").innerHTML = envelopeSvg(view);
    el("curve").innerHTML = envelopeTable(view.points);
  }
  if (cockpit !== null && cockpit.state !== null) {
    el("remaining").innerHTML = remainingList(cockpit.state.remaining);
    el("prefix").innerHTML = prefixList(cockpit.state.prefix);
    const constant = cockpit.state.constant;
    el("constant").textContent =
      `family ${constant.family}, alpha ${constant.alpha}, c ${constant.c.toFixed(4)}`;
  }
}

async function reloadEnvelope(): Promise<void> {
  if (cockpit === null) return;
  const csv = await api.envelopeCsv(cockpit.sessionId);
  const showRaw = (el("raw-toggle") as HTMLInputElement).checked;
  const previous = view;
  view = new EnvelopeView(
    parseEnvelopeCsv(csv),
    window.localStorage,
    `fdp-annotations-${cockpit.sessionId}`,
  );
  view.showRaw = showRaw;
  if (previous !== null && previous.selectedK !== null &&
      view.inRange(previous.selectedK)) {
    view.selectPoint(previous.selectedK);
  }
  redraw();
}

async function startSession(): Promise<void> {
  const text = (el("data-input") as HTMLTextAreaElement).value;
  const ids: string[] = [];
  const p: number[] = [];
  const x: string[] = [];
  for (const line of text.split("\n")) {
    const cells = line.split(",").map((cell) => cell.trim());
    if (cells.length < 2 || cells[0] === "id") continue;
    ids.push(cells[0]);
    p.push(Number(cells[1]));
    x.push(cells[2] ?? "");
  }
  const config = {
    p_star: Number((el("p-star") as HTMLInputElement).value),
    lambda: Number((el("lambda") as HTMLInputElement).value),
    alpha: Number((el("alpha") as HTMLInputElement).value),
  };
  try {
    const sessionId = await api.createSession(config, { ids, p, x });
    cockpit = new SessionCockpit(api, sessionId);
    await cockpit.refresh();
    await reloadEnvelope();
  } catch (err) {
    el("error").innerHTML = errorBanner(
      err instanceof Error ? err.message : String(err));
  }
}

function wire(): void {
  el("start").addEventListener("click", () => void startSession());
  el("raw-toggle").addEventListener("change", () => void reloadEnvelope());
  el("remaining").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const hypId = target.dataset.id;
    if (hypId === undefined || cockpit === null) return;
    void cockpit.choose(hypId).then(() => reloadEnvelope());
  });
  el("chart").addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const k = target.dataset.k;
    if (k === undefined || view === null) return;
    view.selectPoint(Number(k));
    const label = window.prompt("Annotation for this rejection set (empty to skip):");
    if (label !== null && label.trim() !== "") {
      view.annotate(Number(k), label);
    }
    redraw();
  });
}

wire();
