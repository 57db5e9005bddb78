// Envelope explorer state: a fetched curve plus the purely local UI state
// (selected point, persisted annotations). The view never recomputes any
// bound; it only re-arranges what the server sent.

import type { EnvelopePoint } from "./api.js";

export interface Annotation {
  k: number;
  label: string;
}

// localStorage-shaped so the browser storage drops in directly and tests
// can pass a Map-backed stub.
export interface KeyValueStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
}

export class MemoryStore implements KeyValueStore {
  private map = new Map<string, string>();

  getItem(key: string): string | null {
    return this.map.has(key) ? this.map.get(key)! : null;
  }

  setItem(key: string, value: string): void {
    this.map.set(key, value);
  }
}

export class EnvelopeView {
  selectedK: number | null = null;
  showRaw = false;
  private annotationsByK = new Map<number, string>();

  constructor(
    public readonly points: EnvelopePoint[],
    private store: KeyValueStore,
    private storageKey: string,
  ) {
    this.loadAnnotations();
  }

  private loadAnnotations(): void {
    const raw = this.store.getItem(this.storageKey);
    if (raw === null) return;
    try {
      const entries = JSON.parse(raw) as Annotation[];
      for (const entry of entries) {
        if (this.inRange(entry.k) && entry.label) {
          this.annotationsByK.set(entry.k, entry.label);
        }
      }
    } catch {
      // stale or foreign storage content; start clean
    }
  }

  private persist(): void {
    this.store.setItem(this.storageKey, JSON.stringify(this.annotations()));
  }

  inRange(k: number): boolean {
    return Number.isInteger(k) && k >= 0 && k < this.points.length;
  }

  selectPoint(k: number): void {
    if (!this.inRange(k)) {
      throw new RangeError(`point ${k} outside the curve`);
    }
    this.selectedK = k;
  }

  clearSelection(): void {
    this.selectedK = null;
  }

  annotate(k: number, label: string): void {
    if (!this.inRange(k)) {
      throw new RangeError(`point ${k} outside the curve`);
    }
    if (label.trim() === "") {
      throw new RangeError("annotation label must not be empty");
    }
    this.annotationsByK.set(k, label.trim());
    this.persist();
  }

  removeAnnotation(k: number): void {
    this.annotationsByK.delete(k);
    this.persist();
  }

  annotations(): Annotation[] {
    return [...this.annotationsByK.entries()]
      .sort((a, b) => a[0] - b[0])
      .map(([k, label]) => ({ k, label }));
  }

  annotationFor(k: number): string | null {
    return this.annotationsByK.get(k) ?? null;
  }

  // the series actually plotted, honoring the raw/clamped toggle
  plottedSeries(): number[] {
    return this.points.map((pt) => (this.showRaw ? pt.fdp_bar_raw : pt.fdp_bar));
  }
}
