// Parser for the envelope CSV endpoint. The schema is fixed, so this is
// deliberately strict: any header or shape drift is an error the UI
// surfaces rather than a silently wrong chart.

import type { EnvelopePoint } from "./api.js";

export const ENVELOPE_HEADER = [
  "k",
  "size",
  "v_hat",
  "v_bar",
  "fdp_bar_raw",
  "fdp_bar",
];

export class CsvError extends Error {
  constructor(message: string, public line: number) {
    super(`line ${line}: ${message}`);
  }
}

function parseNumber(cell: string, line: number, column: string): number {
  const value = Number(cell);
  if (cell.trim() === "" || Number.isNaN(value)) {
    throw new CsvError(`cannot parse ${column} value "${cell}"`, line);
  }
  return value;
}

export function parseEnvelopeCsv(text: string): EnvelopePoint[] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new CsvError("empty document", 1);
  }
  const header = lines[0].split(",").map((cell) => cell.trim());
  if (header.join(",") !== ENVELOPE_HEADER.join(",")) {
    throw new CsvError(
      `expected header "${ENVELOPE_HEADER.join(",")}", got "${lines[0]}"`,
      1,
    );
  }
  const points: EnvelopePoint[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",");
    if (cells.length !== ENVELOPE_HEADER.length) {
      throw new CsvError(
        `expected ${ENVELOPE_HEADER.length} columns, got ${cells.length}`,
        i + 1,
      );
    }
    points.push({
      k: parseNumber(cells[0], i + 1, "k"),
      size: parseNumber(cells[1], i + 1, "size"),
      v_hat: parseNumber(cells[2], i + 1, "v_hat"),
      v_bar: parseNumber(cells[3], i + 1, "v_bar"),
      fdp_bar_raw: parseNumber(cells[4], i + 1, "fdp_bar_raw"),
      fdp_bar: parseNumber(cells[5], i + 1, "fdp_bar"),
    });
  }
  return points;
}
