/** Preview pane view model: a bounded table with provenance badges. */

import type { PreviewMessage } from "./protocol.js";

export const PREVIEW_ROW_CAP = 30;

export interface PreviewView {
  columns: string[];
  rows: string[][];
  badges: string[]; // e.g. ["speculative"], ["direct", "approximate"]
  caption: string;
}

function cell(value: unknown): string {
  if (value === null || value === undefined) {
    return "NULL";
  }
  if (typeof value === "number" && !Number.isInteger(value)) {
    return value.toFixed(4).replace(/0+$/, "").replace(/\.$/, "");
  }
  return String(value);
}

export function previewView(payload: PreviewMessage): PreviewView {
  const badges = [payload.source.toLowerCase()];
  if (payload.approximate) {
    badges.push("approximate");
  }
  return {
    columns: payload.columns,
    rows: payload.rows.slice(0, PREVIEW_ROW_CAP).map((row) => row.map(cell)),
    badges,
    caption:
      `${payload.rows.length} rows, ${payload.rowsScanned} scanned, ` +
      `${payload.elapsedMs.toFixed(1)} ms`,
  };
}
