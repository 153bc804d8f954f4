import { describe, expect, it } from "vitest";

import { dagView } from "../src/dag.js";
import { previewView, PREVIEW_ROW_CAP } from "../src/preview.js";
import type { DagSummary, PreviewMessage } from "../src/protocol.js";

function payload(rows: unknown[][], overrides: Partial<PreviewMessage> = {}): PreviewMessage {
  return {
    type: "preview",
    columns: ["item", "price"],
    rows,
    approximate: false,
    source: "Speculative",
    elapsedMs: 2.5,
    rowsScanned: 100,
    basisSeq: 1,
    ...overrides,
  };
}

describe("preview pane", () => {
  it("caps the table at the preview limit", () => {
    const rows = Array.from({ length: 45 }, (_, i) => [`r${i}`, i]);
    expect(previewView(payload(rows)).rows).toHaveLength(PREVIEW_ROW_CAP);
  });

  it("shows provenance and sampling badges", () => {
    const view = previewView(payload([["a", 1]], { approximate: true }));
    expect(view.badges).toEqual(["speculative", "approximate"]);
    expect(view.caption).toContain("100 scanned");
  });

  it("renders NULL and trims float noise", () => {
    const view = previewView(payload([[null, 3.14159265]]));
    expect(view.rows[0]).toEqual(["NULL", "3.1416"]);
  });
});

describe("dag panel", () => {
  it("formats one line per edge and counts by status", () => {
    const summary: DagSummary = {
      vertexCount: 3,
      edgeCount: 2,
      byStatus: { Pending: 1, Created: 2 },
      tempBytes: 4096,
      graph: {
        vertices: [
          { id: "tb_1", kind: "TempTable", status: "Created" },
          { id: "tb_2", kind: "TempTable", status: "Created" },
          { id: "pv_1", kind: "Preview" },
        ],
        edges: [
          { from: "tb_1", to: "tb_2", kind: "Subsumption" },
          { from: "tb_2", to: "pv_1", kind: "Dependency" },
        ],
      },
    };
    const view = dagView(summary);
    expect(view.edgeLines).toEqual([
      "tb_1 -> tb_2 [Subsumption]",
      "tb_2 -> pv_1 [Dependency]",
    ]);
    expect(view.counts).toEqual([
      { status: "Created", count: 2 },
      { status: "Pending", count: 1 },
    ]);
    expect(view.vertexLabels[0]).toBe("tb_1: TempTable (Created)");
  });
});
