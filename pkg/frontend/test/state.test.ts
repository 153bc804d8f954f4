import { describe, expect, it } from "vitest";

import { applyEdit, applyMessage, dismissToast, initialState } from "../src/state.js";
import type { PreviewMessage, StatusMessage } from "../src/protocol.js";

function preview(basisSeq: number): PreviewMessage {
  return {
    type: "preview",
    columns: ["a"],
    rows: [[1]],
    approximate: false,
    source: "Direct",
    elapsedMs: 1,
    rowsScanned: 10,
    basisSeq,
  };
}

function status(basisSeq: number): StatusMessage {
  return {
    type: "status",
    dagSummary: {
      vertexCount: 0,
      edgeCount: 0,
      byStatus: {},
      tempBytes: 0,
      graph: { vertices: [], edges: [] },
    },
    basisSeq,
  };
}

describe("message reducer", () => {
  it("renders payloads whose basisSeq matches the buffer revision", () => {
    let state = applyEdit(initialState(), "SELECT 1", [0, 8], 3);
    state = applyMessage(state, preview(3));
    expect(state.previewPane?.basisSeq).toBe(3);
    expect(state.dropped).toBe(0);
  });

  it("never renders stale-basisSeq payloads", () => {
    let state = applyEdit(initialState(), "SELECT 1", [0, 8], 3);
    state = applyMessage(state, preview(2));
    state = applyMessage(state, {
      type: "diff",
      hunks: [{ old: "a", new: "b" }],
      overProjected: [],
      basisSeq: 7,
    });
    expect(state.previewPane).toBeNull();
    expect(state.pendingDiff).toBeNull();
    expect(state.dropped).toBe(2);
  });

  it("clears diff and preview the moment the buffer changes", () => {
    let state = applyEdit(initialState(), "SELECT 1", [0, 8], 1);
    state = applyMessage(state, preview(1));
    state = applyEdit(state, "SELECT 12", [0, 9], 2);
    expect(state.previewPane).toBeNull();
    expect(state.pendingDiff).toBeNull();
  });

  it("accepts status from the current or an older snapshot, not newer", () => {
    let state = applyEdit(initialState(), "SELECT 1", [0, 8], 5);
    state = applyMessage(state, status(4));
    expect(state.dagPanel).not.toBeNull();
    state = applyMessage(state, status(6));
    expect(state.dropped).toBe(1);
  });

  it("collects errors as bounded non-blocking toasts", () => {
    let state = initialState();
    for (let i = 0; i < 7; i += 1) {
      state = applyMessage(state, { type: "error", stage: "debug", message: `e${i}` });
    }
    expect(state.toasts).toHaveLength(5);
    expect(state.toasts[4]?.message).toBe("e6");
    state = dismissToast(state, 0);
    expect(state.toasts).toHaveLength(4);
  });
});
