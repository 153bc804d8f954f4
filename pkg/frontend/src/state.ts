/** Editor state and the message reducer.
 *
 * Invariant: a diff or preview is rendered only while its basisSeq equals the
 * revision of the buffer it was computed from; anything else is dropped on
 * arrival, and buffered payloads are cleared the moment the buffer changes.
 * The reducer never edits the buffer: speculated text exists only as
 * decorations.
 */

import type {
  DagSummary,
  DiffMessage,
  ErrorMessage,
  PreviewMessage,
  ServerMessage,
} from "./protocol.js";

export interface Toast {
  stage: string;
  message: string;
}

export interface EditorState {
  buffer: string;
  cursor: [number, number];
  revision: number; // seq of the snapshot describing the current buffer
  pendingDiff: DiffMessage | null;
  previewPane: PreviewMessage | null;
  dagPanel: DagSummary | null;
  statusNote: string | null;
  toasts: Toast[];
  connected: boolean;
  dropped: number; // stale payloads discarded, for diagnostics
}

export function initialState(): EditorState {
  return {
    buffer: "",
    cursor: [0, 0],
    revision: 0,
    pendingDiff: null,
    previewPane: null,
    dagPanel: null,
    statusNote: null,
    toasts: [],
    connected: false,
    dropped: 0,
  };
}

/** The user edited the buffer: bump the revision and invalidate payloads
 * computed against older text. */
export function applyEdit(
  state: EditorState,
  buffer: string,
  cursor: [number, number],
  revision: number,
): EditorState {
  return {
    ...state,
    buffer,
    cursor,
    revision,
    pendingDiff: null,
    previewPane: null,
  };
}

function stale(state: EditorState, basisSeq: number | undefined): boolean {
  return basisSeq === undefined || basisSeq !== state.revision;
}

export function applyMessage(state: EditorState, message: ServerMessage): EditorState {
  switch (message.type) {
    case "diff":
      if (stale(state, message.basisSeq)) {
        return { ...state, dropped: state.dropped + 1 };
      }
      return { ...state, pendingDiff: message };
    case "preview":
      if (stale(state, message.basisSeq)) {
        return { ...state, dropped: state.dropped + 1 };
      }
      return { ...state, previewPane: message };
    case "status":
      // The DAG panel reflects server truth, not buffer contents; it only
      // needs to be monotonic, so older-than-current summaries are dropped.
      if (message.basisSeq > state.revision) {
        return { ...state, dropped: state.dropped + 1 };
      }
      return {
        ...state,
        dagPanel: message.dagSummary,
        statusNote: message.note ?? null,
      };
    case "error":
      return errorToast(state, message);
  }
}

function errorToast(state: EditorState, message: ErrorMessage): EditorState {
  const toasts = [...state.toasts, { stage: message.stage, message: message.message }];
  // Non-blocking: keep only the most recent few.
  return { ...state, toasts: toasts.slice(-5) };
}

export function dismissToast(state: EditorState, index: number): EditorState {
  return { ...state, toasts: state.toasts.filter((_, i) => i !== index) };
}
