/** Read-only DAG panel: status counts plus one `a -> b [kind]` line per
 * edge, built from the exported graph JSON in status messages. */

import type { DagSummary } from "./protocol.js";

export interface DagView {
  counts: { status: string; count: number }[];
  tempBytes: number;
  edgeLines: string[];
  vertexLabels: string[];
}

export function dagView(summary: DagSummary): DagView {
  const counts = Object.entries(summary.byStatus)
    .map(([status, count]) => ({ status, count }))
    .sort((a, b) => a.status.localeCompare(b.status));
  const edgeLines = summary.graph.edges.map(
    (e) => `${e.from} -> ${e.to} [${e.kind}]`,
  );
  const vertexLabels = summary.graph.vertices.map((v) => {
    const status = v.status ? ` (${v.status})` : "";
    return `${v.id}: ${v.kind}${status}`;
  });
  return { counts, tempBytes: summary.tempBytes, edgeLines, vertexLabels };
}
