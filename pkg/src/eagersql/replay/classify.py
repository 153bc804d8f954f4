"""Shape taxonomy for exported table graphs.

Preview vertices are ignored; the label is a pure function of the remaining
degree structure: Linear when every vertex has in- and out-degree at most
one, Mesh when any vertex has in-degree at least two, otherwise Tree.
"""

from __future__ import annotations


def classify(dag_export: dict) -> str:
    preview_ids = {
        v["id"] for v in dag_export.get("vertices", []) if v.get("kind") == "Preview"
    }
    in_degree: dict[str, int] = {}
    out_degree: dict[str, int] = {}
    for edge in dag_export.get("edges", []):
        src, dst = edge["from"], edge["to"]
        if src in preview_ids or dst in preview_ids:
            continue
        out_degree[src] = out_degree.get(src, 0) + 1
        in_degree[dst] = in_degree.get(dst, 0) + 1
    if any(v >= 2 for v in in_degree.values()):
        return "Mesh"
    if all(v <= 1 for v in in_degree.values()) and all(
        v <= 1 for v in out_degree.values()
    ):
        return "Linear"
    return "Tree"
