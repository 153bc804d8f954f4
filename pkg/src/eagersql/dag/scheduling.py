"""Execution ordering over the speculation DAG."""

from __future__ import annotations

from eagersql.dag.model import SpecDag


def _topo(dag: SpecDag, ids: list[str]) -> list[str]:
    """Deterministic topological order of `ids` (insertion-order tie-break)."""
    pool = set(ids)
    order = list(dag.vertices)  # insertion order
    remaining = [v for v in order if v in pool]
    out: list[str] = []
    placed: set[str] = set()
    while remaining:
        progressed = False
        for vid in list(remaining):
            parents = [p for p in dag.parents(vid) if p in pool and p not in placed]
            if not parents:
                out.append(vid)
                placed.add(vid)
                remaining.remove(vid)
                progressed = True
        if not progressed:  # cycle guard; assert_acyclic makes this unreachable
            out.extend(remaining)
            break
    return out


def schedule(dag: SpecDag, mode: str = "Speculative") -> list[str]:
    """Vertex execution order.

    Speculative: pending ancestors of the preview first, then the preview,
    then pending non-ancestors; each class in topological order. Immediate:
    the preview alone.
    """
    if mode == "Immediate":
        return [dag.preview_id] if dag.preview_id else []
    if mode != "Speculative":
        raise ValueError(f"unknown mode {mode}")

    runnable = [
        v.id
        for v in dag.vertices.values()
        if v.id in dag.active and v.status == "Pending" and v.kind == "TempTable"
    ]
    out: list[str] = []
    if dag.preview_id is not None:
        ancestors = dag.ancestors(dag.preview_id)
        out.extend(_topo(dag, [v for v in runnable if v in ancestors]))
        out.append(dag.preview_id)
        out.extend(_topo(dag, [v for v in runnable if v not in ancestors]))
    else:
        out.extend(_topo(dag, runnable))
    return out
