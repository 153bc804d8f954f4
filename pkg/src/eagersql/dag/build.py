"""DAG construction and evolution across editor snapshots."""

from __future__ import annotations

import hashlib
from dataclasses import replace

from eagersql.dag.matching import find_match
from eagersql.dag.model import DagVertex, SpecDag
from eagersql.executor.registry import TempRegistry
from eagersql.speculator.types import SupersetQuery
from eagersql.sqlcore import canonicalize, decompose
from eagersql.sqlcore.blocks import SelectBlock, strip_limit_order

DEFAULT_PREVIEW_LIMIT = 30


def _identities(blocks: list[SelectBlock]) -> dict[str, str]:
    """Vertex identity per block name: definition hash folded with the
    identities of referenced blocks, so editing a CTE changes dependents."""
    out: dict[str, str] = {}
    for block in blocks:  # decompose() yields dependencies first
        parents = ",".join(out.get(d, d) for d in sorted(block.depends_on))
        # LIMIT/ORDER BY are stripped at materialization, so they must not
        # contribute to identity either.
        text = f"{strip_limit_order(block).definition}|{parents}"
        out[block.name] = hashlib.sha256(text.encode()).hexdigest()[:16]
    return out


def _resolve_deps(
    name: str, by_name: dict[str, SelectBlock], materializable: set[str]
) -> set[str]:
    """Block names this block depends on, skipping through blocks that have
    no vertex of their own (correlated subqueries)."""
    out: set[str] = set()
    stack = list(by_name[name].depends_on)
    while stack:
        dep = stack.pop()
        if dep in materializable:
            out.add(dep)
        elif dep in by_name:
            stack.extend(by_name[dep].depends_on)
    return out


def _cursor_block(blocks: list[SelectBlock], cursor_offset: int | None) -> SelectBlock:
    main = blocks[-1]
    if cursor_offset is None:
        return main
    best = None
    chosen = main
    for block in blocks:
        if block.span is None:
            continue
        start, end = block.span
        if start <= cursor_offset <= end:
            width = end - start
            if best is None or width <= best:
                best = width
                chosen = block
    return chosen


def build_dag(
    superset: SupersetQuery,
    cursor_offset: int | None,
    registry: TempRegistry | None = None,
    preview_limit: int = DEFAULT_PREVIEW_LIMIT,
) -> SpecDag:
    return evolve_dag(SpecDag(), superset, cursor_offset, registry, preview_limit)


def evolve_dag(
    dag: SpecDag,
    superset: SupersetQuery,
    cursor_offset: int | None,
    registry: TempRegistry | None = None,
    preview_limit: int = DEFAULT_PREVIEW_LIMIT,
) -> SpecDag:
    """Fold the latest snapshot into the DAG.

    Blocks whose canonical form (including transitive inputs) is unchanged
    keep their vertices; changed blocks add one vertex each; vanished blocks
    gray out; verbatim reappearances resurrect their gray vertex. The
    preview vertex is rebuilt every snapshot to track the cursor.
    """
    registry = registry or TempRegistry()
    blocks = [b for b in decompose(canonicalize(superset.ast)) if not b.correlated]
    by_name = {b.name: b for b in decompose(canonicalize(superset.ast))}
    identities = _identities(list(by_name.values()))
    materializable = {b.name for b in blocks}

    by_identity = {v.identity: v for v in dag.vertices.values() if v.kind == "TempTable"}
    current_ids: set[str] = set()
    vertex_of: dict[str, DagVertex] = {}

    for block in blocks:
        identity = identities[block.name]
        current_ids.add(identity)
        existing = by_identity.get(identity)
        if existing is not None:
            if existing.id in dag.gray:
                dag.active.add(existing.id)
                dag.gray.discard(existing.id)
                if existing.status == "Stale":
                    existing.set_status("Pending" if existing.temp_name is None else "Created")
            vertex_of[block.name] = existing
            continue
        vertex = DagVertex(
            id=dag.next_id("tb"),
            kind="TempTable",
            block=strip_limit_order(block),
            identity=identity,
        )
        dag.add_vertex(vertex)
        vertex_of[block.name] = vertex

    # Vanished blocks gray out; their created tables stay usable.
    for vertex in list(dag.vertices.values()):
        if vertex.kind != "TempTable":
            continue
        if vertex.identity not in current_ids and vertex.id in dag.active:
            dag.gray_out(vertex.id)

    # Dependency edges along block references.
    for block in blocks:
        for dep in _resolve_deps(block.name, by_name, materializable):
            dag.add_edge(vertex_of[dep].id, vertex_of[block.name].id, "Dependency")

    # Preview tracks the cursor inside the debugged (not over-projected) query.
    if dag.preview_id is not None:
        dag.remove_vertex(dag.preview_id)
        dag.preview_id = None
    basis = superset.basis.query
    if basis is not None:
        debugged_blocks = decompose(canonicalize(basis))
        target = _cursor_block(debugged_blocks, cursor_offset)
        limit = target.select.limit
        limit = preview_limit if limit is None else min(limit, preview_limit)
        preview_block = replace(target, select=replace(target.select, limit=limit))
        preview = DagVertex(
            id=dag.next_id("pv"),
            kind="Preview",
            block=preview_block,
            identity=identities.get(target.name, target.definition),
        )
        dag.add_vertex(preview)
        dag.preview_id = preview.id
        debugged_by_name = {b.name: b for b in debugged_blocks}
        for dep in _resolve_deps(target.name, debugged_by_name, materializable):
            if dep in vertex_of:
                dag.add_edge(vertex_of[dep].id, preview.id, "Dependency")

    # Subsumption edges from created tables that answer a block.
    temp_vertices = {
        v.temp_name: v for v in dag.vertices.values() if v.temp_name is not None
    }
    for vertex in dag.vertices.values():
        if vertex.id not in dag.active:
            continue
        if vertex.status in ("Created",):
            continue
        match = find_match(vertex.block, registry.newest_first(), identities)
        if match is not None:
            source = temp_vertices.get(match.table.temp_name)
            if source is not None and source.id != vertex.id:
                dag.add_edge(source.id, vertex.id, "Subsumption")

    dag.assert_acyclic()
    return dag
