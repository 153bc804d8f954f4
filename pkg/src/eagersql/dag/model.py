"""DAG data model: vertices, edges, active/gray bookkeeping, exports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from eagersql.sqlcore.blocks import SelectBlock

STATUSES = ("Pending", "Running", "Created", "Failed", "TimedOut", "Stale", "Evicted")

TERMINAL_STATUSES = {"Created", "Failed", "TimedOut", "Stale", "Evicted"}


@dataclass
class DagVertex:
    id: str
    kind: str  # "TempTable" | "Preview"
    block: SelectBlock
    identity: str  # definition hash including transitive parent definitions
    status: str = "Pending"
    temp_name: str | None = None
    created_at: float = 0.0
    last_used_at: float = 0.0
    size_bytes: int = 0

    def set_status(self, status: str) -> None:
        if status not in STATUSES:
            raise ValueError(f"unknown status {status}")
        self.status = status


@dataclass(frozen=True)
class DagEdge:
    src: str
    dst: str
    kind: str  # "Dependency" | "Subsumption"


@dataclass
class SpecDag:
    vertices: dict[str, DagVertex] = field(default_factory=dict)
    edges: list[DagEdge] = field(default_factory=list)
    active: set[str] = field(default_factory=set)
    gray: set[str] = field(default_factory=set)
    preview_id: str | None = None
    counter: int = 0

    def next_id(self, prefix: str) -> str:
        self.counter += 1
        return f"{prefix}_{self.counter}"

    def add_vertex(self, vertex: DagVertex) -> DagVertex:
        self.vertices[vertex.id] = vertex
        self.active.add(vertex.id)
        self.gray.discard(vertex.id)
        return vertex

    def add_edge(self, src: str, dst: str, kind: str) -> None:
        edge = DagEdge(src, dst, kind)
        if edge not in self.edges and src != dst:
            self.edges.append(edge)

    def remove_vertex(self, vertex_id: str) -> None:
        self.vertices.pop(vertex_id, None)
        self.active.discard(vertex_id)
        self.gray.discard(vertex_id)
        self.edges = [e for e in self.edges if vertex_id not in (e.src, e.dst)]

    def gray_out(self, vertex_id: str) -> None:
        self.active.discard(vertex_id)
        self.gray.add(vertex_id)
        vertex = self.vertices.get(vertex_id)
        if vertex is not None and vertex.status in ("Pending", "Running"):
            vertex.set_status("Stale")

    @property
    def preview(self) -> DagVertex | None:
        return self.vertices.get(self.preview_id) if self.preview_id else None

    def parents(self, vertex_id: str) -> list[str]:
        return [e.src for e in self.edges if e.dst == vertex_id]

    def ancestors(self, vertex_id: str) -> set[str]:
        out: set[str] = set()
        stack = [vertex_id]
        while stack:
            for parent in self.parents(stack.pop()):
                if parent not in out:
                    out.add(parent)
                    stack.append(parent)
        return out

    def is_acyclic(self) -> bool:
        state: dict[str, int] = {}

        def visit(node: str) -> bool:
            state[node] = 1
            for edge in self.edges:
                if edge.src != node or edge.dst not in self.vertices:
                    continue
                mark = state.get(edge.dst, 0)
                if mark == 1:
                    return False
                if mark == 0 and not visit(edge.dst):
                    return False
            state[node] = 2
            return True

        return all(state.get(v, 0) == 2 or visit(v) for v in self.vertices)

    def assert_acyclic(self) -> None:
        if not self.is_acyclic():
            raise ValueError("speculation graph contains a cycle")

    def to_json(self) -> dict:
        return {
            "vertices": [
                {
                    "id": v.id,
                    "kind": v.kind,
                    "status": v.status,
                    "tempName": v.temp_name,
                    "sizeBytes": v.size_bytes,
                    "gray": v.id in self.gray,
                }
                for v in self.vertices.values()
            ],
            "edges": [{"from": e.src, "to": e.dst, "kind": e.kind} for e in self.edges],
            "previewId": self.preview_id,
        }

    def to_text(self) -> str:
        return "\n".join(f"{e.src} -> {e.dst} [{e.kind}]" for e in self.edges)

    def to_dot(self, name: str = "dag") -> str:
        lines = [f"digraph {name} {{"]
        for v in self.vertices.values():
            shape = "box" if v.kind == "TempTable" else "ellipse"
            color = "gray" if v.id in self.gray else "black"
            lines.append(
                f'  {v.id} [shape={shape}, color={color}, label="{v.id}\\n{v.status}"];'
            )
        for e in self.edges:
            style = "solid" if e.kind == "Dependency" else "dashed"
            lines.append(f"  {e.src} -> {e.dst} [style={style}];")
        lines.append("}")
        return "\n".join(lines)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)
