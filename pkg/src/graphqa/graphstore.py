"""Embedded property graph store.

Nodes are identified by (case-folded label, NE type). Pattern matching is
backtracking with most-constrained-variable-first ordering; results come
out in a deterministic order. Persistence is a line-oriented text format
with a trailing checksum line.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field

from .docgraph import GraphDelta

RELATION_CLASSES = ("AVerb", "PVerb", "Copula", "HasA", "SubAction", "Concept")


class UnknownNodeError(KeyError):
    """An edge endpoint references a node id not in the store."""


class CorruptFileError(ValueError):
    """Persisted store failed its checksum or line-format validation."""


@dataclass
class Node:
    id: int
    label: str
    ne_type: str | None = None
    attributes: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Edge:
    id: int
    src: int
    dst: int
    relation: str
    relation_class: str = "Concept"
    doc_id: int = 0
    sentence_index: int = 0


@dataclass(frozen=True)
class RelationMatcher:
    """Edge relation predicate: exact word, synonym set, or anything."""

    kind: str                      # "exact" | "synonyms" | "any"
    words: frozenset[str] = frozenset()

    def matches(self, relation: str) -> bool:
        if self.kind == "any":
            return True
        norm = relation.casefold()
        if self.kind == "exact":
            return norm in self.words
        return norm in self.words

    @classmethod
    def exact(cls, word: str) -> "RelationMatcher":
        return cls("exact", frozenset({word.casefold()}))

    @classmethod
    def synonyms(cls, words) -> "RelationMatcher":
        return cls("synonyms", frozenset(w.casefold() for w in words))

    @classmethod
    def any(cls) -> "RelationMatcher":
        return cls("any")


@dataclass(frozen=True)
class NodeConstraint:
    var: str
    label: str | None = None               # case-folded equality
    ne_types: frozenset[str] | None = None  # None = unconstrained


@dataclass(frozen=True)
class EdgeConstraint:
    src: str
    relation: RelationMatcher
    dst: str
    direction: str = "out"                 # "out" | "any"


@dataclass(frozen=True)
class Pattern:
    nodes: tuple[NodeConstraint, ...]
    edges: tuple[EdgeConstraint, ...] = ()

    def __post_init__(self):
        declared = {n.var for n in self.nodes}
        for e in self.edges:
            if e.src not in declared or e.dst not in declared:
                raise ValueError(f"edge references undeclared var: {e}")


@dataclass
class Binding:
    assignment: dict[str, int]
    matched_edges: tuple[int, ...] = ()


class GraphStore:
    """In-memory property graph with atomic delta application.

    A single mutex serializes writers; matching also runs under it so a
    reader never observes a partially applied delta.
    """

    def __init__(self):
        self._lock = threading.RLock()
        self.nodes: dict[int, Node] = {}
        self.edges: dict[int, Edge] = {}
        self._node_key: dict[tuple[str, str | None], int] = {}
        self._edge_key: dict[tuple, int] = {}
        self._out: dict[int, list[int]] = {}
        self._in: dict[int, list[int]] = {}
        self._next_node = 0
        self._next_edge = 0

    # ------------------------------------------------------------ write

    def upsert_node(self, label: str, ne_type: str | None = None,
                    attributes: dict | None = None) -> int:
        if not label:
            raise ValueError("node label must be non-empty")
        with self._lock:
            key = (label.casefold(), ne_type)
            node_id = self._node_key.get(key)
            if node_id is None:
                node_id = self._next_node
                self._next_node += 1
                self.nodes[node_id] = Node(node_id, label, ne_type,
                                           dict(attributes or {}))
                self._node_key[key] = node_id
                self._out[node_id] = []
                self._in[node_id] = []
            elif attributes:
                self.nodes[node_id].attributes.update(attributes)
            return node_id

    def add_edge(self, src: int, dst: int, relation: str,
                 relation_class: str = "Concept",
                 doc_id: int = 0, sentence_index: int = 0) -> int:
        with self._lock:
            if src not in self.nodes:
                raise UnknownNodeError(src)
            if dst not in self.nodes:
                raise UnknownNodeError(dst)
            key = (src, dst, relation, doc_id, sentence_index)
            edge_id = self._edge_key.get(key)
            if edge_id is not None:
                return edge_id
            edge_id = self._next_edge
            self._next_edge += 1
            self.edges[edge_id] = Edge(edge_id, src, dst, relation,
                                       relation_class, doc_id, sentence_index)
            self._edge_key[key] = edge_id
            self._out[src].append(edge_id)
            self._in[dst].append(edge_id)
            return edge_id

    def apply_delta(self, delta: GraphDelta) -> tuple[int, int]:
        """Apply one document's delta atomically; returns the number of
        nodes and edges that are new to the store. A delta that fails
        validation leaves the store untouched."""
        with self._lock:
            fresh = {(n.label.casefold(), n.ne_type) for n in delta.nodes}
            for n in delta.nodes:
                if not n.label:
                    raise ValueError("delta node with empty label")
                _reject_tabs(n.label)
            for e in delta.edges:
                _reject_tabs(e.relation)
                for label, ne in ((e.src_label, e.src_ne), (e.dst_label, e.dst_ne)):
                    key = (label.casefold(), ne)
                    if key not in fresh and key not in self._node_key:
                        raise UnknownNodeError(label)
            nodes_before, edges_before = len(self.nodes), len(self.edges)
            handle: dict[tuple[str, str | None], int] = {}
            for n in delta.nodes:
                handle[(n.label.casefold(), n.ne_type)] = self.upsert_node(
                    n.label, n.ne_type, n.attributes)
            for e in delta.edges:
                src = handle.get((e.src_label.casefold(), e.src_ne))
                if src is None:
                    src = self._node_key[(e.src_label.casefold(), e.src_ne)]
                dst = handle.get((e.dst_label.casefold(), e.dst_ne))
                if dst is None:
                    dst = self._node_key[(e.dst_label.casefold(), e.dst_ne)]
                self.add_edge(src, dst, e.relation, e.relation_class,
                              e.doc_id, e.sentence_index)
            return len(self.nodes) - nodes_before, len(self.edges) - edges_before

    # ------------------------------------------------------------- read

    def find_node(self, label: str, ne_type: str | None = None) -> int | None:
        return self._node_key.get((label.casefold(), ne_type))

    def nodes_by_label(self, label: str) -> list[int]:
        low = label.casefold()
        return sorted(
            nid for (lbl, _ne), nid in self._node_key.items() if lbl == low)

    def incident_edges(self, node_id: int) -> list[int]:
        return sorted(set(self._out.get(node_id, [])) | set(self._in.get(node_id, [])))

    def match(self, pattern: Pattern) -> list[Binding]:
        """All injective assignments satisfying every constraint, sorted
        by the assigned node ids in variable-name order."""
        with self._lock:
            var_names = [n.var for n in pattern.nodes]
            candidates = {
                n.var: self._node_candidates(n) for n in pattern.nodes}
            if any(not c for c in candidates.values()):
                return []
            order = sorted(var_names, key=lambda v: (len(candidates[v]), v))
            adjacent: dict[str, list[EdgeConstraint]] = {v: [] for v in var_names}
            for e in pattern.edges:
                adjacent[e.src].append(e)
                adjacent[e.dst].append(e)
            assignment: dict[str, int] = {}
            results: list[dict[str, int]] = []

            def edges_satisfied(ec: EdgeConstraint) -> bool:
                src, dst = assignment.get(ec.src), assignment.get(ec.dst)
                if src is None or dst is None:
                    return True  # not yet decidable
                return bool(self._satisfying_edges(ec, src, dst))

            def backtrack(k: int):
                if k == len(order):
                    results.append(dict(assignment))
                    return
                var = order[k]
                used = set(assignment.values())
                for nid in candidates[var]:
                    if nid in used:
                        continue
                    assignment[var] = nid
                    if all(edges_satisfied(ec) for ec in adjacent[var]):
                        backtrack(k + 1)
                    del assignment[var]

            backtrack(0)
            results.sort(key=lambda a: tuple(a[v] for v in sorted(var_names)))
            bindings = []
            for a in results:
                matched: set[int] = set()
                for ec in pattern.edges:
                    matched.update(
                        e.id for e in self._satisfying_edges(ec, a[ec.src], a[ec.dst]))
                bindings.append(Binding(assignment=a,
                                        matched_edges=tuple(sorted(matched))))
            return bindings

    def _node_candidates(self, c: NodeConstraint) -> list[int]:
        out = []
        for nid in sorted(self.nodes):
            node = self.nodes[nid]
            if c.label is not None and node.label.casefold() != c.label.casefold():
                continue
            if c.ne_types is not None and (
                node.ne_type is None or node.ne_type not in c.ne_types
            ):
                continue
            out.append(nid)
        return out

    def _satisfying_edges(self, ec: EdgeConstraint, src: int, dst: int) -> list[Edge]:
        found = []
        for eid in self._out.get(src, []):
            e = self.edges[eid]
            if e.dst == dst and ec.relation.matches(e.relation):
                found.append(e)
        if ec.direction == "any":
            for eid in self._out.get(dst, []):
                e = self.edges[eid]
                if e.dst == src and ec.relation.matches(e.relation):
                    found.append(e)
        return found

    # ------------------------------------------------------ persistence

    def save(self, path) -> None:
        with self._lock:
            lines = []
            for nid in sorted(self.nodes):
                n = self.nodes[nid]
                _reject_tabs(n.label)
                lines.append("N\t%d\t%s\t%s\t%s" % (
                    n.id, n.label, n.ne_type or "NONE",
                    json.dumps(n.attributes, sort_keys=True)))
            for eid in sorted(self.edges):
                e = self.edges[eid]
                lines.append("E\t%d\t%d\t%d\t%s\t%s\t%d\t%d" % (
                    e.id, e.src, e.dst, e.relation, e.relation_class,
                    e.doc_id, e.sentence_index))
            body = "".join(line + "\n" for line in lines)
            digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(body)
                fh.write(f"C\t{digest}\n")

    @classmethod
    def load(cls, path) -> "GraphStore":
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        if not lines or not lines[-1].startswith("C\t"):
            raise CorruptFileError(f"{path}: missing checksum line")
        body = "".join(line + "\n" for line in lines[:-1])
        digest = hashlib.sha256(body.encode("utf-8")).hexdigest()
        if lines[-1] != f"C\t{digest}":
            raise CorruptFileError(f"{path}: checksum mismatch")
        store = cls()
        for line_no, line in enumerate(lines[:-1], 1):
            parts = line.split("\t")
            try:
                if parts[0] == "N":
                    _, nid, label, ne, attrs = parts
                    node = Node(int(nid), label,
                                None if ne == "NONE" else ne,
                                json.loads(attrs))
                    store.nodes[node.id] = node
                    store._node_key[(label.casefold(), node.ne_type)] = node.id
                    store._out[node.id] = []
                    store._in[node.id] = []
                elif parts[0] == "E":
                    _, eid, src, dst, rel, rclass, doc, sent = parts
                    edge = Edge(int(eid), int(src), int(dst), rel, rclass,
                                int(doc), int(sent))
                    if edge.src not in store.nodes or edge.dst not in store.nodes:
                        raise CorruptFileError(
                            f"{path}:{line_no}: edge references unknown node")
                    store.edges[edge.id] = edge
                    store._edge_key[(edge.src, edge.dst, edge.relation,
                                     edge.doc_id, edge.sentence_index)] = edge.id
                    store._out[edge.src].append(edge.id)
                    store._in[edge.dst].append(edge.id)
                else:
                    raise CorruptFileError(
                        f"{path}:{line_no}: unknown record {parts[0]!r}")
            except (ValueError, KeyError) as exc:
                if isinstance(exc, CorruptFileError):
                    raise
                raise CorruptFileError(f"{path}:{line_no}: {exc}") from exc
        store._next_node = max(store.nodes, default=-1) + 1
        store._next_edge = max(store.edges, default=-1) + 1
        return store

    # ----------------------------------------------------------- export

    def export_view(self, node_filter=None, highlight=frozenset(),
                    limit: int | None = None) -> dict:
        """Serializable graph document; per-edge and per-incident-node
        highlight flags. `node_filter` is a set of ids, a predicate over
        Node, or None for everything."""
        with self._lock:
            highlight = set(highlight)
            if node_filter is None:
                keep = set(self.nodes)
            elif callable(node_filter):
                keep = {nid for nid, n in self.nodes.items() if node_filter(n)}
            else:
                keep = {nid for nid in node_filter if nid in self.nodes}
            if limit is not None:
                keep = set(sorted(keep)[:max(limit, 0)])
            edges = [
                e for e in self.edges.values()
                if e.src in keep and e.dst in keep
            ]
            lit_nodes = set()
            for e in edges:
                if e.id in highlight:
                    lit_nodes.update((e.src, e.dst))
            return {
                "nodes": [
                    {
                        "id": nid,
                        "label": self.nodes[nid].label,
                        "ne_type": self.nodes[nid].ne_type or "NONE",
                        "highlight": nid in lit_nodes,
                    }
                    for nid in sorted(keep)
                ],
                "edges": [
                    {
                        "id": e.id,
                        "from": e.src,
                        "to": e.dst,
                        "relation": e.relation,
                        "relation_class": e.relation_class,
                        "doc": e.doc_id,
                        "sent": e.sentence_index,
                        "highlight": e.id in highlight,
                    }
                    for e in sorted(edges, key=lambda e: e.id)
                ],
            }


def _reject_tabs(text: str) -> None:
    if "\t" in text or "\n" in text:
        raise ValueError(f"label may not contain tabs/newlines: {text!r}")
