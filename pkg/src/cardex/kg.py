"""Knowledge graph of models, licences and applications with DFS queries."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import InvariantViolation, KindConflict, UnknownNode
from .extractor import UNKNOWN, Provenance, Triple
from .gazetteer import MODEL, Gazetteers

NODE_KINDS = ("model", "licence", "application", UNKNOWN)
DIRECTIONS = ("out", "undirected")

EdgeKey = tuple[str, str, str]


@dataclass
class KnowledgeGraph:
    nodes: dict[str, str] = field(default_factory=dict)
    edges: dict[EdgeKey, list[Provenance]] = field(default_factory=dict)

    def add_node(self, node_id: str, kind: str) -> None:
        if kind not in NODE_KINDS:
            raise InvariantViolation(f"unknown node kind {kind!r}")
        have = self.nodes.get(node_id)
        if have is not None and have != kind:
            raise KindConflict(node_id, have, kind)
        self.nodes[node_id] = kind

    def add_edge(self, source: str, target: str, label: str,
                 provenance: Iterable[Provenance] = ()) -> None:
        for end in (source, target):
            if end not in self.nodes:
                raise InvariantViolation(f"edge endpoint {end!r} is not a node")
        if self.nodes[target] == MODEL:
            raise InvariantViolation(f"model node {target!r} cannot be an edge target")
        prov = self.edges.setdefault((source, target, label), [])
        prov.extend(provenance)
        prov.sort()

    def validate(self) -> None:
        for node_id, kind in self.nodes.items():
            if not node_id:
                raise InvariantViolation("empty node id")
            if kind not in NODE_KINDS:
                raise InvariantViolation(f"unknown node kind {kind!r}")
        for source, target, _ in self.edges:
            for end in (source, target):
                if end not in self.nodes:
                    raise InvariantViolation(f"edge endpoint {end!r} is not a node")
            if self.nodes[target] == MODEL:
                raise InvariantViolation(f"model node {target!r} cannot be an edge target")

    def successors(self, node_id: str) -> list[str]:
        return sorted({t for s, t, _ in self.edges if s == node_id})

    def neighbors(self, node_id: str, direction: str = "out") -> list[str]:
        if direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}")
        return sorted(self._adjacency(direction).get(node_id, {}))

    def _adjacency(self, direction: str) -> dict[str, dict[str, EdgeKey]]:
        # neighbour -> lexicographically smallest edge connecting the pair
        adj: dict[str, dict[str, EdgeKey]] = {n: {} for n in self.nodes}
        for key in sorted(self.edges):
            source, target, _ = key
            adj[source].setdefault(target, key)
            if direction == "undirected":
                adj[target].setdefault(source, key)
        return adj

    def in_degree(self, node_id: str) -> int:
        return sum(1 for _, t, _ in self.edges if t == node_id)

    def nodes_of_kind(self, kind: str) -> list[str]:
        return sorted(n for n, k in self.nodes.items() if k == kind)


def _canonical_object(obj: str, gazetteers: Gazetteers | None) -> str:
    if gazetteers is None:
        return obj
    for gaz in gazetteers.object_gazetteers():
        canonical = gaz.lookup(obj)
        if canonical is not None:
            return canonical
    return obj


def build_graph(triples: Iterable[Triple], include_unknown: bool = False,
                gazetteers: Gazetteers | None = None) -> KnowledgeGraph:
    """One node per subject/object id, one edge per distinct (subject, object, relation).

    With ``gazetteers`` an object phrase that is wholly a known alias is
    replaced by its canonical name, so surface variants share a node.
    """
    g = KnowledgeGraph()
    for t in triples:
        if t.category == UNKNOWN and not include_unknown:
            continue
        obj = _canonical_object(t.object, gazetteers)
        g.add_node(t.subject, MODEL)
        g.add_node(obj, t.category)
        g.add_edge(t.subject, obj, t.relation, [t.provenance])
    return g


@dataclass
class Traversal:
    start: str
    max_depth: int
    visited: list[tuple[str, int]] = field(default_factory=list)
    edges_taken: list[EdgeKey] = field(default_factory=list)

    @property
    def node_ids(self) -> list[str]:
        return [n for n, _ in self.visited]


def _require(g: KnowledgeGraph, *node_ids: str) -> None:
    for node_id in node_ids:
        if node_id not in g.nodes:
            raise UnknownNode(node_id)


def dfs_query(g: KnowledgeGraph, start: str, max_depth: int,
              direction: str = "out") -> Traversal:
    """Depth-first preorder from ``start`` with children in lexicographic order.

    Each node is listed once, at first discovery. A node later reached by a
    shorter route is expanded again so the depth cap never hides something
    that is reachable within ``max_depth``; its recorded depth and tree edge
    are updated to the shorter route.
    """
    _require(g, start)
    if direction not in DIRECTIONS:
        raise ValueError(f"direction must be one of {DIRECTIONS}")
    adj = g._adjacency(direction)
    order: list[str] = []
    depth: dict[str, int] = {}
    via: dict[str, EdgeKey] = {}

    def visit(node: str, d: int, edge: EdgeKey | None) -> None:
        if node not in depth:
            order.append(node)
        elif d >= depth[node]:
            return
        depth[node] = d
        if edge is not None:
            via[node] = edge
        if d == max_depth:
            return
        for nxt in sorted(adj[node]):
            visit(nxt, d + 1, adj[node][nxt])

    if max_depth >= 0:
        visit(start, 0, None)
    return Traversal(start, max_depth, [(n, depth[n]) for n in order],
                     [via[n] for n in order if n in via])


def find_paths(g: KnowledgeGraph, source: str, target: str, max_depth: int,
               direction: str = "out") -> list[list[str]]:
    """All simple paths of at most ``max_depth`` edges, in lexicographic order."""
    _require(g, source, target)
    adj = g._adjacency(direction)
    paths: list[list[str]] = []
    path = [source]
    on_path = {source}

    def walk(node: str) -> None:
        if node == target:
            paths.append(list(path))
            return
        if len(path) - 1 == max_depth:
            return
        for nxt in sorted(adj[node]):
            if nxt in on_path:
                continue
            path.append(nxt)
            on_path.add(nxt)
            walk(nxt)
            path.pop()
            on_path.discard(nxt)

    if max_depth >= 0:
        walk(source)
    return sorted(paths)
