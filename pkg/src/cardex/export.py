"""DOT, GraphML and canonical JSON serialisation of a KnowledgeGraph."""

from __future__ import annotations

import json
from xml.sax.saxutils import escape, quoteattr

from .errors import FormatError, InvariantViolation
from .extractor import Provenance
from .gazetteer import MODEL
from .kg import NODE_KINDS, KnowledgeGraph

MODEL_COLOR = "blue"
RELATION_COLOR = "green"
ENTITY_COLOR = "red"


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def export_dot(g: KnowledgeGraph) -> str:
    lines = ["digraph {"]
    for node_id in sorted(g.nodes):
        kind = g.nodes[node_id]
        color = MODEL_COLOR if kind == MODEL else ENTITY_COLOR
        lines.append(f"  {_dot_quote(node_id)} [kind={_dot_quote(kind)}, color={color}];")
    for source, target, label in sorted(g.edges):
        lines.append(f"  {_dot_quote(source)} -> {_dot_quote(target)} "
                     f"[label={_dot_quote(label)}, color={RELATION_COLOR}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_graphml(g: KnowledgeGraph) -> str:
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<graphml xmlns="http://graphml.graphdrawing.org/xmlns">',
        '  <key id="kind" for="node" attr.name="kind" attr.type="string"/>',
        '  <key id="label" for="edge" attr.name="label" attr.type="string"/>',
        '  <graph id="G" edgedefault="directed">',
    ]
    for node_id in sorted(g.nodes):
        out.append(f'    <node id={quoteattr(node_id)}>'
                   f'<data key="kind">{escape(g.nodes[node_id])}</data></node>')
    for i, (source, target, label) in enumerate(sorted(g.edges)):
        out.append(f'    <edge id="e{i}" source={quoteattr(source)} target={quoteattr(target)}>'
                   f'<data key="label">{escape(label)}</data></edge>')
    out += ["  </graph>", "</graphml>"]
    return "\n".join(out) + "\n"


def export_json(g: KnowledgeGraph) -> str:
    doc = {
        "nodes": [{"id": n, "kind": g.nodes[n]} for n in sorted(g.nodes)],
        "edges": [
            {"from": s, "to": t, "label": label,
             "provenance": [p.to_dict() for p in sorted(g.edges[(s, t, label)])]}
            for s, t, label in sorted(g.edges)
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False, sort_keys=True) + "\n"


def _expect(cond: bool, message: str) -> None:
    if not cond:
        raise FormatError(message)


def import_json(text: str) -> KnowledgeGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    _expect(isinstance(doc, dict), "top level must be an object")
    _expect(isinstance(doc.get("nodes"), list) and isinstance(doc.get("edges"), list),
            "graph needs 'nodes' and 'edges' arrays")

    g = KnowledgeGraph()
    for node in doc["nodes"]:
        _expect(isinstance(node, dict) and isinstance(node.get("id"), str)
                and isinstance(node.get("kind"), str), f"bad node record {node!r}")
        if node["id"] in g.nodes:
            raise InvariantViolation(f"duplicate node {node['id']!r}")
        if node["kind"] not in NODE_KINDS:
            raise InvariantViolation(f"unknown node kind {node['kind']!r}")
        g.nodes[node["id"]] = node["kind"]

    for edge in doc["edges"]:
        _expect(isinstance(edge, dict) and all(isinstance(edge.get(k), str)
                                               for k in ("from", "to", "label")),
                f"bad edge record {edge!r}")
        prov_raw = edge.get("provenance", [])
        _expect(isinstance(prov_raw, list), "edge provenance must be an array")
        try:
            prov = [Provenance(p["doc_id"], int(p["sentence_index"]), p["sentence_text"])
                    for p in prov_raw]
        except (KeyError, TypeError, ValueError):
            raise FormatError(f"bad provenance on edge {edge['from']!r} -> {edge['to']!r}") from None
        key = (edge["from"], edge["to"], edge["label"])
        if key in g.edges:
            raise InvariantViolation(f"duplicate edge {key!r}")
        g.add_edge(*key, prov)
    g.validate()
    return g


EXPORTERS = {"dot": export_dot, "graphml": export_graphml, "json": export_json}
