"""Deterministic DOT, JSON and DSL renderings of graphs."""
from __future__ import annotations

import json

from .._deep import deep
from ..graph_model import Graph
from ..lambda_core import normalize, show_term, show_type
from .nodes import EdgeDecl, GraphBody, GraphDecl, VertexDecl
from .printer import print_decl


def _label(G: Graph, x) -> str:
    return f"{x} : {show_term(normalize(G.ctx, G.att(x).term))}"


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


@deep
def emit_dot(G: Graph, name: str = "G") -> str:
    if not G.elements():
        return f"digraph {name} {{}}\n"
    lines = [f"digraph {name} {{"]
    for v in sorted(G.vertices):
        lines.append(f"  {v} [label={_quote(_label(G, v))}];")
    for e in sorted(G.edges):
        lines.append(f"  {G.src(e)} -> {G.tgt(e)} [label={_quote(_label(G, e))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


@deep
def graph_to_dict(G: Graph) -> dict:
    def attr(x):
        a = G.att(x)
        return {"type": show_type(a.type), "term": show_term(normalize(G.ctx, a.term))}

    return {
        "vertices": [{"id": v, **attr(v)} for v in sorted(G.vertices)],
        "edges": [{"id": e, "src": G.src(e), "tgt": G.tgt(e), **attr(e)} for e in sorted(G.edges)],
    }


def emit_json(G: Graph) -> str:
    return json.dumps(graph_to_dict(G), indent=2) + "\n"


@deep
def graph_decl(G: Graph, name: str = "G") -> GraphDecl:
    items = []
    for v in sorted(G.vertices):
        a = G.att(v)
        items.append(VertexDecl(v, a.type, normalize(G.ctx, a.term)))
    for e in sorted(G.edges):
        a = G.att(e)
        items.append(EdgeDecl(e, G.src(e), G.tgt(e), a.type, normalize(G.ctx, a.term)))
    return GraphDecl(name, GraphBody(tuple(items)))


def emit_dsl(G: Graph, name: str = "G") -> str:
    return print_decl(graph_decl(G, name)) + "\n"


EMITTERS = {"dot": emit_dot, "json": lambda G, name="G": emit_json(G), "dsl": emit_dsl}
