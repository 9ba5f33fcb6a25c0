"""Oriented attributed multigraphs with one typed term per vertex and edge."""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple

from ._deep import deep
from .lambda_core import T, UNIT, Context, IllTyped, Term, Type, alpha_eq, typecheck


class GraphError(Exception):
    """Base class for graph construction errors."""


class DuplicateId(GraphError):
    pass


class VertexEdgeIdClash(GraphError):
    pass


class DanglingIncidence(GraphError):
    pass


class IllTypedAttribute(GraphError):
    def __init__(self, element, cause):
        self.element = element
        self.cause = cause
        super().__init__(f"attribute of element {element}: {cause}")


class UnknownElement(GraphError, KeyError):
    def __init__(self, element):
        self.element = element
        super().__init__(f"no vertex or edge with id {element}")

    def __str__(self):
        return self.args[0]


class Attribute(NamedTuple):
    term: Term
    type: Type


class Incidence(NamedTuple):
    src: int
    tgt: int


TRIVIAL = Attribute(UNIT, T)


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable attributed graph; build it with :func:`build_graph`.

    Identifiers are naturals, vertices and edges are disjoint, and elements
    are ordered numerically across both sets.
    """

    vertices: Mapping[int, Attribute]
    edges: Mapping[int, Attribute]
    incidence: Mapping[int, Incidence]
    ctx: Context = field(default_factory=Context)

    def elements(self) -> list:
        return sorted([*self.vertices, *self.edges])

    def __contains__(self, element) -> bool:
        return element in self.vertices or element in self.edges

    def __len__(self):
        return len(self.vertices) + len(self.edges)

    def is_vertex(self, element) -> bool:
        return element in self.vertices

    def is_edge(self, element) -> bool:
        return element in self.edges

    def att(self, element) -> Attribute:
        try:
            return self.vertices[element]
        except KeyError:
            pass
        try:
            return self.edges[element]
        except KeyError:
            raise UnknownElement(element) from None

    def src(self, edge) -> int:
        return self.incidence[edge].src

    def tgt(self, edge) -> int:
        return self.incidence[edge].tgt

    def max_id(self) -> int:
        return max(self.elements(), default=0)

    def vertex_list(self) -> list:
        return [(v, *self.vertices[v]) for v in sorted(self.vertices)]

    def edge_list(self) -> list:
        return [(e, *self.incidence[e], *self.edges[e]) for e in sorted(self.edges)]

    def __repr__(self):
        vs = ", ".join(f"{v}:{a.term}" for v, a in sorted(self.vertices.items()))
        es = ", ".join(
            f"{e}:{self.incidence[e].src}->{self.incidence[e].tgt}" for e in sorted(self.edges)
        )
        return f"Graph(V=[{vs}], E=[{es}])"


@deep
def build_graph(
    vertices: Iterable = (),
    edges: Iterable = (),
    ctx: Context = None,
    *,
    check_types: bool = True,
) -> Graph:
    """Validate element lists and build a graph.

    ``vertices`` holds ``(id, term, type)`` triples and ``edges`` holds
    ``(id, src, tgt, term, type)``; a missing attribute (``(id,)`` or
    ``(id, src, tgt)``) stands for the trivial ``unit : T``.
    """
    ctx = ctx if ctx is not None else Context()
    vmap, emap, inc = {}, {}, {}
    for entry in vertices:
        vid, *rest = entry
        vid = _ident(vid)
        if vid in vmap:
            raise DuplicateId(f"vertex id {vid} declared twice")
        vmap[vid] = Attribute(*rest) if rest else TRIVIAL
    for entry in edges:
        eid, src, tgt, *rest = entry
        eid = _ident(eid)
        if eid in emap:
            raise DuplicateId(f"edge id {eid} declared twice")
        if eid in vmap:
            raise VertexEdgeIdClash(f"id {eid} is both a vertex and an edge")
        emap[eid] = Attribute(*rest) if rest else TRIVIAL
        inc[eid] = Incidence(_ident(src), _ident(tgt))
    for eid, (src, tgt) in inc.items():
        for end in (src, tgt):
            if end not in vmap:
                raise DanglingIncidence(f"edge {eid} refers to missing vertex {end}")
    if check_types:
        for element, attr in [*vmap.items(), *emap.items()]:
            try:
                got = typecheck(ctx, attr.term)
            except IllTyped as exc:
                raise IllTypedAttribute(element, exc) from exc
            if got != attr.type:
                raise IllTypedAttribute(element, f"declared {attr.type}, typechecks at {got}")
    return Graph(
        MappingProxyType(vmap),
        MappingProxyType(emap),
        MappingProxyType(inc),
        ctx,
    )


def _ident(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or x < 0:
        raise GraphError(f"identifiers are natural numbers, got {x!r}")
    return x


EMPTY_GRAPH = build_graph()


def elements_ordered(g: Graph) -> list:
    """All vertex and edge ids in ascending identifier order."""
    return g.elements()


def attribute(g: Graph, element) -> Attribute:
    return g.att(element)


def rebuild(g: Graph, *, ctx: Context = None) -> Graph:
    return build_graph(g.vertex_list(), g.edge_list(), ctx if ctx is not None else g.ctx)


@deep
def graph_equal(g: Graph, h: Graph) -> bool:
    """Same ids, incidence, declared types and alpha-equal attribute terms."""
    if g is h:
        return True
    if set(g.vertices) != set(h.vertices) or set(g.edges) != set(h.edges):
        return False
    if dict(g.incidence) != dict(h.incidence):
        return False
    for x in g.elements():
        a, b = g.att(x), h.att(x)
        if a.type != b.type or not alpha_eq(a.term, b.term):
            return False
    return True
