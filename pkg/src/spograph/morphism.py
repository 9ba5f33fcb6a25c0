"""Three-level attributed graph morphisms.

A morphism carries a partial structural homomorphism, an attribute
dependency relation between source and target elements, and one
computation function per target element.  Computation functions take the
attributes of their antecedents in ascending element order.
"""
from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple, Optional

from ._deep import deep
from .graph_model import Graph, graph_equal
from .lambda_core import (
    App,
    IllTyped,
    Lam,
    Term,
    Var,
    app,
    arrow,
    fresh_name,
    free_vars,
    term_equal,
    typecheck,
)


class MorphismError(Exception):
    pass


class SourceTargetMismatch(MorphismError):
    pass


class IncomparableMorphisms(MorphismError):
    pass


class NotTotalInjective(MorphismError):
    pass


STRUCTURAL = "structural"
ADR_TYPING = "adr-typing"
VALUE = "value-compatibility"


class Diagnostic(NamedTuple):
    level: str
    element: Optional[int]
    message: str

    def __str__(self):
        where = "" if self.element is None else f" at {self.element}"
        return f"[{self.level}{where}] {self.message}"


@dataclass(frozen=True, eq=False)
class Morphism:
    source: Graph
    target: Graph
    str_map: Mapping[int, int]
    adr: frozenset
    cmp: Mapping[int, Term]

    def __post_init__(self):
        object.__setattr__(self, "str_map", MappingProxyType(dict(self.str_map)))
        object.__setattr__(self, "adr", frozenset((int(a), int(b)) for a, b in self.adr))
        object.__setattr__(self, "cmp", MappingProxyType(dict(self.cmp)))
        pre = {}
        for u, v in self.adr:
            pre.setdefault(v, []).append(u)
        object.__setattr__(
            self, "_pre", {v: tuple(sorted(us)) for v, us in pre.items()}
        )

    def preimage(self, v) -> tuple:
        """Antecedents ``[v]`` of a target element, in element order."""
        return self._pre.get(v, ())

    @property
    def ctx(self):
        return self.source.ctx.merge(self.target.ctx)

    def is_total(self) -> bool:
        return set(self.str_map) == set(self.source.elements())

    def applied(self, v) -> Term:
        """``cmp(v)`` applied to the attributes of ``[v]``."""
        return app(self.cmp[v], *(self.source.att(u).term for u in self.preimage(v)))

    def __repr__(self):
        smap = ", ".join(f"{a}->{b}" for a, b in sorted(self.str_map.items()))
        return f"Morphism(str={{{smap}}}, adr={sorted(self.adr)})"


def make_morphism(source: Graph, target: Graph, str_map, adr=None, cmp=None) -> Morphism:
    """Morphism with defaults: ``adr`` is the graph of ``str_map``; a missing
    computation function is the identity when the antecedent is a single
    element of the same type, and a constant ignoring its arguments otherwise."""
    str_map = dict(str_map)
    adr = frozenset(str_map.items()) if adr is None else frozenset(adr)
    cmp = dict(cmp or {})
    pre = {}
    for u, v in adr:
        pre.setdefault(v, []).append(u)
    for v in target.elements():
        if v in cmp:
            continue
        us = sorted(pre.get(v, ()))
        tattr = target.att(v)
        if len(us) == 1 and source.att(us[0]).type == tattr.type:
            cmp[v] = Lam("x", tattr.type, Var("x"))
        else:
            cmp[v] = constant_function([source.att(u).type for u in us], tattr.term, target.ctx)
    return Morphism(source, target, str_map, adr, cmp)


def constant_function(arg_types, value: Term, ctx=None) -> Term:
    """``\\x1 ... xk. value`` with fresh, unused binders."""
    avoid = set(free_vars(value)) | (set(ctx.names()) if ctx is not None else set())
    names = []
    for _ in arg_types:
        x = fresh_name("x", avoid)
        avoid.add(x)
        names.append(x)
    body = value
    for x, ty in reversed(list(zip(names, arg_types))):
        body = Lam(x, ty, body)
    return body


@deep
def validate_morphism(f: Morphism) -> list:
    """Diagnostics for every violated morphism condition; empty when valid."""
    G, H = f.source, f.target
    out = []
    for x, y in sorted(f.str_map.items()):
        if x not in G:
            out.append(Diagnostic(STRUCTURAL, x, "str maps an element outside the source"))
            continue
        if y not in H:
            out.append(Diagnostic(STRUCTURAL, x, f"str image {y} is not in the target"))
            continue
        if G.is_vertex(x) != H.is_vertex(y):
            out.append(Diagnostic(STRUCTURAL, x, f"str sends a vertex/edge to the other kind ({y})"))
            continue
        if G.is_edge(x):
            for end, himg in ((G.src(x), H.src(y)), (G.tgt(x), H.tgt(y))):
                if end not in f.str_map:
                    out.append(Diagnostic(STRUCTURAL, x, f"edge mapped but its endpoint {end} is not"))
                elif f.str_map[end] != himg:
                    out.append(Diagnostic(STRUCTURAL, x, f"incidence not preserved at endpoint {end}"))
    for u, v in sorted(f.adr):
        if u not in G or v not in H:
            out.append(Diagnostic(ADR_TYPING, v, f"adr pair ({u}, {v}) leaves the graphs"))
    if any(d.level == ADR_TYPING for d in out):
        return out
    try:
        ctx = f.ctx
    except IllTyped as exc:
        return out + [Diagnostic(ADR_TYPING, None, f"incompatible contexts: {exc}")]
    for v in H.elements():
        if v not in f.cmp:
            out.append(Diagnostic(ADR_TYPING, v, "no computation function"))
            continue
        args = f.preimage(v)
        expected = arrow(*(G.att(u).type for u in args), H.att(v).type)
        try:
            got = typecheck(ctx, f.cmp[v])
        except IllTyped as exc:
            out.append(Diagnostic(ADR_TYPING, v, f"computation function ill-typed: {exc}"))
            continue
        if got != expected:
            out.append(Diagnostic(ADR_TYPING, v, f"computation function has type {got}, expected {expected}"))
            continue
        try:
            ok = term_equal(ctx, f.applied(v), H.att(v).term)
        except IllTyped as exc:
            out.append(Diagnostic(VALUE, v, str(exc)))
            continue
        if not ok:
            out.append(Diagnostic(VALUE, v, "computed value differs from the target attribute"))
    return out


def is_valid(f: Morphism) -> bool:
    return not validate_morphism(f)


def _same_graph(a: Graph, b: Graph) -> bool:
    return a is b or graph_equal(a, b)


@deep
def compose(g: Morphism, f: Morphism) -> Morphism:
    """``g o f`` for ``f: G -> H`` and ``g: H -> K``.

    The computation function for ``w`` is the literal abstraction
    ``\\x1...xp. t (t1 x11 ... x1n1) ... (tk xk1 ... xknk)`` over the distinct
    antecedents ``u1 < ... < up``; shared antecedents share one binder.
    """
    if not _same_graph(f.target, g.source):
        raise SourceTargetMismatch("f.target is not g.source")
    G, K = f.source, g.target
    str_map = {x: g.str_map[y] for x, y in f.str_map.items() if y in g.str_map}
    adr = frozenset((u, w) for (v, w) in g.adr for u in f.preimage(v))
    ctx_names = set(G.ctx.names()) | set(f.target.ctx.names()) | set(K.ctx.names())
    cmp = {}
    for w in K.elements():
        t = g.cmp[w]
        vs = g.preimage(w)
        ts = [f.cmp[v] for v in vs]
        us = sorted({u for v in vs for u in f.preimage(v)})
        avoid = set(ctx_names) | free_vars(t)
        for ti in ts:
            avoid |= free_vars(ti)
        names = {}
        for u in us:
            x = fresh_name("x", avoid)
            avoid.add(x)
            names[u] = x
        body = app(t, *(app(ti, *(Var(names[u]) for u in f.preimage(v))) for v, ti in zip(vs, ts)))
        for u in reversed(us):
            body = Lam(names[u], G.att(u).type, body)
        cmp[w] = body
    return Morphism(G, K, str_map, adr, cmp)


def identity(g: Graph) -> Morphism:
    """Identity homomorphism and relation with ``\\x:A. x`` everywhere."""
    elems = g.elements()
    return Morphism(
        g,
        g,
        {x: x for x in elems},
        frozenset((x, x) for x in elems),
        {x: Lam("x", g.att(x).type, Var("x")) for x in elems},
    )


@deep
def morphisms_equal(f: Morphism, g: Morphism) -> bool:
    """Equal structure, equal relations, and computation functions that agree
    on the actual antecedent attributes (not necessarily as functions)."""
    if not (_same_graph(f.source, g.source) and _same_graph(f.target, g.target)):
        raise IncomparableMorphisms("morphisms have different endpoints")
    if dict(f.str_map) != dict(g.str_map) or f.adr != g.adr:
        return False
    ctx = f.ctx
    for v in f.target.elements():
        if not term_equal(ctx, f.applied(v), g.applied(v)):
            return False
    return True


def _is_identity_fn(ctx, term, ty) -> bool:
    try:
        return term_equal(ctx, term, Lam("x", ty, Var("x")))
    except IllTyped:
        return False


@deep
def is_injective(f: Morphism) -> bool:
    images = list(f.str_map.values())
    if len(images) != len(set(images)):
        return False
    if f.adr != frozenset(f.str_map.items()):
        return False
    ctx = f.ctx
    for v in f.target.elements():
        pre = f.preimage(v)
        att = f.target.att(v)
        if not pre:
            try:
                if not term_equal(ctx, f.cmp[v], att.term):
                    return False
            except IllTyped:
                return False
        elif not _is_identity_fn(ctx, f.cmp[v], f.source.att(pre[0]).type):
            return False
    return True


@deep
def canonical_retraction(f: Morphism) -> Morphism:
    """Left inverse of a total injective morphism: the inverse on the image,
    undefined elsewhere, identities and constants as computation functions."""
    if not f.is_total() or not is_injective(f):
        raise NotTotalInjective("canonical retraction needs a total injective morphism")
    G, H = f.source, f.target
    inverse = {y: x for x, y in f.str_map.items()}
    cmp = {}
    for x in G.elements():
        cmp[x] = Lam("x", H.att(f.str_map[x]).type, Var("x"))
    return Morphism(H, G, inverse, frozenset(inverse.items()), cmp)
