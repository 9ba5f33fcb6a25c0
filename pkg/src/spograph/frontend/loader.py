"""Elaboration: resolve names and build the core objects of a parsed file."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from .._deep import deep
from ..engine import Grammar, LayerEntry, make_grammar
from ..graph_model import Attribute, Graph, build_graph
from ..lambda_core import (
    T,
    UNIT,
    App,
    Arrow,
    Con,
    Constructor,
    Context,
    Fst,
    InductiveDef,
    Lam,
    Named,
    Pair,
    Prod,
    Rec,
    Snd,
    TypeEnv,
    TypeMismatch,
    UnknownType,
    free_vars,
    substitute,
    typecheck,
)
from ..lambda_core.types import uncurry
from ..rewrite import RuleScheme, make_rule
from .errors import DuplicateName, FrontendError, UnresolvedReference
from .nodes import Def, EdgeDecl, GrammarDecl, GraphBody, GraphDecl, Include, RuleDecl, SourceFile, TypeDecl
from .parser import parse_file, parse_source


@dataclass
class Module:
    """Everything a file declares, in declaration order."""

    source: SourceFile
    env: TypeEnv
    defs: dict = field(default_factory=dict)  # name -> Attribute
    graphs: dict = field(default_factory=dict)
    rules: dict = field(default_factory=dict)
    grammars: dict = field(default_factory=dict)

    @property
    def ctx(self) -> Context:
        return Context(self.env)

    def _get(self, table, kind, name):
        try:
            return table[name]
        except KeyError:
            raise UnresolvedReference(kind, name) from None

    def graph(self, name) -> Graph:
        return self._get(self.graphs, "graph", name)

    def rule(self, name) -> RuleScheme:
        return self._get(self.rules, "rule", name)

    def grammar(self, name) -> Grammar:
        return self._get(self.grammars, "grammar", name)

    def term(self, name) -> Attribute:
        return self._get(self.defs, "term", name)


def flatten(source: SourceFile, seen=None) -> list:
    """Declarations with includes expanded; a file included twice counts once."""
    seen = set() if seen is None else seen
    out = []
    for d in source.decls:
        if isinstance(d, Include):
            key = d.source.path
            if key in seen:
                continue
            seen.add(key)
            out.extend(flatten(d.source, seen))
        else:
            out.append(d)
    return out


def _types_in(ty):
    stack = [ty]
    while stack:
        t = stack.pop()
        if isinstance(t, Named):
            yield t.name
        elif isinstance(t, Arrow):
            stack += [t.dom, t.cod]
        elif isinstance(t, Prod):
            stack += [t.left, t.right]


def _term_types(t):
    stack = [t]
    while stack:
        t = stack.pop()
        if isinstance(t, Lam):
            yield from _types_in(t.ty)
            stack.append(t.body)
        elif isinstance(t, App):
            stack += [t.fn, t.arg]
        elif isinstance(t, Pair):
            stack += [t.left, t.right]
        elif isinstance(t, (Fst, Snd)):
            stack.append(t.arg)
        elif isinstance(t, Con):
            yield t.ind
            stack += list(t.args)
        elif isinstance(t, Rec):
            yield from _types_in(t.ty)
            stack += list(t.branches)


class _Elaborator:
    def __init__(self, source: SourceFile):
        self.source = source
        self.env = TypeEnv()
        self.module = None

    def check_type(self, ty, where):
        for n in _types_in(ty):
            if n not in self.env:
                raise UnresolvedReference("type", n, where)
        return ty

    def resolve(self, term, where, bound=()):
        """Inline definitions and report names that are neither defined nor bound."""
        for n in _term_types(term):
            if n not in self.env:
                raise UnresolvedReference("type", n, where)
        names = free_vars(term)
        defs = self.module.defs
        missing = sorted(n for n in names if n not in defs and n not in bound)
        if missing:
            raise UnresolvedReference("name", missing[0], where)
        inline = {n: defs[n].term for n in names if n in defs and n not in bound}
        return substitute(term, inline) if inline else term

    def run(self) -> Module:
        decls = flatten(self.source)
        seen = {}
        for d in decls:
            if isinstance(d, TypeDecl):
                kind = "type"
            elif isinstance(d, Def):
                kind = "term"
            elif isinstance(d, GraphDecl):
                kind = "graph"
            elif isinstance(d, RuleDecl):
                kind = "rule"
            else:
                kind = "grammar"
            if (kind, d.name) in seen:
                raise DuplicateName(kind, d.name)
            seen[kind, d.name] = d
        self.module = Module(self.source, self.env)
        for d in decls:
            if isinstance(d, TypeDecl):
                self.type_decl(d)
            elif isinstance(d, Def):
                self.definition(d)
            elif isinstance(d, GraphDecl):
                ctx = Context(self.env)
                self.module.graphs[d.name] = self.graph(d.body, ctx, f"graph {d.name}")
            elif isinstance(d, RuleDecl):
                self.module.rules[d.name] = self.rule(d)
            else:
                self.module.grammars[d.name] = self.grammar(d)
        self.module.env = self.env
        return self.module

    def type_decl(self, d: TypeDecl):
        ctors = [Constructor(c.name, tuple(uncurry(c.type)[0])) for c in d.constructors]
        try:
            self.env = self.env.declare(InductiveDef(d.name, ctors))
        except UnknownType as exc:
            raise UnresolvedReference("type", exc.name, f"type {d.name}") from None

    def definition(self, d: Def):
        where = f"def {d.name}"
        self.check_type(d.type, where)
        term = self.resolve(d.term, where)
        ty = typecheck(Context(self.env), term)
        if ty != d.type:
            raise TypeMismatch(d.type, ty, term, ())
        self.module.defs[d.name] = Attribute(term, d.type)

    def graph(self, body: GraphBody, ctx: Context, where, bound=()) -> Graph:
        vs, es = [], []
        for item in body.elements:
            label = f"{where}, element {item.id}"
            ty = None if item.type is None else self.check_type(item.type, label)
            if item.term is None:
                if ty not in (None, T):
                    raise FrontendError(f"{label}: an attribute of type {ty} needs a term")
                term, ty = UNIT, T
            else:
                term = self.resolve(item.term, label, bound)
                if ty is None:
                    ty = typecheck(ctx, term)
            if isinstance(item, EdgeDecl):
                es.append((item.id, item.src, item.tgt, term, ty))
            else:
                vs.append((item.id, term, ty))
        return build_graph(vs, es, ctx)

    def rule(self, d: RuleDecl) -> RuleScheme:
        where = f"rule {d.name}"
        ctx = Context(self.env)
        names = set()
        for n, ty in d.vars:
            if n in self.module.defs:
                raise DuplicateName("variable (shadows a definition)", n)
            if n in names:
                raise DuplicateName("variable", n)
            names.add(n)
            ctx = ctx.extend(n, self.check_type(ty, where))
        L = self.graph(d.lhs, ctx, f"{where} lhs", names)
        R = self.graph(d.rhs, ctx, f"{where} rhs", names)
        cmp = {v: self.resolve(t, f"{where} cmp {v}", names) for v, t in d.cmp}
        for v in cmp:
            if v not in R:
                raise UnresolvedReference("rhs element", v, where)
        for a, b in d.map:
            if a not in L:
                raise UnresolvedReference("lhs element", a, where)
            if b not in R:
                raise UnresolvedReference("rhs element", b, where)
        return make_rule(d.name, L, R, dict(d.map), d.adr, cmp)

    def grammar(self, d: GrammarDecl) -> Grammar:
        layers = {}
        for num, items in d.layers:
            entries = layers.setdefault(num, [])
            for it in items:
                if it.rule not in self.module.rules:
                    raise UnresolvedReference("rule", it.rule, f"grammar {d.name}")
                entries.append(LayerEntry(self.module.rules[it.rule], it.bound))
        kwargs = {}
        if d.max_steps is not None:
            kwargs["max_steps"] = d.max_steps
        if d.fuel is not None:
            kwargs["fuel"] = d.fuel
        return make_grammar(d.name, layers, **kwargs)


@deep
def load(source: SourceFile) -> Module:
    return _Elaborator(source).run()


def load_text(text: str, path: Optional[str] = None) -> Module:
    return load(parse_source(text, path))


def load_file(path: str) -> Module:
    return load(parse_file(path))
