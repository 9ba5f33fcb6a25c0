"""Recursive-descent parser for ``.agr`` files.

Decimal literals become Nat numerals, a bare constructor is eta-expanded to
its saturated form, and ``Rec[A -> B]`` takes one branch per constructor of
``A``.  Included files are parsed eagerly so their constructors are known.
"""
from __future__ import annotations

import os
import re
from importlib import resources
from typing import NamedTuple, Optional

from ..lambda_core import (
    T,
    App,
    Arrow,
    Con,
    Fst,
    Lam,
    Named,
    Pair,
    Prod,
    Rec,
    Snd,
    UNIT,
    Var,
    numeral,
)
from ..lambda_core.types import uncurry
from .errors import DSLSyntaxError, IncludeError, UnresolvedReference
from .nodes import (
    CtorDecl,
    Def,
    EdgeDecl,
    GrammarDecl,
    GraphBody,
    GraphDecl,
    Include,
    LayerItem,
    Pos,
    RuleDecl,
    SourceFile,
    TypeDecl,
    VertexDecl,
)

RESERVED = frozenset(
    "include type ind def graph rule grammar vertex edge vars lhs rhs map adr cmp "
    "layer once limit max_steps fuel fst snd unit Rec".split()
)

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+|\#[^\n]*)
  | (?P<num>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<string>"[^"\n]*")
  | (?P<sym>->|[\\:.()<>,\[\]{}=;*])
    """,
    re.VERBOSE,
)


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str, path=None) -> list:
    out = []
    line, start, k = 1, 0, 0
    while k < len(text):
        m = _TOKEN.match(text, k)
        if m is None:
            raise DSLSyntaxError(f"unexpected character {text[k]!r}", line, k - start + 1, path)
        kind = m.lastgroup
        if kind != "ws":
            out.append(Token(kind, m.group(), line, k - start + 1))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            start = k + chunk.rfind("\n") + 1
        k = m.end()
    out.append(Token("eof", "", line, k - start + 1))
    return out


def fixture_dir() -> str:
    return str(resources.files("spograph.frontend") / "fixtures")


class _Scope:
    """Constructor and type tables visible to the parser."""

    def __init__(self):
        self.types = {}  # name -> constructor names
        self.ctors = {}  # name -> (type name, arity)
        self.ctor_types = {}

    def absorb(self, other: "_Scope"):
        self.types.update(other.types)
        self.ctors.update(other.ctors)
        self.ctor_types.update(other.ctor_types)


class Parser:
    def __init__(self, text: str, path: Optional[str] = None, *, _stack=()):
        self.path = path
        self.toks = tokenize(text, path)
        self.k = 0
        self.scope = _Scope()
        self.stack = _stack

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.k]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        return DSLSyntaxError(msg, tok.line, tok.col, self.path)

    def at(self, text) -> bool:
        return self.tok.text == text and self.tok.kind in ("sym", "ident")

    def take(self, text=None, kind=None) -> Token:
        tok = self.tok
        if text is not None and not self.at(text):
            found = tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {found!r}")
        if kind is not None and tok.kind != kind:
            found = tok.text or "end of input"
            raise self.error(f"expected {kind}, found {found!r}")
        self.k += 1
        return tok

    def accept(self, text) -> bool:
        if self.at(text):
            self.k += 1
            return True
        return False

    def name(self) -> str:
        tok = self.take(kind="ident")
        if tok.text in RESERVED:
            raise self.error(f"expected a name, found keyword {tok.text!r}", tok)
        return tok.text

    def integer(self) -> int:
        return int(self.take(kind="num").text)

    def pos(self) -> Pos:
        return Pos(self.tok.line, self.tok.col)

    def semis(self):
        while self.accept(";"):
            pass

    # -- file level
    def parse(self) -> SourceFile:
        decls = []
        self.semis()
        while self.tok.kind != "eof":
            decls.append(self.declaration())
            self.semis()
        return SourceFile(tuple(decls), self.path)

    def declaration(self):
        pos = self.pos()
        head = self.tok
        if self.accept("include"):
            return self.include(pos)
        if self.accept("type"):
            return self.type_decl(pos)
        if self.accept("def"):
            name = self.name()
            self.take(":")
            ty = self.type()
            self.take("=")
            return Def(name, ty, self.term(), pos)
        if self.accept("graph"):
            name = self.name()
            return GraphDecl(name, self.graph_body(), pos)
        if self.accept("rule"):
            return self.rule(pos)
        if self.accept("grammar"):
            return self.grammar(pos)
        raise self.error(f"expected a declaration, found {head.text or 'end of input'!r}")

    def include(self, pos) -> Include:
        tok = self.take(kind="string")
        rel = tok.text[1:-1]
        target = self._resolve_include(rel, tok)
        if target in self.stack:
            raise IncludeError(f"include cycle through {target}")
        with open(target, encoding="utf-8") as fh:
            sub = Parser(fh.read(), target, _stack=self.stack + (target,))
        source = sub.parse()
        self.scope.absorb(sub.scope)
        return Include(rel, source, pos)

    def _resolve_include(self, rel, tok) -> str:
        bases = [os.path.dirname(self.path)] if self.path else [os.getcwd()]
        bases.append(fixture_dir())
        for base in bases:
            cand = os.path.abspath(os.path.join(base, rel))
            if os.path.isfile(cand):
                return cand
        raise UnresolvedReference("include", rel)

    def type_decl(self, pos) -> TypeDecl:
        name_tok = self.tok
        name = self.name()
        if name == "T":
            raise self.error("T is the terminal type", name_tok)
        self.take("=")
        self.take("ind")
        self.take("{")
        ctors = []
        self.semis()
        while not self.at("}"):
            ctok = self.tok
            cname = self.name()
            self.take(":")
            cty = self.type()
            doms, cod = uncurry(cty)
            if cod != Named(name):
                raise self.error(f"constructor {cname} must build {name}", ctok)
            ctors.append((CtorDecl(cname, cty), len(doms)))
            self.semis()
        self.take("}")
        self.scope.types[name] = tuple(c.name for c, _ in ctors)
        for c, arity in ctors:
            self.scope.ctors[c.name] = (name, arity)
            self.scope.ctor_types[c.name] = c.type
        return TypeDecl(name, tuple(c for c, _ in ctors), pos)

    # -- graphs and rules
    def graph_body(self) -> GraphBody:
        self.take("{")
        items = []
        self.semis()
        while not self.at("}"):
            pos = self.pos()
            if self.accept("vertex"):
                vid = self.integer()
                ty, term = self.attribute()
                items.append(VertexDecl(vid, ty, term, pos))
            elif self.accept("edge"):
                eid = self.integer()
                self.take("(")
                src = self.integer()
                self.take("->")
                tgt = self.integer()
                self.take(")")
                ty, term = self.attribute()
                items.append(EdgeDecl(eid, src, tgt, ty, term, pos))
            else:
                raise self.error(f"expected 'vertex' or 'edge', found {self.tok.text!r}")
            self.semis()
        self.take("}")
        return GraphBody(tuple(items))

    def attribute(self):
        ty = term = None
        if self.accept(":"):
            ty = self.type()
        if self.accept("="):
            term = self.term()
        return ty, term

    def pairs(self):
        self.take("{")
        out = []
        self.semis()
        while not self.at("}"):
            a = self.integer()
            self.take("->")
            out.append((a, self.integer()))
            if not self.accept(","):
                self.semis()
        self.take("}")
        return tuple(out)

    def rule(self, pos) -> RuleDecl:
        name = self.name()
        self.take("{")
        parts = {}
        self.semis()
        while not self.at("}"):
            tok = self.tok
            key = tok.text
            if key in parts:
                raise self.error(f"block {key!r} repeated in rule {name}", tok)
            if self.accept("vars"):
                parts[key] = self.var_block()
            elif self.accept("lhs") or self.accept("rhs"):
                parts[key] = self.graph_body()
            elif self.accept("map") or self.accept("adr"):
                parts[key] = self.pairs()
            elif self.accept("cmp"):
                parts[key] = self.cmp_block()
            else:
                raise self.error(f"unexpected {key!r} in rule {name}")
            self.semis()
        end = self.take("}")
        for req in ("lhs", "rhs"):
            if req not in parts:
                raise self.error(f"rule {name} has no {req} block", end)
        return RuleDecl(
            name,
            parts.get("vars", ()),
            parts["lhs"],
            parts["rhs"],
            parts.get("map", ()),
            parts.get("adr"),
            parts.get("cmp", ()),
            pos,
        )

    def var_block(self):
        self.take("{")
        out = []
        self.semis()
        while not self.at("}"):
            n = self.name()
            self.take(":")
            out.append((n, self.type()))
            if not self.accept(","):
                self.semis()
        self.take("}")
        return tuple(out)

    def cmp_block(self):
        self.take("{")
        out = []
        self.semis()
        while not self.at("}"):
            v = self.integer()
            self.take("=")
            out.append((v, self.term()))
            if not self.at("}"):
                self.take(";")
                self.semis()
        self.take("}")
        return tuple(out)

    def grammar(self, pos) -> GrammarDecl:
        name = self.name()
        self.take("{")
        layers, max_steps, fuel = [], None, None
        self.semis()
        while not self.at("}"):
            if self.accept("layer"):
                num = self.integer()
                self.take("{")
                items = []
                self.semis()
                while not self.at("}"):
                    bound = None
                    if self.accept("once"):
                        bound = 1
                    elif self.accept("limit"):
                        bound = self.integer()
                    items.append(LayerItem(self.name(), bound))
                    if not self.accept(","):
                        self.semis()
                self.take("}")
                layers.append((num, tuple(items)))
            elif self.accept("max_steps"):
                max_steps = self.integer()
            elif self.accept("fuel"):
                fuel = self.integer()
            else:
                raise self.error(f"unexpected {self.tok.text!r} in grammar {name}")
            self.semis()
        self.take("}")
        return GrammarDecl(name, tuple(layers), max_steps, fuel, pos)

    # -- types
    def type(self):
        left = self.product_type()
        if self.accept("->"):
            return Arrow(left, self.type())
        return left

    def product_type(self):
        ty = self.atom_type()
        while self.accept("*"):
            ty = Prod(ty, self.atom_type())
        return ty

    def atom_type(self):
        if self.accept("("):
            ty = self.type()
            self.take(")")
            return ty
        tok = self.tok
        n = self.name()
        if n == "T":
            return T
        if n[:1].islower() or n == "_":
            raise self.error(f"type names are capitalized, found {n!r}", tok)
        return Named(n)

    # -- terms
    _STOP = frozenset([";", "}", ")", ",", ">", "]", "=", "->", ":", ".", "*", "{", "["])

    def starts_atom(self) -> bool:
        tok = self.tok
        if tok.kind == "num":
            return True
        if tok.kind == "ident":
            return tok.text not in RESERVED or tok.text in ("unit", "Rec")
        return tok.text in ("(", "<")

    def term(self):
        if self.at("\\"):
            return self.lam()
        return self.application()

    def lam(self):
        self.take("\\")
        var = self.name()
        self.take(":")
        ty = self.type()
        self.take(".")
        return Lam(var, ty, self.term())

    def application(self):
        if self.at("fst") or self.at("snd"):
            kind = Fst if self.take().text == "fst" else Snd
            head = kind(self.atom())
            args = []
        else:
            tok = self.tok
            if not self.starts_atom():
                raise self.error(f"expected a term, found {tok.text or 'end of input'!r}")
            if tok.kind == "ident" and tok.text in self.scope.ctors:
                self.k += 1
                head = None
                ctor = tok.text
            else:
                head = self.atom()
            args = []
        while True:
            if self.starts_atom():
                args.append(self.atom())
            elif self.at("\\"):
                args.append(self.lam())
                break
            else:
                break
        if head is None:
            return self.saturate(ctor, args)
        for a in args:
            head = App(head, a)
        return head

    def saturate(self, ctor, args):
        ind, arity = self.scope.ctors[ctor]
        if len(args) >= arity:
            t = Con(ind, ctor, tuple(args[:arity]))
        else:
            given = list(args)
            doms, _ = uncurry(self._ctor_type(ctor))
            names = [f"_c{j}" for j in range(len(given), arity)]
            t = Con(ind, ctor, tuple(given + [Var(n) for n in names]))
            for n, ty in reversed(list(zip(names, doms[len(given):]))):
                t = Lam(n, ty, t)
            return t
        for a in args[arity:]:
            t = App(t, a)
        return t

    def _ctor_type(self, ctor):
        return self.scope.ctor_types[ctor]

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.k += 1
            return numeral(int(tok.text))
        if self.accept("("):
            t = self.term()
            self.take(")")
            return t
        if self.accept("<"):
            a = self.term()
            self.take(",")
            b = self.term()
            self.take(">")
            return Pair(a, b)
        if self.accept("unit"):
            return UNIT
        if self.accept("Rec"):
            return self.rec(tok)
        if tok.kind == "ident" and tok.text in self.scope.ctors:
            self.k += 1
            return self.saturate(tok.text, [])
        return Var(self.name())

    def rec(self, tok):
        self.take("[")
        ty = self.type()
        self.take("]")
        if not isinstance(ty, Arrow) or not isinstance(ty.dom, Named):
            raise self.error("Rec needs an annotation of the form I -> A", tok)
        ind = ty.dom.name
        if ind not in self.scope.types:
            raise UnresolvedReference("type", ind)
        branches = []
        for _ in self.scope.types[ind]:
            self.take("(")
            branches.append(self.term())
            self.take(")")
        return Rec(ty, tuple(branches))


def parse_source(text: str, path: Optional[str] = None) -> SourceFile:
    if path is not None:
        path = os.path.abspath(path)
    return Parser(text, path, _stack=(path,) if path else ()).parse()


def parse_file(path: str) -> SourceFile:
    with open(path, encoding="utf-8") as fh:
        return parse_source(fh.read(), path)
