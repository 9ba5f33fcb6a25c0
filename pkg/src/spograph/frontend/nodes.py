"""Abstract form of a source file.

Terms and types are the core calculus objects; names of definitions stay as
free variables until elaboration.  Source positions are kept but excluded
from equality, so re-parsing printed output compares equal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..lambda_core import Term, Type


@dataclass(frozen=True)
class Pos:
    line: int
    col: int


_pos = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Include:
    path: str
    source: "SourceFile" = field(compare=False, repr=False, default=None)
    pos: Optional[Pos] = _pos


@dataclass(frozen=True)
class CtorDecl:
    name: str
    type: Type


@dataclass(frozen=True)
class TypeDecl:
    name: str
    constructors: tuple
    pos: Optional[Pos] = _pos


@dataclass(frozen=True)
class Def:
    name: str
    type: Type
    term: Term
    pos: Optional[Pos] = _pos


@dataclass(frozen=True)
class VertexDecl:
    id: int
    type: Optional[Type]
    term: Optional[Term]
    pos: Optional[Pos] = _pos


@dataclass(frozen=True)
class EdgeDecl:
    id: int
    src: int
    tgt: int
    type: Optional[Type]
    term: Optional[Term]
    pos: Optional[Pos] = _pos


@dataclass(frozen=True)
class GraphBody:
    elements: tuple


@dataclass(frozen=True)
class GraphDecl:
    name: str
    body: GraphBody
    pos: Optional[Pos] = _pos


@dataclass(frozen=True)
class RuleDecl:
    name: str
    vars: tuple  # ((name, type), ...)
    lhs: GraphBody
    rhs: GraphBody
    map: tuple  # ((l, r), ...)
    adr: Optional[tuple]
    cmp: tuple  # ((r, term), ...)
    pos: Optional[Pos] = _pos


@dataclass(frozen=True)
class LayerItem:
    rule: str
    bound: Optional[int] = None


@dataclass(frozen=True)
class GrammarDecl:
    name: str
    layers: tuple  # ((number, (LayerItem, ...)), ...)
    max_steps: Optional[int] = None
    fuel: Optional[int] = None
    pos: Optional[Pos] = _pos


@dataclass(frozen=True)
class SourceFile:
    decls: tuple = ()
    path: Optional[str] = field(default=None, compare=False)

    def of_kind(self, kind) -> list:
        return [d for d in self.decls if isinstance(d, kind)]
