"""Simple types, inductive declarations and typing contexts."""
from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Optional

from .errors import InductiveDefinitionError, UnknownConstructor, UnknownType, IllTyped


class Type:
    __slots__ = ()

    def __str__(self):
        from .syntax import show_type

        return show_type(self)


@dataclass(frozen=True, repr=False)
class Arrow(Type):
    dom: Type
    cod: Type

    def __repr__(self):
        return f"Arrow({self.dom!r}, {self.cod!r})"


@dataclass(frozen=True, repr=False)
class Prod(Type):
    left: Type
    right: Type

    def __repr__(self):
        return f"Prod({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Terminal(Type):
    def __repr__(self):
        return "T"


@dataclass(frozen=True, repr=False)
class Named(Type):
    name: str

    def __repr__(self):
        return f"Named({self.name!r})"


T = Terminal()


def arrow(*types: Type) -> Type:
    """``arrow(A, B, C)`` is ``A -> (B -> C)``."""
    result = types[-1]
    for ty in reversed(types[:-1]):
        result = Arrow(ty, result)
    return result


def product(*types: Type) -> Type:
    """Left-nested product: ``product(A, B, C)`` is ``(A * B) * C``."""
    result = types[0]
    for ty in types[1:]:
        result = Prod(result, ty)
    return result


def uncurry(ty: Type):
    """Split ``A1 -> ... -> An -> B`` into ``((A1, ..., An), B)`` with B not an arrow."""
    doms = []
    while isinstance(ty, Arrow):
        doms.append(ty.dom)
        ty = ty.cod
    return tuple(doms), ty


def mentions(ty: Type, name: str) -> bool:
    if isinstance(ty, Named):
        return ty.name == name
    if isinstance(ty, Arrow):
        return mentions(ty.dom, name) or mentions(ty.cod, name)
    if isinstance(ty, Prod):
        return mentions(ty.left, name) or mentions(ty.right, name)
    return False


@dataclass(frozen=True)
class Constructor:
    name: str
    args: tuple = ()

    @property
    def arity(self):
        return len(self.args)


@dataclass(frozen=True)
class InductiveDef:
    """An inductive type; constructor order fixes Rec branch order."""

    name: str
    constructors: tuple

    def __post_init__(self):
        object.__setattr__(self, "constructors", tuple(self.constructors))

    @property
    def type(self) -> Named:
        return Named(self.name)

    def index(self, cname: str) -> int:
        for k, c in enumerate(self.constructors):
            if c.name == cname:
                return k
        raise UnknownConstructor(cname, self.name)

    def constructor(self, cname: str) -> Constructor:
        return self.constructors[self.index(cname)]

    def recursive_domains(self, argty: Type) -> Optional[tuple]:
        """None for a parameter argument, () for a plain recursive one, and
        the index domains for an infinitary one (``Nat -> self`` gives (Nat,))."""
        if not mentions(argty, self.name):
            return None
        doms, cod = uncurry(argty)
        return doms

    def branch_type(self, ctor: Constructor, target: Type) -> Type:
        """Type of the Rec branch for ``ctor`` when eliminating into ``target``:
        the constructor arguments first, then one recursive result per
        recursive or infinitary argument."""
        parts = list(ctor.args)
        for argty in ctor.args:
            doms = self.recursive_domains(argty)
            if doms is not None:
                parts.append(arrow(*doms, target))
        parts.append(target)
        return arrow(*parts)


class TypeEnv:
    """Immutable collection of inductive declarations.

    Constructor names are unique across the whole environment so that the
    concrete syntax can resolve a bare constructor name.
    """

    __slots__ = ("_types", "_ctors")

    def __init__(self, defs: Iterable[InductiveDef] = ()):
        self._types = {}
        self._ctors = {}
        for d in defs:
            self._add(d)
        self._types = MappingProxyType(self._types)
        self._ctors = MappingProxyType(self._ctors)

    def _add(self, d: InductiveDef):
        if d.name in self._types:
            raise InductiveDefinitionError(f"type {d.name!r} declared twice")
        seen = set()
        for c in d.constructors:
            if c.name in seen:
                raise InductiveDefinitionError(
                    f"constructor {c.name!r} repeated in {d.name}"
                )
            seen.add(c.name)
            if c.name in self._ctors:
                raise InductiveDefinitionError(
                    f"constructor {c.name!r} already belongs to {self._ctors[c.name][0].name}"
                )
            for argty in c.args:
                self._check_argument(d, c, argty)
        self._types[d.name] = d
        for c in d.constructors:
            self._ctors[c.name] = (d, c)

    def _check_argument(self, d, c, argty):
        if not mentions(argty, d.name):
            self._resolve(argty)
            return
        doms, cod = uncurry(argty)
        if cod != d.type or any(mentions(x, d.name) for x in doms):
            raise InductiveDefinitionError(
                f"{d.name} occurs non-strictly-positively in {c.name} : {argty}"
            )
        for x in doms:
            self._resolve(x)

    def _resolve(self, ty):
        if isinstance(ty, Named):
            if ty.name not in self._types:
                raise UnknownType(ty.name)
        elif isinstance(ty, Arrow):
            self._resolve(ty.dom)
            self._resolve(ty.cod)
        elif isinstance(ty, Prod):
            self._resolve(ty.left)
            self._resolve(ty.right)

    def declare(self, d: InductiveDef) -> "TypeEnv":
        return TypeEnv([*self._types.values(), d])

    def check_type(self, ty: Type) -> Type:
        self._resolve(ty)
        return ty

    def lookup(self, name: str) -> InductiveDef:
        try:
            return self._types[name]
        except KeyError:
            raise UnknownType(name) from None

    def constructor(self, cname: str):
        """Return ``(InductiveDef, Constructor)`` for a constructor name."""
        try:
            return self._ctors[cname]
        except KeyError:
            raise UnknownConstructor(cname) from None

    def __contains__(self, name):
        return name in self._types

    def __iter__(self):
        return iter(self._types.values())

    def __len__(self):
        return len(self._types)

    def __repr__(self):
        return f"TypeEnv({list(self._types)})"


EMPTY_ENV = TypeEnv()


@dataclass(frozen=True)
class Context:
    """Typing context: ordered variable assumptions plus the inductive types."""

    env: TypeEnv = EMPTY_ENV
    bindings: tuple = ()

    def __post_init__(self):
        bindings = tuple((str(n), ty) for n, ty in self.bindings)
        object.__setattr__(self, "bindings", bindings)
        names = [n for n, _ in bindings]
        if len(set(names)) != len(names):
            raise IllTyped(f"duplicate variable in context: {names}")
        for _, ty in bindings:
            self.env.check_type(ty)

    def lookup(self, name: str) -> Optional[Type]:
        for n, ty in self.bindings:
            if n == name:
                return ty
        return None

    def extend(self, name: str, ty: Type) -> "Context":
        return Context(self.env, self.bindings + ((name, ty),))

    def names(self) -> frozenset:
        return frozenset(n for n, _ in self.bindings)

    def as_dict(self) -> dict:
        return dict(self.bindings)

    def merge(self, other: "Context") -> "Context":
        """Union of two contexts over the same environment."""
        if other is self or not other.bindings:
            return self
        extra = []
        for n, ty in other.bindings:
            mine = self.lookup(n)
            if mine is None:
                extra.append((n, ty))
            elif mine != ty:
                raise IllTyped(f"variable {n!r} has types {mine} and {ty}")
        env = self.env if len(self.env) >= len(other.env) else other.env
        return Context(env, self.bindings + tuple(extra))

    def without(self, names) -> "Context":
        names = set(names)
        return Context(self.env, tuple(b for b in self.bindings if b[0] not in names))
