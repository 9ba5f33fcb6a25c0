"""Terms of the attribute language, substitution and alpha-equivalence."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .types import Arrow, Type

NAT = "Nat"
ZERO = "Zero"
SUCC = "Succ"


class Term:
    __slots__ = ()

    def __str__(self):
        from .syntax import show_term

        return show_term(self)


@dataclass(frozen=True, repr=False)
class Var(Term):
    name: str

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True, repr=False)
class Lam(Term):
    var: str
    ty: Type
    body: Term

    def __repr__(self):
        return f"Lam({self.var!r}, {self.ty!r}, {self.body!r})"


@dataclass(frozen=True, repr=False)
class App(Term):
    fn: Term
    arg: Term

    def __repr__(self):
        return f"App({self.fn!r}, {self.arg!r})"


@dataclass(frozen=True, repr=False)
class Pair(Term):
    left: Term
    right: Term

    def __repr__(self):
        return f"Pair({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Fst(Term):
    arg: Term

    def __repr__(self):
        return f"Fst({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Snd(Term):
    arg: Term

    def __repr__(self):
        return f"Snd({self.arg!r})"


@dataclass(frozen=True, repr=False)
class UnitVal(Term):
    def __repr__(self):
        return "UNIT"


@dataclass(frozen=True, repr=False)
class Con(Term):
    """Saturated constructor instance."""

    ind: str
    name: str
    args: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def __repr__(self):
        n = as_numeral(self)
        if n is not None:
            return f"numeral({n})"
        return f"Con({self.ind!r}, {self.name!r}, {self.args!r})"


@dataclass(frozen=True, repr=False)
class Rec(Term):
    """Recursion operator; ``ty`` is the full eliminator type ``I -> A``."""

    ty: Arrow
    branches: tuple

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(self.branches))

    def __repr__(self):
        return f"Rec({self.ty!r}, {self.branches!r})"


UNIT = UnitVal()


def app(fn: Term, *args: Term) -> Term:
    for a in args:
        fn = App(fn, a)
    return fn


def lam(params, body: Term) -> Term:
    """``lam([("x", A), ("y", B)], body)`` is ``\\x:A. \\y:B. body``."""
    for name, ty in reversed(list(params)):
        body = Lam(name, ty, body)
    return body


def spine(t: Term):
    """Split ``f a1 ... an`` into ``(f, [a1, ..., an])``."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def numeral(n: int) -> Term:
    """Unary Nat numeral ``Succ^n Zero`` (Nat as declared in the prelude)."""
    if n < 0:
        raise ValueError("numerals are non-negative")
    t = Con(NAT, ZERO, ())
    for _ in range(n):
        t = Con(NAT, SUCC, (t,))
    return t


def as_numeral(t: Term):
    """The integer denoted by a closed numeral, else None."""
    n = 0
    while isinstance(t, Con) and t.ind == NAT:
        if t.name == SUCC and len(t.args) == 1:
            n += 1
            t = t.args[0]
        elif t.name == ZERO and not t.args:
            return n
        else:
            return None
    return None


def term_size(t: Term) -> int:
    size = 0
    stack = [t]
    while stack:
        u = stack.pop()
        size += 1
        stack.extend(children(u))
    return size


def children(t: Term):
    if isinstance(t, Lam):
        return (t.body,)
    if isinstance(t, App):
        return (t.fn, t.arg)
    if isinstance(t, Pair):
        return (t.left, t.right)
    if isinstance(t, (Fst, Snd)):
        return (t.arg,)
    if isinstance(t, Con):
        return t.args
    if isinstance(t, Rec):
        return t.branches
    return ()


def free_vars(t: Term) -> frozenset:
    """Free variable names, cached on the term node."""
    cached = getattr(t, "_fv", None)
    if cached is not None:
        return cached
    if isinstance(t, Var):
        fv = frozenset((t.name,))
    elif isinstance(t, Lam):
        fv = free_vars(t.body) - {t.var}
    else:
        kids = children(t)
        if not kids:
            fv = frozenset()
        elif len(kids) == 1:
            fv = free_vars(kids[0])
        else:
            fv = frozenset().union(*(free_vars(k) for k in kids))
    object.__setattr__(t, "_fv", fv)
    return fv


def fresh_name(base: str, avoid) -> str:
    """``base`` with primes appended until it is not in ``avoid``."""
    name = base
    while name in avoid:
        name += "'"
    return name


def rename_bound(t: Lam, new: str) -> Lam:
    return Lam(new, t.ty, _subst(t.body, {t.var: Var(new)}))


def _subst(t: Term, s: Mapping[str, Term]) -> Term:
    if not s:
        return t
    fv = free_vars(t)
    if not any(k in fv for k in s):
        return t
    if isinstance(t, Var):
        return s.get(t.name, t)
    if isinstance(t, Lam):
        inner = {k: v for k, v in s.items() if k != t.var and k in fv}
        if not inner:
            return t
        incoming = frozenset().union(*(free_vars(v) for v in inner.values()))
        var, body = t.var, t.body
        if var in incoming:
            new = fresh_name(var, incoming | free_vars(body) | set(inner))
            inner = dict(inner)
            inner[var] = Var(new)
            var = new
        return Lam(var, t.ty, _subst(body, inner))
    if isinstance(t, App):
        return App(_subst(t.fn, s), _subst(t.arg, s))
    if isinstance(t, Pair):
        return Pair(_subst(t.left, s), _subst(t.right, s))
    if isinstance(t, Fst):
        return Fst(_subst(t.arg, s))
    if isinstance(t, Snd):
        return Snd(_subst(t.arg, s))
    if isinstance(t, Con):
        return Con(t.ind, t.name, tuple(_subst(a, s) for a in t.args))
    if isinstance(t, Rec):
        return Rec(t.ty, tuple(_subst(b, s) for b in t.branches))
    return t


def alpha_eq(s: Term, t: Term) -> bool:
    """Syntactic equality up to renaming of bound variables."""
    return _aeq(s, t, {}, {}, 0)


def _aeq(s, t, ls, rs, depth):
    while True:
        if s is t and not ls and not rs:
            return True
        if type(s) is not type(t):
            return False
        if isinstance(s, Var):
            a, b = ls.get(s.name), rs.get(t.name)
            if a is None and b is None:
                return s.name == t.name
            return a == b
        if isinstance(s, Lam):
            if s.ty != t.ty:
                return False
            ls = {**ls, s.var: depth}
            rs = {**rs, t.var: depth}
            depth += 1
            s, t = s.body, t.body
            continue
        if isinstance(s, Con):
            if s.name != t.name or s.ind != t.ind or len(s.args) != len(t.args):
                return False
            if not s.args:
                return True
            # unary chains (numerals) iterate instead of recursing
            for a, b in zip(s.args[:-1], t.args[:-1]):
                if not _aeq(a, b, ls, rs, depth):
                    return False
            s, t = s.args[-1], t.args[-1]
            continue
        if isinstance(s, Rec):
            if s.ty != t.ty or len(s.branches) != len(t.branches):
                return False
            return all(_aeq(a, b, ls, rs, depth) for a, b in zip(s.branches, t.branches))
        if isinstance(s, App):
            if not _aeq(s.fn, t.fn, ls, rs, depth):
                return False
            s, t = s.arg, t.arg
            continue
        if isinstance(s, Pair):
            if not _aeq(s.left, t.left, ls, rs, depth):
                return False
            s, t = s.right, t.right
            continue
        if isinstance(s, (Fst, Snd)):
            s, t = s.arg, t.arg
            continue
        return True  # UnitVal
